"""Assembly plans: blocks, gluings, residual boundary; composition and file I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, NamedTuple

from ..bundles import (
    BoundarySlot,
    GlueWitness,
    ManifoldLabel,
    SurfaceBundle,
    label_from_dict,
    match_gluing,
    witness_from_dict,
)
from ..mcg import ChartError, SurfaceChart, builtin_chart
from ..sl2z import MalformedInput
from .blocks import Block

__all__ = [
    "SlotRef",
    "Gluing",
    "Plan",
    "PlanFormatError",
    "NotResidual",
    "compose",
    "labels_equal",
    "plan_to_dict",
    "plan_from_dict",
    "dumps",
    "loads",
    "save_plan",
    "load_plan",
]


class PlanFormatError(ValueError):
    pass


class NotResidual(ValueError):
    pass


class SlotRef(NamedTuple):
    block: str
    slot: str

    def __str__(self) -> str:
        return f"{self.block}:{self.slot}"


@dataclass(frozen=True)
class Gluing:
    a: SlotRef
    b: SlotRef
    witness: GlueWitness


@dataclass(frozen=True)
class Plan:
    """A certificate for an assembled 4-manifold.

    ``target[i]`` is the declared boundary label for ``residual[i]``; a residual
    slot whose physical label differs from its target needs an entry in
    ``relabel`` justifying the change.
    """

    blocks: tuple[Block, ...] = ()
    gluings: tuple[Gluing, ...] = ()
    residual: tuple[SlotRef, ...] = ()
    target: tuple[ManifoldLabel, ...] = ()
    relabel: Mapping[SlotRef, GlueWitness] = field(default_factory=dict)
    charts: Mapping[str, SurfaceChart] = field(default_factory=dict)

    def __post_init__(self) -> None:
        # built-in charts are implied; keep only charts that must travel with the plan
        custom = {n: c for n, c in self.charts.items() if not _is_builtin(c)}
        object.__setattr__(self, "charts", custom)

    def block(self, block_id: str) -> Block:
        for b in self.blocks:
            if b.id == block_id:
                return b
        raise KeyError(f"no block {block_id!r}")

    def slot_label(self, ref: SlotRef) -> ManifoldLabel:
        return self.block(ref.block).slot(ref.slot).label

    def block_count(self) -> int:
        """Number of blocks with every SubPlanRef expanded."""
        n = 0
        for b in self.blocks:
            n += b.params["plan"].block_count() if b.kind == "SubPlanRef" else 1
        return n

    def slot_count(self) -> int:
        return sum(len(b.slots) for b in self.blocks)

    def kinds(self) -> list[str]:
        return [b.kind for b in self.blocks]


def _is_builtin(chart: SurfaceChart) -> bool:
    b = builtin_chart(chart.name)
    return b is not None and b.to_dict() == chart.to_dict()


def labels_equal(x: ManifoldLabel, y: ManifoldLabel) -> bool:
    if isinstance(x, SurfaceBundle) and isinstance(y, SurfaceBundle):
        return x.chart == y.chart and x.word.merged() == y.word.merged()
    return x == y


def single_block_plan(block: Block, charts: Mapping[str, SurfaceChart] | None = None) -> Plan:
    refs = tuple(SlotRef(block.id, s.slot_id) for s in block.slots)
    return Plan(
        blocks=(block,),
        residual=refs,
        target=tuple(s.label for s in block.slots),
        charts=dict(charts or {}),
    )


def _ns(prefix: str | None, block_id: str) -> str:
    return block_id if prefix is None else f"{prefix}.{block_id}"


def compose(
    p1: Plan,
    p2: Plan,
    pairing: Iterable[tuple[SlotRef, SlotRef, GlueWitness]] = (),
    prefixes: tuple[str | None, str | None] = ("p1", "p2"),
) -> Plan:
    """Disjoint union of two plans, glued along the given residual pairs.

    Block ids are namespaced with ``prefixes``; the witness of every new gluing
    is checked before the plan is built.
    """
    pre1, pre2 = prefixes
    if pre1 == pre2 and pre1 is not None:
        raise ValueError("the two prefixes must differ")
    charts = {**p1.charts, **p2.charts}
    pairing = list(pairing)
    used1: set[SlotRef] = set()
    used2: set[SlotRef] = set()
    new_gluings = []
    for r1, r2, w in pairing:
        r1, r2 = SlotRef(*r1), SlotRef(*r2)
        if r1 not in p1.residual or r1 in used1:
            raise NotResidual(f"{r1} is not an available residual slot of the first plan")
        if r2 not in p2.residual or r2 in used2:
            raise NotResidual(f"{r2} is not an available residual slot of the second plan")
        match_gluing(p1.slot_label(r1), p2.slot_label(r2), w, charts)
        used1.add(r1)
        used2.add(r2)
        new_gluings.append(Gluing(SlotRef(_ns(pre1, r1.block), r1.slot), SlotRef(_ns(pre2, r2.block), r2.slot), w))

    def carry(p: Plan, pre: str | None, used: set[SlotRef]):
        if len(p.residual) != len(p.target):
            raise ValueError("plan residual and target lists differ in length")
        blocks = tuple(b.renamed(_ns(pre, b.id)) for b in p.blocks)
        gluings = tuple(
            Gluing(SlotRef(_ns(pre, g.a.block), g.a.slot), SlotRef(_ns(pre, g.b.block), g.b.slot), g.witness)
            for g in p.gluings
        )
        residual, target = [], []
        for r, t in zip(p.residual, p.target):
            if r not in used:
                residual.append(SlotRef(_ns(pre, r.block), r.slot))
                target.append(t)
        relabel = {SlotRef(_ns(pre, r.block), r.slot): w for r, w in p.relabel.items() if r not in used}
        return blocks, gluings, residual, target, relabel

    b1, g1, res1, t1, rl1 = carry(p1, pre1, used1)
    b2, g2, res2, t2, rl2 = carry(p2, pre2, used2)
    ids = [b.id for b in b1 + b2]
    if len(set(ids)) != len(ids):
        raise ValueError("block ids collide after namespacing")
    return Plan(
        blocks=b1 + b2,
        gluings=g1 + g2 + tuple(new_gluings),
        residual=tuple(res1 + res2),
        target=tuple(t1 + t2),
        relabel={**rl1, **rl2},
        charts=charts,
    )


# ---------------------------------------------------------------- serialization


def _block_to_dict(b: Block) -> dict:
    params = dict(b.params)
    if b.kind == "SubPlanRef":
        params["plan"] = plan_to_dict(params["plan"])
    return {
        "id": b.id,
        "kind": b.kind,
        "params": params,
        "slots": [{"id": s.slot_id, "label": s.label.to_dict()} for s in b.slots],
    }


def _ref_dict(r: SlotRef) -> dict:
    return {"block": r.block, "slot": r.slot}


def plan_to_dict(p: Plan) -> dict:
    doc: dict[str, Any] = {
        "blocks": [_block_to_dict(b) for b in p.blocks],
        "gluings": [
            {
                "a_block": g.a.block,
                "a_slot": g.a.slot,
                "b_block": g.b.block,
                "b_slot": g.b.slot,
                "witness": g.witness.to_dict(),
            }
            for g in p.gluings
        ],
        "residual": [_ref_dict(r) for r in p.residual],
        "target": [t.to_dict() for t in p.target],
        "relabel_witnesses": [
            {**_ref_dict(r), "witness": w.to_dict()}
            for r, w in sorted(p.relabel.items())
        ],
    }
    if p.charts:
        doc["charts"] = {n: c.to_dict() for n, c in sorted(p.charts.items())}
    return doc


def _ref(doc: Mapping, block_key: str = "block", slot_key: str = "slot") -> SlotRef:
    block, slot = doc[block_key], doc[slot_key]
    if not isinstance(block, str) or not isinstance(slot, str):
        raise PlanFormatError(f"slot reference must be strings, got {block!r}, {slot!r}")
    return SlotRef(block, slot)


def plan_from_dict(doc: Mapping) -> Plan:
    """Parse a plan document; raises :class:`PlanFormatError` on malformed input."""
    try:
        charts = {n: SurfaceChart.from_dict(c) for n, c in doc.get("charts", {}).items()}
        blocks = []
        for bd in doc["blocks"]:
            params = dict(bd.get("params", {}))
            if bd["kind"] == "SubPlanRef":
                params["plan"] = plan_from_dict(params["plan"])
            slots = tuple(BoundarySlot(str(s["id"]), label_from_dict(s["label"])) for s in bd["slots"])
            blocks.append(Block(str(bd["id"]), str(bd["kind"]), params, slots))
        gluings = tuple(
            Gluing(
                _ref(g, "a_block", "a_slot"),
                _ref(g, "b_block", "b_slot"),
                witness_from_dict(g["witness"]),
            )
            for g in doc["gluings"]
        )
        residual = tuple(_ref(r) for r in doc["residual"])
        target = tuple(label_from_dict(t) for t in doc["target"])
        relabel = {_ref(r): witness_from_dict(r["witness"]) for r in doc.get("relabel_witnesses", [])}
    except PlanFormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError, ChartError, MalformedInput) as exc:
        raise PlanFormatError(f"malformed plan: {type(exc).__name__}: {exc}") from None
    return Plan(tuple(blocks), gluings, residual, target, relabel, charts)


def dumps(p: Plan) -> str:
    return json.dumps(plan_to_dict(p), indent=1, sort_keys=True) + "\n"


def loads(text: str) -> Plan:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlanFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise PlanFormatError("plan document must be an object")
    return plan_from_dict(doc)


def save_plan(p: Plan, path: str | Path) -> None:
    Path(path).write_text(dumps(p), encoding="utf-8")


def load_plan(path: str | Path) -> Plan:
    return loads(Path(path).read_text(encoding="utf-8"))
