"""Plan generators for the inductive constructions.

* :func:`gen_lantern_assembly` -- seven three-boundary pieces over the genus-3
  lantern surface, glued so that only ``T2(L^chirality)`` is left.
* :func:`plan_torus_bundle` -- induction on the number of twists of a torus
  monodromy, peeling off the last letter.
* :func:`plan_surface_bundle` -- the same induction for surface bundles of
  genus at least two.
* :func:`plan_cobordism` -- chains of split-and-reglue moves, closed off by a
  product cap or bridged to a second chain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..bundles import (
    ConjugateWord,
    GlueWitness,
    HomologyConjugate,
    InverseExact,
    ManifoldLabel,
    Opaque,
    OpaqueMatch,
    ProductBundle,
    ReducesToInverse,
    SurfaceBundle,
    TorusBundle,
    resolve_chart,
)
from ..mcg import SurfaceChart, TwistWord, lantern_chart, symplectic_carrying
from ..sl2z import GEN_L, Mat2, TorusTwistWord, eval_torus_word, factor, single_twist_class
from .blocks import (
    cap_bridge_block,
    cap_product_block,
    lantern_piece_block,
    reglue_opaque_block,
    reglue_surface_block,
    reglue_surface_factor_block,
    reglue_torus_block,
)
from .plan import Gluing, Plan, SlotRef, compose, single_block_plan

__all__ = [
    "EmptyWord",
    "MalformedSequence",
    "MoveStep",
    "MoveSequence",
    "gen_lantern_assembly",
    "plan_torus_bundle",
    "plan_surface_bundle",
    "plan_cobordism",
    "load_sequence",
]


class EmptyWord(ValueError):
    pass


class MalformedSequence(ValueError):
    pass


# ---------------------------------------------------------------- lantern assembly


def _lantern_conjugators() -> tuple[HomologyConjugate, HomologyConjugate]:
    chart = lantern_chart()
    h = {n: c.homology for n, c in chart.curves.items()}
    # m T_c m^-1 = T_{c m^-1}, so carrying e_i onto the lantern curve conjugates correctly
    return (
        HomologyConjugate(symplectic_carrying(h["2"], h["beta"])),
        HomologyConjugate(symplectic_carrying(h["1"], h["gamma"])),
    )


def gen_lantern_assembly(chirality: int = 1) -> Plan:
    """Closed-up lantern construction with boundary ``T2(L^chirality)``."""
    if chirality not in (1, -1):
        raise ValueError("chirality must be +1 or -1")
    blocks = tuple(lantern_piece_block(f"W{i}", i, chirality) for i in range(7, 0, -1))
    m_beta, m_gamma = _lantern_conjugators()
    gl = []
    for i in range(6, 0, -1):
        gl.append(Gluing(SlotRef(f"W{i + 1}", "next"), SlotRef(f"W{i}", "prev"), InverseExact()))
    gl += [
        Gluing(SlotRef("W6", "aux"), SlotRef("W5", "aux"), InverseExact()),
        Gluing(SlotRef("W4", "aux"), SlotRef("W3", "aux"), m_beta),
        Gluing(SlotRef("W2", "aux"), SlotRef("W1", "aux"), m_gamma),
        Gluing(SlotRef("W7", "prev"), SlotRef("W1", "next"), ReducesToInverse()),
    ]
    return Plan(
        blocks=blocks,
        gluings=tuple(gl),
        residual=(SlotRef("W7", "aux"),),
        target=(TorusBundle(GEN_L**chirality),),
    )


# ---------------------------------------------------------------- helpers


def _cap_witness(plan: Plan) -> GlueWitness:
    """Witness for gluing a slot to the single residual slot of a capping plan.

    The capping plan was built for the inverse of ``slot_label``; when its
    residual carries a relabel witness ``r`` (target = r.phys.r^-1), the
    physical slot is reached by conjugating with ``r^-1``.
    """
    (ref,) = plan.residual
    w = plan.relabel.get(ref)
    if w is None:
        return InverseExact()
    if isinstance(w, ConjugateWord):
        return ConjugateWord(w.word.inverse())
    raise ValueError(f"cannot route a gluing through a {type(w).__name__} relabel")


def _attach(base: Plan, slot: SlotRef, cap: Plan, prefix: str) -> Plan:
    (cap_ref,) = cap.residual
    w = _cap_witness(cap)
    return compose(base, cap, [(slot, cap_ref, w)], prefixes=(None, prefix))


def _retarget(plan: Plan, label: ManifoldLabel) -> Plan:
    return Plan(plan.blocks, plan.gluings, plan.residual, (label,), plan.relabel, plan.charts)


# ---------------------------------------------------------------- torus bundles


def _torus_plan(letters: Sequence[tuple[str, int]]) -> Plan:
    if len(letters) == 1:
        letter = letters[0]
        chirality, conj = single_twist_class(letter)
        plan = gen_lantern_assembly(chirality)
        target = TorusBundle(eval_torus_word([letter]))
        relabel = {}
        if len(conj):
            # conj.letter.conj^-1 = L^chi  =>  letter = conj^-1 . L^chi . conj
            relabel = {plan.residual[0]: ConjugateWord(conj.inverse())}
        return Plan(plan.blocks, plan.gluings, plan.residual, (target,), relabel, plan.charts)

    *rest, last = letters
    tau, sigma = eval_torus_word(rest), eval_torus_word([last])
    top = single_block_plan(reglue_torus_block("reglue", tau, sigma))
    inv_last = (last[0], -last[1])
    plan = _attach(top, SlotRef("reglue", "b"), _torus_plan([inv_last]), "sigma")
    plan = _attach(plan, SlotRef("reglue", "a_inv"), _torus_plan(rest), "tau")
    return plan


def plan_torus_bundle(w: TorusTwistWord | Mat2 | str) -> Plan:
    """Plan whose single residual slot bounds ``T2(eval(w))``.

    A matrix is factored first; exponents are split into single twists.
    """
    if isinstance(w, str):
        w = TorusTwistWord.parse(w)
    if isinstance(w, Mat2):
        w = factor(w)
    letters = w.single_letters()
    if not letters:
        raise EmptyWord("a torus plan needs at least one twist; cap identity bundles with CapProduct")
    plan = _torus_plan(letters)
    return _retarget(plan, TorusBundle(eval_torus_word(w)))


# ---------------------------------------------------------------- surface bundles


def _surface_plan(chart: SurfaceChart, letters: Sequence[tuple[str, int]]) -> Plan:
    charts = {chart.name: chart}
    if len(letters) == 1:
        curve, e = letters[0]
        top = single_block_plan(reglue_surface_block("reglue", chart, TwistWord(), curve, e), charts)
        plan = compose(
            top,
            single_block_plan(cap_product_block("cap", chart.genus)),
            [(SlotRef("reglue", "base_inv"), SlotRef("cap", "cap"), InverseExact())],
            prefixes=(None, "fiber"),
        )
        return _attach(plan, SlotRef("reglue", "torus"), _torus_plan([("L", -e)]), "torus")

    *rest, last = letters
    left, right = TwistWord(tuple(rest)), TwistWord((last,))
    top = single_block_plan(reglue_surface_factor_block("reglue", chart, left, right), charts)
    inv_last = (last[0], -last[1])
    plan = _attach(top, SlotRef("reglue", "right"), _surface_plan(chart, [inv_last]), "single")
    plan = _attach(plan, SlotRef("reglue", "left_inv"), _surface_plan(chart, rest), "rest")
    return plan


def plan_surface_bundle(chart: SurfaceChart, w: TwistWord | str) -> Plan:
    """Plan whose single residual slot bounds the surface bundle ``Sigma(w)``."""
    if isinstance(w, str):
        w = TwistWord.parse(w)
    if chart.genus < 2:
        raise ValueError("surface plans need genus at least 2; use plan_torus_bundle")
    chart.check_word(w)
    letters = w.single_letters()
    if not letters:
        raise EmptyWord("a surface plan needs at least one twist; cap identity bundles with CapProduct")
    plan = _surface_plan(chart, letters)
    return _retarget(plan, SurfaceBundle(chart.name, w))


# ---------------------------------------------------------------- cobordisms


@dataclass(frozen=True)
class MoveStep:
    source: str
    target: str
    fiber_genus: int
    twist: str = ""
    chart: str | None = None


@dataclass(frozen=True)
class MoveSequence:
    """M_1 -> M_2 -> ... -> M_n with M_n the product of a genus-``product_genus`` surface and S^1."""

    steps: tuple[MoveStep, ...]
    product_genus: int

    def __post_init__(self) -> None:
        if not self.steps:
            raise MalformedSequence("a move sequence needs at least one step")
        for s, t in zip(self.steps, self.steps[1:]):
            if s.target != t.source:
                raise MalformedSequence(f"step endpoints do not chain: {s.target!r} -> {t.source!r}")
        for s in self.steps:
            if isinstance(s.fiber_genus, bool) or not isinstance(s.fiber_genus, int) or s.fiber_genus < 1:
                raise MalformedSequence(f"bad fiber genus {s.fiber_genus!r}")
        if isinstance(self.product_genus, bool) or not isinstance(self.product_genus, int) or self.product_genus < 1:
            raise MalformedSequence(f"bad product genus {self.product_genus!r}")

    @property
    def name(self) -> str:
        return self.steps[0].source

    @classmethod
    def from_list(cls, items: Iterable[Mapping]) -> "MoveSequence":
        items = list(items)
        if not items or "product_of_genus" not in items[-1]:
            raise MalformedSequence("sequence must end with a {product_of_genus: g} marker")
        try:
            steps = tuple(
                MoveStep(str(d["from"]), str(d["to"]), d["fiber_genus"], str(d.get("twist", "")), d.get("chart"))
                for d in items[:-1]
            )
        except (KeyError, TypeError) as exc:
            raise MalformedSequence(f"malformed step: {exc}") from None
        return cls(steps, items[-1]["product_of_genus"])

    def to_list(self) -> list[dict]:
        out = []
        for s in self.steps:
            d = {"from": s.source, "to": s.target, "fiber_genus": s.fiber_genus, "twist": s.twist}
            if s.chart:
                d["chart"] = s.chart
            out.append(d)
        out.append({"product_of_genus": self.product_genus})
        return out


def load_sequence(path: str | Path) -> MoveSequence:
    with open(path, encoding="utf-8") as fh:
        return MoveSequence.from_list(json.load(fh))


def _bundle_and_cap(step: MoveStep, charts: Mapping[str, SurfaceChart]) -> tuple[ManifoldLabel, Plan]:
    g = step.fiber_genus
    if g == 1:
        w = TorusTwistWord.parse(step.twist)
        if not len(w):
            return ProductBundle(1), single_block_plan(cap_product_block("cap", 1))
        return TorusBundle(eval_torus_word(w)), plan_torus_bundle(w.inverse())
    chart = resolve_chart(step.chart or f"genus{g}", charts)
    if chart.genus != g:
        raise MalformedSequence(f"chart {chart.name!r} has genus {chart.genus}, step needs {g}")
    w = TwistWord.parse(step.twist)
    chart.check_word(w)
    if not len(w.merged()):
        return ProductBundle(g), single_block_plan(cap_product_block("cap", g))
    return SurfaceBundle(chart.name, w), plan_surface_bundle(chart, w.inverse())


def _chain(
    seq: MoveSequence, tag: str, charts: Mapping[str, SurfaceChart]
) -> tuple[Plan, SlotRef]:
    """Reglue blocks for every step with their bundle slots capped; returns (plan, terminal slot)."""
    plan: Plan | None = None
    prev: SlotRef | None = None
    n = len(seq.steps)
    for i, step in enumerate(seq.steps, start=1):
        bid = f"{tag}.step{i}"
        target: ManifoldLabel = ProductBundle(seq.product_genus) if i == n else Opaque(step.target, 1)
        bundle, cap = _bundle_and_cap(step, charts)
        piece = single_block_plan(reglue_opaque_block(bid, step.source, target, bundle))
        piece = _attach(piece, SlotRef(bid, "bundle"), cap, f"{bid}.cap")
        if plan is None:
            plan = piece
        else:
            plan = compose(plan, piece, [(prev, SlotRef(bid, "source"), OpaqueMatch())], (None, None))
        prev = SlotRef(bid, "target")
    assert plan is not None and prev is not None
    return plan, prev


def plan_cobordism(
    seq: MoveSequence,
    other: MoveSequence | None = None,
    charts: Mapping[str, SurfaceChart] | None = None,
) -> Plan:
    """Cobordism whose residual boundary is ``M`` (and ``M'`` when ``other`` is given).

    Each sequence becomes a chain of regluing blocks ending at a product
    ``F x S^1``.  A single chain is closed with a product cap; two chains are
    glued along equal products or joined through a bridge block.
    """
    charts = dict(charts or {})
    plan, end = _chain(seq, "M", charts)
    if other is None:
        cap = single_block_plan(cap_product_block("cap", seq.product_genus))
        return compose(plan, cap, [(end, SlotRef("cap", "cap"), InverseExact())], (None, "end"))

    plan2, end2 = _chain(other, "N", charts)
    if seq.product_genus == other.product_genus:
        return compose(plan, plan2, [(end, end2, InverseExact())], (None, None))
    both = compose(plan, plan2, [], (None, None))
    bridge = single_block_plan(cap_bridge_block("bridge", seq.product_genus, other.product_genus))
    return compose(
        both,
        bridge,
        [(end, SlotRef("bridge", "left"), InverseExact()), (end2, SlotRef("bridge", "right"), InverseExact())],
        (None, "end"),
    )
