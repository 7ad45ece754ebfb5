"""Block kinds and their boundary-slot formulas.

Every block stores its parameters in plain JSON form.  :func:`expected_slots`
recomputes the oriented boundary of a block from those parameters alone; the
verifier compares the result against the slots the block claims to have.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Mapping

from ..bundles import (
    BoundarySlot,
    ManifoldLabel,
    Opaque,
    ProductBundle,
    SurfaceBundle,
    TorusBundle,
    label_from_dict,
    resolve_chart,
)
from ..mcg import SurfaceChart, TwistWord, theta_sequence
from ..sl2z import GEN_L, MalformedInput, Mat2

if TYPE_CHECKING:
    from .plan import Plan

__all__ = [
    "Block",
    "BLOCK_KINDS",
    "LANTERN_CHART",
    "expected_slots",
    "product_block",
    "reglue_torus_block",
    "reglue_surface_block",
    "reglue_surface_factor_block",
    "reglue_opaque_block",
    "lantern_piece_block",
    "cap_product_block",
    "cap_bridge_block",
    "subplan_block",
]

LANTERN_CHART = "lantern3"

BLOCK_KINDS = (
    "Product",
    "ReglueTorus",
    "ReglueSurface",
    "ReglueSurfaceFactor",
    "ReglueOpaque",
    "LanternPiece",
    "CapProduct",
    "CapBridge",
    "SubPlanRef",
)


@dataclass(frozen=True)
class Block:
    id: str
    kind: str
    params: dict[str, Any] = field(default_factory=dict)
    slots: tuple[BoundarySlot, ...] = ()

    def slot(self, slot_id: str) -> BoundarySlot:
        for s in self.slots:
            if s.slot_id == slot_id:
                return s
        raise KeyError(f"block {self.id!r} has no slot {slot_id!r}")

    def renamed(self, new_id: str) -> "Block":
        return Block(new_id, self.kind, self.params, self.slots)


# ---------------------------------------------------------------- slot formulas


def _mat(value) -> Mat2:
    if not isinstance(value, (list, tuple)) or len(value) != 4:
        raise MalformedInput(f"expected four matrix entries, got {value!r}")
    return Mat2(*value)


def _sign(value) -> int:
    if value not in (1, -1) or isinstance(value, bool):
        raise MalformedInput(f"expected +1 or -1, got {value!r}")
    return value


def _genus(value) -> int | str:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise MalformedInput(f"bad fiber descriptor {value!r}")
    if isinstance(value, int) and value < 1:
        raise MalformedInput(f"fiber genus must be positive, got {value}")
    return value


def _lantern_labels(index: int, chirality: int) -> list[tuple[str, ManifoldLabel]]:
    thetas = theta_sequence()  # theta_7, ..., theta_0

    def theta(i: int) -> TwistWord:
        return thetas[7 - i]

    def surf(w: TwistWord) -> SurfaceBundle:
        return SurfaceBundle(LANTERN_CHART, w)

    phi = TorusBundle(GEN_L)
    aux: dict[int, ManifoldLabel] = {
        7: phi,
        6: phi.inverse(),
        5: phi,
        4: surf(TwistWord.of(("beta", -1))),
        3: surf(TwistWord.of(("2", 1))),
        2: surf(TwistWord.of(("gamma", -1))),
        1: surf(TwistWord.of(("1", 1))),
    }
    labels: list[tuple[str, ManifoldLabel]] = [
        ("prev", surf(theta(index).inverse())),
        ("next", surf(theta(index - 1))),
        ("aux", aux[index]),
    ]
    if chirality == -1:
        # the mirror image reverses every boundary orientation
        labels = [(sid, lab.inverse()) for sid, lab in labels]
    return labels


def expected_slots(
    kind: str, params: Mapping[str, Any], charts: Mapping[str, SurfaceChart] | None = None
) -> list[BoundarySlot]:
    """Boundary of a block of the given kind, computed from its parameters."""
    p = params
    if kind == "Product":
        lab = label_from_dict(p["label"])
        out = [("inv", lab.inverse()), ("fwd", lab)]
    elif kind == "ReglueTorus":
        a, b = _mat(p["a"]), _mat(p["b"])
        out = [("a_inv", TorusBundle(a.inverse())), ("b", TorusBundle(b)), ("ab", TorusBundle(a @ b))]
    elif kind == "ReglueSurface":
        chart = resolve_chart(p["chart"], charts)
        base = TwistWord.parse(p["base"])
        curve, e = p["curve"], _sign(p["exponent"])
        chart.check_word(base + TwistWord.of((curve, e)))
        out = [
            ("base_inv", SurfaceBundle(chart.name, base.inverse())),
            ("twisted", SurfaceBundle(chart.name, base + TwistWord.of((curve, e)))),
            ("torus", TorusBundle(GEN_L**e)),
        ]
    elif kind == "ReglueSurfaceFactor":
        chart = resolve_chart(p["chart"], charts)
        left, right = TwistWord.parse(p["left"]), TwistWord.parse(p["right"])
        chart.check_word(left + right)
        out = [
            ("left_inv", SurfaceBundle(chart.name, left.inverse())),
            ("right", SurfaceBundle(chart.name, right)),
            ("product", SurfaceBundle(chart.name, left + right)),
        ]
    elif kind == "ReglueOpaque":
        target = label_from_dict(p["target"])
        if not isinstance(target, (Opaque, ProductBundle)):
            raise MalformedInput("regluing target must be opaque or a product")
        out = [
            ("source", Opaque(str(p["source"]), 1)),
            ("target", target.inverse()),
            ("bundle", label_from_dict(p["bundle"])),
        ]
    elif kind == "LanternPiece":
        index, chirality = p["index"], _sign(p["chirality"])
        if isinstance(index, bool) or index not in range(1, 8):
            raise MalformedInput(f"lantern piece index must be 1..7, got {index!r}")
        out = _lantern_labels(index, chirality)
    elif kind == "CapProduct":
        out = [("cap", ProductBundle(_genus(p["fiber"])))]
    elif kind == "CapBridge":
        f1, f2 = p["fibers"]
        out = [("left", ProductBundle(_genus(f1))), ("right", ProductBundle(_genus(f2)))]
    elif kind == "SubPlanRef":
        plan: Plan = p["plan"]
        if len(plan.target) != len(plan.residual):
            raise MalformedInput("nested plan residual and target differ in size")
        out = [(f"{r.block}/{r.slot}", t) for r, t in zip(plan.residual, plan.target)]
    else:
        raise MalformedInput(f"unknown block kind {kind!r}")
    return [BoundarySlot(sid, lab) for sid, lab in out]


# ---------------------------------------------------------------- constructors


def _make(block_id: str, kind: str, params: dict, charts=None) -> Block:
    return Block(block_id, kind, params, tuple(expected_slots(kind, params, charts)))


def product_block(block_id: str, label: ManifoldLabel, charts=None) -> Block:
    return _make(block_id, "Product", {"label": label.to_dict()}, charts)


def reglue_torus_block(block_id: str, a: Mat2, b: Mat2) -> Block:
    return _make(block_id, "ReglueTorus", {"a": list(a.entries()), "b": list(b.entries())})


def reglue_surface_block(
    block_id: str, chart: SurfaceChart, base: TwistWord, curve: str, exponent: int
) -> Block:
    params = {"chart": chart.name, "base": str(base), "curve": curve, "exponent": exponent}
    return _make(block_id, "ReglueSurface", params, {chart.name: chart})


def reglue_surface_factor_block(
    block_id: str, chart: SurfaceChart, left: TwistWord, right: TwistWord
) -> Block:
    params = {"chart": chart.name, "left": str(left), "right": str(right)}
    return _make(block_id, "ReglueSurfaceFactor", params, {chart.name: chart})


def reglue_opaque_block(
    block_id: str, source: str, target: ManifoldLabel, bundle: ManifoldLabel, charts=None
) -> Block:
    params = {"source": source, "target": target.to_dict(), "bundle": bundle.to_dict()}
    return _make(block_id, "ReglueOpaque", params, charts)


def lantern_piece_block(block_id: str, index: int, chirality: int) -> Block:
    return _make(block_id, "LanternPiece", {"index": index, "chirality": chirality})


def cap_product_block(block_id: str, fiber: int | str) -> Block:
    return _make(block_id, "CapProduct", {"fiber": fiber})


def cap_bridge_block(block_id: str, fiber: int | str, other: int | str) -> Block:
    return _make(block_id, "CapBridge", {"fibers": [fiber, other]})


def subplan_block(block_id: str, plan: "Plan") -> Block:
    return _make(block_id, "SubPlanRef", {"plan": plan})
