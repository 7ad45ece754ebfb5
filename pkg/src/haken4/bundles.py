"""Oriented boundary labels and the gluing matcher.

A boundary component is written as a bundle ``S(g)``; the orientation-reversed
copy of ``S(g)`` is ``S(g^-1)``.  Two boundary slots can be glued exactly when
one label is the inverse of the other, possibly after a homeomorphism, and the
caller supplies a witness saying how to check that.

Witness tiers:

``exact``
    matrix equality, literal word inversion, or reduction to the empty word;
    these certify the gluing.
``necessary``
    homological conjugacy only.  The symplectic representation is not
    faithful, so such a gluing is reported but not certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .mcg import (
    ChartError,
    SurfaceChart,
    TwistWord,
    builtin_chart,
    identity_matrix,
    is_symplectic,
    matmul,
    reduce,
    rho,
    sp_inverse,
)
from .sl2z import IDENTITY, MalformedInput, Mat2, TorusTwistWord, eval_torus_word

__all__ = [
    "TorusBundle",
    "SurfaceBundle",
    "ProductBundle",
    "Opaque",
    "ManifoldLabel",
    "BoundarySlot",
    "InverseExact",
    "ReducesToInverse",
    "ConjugateWord",
    "HomologyConjugate",
    "OpaqueMatch",
    "GlueWitness",
    "GlueResult",
    "GluingError",
    "KindMismatch",
    "InapplicableWitness",
    "GluingCheckFailed",
    "UnknownChart",
    "resolve_chart",
    "match_gluing",
    "label_from_dict",
    "witness_from_dict",
]

ChartRegistry = Mapping[str, SurfaceChart]


class UnknownChart(KeyError):
    pass


def resolve_chart(name: str, charts: ChartRegistry | None = None) -> SurfaceChart:
    if charts and name in charts:
        return charts[name]
    chart = builtin_chart(name)
    if chart is None:
        raise UnknownChart(f"no chart named {name!r}")
    return chart


# ---------------------------------------------------------------- labels


@dataclass(frozen=True)
class TorusBundle:
    monodromy: Mat2

    @classmethod
    def of_word(cls, w: TorusTwistWord) -> "TorusBundle":
        return cls(eval_torus_word(w))

    def inverse(self) -> "TorusBundle":
        return TorusBundle(self.monodromy.inverse())

    def to_dict(self) -> dict:
        return {"kind": "torus", "matrix": list(self.monodromy.entries())}

    def __str__(self) -> str:
        return f"T2{self.monodromy}"


@dataclass(frozen=True)
class SurfaceBundle:
    chart: str
    word: TwistWord

    def inverse(self) -> "SurfaceBundle":
        return SurfaceBundle(self.chart, self.word.inverse())

    def to_dict(self) -> dict:
        return {"kind": "surface", "chart": self.chart, "word": str(self.word)}

    def __str__(self) -> str:
        return f"S[{self.chart}]({self.word or 'id'})"


@dataclass(frozen=True)
class ProductBundle:
    """F x S^1; ``fiber`` is a genus or the name of an opaque surface."""

    fiber: Union[int, str]

    def inverse(self) -> "ProductBundle":
        return self

    def to_dict(self) -> dict:
        return {"kind": "product", "fiber": self.fiber}

    def __str__(self) -> str:
        f = f"Sigma{self.fiber}" if isinstance(self.fiber, int) else self.fiber
        return f"{f}xS1"


@dataclass(frozen=True)
class Opaque:
    name: str
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise MalformedInput(f"opaque sign must be +1 or -1, got {self.sign!r}")

    def inverse(self) -> "Opaque":
        return Opaque(self.name, -self.sign)

    def to_dict(self) -> dict:
        return {"kind": "opaque", "name": self.name, "sign": self.sign}

    def __str__(self) -> str:
        return f"{self.name}{'+' if self.sign > 0 else '-'}"


ManifoldLabel = Union[TorusBundle, SurfaceBundle, ProductBundle, Opaque]


def label_from_dict(doc: Mapping) -> ManifoldLabel:
    try:
        kind = doc["kind"]
        if kind == "torus":
            m = doc["matrix"]
            if len(m) != 4:
                raise MalformedInput("torus matrix needs four entries")
            return TorusBundle(Mat2(*m))
        if kind == "surface":
            return SurfaceBundle(str(doc["chart"]), TwistWord.parse(doc["word"]))
        if kind == "product":
            fiber = doc["fiber"]
            if isinstance(fiber, bool) or not isinstance(fiber, (int, str)):
                raise MalformedInput(f"bad product fiber {fiber!r}")
            return ProductBundle(fiber)
        if kind == "opaque":
            return Opaque(str(doc["name"]), doc["sign"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedInput(f"malformed label {doc!r}: {exc}") from None
    raise MalformedInput(f"unknown label kind {doc.get('kind')!r}")


@dataclass(frozen=True)
class BoundarySlot:
    slot_id: str
    label: ManifoldLabel


# ---------------------------------------------------------------- witnesses


@dataclass(frozen=True)
class InverseExact:
    tier = "exact"

    def inverse(self) -> "InverseExact":
        return self

    def to_dict(self) -> dict:
        return {"kind": "InverseExact"}


@dataclass(frozen=True)
class ReducesToInverse:
    tier = "exact"

    def inverse(self) -> "ReducesToInverse":
        return self

    def to_dict(self) -> dict:
        return {"kind": "ReducesToInverse"}


@dataclass(frozen=True)
class ConjugateWord:
    """b = c . a^-1 . c^-1 for the conjugator word c."""

    word: Union[TorusTwistWord, TwistWord]
    tier = "exact"

    def inverse(self) -> "ConjugateWord":
        return ConjugateWord(self.word.inverse())

    def to_dict(self) -> dict:
        group = "torus" if isinstance(self.word, TorusTwistWord) else "surface"
        return {"kind": "ConjugateWord", "group": group, "word": str(self.word)}


@dataclass(frozen=True)
class HomologyConjugate:
    """rho(b) = m . rho(a)^-1 . m^-1 with m symplectic; necessary condition only."""

    matrix: tuple[tuple[int, ...], ...]
    tier = "necessary"

    def inverse(self) -> "HomologyConjugate":
        if not is_symplectic(self.matrix):
            raise InapplicableWitness("conjugating matrix is not symplectic")
        return HomologyConjugate(sp_inverse(self.matrix))

    def to_dict(self) -> dict:
        return {"kind": "HomologyConjugate", "matrix": [list(r) for r in self.matrix]}


@dataclass(frozen=True)
class OpaqueMatch:
    tier = "exact"

    def inverse(self) -> "OpaqueMatch":
        return self

    def to_dict(self) -> dict:
        return {"kind": "OpaqueMatch"}


GlueWitness = Union[InverseExact, ReducesToInverse, ConjugateWord, HomologyConjugate, OpaqueMatch]


def witness_from_dict(doc: Mapping) -> GlueWitness:
    try:
        kind = doc["kind"]
        if kind == "InverseExact":
            return InverseExact()
        if kind == "ReducesToInverse":
            return ReducesToInverse()
        if kind == "OpaqueMatch":
            return OpaqueMatch()
        if kind == "ConjugateWord":
            group = doc.get("group", "torus")
            if group == "torus":
                return ConjugateWord(TorusTwistWord.parse(doc["word"]))
            if group == "surface":
                return ConjugateWord(TwistWord.parse(doc["word"]))
            raise MalformedInput(f"unknown conjugator group {group!r}")
        if kind == "HomologyConjugate":
            rows = tuple(tuple(int(v) for v in r) for r in doc["matrix"])
            return HomologyConjugate(rows)
    except (KeyError, TypeError, AttributeError, ChartError) as exc:
        raise MalformedInput(f"malformed witness {doc!r}: {exc}") from None
    raise MalformedInput(f"unknown witness kind {doc.get('kind')!r}")


# ---------------------------------------------------------------- matching


class GluingError(Exception):
    code = "gluing-error"


class KindMismatch(GluingError):
    code = "kind-mismatch"


class InapplicableWitness(GluingError):
    code = "inapplicable-witness"


class GluingCheckFailed(GluingError):
    code = "monodromy-mismatch"


@dataclass(frozen=True)
class GlueResult:
    tier: str

    @property
    def necessary_only(self) -> bool:
        return self.tier == "necessary"


_EXACT = GlueResult("exact")
_NECESSARY = GlueResult("necessary")


def _label(x: BoundarySlot | ManifoldLabel) -> ManifoldLabel:
    return x.label if isinstance(x, BoundarySlot) else x


def _fail(a: ManifoldLabel, b: ManifoldLabel, what: str) -> GluingCheckFailed:
    return GluingCheckFailed(f"{what}: {a} does not glue to {b}")


def _match_torus(a: TorusBundle, b: TorusBundle, w: GlueWitness) -> GlueResult:
    ma, mb = a.monodromy, b.monodromy
    if isinstance(w, InverseExact):
        if mb != ma.inverse():
            raise _fail(a, b, "monodromy is not the exact inverse")
        return _EXACT
    if isinstance(w, ReducesToInverse):
        if ma @ mb != IDENTITY:
            raise _fail(a, b, "monodromy product is not the identity")
        return _EXACT
    if isinstance(w, ConjugateWord):
        c = w.word
        if isinstance(c, TwistWord):
            if len(c):
                raise InapplicableWitness("surface conjugator supplied for torus bundles")
            c = TorusTwistWord()
        cm = eval_torus_word(c)
        if mb != cm @ ma.inverse() @ cm.inverse():
            raise _fail(a, b, f"conjugation by {c or 'id'} does not carry the inverse monodromy")
        return _EXACT
    raise InapplicableWitness(f"{type(w).__name__} does not apply to torus bundles")


def _match_surface(
    a: SurfaceBundle, b: SurfaceBundle, w: GlueWitness, chart: SurfaceChart
) -> GlueResult:
    if isinstance(w, InverseExact):
        if b.word.merged() != a.word.inverse().merged():
            raise _fail(a, b, "word is not the literal inverse")
        return _EXACT
    if isinstance(w, ReducesToInverse):
        if len(reduce(chart, a.word + b.word)):
            raise _fail(a, b, "concatenation does not reduce to the empty word")
        return _EXACT
    if isinstance(w, ConjugateWord):
        c = w.word
        if isinstance(c, TorusTwistWord):
            if len(c):
                raise InapplicableWitness("torus conjugator supplied for surface bundles")
            c = TwistWord()
        chart.check_word(c)
        # b = c a^-1 c^-1  <=>  c a c^-1 b = 1
        if len(reduce(chart, c + a.word + c.inverse() + b.word)):
            raise _fail(a, b, "conjugation word does not reduce away")
        return _EXACT
    if isinstance(w, HomologyConjugate):
        m = w.matrix
        if len(m) != 2 * chart.genus or not is_symplectic(m):
            raise InapplicableWitness("conjugating matrix is not symplectic of the right size")
        ra = rho(chart, a.word)
        target = matmul(matmul(m, sp_inverse(ra)), sp_inverse(m))
        if rho(chart, b.word) != target:
            raise _fail(a, b, "homology actions are not conjugate by the given matrix")
        return _NECESSARY
    raise InapplicableWitness(f"{type(w).__name__} does not apply to surface bundles")


def match_gluing(
    a: BoundarySlot | ManifoldLabel,
    b: BoundarySlot | ManifoldLabel,
    w: GlueWitness,
    charts: ChartRegistry | None = None,
) -> GlueResult:
    """Check that ``a`` and ``b`` may be glued, using witness ``w``.

    Returns the tier of the check on success; raises a :class:`GluingError`
    subclass otherwise.
    """
    la, lb = _label(a), _label(b)

    # a product F x S^1 is the surface bundle with empty monodromy
    if isinstance(la, ProductBundle) and isinstance(lb, SurfaceBundle):
        la = _product_as_surface(la, lb, charts)
    elif isinstance(lb, ProductBundle) and isinstance(la, SurfaceBundle):
        lb = _product_as_surface(lb, la, charts)

    if type(la) is not type(lb):
        raise KindMismatch(f"cannot glue {la} to {lb}")

    if isinstance(la, Opaque):
        if not isinstance(w, OpaqueMatch):
            raise InapplicableWitness(f"{type(w).__name__} does not apply to opaque manifolds")
        if la.name != lb.name:
            raise KindMismatch(f"opaque manifolds {la.name!r} and {lb.name!r} differ")
        if la.sign != -lb.sign:
            raise GluingCheckFailed(f"orientation mismatch: {la} does not glue to {lb}")
        return _EXACT
    if isinstance(w, OpaqueMatch):
        raise InapplicableWitness("OpaqueMatch applies only to opaque manifolds")

    if isinstance(la, TorusBundle):
        return _match_torus(la, lb, w)

    if isinstance(la, ProductBundle):
        if la.fiber != lb.fiber:
            raise KindMismatch(f"product fibers differ: {la} vs {lb}")
        if isinstance(w, (InverseExact, ReducesToInverse)):
            return _EXACT
        raise InapplicableWitness(f"{type(w).__name__} does not apply to product bundles")

    if la.chart != lb.chart:
        raise KindMismatch(f"surface bundles over different charts: {la.chart!r} vs {lb.chart!r}")
    chart = resolve_chart(la.chart, charts)
    chart.check_word(la.word)
    chart.check_word(lb.word)
    return _match_surface(la, lb, w, chart)


def _product_as_surface(
    p: ProductBundle, s: SurfaceBundle, charts: ChartRegistry | None
) -> ProductBundle | SurfaceBundle:
    chart = resolve_chart(s.chart, charts)
    if p.fiber != chart.genus:
        return p  # left as a kind mismatch
    return SurfaceBundle(s.chart, TwistWord())


def identity_conjugator(genus: int) -> HomologyConjugate:
    return HomologyConjugate(identity_matrix(2 * genus))
