"""Dehn-twist words on a surface with a declared curve system.

A :class:`SurfaceChart` records, for a closed genus-g surface, a finite set of
named simple closed curves together with

* the homology class of each curve in a fixed symplectic basis
  ``(a1, b1, ..., ag, bg)`` with ``<a_i, b_i> = 1``;
* which pairs of curves are disjoint (so their twists commute);
* lantern tuples ``(alpha, beta, gamma, e1, e2, e3, e4)`` for which
  ``f_gamma f_beta f_alpha = f_e1 f_e2 f_e3 f_e4``.

Words are rewritten by :func:`reduce` using only those relations, so equal
output words certify equal mapping classes.  :func:`rho` is the homological
shadow; it is not faithful and only ever gives a necessary condition.

Convention: the leftmost letter of a word acts first.  Homology classes are
row vectors and matrices act on the right, so ``rho`` of a word is the
left-to-right product of its transvections.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "CurveData",
    "SurfaceChart",
    "TwistWord",
    "ChartError",
    "UnknownCurve",
    "transvection",
    "rho",
    "reduce",
    "reduce_with_trace",
    "lantern_chart",
    "chain_chart",
    "builtin_chart",
    "theta_sequence",
    "pairing",
    "symplectic_form",
    "is_symplectic",
    "sp_inverse",
    "matmul",
    "identity_matrix",
    "symplectic_carrying",
]

Matrix = tuple[tuple[int, ...], ...]


class ChartError(ValueError):
    pass


class UnknownCurve(KeyError):
    pass


# ---------------------------------------------------------------- integer linear algebra


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(x: Matrix, y: Matrix) -> Matrix:
    cols = list(zip(*y))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in x)


def transpose(x: Matrix) -> Matrix:
    return tuple(zip(*x))


def symplectic_form(genus: int) -> Matrix:
    n = 2 * genus
    rows = [[0] * n for _ in range(n)]
    for i in range(genus):
        rows[2 * i][2 * i + 1] = 1
        rows[2 * i + 1][2 * i] = -1
    return tuple(tuple(r) for r in rows)


def pairing(x: Sequence[int], y: Sequence[int]) -> int:
    """Algebraic intersection number <x, y> in the basis (a1, b1, ..., ag, bg)."""
    return sum(x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i] for i in range(len(x) // 2))


def is_symplectic(m: Matrix) -> bool:
    n = len(m)
    if n % 2 or any(len(row) != n for row in m):
        return False
    j = symplectic_form(n // 2)
    return matmul(matmul(transpose(m), j), m) == j


def sp_inverse(m: Matrix) -> Matrix:
    # M^T J M = J  =>  M^-1 = J^-1 M^T J = -J M^T J
    j = symplectic_form(len(m) // 2)
    prod = matmul(matmul(j, transpose(m)), j)
    return tuple(tuple(-v for v in row) for row in prod)


def _elementary(n: int, entries: Iterable[tuple[int, int, int]]) -> list[list[int]]:
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for i, j, v in entries:
        rows[i][j] = v
    return rows


def _to_first_basis_vector(u: Sequence[int]) -> Matrix:
    """Symplectic P (integer) with u . P = e1, for a primitive vector u."""
    n = len(u)
    g = n // 2
    u = list(u)
    p = [list(r) for r in identity_matrix(n)]

    def apply(op: list[list[int]]) -> None:
        nonlocal u, p
        u = [sum(u[k] * op[k][j] for k in range(n)) for j in range(n)]
        p = [[sum(p[i][k] * op[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    # clear the b-coordinate of every handle with SL(2) moves inside the handle
    for i in range(g):
        x, y = 2 * i, 2 * i + 1
        while u[y] != 0:
            if u[x] == 0:
                apply(_elementary(n, [(y, x, 1)]))  # x += y
            elif abs(u[y]) >= abs(u[x]):
                apply(_elementary(n, [(x, y, -(u[y] // u[x]))]))  # y -= q x
            else:
                apply(_elementary(n, [(y, x, -(u[x] // u[y]))]))  # x -= q y
    # gather the a-coordinates into the first handle: x_i += k x_j paired with y_j -= k y_i
    for jh in range(1, g):
        xi, yi, xj, yj = 0, 1, 2 * jh, 2 * jh + 1
        while u[xj] != 0:
            if u[xi] == 0:
                apply(_elementary(n, [(xj, xi, 1), (yi, yj, -1)]))
            elif abs(u[xj]) >= abs(u[xi]):
                k = -(u[xj] // u[xi])
                apply(_elementary(n, [(xi, xj, k), (yj, yi, -k)]))
            else:
                k = -(u[xi] // u[xj])
                apply(_elementary(n, [(xj, xi, k), (yi, yj, -k)]))
    if u[0] == -1:
        apply(_elementary(n, [(0, 0, -1), (1, 1, -1)]))
    if u != [1] + [0] * (n - 1):
        raise ChartError("vector is not primitive")
    return tuple(tuple(r) for r in p)


def symplectic_carrying(u: Sequence[int], v: Sequence[int]) -> Matrix:
    """An integer symplectic matrix ``m`` with ``u . m = v`` (both primitive)."""
    if len(u) != len(v) or len(u) % 2:
        raise ChartError("vectors must have the same even length")
    for vec in (u, v):
        if gcd(*vec) != 1:
            raise ChartError(f"{list(vec)} is not primitive")
    pu = _to_first_basis_vector(u)
    pv = _to_first_basis_vector(v)
    return matmul(pu, sp_inverse(pv))


# ---------------------------------------------------------------- charts


@dataclass(frozen=True)
class CurveData:
    homology: tuple[int, ...]
    separating: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "homology", tuple(int(v) for v in self.homology))
        zero = not any(self.homology)
        if self.separating and not zero:
            raise ChartError("a separating curve must have zero homology class")
        if not self.separating and (zero or gcd(*self.homology) != 1):
            raise ChartError(f"non-separating curve needs a primitive class, got {self.homology}")


@dataclass(frozen=True, eq=False)
class SurfaceChart:
    name: str
    genus: int
    curves: Mapping[str, CurveData]
    disjoint: frozenset[frozenset[str]] = frozenset()
    lanterns: tuple[tuple[str, ...], ...] = ()
    _neighbours: dict[str, frozenset[str]] = field(init=False, repr=False)
    _rank: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.genus < 1:
            raise ChartError("genus must be at least 1")
        object.__setattr__(self, "curves", dict(self.curves))
        pairs = frozenset(frozenset(p) for p in self.disjoint)
        object.__setattr__(self, "disjoint", pairs)
        object.__setattr__(self, "lanterns", tuple(tuple(t) for t in self.lanterns))
        for name, data in self.curves.items():
            if not _NAME_RE.match(name):
                raise ChartError(f"bad curve name {name!r}")
            if len(data.homology) != 2 * self.genus:
                raise ChartError(f"curve {name!r}: homology vector must have length {2 * self.genus}")
        nbrs: dict[str, set[str]] = {n: set() for n in self.curves}
        for pair in pairs:
            if len(pair) != 2:
                raise ChartError(f"disjointness must be irreflexive, got {sorted(pair)}")
            c, d = sorted(pair)
            for x in (c, d):
                if x not in self.curves:
                    raise ChartError(f"disjoint pair names unknown curve {x!r}")
            if pairing(self.curves[c].homology, self.curves[d].homology) != 0:
                raise ChartError(f"curves {c!r} and {d!r} are declared disjoint but pair nontrivially")
            nbrs[c].add(d)
            nbrs[d].add(c)
        for tup in self.lanterns:
            if len(tup) != 7:
                raise ChartError(f"lantern tuple must have 7 curves, got {tup}")
            for x in tup:
                if x not in self.curves:
                    raise ChartError(f"lantern tuple names unknown curve {x!r}")
            for eps in tup[3:]:
                for other in tup:
                    if other != eps and other not in nbrs[eps]:
                        raise ChartError(f"lantern boundary curve {eps!r} must be disjoint from {other!r}")
        object.__setattr__(self, "_neighbours", {n: frozenset(s) for n, s in nbrs.items()})
        object.__setattr__(self, "_rank", {n: i for i, n in enumerate(self.curves)})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SurfaceChart):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash((self.name, self.genus))

    def commute(self, c: str, d: str) -> bool:
        return d in self._neighbours[c]

    def rank(self, c: str) -> int:
        return self._rank[c]

    def check_word(self, w: "TwistWord") -> None:
        for c, _ in w:
            if c not in self.curves:
                raise UnknownCurve(f"curve {c!r} is not in chart {self.name!r}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "genus": self.genus,
            "curves": [
                {"name": n, "homology": list(d.homology), "separating": d.separating}
                for n, d in self.curves.items()
            ],
            "disjoint": sorted(sorted(p) for p in self.disjoint),
            "lanterns": [list(t) for t in self.lanterns],
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "SurfaceChart":
        try:
            curves = {
                c["name"]: CurveData(tuple(c["homology"]), bool(c.get("separating", False)))
                for c in doc["curves"]
            }
            return cls(
                name=str(doc["name"]),
                genus=int(doc["genus"]),
                curves=curves,
                disjoint=frozenset(frozenset(p) for p in doc.get("disjoint", [])),
                lanterns=tuple(tuple(t) for t in doc.get("lanterns", [])),
            )
        except (KeyError, TypeError) as exc:
            raise ChartError(f"malformed chart document: {exc}") from None

    @classmethod
    def load(cls, path: str | Path) -> "SurfaceChart":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


# ---------------------------------------------------------------- words

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")
_LETTER_RE = re.compile(r"^f_([A-Za-z0-9_]+?)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class TwistWord:
    """A word in Dehn twists, stored letter for letter.

    Zero exponents are dropped.  Adjacent letters on the same curve are kept
    as written so that literal concatenations stay visible; :meth:`merged`
    gives the merged form.
    """

    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        clean = []
        for c, e in self.letters:
            if not isinstance(e, int) or isinstance(e, bool):
                raise ChartError(f"exponent must be an integer, got {e!r}")
            if e:
                clean.append((str(c), e))
        object.__setattr__(self, "letters", tuple(clean))

    @classmethod
    def of(cls, *letters: tuple[str, int]) -> "TwistWord":
        return cls(tuple(letters))

    @classmethod
    def parse(cls, text: str) -> "TwistWord":
        text = text.strip()
        if text in ("", "1", "id"):
            return cls()
        letters = []
        for tok in text.split("."):
            m = _LETTER_RE.match(tok.strip())
            if not m:
                raise ChartError(f"bad twist letter {tok!r} in {text!r}")
            letters.append((m.group(1), int(m.group(2) or 1)))
        return cls(tuple(letters))

    def __str__(self) -> str:
        return ".".join(f"f_{c}" if e == 1 else f"f_{c}^{e}" for c, e in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(self.letters)

    def __add__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((c, -e) for c, e in reversed(self.letters)))

    def merged(self) -> "TwistWord":
        out: list[tuple[str, int]] = []
        for c, e in self.letters:
            if out and out[-1][0] == c:
                e += out.pop()[1]
            if e:
                out.append((c, e))
        return TwistWord(tuple(out))

    def twist_count(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def single_letters(self) -> list[tuple[str, int]]:
        out = []
        for c, e in self.merged():
            s = 1 if e > 0 else -1
            out.extend([(c, s)] * abs(e))
        return out


# ---------------------------------------------------------------- homology representation


def transvection(chart: SurfaceChart, curve: str, exponent: int) -> Matrix:
    """Matrix of x -> x + exponent * <x, c> * c acting on row vectors."""
    if curve not in chart.curves:
        raise UnknownCurve(f"curve {curve!r} is not in chart {chart.name!r}")
    c = chart.curves[curve].homology
    n = len(c)
    j = symplectic_form(chart.genus)
    jc = [sum(j[i][k] * c[k] for k in range(n)) for i in range(n)]
    return tuple(tuple(int(i == col) + exponent * jc[i] * c[col] for col in range(n)) for i in range(n))


def rho(chart: SurfaceChart, w: TwistWord) -> Matrix:
    chart.check_word(w)
    m = identity_matrix(2 * chart.genus)
    for c, e in w:
        m = matmul(m, transvection(chart, c, e))
    return m


# ---------------------------------------------------------------- rewriting

Unit = tuple[str, int]


def _units(letters: Iterable[tuple[str, int]]) -> list[Unit]:
    out = []
    for c, e in letters:
        s = 1 if e > 0 else -1
        out.extend([(c, s)] * abs(e))
    return out


def _cancel(units: list[Unit], chart: SurfaceChart, log: list | None) -> list[Unit]:
    """Free cancellation modulo commutation of disjoint twists."""
    units = list(units)
    i = 0
    while i < len(units):
        c, s = units[i]
        hit = None
        for j in range(i + 1, len(units)):
            d, t = units[j]
            if d == c:
                hit = j if t == -s else None
                break
            if not chart.commute(c, d):
                break
        if hit is None:
            i += 1
            continue
        if log is not None:
            log.extend(("commute", c, units[k][0]) for k in range(hit - 1, i, -1))
            log.append(("cancel", c))
        del units[hit]
        del units[i]
        # a removed letter may have been the only obstruction for an earlier one
        i = 0
    return units


def _normal_order(units: list[Unit], chart: SurfaceChart, log: list | None) -> list[Unit]:
    """Lexicographically least rearrangement reachable by commuting disjoint twists."""
    rest = list(units)
    out: list[Unit] = []
    while rest:
        best = None
        for idx, (c, _) in enumerate(rest):
            if best is not None and chart.rank(c) >= chart.rank(rest[best][0]):
                continue
            if all(chart.commute(c, rest[k][0]) for k in range(idx)):
                best = idx
        c, s = rest.pop(best)
        if log is not None:
            log.extend(("commute", c, rest[k][0]) for k in range(best - 1, -1, -1))
        out.append((c, s))
    return out


def _normalize(units: list[Unit], chart: SurfaceChart, log: list | None) -> list[Unit]:
    return _normal_order(_cancel(units, chart, log), chart, log)


def _lantern_patterns(chart: SurfaceChart) -> list[tuple[int, tuple[Unit, ...], tuple[Unit, ...]]]:
    """(tuple index, pattern, replacement) for every cyclic piece of each lantern relator."""
    out = []
    for idx, (a, b, g, e1, e2, e3, e4) in enumerate(chart.lanterns):
        relator = [(g, 1), (b, 1), (a, 1), (e4, -1), (e3, -1), (e2, -1), (e1, -1)]
        inverse = [(c, -s) for c, s in reversed(relator)]
        for r in (relator, inverse):
            for start in range(7):
                rot = r[start:] + r[:start]
                for length in range(1, 8):
                    piece, rest = rot[:length], rot[length:]
                    repl = tuple((c, -s) for c, s in reversed(rest))
                    out.append((idx, tuple(piece), repl))
    return out


def _extract(units: list[Unit], start: int, pattern: Sequence[Unit], chart: SurfaceChart, log: list | None):
    """Pull the letters of ``pattern`` together at ``start`` by commuting moves.

    Returns the rearranged list, or None when some letter is blocked.
    """
    work = list(units)
    moves = []
    ins = start
    for c, s in pattern:
        for j in range(ins, len(work)):
            d, t = work[j]
            if (d, t) == (c, s):
                break
            if not chart.commute(c, d):
                return None
        else:
            return None
        moves.extend(("commute", c, work[k][0]) for k in range(j - 1, ins - 1, -1))
        work.insert(ins, work.pop(j))
        ins += 1
    if log is not None:
        log.extend(moves)
    return work


def reduce_with_trace(chart: SurfaceChart, w: TwistWord) -> tuple[TwistWord, list[tuple]]:
    """Rewrite ``w`` and return it together with the list of rewriting events.

    Events are ``("commute", c, d)`` when a letter on ``c`` is moved past a
    letter on ``d``, ``("cancel", c)`` and ``("lantern", index)``.
    """
    chart.check_word(w)
    log: list[tuple] = []
    units = _normalize(_units(w), chart, log)
    patterns = _lantern_patterns(chart)
    improved = True
    while improved and patterns:
        improved = False
        for idx, piece, repl in patterns:
            for start in range(len(units)):
                if units[start] != piece[0]:
                    continue
                trial_log: list[tuple] = []
                moved = _extract(units, start, piece, chart, trial_log)
                if moved is None:
                    continue
                trial_log.append(("lantern", idx))
                cand = moved[:start] + list(repl) + moved[start + len(piece):]
                cand = _normalize(cand, chart, trial_log)
                if len(cand) < len(units):
                    units = cand
                    log.extend(trial_log)
                    improved = True
                    break
            if improved:
                break
    return TwistWord(tuple(units)).merged(), log


def reduce(chart: SurfaceChart, w: TwistWord) -> TwistWord:
    """Normal form of ``w`` under cancellation, disjoint commutation and lantern moves.

    Equal results mean equal mapping classes.  Lantern substitutions are only
    kept when they shorten the word, so the procedure terminates.
    """
    return reduce_with_trace(chart, w)[0]


# ---------------------------------------------------------------- built-in charts


def lantern_chart() -> SurfaceChart:
    """Genus-3 surface obtained by doubling a sphere with four holes.

    The boundary circles e1..e4 of the four-holed sphere become non-separating
    curves; alpha, beta, gamma each enclose two of the holes 1, 2, 3.  In the
    basis where a_i is the class of e_i (i = 1, 2, 3) and b_i runs from hole i
    to hole 4 through both halves, every curve lies in the span of a1, a2, a3.
    """
    curves = {
        "alpha": CurveData((1, 0, 1, 0, 0, 0)),
        "beta": CurveData((0, 0, 1, 0, 1, 0)),
        "gamma": CurveData((1, 0, 0, 0, 1, 0)),
        "1": CurveData((1, 0, 0, 0, 0, 0)),
        "2": CurveData((0, 0, 1, 0, 0, 0)),
        "3": CurveData((0, 0, 0, 0, 1, 0)),
        "4": CurveData((1, 0, 1, 0, 1, 0)),
    }
    eps = ["1", "2", "3", "4"]
    others = ["alpha", "beta", "gamma"] + eps
    disjoint = frozenset(frozenset((e, x)) for e in eps for x in others if x != e)
    return SurfaceChart(
        name="lantern3",
        genus=3,
        curves=curves,
        disjoint=disjoint,
        lanterns=(("alpha", "beta", "gamma", "1", "2", "3", "4"),),
    )


def chain_chart(genus: int) -> SurfaceChart:
    """The standard chain c1, ..., c_{2g+1} (just c1, c2 in genus one).

    Consecutive curves meet once, all other pairs are disjoint.
    """
    if genus < 1:
        raise ChartError("genus must be at least 1")
    n = 2 * genus

    def vec(*pairs: tuple[int, int]) -> tuple[int, ...]:
        v = [0] * n
        for i, x in pairs:
            v[i] = x
        return tuple(v)

    classes = [vec((0, 1))]  # a1
    for h in range(genus):
        classes.append(vec((2 * h + 1, 1)))  # b_h
        if h + 1 < genus:
            classes.append(vec((2 * h + 2, 1), (2 * h, -1)))  # a_{h+1} - a_h
    if genus > 1:
        classes.append(vec((n - 2, 1)))  # a_g
    names = [f"c{i + 1}" for i in range(len(classes))]
    curves = {nm: CurveData(cl) for nm, cl in zip(names, classes)}
    disjoint = frozenset(
        frozenset((names[i], names[j]))
        for i in range(len(names))
        for j in range(i + 2, len(names))
    )
    return SurfaceChart(name=f"genus{genus}", genus=genus, curves=curves, disjoint=disjoint)


_GENUS_RE = re.compile(r"^genus(\d+)$")


def builtin_chart(name: str) -> SurfaceChart | None:
    if name == "lantern3":
        return lantern_chart()
    m = _GENUS_RE.match(name)
    if m and int(m.group(1)) >= 1:
        return chain_chart(int(m.group(1)))
    return None


def theta_sequence() -> list[TwistWord]:
    """The words theta_7, theta_6, ..., theta_0, each a literal concatenation."""
    t7 = TwistWord.of(("1", -1), ("gamma", 1), ("2", -1), ("beta", 1), ("3", -1), ("alpha", 1), ("4", -1))
    appended = [("4", 1), ("alpha", -1), ("3", 1), ("beta", -1), ("2", 1), ("gamma", -1), ("1", 1)]
    seq = [t7]
    for letter in appended:
        seq.append(seq[-1] + TwistWord.of(letter))
    return seq
