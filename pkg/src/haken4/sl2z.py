"""Exact SL(2,Z) arithmetic and Dehn-twist factorization of torus monodromies.

The two generators are the elementary twists

    L = [[1, 0], [1, 1]]      R = [[1, 1], [0, 1]]

and a word is evaluated as the left-to-right product of its letters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "Mat2",
    "TorusTwistWord",
    "MalformedInput",
    "NotASingleTwist",
    "IDENTITY",
    "GEN_L",
    "GEN_R",
    "eval_torus_word",
    "factor",
    "single_twist_class",
]


class MalformedInput(ValueError):
    pass


class NotASingleTwist(ValueError):
    pass


@dataclass(frozen=True)
class Mat2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        for v in (self.a, self.b, self.c, self.d):
            if not isinstance(v, int) or isinstance(v, bool):
                raise MalformedInput(f"matrix entries must be integers, got {v!r}")
        if self.a * self.d - self.b * self.c != 1:
            raise MalformedInput(f"determinant of {self.rows()} is not 1")

    @classmethod
    def from_rows(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def parse(cls, text: str) -> "Mat2":
        parts = text.replace(",", " ").split()
        if len(parts) != 4:
            raise MalformedInput(f"expected four integers, got {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError as exc:
            if isinstance(exc, MalformedInput):
                raise
            raise MalformedInput(f"expected four integers, got {text!r}") from None

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "Mat2":
        base = self if n >= 0 else self.inverse()
        result = IDENTITY
        for _ in range(abs(n)):
            result = result @ base
        return result

    def __neg__(self) -> "Mat2":
        # -M has determinant 1 as well in dimension 2
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = Mat2(1, 0, 0, 1)
GEN_L = Mat2(1, 0, 1, 1)
GEN_R = Mat2(1, 1, 0, 1)
_GENERATORS = {"L": GEN_L, "R": GEN_R}

_LETTER_RE = re.compile(r"^([LR])(?:\^(-?\d+))?$")


def _gen_power(gen: str, e: int) -> Mat2:
    # L^e and R^e have closed forms; no repeated multiplication needed
    if gen == "L":
        return Mat2(1, 0, e, 1)
    return Mat2(1, e, 0, 1)


@dataclass(frozen=True)
class TorusTwistWord:
    """Word in the generators L and R, kept merged (no adjacent repeats)."""

    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        merged: list[tuple[str, int]] = []
        for gen, e in self.letters:
            if gen not in _GENERATORS:
                raise MalformedInput(f"unknown torus generator {gen!r}")
            if not isinstance(e, int) or isinstance(e, bool):
                raise MalformedInput(f"exponent must be an integer, got {e!r}")
            if merged and merged[-1][0] == gen:
                e += merged.pop()[1]
            if e != 0:
                merged.append((gen, e))
        object.__setattr__(self, "letters", tuple(merged))

    @classmethod
    def of(cls, *letters: tuple[str, int]) -> "TorusTwistWord":
        return cls(tuple(letters))

    @classmethod
    def parse(cls, text: str) -> "TorusTwistWord":
        text = text.strip()
        if text in ("", "1", "id"):
            return cls()
        letters = []
        for tok in text.split("."):
            m = _LETTER_RE.match(tok.strip())
            if not m:
                raise MalformedInput(f"bad torus letter {tok!r} in {text!r}")
            letters.append((m.group(1), int(m.group(2) or 1)))
        return cls(tuple(letters))

    def __str__(self) -> str:
        if not self.letters:
            return ""
        return ".".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(self.letters)

    def __add__(self, other: "TorusTwistWord") -> "TorusTwistWord":
        return TorusTwistWord(self.letters + other.letters)

    def inverse(self) -> "TorusTwistWord":
        return TorusTwistWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def twist_count(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def single_letters(self) -> list[tuple[str, int]]:
        """Split every syllable into letters with exponent +1 or -1."""
        out = []
        for g, e in self.letters:
            s = 1 if e > 0 else -1
            out.extend([(g, s)] * abs(e))
        return out


def eval_torus_word(w: TorusTwistWord | Iterable[tuple[str, int]]) -> Mat2:
    m = IDENTITY
    for gen, e in w:
        m = m @ _gen_power(gen, e)
    return m


# (R L^-1 R) = [[0, 1], [-1, 0]], whose square is -I
_S_WORD = TorusTwistWord.of(("R", 1), ("L", -1), ("R", 1))
_MINUS_IDENTITY_WORD = _S_WORD + _S_WORD


def factor(m: Mat2) -> TorusTwistWord:
    """Write ``m`` as a word in L and R by Euclidean reduction of its first column.

    Row operations R^-q (row1 -= q*row2) and L^-q (row2 -= q*row1) drive the
    first column to (+-1, 0); what remains is +-R^b.
    """
    if not isinstance(m, Mat2):
        m = Mat2(*m)
    a, b, c, d = m.entries()
    undo: list[tuple[str, int]] = []
    while c != 0:
        if a == 0:
            # R.M: row1 += row2
            a, b = a + c, b + d
            undo.append(("R", -1))
        elif abs(c) >= abs(a):
            q = c // a
            c, d = c - q * a, d - q * b
            undo.append(("L", q))
        else:
            q = a // c
            a, b = a - q * c, b - q * d
            undo.append(("R", q))
    # now the matrix is [[a, b], [0, a]] with a = +-1
    if a == 1:
        tail = TorusTwistWord.of(("R", b))
    else:
        tail = _MINUS_IDENTITY_WORD + TorusTwistWord.of(("R", -b))
    return TorusTwistWord(tuple(undo)) + tail


# conj . letter . conj^-1 = L^chirality
_SINGLE_TWIST_TABLE: dict[tuple[str, int], tuple[int, TorusTwistWord]] = {
    ("L", 1): (1, TorusTwistWord()),
    ("L", -1): (-1, TorusTwistWord()),
    ("R", 1): (-1, _S_WORD),
    ("R", -1): (1, _S_WORD),
}


def single_twist_class(letter: tuple[str, int]) -> tuple[int, TorusTwistWord]:
    """Return ``(chirality, conjugator)`` with conjugator.letter.conjugator^-1 = L^chirality."""
    gen, e = letter
    if abs(e) != 1:
        raise NotASingleTwist(f"{gen}^{e} is not a single Dehn twist")
    try:
        return _SINGLE_TWIST_TABLE[(gen, e)]
    except KeyError:
        raise MalformedInput(f"unknown torus generator {gen!r}") from None
