import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import torus_words
from haken4.sl2z import (
    GEN_L,
    GEN_R,
    IDENTITY,
    MalformedInput,
    Mat2,
    NotASingleTwist,
    TorusTwistWord,
    eval_torus_word,
    factor,
    single_twist_class,
)


def mul(x, y):
    # plain nested-list product, independent of Mat2.__matmul__
    return [[sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def naive_eval(letters):
    gens = {"L": [[1, 0], [1, 1]], "R": [[1, 1], [0, 1]]}
    inv = {"L": [[1, 0], [-1, 1]], "R": [[1, -1], [0, 1]]}
    m = [[1, 0], [0, 1]]
    for g, e in letters:
        for _ in range(abs(e)):
            m = mul(m, gens[g] if e > 0 else inv[g])
    return m


# ---------------------------------------------------------------- Mat2


def test_mat2_rejects_bad_determinant():
    with pytest.raises(MalformedInput):
        Mat2(1, 1, 1, 1)
    with pytest.raises(MalformedInput):
        Mat2.parse("2 0 0 2")


def test_mat2_parse_and_str():
    m = Mat2.parse("2 1 1 1")
    assert m.rows() == ((2, 1), (1, 1))
    assert str(m) == "[[2,1],[1,1]]"
    with pytest.raises(MalformedInput):
        Mat2.parse("1 0 0")
    with pytest.raises(MalformedInput):
        Mat2.parse("a b c d")


def test_mat2_group_ops():
    m = Mat2(2, 1, 1, 1)
    assert m @ m.inverse() == IDENTITY
    assert m**0 == IDENTITY
    assert m**-2 == m.inverse() @ m.inverse()
    assert -(-m) == m


# ---------------------------------------------------------------- words


def test_torus_word_merges_and_drops_zeros():
    w = TorusTwistWord.of(("L", 2), ("L", -2), ("R", 1), ("R", 2), ("L", 0))
    assert w.letters == (("R", 3),)
    assert TorusTwistWord.parse("R.R^-1") == TorusTwistWord()


def test_torus_word_parse_roundtrip():
    w = TorusTwistWord.parse("R.L^-1.R^3")
    assert str(w) == "R.L^-1.R^3"
    assert TorusTwistWord.parse(str(w)) == w
    for empty in ("", "1", "id"):
        assert len(TorusTwistWord.parse(empty)) == 0
    with pytest.raises(MalformedInput):
        TorusTwistWord.parse("X^2")


def test_single_letters_split():
    assert TorusTwistWord.parse("L^2.R^-1").single_letters() == [("L", 1), ("L", 1), ("R", -1)]


# ---------------------------------------------------------------- eval


def test_eval_examples():
    assert eval_torus_word(TorusTwistWord()) == IDENTITY
    assert eval_torus_word(TorusTwistWord.parse("L")).rows() == ((1, 0), (1, 1))
    # R.L by hand: [[1,1],[0,1]] [[1,0],[1,1]] = [[2,1],[1,1]]
    assert eval_torus_word(TorusTwistWord.parse("R.L")).rows() == ((2, 1), (1, 1))


def test_generators_match_displayed_matrices():
    assert GEN_L.rows() == ((1, 0), (1, 1))
    assert GEN_R.rows() == ((1, 1), (0, 1))


@given(torus_words())
def test_eval_matches_naive_product(w):
    assert [list(r) for r in eval_torus_word(w).rows()] == naive_eval(w.letters)


@given(torus_words(5), torus_words(5))
def test_eval_is_monoid_morphism(w1, w2):
    assert eval_torus_word(w1 + w2) == eval_torus_word(w1) @ eval_torus_word(w2)


# ---------------------------------------------------------------- factor


def test_factor_examples():
    assert factor(IDENTITY) == TorusTwistWord()
    assert factor(Mat2(1, 0, 1, 1)) == TorusTwistWord.parse("L")
    minus = Mat2(-1, 0, 0, -1)
    w = factor(minus)
    assert eval_torus_word(w) == minus
    # (R.L^-1.R)^2 = -I checked by hand multiplication
    s = naive_eval([("R", 1), ("L", -1), ("R", 1)])
    assert s == [[0, 1], [-1, 0]]
    assert mul(s, s) == [[-1, 0], [0, -1]]


def test_factor_rejects_non_unimodular():
    with pytest.raises(MalformedInput):
        factor((2, 0, 0, 1))


@settings(max_examples=300)
@given(torus_words())
def test_factor_roundtrip(w):
    m = eval_torus_word(w)
    f = factor(m)
    assert eval_torus_word(f) == m
    gens = [g for g, _ in f]
    assert all(a != b for a, b in zip(gens, gens[1:]))


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_factor_negated(b, q):
    m = -(Mat2(1, b, 0, 1) @ Mat2(1, 0, q, 1))
    assert eval_torus_word(factor(m)) == m


# ---------------------------------------------------------------- single twists


@pytest.mark.parametrize(
    "letter,chi,conj",
    [(("L", 1), 1, ""), (("L", -1), -1, ""), (("R", 1), -1, "R.L^-1.R"), (("R", -1), 1, "R.L^-1.R")],
)
def test_single_twist_class_table(letter, chi, conj):
    got_chi, got_conj = single_twist_class(letter)
    assert got_chi == chi
    assert got_conj == TorusTwistWord.parse(conj)


@pytest.mark.parametrize("letter", [("L", 1), ("L", -1), ("R", 1), ("R", -1)])
def test_single_twist_class_conjugacy_equation(letter):
    chi, c = single_twist_class(letter)
    cm = naive_eval(c.letters)
    cinv = naive_eval(c.inverse().letters)
    assert mul(mul(cm, naive_eval([letter])), cinv) == naive_eval([("L", chi)])


def test_single_twist_class_errors():
    with pytest.raises(NotASingleTwist):
        single_twist_class(("L", 2))
    with pytest.raises(MalformedInput):
        single_twist_class(("X", 1))
