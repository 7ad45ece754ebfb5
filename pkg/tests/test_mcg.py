import json
from math import gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import LANTERN, surface_words
from haken4.mcg import (
    ChartError,
    CurveData,
    SurfaceChart,
    TwistWord,
    UnknownCurve,
    builtin_chart,
    chain_chart,
    identity_matrix,
    is_symplectic,
    matmul,
    pairing,
    reduce,
    reduce_with_trace,
    rho,
    sp_inverse,
    symplectic_carrying,
    symplectic_form,
    theta_sequence,
    transvection,
)

EPS = ["1", "2", "3", "4"]
W = TwistWord.parse


def vecmat(v, m):
    return tuple(sum(v[k] * m[k][j] for k in range(len(v))) for j in range(len(m[0])))


# ---------------------------------------------------------------- planar oracle for the lantern chart
#
# The four-holed sphere is drawn as a plane region with holes at P[1..3] (hole 4
# is the point at infinity).  Doubling gives the genus-3 surface; a curve drawn
# in one half has class sum_i wind_i * a_i, where wind_i is its winding number
# about hole i (the signed count of crossings with the arc b_i from hole i out
# to hole 4).

P = {1: (0.0, 0.0), 2: (6.0, 0.0), 3: (3.0, 5.0)}


def square(center, r):
    x, y = center
    return [(x - r, y - r), (x + r, y - r), (x + r, y + r), (x - r, y + r)]


def stadium(p, q, half_width=2.0, overhang=2.0):
    """Counter-clockwise rectangle around segment pq."""
    (px, py), (qx, qy) = p, q
    dx, dy = qx - px, qy - py
    n = (dx * dx + dy * dy) ** 0.5
    ux, uy = dx / n, dy / n
    vx, vy = -uy, ux
    a = (px - overhang * ux, py - overhang * uy)
    b = (qx + overhang * ux, qy + overhang * uy)
    h = half_width
    return [
        (a[0] - h * vx, a[1] - h * vy),
        (b[0] - h * vx, b[1] - h * vy),
        (b[0] + h * vx, b[1] + h * vy),
        (a[0] + h * vx, a[1] + h * vy),
    ]


DRAWN = {
    "1": square(P[1], 1),
    "2": square(P[2], 1),
    "3": square(P[3], 1),
    "4": square((3, 2), 20),
    "alpha": stadium(P[1], P[2]),
    "beta": stadium(P[2], P[3]),
    "gamma": stadium(P[1], P[3]),
}


def winding(poly, pt):
    x, y = pt
    w = 0
    for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
        cross = (x2 - x1) * (y - y1) - (x - x1) * (y2 - y1)
        if y1 <= y < y2 and cross > 0:
            w += 1
        elif y2 <= y < y1 and cross < 0:
            w -= 1
    return w


def segments_cross(p1, p2, q1, q2):
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (v > 0) - (v < 0)

    return orient(p1, p2, q1) * orient(p1, p2, q2) < 0 and orient(q1, q2, p1) * orient(q1, q2, p2) < 0


def polygons_meet(a, b):
    ea = list(zip(a, a[1:] + a[:1]))
    eb = list(zip(b, b[1:] + b[:1]))
    return any(segments_cross(*s, *t) for s in ea for t in eb)


def oracle_class(name):
    w = [winding(DRAWN[name], P[i]) for i in (1, 2, 3)]
    return (w[0], 0, w[1], 0, w[2], 0)


def enclosed(name):
    return frozenset(i for i in (1, 2, 3) if winding(DRAWN[name], P[i]))


def test_lantern_homology_matches_planar_oracle():
    for name, data in LANTERN.curves.items():
        o = oracle_class(name)
        assert data.homology in (o, tuple(-x for x in o)), name


def test_lantern_disjointness_matches_drawing():
    names = list(LANTERN.curves)
    for i, c in enumerate(names):
        for d in names[i + 1:]:
            declared = LANTERN.commute(c, d)
            if declared:
                assert not polygons_meet(DRAWN[c], DRAWN[d]), (c, d)
            else:
                # two disjoint circles in the plane bound nested or disjoint discs,
                # so hole sets that overlap without nesting force an intersection
                s, t = enclosed(c), enclosed(d)
                assert s & t and not (s <= t or t <= s), (c, d)
                assert polygons_meet(DRAWN[c], DRAWN[d])


def test_lantern_chart_shape():
    assert LANTERN.genus == 3
    assert len(LANTERN.curves) == 7
    assert len(LANTERN.lanterns) == 1
    for e in EPS:
        for x in ["alpha", "beta", "gamma"] + EPS:
            if x != e:
                assert LANTERN.commute(e, x)
    assert sum(LANTERN.commute(e, f) for e in EPS for f in EPS if e < f) == 6


def test_chart_pairings_vanish_on_disjoint_pairs():
    for chart in (LANTERN, chain_chart(1), chain_chart(2), chain_chart(4)):
        for pair in chart.disjoint:
            c, d = sorted(pair)
            assert pairing(chart.curves[c].homology, chart.curves[d].homology) == 0


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_chain_chart(g):
    chart = chain_chart(g)
    names = list(chart.curves)
    assert len(names) == (2 if g == 1 else 2 * g + 1)
    assert chart.name == f"genus{g}"
    for i, c in enumerate(names):
        for j, d in enumerate(names):
            if abs(i - j) == 1:
                assert abs(pairing(chart.curves[c].homology, chart.curves[d].homology)) == 1
                assert not chart.commute(c, d)
            elif abs(i - j) >= 2:
                assert chart.commute(c, d)


def test_builtin_lookup():
    assert builtin_chart("lantern3").genus == 3
    assert builtin_chart("genus5").genus == 5
    assert builtin_chart("genus0") is None
    assert builtin_chart("torus") is None


# ---------------------------------------------------------------- chart validation


def test_chart_rejects_inconsistent_data():
    good = {"a": CurveData((1, 0)), "b": CurveData((0, 1))}
    with pytest.raises(ChartError):
        SurfaceChart("x", 1, good, disjoint=[("a", "b")])
    with pytest.raises(ChartError):
        CurveData((2, 0))
    with pytest.raises(ChartError):
        CurveData((0, 0))
    with pytest.raises(ChartError):
        CurveData((1, 0), separating=True)
    with pytest.raises(ChartError):
        SurfaceChart("x", 1, {"a": CurveData((1, 0, 0, 0))})
    with pytest.raises(ChartError):
        SurfaceChart("x", 1, good, disjoint=[("a", "z")])
    with pytest.raises(ChartError):
        SurfaceChart("x", 1, good, lanterns=[("a", "b", "a", "b", "a", "b", "z")])
    # a lantern tuple whose boundary curves are not declared disjoint
    with pytest.raises(ChartError):
        SurfaceChart("x", 3, LANTERN.curves, disjoint=[], lanterns=LANTERN.lanterns)


def test_chart_dict_roundtrip(tmp_path):
    doc = LANTERN.to_dict()
    again = SurfaceChart.from_dict(json.loads(json.dumps(doc)))
    assert again.to_dict() == doc
    path = tmp_path / "c.json"
    path.write_text(json.dumps(chain_chart(2).to_dict()))
    assert SurfaceChart.load(path).to_dict() == chain_chart(2).to_dict()
    with pytest.raises(ChartError):
        SurfaceChart.from_dict({"name": "x"})


def test_check_word_unknown_curve():
    with pytest.raises(UnknownCurve):
        LANTERN.check_word(W("f_delta"))
    with pytest.raises(UnknownCurve):
        rho(LANTERN, W("f_delta"))
    with pytest.raises(UnknownCurve):
        reduce(LANTERN, W("f_delta"))


# ---------------------------------------------------------------- words


def test_twist_word_parse_and_str():
    w = W("f_alpha.f_2^-1.f_alpha^3")
    assert w.letters == (("alpha", 1), ("2", -1), ("alpha", 3))
    assert str(w) == "f_alpha.f_2^-1.f_alpha^3"
    assert W(str(w)) == w
    assert len(W("")) == 0 and len(W("id")) == 0
    with pytest.raises(ChartError):
        W("g_alpha")


def test_twist_word_merging():
    w = TwistWord.of(("a", 2), ("a", -1), ("b", 0), ("c", 1))
    assert w.letters == (("a", 2), ("a", -1), ("c", 1))
    assert w.merged().letters == (("a", 1), ("c", 1))
    assert (w + w.inverse()).merged() == TwistWord()


# ---------------------------------------------------------------- transvections and rho


def test_transvection_genus_one():
    chart = chain_chart(1)  # c1 has class (1, 0)
    t = transvection(chart, "c1", 1)
    assert vecmat((1, 0), t) == (1, 0)
    img = vecmat((0, 1), t)
    assert img in ((1, 1), (-1, 1))
    assert matmul(t, transvection(chart, "c1", -1)) == identity_matrix(2)


def test_transvection_separating_is_identity():
    chart = SurfaceChart("sep", 2, {"s": CurveData((0, 0, 0, 0), separating=True), "a": CurveData((1, 0, 0, 0))})
    assert transvection(chart, "s", 3) == identity_matrix(4)


@given(st.sampled_from(sorted(LANTERN.curves)), st.integers(-4, 4))
def test_transvection_is_symplectic(c, e):
    t = transvection(LANTERN, c, e)
    assert is_symplectic(t)
    assert sp_inverse(t) == transvection(LANTERN, c, -e)


def test_transvection_formula_by_hand():
    # x -> x + e <x, c> c on every basis vector
    for c in LANTERN.curves:
        h = LANTERN.curves[c].homology
        t = transvection(LANTERN, c, 2)
        for i in range(6):
            x = tuple(int(i == k) for k in range(6))
            expect = tuple(xk + 2 * pairing(x, h) * hk for xk, hk in zip(x, h))
            assert vecmat(x, t) == expect


def test_rho_examples():
    assert rho(LANTERN, TwistWord()) == identity_matrix(6)
    assert rho(LANTERN, W("f_alpha.f_alpha^-1")) == identity_matrix(6)


def test_lantern_identity_under_rho():
    lhs = rho(LANTERN, W("f_gamma.f_beta.f_alpha"))
    rhs = rho(LANTERN, W("f_1.f_2.f_3.f_4"))
    assert lhs == rhs


@given(surface_words(max_len=6), surface_words(max_len=6))
def test_rho_is_homomorphism(w1, w2):
    assert rho(LANTERN, w1 + w2) == matmul(rho(LANTERN, w1), rho(LANTERN, w2))


def test_symplectic_form_shape():
    j = symplectic_form(2)
    assert j == ((0, 1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, 1), (0, 0, -1, 0))


primitive6 = st.lists(st.integers(-6, 6), min_size=6, max_size=6).filter(lambda v: gcd(*v) == 1)


@settings(max_examples=150)
@given(primitive6, primitive6)
def test_symplectic_carrying(u, v):
    m = symplectic_carrying(u, v)
    assert is_symplectic(m)
    assert vecmat(u, m) == tuple(v)


# ---------------------------------------------------------------- reduce


def test_theta_words():
    seq = theta_sequence()
    assert len(seq) == 8
    theta = {7 - i: w for i, w in enumerate(seq)}
    assert theta[7] == W("f_1^-1.f_gamma.f_2^-1.f_beta.f_3^-1.f_alpha.f_4^-1")
    assert theta[6] == theta[7] + W("f_4")
    assert len(theta[6]) == 8
    assert len(theta[0]) == 14
    assert theta[0] == theta[7] + W("f_4.f_alpha^-1.f_3.f_beta^-1.f_2.f_gamma^-1.f_1")


def test_reduce_examples():
    assert reduce(LANTERN, W("f_alpha^2.f_alpha^-2")) == TwistWord()
    seq = theta_sequence()
    assert reduce(LANTERN, seq[0]) == TwistWord()  # theta_7
    assert reduce(LANTERN, seq[7]) == TwistWord()  # theta_0


def test_theta7_needs_the_lantern_move():
    _, log = reduce_with_trace(LANTERN, theta_sequence()[0])
    assert any(ev[0] == "lantern" for ev in log)


def test_theta0_needs_only_commutation():
    _, log = reduce_with_trace(LANTERN, theta_sequence()[7])
    assert not any(ev[0] == "lantern" for ev in log)


def test_reduce_relator_and_non_relators():
    assert reduce(LANTERN, W("f_gamma.f_beta.f_alpha.f_4^-1.f_3^-1.f_2^-1.f_1^-1")) == TwistWord()
    assert len(reduce(LANTERN, W("f_alpha.f_beta"))) == 2
    assert reduce(LANTERN, W("f_2.f_alpha.f_2^-1")) == W("f_alpha")


def test_reduce_is_deterministic_on_commuting_letters():
    assert reduce(LANTERN, W("f_3.f_1")) == reduce(LANTERN, W("f_1.f_3"))


@settings(max_examples=150, deadline=None)
@given(surface_words())
def test_reduce_preserves_rho(w):
    assert rho(LANTERN, reduce(LANTERN, w)) == rho(LANTERN, w)


@settings(max_examples=150, deadline=None)
@given(surface_words())
def test_reduce_idempotent_and_shortening(w):
    r = reduce(LANTERN, w)
    assert reduce(LANTERN, r) == r
    assert r.twist_count() <= w.twist_count()
    assert r == r.merged()


@settings(max_examples=150, deadline=None)
@given(surface_words())
def test_reduce_commutes_only_disjoint_pairs(w):
    _, log = reduce_with_trace(LANTERN, w)
    for ev in log:
        if ev[0] == "commute":
            assert LANTERN.commute(ev[1], ev[2])


@settings(max_examples=100, deadline=None)
@given(surface_words(chain_chart(3), max_len=10))
def test_reduce_on_chain_chart(w):
    chart = chain_chart(3)
    r, log = reduce_with_trace(chart, w)
    assert rho(chart, r) == rho(chart, w)
    assert not any(ev[0] == "lantern" for ev in log)
    for ev in log:
        if ev[0] == "commute":
            assert chart.commute(ev[1], ev[2])


@given(surface_words(max_len=8))
def test_word_times_inverse_reduces_away(w):
    assume(len(w) > 0)
    assert reduce(LANTERN, w + w.inverse()) == TwistWord()
