import math
import random

import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from tracks import fixtures
from tracks.hypgeom import (
    TANGENCY_SIDE,
    Complexity,
    assign_structure,
    chord_len_uv,
    chord_length,
    geodesic_between,
    hyp_dist,
    length_gradient,
    minimize_length,
    pattern_complexity,
    side_point,
    total_length,
)
from tracks.pattern import Pattern, coboundary_pattern

coords = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


def geodesic_quadrature(z, w):
    """Independent oracle: integrate ds = |dz| / Im z along the circular-arc
    geodesic between two upper half-plane points."""
    if abs(z - w) < 1e-15:
        return 0.0
    c, r = geodesic_between(z, w)
    if r is None:
        ya, yb = sorted((z.imag, w.imag))
        val, _ = quad(lambda y: 1.0 / y, ya, yb, epsabs=1e-13, epsrel=1e-13)
        return val
    th1 = math.atan2(z.imag, z.real - c)
    th2 = math.atan2(w.imag, w.real - c)
    a, b = sorted((th1, th2))
    val, _ = quad(lambda t: 1.0 / math.sin(t), a, b, epsabs=1e-13, epsrel=1e-13)
    return val


def test_tangency_constant():
    assert TANGENCY_SIDE == pytest.approx(math.acosh(1.5), abs=1e-15)
    for s in range(3):
        for t in range(3):
            if s != t:
                assert hyp_dist(side_point(s, 0.0), side_point(t, 0.0)) == pytest.approx(
                    TANGENCY_SIDE, abs=1e-12
                )


@settings(max_examples=60, deadline=None)
@given(coords, coords)
def test_chord_formula_against_point_distance(u, v):
    for s in range(3):
        t = (s + 1) % 3
        d = hyp_dist(side_point(s, u), side_point(t, v))
        assert chord_len_uv(u, v) == pytest.approx(d, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(coords, coords)
def test_chord_formula_against_quadrature(u, v):
    z, w = side_point(0, u), side_point(1, v)
    assert chord_len_uv(u, v) == pytest.approx(geodesic_quadrature(z, w), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(coords, coords, coords, coords)
def test_convexity_midpoint(u1, v1, u2, v2):
    mid = chord_len_uv((u1 + u2) / 2.0, (v1 + v2) / 2.0)
    avg = 0.5 * (chord_len_uv(u1, v1) + chord_len_uv(u2, v2))
    assert mid <= avg + 1e-9


@settings(max_examples=40, deadline=None)
@given(coords, coords)
def test_triangle_inequality_in_one_chart(u, v):
    p, q, r = side_point(0, u), side_point(1, v), side_point(2, 0.3)
    assert hyp_dist(p, q) <= hyp_dist(p, r) + hyp_dist(r, q) + 1e-12


def test_complexity_order_and_addition():
    a = Complexity(1, 10.0)
    b = Complexity(2, 0.5)
    c = Complexity(1, 0.4)
    assert a < b and c < a and not (b < a)
    assert (a + b).as_tuple() == (3, 10.5)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 9), st.floats(0, 50, allow_nan=False),
       st.integers(0, 9), st.floats(0, 50, allow_nan=False))
def test_complexity_lexicographic_axioms(w1, l1, w2, l2):
    c1, c2 = Complexity(w1, l1), Complexity(w2, l2)
    assert (c1 < c2) == ((w1, l1) < (w2, l2))


def test_assign_structure_torus_defaults():
    Y = fixtures.torus()
    H = assign_structure(Y)
    assert all(H.slot_offset(t, k) == 0.0 for t in Y.triangle_ids for k in range(3))


def test_assign_structure_shear_passthrough():
    Y = fixtures.torus()
    H = assign_structure(Y, {"c": 0.7})
    offs = [H.slot_offset(t, k) for t in Y.triangle_ids for k in range(3)
            if Y.triangles[t][k][0] == "c"]
    assert sorted(offs) == [0.0, 0.7]


def test_shear_on_free_edge_rejected():
    Y = fixtures.wedge()
    with pytest.raises(ValueError, match="free edge"):
        assign_structure(Y, {"x": 0.3})


def test_cover_inherits_shears():
    from tracks.complex2 import CoverSpec, build_cyclic_cover

    Y = fixtures.torus()
    Y.shears["c"] = 0.25
    cov = build_cyclic_cover(Y, CoverSpec(cocycle=fixtures.torus_cocycle_a()),
                             "finite", degree=3)
    H = assign_structure(cov.complex)
    for e in cov.complex.edge_ids:
        if cov.cell_base[e] == "c":
            assert H.shears[e] == 0.25


def test_same_edge_chord_measures_along_edge():
    Y = fixtures.torus()
    H = assign_structure(Y)
    assert chord_length(H, "t1", ("a", 0.8), ("a", -0.8)) == pytest.approx(1.6)
    assert chord_length(H, "t1", ("a", 0.3), ("a", 0.3)) == 0.0


def test_annulus_core_complexity_at_tangency():
    Y = fixtures.annulus(4)
    H = assign_structure(Y)
    pat = coboundary_pattern(Y, {"p0", "p1"})
    comp = pattern_complexity(pat, H)
    assert comp.weight == 4
    assert comp.length == pytest.approx(4 * TANGENCY_SIDE, abs=1e-12)


def test_complexity_rejects_trivial_circles():
    Y = fixtures.torus()
    H = assign_structure(Y)
    pat = Pattern(points={}, edge_order={}, chords=[], circles={"t1": 1})
    with pytest.raises(ValueError, match="trivial circles"):
        pattern_complexity(pat, H)


def test_empty_pattern_complexity():
    Y = fixtures.torus()
    H = assign_structure(Y)
    assert pattern_complexity(Pattern.empty(), H).as_tuple() == (0, 0.0)


def test_free_edge_point_has_zero_length():
    Y = fixtures.wedge()
    H = assign_structure(Y)
    pat = Pattern.from_edge_points({"x": [("p", 0.0)]}, [])
    pat.validate(Y)
    assert pattern_complexity(pat, H).as_tuple() == (1, 0.0)


def _random_coords(pat, rng):
    coords = {}
    for e, lst in pat.edge_order.items():
        vals = sorted(rng.uniform(-2.0, 2.0) for _ in lst)
        for p, v in zip(lst, vals):
            coords[p] = v
    return coords


def test_gradient_matches_central_differences():
    rng = random.Random(7)
    Y = fixtures.annulus(4)
    H = assign_structure(Y, {"d0": 0.4})
    pat = coboundary_pattern(Y, {"p0", "p1"})
    h = 1e-6
    for _ in range(25):
        coords = _random_coords(pat, rng)
        grad = length_gradient(pat, H, coords)
        for p in pat.points:
            up = dict(coords, **{p: coords[p] + h})
            dn = dict(coords, **{p: coords[p] - h})
            fd = (total_length(pat, H, up) - total_length(pat, H, dn)) / (2 * h)
            denom = max(1.0, abs(fd))
            assert abs(grad[p] - fd) / denom < 1e-6


def _lone_triangle():
    from tracks.complex2 import Complex2

    return Complex2(
        vertices=["u", "v", "w"],
        edges={"e0": ("u", "v"), "e1": ("v", "w"), "e2": ("w", "u")},
        triangles={"t": (("e0", 1), ("e1", 1), ("e2", 1))},
    )


def test_minimize_single_free_chord_descends():
    # a lone chord can slide toward the ideal vertex its sides share, so
    # there is no attained minimum: descent is monotone and the optimizer
    # reports its best iterate honestly
    Y = _lone_triangle()
    H = assign_structure(Y)
    pat = Pattern.from_edge_points(
        {"e0": [("p", 1.3)], "e1": [("q", -0.9)]},
        [("t", "p", "q")],
    )
    pat.validate(Y)
    res = minimize_length(pat, H, tol=1e-12, max_iter=40)
    for a, b in zip(res.lengths, res.lengths[1:]):
        assert b <= a + 1e-12
    assert res.lengths[-1] < res.lengths[0]
    # cross-check the final gradient against central differences
    grad = length_gradient(pat, H, res.positions)
    h = 1e-6
    for p in pat.points:
        up = dict(res.positions, **{p: res.positions[p] + h})
        dn = dict(res.positions, **{p: res.positions[p] - h})
        fd = (total_length(pat, H, up) - total_length(pat, H, dn)) / (2 * h)
        assert abs(grad[p] - fd) < 1e-5


def test_minimize_monotone_and_critical():
    Y = fixtures.annulus(6)
    H = assign_structure(Y, {"d0": 0.8, "r1": -0.5})
    pat = coboundary_pattern(Y, {"p0", "p1", "p2"})
    rng = random.Random(3)
    pat = pat.with_coords(_random_coords(pat, rng))
    res = minimize_length(pat, H, tol=1e-12, max_iter=400)
    assert res.converged
    for a, b in zip(res.lengths, res.lengths[1:]):
        assert b <= a + 1e-12
    assert res.grad_norm < 1e-7
    assert not res.coincidences


def test_minimize_symmetric_annulus_fixed_point():
    # with zero shears the all-tangency configuration is already critical
    Y = fixtures.annulus(4)
    H = assign_structure(Y)
    pat = coboundary_pattern(Y, {"p0", "p1"})
    res = minimize_length(pat, H, tol=1e-12)
    assert res.complexity.length == pytest.approx(4 * TANGENCY_SIDE, abs=1e-9)
    for p, s in res.positions.items():
        assert abs(s) < 1e-9
    grad = length_gradient(pat, H, res.positions)
    assert max(abs(g) for g in grad.values()) < 1e-9


def test_minimize_rejects_non_normal():
    Y = fixtures.torus()
    H = assign_structure(Y)
    pat = Pattern(points={}, edge_order={}, chords=[], circles={"t1": 1})
    with pytest.raises(ValueError, match="normal"):
        minimize_length(pat, H)
