import random

import pytest

from conftest import fixture_menu, jitter_coords, random_oriented_pattern

from tracks import fixtures
from tracks.hypgeom import assign_structure, total_length
from tracks.intersect import (
    CurvePath,
    EdgeWalk,
    NonTransverse,
    build_basis_lines,
    build_basis_loops,
    cut_and_paste,
    equivalence_basis,
    equivalent,
    intersection_number,
    intersection_points,
    split_partial_patterns,
)
from tracks.normalize import normalize
from tracks.pattern import Pattern, coboundary_pattern, component_split, is_normal, orient_pattern, sidedness
from tracks.search import pattern_from_edge_weights


def torus_slopes():
    Y = fixtures.torus()
    s10 = pattern_from_edge_weights(Y, {"b": 1, "c": 1}, point_prefix="u")
    s01 = pattern_from_edge_weights(Y, {"a": 1, "c": 1}, point_prefix="w")
    # distinct coordinates so the pair is transverse
    s01 = s01.with_coords({p: 0.4 for p in s01.points})
    return Y, s10, s01


def test_torus_slopes_cross_once():
    Y, s10, s01 = torus_slopes()
    H = assign_structure(Y)
    crossings = intersection_points(s10, s01, H)
    assert len(crossings) == 1


def test_parallel_copy_is_disjoint():
    Y = fixtures.annulus(4)
    H = assign_structure(Y)
    core = coboundary_pattern(Y, {"p0", "p1"})
    other = core.with_coords({p: 0.7 for p in core.points})
    other = Pattern(points={f"o{p}": v for p, v in other.points.items()},
                    edge_order={e: [f"o{p}" for p in v] for e, v in other.edge_order.items()},
                    chords=[(t, f"o{a}", f"o{b}") for t, a, b in other.chords])
    assert intersection_points(core, other, H) == []


def test_identical_patterns_non_transverse():
    Y = fixtures.annulus(4)
    H = assign_structure(Y)
    core = coboundary_pattern(Y, {"p0", "p1"})
    with pytest.raises(NonTransverse):
        intersection_points(core, core, H)


def test_intersection_number_empty_pattern_zero():
    Y = fixtures.torus()
    basis = build_basis_loops(Y)
    empty = Pattern.empty().with_orientation({})
    assert all(intersection_number(c, empty, Y) == 0 for c in basis)


def test_intersection_number_annulus_line_crosses_core_once():
    T = fixtures.torus()
    from tracks.complex2 import CoverSpec, build_cyclic_cover

    cov = build_cyclic_cover(T, CoverSpec(cocycle=fixtures.torus_cocycle_a()),
                             "truncated", radius=2)
    Y = cov.complex
    E = {v for v in Y.vertices if int(v.split("@")[1]) < 0}
    core = coboundary_pattern(Y, E)
    lines = build_basis_lines(Y)
    assert len(lines) == 1
    n = intersection_number(lines[0], core, Y)
    assert abs(n) == 1
    flipped = core.with_orientation({p: -d for p, d in core.orientation.items()})
    assert intersection_number(lines[0], flipped, Y) == -n
    loops = build_basis_loops(Y)
    assert all(intersection_number(c, core, Y) == 0 for c in loops)


def test_path_refinement_invariance():
    # inserting a step that enters and exits through the same gap adds zero
    Y = fixtures.annulus(4)
    core = coboundary_pattern(Y, {"p0", "p1"})
    loop = build_basis_loops(Y)[0]
    tid, (e_in, g_in), (e_out, g_out) = loop.steps[0]
    refined = CurvePath("loop", [
        (tid, (e_in, g_in), (e_in, g_in))] + list(loop.steps))
    # the degenerate step shares its gap with the first real step
    n1 = intersection_number(loop, core, Y)
    n2 = intersection_number(refined, core, Y)
    assert n1 == n2


def test_loop_retraverse_cancels():
    Y = fixtures.annulus(4)
    core = coboundary_pattern(Y, {"p0", "p1"})
    # cross the chord in ta0 and come straight back
    path = CurvePath("loop", [
        ("ta0", ("i0", 0), ("d0", 0)),
        ("tb0", ("d0", 0), ("d0", 1)),
        ("ta0", ("d0", 1), ("i0", 0)),
    ])
    # going around the point on d0 crosses its chords twice with opposite signs
    assert intersection_number(path, core, Y) == 0


def test_equivalent_self_and_reversed():
    T = fixtures.torus()
    from tracks.complex2 import CoverSpec, build_cyclic_cover

    cov = build_cyclic_cover(T, CoverSpec(cocycle=fixtures.torus_cocycle_a()),
                             "truncated", radius=2)
    Y = cov.complex
    E = {v for v in Y.vertices if int(v.split("@")[1]) < 0}
    core = coboundary_pattern(Y, E)
    assert equivalent(core, core, Y)
    flipped = core.with_orientation({p: -d for p, d in core.orientation.items()})
    assert not equivalent(core, flipped, Y)


def test_equivalent_coboundaries_of_same_bipartition():
    T = fixtures.torus()
    from tracks.complex2 import CoverSpec, build_cyclic_cover

    cov = build_cyclic_cover(T, CoverSpec(cocycle=fixtures.torus_cocycle_a()),
                             "truncated", radius=2)
    Y = cov.complex
    E = {v for v in Y.vertices if int(v.split("@")[1]) < 0}
    core = coboundary_pattern(Y, E)
    rng = random.Random(2)
    moved = jitter_coords(core, rng)
    assert equivalent(core, moved, Y)
    # a fattened E-region: shift the dividing line by one level
    E2 = {v for v in Y.vertices if int(v.split("@")[1]) < 1}
    core2 = coboundary_pattern(Y, E2)
    ren = Pattern(points={f"z{p}": v for p, v in core2.points.items()},
                  edge_order={e: [f"z{p}" for p in v] for e, v in core2.edge_order.items()},
                  chords=[(t, f"z{a}", f"z{b}") for t, a, b in core2.chords],
                  orientation={f"z{p}": d for p, d in core2.orientation.items()})
    assert equivalent(core, ren, Y)


def test_cut_and_paste_disjoint_additive():
    Y = fixtures.annulus(4)
    H = assign_structure(Y)
    core = coboundary_pattern(Y, {"p0", "p1"})
    other = Pattern(points={f"o{p}": (e, s + 0.9) for p, (e, s) in core.points.items()},
                    edge_order={e: [f"o{p}" for p in v] for e, v in core.edge_order.items()},
                    chords=[(t, f"o{a}", f"o{b}") for t, a, b in core.chords],
                    orientation={f"o{p}": d for p, d in core.orientation.items()})
    res = cut_and_paste(core, other, H, policy="oriented")
    assert res.crossings == 0
    assert res.complexity.weight == 8
    assert res.complexity.length == pytest.approx(res.inputs_complexity.length)


def test_torus_slopes_normal_policy_gives_slope_11():
    Y, s10, s01 = torus_slopes()
    H = assign_structure(Y)
    res = cut_and_paste(s10, s01, H, policy="normal")
    assert res.crossings == 1
    out = res.pattern
    assert out.weight() == 4
    assert is_normal(out)[0]
    comps = [c for c in component_split(out) if c.points]
    assert len(comps) == 1
    assert res.complexity.length < res.inputs_complexity.length - 1e-9
    assert res.complexity.weight == res.inputs_complexity.weight


def test_torus_slopes_non_normal_resolution_normalizes_back():
    Y, s10, s01 = torus_slopes()
    H = assign_structure(Y)
    d1 = orient_pattern(Y, s10)
    d2 = orient_pattern(Y, s01)
    s10o, s01o = s10.with_orientation(d1), s01.with_orientation(d2)
    res_norm = cut_and_paste(s10o, s01o, H, policy="normal")
    # force the other resolution explicitly
    res_bad = cut_and_paste(s10o, s01o, H, policy="explicit",
                            choices=[not _normal_choice(Y, H, s10o, s01o)])
    ok, offenders = is_normal(res_bad.pattern)
    assert not ok
    fixed = normalize(res_bad.pattern, Y)
    assert is_normal(fixed.pattern)[0]


def _normal_choice(Y, H, t1, t2):
    from tracks.intersect import _choose_smoothing, _merge_for_pair, intersection_points
    from tracks.pattern import boundary_cycle

    x = intersection_points(t1, t2, H)[0]
    merged = _merge_for_pair(t1, t2)
    bc = boundary_cycle(Y, merged, x.tid)
    return _choose_smoothing(Y, t1, t2, bc, x, "normal", None, 0)


def test_oriented_policy_preserves_basis_numbers(rng):
    for name, Y, pool in fixture_menu():
        H = assign_structure(Y)
        basis = equivalence_basis(Y)
        done = 0
        tries = 0
        while done < 6 and tries < 80:
            tries += 1
            t1 = random_oriented_pattern(Y, rng, pool=pool, bubbles=1, circles=0)
            t2 = random_oriented_pattern(Y, rng, pool=pool, bubbles=1, circles=0)
            t2 = Pattern(points={f"o{p}": v for p, v in t2.points.items()},
                         edge_order={e: [f"o{p}" for p in v] for e, v in t2.edge_order.items()},
                         chords=[(t, f"o{a}", f"o{b}") for t, a, b in t2.chords],
                         circles=t2.circles,
                         orientation={f"o{p}": d for p, d in t2.orientation.items()})
            try:
                res = cut_and_paste(t1, t2, H, policy="oriented")
            except NonTransverse:
                continue
            done += 1
            for c in basis:
                want = intersection_number(c, t1, Y) + intersection_number(c, t2, Y)
                assert intersection_number(c, res.pattern, Y) == want
            if res.crossings:
                assert res.complexity.length < res.inputs_complexity.length - 1e-9
            assert res.complexity.weight == res.inputs_complexity.weight
        assert done >= 3


def test_self_surgery_of_two_sided_pair_embeds_and_stays_equivalent():
    # the Lemma-2.8 mechanism on a two-component singular pattern: oriented
    # cut and paste at every self-crossing yields an embedded pattern in the
    # same equivalence class with strictly smaller complexity
    T = fixtures.torus()
    from tracks.complex2 import CoverSpec, build_cyclic_cover

    cov = build_cyclic_cover(T, CoverSpec(cocycle=fixtures.torus_cocycle_a()),
                             "truncated", radius=2)
    Y = cov.complex
    H = assign_structure(Y)
    E = {v for v in Y.vertices if int(v.split("@")[1]) < 0}
    core = coboundary_pattern(Y, E)
    # a crossing parallel copy: same track, coordinates interleaved the
    # other way on one edge
    coords = {}
    wiggle = Pattern(points={f"o{p}": v for p, v in core.points.items()},
                     edge_order={e: [f"o{p}" for p in v] for e, v in core.edge_order.items()},
                     chords=[(t, f"o{a}", f"o{b}") for t, a, b in core.chords],
                     orientation={f"o{p}": d for p, d in core.orientation.items()})
    new_coords = {}
    for p, (e, s) in wiggle.points.items():
        new_coords[p] = s + (0.8 if e.startswith("a@") else -0.8)
    wiggle = wiggle.with_coords(new_coords)
    res = cut_and_paste(core, wiggle, H, policy="oriented")
    assert res.crossings >= 1
    res.pattern.validate(Y)
    assert res.complexity.length < res.inputs_complexity.length - 1e-9
    for c in equivalence_basis(Y):
        want = intersection_number(c, core, Y) + intersection_number(c, wiggle, Y)
        assert intersection_number(c, res.pattern, Y) == want


def test_one_sided_pair_surgery_reduces_complexity():
    # Lemma-2.10 flavour: smoothing a one-sided track against a crossing
    # two-sided one leaves an embedded pattern of strictly smaller
    # complexity whose mod-2 class is odd, so some component is one-sided
    Y = fixtures.mobius()
    H = assign_structure(Y)
    core = Pattern.from_edge_points(
        {"r": [("x0", 0.0)], "g": [("y0", 0.0)]},
        [("ta", "x0", "y0"), ("tb", "x0", "y0")],
    )
    wrap = Pattern.from_edge_points(
        {"r": [("xm", 0.5), ("xp", 1.5)], "g": [("ym", -0.5), ("yp", 0.5)]},
        [("ta", "xm", "ym"), ("ta", "xp", "yp"),
         ("tb", "ym", "xp"), ("tb", "yp", "xm")],
    )
    core.validate(Y)
    wrap.validate(Y)
    assert sidedness(Y, core)[0] == "one_sided"
    assert sidedness(Y, wrap)[0] == "two_sided"
    crossings = intersection_points(core, wrap, H)
    assert len(crossings) == 2
    res = cut_and_paste(core, wrap, H, policy="normal")
    res.pattern.validate(Y)
    assert res.complexity.length < res.inputs_complexity.length - 1e-9
    comps = [c for c in component_split(res.pattern) if c.points]
    assert any(sidedness(Y, c)[0] == "one_sided" for c in comps)


def test_split_partial_additivity_torus_slopes():
    Y, s10, s01 = torus_slopes()
    H = assign_structure(Y)
    pieces1, pieces2 = split_partial_patterns(s10, s01, H)
    assert len(pieces1) == 1 and len(pieces2) == 1   # circles cut once stay connected
    assert sum(p.length for p in pieces1) == pytest.approx(total_length(s10, H), abs=1e-12)
    assert sum(p.weight for p in pieces1) == s10.weight()


def test_split_partial_two_crossings_two_pieces():
    Y = fixtures.annulus(4)
    H = assign_structure(Y)
    core = coboundary_pattern(Y, {"p0", "p1"})
    ring = coboundary_pattern(Y, {"p0", "q0"})   # separates square 0 from square 1
    ring = Pattern(points={f"o{p}": (e, 0.4) for p, (e, s) in ring.points.items()},
                   edge_order={e: [f"o{p}" for p in v] for e, v in ring.edge_order.items()},
                   chords=[(t, f"o{a}", f"o{b}") for t, a, b in ring.chords],
                   orientation={f"o{p}": d for p, d in ring.orientation.items()})
    crossings = intersection_points(core, ring, H)
    assert len(crossings) == 2
    pieces_core, pieces_ring = split_partial_patterns(core, ring, H)
    assert len(pieces_core) == 2
    assert sum(p.length for p in pieces_core) == pytest.approx(total_length(core, H), abs=1e-12)
    shortest = min(pieces_core, key=lambda p: p.complexity)
    assert shortest.complexity <= max(pieces_core, key=lambda p: p.complexity).complexity


def test_disjoint_split_returns_whole():
    Y = fixtures.annulus(4)
    H = assign_structure(Y)
    core = coboundary_pattern(Y, {"p0", "p1"})
    far = Pattern(points={f"o{p}": (e, s + 1.0) for p, (e, s) in core.points.items()},
                  edge_order={e: [f"o{p}" for p in v] for e, v in core.edge_order.items()},
                  chords=[(t, f"o{a}", f"o{b}") for t, a, b in core.chords])
    pieces1, pieces2 = split_partial_patterns(core, far, H)
    assert len(pieces1) == 1 and pieces1[0].weight == 4


def test_subadditivity_random_pairs(rng):
    checked = 0
    for name, Y, pool in fixture_menu():
        H = assign_structure(Y)
        tries = 0
        while tries < 60 and checked < 25:
            tries += 1
            t1 = random_oriented_pattern(Y, rng, pool=pool, bubbles=0, circles=0)
            t2 = random_oriented_pattern(Y, rng, pool=pool, bubbles=0, circles=0)
            t2 = Pattern(points={f"o{p}": v for p, v in t2.points.items()},
                         edge_order={e: [f"o{p}" for p in v] for e, v in t2.edge_order.items()},
                         chords=[(t, f"o{a}", f"o{b}") for t, a, b in t2.chords],
                         orientation={f"o{p}": d for p, d in t2.orientation.items()})
            try:
                res = cut_and_paste(t1, t2, H, policy="oriented")
            except NonTransverse:
                continue
            assert res.complexity.weight == t1.weight() + t2.weight()
            if res.crossings:
                assert res.complexity.length < res.inputs_complexity.length - 1e-9
                checked += 1
    assert checked >= 10
