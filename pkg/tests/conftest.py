"""Shared helpers: deterministic random patterns built from enumerated
normal patterns plus edge bubbles and trivial circles."""

import random

import pytest

from tracks import fixtures
from tracks.pattern import Pattern, orient_pattern
from tracks.search import enumerate_normal


@pytest.fixture
def rng():
    return random.Random(20240809)


def jitter_coords(pat, rng, scale=0.35):
    """Random coordinates preserving the order on each edge."""
    coords = {}
    for e, lst in pat.edge_order.items():
        base = sorted(rng.uniform(-1.6, 1.6) for _ in lst)
        for p, s in zip(lst, base):
            coords[p] = s
    return pat.with_coords(coords)


def insert_bubble(pat, Y, e, rng, tag):
    """A null-homotopic circle crossing edge e twice: two adjacent points
    chorded to each other in every triangle around e."""
    out = pat.copy()
    lst = list(out.edge_order.get(e, []))
    gap = rng.randint(0, len(lst))
    if lst:
        if gap == 0:
            lo = out.points[lst[0]][1] - 1.0
            hi = out.points[lst[0]][1]
        elif gap == len(lst):
            lo = out.points[lst[-1]][1]
            hi = out.points[lst[-1]][1] + 1.0
        else:
            lo = out.points[lst[gap - 1]][1]
            hi = out.points[lst[gap]][1]
    else:
        lo, hi = -1.0, 1.0
    s1 = lo + (hi - lo) / 3.0
    s2 = lo + 2.0 * (hi - lo) / 3.0
    p, q = f"bub{tag}a", f"bub{tag}b"
    out.points[p] = (e, s1)
    out.points[q] = (e, s2)
    lst[gap:gap] = [p, q]
    out.edge_order[e] = lst
    chords = list(out.chords)
    for tid, _, _ in Y.edge_slots[e]:
        chords.append((tid, p, q))
    orientation = out.orientation
    if orientation is not None:
        orientation = dict(orientation)
        orientation[p] = 1
        orientation[q] = -1
    return Pattern(points=out.points, edge_order=out.edge_order, chords=chords,
                   circles=out.circles, orientation=orientation)


def random_oriented_pattern(Y, rng, pool=None, bubbles=2, circles=1):
    """An embedded oriented pattern: a random two-sided normal pattern plus
    random bubbles and trivial circles, at jittered coordinates."""
    if pool is None:
        pool = [p for p in enumerate_normal(Y, 4)]
    for _ in range(60):
        base = rng.choice(pool)
        dirs = orient_pattern(Y, base)
        if dirs is None:
            continue
        pat = jitter_coords(base.with_orientation(dirs), rng)
        interior = [e for e in Y.edge_ids if Y.valence(e) >= 1]
        for i in range(rng.randint(0, bubbles)):
            if not interior:
                break
            pat = insert_bubble(pat, Y, rng.choice(interior), rng, tag=f"{i}")
        pat = pat.copy()
        for _ in range(rng.randint(0, circles)):
            tid = rng.choice(Y.triangle_ids) if Y.triangle_ids else None
            if tid:
                pat.circles[tid] = pat.circles.get(tid, 0) + 1
        pat.validate(Y)
        return pat
    raise RuntimeError("could not build a two-sided random pattern")


def fixture_menu():
    """Fixtures with enumeration pools used by randomized suites."""
    out = []
    for name, Y in (
        ("torus", fixtures.torus()),
        ("annulus4", fixtures.annulus(4)),
        ("disk4", fixtures.disk(4)),
        ("genus2", fixtures.genus2()),
    ):
        out.append((name, Y, list(enumerate_normal(Y, 4))))
    return out
