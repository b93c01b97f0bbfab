"""Small reference complexes used by tests, demos and the CLI docs.

All builders return validated Complex2 values.  Cocycles supplied here are
closed (zero signed sum around every triangle) and vanish on the BFS
spanning tree from the base vertex.
"""

from .complex2 import Complex2


def torus():
    """One vertex, edges a, b, c, two triangles; c is the diagonal (c ~ a+b)."""
    return Complex2(
        vertices=["v"],
        edges={"a": ("v", "v"), "b": ("v", "v"), "c": ("v", "v")},
        triangles={
            "t1": (("a", 1), ("b", 1), ("c", -1)),
            "t2": (("c", 1), ("a", -1), ("b", -1)),
        },
    )


def torus_cocycle_a():
    """Cocycle counting crossings of the b-curve: level shifts along a and c."""
    return {"a": 1, "b": 0, "c": 1}


def torus_cocycle_b():
    """Independent closed cocycle; with torus_cocycle_a it spans H^1."""
    return {"a": 0, "b": 1, "c": 1}


def wedge():
    """Wedge of two circles: free group presentation complex (no triangles)."""
    return Complex2(
        vertices=["v"],
        edges={"x": ("v", "v"), "y": ("v", "v")},
        triangles={},
    )


def disk(n=4):
    """Fan of n triangles around a hub vertex; the hub is interior."""
    if n < 3:
        raise ValueError("disk needs n >= 3")
    vertices = ["h"] + [f"m{j}" for j in range(n)]
    edges = {}
    triangles = {}
    for j in range(n):
        edges[f"s{j}"] = ("h", f"m{j}")
        edges[f"e{j}"] = (f"m{j}", f"m{(j + 1) % n}")
    for j in range(n):
        triangles[f"t{j}"] = ((f"s{j}", 1), (f"e{j}", 1), (f"s{(j + 1) % n}", -1))
    return Complex2(vertices=vertices, edges=edges, triangles=triangles, base_vertex="h")


def annulus(n=4, frontier=False):
    """Triangulated annulus with n triangles (n even); core track has weight n.

    With frontier=True both boundary circles are marked, making the fixture a
    stand-in for a two-ended truncated cover.
    """
    if n < 2 or n % 2:
        raise ValueError("annulus needs even n >= 2")
    m = n // 2
    vertices = [f"p{j}" for j in range(m)] + [f"q{j}" for j in range(m)]
    edges = {}
    triangles = {}
    for j in range(m):
        jn = (j + 1) % m
        edges[f"i{j}"] = (f"p{j}", f"p{jn}")
        edges[f"o{j}"] = (f"q{j}", f"q{jn}")
        edges[f"r{j}"] = (f"p{j}", f"q{j}")
        edges[f"d{j}"] = (f"p{j}", f"q{jn}")
    for j in range(m):
        jn = (j + 1) % m
        triangles[f"ta{j}"] = ((f"i{j}", 1), (f"r{jn}", 1), (f"d{j}", -1))
        triangles[f"tb{j}"] = ((f"d{j}", 1), (f"o{j}", -1), (f"r{j}", -1))
    fv, fe = set(), set()
    if frontier:
        fv = set(vertices)
        fe = {f"i{j}" for j in range(m)} | {f"o{j}" for j in range(m)}
    return Complex2(
        vertices=vertices,
        edges=edges,
        triangles=triangles,
        frontier_vertices=fv,
        frontier_edges=fe,
        base_vertex="p0",
    )


def mobius():
    """Minimal Moebius band: two triangles, one boundary circle (marked).

    The core track has weight 2 and is one-sided.
    """
    return Complex2(
        vertices=["u", "w"],
        edges={
            "b": ("w", "u"),   # boundary, bottom
            "g": ("u", "u"),   # diagonal loop
            "r": ("u", "w"),   # rung
            "t": ("u", "w"),   # boundary, top
        },
        triangles={
            "ta": (("g", 1), ("b", -1), ("r", -1)),
            "tb": (("t", 1), ("r", -1), ("g", -1)),
        },
        frontier_vertices={"u", "w"},
        frontier_edges={"b", "t"},
        base_vertex="u",
    )


def mobius_orientation_cocycle():
    """Orientation class of the Moebius band: closed over Z, zero on the BFS
    tree, and odd exactly on orientation-reversing loops (mod 2)."""
    return {"t": 2, "b": 0, "r": 1, "g": 1}


def genus2():
    """Closed genus-2 surface: octagon a b a' b' c d c' d' fanned into 6
    triangles by diagonals e2..e6 from the first corner."""
    word = [("a", 1), ("b", 1), ("a", -1), ("b", -1), ("c", 1), ("d", 1), ("c", -1), ("d", -1)]
    edges = {e: ("v", "v") for e in ("a", "b", "c", "d", "e2", "e3", "e4", "e5", "e6")}
    triangles = {}
    triangles["t1"] = (word[0], word[1], ("e2", -1))
    for i in range(2, 6):
        triangles[f"t{i}"] = ((f"e{i}", 1), word[i], (f"e{i + 1}", -1))
    triangles["t6"] = (("e6", 1), word[6], word[7])
    return Complex2(vertices=["v"], edges=edges, triangles=triangles)


def multiband():
    """Two one-vertex tori sharing the edge k: the group is F2 x Z with k
    central, so the cover along k has at least three (in fact many) ends."""
    edges = {
        "a1": ("v", "v"),
        "c1": ("v", "v"),
        "a2": ("v", "v"),
        "c2": ("v", "v"),
        "k": ("v", "v"),
    }
    triangles = {
        "t1a": (("a1", 1), ("k", 1), ("c1", -1)),
        "t1b": (("c1", 1), ("a1", -1), ("k", -1)),
        "t2a": (("a2", 1), ("k", 1), ("c2", -1)),
        "t2b": (("c2", 1), ("a2", -1), ("k", -1)),
    }
    return Complex2(vertices=["v"], edges=edges, triangles=triangles)


def nonorientable3():
    """Nonorientable genus-3 surface: hexagon a b b c c a fanned from one
    corner (sides reordered so no triangle repeats an edge)."""
    word = [("a", 1), ("b", 1), ("b", 1), ("c", 1), ("c", 1), ("a", 1)]
    edges = {e: ("v", "v") for e in ("a", "b", "c", "f2", "f3", "f4")}
    triangles = {
        "t1": (word[0], word[1], ("f2", -1)),
        "t2": (("f2", 1), word[2], ("f3", -1)),
        "t3": (("f3", 1), word[3], ("f4", -1)),
        "t4": (("f4", 1), word[4], word[5]),
    }
    return Complex2(vertices=["v"], edges=edges, triangles=triangles)


ALL = {
    "torus": torus,
    "wedge": wedge,
    "disk": disk,
    "annulus": annulus,
    "mobius": mobius,
    "genus2": genus2,
    "multiband": multiband,
    "nonorientable3": nonorientable3,
}
