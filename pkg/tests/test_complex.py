import pytest

from tracks import fixtures
from tracks.complex2 import Complex2, CoverSpec, InputError, build_cyclic_cover, parse_complex

TORUS_TEXT = """\
# minimal torus
vertex v
edge a v v
edge b v v
edge c v v
triangle t1 +a +b -c
triangle t2 +c -a -b
base v
"""


def test_parse_torus():
    Y = parse_complex(TORUS_TEXT)
    assert len(Y.vertices) == 1
    assert Y.euler_characteristic() == 0
    for e in Y.edge_ids:
        assert Y.valence(e) == 2


def test_parse_wedge_free_edges():
    Y = fixtures.wedge()
    assert Y.free_edges() == ["x", "y"]
    assert not Y.triangles


def test_dangling_reference_rejected():
    text = TORUS_TEXT.replace("triangle t2 +c -a -b", "triangle t2 +c -a -zz")
    with pytest.raises(InputError, match="unknown edge"):
        parse_complex(text)


def test_bad_chaining_rejected():
    with pytest.raises(InputError, match="chain"):
        Complex2(
            vertices=["u", "w"],
            edges={"e": ("u", "w"), "f": ("u", "w"), "g": ("u", "w")},
            triangles={"t": (("e", 1), ("f", 1), ("g", -1))},
        )


def test_repeated_edge_in_triangle_rejected():
    with pytest.raises(InputError, match="non-simplicial"):
        Complex2(
            vertices=["v"],
            edges={"a": ("v", "v"), "b": ("v", "v")},
            triangles={"t": (("a", 1), ("a", -1), ("b", 1))},
        )


def test_syntax_error_carries_line_number():
    with pytest.raises(InputError, match="line 2"):
        parse_complex("vertex v\nbogus line here\n")


def test_roundtrip_serialization():
    Y = fixtures.mobius()
    Y2 = parse_complex(Y.to_text())
    assert Y2.to_text() == Y.to_text()


def test_vertex_link_torus_is_circle():
    Y = fixtures.torus()
    link = Y.vertex_link("v")
    assert link.is_circle()
    assert len(link.nodes) == 6


def test_finite_cover_counts_and_deck():
    Y = fixtures.torus()
    cov = build_cyclic_cover(Y, CoverSpec(cocycle=fixtures.torus_cocycle_a()),
                             "finite", degree=3)
    C = cov.complex
    assert (len(C.vertices), len(C.edges), len(C.triangles)) == (3, 9, 6)
    # tau^3 = identity and tau acts freely
    for cell in list(C.vertices) + list(C.edges) + list(C.triangles):
        x = cell
        seen = set()
        for _ in range(3):
            assert x not in seen
            seen.add(x)
            x = cov.deck[x]
        assert x == cell


def test_finite_cover_is_valid_complex():
    Y = fixtures.torus()
    cov = build_cyclic_cover(Y, CoverSpec(cocycle=fixtures.torus_cocycle_a()),
                             "finite", degree=2)
    assert cov.complex.euler_characteristic() == 0


def test_truncated_cover_frontier():
    Y = fixtures.torus()
    cov = build_cyclic_cover(Y, CoverSpec(cocycle=fixtures.torus_cocycle_a()),
                             "truncated", radius=2)
    C = cov.complex
    assert len(C.vertices) == 5
    assert sorted(C.frontier_vertices) == ["v@-2", "v@2"]
    assert sorted(C.frontier_edges) == ["b@-2", "b@2"]


def test_truncated_covers_nest():
    Y = fixtures.torus()
    spec = CoverSpec(cocycle=fixtures.torus_cocycle_a())
    small = build_cyclic_cover(Y, spec, "truncated", radius=2).complex
    big = build_cyclic_cover(Y, spec, "truncated", radius=3).complex
    assert set(small.vertices) <= set(big.vertices)
    for e, ends in small.edges.items():
        assert big.edges[e] == ends
    for t, sides in small.triangles.items():
        assert big.triangles[t] == sides


def test_cocycle_must_vanish_on_tree():
    Y = fixtures.mobius()
    bad = dict(fixtures.mobius_orientation_cocycle())
    bad["b"] = 1          # b is the BFS tree edge
    with pytest.raises(InputError, match="spanning-tree"):
        build_cyclic_cover(Y, CoverSpec(cocycle=bad), "finite", degree=2)


def test_cocycle_must_close():
    Y = fixtures.torus()
    with pytest.raises(InputError, match="close around"):
        build_cyclic_cover(Y, CoverSpec(cocycle={"a": 1}), "truncated", radius=2)


def test_block_cover_of_torus():
    Y = fixtures.torus()
    spec = CoverSpec(cocycle=fixtures.torus_cocycle_a(),
                     cocycle2=fixtures.torus_cocycle_b())
    cov = build_cyclic_cover(Y, spec, "truncated", radius=2)
    C = cov.complex
    assert cov.kind == "block"
    assert len(C.vertices) == 25
    # the frontier ring is a single connected region
    from tracks.intersect import frontier_regions

    assert len(frontier_regions(C)) == 1


def test_subgroup_cover_traces_generator_loop():
    Y = fixtures.genus2()
    spec = CoverSpec(subgroup_words=["a"], coset_bound=200)
    cov = build_cyclic_cover(Y, spec, "truncated")
    tab = cov.coset_table
    # the subgroup word closes at the base coset
    assert tab.trace(1, [("a", 1)]) == 1
    # the corresponding loop is interior: its cells are not frontier marked
    assert "v@c1" not in cov.complex.frontier_vertices
    assert "a@c1" not in cov.complex.frontier_edges


def test_subgroup_cover_degenerate_warning():
    Y = fixtures.genus2()
    spec = CoverSpec(subgroup_words=["a"], coset_bound=1)
    cov = build_cyclic_cover(Y, spec, "truncated")
    assert cov.warnings


def test_universal_cover_of_wedge_is_tree():
    Y = fixtures.wedge()
    cov = build_cyclic_cover(Y, CoverSpec(subgroup_words=[], coset_bound=30),
                             "truncated")
    C = cov.complex
    assert not C.triangles
    # a tree: edges = vertices - 1
    assert len(C.edges) == len(C.vertices) - 1


def test_mobius_double_cover_is_annulus():
    Y = fixtures.mobius()
    cov = build_cyclic_cover(Y, CoverSpec(cocycle=fixtures.mobius_orientation_cocycle()),
                             "finite", degree=2)
    C = cov.complex
    assert len(C.triangles) == 4
    assert C.euler_characteristic() == 0
    # connected double cover
    tree, parent = C.spanning_tree()
    assert len(parent) == len(C.vertices)
