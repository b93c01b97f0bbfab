"""Complement analysis: splitting, essentiality, elementary patterns, ends.

Cutting a complex along an embedded pattern leaves cells: triangle faces
(regions between chords), edge intervals (between consecutive points), and
vertices.  Components of the complement are unions of such cells; a
component counts as "infinite" iff it contains a frontier-marked cell, the
desk-scale proxy for escaping to infinity.  All verdicts derived from this
are truncation-radius-relative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .intersect import CurvePath, EdgeWalk, build_basis_lines, build_basis_loops, frontier_regions, intersection_number
from .pattern import Pattern, PatternError, boundary_cycle, component_split


@dataclass
class ComplementComponent:
    key: str
    cells: list                  # sorted cell descriptors
    infinite: bool
    bounding: list               # indices into the pattern component list
    orientation_summary: dict    # component index -> "in" | "out" | "mixed"


@dataclass
class ComplementReport:
    components: list
    cell_to_component: dict
    pattern_components: list
    chord_sides: dict            # chord -> [(neg, pos) component keys per segment]
    face_cycles: dict = field(default_factory=dict)   # (tid, face) -> orbit

    def infinite_components(self):
        return [c for c in self.components if c.infinite]


def _triangle_faces(Y, pat, tid):
    """Faces of one triangle cut along its chords, which may cross (singular
    unions).  A rotation-system face walk over the arrangement of boundary
    arcs and chord segments.

    Returns (faces, arc_face, seg_faces): face ids; boundary arc index ->
    adjacent face; chord -> [(left, right)] faces per segment, ordered from
    the chord's first stored endpoint, left meaning left of that direction.
    """
    bc = boundary_cycle(Y, pat, tid)
    chords = pat.chords_by_tri.get(tid, [])
    if bc.n == 0:
        return ["f0"], {}, {}, {"f0": []}

    crossings = []      # (chord1, chord2) with chord1 < chord2
    for i in range(len(chords)):
        for j in range(i + 1, len(chords)):
            if bc.chords_cross(chords[i], chords[j]):
                crossings.append((chords[i], chords[j]))

    # ordered crossing nodes along each chord, nested from its first endpoint
    on_chord = {c: [] for c in chords}
    for x in crossings:
        on_chord[x[0]].append(x)
        on_chord[x[1]].append(x)
    anchor = {}
    for c in chords:
        _, pa, pb = c
        a, b = bc.pos_of(pa), bc.pos_of(pb)

        def along(x, c=c, a=a, b=b):
            other = x[0] if x[1] == c else x[1]
            u, v = bc.pos_of(other[1]), bc.pos_of(other[2])
            inside = u if bc.between(a, b, u) else v
            return (inside - a) % bc.n

        on_chord[c].sort(key=along)
        anchor[(c, 0)] = a
        anchor[(c, 1)] = b

    # directed edges: ("arc", i, +-1) and ("seg", chord, seg index, +-1)
    def rev(d):
        return d[:-1] + (-d[-1],)

    def head(d):
        if d[0] == "arc":
            _, i, s = d
            return ("b", (i + 1) % bc.n if s > 0 else i)
        _, c, i, s = d
        nodes = [("b", bc.pos_of(c[1]))] + [("x", x) for x in on_chord[c]] + [("b", bc.pos_of(c[2]))]
        return nodes[i + 1] if s > 0 else nodes[i]

    rotations = {}
    chord_at_pos = {}
    for c in chords:
        chord_at_pos[bc.pos_of(c[1])] = ("seg", c, 0, 1)
        chord_at_pos[bc.pos_of(c[2])] = ("seg", c, len(on_chord[c]), -1)
    for pos in range(bc.n):
        rot = [("arc", pos, 1)]
        if pos in chord_at_pos:
            rot.append(chord_at_pos[pos])
        rot.append(("arc", (pos - 1) % bc.n, -1))
        rotations[("b", pos)] = rot
    for x in crossings:
        ends = []
        for c in (x[0], x[1]):
            j = on_chord[c].index(x) + 1     # node index along the chord
            # leaving toward the first endpoint: segment j-1 reversed
            ends.append((("seg", c, j - 1, -1), anchor[(c, 0)]))
            ends.append((("seg", c, j, 1), anchor[(c, 1)]))
        ends.sort(key=lambda ea: ea[1])
        rotations[("x", x)] = [e for e, _ in ends]

    def rot_next(d):
        r = rotations[head(d)]
        return r[(r.index(rev(d)) + 1) % len(r)]

    all_dedges = []
    for i in range(bc.n):
        all_dedges.append(("arc", i, 1))
        all_dedges.append(("arc", i, -1))
    for c in chords:
        for i in range(len(on_chord[c]) + 1):
            all_dedges.append(("seg", c, i, 1))
            all_dedges.append(("seg", c, i, -1))

    face_of = {}
    faces = []
    cycles = {}
    outer = set()
    d = ("arc", 0, 1)
    while d not in outer:
        outer.add(d)
        d = rot_next(d)
    counter = 0
    for d0 in all_dedges:
        if d0 in face_of or d0 in outer:
            continue
        fid = f"f{counter}"
        counter += 1
        faces.append(fid)
        cycles[fid] = []
        d = d0
        while d not in face_of:
            face_of[d] = fid
            cycles[fid].append(d)
            d = rot_next(d)

    arc_face = {}
    for i in range(bc.n):
        arc_face[i] = face_of[("arc", i, -1)]
    seg_faces = {}
    for c in chords:
        segs = []
        for i in range(len(on_chord[c]) + 1):
            # the face walk traces clockwise, so the orbit of a directed
            # segment lies on its right
            right = face_of[("seg", c, i, 1)]
            left = face_of[("seg", c, i, -1)]
            segs.append((left, right))
        seg_faces[c] = segs
    return faces, arc_face, seg_faces, cycles


def complement_components(Y, t: Pattern, want_cycles=False):
    """Cut Y along t and classify the complement."""
    t.validate(Y, allow_loose=True)
    comps = [c for c in component_split(t) if c.points]
    circle_comps = [c for c in component_split(t) if not c.points and c.circles]
    point_comp = {}
    for i, c in enumerate(comps):
        for p in c.points:
            point_comp[p] = i

    parent = {}

    def add(x):
        if x not in parent:
            parent[x] = x
        return x

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(add(a)), find(add(b))
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for v in Y.vertices:
        add(("V", v))
    for e in Y.edge_ids:
        m = len(t.edge_order.get(e, []))
        for k in range(m + 1):
            add(("E", e, k))
        a, b = Y.edges[e]
        union(("V", a), ("E", e, 0))
        union(("V", b), ("E", e, m))

    face_data = {}
    face_cycles = {}
    for tid in Y.triangle_ids:
        faces, arc_face, seg_faces, cycles = _triangle_faces(Y, t, tid)
        face_data[tid] = (faces, arc_face, seg_faces)
        if want_cycles:
            for f, cyc in cycles.items():
                face_cycles[(tid, f)] = cyc
        for f in faces:
            add(("F", tid, f))

    for e in Y.edge_ids:
        m = len(t.edge_order.get(e, []))
        for tid, k, sign in Y.edge_slots[e]:
            faces, arc_face, _ = face_data[tid]
            bc = boundary_cycle(Y, t, tid)
            for g in range(m + 1):
                g_trav = g if sign > 0 else m - g
                if bc.n == 0:
                    f = faces[0]
                else:
                    arc = bc.arc_of_gap(k, g_trav)
                    f = arc_face[arc]
                union(("E", e, g), ("F", tid, f))

    groups = {}
    for x in parent:
        groups.setdefault(find(x), []).append(x)

    frontier_cells = set()
    for v in Y.frontier_vertices:
        frontier_cells.add(("V", v))
    for e in Y.frontier_edges:
        m = len(t.edge_order.get(e, []))
        for k in range(m + 1):
            frontier_cells.add(("E", e, k))

    key_of = {}
    components = []
    chord_sides = {}
    for root in sorted(groups):
        cells = sorted(groups[root], key=repr)
        key = repr(cells[0])
        key_of[root] = key
        infinite = any(c in frontier_cells for c in cells)
        components.append(ComplementComponent(key=key, cells=cells, infinite=infinite,
                                              bounding=[], orientation_summary={}))
    comp_by_key = {c.key: c for c in components}
    cell_to_component = {x: key_of[find(x)] for x in parent}

    for tid in Y.triangle_ids:
        _, _, seg_faces = face_data[tid]
        for chord, segs in seg_faces.items():
            ctid, pa, pb = chord
            ci = point_comp[pa]
            side_list = []
            for (left, right) in segs:
                k_left = cell_to_component[("F", tid, left)]
                k_right = cell_to_component[("F", tid, right)]
                if t.orientation is not None:
                    # the positive side of (pa -> pb) holds the traversal arc
                    # from pa to pb, which lies right of the directed chord
                    side_bit = t.chord_side_bit(Y, ctid, pa, pb)
                    pair = (k_left, k_right) if side_bit == 1 else (k_right, k_left)
                else:
                    pair = (k_left, k_right)
                side_list.append(pair)
                for key in (k_left, k_right):
                    comp = comp_by_key[key]
                    if ci not in comp.bounding:
                        comp.bounding.append(ci)
            chord_sides[chord] = side_list

    # isolated points bound their two edge intervals
    for i, c in enumerate(comps):
        for p in c.points:
            if t.point_chords[p]:
                continue
            e, _ = t.points[p]
            idx = t.edge_order[e].index(p)
            for g in (idx, idx + 1):
                key = cell_to_component[("E", e, g)]
                comp = comp_by_key[key]
                if i not in comp.bounding:
                    comp.bounding.append(i)

    if t.orientation is not None:
        for comp in components:
            summary = {}
            for chord, side_list in chord_sides.items():
                ci = point_comp[chord[1]]
                for neg_key, pos_key in side_list:
                    if comp.key == pos_key:
                        summary.setdefault(ci, set()).add("in")
                    if comp.key == neg_key:
                        summary.setdefault(ci, set()).add("out")
            for i, c in enumerate(comps):
                for p in c.points:
                    if t.point_chords[p]:
                        continue
                    e, _ = t.points[p]
                    idx = t.edge_order[e].index(p)
                    d = t.orientation[p]
                    pos_gap = idx + 1 if d > 0 else idx
                    neg_gap = idx if d > 0 else idx + 1
                    if cell_to_component[("E", e, pos_gap)] == comp.key:
                        summary.setdefault(i, set()).add("in")
                    if cell_to_component[("E", e, neg_gap)] == comp.key:
                        summary.setdefault(i, set()).add("out")
            comp.orientation_summary = {
                ci: (vals.pop() if len(vals) == 1 else "mixed")
                for ci, vals in sorted(summary.items())
            }

    # each trivial circle bounds a finite disk of its own
    for j, c in enumerate(circle_comps):
        tid = min(c.circles)
        components.append(ComplementComponent(
            key=f"disk:{tid}:{j}", cells=[], infinite=False,
            bounding=[len(comps) + j], orientation_summary={}))

    return ComplementReport(components=components,
                            cell_to_component=cell_to_component,
                            pattern_components=comps + circle_comps,
                            chord_sides=chord_sides,
                            face_cycles=face_cycles)


def splits(Y, t: Pattern):
    """True iff cutting along t leaves at least two infinite pieces."""
    report = complement_components(Y, t)
    return len(report.infinite_components()) >= 2


def is_essential(Y, t: Pattern, basis=None):
    """All basis loops pair to zero and some frontier line does not.

    Returns (verdict, witness line or None).  The pattern must be oriented.
    """
    if t.orientation is None:
        raise PatternError("essentiality is defined for oriented patterns")
    loops = build_basis_loops(Y)
    lines = build_basis_lines(Y)
    if basis is not None:
        loops = [p for p in basis if p.kind == "loop"]
        lines = [p for p in basis if p.kind == "line"]
    for loop in loops:
        if intersection_number(loop, t, Y) != 0:
            return False, None
    for line in lines:
        if intersection_number(line, t, Y) != 0:
            return True, line
    return False, None


def extract_elementary(Y, t: Pattern):
    """The sub-pattern bounding a chosen infinite complement component,
    oriented inward; defined whenever t splits Y."""
    if t.orientation is None:
        raise PatternError("extract_elementary needs an oriented pattern")
    report = complement_components(Y, t)
    infinite = report.infinite_components()
    if len(infinite) < 2:
        raise PatternError("pattern does not split the complex")
    frontier_keyed = []
    for comp in infinite:
        fcells = [c for c in comp.cells if _is_frontier_cell(Y, c)]
        frontier_keyed.append((repr(sorted(fcells, key=repr)[0]), comp))
    _, U = min(frontier_keyed, key=lambda kv: kv[0])

    comps = report.pattern_components
    keep = []
    for ci in U.bounding:
        comp = comps[ci]
        if not comp.points:
            continue
        sides = set()
        for chord, side_list in report.chord_sides.items():
            if chord[1] in comp.points:
                for neg_key, pos_key in side_list:
                    if pos_key == U.key:
                        sides.add("pos")
                    if neg_key == U.key:
                        sides.add("neg")
        for p in comp.points:
            if not t.point_chords.get(p):
                e, _ = t.points[p]
                idx = t.edge_order[e].index(p)
                for g in (idx, idx + 1):
                    if report.cell_to_component[("E", e, g)] == U.key:
                        pos_gap = idx + 1 if t.orientation[p] > 0 else idx
                        sides.add("pos" if g == pos_gap else "neg")
        if len(sides) == 1:
            keep.append((ci, sides.pop()))
        # both sides in U: the component is interior to U's closure; drop it

    # drop components that bound a finite region all by themselves (say a
    # redundant vertex-link circle): they cap off compact junk inside U's
    # closure and contribute nothing to the splitting
    filtered = []
    comp_by_key = {c.key: c for c in report.components}
    for ci, side in keep:
        comp = comps[ci]
        far_keys = set()
        for chord, side_list in report.chord_sides.items():
            if chord[1] in comp.points:
                for pair in side_list:
                    far_keys.update(k for k in pair if k != U.key)
        for p in comp.points:
            if not t.point_chords.get(p):
                e, _ = t.points[p]
                idx = t.edge_order[e].index(p)
                for g in (idx, idx + 1):
                    k = report.cell_to_component[("E", e, g)]
                    if k != U.key:
                        far_keys.add(k)
        redundant = far_keys and all(
            not comp_by_key[k].infinite and comp_by_key[k].bounding == [ci]
            for k in far_keys
        )
        if not redundant:
            filtered.append((ci, side))
    keep = filtered

    points, order, chords = {}, {}, []
    orient = {}
    for ci, side in keep:
        comp = comps[ci]
        flip = side == "neg"
        for p in comp.points:
            points[p] = t.points[p]
            d = t.orientation[p]
            orient[p] = -d if flip else d
        chords.extend(comp.chords)
    for e, lst in t.edge_order.items():
        kept = [p for p in lst if p in points]
        if kept:
            order[e] = kept
    out = Pattern(points=points, edge_order=order, chords=chords, circles={},
                  orientation=orient)
    out.validate(Y)
    return out


def _is_frontier_cell(Y, cell):
    if cell[0] == "V":
        return cell[1] in Y.frontier_vertices
    if cell[0] == "E":
        return cell[1] in Y.frontier_edges
    return False


def is_splitting_vertex(Y, v):
    """A vertex is splitting when some component of its link bounds no
    compact piece of Y: every complement component of that link circle is
    frontier-touching.  Verdicts are truncation-radius-relative; compact
    complexes never have splitting vertices.

    Returns (verdict, witness link-component pattern or None).
    """
    from .pattern import component_split, link_pattern

    if v not in set(Y.vertices):
        raise PatternError(f"unknown vertex {v}")
    link = link_pattern(Y, v)
    for comp in component_split(link):
        if not comp.points:
            continue
        report = complement_components(Y, comp)
        if all(c.infinite for c in report.components):
            return True, comp
    return False, None


@dataclass
class EndCountEstimate:
    count: int
    stable: bool
    regions_small: int
    regions_big: int


def end_count_estimate(cover_small, cover_big):
    """Lower bound for the number of ends from two nested truncations.

    Frontier regions of the small cover that stay separated through the
    collar (the big cover minus the small cover's interior) are counted;
    the estimate is stable when the big cover shows the same count.
    """
    ys, yb = cover_small.complex, cover_big.complex
    regions_s = frontier_regions(ys)
    regions_b = frontier_regions(yb)
    small_cells = set(ys.cells())
    small_frontier = {("V", v) for v in ys.frontier_vertices} | {
        ("E", e) for e in ys.frontier_edges
    }

    collar_vertices = set()
    collar_edges = set()
    collar_triangles = set()
    for v in yb.vertices:
        if ("V", v) not in small_cells or ("V", v) in small_frontier:
            collar_vertices.add(v)
    for e in yb.edge_ids:
        if ("E", e) not in small_cells or ("E", e) in small_frontier:
            collar_edges.add(e)
    for t in yb.triangle_ids:
        if ("T", t) not in small_cells:
            collar_triangles.add(t)

    parent = {}

    def add(x):
        if x not in parent:
            parent[x] = x

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        add(a)
        add(b)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for v in collar_vertices:
        add(("V", v))
    for e in collar_edges:
        a, b = yb.edges[e]
        if a in collar_vertices:
            union(("E", e), ("V", a))
        if b in collar_vertices:
            union(("E", e), ("V", b))
        add(("E", e))
    for t in collar_triangles:
        add(("T", t))
        for e, _ in yb.triangles[t]:
            if e in collar_edges:
                union(("T", t), ("E", e))
        for v in yb.corners[t]:
            if v in collar_vertices:
                union(("T", t), ("V", v))

    classes = {}
    for key, cells in sorted(regions_s.items()):
        anchor = None
        for c in cells:
            if c in parent:
                anchor = find(c)
                break
        classes.setdefault(anchor if anchor is not None else ("iso", key), set()).add(key)
    count = len(classes)
    stable = count == len(regions_b) and count == len(regions_s)
    return EndCountEstimate(count=count, stable=stable,
                            regions_small=len(regions_s), regions_big=len(regions_b))
