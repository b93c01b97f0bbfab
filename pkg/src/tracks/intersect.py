"""Transverse intersections, intersection numbers, equivalence, surgery.

Crossing detection is combinatorial: two geodesic chords of one ideal
triangle cross iff their endpoints interleave in the boundary cyclic order.
Coordinates enter only when lengths or crossing positions are measured.
Non-transverse contact (shared edge points, hence coincident or tangent
chords) is detected and reported, never resolved by perturbation.

Test curves come in two flavours: triangle transits (CurvePath) for
complexes with 2-cells, and edge walks (EdgeWalk) for bare graphs.  On a
complex that mixes triangles with free edges the generated basis only sees
the triangle part; isolated free-edge points are invisible to it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hypgeom import Complexity, geodesic_crossing, hyp_dist, total_length
from .pattern import Pattern, PatternError, boundary_cycle, canonical_chord


class NonTransverse(Exception):
    def __init__(self, report):
        self.report = report
        super().__init__(f"non-transverse configuration: {report}")


# -- curve paths -----------------------------------------------------------------


@dataclass
class CurvePath:
    """A combinatorial transversal: a loop, or a frontier-to-frontier line.

    Steps are (triangle, (edge_in, gap_in), (edge_out, gap_out)); gaps are
    edge-order indices 0..m (0 sits before every pattern point, so gap-0
    paths stay valid while patterns change).
    """

    kind: str                  # "loop" | "line"
    steps: list

    def validate(self, Y):
        if self.kind not in ("loop", "line"):
            raise PatternError(f"bad path kind {self.kind}")
        if not self.steps:
            raise PatternError("path has no steps")
        for tid, (e_in, _), (e_out, _) in self.steps:
            if tid not in Y.triangles:
                raise PatternError(f"path step in unknown triangle {tid}")
            Y.slot_of(tid, e_in)
            Y.slot_of(tid, e_out)
        pairs = list(zip(self.steps, self.steps[1:]))
        if self.kind == "loop":
            pairs.append((self.steps[-1], self.steps[0]))
        for (_, _, out1), (_, in2, _) in pairs:
            if out1 != in2:
                raise PatternError(f"path steps do not share an edge gap: {out1} vs {in2}")
        if self.kind == "line":
            if self.steps[0][1][0] not in Y.frontier_edges or self.steps[-1][2][0] not in Y.frontier_edges:
                raise PatternError("line must start and end on frontier edges")

    def step_marks(self, Y, pat):
        """Per step, the doubled boundary positions of the entry and exit
        marks relative to pat's points (points sit at odd positions)."""
        out = []
        for tid, (e_in, g_in), (e_out, g_out) in self.steps:
            bc = boundary_cycle(Y, pat, tid)
            out.append((tid, (_gap_mark(Y, pat, bc, tid, e_in, g_in),
                              _gap_mark(Y, pat, bc, tid, e_out, g_out))))
        return out

    def to_text(self):
        lines = [self.kind]
        for tid, (e_in, g_in), (e_out, g_out) in self.steps:
            lines.append(f"step {tid} {e_in},{g_in} {e_out},{g_out}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text):
        from .complex2 import InputError

        kind = None
        steps = []
        for ln, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] in ("loop", "line") and len(parts) == 1:
                kind = parts[0]
            elif parts[0] == "step" and len(parts) == 4:
                def gap(tok):
                    e, g = tok.rsplit(",", 1)
                    return (e, int(g))
                steps.append((parts[1], gap(parts[2]), gap(parts[3])))
            else:
                raise InputError(f"unrecognized path line {line!r}", ln)
        if kind is None:
            raise InputError("path file missing loop/line header")
        return CurvePath(kind, steps)


@dataclass
class EdgeWalk:
    """A path in the 1-skeleton of a bare graph, transverse to edge points.

    Traversing (e, +1) runs the whole edge forward and crosses every pattern
    point on it; the sign of each crossing compares the walk direction with
    the point's transverse direction bit.
    """

    kind: str                  # "loop" | "line"
    steps: list                # [(edge, sign)]

    def validate(self, Y):
        if not self.steps:
            raise PatternError("walk has no steps")
        cur = None
        first = None
        for e, s in self.steps:
            a, b = Y.edges[e]
            u, v = (a, b) if s > 0 else (b, a)
            if cur is None:
                first = u
            elif u != cur:
                raise PatternError("edge walk does not chain")
            cur = v
        if self.kind == "loop" and cur != first:
            raise PatternError("edge walk loop does not close")
        if self.kind == "line":
            if first not in Y.frontier_vertices or cur not in Y.frontier_vertices:
                raise PatternError("edge walk line must join frontier vertices")


def _gap_mark(Y, pat, bc, tid, edge, gap):
    k, sign = Y.slot_of(tid, edge)
    m = len(pat.edge_order.get(edge, []))
    if not 0 <= gap <= m:
        raise PatternError(f"gap {gap} out of range on edge {edge}")
    g_trav = gap if sign > 0 else m - gap
    if bc.n == 0:
        return 0
    return (2 * (bc.slot_base[k] + g_trav)) % (2 * bc.n)


def _cyc(a, b, x):
    if a == b:
        return False
    if a < b:
        return a < x < b
    return x > a or x < b


def intersection_number(path, t: Pattern, Y):
    """Signed crossings of an oriented pattern with a transversal path."""
    if t.orientation is None:
        raise PatternError("intersection numbers need an oriented pattern")
    path.validate(Y)
    if isinstance(path, EdgeWalk):
        total = 0
        for e, s in path.steps:
            for p in t.edge_order.get(e, []):
                total += s * t.orientation[p]
        return total
    total = 0
    for tid, (e_in, g_in), (e_out, g_out) in path.steps:
        chords = t.chords_by_tri.get(tid, [])
        if not chords:
            continue
        bc = boundary_cycle(Y, t, tid)
        a = _gap_mark(Y, t, bc, tid, e_in, g_in)
        b = _gap_mark(Y, t, bc, tid, e_out, g_out)
        for (ctid, pa, pb) in chords:
            pos_a = 2 * bc.pos_of(pa) + 1
            pos_b = 2 * bc.pos_of(pb) + 1
            in_a = _cyc(a, b, pos_a)
            in_b = _cyc(a, b, pos_b)
            if in_a == in_b:
                continue
            side_bit = t.chord_side_bit(Y, ctid, pa, pb)
            exit_in_pos_side = _cyc(pos_a, pos_b, b)
            total += side_bit if exit_in_pos_side else -side_bit
    return total


# -- basis curves ------------------------------------------------------------------


def _dual_graph(Y):
    """Arcs between consecutive slots around each edge (a chain per edge;
    branch-edge cliques would add only null-homotopic classes)."""
    arcs = []
    for e in Y.edge_ids:
        slots = Y.edge_slots[e]
        for (t1, _, _), (t2, _, _) in zip(slots, slots[1:]):
            arcs.append((e, t1, t2))
    return arcs


def _hops_to_steps(arcs, hops):
    """hops: cyclic or open [(t_from, t_to, arc index)].  Between crossing
    arc j and arc j+1 the curve runs inside triangle to_j."""
    steps = []
    n = len(hops)
    for j in range(n - 1):
        e_in = arcs[hops[j][2]][0]
        e_out = arcs[hops[j + 1][2]][0]
        steps.append((hops[j][1], (e_in, 0), (e_out, 0)))
    return steps


def build_basis_loops(Y):
    """One transversal loop per non-tree arc of the dual graph; bare graphs
    get edge-walk loops, one per non-tree edge."""
    if not Y.triangles:
        return _graph_basis_loops(Y)
    arcs = _dual_graph(Y)
    adj = {}
    for i, (e, t1, t2) in enumerate(arcs):
        adj.setdefault(t1, []).append((t2, i))
        adj.setdefault(t2, []).append((t1, i))
    parent = {}
    tree = set()
    for root in Y.triangle_ids:
        if root in parent:
            continue
        parent[root] = None
        queue = [root]
        while queue:
            v = queue.pop(0)
            for (w, i) in sorted(adj.get(v, [])):
                if w not in parent:
                    parent[w] = (v, i)
                    tree.add(i)
                    queue.append(w)

    def up(x):
        out = []
        while parent[x] is not None:
            prev, i = parent[x]
            out.append((x, prev, i))
            x = prev
        return out, x

    loops = []
    for i, (e, t1, t2) in enumerate(arcs):
        if i in tree:
            continue
        ua, ra = up(t2)
        ub, rb = up(t1)
        if ra != rb:
            continue
        while ua and ub and ua[-1][2] == ub[-1][2]:
            ua.pop()
            ub.pop()
        down = [(b, a, k) for (a, b, k) in reversed(ub)]
        hops = [(t1, t2, i)] + ua + down        # t1 -> t2 -> ... -> t1
        hops.append(hops[0])                    # close to pair final/initial
        steps = _hops_to_steps(arcs, hops)
        loops.append(CurvePath("loop", steps))
    return loops


def _graph_spanning_tree(Y):
    parent = {Y.base_vertex: None}
    tree = set()
    queue = [Y.base_vertex]
    while queue:
        v = queue.pop(0)
        for e in Y.edge_ids:
            a, b = Y.edges[e]
            if a == v and b not in parent:
                parent[b] = (v, e, 1)
                tree.add(e)
                queue.append(b)
            if b == v and a not in parent:
                parent[a] = (v, e, -1)
                tree.add(e)
                queue.append(a)
    return tree, parent


def _graph_path_to(parent, v):
    steps = []
    while parent[v] is not None:
        prev, e, s = parent[v]
        steps.append((e, s))
        v = prev
    return list(reversed(steps))


def _graph_basis_loops(Y):
    tree, parent = _graph_spanning_tree(Y)
    loops = []
    for e in Y.edge_ids:
        if e in tree:
            continue
        a, b = Y.edges[e]
        to_a = _graph_path_to(parent, a)
        to_b = _graph_path_to(parent, b)
        back = [(ee, -ss) for ee, ss in reversed(to_b)]
        loops.append(EdgeWalk("loop", to_a + [(e, 1)] + back))
    return loops


def frontier_regions(Y):
    """Connected components of the frontier subcomplex, keyed by smallest cell."""
    cells = [("V", v) for v in sorted(Y.frontier_vertices)] + [
        ("E", e) for e in sorted(Y.frontier_edges)
    ]
    parent = {c: c for c in cells}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in sorted(Y.frontier_edges):
        for v in Y.edges[e]:
            ra, rb = find(("E", e)), find(("V", v))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for c in cells:
        groups.setdefault(find(c), []).append(c)
    return {min(v): sorted(v) for v in groups.values()}


def build_basis_lines(Y):
    """One line per unordered pair of distinct frontier regions."""
    regions = frontier_regions(Y)
    keys = sorted(regions)
    if len(keys) < 2:
        return []
    if not Y.triangles:
        return _graph_basis_lines(Y, regions, keys)

    entries = {}
    for key in keys:
        for kind, e in regions[key]:
            if kind == "E" and Y.edge_slots[e]:
                entries[key] = (e, Y.edge_slots[e][0][0])
                break

    arcs = _dual_graph(Y)
    adj = {}
    for i, (e, t1, t2) in enumerate(arcs):
        adj.setdefault(t1, []).append((t2, i))
        adj.setdefault(t2, []).append((t1, i))

    def dual_route(t_from, t_to):
        prev = {t_from: None}
        queue = [t_from]
        while queue:
            v = queue.pop(0)
            if v == t_to:
                break
            for (w, i) in sorted(adj.get(v, [])):
                if w not in prev:
                    prev[w] = (v, i)
                    queue.append(w)
        if t_to not in prev:
            return None
        hops = []
        x = t_to
        while prev[x] is not None:
            v, i = prev[x]
            hops.append((v, x, i))
            x = v
        return list(reversed(hops))

    lines = []
    ekeys = sorted(entries)
    for i in range(len(ekeys)):
        for j in range(i + 1, len(ekeys)):
            e_a, t_a = entries[ekeys[i]]
            e_b, t_b = entries[ekeys[j]]
            hops = dual_route(t_a, t_b)
            if hops is None:
                continue
            edges_crossed = [e_a] + [arcs[h[2]][0] for h in hops] + [e_b]
            tris = [t_a] + [h[1] for h in hops]
            steps = [
                (t, (edges_crossed[idx], 0), (edges_crossed[idx + 1], 0))
                for idx, t in enumerate(tris)
            ]
            lines.append(CurvePath("line", steps))
    return lines


def _graph_basis_lines(Y, regions, keys):
    _, parent = _graph_spanning_tree(Y)
    reps = {}
    for key in keys:
        vs = [c for kind, c in regions[key] if kind == "V"]
        if vs:
            reps[key] = min(vs)
    lines = []
    rkeys = sorted(reps)
    for i in range(len(rkeys)):
        for j in range(i + 1, len(rkeys)):
            va, vb = reps[rkeys[i]], reps[rkeys[j]]
            to_a = _graph_path_to(parent, va)
            to_b = _graph_path_to(parent, vb)
            while to_a and to_b and to_a[0] == to_b[0]:
                to_a.pop(0)
                to_b.pop(0)
            walk = [(e, -s) for e, s in reversed(to_a)] + to_b
            if walk:
                lines.append(EdgeWalk("line", walk))
    return lines


def equivalence_basis(Y):
    return build_basis_loops(Y) + build_basis_lines(Y)


def equivalent(t1: Pattern, t2: Pattern, Y, basis=None):
    """Identical intersection numbers against every basis loop and line."""
    for t in (t1, t2):
        if t.orientation is None:
            raise PatternError("equivalence needs oriented patterns")
    basis = basis if basis is not None else equivalence_basis(Y)
    return all(
        intersection_number(path, t1, Y) == intersection_number(path, t2, Y)
        for path in basis
    )


# -- transverse intersections ----------------------------------------------------------


@dataclass
class Crossing:
    tid: str
    chord1: tuple
    chord2: tuple


def _m(which, p):
    return f"{which}:{p}"


def _merge_for_pair(t1, t2, with_chords=False, with_orient=False):
    """Both patterns on shared boundary cycles, point ids prefixed 1:/2:."""
    points, order, chords, circles, orient = {}, {}, [], {}, {}
    for which, t in (("1", t1), ("2", t2)):
        for p, (e, s) in t.points.items():
            points[_m(which, p)] = (e, s)
            if with_orient:
                orient[_m(which, p)] = t.orientation[p]
        if with_chords:
            for tid, pa, pb in t.chords:
                chords.append((tid, _m(which, pa), _m(which, pb)))
            for tid, n in t.circles.items():
                circles[tid] = circles.get(tid, 0) + n
    for e in sorted(set(t1.edge_order) | set(t2.edge_order)):
        pts = [_m("1", p) for p in t1.edge_order.get(e, [])] + [
            _m("2", p) for p in t2.edge_order.get(e, [])
        ]
        pts.sort(key=lambda q: points[q][1])
        order[e] = pts
    return Pattern(points=points, edge_order=order, chords=chords, circles=circles,
                   orientation=orient if with_orient else None, singular=True)


def intersection_points(t1: Pattern, t2: Pattern, H):
    """Crossing list; raises NonTransverse for shared edge points (which is
    how coincident chords and tangencies appear in this encoding)."""
    Y = H.Y
    report = []
    for e in sorted(set(t1.edge_order) & set(t2.edge_order)):
        c1 = {t1.points[p][1] for p in t1.edge_order[e]}
        c2 = {t2.points[p][1] for p in t2.edge_order[e]}
        for s in sorted(c1 & c2):
            report.append(("shared_edge_point", e, s))
    if report:
        raise NonTransverse(report)
    crossings = []
    merged = _merge_for_pair(t1, t2)
    for tid in sorted(set(t1.chords_by_tri) & set(t2.chords_by_tri)):
        bc = boundary_cycle(Y, merged, tid)
        for c1 in t1.chords_by_tri[tid]:
            for c2 in t2.chords_by_tri[tid]:
                a, b = bc.pos_of(_m("1", c1[1])), bc.pos_of(_m("1", c1[2]))
                c, d = bc.pos_of(_m("2", c2[1])), bc.pos_of(_m("2", c2[2]))
                if _cyc(a, b, c) != _cyc(a, b, d):
                    crossings.append(Crossing(tid, c1, c2))
    return crossings


# -- cut and paste ------------------------------------------------------------------


@dataclass
class SurgeryResult:
    pattern: Pattern
    complexity: Complexity
    inputs_complexity: Complexity
    crossings: int
    circles_created: int


def cut_and_paste(t1: Pattern, t2: Pattern, H, policy="oriented", choices=None):
    """Resolve every transverse crossing of t1 and t2.

    policy "oriented": the unique smoothing matching the transverse
    orientations (both inputs must be oriented; the result stays oriented
    and equivalent to the disjoint union).  policy "normal": the smoothing
    whose reconnected endpoint pairs avoid same-edge returns when possible.
    policy "explicit": caller supplies one bit per crossing; True joins the
    first stored endpoints of the two chords.

    Every edge point survives, so weights add exactly; new chords are
    re-measured as geodesics, which strictly shortens total length at every
    genuine crossing.
    """
    Y = H.Y
    crossings = intersection_points(t1, t2, H)
    oriented = policy == "oriented"
    if oriented and (t1.orientation is None or t2.orientation is None):
        raise PatternError("oriented policy needs oriented patterns")
    merged = _merge_for_pair(t1, t2, with_chords=True, with_orient=oriented)
    both = Complexity(t1.weight(), total_length(t1, H)) + Complexity(
        t2.weight(), total_length(t2, H)
    )
    if not crossings:
        merged.singular = False
        merged.validate(Y)
        return SurgeryResult(merged, Complexity(merged.weight(), total_length(merged, H)),
                             both, 0, 0)

    bc_cache = {}

    def bc_of(tid):
        if tid not in bc_cache:
            bc_cache[tid] = boundary_cycle(Y, _merge_for_pair(t1, t2), tid)
        return bc_cache[tid]

    smoothing = {}
    for idx, x in enumerate(crossings):
        smoothing[idx] = _choose_smoothing(Y, t1, t2, bc_of(x.tid), x, policy, choices, idx)

    # order the crossings along each chord, nested from its first endpoint
    by_chord = {}
    for idx, x in enumerate(crossings):
        by_chord.setdefault(("1", x.chord1), []).append(idx)
        by_chord.setdefault(("2", x.chord2), []).append(idx)
    for key, lst in by_chord.items():
        which, chord = key
        tid, pa, pb = chord
        bc = bc_of(tid)
        a = bc.pos_of(_m(which, pa))
        b = bc.pos_of(_m(which, pb))
        other = "2" if which == "1" else "1"

        def along(idx):
            x = crossings[idx]
            oc = x.chord2 if which == "1" else x.chord1
            u = bc.pos_of(_m(other, oc[1]))
            v = bc.pos_of(_m(other, oc[2]))
            inside = u if _cyc(a, b, u) else v
            return (inside - a) % bc.n

        lst.sort(key=along)

    # strand graph: segment links along each chord + smoothing jumps
    link = {}

    def connect(n1, n2):
        link[n1] = n2
        link[n2] = n1

    for (which, chord), seq in sorted(by_chord.items()):
        prev = ("end", which, chord, 0)
        for idx in seq:
            connect(prev, ("x", idx, which, 0))
            prev = ("x", idx, which, 1)
        connect(prev, ("end", which, chord, 1))
    for which, t in (("1", t1), ("2", t2)):
        for chord in t.chords:
            if (which, chord) not in by_chord:
                connect(("end", which, chord, 0), ("end", which, chord, 1))

    jump = {}
    for idx in range(len(crossings)):
        a0, a1 = ("x", idx, "1", 0), ("x", idx, "1", 1)
        b0, b1 = ("x", idx, "2", 0), ("x", idx, "2", 1)
        if smoothing[idx]:
            jump[a0], jump[b0] = b0, a0
            jump[a1], jump[b1] = b1, a1
        else:
            jump[a0], jump[b1] = b1, a0
            jump[a1], jump[b0] = b0, a1

    ends = sorted(n for n in link if n[0] == "end")
    visited = set()
    new_chords = []
    for start in ends:
        if start in visited:
            continue
        visited.add(start)
        node = link[start]
        while node[0] != "end":
            visited.add(node)
            partner = jump[node]
            visited.add(partner)
            node = link[partner]
        visited.add(node)
        _, w1, chord1, end1 = start
        _, w2, chord2, end2 = node
        p_start = _m(w1, chord1[1] if end1 == 0 else chord1[2])
        p_end = _m(w2, chord2[1] if end2 == 0 else chord2[2])
        new_chords.append((chord1[0], p_start, p_end))

    circles = 0
    circle_tids = []
    all_x_nodes = [("x", i, w, s) for i in range(len(crossings)) for w in "12" for s in (0, 1)]
    for n in all_x_nodes:
        if n in visited:
            continue
        circle_tids.append(crossings[n[1]].tid)
        circles += 1
        node = n
        while node not in visited:
            visited.add(node)
            partner = jump[node]
            visited.add(partner)
            node = link[partner]

    out_circles = dict(merged.circles)
    for tid in circle_tids:
        out_circles[tid] = out_circles.get(tid, 0) + 1
    result = Pattern(points=dict(merged.points),
                     edge_order={e: list(v) for e, v in merged.edge_order.items()},
                     chords=[canonical_chord(*c) for c in new_chords],
                     circles=out_circles,
                     orientation=dict(merged.orientation) if oriented else None)
    result.validate(Y)
    comp = Complexity(result.weight(), total_length(result, H))
    return SurgeryResult(result, comp, both, len(crossings), circles)


def _choose_smoothing(Y, t1, t2, bc, x, policy, choices, idx):
    """True joins the first stored endpoints of chord1 and chord2."""
    tid = x.tid
    _, pa, pb = x.chord1
    _, pc, pd = x.chord2
    if policy == "explicit":
        if choices is None or idx >= len(choices):
            raise PatternError("explicit policy needs one choice per crossing")
        return bool(choices[idx])
    if policy == "oriented":
        s1 = t1.chord_side_bit(Y, tid, pa, pb)
        s2 = t2.chord_side_bit(Y, tid, pc, pd)
        # the smoothing joining the pa- and pc-side strands is coherent with
        # the transverse orientations iff the two side bits disagree; this is
        # independent of which interleaving configuration the crossing has
        return s1 * s2 == -1
    if policy == "normal":
        ea = t1.points[pa][0]
        eb = t1.points[pb][0]
        ec = t2.points[pc][0]
        ed = t2.points[pd][0]
        join_first = (ea != ec) and (eb != ed)
        join_second = (ea != ed) and (eb != ec)
        if join_first and not join_second:
            return True
        if join_second and not join_first:
            return False
        return True
    raise PatternError(f"unknown policy {policy}")


# -- partial patterns ------------------------------------------------------------------


@dataclass
class PartialPattern:
    """A piece of a pattern cut along its crossings with another pattern."""

    source: str                 # "1" or "2"
    segments: list              # (tid, chord, t_lo, t_hi) arclength window
    points: set                 # full pattern points on the piece
    length: float
    weight: int

    @property
    def complexity(self):
        return Complexity(self.weight, self.length)


def split_partial_patterns(t1: Pattern, t2: Pattern, H):
    """Cut t1 and t2 at their transverse crossings; complexities of the
    pieces sum exactly to the complexities of the inputs."""
    crossings = intersection_points(t1, t2, H)
    return (_pieces_of(t1, t2, crossings, H, "1"),
            _pieces_of(t2, t1, crossings, H, "2"))


def _chord_geometry(H, t, chord):
    tid, pa, pb = chord
    ea, sa = t.points[pa]
    eb, sb = t.points[pb]
    ka, _ = H.Y.slot_of(tid, ea)
    kb, _ = H.Y.slot_of(tid, eb)
    return H.chart_point(tid, ka, sa), H.chart_point(tid, kb, sb)


def _pieces_of(t, other, crossings, H, which):
    cuts = {}
    for x in crossings:
        mine = x.chord1 if which == "1" else x.chord2
        theirs = x.chord2 if which == "1" else x.chord1
        za, zb = _chord_geometry(H, t, mine)
        oza, ozb = _chord_geometry(H, other, theirs)
        z = geodesic_crossing(za, zb, oza, ozb)
        if z is None:
            raise NonTransverse([("degenerate_crossing", x.tid, mine, theirs)])
        cuts.setdefault(mine, []).append(hyp_dist(za, z))

    seg_lists = {}
    for chord in t.chords:
        za, zb = _chord_geometry(H, t, chord)
        full = hyp_dist(za, zb)
        prev = 0.0
        windows = []
        for m in sorted(cuts.get(chord, [])):
            windows.append((prev, m))
            prev = m
        windows.append((prev, full))
        seg_lists[chord] = windows

    nodes = [(chord, i) for chord in t.chords for i in range(len(seg_lists[chord]))]
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    at_point = {}
    for chord in t.chords:
        _, pa, pb = chord
        at_point.setdefault(pa, []).append((chord, 0))
        at_point.setdefault(pb, []).append((chord, len(seg_lists[chord]) - 1))
    for p, segs in sorted(at_point.items()):
        for a, b in zip(segs, segs[1:]):
            union(a, b)

    groups = {}
    for n in nodes:
        groups.setdefault(find(n), []).append(n)

    pieces = []
    for root in sorted(groups):
        segs = groups[root]
        length = sum(seg_lists[ch][i][1] - seg_lists[ch][i][0] for ch, i in segs)
        pts = set()
        for ch, i in segs:
            _, pa, pb = ch
            if i == 0:
                pts.add(pa)
            if i == len(seg_lists[ch]) - 1:
                pts.add(pb)
        seg_data = sorted((ch[0], ch, seg_lists[ch][i][0], seg_lists[ch][i][1]) for ch, i in segs)
        pieces.append(PartialPattern(source=which, segments=seg_data,
                                     points=pts, length=length, weight=len(pts)))
    used = {p for piece in pieces for p in piece.points}
    for p in sorted(t.points):
        if p not in used and not t.point_chords[p]:
            pieces.append(PartialPattern(source=which, segments=[], points={p},
                                         length=0.0, weight=1))
    return pieces
