"""Axis combinatorics on truncated covers.

An axis is a track in a truncated cover whose two cut ends reach the
frontier.  An end is the cut point itself (a pattern point on a
frontier-marked edge); the ends subdivide the frontier into the interval
pieces that stand in for arcs of the boundary at infinity.  Side assignment
labels every frontier cell L or R through the complement of the axis, with
the convention that the transverse orientation arrow points toward R.
Translate families are explicit inputs; deck powers act automatically on
finite cyclic covers and left multiplication on universal-cover truncations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex2 import InputError
from .ends import complement_components
from .intersect import NonTransverse, frontier_regions, intersection_points
from .pattern import Pattern, PatternError, component_split


@dataclass
class AxisData:
    pattern: Pattern
    cut_points: tuple             # pattern points where the truncation cut
    ends: dict | None = None      # {"N": pid, "P": pid}

    @property
    def partial(self):
        return bool(self.cut_points)

    def oriented_ends(self):
        """(N, P) cut points; default order is lexicographic."""
        if self.ends is not None:
            return self.ends["N"], self.ends["P"]
        if len(self.cut_points) != 2:
            raise PatternError("end points undefined (not axis-like)")
        return self.cut_points[0], self.cut_points[1]

    def with_ends(self, neg, pos):
        if {neg, pos} != set(self.cut_points):
            raise PatternError("ends must name the axis cut points")
        return AxisData(self.pattern, self.cut_points, {"N": neg, "P": pos})

    def end_marker(self, pid):
        e, s = self.pattern.points[pid]
        return (e, s)


def axis_from_pattern(Y, pat):
    """Wrap a (possibly severed) track as an axis.

    Cut points are the track's points on frontier-marked edges plus any
    points with missing chords.
    """
    loose = pat.validate(Y, allow_loose=True)
    cut = {p for p, _ in loose} | set(pat.loose_ends)
    for p, (e, _) in pat.points.items():
        if e in Y.frontier_edges:
            cut.add(p)
    out = pat.copy()
    out.loose_ends = {p for p, _ in loose} | set(pat.loose_ends)
    return AxisData(out, tuple(sorted(cut)))


def lift_to_cover(t: Pattern, cover):
    """Connected preimage components of a base pattern in a cover.

    Components severed by the truncation frontier carry loose ends; on
    finite covers every component is closed.
    """
    Y = cover.complex
    base = cover.base
    t.validate(base)
    cover_edges = {}
    for eid in Y.edge_ids:
        cover_edges.setdefault(cover.cell_base[eid], []).append(eid)

    points = {}
    order = {}
    for e_base, copies in sorted(cover_edges.items()):
        base_pts = t.edge_order.get(e_base, [])
        if not base_pts:
            continue
        for eid in copies:
            lst = []
            for p in base_pts:
                _, s = t.points[p]
                pid = f"{p}|{eid}"
                points[pid] = (eid, s)
                lst.append(pid)
            order[eid] = lst

    chords = []
    for tid in Y.triangle_ids:
        t_base = cover.cell_base[tid]
        for (bt, pa, pb) in t.chords_by_tri.get(t_base, []):
            ea, _ = t.points[pa]
            eb, _ = t.points[pb]
            ka, _ = base.slot_of(t_base, ea)
            kb, _ = base.slot_of(t_base, eb)
            ea_cov = Y.triangles[tid][ka][0]
            eb_cov = Y.triangles[tid][kb][0]
            chords.append((tid, f"{pa}|{ea_cov}", f"{pb}|{eb_cov}"))

    orient = None
    if t.orientation is not None:
        orient = {pid: t.orientation[pid.split("|", 1)[0]] for pid in points}
    lifted = Pattern(points=points, edge_order=order, chords=chords, circles={},
                     orientation=orient)
    loose = lifted.validate(Y, allow_loose=True)
    lifted.loose_ends = {p for p, _ in loose}

    out = []
    for comp in component_split(lifted):
        if not comp.points:
            continue
        out.append(axis_from_pattern(Y, comp))
    return out


# -- deck transport ----------------------------------------------------------------


def deck_transport(cover, pat: Pattern, power=1):
    """Image of a pattern under the deck map of a finite cyclic cover."""
    if cover.deck is None:
        raise InputError("cover has no deck map")
    deck = cover.deck
    steps = power % cover.degree if cover.degree else power

    def push(cell):
        for _ in range(steps):
            cell = deck[cell]
        return cell

    points = {p: (push(e), s) for p, (e, s) in pat.points.items()}
    order = {push(e): list(v) for e, v in pat.edge_order.items()}
    chords = [(push(tid), pa, pb) for tid, pa, pb in pat.chords]
    return Pattern(points=points, edge_order=order, chords=chords,
                   circles={push(t): n for t, n in pat.circles.items()},
                   orientation=dict(pat.orientation) if pat.orientation is not None else None,
                   loose_ends=set(pat.loose_ends))


def word_translate(cover, pat: Pattern, word):
    """Left translate of a pattern on a universal-cover truncation (subgroup
    mode, no subgroup words).  Cells falling off the truncation are dropped;
    the result may be partial."""
    if cover.kind != "subgroup" or cover.coset_table.subgroup_words:
        raise InputError("word translation needs a universal-cover truncation")
    tab = cover.coset_table
    if isinstance(word, str):
        word = [(tok.lstrip("+-"), -1 if tok.startswith("-") else 1)
                for tok in word.split()]

    creation = _creation_words(tab)
    g_index = tab.trace(1, list(word))
    if g_index is None:
        raise InputError("translating word leaves the truncation")

    def shift_coset(c):
        w = creation.get(c)
        if w is None:
            return None
        return tab.trace(g_index, w)

    def shift_cell(cid):
        name, c = cid.rsplit("@c", 1)
        d = shift_coset(int(c))
        return None if d is None else f"{name}@c{d}"

    Y = cover.complex
    points, order, dropped = {}, {}, set()
    for e, lst in sorted(pat.edge_order.items()):
        img = shift_cell(e)
        if img is None or img not in Y.edges:
            dropped.update(lst)
            continue
        order[img] = []
        for p in lst:
            _, s = pat.points[p]
            points[p] = (img, s)
            order[img].append(p)
    chords = []
    for tid, pa, pb in pat.chords:
        img = shift_cell(tid)
        if img is None or img not in Y.triangles or pa in dropped or pb in dropped:
            continue
        chords.append((img, pa, pb))
    orient = None
    if pat.orientation is not None:
        orient = {p: pat.orientation[p] for p in points}
    out = Pattern(points=points, edge_order=order, chords=chords, circles={},
                  orientation=orient)
    # points whose chords fell off the table are severed, wherever they sit
    loose = set()
    for p, (e, _) in out.points.items():
        per_tri = {tid for tid, _, _ in out.point_chords[p]}
        for tid, _, _ in Y.edge_slots[e]:
            if tid not in per_tri:
                loose.add(p)
    out.loose_ends = loose
    out.validate(Y, allow_loose=True)
    return out


def _creation_words(tab):
    """Reduced word from coset 1 to each live coset, by BFS over letters."""
    words = {1: []}
    letters = [(e, s) for e in tab.gens for s in (1, -1)]
    queue = [1]
    seen = {1}
    while queue:
        c = queue.pop(0)
        for letter in letters:
            d = tab._get(c, letter)
            if d is not None and d not in seen:
                seen.add(d)
                words[d] = words[c] + [letter]
                queue.append(d)
    return words


# -- sides and crossing -------------------------------------------------------------


class SideMap:
    """L/R labels for the frontier relative to one axis.

    Labels are resolved per frontier cell through the axis's complement; a
    point marker (edge, coord) resolves through the interval holding it.
    """

    def __init__(self, Y, axis, rep, r_comp, l_comp, orient_positive):
        self.Y = Y
        self.axis = axis
        self._rep = rep
        self.r_component = r_comp
        self.l_component = l_comp
        self.orient_positive = orient_positive

    def _label_of_component(self, comp):
        if comp == self.r_component:
            return "R"
        if comp == self.l_component:
            return "L"
        raise PatternError("cell is not in the axis complement")

    def label_cell(self, cell):
        if cell[0] == "E" and len(cell) == 2:
            cell = ("E", cell[1], 0)
        return self._label_of_component(self._rep.cell_to_component[cell])

    def label_point(self, edge, coord):
        pts = self.axis.pattern.edge_order.get(edge, [])
        k = 0
        for p in pts:
            s = self.axis.pattern.points[p][1]
            if coord > s:
                k += 1
            elif coord == s:
                raise PatternError(f"marker coincides with an axis point on {edge}")
        return self._label_of_component(self._rep.cell_to_component[("E", edge, k)])

    def labels(self):
        """Frontier cells -> L/R, at edge-interval granularity."""
        out = {}
        for v in sorted(self.Y.frontier_vertices):
            out[("V", v)] = self.label_cell(("V", v))
        for e in sorted(self.Y.frontier_edges):
            m = len(self.axis.pattern.edge_order.get(e, []))
            for k in range(m + 1):
                out[("E", e, k)] = self.label_cell(("E", e, k))
        return out


def side_of_frontier(Y, axis: AxisData, base_cell=None):
    """Side map of an axis: the base cell's side is R; without a base cell
    the orientation-positive side is R (the arrow points toward R)."""
    rep = complement_components(Y, axis.pattern)
    live = [c for c in rep.components if c.cells]
    if len(live) == 1:
        raise PatternError("axis does not separate its cover (fixture error)")
    if len(live) != 2:
        raise PatternError(f"axis complement has {len(live)} pieces")

    pos_keys = set()
    for side_list in rep.chord_sides.values():
        for _, pos in side_list:
            pos_keys.add(pos)
    orient_pos_comp = pos_keys.pop() if len(pos_keys) == 1 else None

    if base_cell is not None:
        if base_cell not in rep.cell_to_component:
            raise PatternError(f"unknown base cell {base_cell}")
        r_comp = rep.cell_to_component[base_cell]
    elif orient_pos_comp is not None:
        r_comp = orient_pos_comp
    else:
        r_comp = live[0].key
    l_comp = next(c.key for c in live if c.key != r_comp)
    orient_positive = None
    if orient_pos_comp is not None:
        orient_positive = "R" if orient_pos_comp == r_comp else "L"
    return SideMap(Y, axis, rep, r_comp, l_comp, orient_positive)


@dataclass
class CrossReport:
    verdict: str                 # "disjoint_ends" | "crosses" | "unresolved"
    b_crosses_a: bool
    a_crosses_b: bool
    crossing_type: str | None    # "op" | "or" | "mixed" | None
    side_of_b_ends: dict
    side_of_a_ends: dict


def crosses_with_type(Y, A: AxisData, B: AxisData):
    """B crosses A iff B's two end points fall on different sides of A;
    a mutual crossing of an axis and a translate with induced orientation
    is orientation-preserving when the positive ends sit on opposite
    labels, orientation-reversing when they agree."""
    n_a, p_a = A.oriented_ends()
    n_b, p_b = B.oriented_ends()
    try:
        side_a = side_of_frontier(Y, A)
        side_b = side_of_frontier(Y, B)
        sb = {pid: side_a.label_point(*B.end_marker(pid)) for pid in (n_b, p_b)}
        sa = {pid: side_b.label_point(*A.end_marker(pid)) for pid in (n_a, p_a)}
    except PatternError:
        return CrossReport("unresolved", False, False, None, {}, {})
    b_crosses_a = sb[n_b] != sb[p_b]
    a_crosses_b = sa[n_a] != sa[p_a]
    if not b_crosses_a and not a_crosses_b:
        return CrossReport("disjoint_ends", False, False, None, sb, sa)
    ctype = None
    if b_crosses_a and a_crosses_b:
        ctype = "op" if sb[p_b] != sa[p_a] else "or"
    elif b_crosses_a != a_crosses_b:
        ctype = "mixed"
    return CrossReport("crosses", b_crosses_a, a_crosses_b, ctype, sb, sa)


@dataclass
class FourRegions:
    assignment: dict             # frontier cell -> "I1" | "I2" | "I3" | "I4"
    infinite_components: int
    aligned: bool


def four_regions(Y, A: AxisData, B: AxisData):
    """The I1..I4 subdivision of the frontier for a crossing pair, plus the
    four-infinite-components check on the complement of the union."""
    side_a = side_of_frontier(Y, A)
    side_b = side_of_frontier(Y, B)
    to_region = {("R", "R"): "I1", ("R", "L"): "I2",
                 ("L", "L"): "I3", ("L", "R"): "I4"}

    cut_edges = {A.pattern.points[p][0] for p in A.cut_points} | {
        B.pattern.points[p][0] for p in B.cut_points
    }
    assignment = {}
    for v in sorted(Y.frontier_vertices):
        assignment[("V", v)] = to_region[(side_a.label_cell(("V", v)),
                                          side_b.label_cell(("V", v)))]
    for e in sorted(Y.frontier_edges):
        if e in cut_edges:
            continue
        assignment[("E", e)] = to_region[(side_a.label_cell(("E", e, 0)),
                                          side_b.label_cell(("E", e, 0)))]

    union = _axis_union(A, B)
    rep = complement_components(Y, union)
    infinite = [c for c in rep.components if c.infinite]

    by_region = {}
    for cell, lab in assignment.items():
        probe = cell if cell[0] == "V" else ("E", cell[1], 0)
        by_region.setdefault(lab, set()).add(rep.cell_to_component[probe])
    aligned = all(len(v) == 1 for v in by_region.values()) and len(
        {next(iter(v)) for v in by_region.values()}
    ) == len(by_region)
    return FourRegions(assignment=assignment, infinite_components=len(infinite),
                       aligned=aligned)


def _axis_union(A: AxisData, B: AxisData):
    from .intersect import _merge_for_pair

    union = _merge_for_pair(A.pattern, B.pattern, with_chords=True)
    union.loose_ends = {f"1:{p}" for p in A.pattern.loose_ends} | {
        f"2:{p}" for p in B.pattern.loose_ends
    }
    return union


def sharp_sum(Y, A: AxisData, B: AxisData, selector):
    """The boundary pattern of one infinite complement component of A u B:
    one infinite piece of each axis glued at the crossings (the # sum).

    selector: a frontier cell ("V", v) or ("E", e) or ("E", e, k) inside the
    wanted component.
    """
    union = _axis_union(A, B)
    rep = complement_components(Y, union, want_cycles=True)
    probe = selector
    if probe[0] == "E" and len(probe) == 2:
        probe = ("E", probe[1], 0)
    if probe not in rep.cell_to_component:
        raise PatternError(f"unknown selector cell {selector}")
    target = rep.cell_to_component[probe]
    comp = next(c for c in rep.components if c.key == target)
    if not comp.infinite:
        raise PatternError("selected component is finite")

    points, order, chords, circles = {}, {}, [], {}
    for (tid, fid), cycle in sorted(rep.face_cycles.items()):
        if rep.cell_to_component[("F", tid, fid)] != target:
            continue
        for run in _segment_runs(cycle):
            if run["closed"]:
                circles[tid] = circles.get(tid, 0) + 1
                continue
            pa, pb = run["endpoints"]
            chords.append((tid, pa, pb))
            for p in (pa, pb):
                points[p] = union.points[p]
    for e, lst in union.edge_order.items():
        kept = [p for p in lst if p in points]
        if kept:
            order[e] = kept
    out = Pattern(points=points, edge_order=order, chords=chords, circles=circles)
    loose = out.validate(Y, allow_loose=True)
    out.loose_ends = {p for p, _ in loose}
    return out


def _segment_runs(cycle):
    """Split a face orbit into maximal chord-segment runs between boundary
    arcs; a non-empty orbit with no arcs at all is a closed circle."""
    if not cycle:
        return []
    if all(d[0] == "seg" for d in cycle):
        return [{"closed": True}]
    n = len(cycle)
    start = next(i for i, d in enumerate(cycle) if d[0] == "arc")
    runs = []
    current = []
    for k in range(1, n + 1):
        d = cycle[(start + k) % n]
        if d[0] == "seg":
            current.append(d)
        elif current:
            runs.append({"closed": False,
                         "endpoints": (_run_entry(current[0]), _run_exit(current[-1]))})
            current = []
    return runs


def _run_entry(seg):
    _, chord, _, direction = seg
    return chord[1] if direction > 0 else chord[2]


def _run_exit(seg):
    _, chord, _, direction = seg
    return chord[2] if direction > 0 else chord[1]


# -- canonical triples -----------------------------------------------------------------


@dataclass
class TripleReport:
    nearest_label: str | None
    side_sets: dict
    unresolved: list
    good: bool | None


def select_nearest_axis(Y, A: AxisData, family):
    """Among supplied translates, the one whose P_A-side frontier-cell set is
    minimal under containment (nearest to P_A); unresolved configurations
    (markers on cut intervals, non-nested sets) are reported."""
    _, p_a = A.oriented_ends()
    marker = A.end_marker(p_a)
    side_sets = {}
    unresolved = []
    for label, D in family:
        try:
            sm = side_of_frontier(Y, D)
            pa_side = sm.label_point(*marker)
            cells = frozenset(cell for cell, lab in sm.labels().items() if lab == pa_side)
        except PatternError as exc:
            unresolved.append((label, str(exc)))
            continue
        side_sets[label] = cells
    nearest = None
    for label in sorted(side_sets):
        if all(side_sets[label] <= other for other in side_sets.values()):
            nearest = label
            break
    if nearest is None and side_sets:
        unresolved.append((None, "side sets are not nested"))
    return TripleReport(nearest_label=nearest, side_sets=dict(side_sets),
                        unresolved=unresolved, good=None)


def good_triple_check(Y, H, A: AxisData, D: AxisData, E: AxisData):
    """(A, D, E) is good when E is disjoint from A: no transverse crossings
    and both of E's ends on one side of A."""
    try:
        crossings = intersection_points(A.pattern, E.pattern, H)
    except NonTransverse:
        return False, "non-transverse contact between A and E"
    if crossings:
        return False, f"{len(crossings)} transverse crossings between A and E"
    rep = crosses_with_type(Y, A, E)
    if rep.verdict == "crosses":
        return False, "E's ends straddle A"
    if rep.verdict == "unresolved":
        return False, "unresolved end configuration"
    return True, "disjoint"


# -- Theorem-5.1-style condition checks --------------------------------------------------


@dataclass
class ConditionReport:
    passed: bool
    detail: str


def check_splitting_conditions(Y, H, axis: AxisData, translates):
    """Per-condition diagnostic (a)-(e) for a track and a finite family of
    its translates, with frontier contact standing in for infinite image.

    translates: [(label, AxisData)].
    """
    if not translates:
        raise PatternError("translate set is empty")
    out = {}
    t = axis.pattern
    out["a"] = ConditionReport(True, f"weight {t.weight()} is finite")

    rep = complement_components(Y, t)
    infinite = [c for c in rep.components if c.infinite]
    live = [c for c in rep.components if c.cells]
    out["b"] = ConditionReport(
        len(live) == 2 and len(infinite) == 2,
        f"{len(live)} complement pieces, {len(infinite)} infinite",
    )

    side_self = {c.key: set(c.cells) for c in live}
    keys = sorted(side_self)
    c_fail, d_fail = [], []
    for label, g_axis in translates:
        coincide, _ = _patterns_coincide(Y, t, g_axis.pattern)
        if coincide:
            continue
        try:
            crossings = intersection_points(t, g_axis.pattern, H)
        except NonTransverse as exc:
            c_fail.append((label, f"non-transverse contact: {exc.report[:2]}"))
            continue
        if crossings:
            c_fail.append((label, f"translate crosses the track ({len(crossings)} points)"))
            continue
        grep = complement_components(Y, g_axis.pattern)
        glive = [c for c in grep.components if c.cells]
        if len(glive) != 2:
            c_fail.append((label, "translate does not separate"))
            continue
        finite_count = 0
        empty_sets = 0
        for ck in keys:
            for gc in glive:
                inter = side_self[ck] & set(gc.cells)
                if not inter:
                    empty_sets += 1
                if not any(_cell_frontier(Y, cell) for cell in inter):
                    finite_count += 1
        if finite_count == 0:
            c_fail.append((label, "no side intersection has finite image"))
        if finite_count >= 2 and empty_sets == 0:
            d_fail.append((label, f"{finite_count} finite side intersections, none empty"))
    out["c"] = ConditionReport(not c_fail,
                               "; ".join(f"{l}: {m}" for l, m in c_fail) or "no translate crosses")
    out["d"] = ConditionReport(not d_fail,
                               "; ".join(f"{l}: {m}" for l, m in d_fail) or "finite overlaps are empty")

    e_fail = []
    for label, g_axis in translates:
        coincide, reversed_flag = _patterns_coincide(Y, t, g_axis.pattern)
        if coincide and reversed_flag:
            e_fail.append(label)
    detail = "no translate swaps the sides"
    if e_fail:
        detail = (f"sides swapped by {e_fail}; replace the track by a parallel "
                  "two-sided copy of the boundary of its neighbourhood")
    out["e"] = ConditionReport(not e_fail, detail)
    return out


def _cell_frontier(Y, cell):
    if cell[0] == "V":
        return cell[1] in Y.frontier_vertices
    if cell[0] == "E":
        return cell[1] in Y.frontier_edges
    return False


def _canonical_form(Y, pat):
    idx = {}
    for e, lst in pat.edge_order.items():
        for i, p in enumerate(lst):
            idx[p] = (e, i)
    chords = sorted(
        (tid,) + tuple(sorted((idx[pa], idx[pb])))
        for tid, pa, pb in pat.chords
    )
    weights = tuple(sorted((e, len(v)) for e, v in pat.edge_order.items() if v))
    return weights, tuple(chords), idx


def _patterns_coincide(Y, t1, t2, tol=1e-9):
    """Same pattern, combinatorially and at the same coordinates?  The
    second flag reports reversed orientations.  Equal combinatorics at
    different coordinates is a parallel copy, not a coincidence."""
    w1, c1, idx1 = _canonical_form(Y, t1)
    w2, c2, idx2 = _canonical_form(Y, t2)
    if w1 != w2 or c1 != c2:
        return False, False
    coords1 = {idx1[p]: s for p, (_, s) in t1.points.items()}
    coords2 = {idx2[p]: s for p, (_, s) in t2.points.items()}
    if any(abs(coords1[k] - coords2[k]) > tol for k in coords1):
        return False, False
    if t1.orientation is None or t2.orientation is None:
        return True, False
    o1 = {idx1[p]: d for p, d in t1.orientation.items()}
    o2 = {idx2[p]: d for p, d in t2.orientation.items()}
    if o1 == o2:
        return True, False
    if all(o1[k] == -o2[k] for k in o1):
        return True, True
    return True, False
