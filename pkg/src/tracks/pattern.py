"""Patterns: edge points + triangle chords, predicates, carried subgroups.

A pattern stores ordered points on edges (with intrinsic arclength
coordinates) and, per triangle, a set of chords joining two boundary points.
The 1-manifold condition requires each point to have exactly one chord in
every triangle containing its edge.  Trivial circles are counted per
triangle; they carry no coordinates.

A transverse orientation is stored as a direction bit per point: +1 means
the normal arrow at that point heads toward increasing edge coordinate.  A
chord with endpoints a, b on slots with signs sa, sb is coherently oriented
iff dir(a)*sa == -dir(b)*sb; the quantity dir(a)*sa is the chord's side bit
(+1 selects the side whose boundary runs from a to b in traversal order).

Singular patterns relax embeddedness: coordinates may coincide and chords
may cross.  The (points, chords) graph is then the abstract 1-complex and
the coordinates are the map data.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field


class PatternError(Exception):
    pass


def canonical_chord(tid, pa, pb):
    return (tid, pa, pb) if pa <= pb else (tid, pb, pa)


@dataclass
class Pattern:
    points: dict                     # pid -> (edge id, coord)
    edge_order: dict                 # edge id -> [pid] in coordinate order
    chords: list                     # (tid, pa, pb), canonical, sorted
    circles: dict = field(default_factory=dict)   # tid -> count
    orientation: dict | None = None  # pid -> +-1
    singular: bool = False
    loose_ends: set = field(default_factory=set)  # pids cut at a frontier

    def __post_init__(self):
        self.chords = sorted(canonical_chord(*c) for c in self.chords)
        self.circles = {t: n for t, n in sorted(self.circles.items()) if n}
        self._index()

    def _index(self):
        self.chords_by_tri = {}
        self.point_chords = {p: [] for p in self.points}
        for c in self.chords:
            tid, pa, pb = c
            self.chords_by_tri.setdefault(tid, []).append(c)
            self.point_chords[pa].append(c)
            self.point_chords[pb].append(c)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def empty():
        return Pattern(points={}, edge_order={}, chords=[], circles={})

    @staticmethod
    def from_edge_points(edge_points, chords, circles=None, orientation=None, **kw):
        """edge_points: edge -> [(pid, coord)] already in order."""
        points, order = {}, {}
        for e, lst in edge_points.items():
            order[e] = [pid for pid, _ in lst]
            for pid, s in lst:
                points[pid] = (e, s)
        return Pattern(points=points, edge_order=order, chords=chords,
                       circles=circles or {}, orientation=orientation, **kw)

    def copy(self):
        return Pattern(
            points=dict(self.points),
            edge_order={e: list(v) for e, v in self.edge_order.items()},
            chords=list(self.chords),
            circles=dict(self.circles),
            orientation=dict(self.orientation) if self.orientation is not None else None,
            singular=self.singular,
            loose_ends=set(self.loose_ends),
        )

    def with_coords(self, coords):
        out = self.copy()
        out.points = {p: (e, coords.get(p, s)) for p, (e, s) in out.points.items()}
        return out

    def with_orientation(self, dirs):
        out = self.copy()
        out.orientation = dict(dirs)
        return out

    # -- basic queries ---------------------------------------------------------

    def weight(self):
        return len(self.points)

    def is_empty(self):
        return not self.points and not any(self.circles.values())

    def edge_index(self, pid):
        e, _ = self.points[pid]
        return self.edge_order[e].index(pid)

    def chord_side_bit(self, Y, tid, pa, pb):
        """Side bit of the chord relative to direction pa -> pb."""
        if self.orientation is None:
            raise PatternError("pattern carries no orientation")
        ea, _ = self.points[pa]
        _, sa = Y.triangles[tid][Y.slot_of(tid, ea)[0]]
        return self.orientation[pa] * sa

    # -- validation --------------------------------------------------------------

    def validate(self, Y, allow_loose=False):
        """Check the pattern against Y; returns the set of loose (pid, tid)
        slots (empty unless loose ends are permitted)."""
        for p, (e, s) in self.points.items():
            if e not in Y.edges:
                raise PatternError(f"point {p} on unknown edge {e}")
        listed = [p for order in self.edge_order.values() for p in order]
        if sorted(listed) != sorted(self.points):
            raise PatternError("edge_order does not list exactly the points")
        for e, order in self.edge_order.items():
            for p in order:
                if self.points[p][0] != e:
                    raise PatternError(f"point {p} listed on wrong edge {e}")
            coords = [self.points[p][1] for p in order]
            for a, b in zip(coords, coords[1:]):
                if a > b or (a == b and not self.singular):
                    raise PatternError(f"points on edge {e} out of order")
        loose = set()
        for p, (e, _) in self.points.items():
            slots = Y.edge_slots[e]
            per_tri = {}
            for tid, pa, pb in self.point_chords[p]:
                per_tri[tid] = per_tri.get(tid, 0) + (2 if pa == pb else 1)
            for tid, k, _ in slots:
                n = per_tri.pop(tid, 0)
                if n == 1:
                    continue
                if n == 0:
                    if allow_loose and (p in self.loose_ends or e in Y.frontier_edges):
                        loose.add((p, tid))
                        continue
                    raise PatternError(f"point {p} has no chord in triangle {tid}")
                raise PatternError(f"point {p} has {n} chords in triangle {tid}")
            if per_tri:
                raise PatternError(f"point {p} has chords in non-incident triangles {sorted(per_tri)}")
        if not self.singular:
            for tid in self.chords_by_tri:
                bc = boundary_cycle(Y, self, tid)
                cs = self.chords_by_tri[tid]
                for i in range(len(cs)):
                    for j in range(i + 1, len(cs)):
                        if bc.chords_cross(cs[i], cs[j]):
                            raise PatternError(f"chords cross in triangle {tid}: {cs[i]} {cs[j]}")
        for tid in self.circles:
            if tid not in Y.triangles:
                raise PatternError(f"trivial circle in unknown triangle {tid}")
        if self.orientation is not None:
            if set(self.orientation) != set(self.points):
                raise PatternError("orientation does not cover exactly the points")
            for tid, pa, pb in self.chords:
                ea, _ = self.points[pa]
                eb, _ = self.points[pb]
                _, sa = Y.triangles[tid][Y.slot_of(tid, ea)[0]]
                _, sb = Y.triangles[tid][Y.slot_of(tid, eb)[0]]
                if self.orientation[pa] * sa * self.orientation[pb] * sb != -1:
                    raise PatternError(f"incoherent orientation across chord {(tid, pa, pb)}")
        return loose

    # -- serialization --------------------------------------------------------------

    def to_text(self):
        lines = []
        for e in sorted(self.edge_order):
            for i, p in enumerate(self.edge_order[e]):
                _, s = self.points[p]
                lines.append(f"point {p} {e} {i} {format(s, '.12g')}")
        for tid, pa, pb in self.chords:
            lines.append(f"chord {tid} {pa} {pb}")
        for tid in sorted(self.circles):
            lines.append(f"circle {tid} {self.circles[tid]}")
        if self.orientation is not None:
            for p in sorted(self.orientation):
                lines.append(f"orient {p} {self.orientation[p]:+d}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text):
        per_edge = {}
        chords, circles, orient = [], {}, {}
        has_orient = False
        from .complex2 import InputError

        for ln, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            kw, args = parts[0], parts[1:]
            try:
                if kw == "point" and len(args) in (3, 4):
                    pid, e, idx = args[0], args[1], int(args[2])
                    coord = float(args[3]) if len(args) == 4 else None
                    per_edge.setdefault(e, {})[idx] = (pid, coord)
                elif kw == "chord" and len(args) == 3:
                    chords.append((args[0], args[1], args[2]))
                elif kw == "circle" and len(args) == 2:
                    circles[args[0]] = circles.get(args[0], 0) + int(args[1])
                elif kw == "orient" and len(args) == 2:
                    has_orient = True
                    orient[args[0]] = int(args[1])
                else:
                    raise InputError(f"unrecognized directive {line!r}", ln)
            except ValueError as exc:
                raise InputError(str(exc), ln) from exc

        edge_points = {}
        for e, by_idx in per_edge.items():
            if sorted(by_idx) != list(range(len(by_idx))):
                raise InputError(f"point indices on edge {e} are not 0..{len(by_idx) - 1}")
            lst = []
            for i in range(len(by_idx)):
                pid, coord = by_idx[i]
                if coord is None:
                    coord = (i - (len(by_idx) - 1) / 2.0)
                lst.append((pid, coord))
            edge_points[e] = lst
        return Pattern.from_edge_points(edge_points, chords, circles,
                                        orientation=orient if has_orient else None)


# -- boundary cycles ---------------------------------------------------------------


class BoundaryCycle:
    """The cyclic order of one pattern's points around a triangle boundary.

    Positions run through slot 0, 1, 2; within a slot the points appear in
    traversal order (edge order for sign +, reversed for sign -).  Arc i is
    the boundary stretch between position i and position i+1; arcs absorb
    corners and point-free slots.
    """

    def __init__(self, Y, pat, tid):
        self.tid = tid
        self.entries = []       # (pid, slot, index within slot)
        self.slot_base = []
        self.slot_count = []
        for k in range(3):
            e, s = Y.triangles[tid][k]
            order = pat.edge_order.get(e, [])
            pts = list(order) if s > 0 else list(reversed(order))
            self.slot_base.append(len(self.entries))
            self.slot_count.append(len(pts))
            for i, p in enumerate(pts):
                self.entries.append((p, k, i))
        self.n = len(self.entries)
        self.pos = {p: i for i, (p, _, _) in enumerate(self.entries)}

    def pos_of(self, pid):
        return self.pos[pid]

    def arc_of_gap(self, slot, gap):
        """Arc index holding the gap before the gap-th point of the slot
        (gap == count means after the last point)."""
        if self.n == 0:
            return 0
        return (self.slot_base[slot] + gap - 1) % self.n

    def between(self, a, b, x):
        """x strictly inside the cyclic interval (a, b)."""
        if a == b:
            return False
        if a < b:
            return a < x < b
        return x > a or x < b

    def chords_cross(self, c1, c2):
        _, a, b = c1
        _, c, d = c2
        if len({a, b, c, d}) < 4:
            return False
        pa, pb, pc, pd = self.pos[a], self.pos[b], self.pos[c], self.pos[d]
        return self.between(pa, pb, pc) != self.between(pa, pb, pd)


def boundary_cycle(Y, pat, tid):
    return BoundaryCycle(Y, pat, tid)


# -- structural predicates ------------------------------------------------------------


def component_split(t: Pattern):
    """Connected components via the chord incidence graph; trivial circles
    are singleton components."""
    parent = {p: p for p in t.points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, pa, pb in t.chords:
        ra, rb = find(pa), find(pb)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for p in t.points:
        groups.setdefault(find(p), set()).add(p)

    out = []
    for root in sorted(groups):
        pts = groups[root]
        sub_points = {p: t.points[p] for p in pts}
        sub_order = {}
        for e, order in t.edge_order.items():
            kept = [p for p in order if p in pts]
            if kept:
                sub_order[e] = kept
        sub_chords = [c for c in t.chords if c[1] in pts]
        orient = None
        if t.orientation is not None:
            orient = {p: t.orientation[p] for p in pts}
        out.append(Pattern(points=sub_points, edge_order=sub_order, chords=sub_chords,
                           circles={}, orientation=orient, singular=t.singular,
                           loose_ends=t.loose_ends & pts))
    for tid in sorted(t.circles):
        for _ in range(t.circles[tid]):
            out.append(Pattern(points={}, edge_order={}, chords=[], circles={tid: 1}))
    return out


def is_normal(t: Pattern, Y=None):
    """No trivial circles and no chord returning to its own edge slot."""
    offenders = []
    for tid in sorted(t.circles):
        if t.circles[tid]:
            offenders.append(("circle", tid))
    for tid, pa, pb in t.chords:
        if t.points[pa][0] == t.points[pb][0]:
            offenders.append(("same_edge", tid, pa, pb))
    return (not offenders), offenders


def sidedness(Y, t: Pattern, seed_point=None):
    """For a connected pattern: ("two_sided", dirs) or ("one_sided", cycle).

    Propagates a direction bit along chords; a conflict returns the chord
    cycle along which the side choice reverses.
    """
    if not t.points:
        return "two_sided", {}
    comps = component_split(t)
    live = [c for c in comps if c.points]
    if len(live) > 1:
        raise PatternError("sidedness is defined per component")

    sign_of = {}
    for tid, pa, pb in t.chords:
        ea, _ = t.points[pa]
        eb, _ = t.points[pb]
        _, sa = Y.triangles[tid][Y.slot_of(tid, ea)[0]]
        _, sb = Y.triangles[tid][Y.slot_of(tid, eb)[0]]
        sign_of[(tid, pa, pb)] = (sa, sb)

    start = seed_point if seed_point is not None else min(t.points)
    dirs = {start: 1}
    parent = {start: None}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for c in sorted(t.point_chords[p]):
            tid, pa, pb = c
            q = pb if p == pa else pa
            sp, sq = sign_of[c] if p == pa else sign_of[c][::-1]
            want = -dirs[p] * sp * sq
            if q not in dirs:
                dirs[q] = want
                parent[q] = (p, c)
                queue.append(q)
            elif dirs[q] != want:
                cycle = _witness_cycle(parent, p, q, c)
                return "one_sided", cycle
    return "two_sided", dirs


def _witness_cycle(parent, p, q, closing_chord):
    def path_to_root(x):
        out = []
        while parent[x] is not None:
            prev, chord = parent[x]
            out.append(chord)
            x = prev
        return out, x

    pa, _ = path_to_root(p)
    qa, _ = path_to_root(q)
    while pa and qa and pa[-1] == qa[-1]:
        pa.pop()
        qa.pop()
    return pa + [closing_chord] + list(reversed(qa))


def orient_pattern(Y, t: Pattern):
    """Coherent direction bits for every component, or None if any component
    is one-sided.  Trivial circles carry no bits."""
    dirs = {}
    for comp in component_split(t):
        if not comp.points:
            continue
        verdict, data = sidedness(Y, comp)
        if verdict == "one_sided":
            return None
        dirs.update(data)
    return dirs


def reverse_component(t: Pattern, comp_points):
    """Flip the transverse orientation on one component (a set of pids)."""
    if t.orientation is None:
        raise PatternError("pattern carries no orientation")
    out = t.copy()
    for p in comp_points:
        out.orientation[p] = -out.orientation[p]
    return out


# -- canonical constructions ------------------------------------------------------------


def coboundary_pattern(Y, part_E):
    """The pattern dual to a vertex bipartition: one point on every edge with
    endpoints in different parts, one arc in every triangle with two mixed
    sides, transversely oriented from E toward the complement."""
    E = set(part_E)
    if not E or E >= set(Y.vertices):
        raise PatternError("bipartition needs both parts non-empty")
    unknown = E - set(Y.vertices)
    if unknown:
        raise PatternError(f"bipartition names unknown vertices {sorted(unknown)}")

    edge_points, dirs = {}, {}
    for e in Y.edge_ids:
        a, b = Y.edges[e]
        if (a in E) == (b in E):
            continue
        pid = f"d.{e}"
        edge_points[e] = [(pid, 0.0)]
        dirs[pid] = 1 if b not in E else -1
    chords = []
    for t in Y.triangle_ids:
        mixed = [k for k in range(3) if Y.triangles[t][k][0] in edge_points]
        if not mixed:
            continue
        if len(mixed) != 2:
            raise PatternError(f"triangle {t} has {len(mixed)} mixed sides")
        ka, kb = mixed
        pa = edge_points[Y.triangles[t][ka][0]][0][0]
        pb = edge_points[Y.triangles[t][kb][0]][0][0]
        chords.append((t, pa, pb))
    pat = Pattern.from_edge_points(edge_points, chords, orientation=dirs)
    pat.validate(Y)
    return pat


def link_pattern(Y, v, offset=2.0):
    """The link of v realized as a pattern: one point near each edge-end at
    v, one chord across each triangle corner at v, oriented away from v."""
    if v not in set(Y.vertices):
        raise PatternError(f"unknown vertex {v}")
    link = Y.vertex_link(v)
    edge_points = {}
    dirs = {}
    pid_of = {}
    for (e, end) in link.nodes:
        pid = f"lk.{e}.{end}"
        pid_of[(e, end)] = pid
        coord = offset if end == 1 else -offset
        edge_points.setdefault(e, []).append((pid, coord))
        dirs[pid] = 1 if end == 0 else -1      # away from v
    for e in edge_points:
        edge_points[e].sort(key=lambda pc: pc[1])
    chords = []
    for n_in, n_out, t, _ in link.segments:
        chords.append((t, pid_of[n_in], pid_of[n_out]))
    pat = Pattern.from_edge_points(edge_points, chords, orientation=dirs)
    pat.validate(Y)
    return pat


# -- track cycles and carried subgroups -----------------------------------------------


def track_cycles(t: Pattern):
    """A basis of directed chord cycles of the track graph: one per non-tree
    chord of a BFS spanning tree.  Each cycle is a list of (tid, p_from,
    p_to) steps."""
    if not t.points:
        return []
    adjacency = {p: [] for p in t.points}
    for c in t.chords:
        tid, pa, pb = c
        adjacency[pa].append((pb, c))
        adjacency[pb].append((pa, c))
    parent = {}
    order = []
    tree_chords = set()
    for root in sorted(t.points):
        if root in parent:
            continue
        parent[root] = None
        queue = deque([root])
        while queue:
            p = queue.popleft()
            order.append(p)
            for q, c in sorted(adjacency[p]):
                if q not in parent:
                    parent[q] = (p, c)
                    tree_chords.add(c)
                    queue.append(q)

    def path_up(x):
        steps = []
        while parent[x] is not None:
            prev, c = parent[x]
            steps.append((c[0], x, prev))
            x = prev
        return steps, x

    cycles = []
    seen = set()
    for c in t.chords:
        if c in tree_chords or c in seen:
            continue
        seen.add(c)
        tid, pa, pb = c
        up_a, ra = path_up(pa)
        up_b, rb = path_up(pb)
        if ra != rb:
            continue
        down_b = [(x[0], x[2], x[1]) for x in reversed(up_b)]
        # root -> pa? we walk pa -> root -> pb -> (chord back to pa)
        cycles.append(up_a + down_b + [(tid, pb, pa)])
    return cycles


def cycle_intersection_with_path(Y, t: Pattern, cycle, path):
    """Signed crossings of a directed chord cycle with a CurvePath.

    Both are transversal curves; a cycle chord (p -> q) and a path step arc
    cross inside their shared triangle iff exactly one of p, q lies strictly
    between the entry and exit marks; the sign compares the two directions
    in the boundary cyclic order.
    """
    total = 0
    marks = path.step_marks(Y, t)
    cycles_cache = {}
    for (tid, (pos_in, pos_out)) in marks:
        for (ctid, p, q) in cycle:
            if ctid != tid:
                continue
            if tid not in cycles_cache:
                cycles_cache[tid] = boundary_cycle(Y, t, tid)
            bc = cycles_cache[tid]
            pp, pq = bc.pos_of(p) * 2 + 1, bc.pos_of(q) * 2 + 1
            inside_p = _cyc_between(pos_in, pos_out, pp)
            inside_q = _cyc_between(pos_in, pos_out, pq)
            if inside_p == inside_q:
                continue
            # orientation sign: +1 when (entry, p, exit, q) is the cyclic order
            sign = 1 if _cyc_between(pos_in, pos_out, pp) else -1
            total += sign
    return total


def _cyc_between(a, b, x):
    if a == b:
        return False
    if a < b:
        return a < x < b
    return x > a or x < b


def carried_index(t: Pattern, cover, depth_cap=6):
    """Index of the subgroup of the cover's defining group carried by t.

    For cocycle-built two-ended covers: gcd over track cycles of their signed
    crossings with a frontier-to-frontier test line (0 means the trivial
    group, 1 means the whole group).  For subgroup covers: each cycle's
    boundary word is compared with h^k, |k| <= depth_cap, by free cyclic
    reduction; "unknown" when undecided.
    """
    from .intersect import build_basis_lines

    Y = cover.complex
    for p, (e, _) in t.points.items():
        if e in Y.frontier_edges:
            raise PatternError("carried subgroup undefined for frontier-touching tracks")
    cycles = track_cycles(t)
    if not cycles:
        return 0
    if cover.kind in ("truncated", "block", "finite"):
        lines = build_basis_lines(Y)
        if not lines:
            raise PatternError("cover has no frontier line to pair against")
        vals = []
        for cyc in cycles:
            pairings = [abs(cycle_intersection_with_path(Y, t, cyc, ln)) for ln in lines]
            vals.append(math.gcd(*pairings) if len(pairings) > 1 else pairings[0])
        g = 0
        for v in vals:
            g = math.gcd(g, v)
        return g
    if cover.kind == "subgroup":
        return _carried_by_words(t, cover, cycles, depth_cap)
    raise PatternError(f"unknown cover kind {cover.kind}")


def _cycle_word(Y, cover, t, cycle):
    """Edge word of a transversal cycle, via boundary routes between the
    v_from anchors of consecutive points, projected to base edges."""
    word = []
    for tid, p, q in cycle:
        ep, _ = t.points[p]
        eq, _ = t.points[q]
        kp, sp = Y.slot_of(tid, ep)
        kq, sq = Y.slot_of(tid, eq)
        ca = kp if sp > 0 else (kp + 1) % 3       # corner holding v_from of ep
        cb = kq if sq > 0 else (kq + 1) % 3
        k = ca
        while k != cb:
            e, s = Y.triangles[tid][k]
            word.append((cover.cell_base[e], s))
            k = (k + 1) % 3
    return word


def _free_cyclic_reduce(word):
    out = []
    for let in word:
        if out and out[-1] == (let[0], -let[1]):
            out.pop()
        else:
            out.append(let)
    while len(out) >= 2 and out[0] == (out[-1][0], -out[-1][1]):
        out = out[1:-1]
    return out


def _invert(word):
    return [(e, -s) for e, s in reversed(word)]


def _dehn_reduce(word, relators):
    """Greedy Dehn-style length reduction: replace any cyclic subword that
    matches more than half of a relator (or its inverse) by the inverse of
    the complement.  Terminates because length strictly drops."""
    rules = {}
    for rel in relators:
        for r in (rel, _invert(rel)):
            n = len(r)
            if n < 2:
                continue
            m = n // 2 + 1
            for rot in range(n):
                rr = r[rot:] + r[:rot]
                rules[tuple(rr[:m])] = _invert(rr[m:])
    if not rules:
        return _free_cyclic_reduce(word)
    word = _free_cyclic_reduce(word)
    changed = True
    while changed and word:
        changed = False
        n = len(word)
        for mlen in sorted({len(k) for k in rules}, reverse=True):
            if mlen > n:
                continue
            for start in range(n):
                sub = tuple(word[(start + i) % n] for i in range(mlen))
                if sub in rules:
                    rest = [word[(start + mlen + i) % n] for i in range(n - mlen)]
                    word = _free_cyclic_reduce(rules[sub] + rest)
                    changed = True
                    break
            if changed:
                break
    return word


def _carried_by_words(t, cover, cycles, depth_cap):
    tab = cover.coset_table
    words = tab.subgroup_words
    Y = cover.complex

    def reduce_full(word):
        stripped = [(e, s) for e, s in word if e not in tab.tree]
        return _dehn_reduce(stripped, tab.relators)

    exps = []
    for cyc in cycles:
        w = reduce_full(_cycle_word(Y, cover, t, cyc))
        if not w:
            exps.append(0)
            continue
        if len(words) != 1:
            return "unknown"
        h = reduce_full(words[0])
        if not h:
            return "unknown"
        found = None
        for k in range(1, depth_cap + 1):
            for target in (h * k, _invert(h) * k):
                tt = _dehn_reduce(target, tab.relators)
                if len(tt) == len(w) and any(
                    w == tt[i:] + tt[:i] for i in range(len(tt))
                ):
                    found = k
                    break
            if found:
                break
        if found is None:
            return "unknown"
        exps.append(found)
    g = 0
    for v in exps:
        g = math.gcd(g, v)
    return g
