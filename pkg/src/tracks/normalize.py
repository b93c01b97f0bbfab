"""Normalization: delete trivial circles, resolve same-edge returning arcs.

Each move strictly decreases w + d, where w is the weight and d the total
number of chord/circle components over all triangles, so the procedure
terminates in at most the initial w + d moves.  Resolving an arc removes its
two edge points and, in every other triangle around that edge, fuses the two
chords that ended at those points into one (which may close into a trivial
circle).  Transverse orientations survive every move unchanged on the
remaining points; one-sided inputs are normalized too, but equivalence is
not asserted for them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pattern import Pattern, PatternError, orient_pattern


@dataclass
class MoveLog:
    initial: int
    moves: list = field(default_factory=list)

    def record(self, move, value):
        if self.moves:
            prev = self.moves[-1]["w_plus_d"]
        else:
            prev = self.initial
        if value >= prev:
            raise PatternError(f"move failed to decrease w+d: {prev} -> {value}")
        move["w_plus_d"] = value
        self.moves.append(move)

    def to_json(self):
        return {"initial_w_plus_d": self.initial, "moves": self.moves}


@dataclass
class NormalizeResult:
    pattern: Pattern
    log: MoveLog
    one_sided: bool


def w_plus_d(t: Pattern):
    return t.weight() + len(t.chords) + sum(t.circles.values())


def _innermost_same_edge(t: Pattern):
    """Same-edge chords whose endpoints are adjacent on their edge, ordered
    by (triangle, chord); always non-empty when same-edge chords exist."""
    out = []
    for tid, pa, pb in t.chords:
        ea, _ = t.points[pa]
        eb, _ = t.points[pb]
        if ea != eb:
            continue
        order = t.edge_order[ea]
        if abs(order.index(pa) - order.index(pb)) == 1:
            out.append((tid, pa, pb))
    return sorted(out)


def _delete_circle(t: Pattern, tid):
    out = t.copy()
    out.circles[tid] -= 1
    if not out.circles[tid]:
        del out.circles[tid]
    return out


def _resolve_arc(t: Pattern, Y, move_chord):
    tid, pa, pb = move_chord
    pair = {pa, pb}
    points = {p: v for p, v in t.points.items() if p not in pair}
    order = {}
    for ee, lst in t.edge_order.items():
        kept = [p for p in lst if p not in pair]
        if kept:
            order[ee] = kept
    circles = dict(t.circles)
    chords = []
    fused = {}        # triangle -> the two dangling partners
    for c in t.chords:
        ctid, x, y = c
        if {x, y} == pair:
            if ctid != tid:
                # a parallel return in another triangle fuses into a circle
                circles[ctid] = circles.get(ctid, 0) + 1
            continue
        if x in pair or y in pair:
            fused.setdefault(ctid, []).append(y if x in pair else x)
            continue
        chords.append(c)
    for ctid, partners in sorted(fused.items()):
        if len(partners) != 2:
            raise PatternError(f"arc resolution left {len(partners)} loose ends in {ctid}")
        x, y = partners
        if x == y:
            raise PatternError("arc resolution would pinch a point")
        chords.append((ctid, x, y))
    orientation = None
    if t.orientation is not None:
        orientation = {p: d for p, d in t.orientation.items() if p in points}
    return Pattern(points=points, edge_order=order, chords=chords, circles=circles,
                   orientation=orientation, singular=t.singular,
                   loose_ends=t.loose_ends - pair)


def normalize(t: Pattern, Y):
    """Lemma-2.1 normalization with a strictly decreasing w+d certificate.

    Moves: delete a trivial circle, or resolve an innermost same-edge arc
    (ties by (triangle, chord)).  The output has no trivial circles and no
    same-edge chords; for two-sided inputs it is equivalent to the input.
    """
    t.validate(Y, allow_loose=True)
    one_sided = False
    work = t
    if work.orientation is None:
        dirs = orient_pattern(Y, work)
        if dirs is None:
            one_sided = True
        else:
            work = work.with_orientation(dirs)
    log = MoveLog(initial=w_plus_d(work))
    budget = w_plus_d(work) + 1
    for _ in range(budget):
        if work.circles:
            tid = min(work.circles)
            work = _delete_circle(work, tid)
            log.record({"move": "delete_circle", "triangle": tid}, w_plus_d(work))
            continue
        candidates = _innermost_same_edge(work)
        if not candidates:
            break
        tid, pa, pb = candidates[0]
        e, _ = work.points[pa]
        work = _resolve_arc(work, Y, (tid, pa, pb))
        log.record(
            {"move": "resolve_same_edge_arc", "triangle": tid, "edge": e,
             "chord": [pa, pb]},
            w_plus_d(work),
        )
    else:
        raise PatternError("normalization exceeded its w+d budget")
    work.validate(Y, allow_loose=True)
    from .pattern import is_normal

    ok, offenders = is_normal(work)
    if not ok:
        raise PatternError(f"normalization left a non-normal pattern: {offenders}")
    return NormalizeResult(pattern=work, log=log, one_sided=one_sided)
