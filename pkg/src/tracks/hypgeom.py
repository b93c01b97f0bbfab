"""Ideal hyperbolic triangle charts, chord lengths, complexity, minimization.

Every triangle is identified with the ideal triangle with vertices 0, 1, oo
in the upper half-plane; slot k of the triangle maps to side k of the cycle
(0,1), (1,oo), (oo,0) traversed counterclockwise.  Each side is parametrized
by signed hyperbolic arclength from its inscribed-circle tangency point, in
the traversal direction.  A point at intrinsic coordinate s on edge e (signed
arclength along the edge orientation) shows up in the chart of a slot with
sign eps and offset delta at chart position eps*s + delta; the offset is 0 on
the first slot of the edge and equal to the edge's shear on the others, so a
gluing transition has the form s -> +-s + shear.

For two points at chart positions u (on a side) and v (on the next side
counterclockwise) the geodesic chord between them has

    cosh L = cosh(u + v) + exp(v - u) / 2.

At u = v = 0 this gives the tangency-triangle side acosh(3/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering

TANGENCY_SIDE = math.acosh(1.5)


@total_ordering
@dataclass(frozen=True)
class Complexity:
    """Lexicographic (weight, length) pair with component-wise addition."""

    weight: int
    length: float

    def __lt__(self, other):
        if self.weight != other.weight:
            return self.weight < other.weight
        return self.length < other.length

    def __add__(self, other):
        return Complexity(self.weight + other.weight, self.length + other.length)

    def scale(self, d):
        return Complexity(self.weight * d, self.length * d)

    def as_tuple(self):
        return (self.weight, self.length)


def _chord_cosh(u, v):
    return math.cosh(u + v) + 0.5 * math.exp(v - u)


def chord_len_uv(u, v):
    """Chord length between chart positions u and v on ccw-consecutive sides."""
    a, b = u + v, v - u
    m = max(abs(a), b, 0.0)
    if m > 300.0:
        # acosh(c) ~ log(2c); factor out exp(m) to avoid overflow
        scaled = 0.5 * (_exp(a - m) + _exp(-a - m)) + 0.5 * _exp(b - m)
        return m + math.log(2.0 * scaled)
    return math.acosh(max(1.0, _chord_cosh(u, v)))


def _exp(x):
    return math.exp(x) if x > -745.0 else 0.0


def chord_grad_uv(u, v):
    """(dL/du, dL/dv) for chord_len_uv."""
    a, b = u + v, v - u
    m = max(abs(a), b, 0.0)
    if m > 300.0:
        sh = 0.5 * (_exp(a - m) - _exp(-a - m))
        ch = 0.5 * (_exp(a - m) + _exp(-a - m))
        den = ch + 0.5 * _exp(b - m)   # ~ sqrt(c^2-1)/exp(m) for huge c
        ex = 0.5 * _exp(b - m)
        return (sh - ex) / den, (sh + ex) / den
    c = _chord_cosh(u, v)
    den = math.sqrt(max(c * c - 1.0, 1e-300))
    sh = math.sinh(a)
    ex = 0.5 * math.exp(b)
    return (sh - ex) / den, (sh + ex) / den


def side_point(side, u):
    """Upper half-plane point at arclength u from the tangency point of the
    given ideal side, measured along the ccw traversal direction."""
    if side == 0:      # (0, 1): semicircle
        ch = 2.0 * math.cosh(u)
        return complex(math.exp(u) / ch, 1.0 / ch)
    if side == 1:      # (1, oo): vertical line upward
        return complex(1.0, math.exp(u))
    if side == 2:      # (oo, 0): vertical line downward
        return complex(0.0, math.exp(-u))
    raise ValueError(f"side must be 0, 1, 2, not {side}")


def hyp_dist(z, w):
    num = (z.real - w.real) ** 2 + (z.imag - w.imag) ** 2
    return math.acosh(1.0 + num / (2.0 * z.imag * w.imag))


def geodesic_between(z, w):
    """(center, radius) of the geodesic through z, w; radius None for a
    vertical line at x = center."""
    if abs(z.real - w.real) < 1e-14:
        return z.real, None
    c = (abs(w) ** 2 - abs(z) ** 2) / (2.0 * (w.real - z.real))
    return c, abs(z - c)


def geodesic_crossing(z1, w1, z2, w2):
    """Intersection point of geodesics (z1,w1) and (z2,w2), or None."""
    c1, r1 = geodesic_between(z1, w1)
    c2, r2 = geodesic_between(z2, w2)
    if r1 is None and r2 is None:
        return None
    if r1 is None:
        x = c1
        h2 = r2 * r2 - (x - c2) ** 2
    elif r2 is None:
        x = c2
        h2 = r1 * r1 - (x - c1) ** 2
    else:
        if abs(c1 - c2) < 1e-14:
            return None
        x = (r2 * r2 - r1 * r1 + c1 * c1 - c2 * c2) / (2.0 * (c1 - c2))
        h2 = r1 * r1 - (x - c1) ** 2
    if h2 <= 0:
        return None
    return complex(x, math.sqrt(h2))


class HypStructure:
    """Charts plus shear offsets for one complex."""

    def __init__(self, complex2, shears=None):
        self.Y = complex2
        merged = dict(complex2.shears)
        if shears:
            merged.update(shears)
        for e in merged:
            if complex2.valence(e) == 0:
                raise ValueError(f"shear specified for free edge {e}")
        self.shears = merged

    def slot_offset(self, t, k):
        e, _ = self.Y.triangles[t][k]
        first_t, first_k, _ = self.Y.edge_slots[e][0]
        if (t, k) == (first_t, first_k):
            return 0.0
        return self.shears.get(e, 0.0)

    def chart_position(self, t, k, s):
        _, sign = self.Y.triangles[t][k]
        return sign * s + self.slot_offset(t, k)

    def chart_point(self, t, k, s):
        """Half-plane realization of the edge point with intrinsic coord s."""
        return side_point(k, self.chart_position(t, k, s))


def assign_structure(Y, shears=None):
    """Deterministic chart assignment with optional shear overrides."""
    return HypStructure(Y, shears)


def chord_length(H, t, p, q):
    """Length of the geodesic chord of triangle t between edge points
    p = (edge, s) and q = (edge, s'); same-edge pairs measure along the edge."""
    ep, sp = p
    eq, sq = q
    kp, _ = H.Y.slot_of(t, ep)
    kq, _ = H.Y.slot_of(t, eq)
    up = H.chart_position(t, kp, sp)
    uq = H.chart_position(t, kq, sq)
    if kp == kq:
        return abs(up - uq)
    if kq == (kp + 1) % 3:
        return chord_len_uv(up, uq)
    return chord_len_uv(uq, up)


# -- complexity ---------------------------------------------------------------


def _chord_terms(Y, H, pat):
    """Per chord: (tid, pa, pb, ka, kb) with chart data resolvable live."""
    out = []
    for tid, pa, pb in pat.chords:
        ea, _ = pat.points[pa]
        eb, _ = pat.points[pb]
        ka, _ = Y.slot_of(tid, ea)
        kb, _ = Y.slot_of(tid, eb)
        out.append((tid, pa, pb, ka, kb))
    return out


def _chord_value(H, pat, tid, pa, pb, ka, kb, coords):
    ua = H.chart_position(tid, ka, coords[pa])
    ub = H.chart_position(tid, kb, coords[pb])
    if ka == kb:
        return abs(ua - ub)
    if kb == (ka + 1) % 3:
        return chord_len_uv(ua, ub)
    return chord_len_uv(ub, ua)


def total_length(pat, H, coords=None):
    Y = H.Y
    coords = coords if coords is not None else {p: s for p, (_, s) in pat.points.items()}
    return sum(
        _chord_value(H, pat, *term, coords)
        for term in _chord_terms(Y, H, pat)
    )


def pattern_complexity(t, H):
    """c(t) = (weight, summed chord length); trivial circles must be deleted
    first because they have no geometric representative here."""
    if any(t.circles.values()):
        raise ValueError("pattern has trivial circles; normalize before measuring")
    return Complexity(t.weight(), total_length(t, H))


def length_gradient(pat, H, coords=None):
    """Analytic gradient of total length with respect to intrinsic coords."""
    Y = H.Y
    coords = coords if coords is not None else {p: s for p, (_, s) in pat.points.items()}
    grad = {p: 0.0 for p in pat.points}
    for tid, pa, pb, ka, kb in _chord_terms(Y, H, pat):
        _, sa = Y.triangles[tid][ka]
        _, sb = Y.triangles[tid][kb]
        ua = H.chart_position(tid, ka, coords[pa])
        ub = H.chart_position(tid, kb, coords[pb])
        if ka == kb:
            d = 1.0 if ua > ub else -1.0 if ua < ub else 0.0
            grad[pa] += d * sa
            grad[pb] += -d * sb
        elif kb == (ka + 1) % 3:
            gu, gv = chord_grad_uv(ua, ub)
            grad[pa] += gu * sa
            grad[pb] += gv * sb
        else:
            gu, gv = chord_grad_uv(ub, ua)
            grad[pa] += gv * sa
            grad[pb] += gu * sb
    return grad


# -- minimization --------------------------------------------------------------


@dataclass
class MinimizeResult:
    positions: dict
    complexity: Complexity
    iterations: int
    converged: bool
    grad_norm: float
    coincidences: list
    lengths: list

    @property
    def transverse(self):
        return not self.coincidences


def _solve_1d(evals, s0, lo, hi):
    """Minimize a convex 1-D restriction given (value', slope') callbacks.

    evals(s) -> derivative of the objective at s.  The derivative is
    nondecreasing; bracket a sign change by doubling steps, then bisect.
    The result is clamped into [lo, hi].
    """
    d0 = evals(s0)
    if d0 == 0.0:
        return min(max(s0, lo), hi)
    step = 1.0
    if d0 > 0:
        a, b = s0 - step, s0
        while evals(a) > 0 and a > -1e3:
            step *= 2.0
            a -= step
        left, right = a, b
    else:
        a, b = s0, s0 + step
        while evals(b) < 0 and b < 1e3:
            step *= 2.0
            b += step
        left, right = a, b
    for _ in range(200):
        mid = 0.5 * (left + right)
        if mid == left or mid == right:
            break
        if evals(mid) > 0:
            right = mid
        else:
            left = mid
        if right - left < 1e-14 * max(1.0, abs(left)):
            break
    root = 0.5 * (left + right)
    return min(max(root, lo), hi)


def minimize_length(pat, H, tol=1e-10, max_iter=200):
    """Cyclic coordinate descent with exact 1-D line search per edge point.

    Sweeps run in (edge id, point index) order; the ordering of points on
    each edge is preserved with weak inequalities, so points may coincide in
    the limit (reported, never perturbed).  The pattern must be normal.
    """
    Y = H.Y
    ok, offenders = _normal_for_minimize(pat, Y)
    if not ok:
        raise ValueError(f"minimize_length needs a normal pattern; offenders: {offenders}")
    coords = {p: s for p, (_, s) in pat.points.items()}
    incident = {p: [] for p in pat.points}
    for tid, pa, pb, ka, kb in _chord_terms(Y, H, pat):
        incident[pa].append((tid, ka, kb, pb))
        incident[pb].append((tid, kb, ka, pa))

    def deriv_at(p, s):
        total = 0.0
        for tid, kp, kq, q in incident[p]:
            _, sp = Y.triangles[tid][kp]
            up = sp * s + H.slot_offset(tid, kp)
            uq = H.chart_position(tid, kq, coords[q])
            if kq == (kp + 1) % 3:
                gu, _ = chord_grad_uv(up, uq)
            else:
                _, gu = chord_grad_uv(uq, up)
            total += gu * sp
        return total

    lengths = [total_length(pat, H, coords)]
    sweep_order = []
    for e in sorted(pat.edge_order):
        for i, p in enumerate(pat.edge_order[e]):
            if incident[p]:
                sweep_order.append((e, i, p))

    iterations = 0
    converged = False
    for it in range(max_iter):
        iterations = it + 1
        max_move = 0.0
        for e, i, p in sweep_order:
            order = pat.edge_order[e]
            lo = coords[order[i - 1]] if i > 0 else -math.inf
            hi = coords[order[i + 1]] if i + 1 < len(order) else math.inf
            s_new = _solve_1d(lambda s: deriv_at(p, s), coords[p], lo, hi)
            max_move = max(max_move, abs(s_new - coords[p]))
            coords[p] = s_new
        lengths.append(total_length(pat, H, coords))
        if max_move < tol:
            converged = True
            break

    grad = length_gradient(pat, H, coords)
    interior = []
    coincidences = []
    for e in sorted(pat.edge_order):
        order = pat.edge_order[e]
        for i, p in enumerate(order):
            at_bound = False
            if i > 0 and abs(coords[p] - coords[order[i - 1]]) < 1e-9:
                coincidences.append((e, order[i - 1], p))
                at_bound = True
            if not at_bound and incident[p]:
                interior.append(grad[p])
    grad_norm = math.sqrt(sum(g * g for g in interior)) if interior else 0.0
    comp = Complexity(pat.weight(), lengths[-1])
    return MinimizeResult(
        positions=coords,
        complexity=comp,
        iterations=iterations,
        converged=converged,
        grad_norm=grad_norm,
        coincidences=coincidences,
        lengths=lengths,
    )


def _normal_for_minimize(pat, Y):
    offenders = []
    if any(pat.circles.values()):
        offenders.append("trivial circles")
    for tid, pa, pb in pat.chords:
        ea, _ = pat.points[pa]
        eb, _ = pat.points[pb]
        if ea == eb:
            offenders.append((tid, pa, pb))
    return not offenders, offenders
