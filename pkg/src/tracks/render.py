"""Deterministic SVG rendering of complexes and patterns.

Triangles are drawn as unit equilateral triangles in a planar unfolding
along a breadth-first spanning tree of the dual graph; edges cut by the
unfolding appear twice and carry labels.  Edge coordinates map to drawn
positions through a logistic squash, so the tangency origin lands mid-edge.
"""

from __future__ import annotations

import math

PALETTE = ["#1965b0", "#dc050c", "#4eb265", "#882e72", "#f1932d", "#777777"]


def _squash(s):
    return 1.0 / (1.0 + math.exp(-s))


def layout(Y):
    """Triangle id -> corner positions (three (x, y) pairs, slot start
    corners), unfolded along a BFS dual spanning tree."""
    if not Y.triangles:
        return {}
    arcs = []
    for e in Y.edge_ids:
        slots = Y.edge_slots[e]
        for (t1, k1, _), (t2, k2, _) in zip(slots, slots[1:]):
            arcs.append((e, t1, t2))
    adj = {}
    for i, (e, t1, t2) in enumerate(arcs):
        adj.setdefault(t1, []).append((t2, e))
        adj.setdefault(t2, []).append((t1, e))

    pos = {}
    placed = set()
    cursor_x = 0.0
    h = math.sqrt(3.0) / 2.0
    for root in Y.triangle_ids:
        if root in placed:
            continue
        pos[root] = ((cursor_x, 0.0), (cursor_x + 1.0, 0.0), (cursor_x + 0.5, h))
        placed.add(root)
        queue = [root]
        while queue:
            t = queue.pop(0)
            for (t2, e) in sorted(adj.get(t, [])):
                if t2 in placed:
                    continue
                pos[t2] = _attach(Y, pos[t], t, t2, e)
                placed.add(t2)
                queue.append(t2)
        span = max(p[0] for t in placed for p in pos[t])
        cursor_x = span + 1.0
    return pos


def _corner_pts(Y, pos_t, t, e):
    """Drawn endpoints (start, end in traversal direction) of edge e's side
    in triangle t, plus the slot sign."""
    k, sign = Y.slot_of(t, e)
    a = pos_t[k]
    b = pos_t[(k + 1) % 3]
    return a, b, sign


def _attach(Y, pos_t, t, t2, e):
    a, b, sign = _corner_pts(Y, pos_t, t, e)
    # the shared edge drawn from its v_from corner, matching orientations
    from_pt, to_pt = (a, b) if sign > 0 else (b, a)
    k2, sign2 = Y.slot_of(t2, e)
    c0, c1 = (from_pt, to_pt) if sign2 > 0 else (to_pt, from_pt)
    # apex on the opposite side of the shared edge from t's third corner
    third = pos_t[(Y.slot_of(t, e)[0] + 2) % 3]
    apex = _reflect_apex(c0, c1, third)
    corners = [None, None, None]
    corners[k2] = c0
    corners[(k2 + 1) % 3] = c1
    corners[(k2 + 2) % 3] = apex
    return tuple(corners)


def _reflect_apex(c0, c1, avoid):
    mx, my = (c0[0] + c1[0]) / 2.0, (c0[1] + c1[1]) / 2.0
    dx, dy = c1[0] - c0[0], c1[1] - c0[1]
    n = math.hypot(dx, dy) or 1.0
    px, py = -dy / n, dx / n
    h = math.sqrt(3.0) / 2.0 * n
    cand1 = (mx + px * h, my + py * h)
    cand2 = (mx - px * h, my - py * h)
    d1 = (cand1[0] - avoid[0]) ** 2 + (cand1[1] - avoid[1]) ** 2
    d2 = (cand2[0] - avoid[0]) ** 2 + (cand2[1] - avoid[1]) ** 2
    return cand1 if d1 >= d2 else cand2


def _pt(Y, pos, pat, pid):
    e, s = pat.points[pid]
    frac = _squash(s)
    for t, k, sign in Y.edge_slots[e]:
        if t in pos:
            a, b, _ = _corner_pts(Y, pos[t], t, e)
            from_pt, to_pt = (a, b) if sign > 0 else (b, a)
            return (from_pt[0] + frac * (to_pt[0] - from_pt[0]),
                    from_pt[1] + frac * (to_pt[1] - from_pt[1]))
    raise KeyError(f"edge {e} not drawn")


def _chord_points(Y, pos, pat, tid, pid):
    e, s = pat.points[pid]
    frac = _squash(s)
    a, b, sign = _corner_pts(Y, pos[tid], tid, e)
    from_pt, to_pt = (a, b) if sign > 0 else (b, a)
    return (from_pt[0] + frac * (to_pt[0] - from_pt[0]),
            from_pt[1] + frac * (to_pt[1] - from_pt[1]))


def _f(x):
    return format(x, ".4f")


def render_svg(Y, patterns=(), width=900):
    """One SVG document: the unfolded complex, each pattern in its own
    colour, transverse-orientation arrows, and crossing highlights."""
    pos = layout(Y)
    lines = []
    marks = []
    labels = []
    for t in sorted(pos):
        pts = pos[t]
        path = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        lines.append(f'<polygon points="{path}" fill="#f7f7f2" stroke="#444444" stroke-width="0.012"/>')
        cx = sum(p[0] for p in pts) / 3.0
        cy = sum(p[1] for p in pts) / 3.0
        labels.append(f'<text x="{_f(cx)}" y="{_f(cy)}" font-size="0.1" fill="#999999" text-anchor="middle">{t}</text>')
        for k in range(3):
            e, sgn = Y.triangles[t][k]
            a, b = pts[k], pts[(k + 1) % 3]
            mx, my = (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0
            labels.append(f'<text x="{_f(mx)}" y="{_f(my)}" font-size="0.08" fill="#3366aa" text-anchor="middle">{e}</text>')

    segments = {}
    for pi, pat in enumerate(patterns):
        color = PALETTE[pi % len(PALETTE)]
        segs = []
        for tid, pa, pb in pat.chords:
            if tid not in pos:
                continue
            x1, y1 = _chord_points(Y, pos, pat, tid, pa)
            x2, y2 = _chord_points(Y, pos, pat, tid, pb)
            segs.append(((x1, y1), (x2, y2)))
            lines.append(
                f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                f'stroke="{color}" stroke-width="0.025"/>'
            )
            if pat.orientation is not None:
                side = pat.chord_side_bit(Y, tid, pa, pb)
                mx, my = (x1 + x2) / 2.0, (y1 + y2) / 2.0
                dx, dy = x2 - x1, y2 - y1
                n = math.hypot(dx, dy) or 1.0
                # boundary is drawn with the triangle's traversal; the
                # positive side of pa->pb sits right of the drawn direction
                px, py = dy / n, -dx / n
                if side < 0:
                    px, py = -px, -py
                lines.append(
                    f'<line x1="{_f(mx)}" y1="{_f(my)}" x2="{_f(mx + 0.12 * px)}" '
                    f'y2="{_f(my + 0.12 * py)}" stroke="{color}" stroke-width="0.015" '
                    f'marker-end="url(#arrow)"/>'
                )
        for p in pat.points:
            try:
                x, y = _pt(Y, pos, pat, p)
            except KeyError:
                continue
            marks.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="0.03" fill="{color}"/>')
        segments[pi] = segs

    # highlight crossings between consecutive patterns
    for i in sorted(segments):
        for j in sorted(segments):
            if j <= i:
                continue
            for (a1, a2) in segments[i]:
                for (b1, b2) in segments[j]:
                    x = _segment_intersection(a1, a2, b1, b2)
                    if x:
                        marks.append(
                            f'<circle cx="{_f(x[0])}" cy="{_f(x[1])}" r="0.045" '
                            f'fill="none" stroke="#dc050c" stroke-width="0.02"/>'
                        )

    xs = [p[0] for t in pos for p in pos[t]] or [0.0, 1.0]
    ys = [p[1] for t in pos for p in pos[t]] or [0.0, 1.0]
    pad = 0.3
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    height = int(width * (y1 - y0) / (x1 - x0)) if x1 > x0 else width
    body = "\n".join(lines + marks + labels)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_f(x0)} {_f(y0)} {_f(x1 - x0)} {_f(y1 - y0)}">\n'
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="8" refY="5" '
        'markerWidth="4" markerHeight="4" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="context-stroke"/></marker></defs>\n'
        f'<g transform="scale(1,-1) translate(0,{_f(-(y0 + y1))})">\n{body}\n</g>\n</svg>\n'
    )


def _segment_intersection(a1, a2, b1, b2):
    d1 = (a2[0] - a1[0], a2[1] - a1[1])
    d2 = (b2[0] - b1[0], b2[1] - b1[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(den) < 1e-12:
        return None
    t = ((b1[0] - a1[0]) * d2[1] - (b1[1] - a1[1]) * d2[0]) / den
    u = ((b1[0] - a1[0]) * d1[1] - (b1[1] - a1[1]) * d1[0]) / den
    if 1e-9 < t < 1 - 1e-9 and 1e-9 < u < 1 - 1e-9:
        return (a1[0] + t * d1[0], a1[1] + t * d1[1])
    return None
