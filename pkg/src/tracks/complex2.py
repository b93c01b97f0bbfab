"""2-complex data model: parsing, validation, covers, coboundary patterns.

A complex is a finite collection of vertices, oriented edges and triangles.
Each triangle lists three signed edge slots whose traversal chains into a
closed boundary.  Loops and multiple edges are allowed (Delta-complex style)
but one triangle may not use the same edge twice.  A subset of vertices and
edges may be flagged as "truncation frontier"; downstream analysis treats
frontier contact as the stand-in for going off to infinity.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


class InputError(Exception):
    """Malformed complex/pattern input.  Carries a line number when parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass
class Complex2:
    vertices: list
    edges: dict            # edge id -> (v_from, v_to)
    triangles: dict        # triangle id -> ((edge, sign), (edge, sign), (edge, sign))
    frontier_vertices: set = field(default_factory=set)
    frontier_edges: set = field(default_factory=set)
    base_vertex: str | None = None
    cocycle: dict = field(default_factory=dict)
    cocycle2: dict = field(default_factory=dict)
    shears: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = sorted(self.vertices)
        self.edge_ids = sorted(self.edges)
        self.triangle_ids = sorted(self.triangles)
        if self.base_vertex is None and self.vertices:
            self.base_vertex = self.vertices[0]
        self._validate()
        self._derive()

    # -- validation -------------------------------------------------------

    def _validate(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise InputError("duplicate vertex id")
        if not self.vertices:
            raise InputError("complex has no vertices")
        for e, (a, b) in self.edges.items():
            if a not in vs or b not in vs:
                raise InputError(f"edge {e} references unknown vertex")
        for t, sides in self.triangles.items():
            if len(sides) != 3:
                raise InputError(f"triangle {t} does not have three sides")
            eids = [e for e, _ in sides]
            for e in eids:
                if e not in self.edges:
                    raise InputError(f"triangle {t} references unknown edge {e}")
            if len(set(eids)) != 3:
                raise InputError(f"triangle {t} uses an edge twice (non-simplicial incidence)")
            for k in range(3):
                if self._end(sides[k]) != self._start(sides[(k + 1) % 3]):
                    raise InputError(f"triangle {t} boundary does not chain at slot {k}")
        for v in self.frontier_vertices:
            if v not in vs:
                raise InputError(f"frontier mark on unknown vertex {v}")
        for e in self.frontier_edges:
            if e not in self.edges:
                raise InputError(f"frontier mark on unknown edge {e}")
            a, b = self.edges[e]
            if a not in self.frontier_vertices or b not in self.frontier_vertices:
                raise InputError(f"frontier edge {e} has an unmarked endpoint")
        if self.base_vertex not in vs:
            raise InputError(f"base vertex {self.base_vertex} not a vertex")
        for e in list(self.cocycle) + list(self.cocycle2) + list(self.shears):
            if e not in self.edges:
                raise InputError(f"edge datum on unknown edge {e}")

    def _start(self, side):
        e, s = side
        a, b = self.edges[e]
        return a if s > 0 else b

    def _end(self, side):
        e, s = side
        a, b = self.edges[e]
        return b if s > 0 else a

    def _derive(self):
        # edge -> [(triangle, slot, sign)] ordered by (triangle, slot); the
        # first entry is the reference chart for shear offsets.
        self.edge_slots = {e: [] for e in self.edge_ids}
        for t in self.triangle_ids:
            for k, (e, s) in enumerate(self.triangles[t]):
                self.edge_slots[e].append((t, k, s))
        for e in self.edge_ids:
            self.edge_slots[e].sort()
        # corner k of a triangle is the start vertex of side k
        self.corners = {
            t: tuple(self._start(self.triangles[t][k]) for k in range(3))
            for t in self.triangle_ids
        }
        self._vertex_edges = {v: [] for v in self.vertices}
        for e in self.edge_ids:
            a, b = self.edges[e]
            self._vertex_edges[a].append(e)
            if b != a:
                self._vertex_edges[b].append(e)

    # -- basic queries ----------------------------------------------------

    def valence(self, e):
        return len(self.edge_slots[e])

    def free_edges(self):
        return [e for e in self.edge_ids if self.valence(e) == 0]

    def slot_of(self, t, e):
        """(slot index, sign) of edge e inside triangle t."""
        for k, (ee, s) in enumerate(self.triangles[t]):
            if ee == e:
                return k, s
        raise KeyError(f"edge {e} not a side of triangle {t}")

    def side(self, t, k):
        return self.triangles[t][k]

    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def is_compact(self):
        """No frontier marks: the complex stands for itself, not a truncation."""
        return not self.frontier_vertices and not self.frontier_edges

    def cells(self):
        for v in self.vertices:
            yield ("V", v)
        for e in self.edge_ids:
            yield ("E", e)
        for t in self.triangle_ids:
            yield ("T", t)

    # -- links and trees ---------------------------------------------------

    def vertex_link(self, v):
        """The link of v as a 1-complex.

        Nodes are edge-ends (edge, end) with end 0 at v_from and 1 at v_to;
        a loop at v contributes both ends.  Link edges join the two ends
        meeting at each triangle corner at v.
        """
        nodes = []
        for e in self._vertex_edges[v]:
            a, b = self.edges[e]
            if a == v:
                nodes.append((e, 0))
            if b == v:
                nodes.append((e, 1))
        segments = []
        for t in self.triangle_ids:
            for k in range(3):
                if self.corners[t][k] != v:
                    continue
                # corner k sits between side k-1 (incoming) and side k (outgoing)
                e_in, s_in = self.triangles[t][(k + 2) % 3]
                e_out, s_out = self.triangles[t][k]
                n_in = (e_in, 1 if s_in > 0 else 0)
                n_out = (e_out, 0 if s_out > 0 else 1)
                segments.append((n_in, n_out, t, k))
        return LinkGraph(v, sorted(nodes), sorted(segments))

    def spanning_tree(self):
        """BFS spanning tree from the base vertex, edges tried in id order.

        Returns (tree edge set, parent map vertex -> (vertex, edge, sign))
        where sign +1 means the tree edge is traversed from parent to child
        along the edge orientation.
        """
        tree = set()
        parent = {self.base_vertex: None}
        queue = deque([self.base_vertex])
        while queue:
            v = queue.popleft()
            for e in sorted(self._vertex_edges[v]):
                a, b = self.edges[e]
                steps = []
                if a == v:
                    steps.append((b, 1))
                if b == v:
                    steps.append((a, -1))
                for w, sgn in steps:
                    if w in parent:
                        continue
                    parent[w] = (v, e, sgn)
                    tree.add(e)
                    queue.append(w)
        if len(parent) != len(self.vertices):
            raise InputError("complex is not connected")
        return tree, parent

    # -- serialization ------------------------------------------------------

    def to_text(self):
        lines = []
        for v in self.vertices:
            lines.append(f"vertex {v}")
        for e in self.edge_ids:
            a, b = self.edges[e]
            lines.append(f"edge {e} {a} {b}")
        for t in self.triangle_ids:
            sides = " ".join(("+" if s > 0 else "-") + e for e, s in self.triangles[t])
            lines.append(f"triangle {t} {sides}")
        for v in sorted(self.frontier_vertices):
            lines.append(f"frontier vertex {v}")
        for e in sorted(self.frontier_edges):
            lines.append(f"frontier edge {e}")
        for e in sorted(self.cocycle):
            lines.append(f"cocycle {e} {self.cocycle[e]}")
        for e in sorted(self.cocycle2):
            lines.append(f"cocycle2 {e} {self.cocycle2[e]}")
        for e in sorted(self.shears):
            lines.append(f"shear {e} {format(self.shears[e], '.12g')}")
        lines.append(f"base {self.base_vertex}")
        return "\n".join(lines) + "\n"


class LinkGraph:
    """Link of a vertex: a graph on edge-ends."""

    def __init__(self, vertex, nodes, segments):
        self.vertex = vertex
        self.nodes = nodes
        self.segments = segments  # (node, node, triangle, corner slot)

    def components(self):
        comp = {n: n for n in self.nodes}

        def find(x):
            while comp[x] != x:
                comp[x] = comp[comp[x]]
                x = comp[x]
            return x

        for a, b, _, _ in self.segments:
            ra, rb = find(a), find(b)
            if ra != rb:
                comp[max(ra, rb)] = min(ra, rb)
        out = {}
        for n in self.nodes:
            out.setdefault(find(n), []).append(n)
        return [sorted(v) for _, v in sorted(out.items())]

    def is_circle(self):
        degree = {n: 0 for n in self.nodes}
        for a, b, _, _ in self.segments:
            degree[a] += 1
            degree[b] += 1
        return self.nodes and all(d == 2 for d in degree.values()) and len(self.components()) == 1


# -- parsing ----------------------------------------------------------------


def parse_complex(text):
    """Parse the complex file grammar; raises InputError with line numbers."""
    vertices, edges, triangles = [], {}, {}
    fv, fe, cocycle, cocycle2, shears = set(), set(), {}, {}, {}
    base = None

    def signed(tok, ln):
        if tok.startswith("-"):
            return tok[1:], -1
        if tok.startswith("+"):
            return tok[1:], 1
        return tok, 1

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw, args = parts[0], parts[1:]
        try:
            if kw == "vertex" and len(args) == 1:
                vertices.append(args[0])
            elif kw == "edge" and len(args) == 3:
                if args[0] in edges:
                    raise InputError(f"duplicate edge id {args[0]}", ln)
                edges[args[0]] = (args[1], args[2])
            elif kw == "triangle" and len(args) == 4:
                if args[0] in triangles:
                    raise InputError(f"duplicate triangle id {args[0]}", ln)
                triangles[args[0]] = tuple(signed(a, ln) for a in args[1:])
            elif kw == "frontier" and len(args) == 2 and args[0] in ("vertex", "edge"):
                (fv if args[0] == "vertex" else fe).add(args[1])
            elif kw == "cocycle" and len(args) == 2:
                cocycle[args[0]] = int(args[1])
            elif kw == "cocycle2" and len(args) == 2:
                cocycle2[args[0]] = int(args[1])
            elif kw == "shear" and len(args) == 2:
                shears[args[0]] = float(args[1])
            elif kw == "base" and len(args) == 1:
                base = args[0]
            else:
                raise InputError(f"unrecognized directive {line!r}", ln)
        except ValueError as exc:
            raise InputError(str(exc), ln) from exc

    try:
        return Complex2(
            vertices=vertices,
            edges=edges,
            triangles=triangles,
            frontier_vertices=fv,
            frontier_edges=fe,
            base_vertex=base,
            cocycle=cocycle,
            cocycle2=cocycle2,
            shears=shears,
        )
    except InputError:
        raise
    except Exception as exc:  # defensive: surface as input error
        raise InputError(str(exc)) from exc


def parse_and_validate(text):
    """Spec-facing alias for parse_complex."""
    return parse_complex(text)


# -- covers -------------------------------------------------------------------


@dataclass
class CoverSpec:
    """Recipe for a cover: an integer cocycle (optionally a pair), or
    subgroup generator words over signed edge ids with a coset bound."""

    cocycle: dict | None = None
    cocycle2: dict | None = None
    subgroup_words: list | None = None
    coset_bound: int | None = None


@dataclass
class CoverResult:
    complex: Complex2
    base: Complex2
    kind: str                      # "finite" | "truncated" | "block" | "subgroup"
    cell_base: dict                # cover cell id -> base cell id
    vertex_level: dict             # cover vertex -> int | (int, int) | coset
    deck: dict | None = None       # finite mode: cell id -> cell id
    warnings: list = field(default_factory=list)
    coset_table: object = None     # subgroup mode
    degree: int | None = None
    radius: int | None = None

    def pullback(self, base_cocycle):
        """Pull a base cocycle back to the cover's edges."""
        return {
            e: base_cocycle.get(self.cell_base[e], 0)
            for e in self.complex.edge_ids
        }


def _check_cocycle(base, phi, modulus=None):
    tree, _ = base.spanning_tree()
    for e in tree:
        if phi.get(e, 0) != 0:
            raise InputError(f"cocycle is nonzero on spanning-tree edge {e}")
    for t in base.triangle_ids:
        total = sum(s * phi.get(e, 0) for e, s in base.triangles[t])
        if modulus is None:
            if total != 0:
                raise InputError(f"cocycle does not close around triangle {t}")
        elif total % modulus != 0:
            raise InputError(f"cocycle does not close around triangle {t} (mod {modulus})")


def _triangle_side_levels(base, t, phi):
    """Start level offset of each side of t, plus the offset of the edge copy
    used by that side, relative to the lift starting at level 0."""
    offs = []
    level = 0
    for e, s in base.triangles[t]:
        d = s * phi.get(e, 0)
        edge_level = level if s > 0 else level + d
        offs.append((level, edge_level))
        level += d
    return offs


def build_cyclic_cover(base, spec, mode, degree=None, radius=None):
    """Build a cover of `base`.

    mode "finite" (cocycle, degree n): the n-fold cyclic cover with its deck
    map; the cocycle must close mod n.  mode "truncated" (cocycle, radius k):
    levels -k..k with frontier marks on cells meeting the cut; a second
    cocycle switches to a rank-2 block truncation.  Subgroup specs always
    build truncated covers via bounded coset enumeration; incomplete coset
    rows become frontier.
    """
    if spec.subgroup_words is not None:
        return _cover_subgroup(base, spec)
    if spec.cocycle is None:
        raise InputError("cover spec carries neither a cocycle nor subgroup words")
    if mode == "finite":
        if not degree or degree < 1:
            raise InputError("finite cover needs a degree >= 1")
        return _cover_levels(base, spec, kind="finite", degree=degree)
    if mode == "truncated":
        if radius is None or radius < 1:
            raise InputError("truncated cover needs a radius >= 1")
        kind = "block" if spec.cocycle2 else "truncated"
        return _cover_levels(base, spec, kind=kind, radius=radius)
    raise InputError(f"unknown cover mode {mode!r}")


def _cover_levels(base, spec, kind, degree=None, radius=None):
    phi1 = spec.cocycle
    phi2 = spec.cocycle2 if kind == "block" else None
    if kind == "finite":
        _check_cocycle(base, phi1, modulus=degree)
    else:
        _check_cocycle(base, phi1)
        if phi2:
            _check_cocycle(base, phi2)

    rank2 = phi2 is not None

    def shift(e):
        return (phi1.get(e, 0), phi2.get(e, 0)) if rank2 else phi1.get(e, 0)

    def add(lv, d):
        if kind == "finite":
            return (lv + d) % degree
        if rank2:
            return (lv[0] + d[0], lv[1] + d[1])
        return lv + d

    def vkept(lv):
        if kind == "finite":
            return True
        if rank2:
            return abs(lv[0]) <= radius and abs(lv[1]) <= radius
        return abs(lv) <= radius

    def lid(lv):
        return f"{lv[0]}.{lv[1]}" if rank2 else f"{lv}"

    zero = (0, 0) if rank2 else 0
    if kind == "finite":
        levels = list(range(degree))
    elif rank2:
        levels = [(i, j) for i in range(-radius, radius + 1) for j in range(-radius, radius + 1)]
    else:
        levels = list(range(-radius, radius + 1))

    side_offsets = {t: _triangle_side_levels(base, t, phi1) for t in base.triangle_ids}
    if rank2:
        side_offsets2 = {t: _triangle_side_levels(base, t, phi2) for t in base.triangle_ids}

    def tri_offsets(t):
        if not rank2:
            return [(a, b) for a, b in side_offsets[t]]
        return [
            ((a1, a2), (b1, b2))
            for (a1, b1), (a2, b2) in zip(side_offsets[t], side_offsets2[t])
        ]

    def ekept(e, lv):
        return vkept(lv) and vkept(add(lv, shift(e)))

    def tkept(t, lv):
        offs = tri_offsets(t)
        for k, (e, s) in enumerate(base.triangles[t]):
            start_off, edge_off = offs[k]
            if not vkept(add(lv, start_off)) or not ekept(e, add(lv, edge_off)):
                return False
        return True

    vertices, edges, triangles = [], {}, {}
    cell_base, vertex_level, edge_level, tri_level = {}, {}, {}, {}
    for v in base.vertices:
        for lv in levels:
            vid = f"{v}@{lid(lv)}"
            vertices.append(vid)
            cell_base[vid] = v
            vertex_level[vid] = lv
    for e in base.edge_ids:
        a, b = base.edges[e]
        for lv in levels:
            if not ekept(e, lv):
                continue
            eid = f"{e}@{lid(lv)}"
            edges[eid] = (f"{a}@{lid(lv)}", f"{b}@{lid(add(lv, shift(e)))}")
            cell_base[eid] = e
            edge_level[eid] = lv
    for t in base.triangle_ids:
        offs = tri_offsets(t)
        for lv in levels:
            if not tkept(t, lv):
                continue
            tid = f"{t}@{lid(lv)}"
            sides = []
            for k, (e, s) in enumerate(base.triangles[t]):
                _, edge_off = offs[k]
                sides.append((f"{e}@{lid(add(lv, edge_off))}", s))
            triangles[tid] = tuple(sides)
            cell_base[tid] = t
            tri_level[tid] = lv

    # base frontier marks lift to every cover kind; truncation adds its own
    fv = {vid for vid in vertices if cell_base[vid] in base.frontier_vertices}
    fe = {eid for eid in edges if cell_base[eid] in base.frontier_edges}
    # frontier: a kept cell is frontier iff in the unbounded cover it is a
    # face of some cell that was not kept
    if kind != "finite":
        incident_e = {v: [] for v in base.vertices}   # (edge, delta to edge level)
        for e in base.edge_ids:
            a, b = base.edges[e]
            incident_e[a].append((e, zero))
            neg = (-shift(e)[0], -shift(e)[1]) if rank2 else -shift(e)
            incident_e[b].append((e, neg))
        incident_t = {v: [] for v in base.vertices}   # (triangle, delta to tri level)
        for t in base.triangle_ids:
            offs = tri_offsets(t)
            for k in range(3):
                start_off = offs[k][0]
                v = base.corners[t][k]
                neg = (-start_off[0], -start_off[1]) if rank2 else -start_off
                incident_t[v].append((t, neg))
        edge_incident_t = {e: [] for e in base.edge_ids}
        for t in base.triangle_ids:
            offs = tri_offsets(t)
            for k, (e, s) in enumerate(base.triangles[t]):
                off = offs[k][1]
                neg = (-off[0], -off[1]) if rank2 else -off
                edge_incident_t[e].append((t, neg))

        for vid in vertices:
            v, lv = cell_base[vid], vertex_level[vid]
            bad = any(not ekept(e, add(lv, d)) for e, d in incident_e[v]) or any(
                not tkept(t, add(lv, d)) for t, d in incident_t[v]
            )
            if bad:
                fv.add(vid)
        for eid in edges:
            e, lv = cell_base[eid], edge_level[eid]
            if any(not tkept(t, add(lv, d)) for t, d in edge_incident_t[e]):
                fe.add(eid)
                a, b = edges[eid]
                fv.add(a)
                fv.add(b)

    shears = {eid: base.shears[cell_base[eid]] for eid in edges if cell_base[eid] in base.shears}
    cover = Complex2(
        vertices=vertices,
        edges=edges,
        triangles=triangles,
        frontier_vertices=fv,
        frontier_edges=fe,
        base_vertex=f"{base.base_vertex}@{lid(zero)}",
        shears=shears,
    )

    deck = None
    if kind == "finite":
        deck = {}
        for vid in vertices:
            deck[vid] = f"{cell_base[vid]}@{lid(add(vertex_level[vid], 1))}"
        for eid in edges:
            deck[eid] = f"{cell_base[eid]}@{lid(add(edge_level[eid], 1))}"
        for tid in triangles:
            deck[tid] = f"{cell_base[tid]}@{lid(add(tri_level[tid], 1))}"

    return CoverResult(
        complex=cover,
        base=base,
        kind=kind,
        cell_base=cell_base,
        vertex_level=vertex_level,
        deck=deck,
        degree=degree,
        radius=radius,
    )


# -- coset enumeration ---------------------------------------------------------


class CosetTable:
    """Partial coset table over the non-tree edge generators of a complex.

    Plain HLT-style relator filling with FIFO processing; coincidences are
    merged with union-find but no coincidence-driven lookahead is performed.
    Coset 1 is the subgroup itself.  Deterministic given the input.
    """

    def __init__(self, base, words, bound):
        self.base = base
        self.bound = max(1, bound)
        tree, _ = base.spanning_tree()
        self.tree = tree
        self.gens = [e for e in base.edge_ids if e not in tree]
        self.relators = []
        for t in base.triangle_ids:
            w = self.reduce_word([(e, s) for e, s in base.triangles[t]])
            if w:
                self.relators.append(w)
        self.subgroup_words = []
        for w in words:
            red = self.reduce_word(w)
            if not w:
                raise InputError("empty subgroup word")
            self.subgroup_words.append(red)
        self.table = {1: {}}
        self.merged = {}
        self._next = 2
        self._run()

    # words are lists of (edge id, ±1); tree letters act trivially
    def reduce_word(self, word):
        out = []
        for e, s in word:
            if e in self.tree:
                continue
            if e not in self.base.edges:
                raise InputError(f"unknown edge {e} in word")
            if out and out[-1] == (e, -s):
                out.pop()
            else:
                out.append((e, s))
        return out

    def rep(self, c):
        while c in self.merged:
            c = self.merged[c]
        return c

    def _get(self, c, letter):
        c = self.rep(c)
        t = self.table[c].get(letter)
        return None if t is None else self.rep(t)

    def _set(self, c, letter, d):
        c, d = self.rep(c), self.rep(d)
        e, s = letter
        exist = self._get(c, letter)
        if exist is not None:
            if exist != d:
                self._coincide(exist, d)
            return
        self.table[c][letter] = d
        back = self._get(d, (e, -s))
        if back is None:
            self.table[d][(e, -s)] = c
        elif back != c:
            self._coincide(back, c)

    def _coincide(self, a, b):
        queue = deque([(a, b)])
        while queue:
            a, b = queue.popleft()
            a, b = self.rep(a), self.rep(b)
            if a == b:
                continue
            if b < a:
                a, b = b, a
            self.merged[b] = a
            row = self.table.pop(b)
            for letter, t in row.items():
                t = self.rep(t)
                cur = self._get(a, letter)
                if cur is None:
                    self.table[a][letter] = t
                elif cur != t:
                    queue.append((cur, t))

    def _scan(self, c, word):
        """Scan word from coset c, filling entries; defines cosets up to bound."""
        c = self.rep(c)
        i, j = 0, len(word) - 1
        f, b = c, c
        while i <= j:
            t = self._get(f, word[i])
            if t is None:
                break
            f, i = t, i + 1
        while j >= i:
            e, s = word[j]
            t = self._get(b, (e, -s))
            if t is None:
                break
            b, j = t, j - 1
        if i > j:
            if f != b:
                self._coincide(f, b)
            return
        if i == j:
            self._set(f, word[i], b)
            return
        # gap of length >= 2: define new cosets while budget remains
        while i < j and len(self.table) < self.bound:
            new = self._next
            self._next += 1
            self.table[new] = {}
            self._set(f, word[i], new)
            f, i = new, i + 1
        if i == j:
            self._set(f, word[i], b)

    def _run(self):
        for w in self.subgroup_words:
            self._scan(1, w)
        changed = True
        while changed:
            before = (len(self.table), len(self.merged),
                      sum(len(r) for r in self.table.values()))
            for c in sorted(self.table):
                if c not in self.table:
                    continue                      # merged away mid-pass
                for w in self.relators:
                    if c not in self.table:
                        break
                    self._scan(c, w)
                if c not in self.table:
                    continue
                # row filling: define the missing entries in letter order
                for e in self.gens:
                    for s in (1, -1):
                        if c not in self.table or len(self.table) >= self.bound:
                            break
                        if self._get(c, (e, s)) is None:
                            new = self._next
                            self._next += 1
                            self.table[new] = {}
                            self._set(c, (e, s), new)
            after = (len(self.table), len(self.merged),
                     sum(len(r) for r in self.table.values()))
            changed = before != after

    def cosets(self):
        return sorted(self.table)

    def trace(self, c, word, partial=False):
        """Trace a reduced word; None if it leaves the table."""
        c = self.rep(c)
        for letter in self.reduce_word(word):
            c = self._get(c, letter)
            if c is None:
                return None
        return c

    def row_complete(self, c):
        c = self.rep(c)
        for e in self.gens:
            if self._get(c, (e, 1)) is None or self._get(c, (e, -1)) is None:
                return False
        return True


def _cover_subgroup(base, spec):
    if spec.coset_bound is None or spec.coset_bound < 1:
        raise InputError("subgroup cover needs a positive coset_bound")
    words = []
    for w in spec.subgroup_words:
        if isinstance(w, str):
            toks = w.split()
            parsed = []
            for tok in toks:
                s = -1 if tok.startswith("-") else 1
                parsed.append((tok.lstrip("+-"), s))
            if not parsed:
                raise InputError("empty subgroup word")
            words.append(parsed)
        else:
            words.append(list(w))
    tab = CosetTable(base, words, spec.coset_bound)
    cosets = tab.cosets()

    def edge_target(c, e):
        if e in tab.tree:
            return tab.rep(c)
        return tab._get(c, (e, 1))

    def tri_start(t, c, upto):
        """Coset at the start corner of slot `upto`, walking sides 0..upto-1."""
        cur = tab.rep(c)
        for k in range(upto):
            e, s = base.triangles[t][k]
            if e in tab.tree:
                continue
            cur = tab._get(cur, (e, s))
            if cur is None:
                return None
        return cur

    def ekept(e, c):
        return c is not None and edge_target(c, e) is not None

    def tkept(t, c):
        if c is None:
            return None
        cur = tab.rep(c)
        for e, s in base.triangles[t]:
            if e in tab.tree:
                continue
            cur = tab._get(cur, (e, s))
            if cur is None:
                return False
        return cur == tab.rep(c)

    vertices, edges, triangles = [], {}, {}
    cell_base, vertex_level = {}, {}
    for v in base.vertices:
        for c in cosets:
            vid = f"{v}@c{c}"
            vertices.append(vid)
            cell_base[vid] = v
            vertex_level[vid] = c
    for e in base.edge_ids:
        a, b = base.edges[e]
        for c in cosets:
            d = edge_target(c, e)
            if d is None:
                continue
            eid = f"{e}@c{c}"
            edges[eid] = (f"{a}@c{c}", f"{b}@c{d}")
            cell_base[eid] = e
    tri_cos = {}
    for t in base.triangle_ids:
        for c in cosets:
            if tkept(t, c) is not True:
                continue
            tid = f"{t}@c{c}"
            sides = []
            for k, (e, s) in enumerate(base.triangles[t]):
                start = tri_start(t, c, k)
                # edge copy index is the coset at the edge's v_from end
                if e in tab.tree or s > 0:
                    ec = start
                else:
                    ec = tab._get(start, (e, -1))
                sides.append((f"{e}@c{ec}", s))
            triangles[tid] = tuple(sides)
            cell_base[tid] = t
            tri_cos[tid] = c

    # base frontier marks lift; bounded enumeration adds its own
    fv = {vid for vid in vertices if cell_base[vid] in base.frontier_vertices}
    fe = {eid for eid in edges if cell_base[eid] in base.frontier_edges}
    in_edges = {v: [] for v in base.vertices}   # (edge, how to reach edge coset from vertex coset)
    for e in base.edge_ids:
        a, b = base.edges[e]
        in_edges[a].append((e, 1))
        in_edges[b].append((e, -1))
    corner_tris = {v: [] for v in base.vertices}
    for t in base.triangle_ids:
        for k in range(3):
            corner_tris[base.corners[t][k]].append((t, k))

    def tri_coset_through(t, k, c):
        """Coset of the triangle lift whose corner k sits at coset c; None if
        the walk leaves the table."""
        cur = tab.rep(c)
        for kk in range(k - 1, -1, -1):
            e, s = base.triangles[t][kk]
            if e in tab.tree:
                continue
            cur = tab._get(cur, (e, -s))
            if cur is None:
                return None
        return cur

    for v in base.vertices:
        for c in cosets:
            bad = False
            for e, direction in in_edges[v]:
                if direction == 1:
                    if not ekept(e, c):
                        bad = True
                        break
                else:
                    if e in tab.tree:
                        continue
                    back = tab._get(c, (e, -1))
                    if back is None or not ekept(e, back):
                        bad = True
                        break
            if not bad:
                for t, k in corner_tris[v]:
                    c0 = tri_coset_through(t, k, c)
                    if c0 is None or tkept(t, c0) is not True:
                        bad = True
                        break
            if bad:
                fv.add(f"{v}@c{c}")
    for eid in edges:
        e = cell_base[eid]
        c = int(eid.rsplit("@c", 1)[1])
        bad = False
        for t in base.triangle_ids:
            for k, (ee, s) in enumerate(base.triangles[t]):
                if ee != e:
                    continue
                # start corner coset of slot k when the e-copy is at c
                if s > 0 or e in tab.tree:
                    corner_c = c
                else:
                    corner_c = tab._get(c, (e, 1))
                if corner_c is None:
                    bad = True
                    break
                c0 = tri_coset_through(t, k, corner_c)
                if c0 is None or tkept(t, c0) is not True:
                    bad = True
                    break
            if bad:
                break
        if bad:
            fe.add(eid)
            a, b = edges[eid]
            fv.add(a)
            fv.add(b)

    warnings = []
    if all(f"{v}@c{c}" in fv for v in base.vertices for c in cosets):
        warnings.append("coset budget exhausted before any complete interior cell; cover is all frontier")

    shears = {eid: base.shears[cell_base[eid]] for eid in edges if cell_base[eid] in base.shears}
    cover = Complex2(
        vertices=vertices,
        edges=edges,
        triangles=triangles,
        frontier_vertices=fv,
        frontier_edges=fe,
        base_vertex=f"{base.base_vertex}@c1",
        shears=shears,
    )
    return CoverResult(
        complex=cover,
        base=base,
        kind="subgroup",
        cell_base=cell_base,
        vertex_level=vertex_level,
        coset_table=tab,
        warnings=warnings,
    )
