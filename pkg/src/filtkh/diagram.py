"""Oriented link diagrams from PD codes and braid words, with the planar
embedding combinatorics (faces, circle nesting, rotation sense) that the
canonical-generator labeling needs.

Conventions, fixed once for the whole package:

* A crossing is a 4-tuple of edge labels listed counterclockwise starting
  from the incoming under-strand, so slots 0..3 sit at compass points
  S, E, N, W when the under-strand enters from the south.
* The under-strand runs slot 0 -> slot 2.  The over-strand runs
  slot 3 -> slot 1 at a positive crossing and slot 1 -> slot 3 at a
  negative one (right-hand rule; braid generator sigma_i is positive).
* The 0-smoothing joins slots (0,1) and (2,3); the 1-smoothing joins
  (0,3) and (1,2).  For a positive crossing the 0-smoothing is the
  oriented (Seifert) smoothing, for a negative crossing the 1-smoothing is.
* Faces are classes of crossing corners; the corner between slots s and
  s+1 of crossing c has id 4*c + s, and a face is named "f<m>" by the
  least corner it contains (so any corner id names the face containing it).
  Crossingless split components are carried as explicit loop records placed
  beside a named corner (outer region by default), drawn counterclockwise.
* Split 4-valent parts are embedded side by side, all facing the region
  anchored at each part's lowest edge; that shared region is the default
  outer face.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class DiagramError(ValueError):
    pass


class ParseError(DiagramError):
    pass


class _UF:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, x, y):
        self.add(x)
        self.add(y)
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return out


@dataclass(frozen=True)
class Crossing:
    edges: tuple  # (a, b, c, d) counterclockwise from the incoming under-strand
    sign: int     # +1 or -1 (0 only inside the orientation probe)


class LinkDiagram:
    """Validated oriented link diagram.

    Attributes:
        crossings: tuple of Crossing
        loops: tuple of loop placements; each is a corner id or None (outer)
        orientations: {edge: (tail dart, head dart)}, darts encoded 4*ci + slot
        components: tuple of components; ('edges', frozenset) or ('loop', k)
        outer_face_hint: optional face id string ("f<corner>" or "fo")
    """

    def __init__(self, crossings, loops=(), outer_face_hint=None, flips=()):
        self.crossings = tuple(crossings)
        self.loops = tuple(loops)
        self.outer_face_hint = outer_face_hint
        self._res_cache = {}
        self._edge_darts = self._collect_darts()
        self.orientations = self._orient(flips)
        self.components = self._components()
        self._comp_of = {}
        for idx, comp in enumerate(self.components):
            if comp[0] == "edges":
                for e in comp[1]:
                    self._comp_of[e] = idx
            else:
                self._comp_of[("loop", comp[1])] = idx
        signs = [c.sign for c in self.crossings]
        self.n_plus = signs.count(1)
        self.n_minus = signs.count(-1)
        self._parts = self._split_parts()
        self._anchors = self._anchor_corners()
        self._validate_embedding()

    # -- construction ------------------------------------------------------

    def _collect_darts(self):
        darts = {}
        for ci, cr in enumerate(self.crossings):
            if len(cr.edges) != 4:
                raise ParseError("crossing %d is not a 4-tuple" % ci)
            for s, e in enumerate(cr.edges):
                darts.setdefault(e, []).append(4 * ci + s)
        for e, ds in darts.items():
            if len(ds) != 2:
                raise ParseError(
                    "edge %s appears %d times, expected exactly 2" % (e, len(ds))
                )
            ds.sort()
        return darts

    def _orient(self, flips):
        """Assign each edge a (tail, head) dart pair.

        Slot-0 darts are heads and slot-2 darts are tails (under-strand);
        at each crossing exactly one of the slot-1/slot-3 darts is a head.
        Components never passing under keep one free bit, seeded so their
        lowest edge points into its first-listed crossing; flip[e] reverses
        such a component.
        """
        head = {}

        def assign(e, dart, is_head, why):
            want = dart if is_head else self._other_dart(e, dart)
            if e in head:
                if head[e] != want:
                    raise ParseError(
                        "inconsistent orientation at edge %s (%s)" % (e, why)
                    )
                return False
            head[e] = want
            return True

        def propagate(queue):
            while queue:
                e = queue.pop()
                for dart in self._edge_darts[e]:
                    ci, s = divmod(dart, 4)
                    if s not in (1, 3):
                        continue
                    mate_slot = 4 - s  # 1 <-> 3
                    f = self.crossings[ci].edges[mate_slot]
                    if f == e:
                        continue  # over-strand is one edge; any direction fits
                    e_head_here = head[e] == dart
                    if assign(f, 4 * ci + mate_slot, not e_head_here,
                              "over-strand at crossing %d" % ci):
                        queue.append(f)

        queue = []
        for ci, cr in enumerate(self.crossings):
            a, _, c, _ = cr.edges
            if assign(a, 4 * ci + 0, True, "under-strand into crossing %d" % ci):
                queue.append(a)
            if assign(c, 4 * ci + 2, False, "under-strand out of crossing %d" % ci):
                queue.append(c)
        propagate(queue)

        comp_uf = self._component_uf()
        comp_edges = {}
        for e in self._edge_darts:
            comp_edges.setdefault(comp_uf.find(e), set()).add(e)
        free_roots = set()
        for root, es in sorted(comp_edges.items(), key=lambda kv: min(kv[1])):
            if any(e in head for e in es):
                continue
            free_roots.add(root)
            seed = min(es)
            head[seed] = self._edge_darts[seed][0]
            propagate([seed])
        missing = [e for e in self._edge_darts if e not in head]
        if missing:
            raise ParseError("could not orient edges %s" % missing)

        for e in flips:
            if e not in self._edge_darts:
                raise ParseError("flip names unknown edge %s" % e)
            root = comp_uf.find(e)
            if root not in free_roots:
                raise ParseError(
                    "flip[%s]: that component's orientation is forced by the crossings" % e
                )
            for f in comp_edges[root]:
                head[f] = self._other_dart(f, head[f])

        return {e: (self._other_dart(e, h), h) for e, h in head.items()}

    def _other_dart(self, e, dart):
        d0, d1 = self._edge_darts[e]
        return d1 if dart == d0 else d0

    def _component_uf(self):
        uf = _UF()
        for e in self._edge_darts:
            uf.add(e)
        for cr in self.crossings:
            a, b, c, d = cr.edges
            uf.union(a, c)
            uf.union(b, d)
        return uf

    def _components(self):
        uf = self._component_uf()
        comps = [("edges", frozenset(v)) for v in uf.classes().values()]
        comps.sort(key=lambda c: min(c[1]))
        comps += [("loop", k) for k in range(len(self.loops))]
        return tuple(comps)

    def _split_parts(self):
        """Connected 4-valent parts, as a union-find over crossing indices."""
        uf = _UF()
        for ci in range(len(self.crossings)):
            uf.add(ci)
        owner = {}
        for ci, cr in enumerate(self.crossings):
            for e in cr.edges:
                if e in owner:
                    uf.union(owner[e], ci)
                else:
                    owner[e] = ci
        return uf

    def _anchor_corners(self):
        """One corner per 4-valent part: the left corner at the head of the
        part's lowest edge.  All parts' anchor regions are identified."""
        if not self.crossings:
            return []
        part_min_edge = {}
        for e in self._edge_darts:
            part = self._parts.find(self._edge_darts[e][0] // 4)
            if part not in part_min_edge or e < part_min_edge[part]:
                part_min_edge[part] = e
        anchors = []
        for part in sorted(part_min_edge):
            e = part_min_edge[part]
            _, h = self.orientations[e]
            ci, t = divmod(h, 4)
            anchors.append(4 * ci + (t - 1) % 4)
        return anchors

    def _validate_embedding(self):
        for k, corner in enumerate(self.loops):
            if corner is not None:
                ci = corner // 4
                if not (0 <= ci < len(self.crossings)):
                    raise DiagramError("loop %d placed at unknown corner %s" % (k, corner))
        if not self.crossings:
            return
        classes = _corner_classes(self, smoothing=None)
        per_part = {}
        for corner, root in classes.items():
            part = self._parts.find(corner // 4)
            per_part.setdefault(part, set()).add(root)
        for part, roots in per_part.items():
            ncross = sum(
                1 for ci in range(len(self.crossings)) if self._parts.find(ci) == part
            )
            if len(roots) != ncross + 2:
                raise DiagramError(
                    "PD code does not describe a sphere embedding "
                    "(a part with %d crossings has %d faces, expected %d)"
                    % (ncross, len(roots), ncross + 2)
                )

    # -- queries -------------------------------------------------------------

    @property
    def n_crossings(self):
        return len(self.crossings)

    def edges(self):
        return sorted(self._edge_darts)

    def edge_darts(self, e):
        return tuple(self._edge_darts[e])

    def edge_at(self, dart):
        ci, s = divmod(dart, 4)
        return self.crossings[ci].edges[s]

    def component_of_edge(self, e):
        return self._comp_of[e]

    def component_of_loop(self, k):
        return self._comp_of[("loop", k)]

    def n_components(self):
        return len(self.components)

    def writhe(self):
        return self.n_plus - self.n_minus

    def max_edge(self):
        return max(self._edge_darts) if self._edge_darts else 0

    def pd_text(self):
        toks = ["X[%s,%s,%s,%s]" % cr.edges for cr in self.crossings]
        toks += ["U"] * len(self.loops)
        return " ".join(toks)

    def summary(self):
        return "%d crossings (n+=%d, n-=%d), %d components" % (
            self.n_crossings, self.n_plus, self.n_minus, self.n_components(),
        )


def _corner_classes(d: LinkDiagram, smoothing):
    """Union-find classes of corners.

    smoothing None gives the faces of the 4-valent diagram; an int bitmask
    selects the 0/1-smoothing per crossing, whose chords merge the two
    corners they leave connected (slots (1,2)+(3,0) for the 0-smoothing,
    (0,1)+(2,3) for the 1-smoothing).
    """
    uf = _UF()
    for ci in range(len(d.crossings)):
        for s in range(4):
            uf.add(4 * ci + s)
    for e in d.edges():
        d0, d1 = d.edge_darts(e)
        x, s = divmod(d0, 4)
        y, t = divmod(d1, 4)
        uf.union(4 * x + s, 4 * y + (t - 1) % 4)
        uf.union(4 * x + (s - 1) % 4, 4 * y + t)
    if smoothing is not None:
        for ci in range(len(d.crossings)):
            if (smoothing >> ci) & 1:
                uf.union(4 * ci + 0, 4 * ci + 2)
            else:
                uf.union(4 * ci + 1, 4 * ci + 3)
    anchors = d._anchors
    for corner in anchors[1:]:
        uf.union(anchors[0], corner)
    return {c: uf.find(c) for c in uf.parent}


def _chord_partner(bit, s):
    if bit == 0:
        return s ^ 1  # (0,1), (2,3)
    return 3 - s      # (0,3), (1,2)


@dataclass(frozen=True)
class Circle:
    key: tuple            # ('e', min edge) or ('l', loop index)
    edges: frozenset
    darts: tuple          # arrival darts of the canonical traversal; () for loops
    left: str             # face id on the left of the canonical traversal
    right: str


class Resolution:
    """A full smoothing of the diagram: circles, faces and their incidences."""

    def __init__(self, diagram: LinkDiagram, vertex: int):
        self.diagram = diagram
        self.vertex = vertex
        self._build()

    def _build(self):
        d = self.diagram
        corner_root = _corner_classes(d, self.vertex) if d.crossings else {}
        members = {}
        for c, r in corner_root.items():
            members.setdefault(r, []).append(c)
        face_name = {r: "f%d" % min(cs) for r, cs in members.items()}
        self._face_of_corner = {c: face_name[r] for c, r in corner_root.items()}

        self._outer_default = (
            self._face_of_corner[d._anchors[0]] if d.crossings else "fo"
        )
        face_ids = sorted(set(self._face_of_corner.values()))
        if not d.crossings:
            face_ids.append("fo")

        circles = []
        seen = set()
        for e in d.edges():
            if e in seen:
                continue
            circle_edges, darts = self._trace(e)
            seen |= circle_edges
            ci, t = divmod(darts[0], 4)
            left = self._face_of_corner[4 * ci + (t - 1) % 4]
            right = self._face_of_corner[4 * ci + t]
            circles.append(
                Circle(("e", min(circle_edges)), frozenset(circle_edges),
                       tuple(darts), left, right)
            )
        for k, corner in enumerate(d.loops):
            containing = (
                self._face_of_corner[corner] if corner is not None else self._outer_default
            )
            interior = "l%di" % k
            face_ids.append(interior)
            # counterclockwise: interior on the left of the traversal
            circles.append(Circle(("l", k), frozenset(), (), interior, containing))
        circles.sort(key=lambda c: c.key)
        self.circles = tuple(circles)
        self.faces = tuple(sorted(face_ids))
        self._circle_index = {c.key: i for i, c in enumerate(self.circles)}
        self.adjacency = {c.key: (c.left, c.right) for c in self.circles}
        self._edge_circle = {}
        for c in self.circles:
            for e in c.edges:
                self._edge_circle[e] = c.key
        if len(self.faces) != len(self.circles) + 1:
            raise DiagramError(
                "resolution face count %d != circles + 1 = %d"
                % (len(self.faces), len(self.circles) + 1)
            )

    def _trace(self, start_edge):
        d = self.diagram
        _, head = d.orientations[start_edge]
        edges = set()
        darts = []
        e, arriving = start_edge, head
        while True:
            edges.add(e)
            darts.append(arriving)
            ci, s = divmod(arriving, 4)
            u = _chord_partner((self.vertex >> ci) & 1, s)
            e = d.crossings[ci].edges[u]
            arriving = d._other_dart(e, 4 * ci + u)
            if e == start_edge and arriving == head:
                break
        return edges, darts

    # -- queries ---------------------------------------------------------

    def n_circles(self):
        return len(self.circles)

    def circle_keys(self):
        return [c.key for c in self.circles]

    def circle_of_edge(self, e):
        return self._edge_circle[e]

    def circle(self, key):
        return self.circles[self._circle_index[key]]

    def face_of_corner(self, corner):
        return self._face_of_corner[corner]

    def outer_face(self, outer=None):
        hint = outer if outer is not None else self.diagram.outer_face_hint
        if hint is None:
            return self._outer_default
        if hint == "fo":
            return "fo" if "fo" in self.faces else self._outer_default
        if isinstance(hint, int):
            hint = "f%d" % hint
        if isinstance(hint, str) and re.fullmatch(r"f\d+", hint):
            corner = int(hint[1:])
            if corner not in self._face_of_corner:
                raise DiagramError("unknown face id %r" % hint)
            return self._face_of_corner[corner]
        if hint in self.faces:
            return hint
        raise DiagramError("unknown face id %r" % hint)

    def face_depths(self, outer=None):
        start = self.outer_face(outer)
        nbrs = {f: [] for f in self.faces}
        for c in self.circles:
            l, r = self.adjacency[c.key]
            nbrs[l].append(r)
            nbrs[r].append(l)
        depth = {start: 0}
        frontier = [start]
        while frontier:
            nxt = []
            for f in frontier:
                for g in nbrs[f]:
                    if g not in depth:
                        depth[g] = depth[f] + 1
                        nxt.append(g)
            frontier = nxt
        if len(depth) != len(self.faces):
            raise DiagramError("face incidence graph is not connected")
        return depth


def resolve(d: LinkDiagram, vertex) -> Resolution:
    """Resolution at a cube vertex (int bitmask, or a bit sequence ordered by
    crossing index)."""
    if not isinstance(vertex, int):
        bits = list(vertex)
        if len(bits) != d.n_crossings:
            raise DiagramError(
                "vertex length %d != %d crossings" % (len(bits), d.n_crossings)
            )
        vertex = sum((1 << i) for i, b in enumerate(bits) if b)
    if vertex < 0 or vertex >> d.n_crossings:
        raise DiagramError("vertex %d out of range" % vertex)
    cached = d._res_cache.get(vertex)
    if cached is None:
        cached = Resolution(d, vertex)
        d._res_cache[vertex] = cached
    return cached


def circle_depth(res: Resolution, outer=None):
    """depth(C) = number of circles separating C from the outer face."""
    fd = res.face_depths(outer)
    return {c.key: min(fd[c.left], fd[c.right]) for c in res.circles}


def is_clockwise(res: Resolution, circle_key, direction=1, outer=None):
    """True iff the circle's interior lies to the right of the travel direction.

    direction +1 is the canonical traversal: along the orientation of the
    circle's lowest edge (counterclockwise for crossingless loops).
    """
    fd = res.face_depths(outer)
    c = res.circle(circle_key)
    dl, dr = fd[c.left], fd[c.right]
    if abs(dl - dr) != 1:
        raise DiagramError("sides of a circle must differ by one in depth")
    cw = dr > dl
    return cw if direction == 1 else not cw


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"[Xx]\[([^\]]*)\]|flip\[([^\]]*)\]|U\b")


def parse_pd(text: str) -> LinkDiagram:
    """Parse whitespace-separated PD tokens.

    Grammar: `X[a,b,c,d]` per crossing (counterclockwise from the incoming
    under-strand), `U` for a crossingless unknot component, `flip[e]` to
    reverse a component whose orientation the crossings leave free.
    """
    crossings = []
    loops = 0
    flips = []
    pos = 0
    for m in _TOKEN.finditer(text):
        gap = text[pos:m.start()]
        if gap.strip(" \t\r\n,"):
            raise ParseError("unrecognized input near %r" % gap.strip())
        pos = m.end()
        if m.group(0) == "U":
            loops += 1
            continue
        if m.group(2) is not None:
            body = m.group(2).strip()
            if not re.fullmatch(r"-?\d+", body):
                raise ParseError("malformed token %r" % m.group(0))
            flips.append(int(body))
            continue
        parts = [p.strip() for p in m.group(1).split(",") if p.strip()]
        if len(parts) != 4:
            raise ParseError(
                "malformed token %r: a crossing needs exactly 4 edges" % m.group(0)
            )
        try:
            edges = tuple(int(p) for p in parts)
        except ValueError:
            raise ParseError("malformed token %r: edges must be integers" % m.group(0))
        crossings.append(edges)
    tail = text[pos:]
    if tail.strip(" \t\r\n,"):
        raise ParseError("unrecognized input near %r" % tail.strip())
    return diagram_from_tuples(crossings, loop_corners=(None,) * loops, flips=flips)


def diagram_from_tuples(tuples, loop_corners=(), outer_face_hint=None, flips=()):
    """Build a diagram from raw PD tuples, deriving crossing signs."""
    probe = LinkDiagram(
        [Crossing(tuple(t), 0) for t in tuples],
        loops=tuple(loop_corners),
        outer_face_hint=outer_face_hint,
        flips=flips,
    )
    signed = []
    for ci, t in enumerate(tuples):
        b_edge = t[1]
        sign = -1 if probe.orientations[b_edge][1] == 4 * ci + 1 else 1
        signed.append(Crossing(tuple(t), sign))
    return LinkDiagram(
        signed,
        loops=tuple(loop_corners),
        outer_face_hint=outer_face_hint,
        flips=flips,
    )


def parse_braid(word, strands) -> LinkDiagram:
    """Closure of a braid word; positive letters give positive crossings.

    Unused strand positions close into crossingless loops.
    """
    if strands < 1:
        raise ParseError("strands must be >= 1")
    word = list(word)
    for k in word:
        if k == 0 or abs(k) >= strands:
            raise ParseError(
                "braid letter %d out of range for %d strands" % (k, strands)
            )
    cur = {i: i for i in range(1, strands + 1)}
    nxt = strands + 1
    tuples = []
    for k in word:
        p = abs(k)
        tl, tr = nxt, nxt + 1
        nxt += 2
        if k > 0:
            tuples.append((cur[p + 1], tr, tl, cur[p]))
        else:
            tuples.append((cur[p], cur[p + 1], tr, tl))
        cur[p], cur[p + 1] = tl, tr
    relabel = {}
    loops = 0
    for i in range(1, strands + 1):
        if cur[i] == i:
            loops += 1
        else:
            relabel[cur[i]] = i
    out_tuples = [tuple(relabel.get(e, e) for e in t) for t in tuples]
    return diagram_from_tuples(out_tuples, loop_corners=(None,) * loops)


def _remap_corner(d: LinkDiagram, corner):
    ci, s = divmod(corner, 4)
    shift = 1 if d.crossings[ci].sign > 0 else -1
    return 4 * ci + (s + shift) % 4


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Switch every crossing; n+ and n- exchange and the smoothings swap roles."""
    tuples = []
    for cr in d.crossings:
        a, b, c, dd = cr.edges
        if cr.sign > 0:
            tuples.append((dd, a, b, c))
        else:
            tuples.append((b, c, dd, a))
    hint = d.outer_face_hint
    if isinstance(hint, str) and re.fullmatch(r"f\d+", hint):
        hint = "f%d" % _remap_corner(d, int(hint[1:]))
    loop_corners = tuple(
        None if c is None else _remap_corner(d, c) for c in d.loops
    )
    return diagram_from_tuples(tuples, loop_corners=loop_corners, outer_face_hint=hint)


def read_diagram_text(text: str) -> LinkDiagram:
    """Read the input file format: `pd:`, `braid:` and `outer:` lines.

        pd: X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]
        braid: s 2 ; w 1 1 1
        outer: f3
    """
    pd_line = None
    braid_line = None
    outer = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if sep and key == "pd":
            pd_line = rest.strip()
        elif sep and key == "braid":
            braid_line = rest.strip()
        elif sep and key == "outer":
            outer = rest.strip()
        else:
            raise ParseError("unrecognized line %r" % line)
    if (pd_line is None) == (braid_line is None):
        raise ParseError("input needs exactly one of a `pd:` or `braid:` line")
    if pd_line is not None:
        d = parse_pd(pd_line)
    else:
        m = re.fullmatch(r"s\s+(\d+)\s*;\s*w((?:\s+-?\d+)*)\s*", braid_line)
        if not m:
            raise ParseError("malformed braid line %r" % braid_line)
        d = parse_braid([int(x) for x in m.group(2).split()], int(m.group(1)))
    if outer is not None:
        d = LinkDiagram(d.crossings, loops=d.loops, outer_face_hint=outer)
    return d
