"""Induced maps of elementary link cobordisms on the filtered complex.

Morse events (birth, death, saddle) leave the crossing set alone, so their
chain maps act one cube vertex at a time through the algebra structure
maps: a birth inserts a tensor factor as the unit, a death applies the
counit, a saddle applies the merge or the split depending on whether its
two feet lie on one circle or two at that vertex.

Reidemeister I and II events change the cube.  Their chain maps are built
by Gaussian elimination with homotopy-equivalence tracking: the kink (or
tongue) slices of the larger cube cancel along unit entries of the
differential, the surviving slice is identified with the smaller complex
by matching circles through the surgery's edge relabeling, and the
composite inclusion/projection pair is an exact strong deformation
retraction.  Both maps respect the filtration (degree 0); Morse maps are
filtered of degree -1 (birth, death) or +1 (saddle), i.e. minus the Euler
characteristic of the piece in every case.

A movie is an ordered list of such events applied to a start diagram; its
induced map is the composition, filtered of degree minus the movie's Euler
characteristic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import algebra
from .canonical import canonical_generator, canonical_generators, canonical_states
from .complexes import FilteredComplex
from .diagram import (
    Crossing,
    DiagramError,
    LinkDiagram,
    _corner_classes,
    diagram_from_tuples,
    resolve,
)
from .linalg import SparseMatrix, Subspace, vec_addmul, vec_copy, vec_scale


class MovieError(ValueError):
    pass


# -- diagram-level face helpers ----------------------------------------------

def _diagram_faces(d):
    """face id per corner for the unsmoothed 4-valent diagram."""
    classes = _corner_classes(d, smoothing=None)
    members = {}
    for c, r in classes.items():
        members.setdefault(r, []).append(c)
    name = {r: "f%d" % min(cs) for r, cs in members.items()}
    return {c: name[classes[c]] for c in classes}


def _edge_side_faces(d, faces, e):
    """(left, right) face ids of the directed edge e."""
    _, h = d.orientations[e]
    ci, t = divmod(h, 4)
    return faces[4 * ci + (t - 1) % 4], faces[4 * ci + t]


# -- events -------------------------------------------------------------------

@dataclass
class MoveData:
    kind: str
    chi: int
    edge_map: dict           # old edge -> new edge (or None if it vanishes)
    loop_map: dict           # old loop index -> new loop index (or None)
    links: list              # extra (old site, new site) component carriers
    payload: dict = field(default_factory=dict)


def _identity_edge_map(d):
    return {e: e for e in d.edges()}


def _site(text):
    m = re.fullmatch(r"e(\d+)", text)
    if m:
        return ("e", int(m.group(1)))
    m = re.fullmatch(r"l(\d+)", text)
    if m:
        return ("l", int(m.group(1)))
    raise MovieError("bad site %r (want e<edge> or l<loop>)" % text)


def parse_movie_text(text):
    """Line-oriented movie grammar:

        birth [in f<corner>]
        death l<k>
        saddle <site> <site>        site: e<edge> | l<k>
        r1+ <site> [left|right]     r1- <site> [left|right]
        r1inv x<crossing>
        r2a e<u> e<w>               (poke the first edge over the second)
        r2b e<u> e<w>               (poke under)
        r2inv x<A> x<B>
    """
    events = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        op = toks[0]
        try:
            if op == "birth":
                if len(toks) == 1:
                    events.append(("birth", None))
                elif len(toks) == 3 and toks[1] == "in" and re.fullmatch(r"f\d+", toks[2]):
                    events.append(("birth", int(toks[2][1:])))
                else:
                    raise MovieError("bad birth event %r" % line)
            elif op == "death":
                site = _site(toks[1])
                if site[0] != "l":
                    raise MovieError("death needs a loop site")
                events.append(("death", site[1]))
            elif op == "saddle":
                events.append(("saddle", _site(toks[1]), _site(toks[2])))
            elif op in ("r1+", "r1-"):
                side = toks[2] if len(toks) > 2 else "left"
                if side not in ("left", "right"):
                    raise MovieError("bad r1 side %r" % side)
                events.append(("r1", 1 if op == "r1+" else -1, _site(toks[1]), side))
            elif op == "r1inv":
                events.append(("r1inv", int(toks[1].lstrip("x"))))
            elif op in ("r2a", "r2b"):
                s1, s2 = _site(toks[1]), _site(toks[2])
                if s1[0] != "e" or s2[0] != "e":
                    raise MovieError("r2 sites must be edges")
                events.append(("r2", op == "r2a", s1[1], s2[1]))
            elif op == "r2inv":
                events.append(("r2inv", int(toks[1].lstrip("x")), int(toks[2].lstrip("x"))))
            else:
                raise MovieError("unknown event %r" % op)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, MovieError):
                raise
            raise MovieError("malformed event %r" % line)
    return events


@dataclass
class Movie:
    start: LinkDiagram
    events: list


# -- applying events to diagrams ----------------------------------------------

def apply_event(d, event):
    """Returns (new diagram, MoveData)."""
    kind = event[0]
    if kind == "birth":
        return _apply_birth(d, event[1])
    if kind == "death":
        return _apply_death(d, event[1])
    if kind == "saddle":
        return _apply_saddle(d, event[1], event[2])
    if kind == "r1":
        return _apply_r1(d, event[1], event[2], event[3])
    if kind == "r1inv":
        return _apply_r1inv(d, event[1])
    if kind == "r2":
        return _apply_r2(d, event[1], event[2], event[3])
    if kind == "r2inv":
        return _apply_r2inv(d, event[1], event[2])
    raise MovieError("unknown event kind %r" % kind)


def _outer_corner(d):
    """The current outer face as a corner id (None for loop-only diagrams)."""
    if not d.crossings:
        return None
    hint = d.outer_face_hint
    if isinstance(hint, str) and re.fullmatch(r"f\d+", hint):
        return int(hint[1:])
    return d._anchors[0]


def _rebuild(d, tuples, loops, outer_corner):
    """Rebuild with the outer face pinned to a surviving corner; events keep
    the point at infinity in the region that corner marks."""
    hint = None if outer_corner is None else "f%d" % outer_corner
    return diagram_from_tuples(
        tuples, loop_corners=tuple(loops), outer_face_hint=hint
    )


def _apply_birth(d, corner):
    if corner is not None and corner // 4 >= d.n_crossings:
        raise MovieError("birth corner %d out of range" % corner)
    oc = _outer_corner(d)
    loops = list(d.loops) + [corner if corner is not None else oc]
    d2 = _rebuild(d, [c.edges for c in d.crossings], loops, oc)
    k = len(loops) - 1
    data = MoveData(
        kind="birth", chi=1,
        edge_map=_identity_edge_map(d),
        loop_map={j: j for j in range(len(d.loops))},
        links=[],
        payload={"new_loop": k},
    )
    return d2, data


def _apply_death(d, k):
    if not (0 <= k < len(d.loops)):
        raise MovieError("death of unknown loop l%d" % k)
    loops = [c for j, c in enumerate(d.loops) if j != k]
    d2 = _rebuild(d, [c.edges for c in d.crossings], loops, _outer_corner(d))
    loop_map = {}
    for j in range(len(d.loops)):
        loop_map[j] = None if j == k else (j if j < k else j - 1)
    data = MoveData(
        kind="death", chi=1,
        edge_map=_identity_edge_map(d),
        loop_map=loop_map,
        links=[],
        payload={"dead_loop": k},
    )
    return d2, data


def _loop_side_corner(d, e, face):
    """A corner id lying in `face` next to edge e (for placing split-off loops)."""
    faces = _diagram_faces(d)
    _, h = d.orientations[e]
    ci, t = divmod(h, 4)
    for corner in (4 * ci + (t - 1) % 4, 4 * ci + t):
        if faces[corner] == face:
            return corner
    raise MovieError("edge %s does not bound face %s" % (e, face))


def _saddle_face_and_senses(d, s1, s2):
    """Common face of the two sites and the anti-parallelism check.

    sense(site) is True when the site's orientation keeps the face on its
    left; an oriented saddle needs equal senses.
    """
    faces = _diagram_faces(d) if d.crossings else {}

    def adjacency(site):
        if site[0] == "e":
            l, r = _edge_side_faces(d, faces, site[1])
            return {l: True, r: False}
        k = site[1]
        corner = d.loops[k]
        if corner is None:
            corner = d._anchors[0] if d.crossings else None
        face = faces[corner] if corner is not None else "outer"
        # a loop is counterclockwise: its containing face sits on its right
        return {face: False}

    a1, a2 = adjacency(s1), adjacency(s2)
    common = sorted(set(a1) & set(a2))
    if s1 == s2:
        return (next(iter(a1)), True)
    if not common:
        raise MovieError("saddle sites %s, %s do not bound a common face" % (s1, s2))
    for f in common:
        if a1[f] == a2[f]:
            return (f, True)
    if s1[0] == "l" or s2[0] == "l":
        # a crossingless circle's sense is conventional; the band chooses it
        return (common[0], True)
    raise MovieError(
        "saddle sites %s, %s are parallel along their common face; "
        "an oriented saddle needs anti-parallel strands" % (s1, s2)
    )


def _apply_saddle(d, s1, s2):
    for s in (s1, s2):
        if s[0] == "e" and s[1] not in d.orientations:
            raise MovieError("unknown edge %s" % s[1])
        if s[0] == "l" and not (0 <= s[1] < len(d.loops)):
            raise MovieError("unknown loop l%d" % s[1])
    face, _ = _saddle_face_and_senses(d, s1, s2)
    tuples = [c.edges for c in d.crossings]
    loops = list(d.loops)
    edge_map = _identity_edge_map(d)
    loop_map = {j: j for j in range(len(loops))}
    links = []
    payload = {"sites": (s1, s2)}

    if s1[0] == "l" and s2[0] == "l":
        i, j = s1[1], s2[1]
        if i == j:
            # split one loop into two side-by-side loops
            loops.append(d.loops[i])
            payload["op"] = ("split", ("l", i), ("l", i, len(loops) - 1))
            links.append((("l", i), ("l", len(loops) - 1)))
        else:
            lo, hi = sorted((i, j))
            corner = d.loops[lo]
            loops = [c for m, c in enumerate(loops) if m not in (lo, hi)] + [corner]
            for m in range(len(d.loops)):
                if m in (lo, hi):
                    loop_map[m] = len(loops) - 1
                else:
                    loop_map[m] = m - (m > lo) - (m > hi)
            payload["op"] = ("merge", ("l", i), ("l", j))
    elif s1[0] == "l" or s2[0] == "l":
        lsite, esite = (s1, s2) if s1[0] == "l" else (s2, s1)
        k = lsite[1]
        loops = [c for m, c in enumerate(loops) if m != k]
        for m in range(len(d.loops)):
            loop_map[m] = None if m == k else (m if m < k else m - 1)
        links.append((("l", k), ("e", esite[1])))
        payload["op"] = ("merge", lsite, esite)
    elif s1 == s2:
        e = s1[1]
        corner = _loop_side_corner(d, e, face) if d.crossings else None
        loops.append(corner)
        payload["op"] = ("split", s1, ("e+l", e, len(loops) - 1))
        links.append((("e", e), ("l", len(loops) - 1)))
    else:
        e1, e2 = s1[1], s2[1]
        # reconnect: swap the labels at the two head darts
        h1 = d.orientations[e1][1]
        h2 = d.orientations[e2][1]
        new_tuples = []
        for ci, t in enumerate(tuples):
            t = list(t)
            for s in range(4):
                dart = 4 * ci + s
                if dart == h1:
                    t[s] = e2
                elif dart == h2:
                    t[s] = e1
            new_tuples.append(tuple(t))
        tuples = new_tuples
        payload["op"] = ("reconnect", e1, e2)

    d2 = _rebuild(d, tuples, loops, _outer_corner(d))
    data = MoveData(kind="saddle", chi=-1, edge_map=edge_map,
                    loop_map=loop_map, links=links, payload=payload)
    return d2, data


_KINK_PATTERNS = {
    # (sign, side) -> slot pattern over (e_in, e_out, loop)
    (1, "left"): ("in", "out", "loop", "loop"),
    (1, "right"): ("loop", "loop", "out", "in"),
    (-1, "right"): ("in", "loop", "loop", "out"),
    (-1, "left"): ("loop", "in", "out", "loop"),
}


def _apply_r1(d, sign, site, side):
    tuples = [list(c.edges) for c in d.crossings]
    loops = list(d.loops)
    nxt = d.max_edge() + 1
    edge_map = _identity_edge_map(d)
    loop_map = {j: j for j in range(len(loops))}
    links = []
    if site[0] == "e":
        e = site[1]
        if e not in d.orientations:
            raise MovieError("unknown edge %s" % e)
        loop_edge, e2 = nxt, nxt + 1
        h = d.orientations[e][1]
        ci, s = divmod(h, 4)
        tuples[ci][s] = e2
        names = {"in": e, "out": e2, "loop": loop_edge}
        edge_map[e] = e
    else:
        k = site[1]
        if not (0 <= k < len(loops)):
            raise MovieError("unknown loop l%d" % k)
        strand, loop_edge = nxt, nxt + 1
        names = {"in": strand, "out": strand, "loop": loop_edge}
        del loops[k]
        for m in range(len(d.loops)):
            loop_map[m] = None if m == k else (m if m < k else m - 1)
        links.append((("l", k), ("e", strand)))
    pattern = _KINK_PATTERNS[(sign, side)]
    tuples.append(tuple(names[p] for p in pattern))
    oc = _outer_corner(d)
    if oc is None:
        # kinking a loop in the outer region: infinity stays on the outside
        # of the circle, which is the right side of the strand at its head
        head_slot = {(1, "left"): 0, (1, "right"): 3,
                     (-1, "left"): 1, (-1, "right"): 0}[(sign, side)]
        oc = 4 * (len(tuples) - 1) + head_slot
    d2 = _rebuild(d, [tuple(t) for t in tuples], loops, oc)
    ci_new = d2.n_crossings - 1
    if d2.crossings[ci_new].sign != sign:
        raise AssertionError("kink construction produced the wrong sign")
    data = MoveData(
        kind="r1", chi=0, edge_map=edge_map, loop_map=loop_map, links=links,
        payload={"crossing": ci_new, "loop_edge": loop_edge,
                 "forward": True, "site": site},
    )
    return d2, data


def _translate_outer(d, removed):
    """Outer corner after deleting the crossings in `removed`: re-anchors to
    a surviving corner of the same region, shifting for dropped indices."""
    oc = _outer_corner(d)
    if oc is None:
        return None
    removed = sorted(removed)
    if oc // 4 in removed:
        faces = _diagram_faces(d)
        cls = faces[oc]
        mates = [c for c in faces if faces[c] == cls and c // 4 not in removed]
        if not mates:
            return None
        oc = min(mates)
    shift = sum(1 for rc in removed if rc < oc // 4)
    return oc - 4 * shift


def _kink_shape(d, ci):
    """(loop edge, strand edge, strand edge) of a kink crossing, or None.

    A kink's repeated edge occupies two cyclically adjacent slots; the other
    two slots hold the strand pieces (equal for a standalone kinked unknot).
    """
    t = d.crossings[ci].edges
    for le in set(t):
        slots = [s for s in range(4) if t[s] == le]
        if len(slots) == 2 and (slots[1] - slots[0]) % 4 in (1, 3):
            others = [t[s] for s in range(4) if s not in slots]
            return le, others[0], others[1]
    return None


def _apply_r1inv(d, ci):
    if not (0 <= ci < d.n_crossings):
        raise MovieError("unknown crossing x%d" % ci)
    shape = _kink_shape(d, ci)
    if shape is None:
        raise MovieError("crossing x%d is not a removable kink" % ci)
    loop_edge, e_in, e_out = shape
    tuples = [list(c.edges) for cj, c in enumerate(d.crossings) if cj != ci]
    loops = list(d.loops)
    loop_map = {j: j for j in range(len(loops))}
    edge_map = {e: e for e in d.edges() if e not in (loop_edge, e_in, e_out)}
    links = []
    if e_in == e_out:
        # a standalone kinked unknot collapses to a crossingless loop
        loops.append(None)
        edge_map[e_in] = None
        edge_map[loop_edge] = None
        links.append((("e", e_in), ("l", len(loops) - 1)))
        payload_keep = None
    else:
        keep = min(e_in, e_out)
        drop = max(e_in, e_out)
        for t in tuples:
            for s in range(4):
                if t[s] == drop:
                    t[s] = keep
        edge_map[e_in] = keep
        edge_map[e_out] = keep
        edge_map[loop_edge] = None
        payload_keep = keep
    # crossing indices above ci shift down; loop corners there must be remapped
    new_loops = []
    for corner in loops:
        if corner is not None and corner // 4 > ci:
            corner -= 4
        elif corner is not None and corner // 4 == ci:
            corner = None
        new_loops.append(corner)
    d2 = _rebuild(d, [tuple(t) for t in tuples], new_loops, _translate_outer(d, [ci]))
    data = MoveData(
        kind="r1", chi=0, edge_map=edge_map, loop_map=loop_map, links=links,
        payload={"crossing": ci, "loop_edge": loop_edge, "forward": False,
                 "keep": payload_keep, "strands": (e_in, e_out), "site": None},
    )
    return d2, data


_CCW_FROM = {
    "E": ("E", "N", "W", "S"),
    "N": ("N", "W", "S", "E"),
    "W": ("W", "S", "E", "N"),
    "S": ("S", "E", "N", "W"),
}


def _apply_r2(d, over, u, w):
    for e in (u, w):
        if e not in d.orientations:
            raise MovieError("unknown edge %s" % e)
    if u == w:
        raise MovieError("r2 needs two distinct edges")
    faces = _diagram_faces(d)
    lu, ru = _edge_side_faces(d, faces, u)
    lw, rw = _edge_side_faces(d, faces, w)
    common = sorted(({lu, ru}) & ({lw, rw}))
    if not common:
        raise MovieError("edges %s and %s do not bound a common face" % (u, w))
    face = common[0]
    u_along = face == lu   # link orientation of u keeps the face on its left
    w_along = face == lw

    nxt = d.max_edge() + 1
    um, wm, u2, w2 = nxt, nxt + 1, nxt + 2, nxt + 3
    tuples = [list(c.edges) for c in d.crossings]
    # the dart the tongue-side dart points at loses its old label
    hu = d.orientations[u][1] if u_along else d.orientations[u][0]
    hw = d.orientations[w][1] if w_along else d.orientations[w][0]
    for dart, newlab in ((hu, u2), (hw, w2)):
        ci, s = divmod(dart, 4)
        tuples[ci][s] = newlab

    # canonical picture in the common face: u along the bottom with the face
    # on its left, w along the top likewise (so they point opposite ways);
    # the tongue from u crosses w at A (up-stroke) then B (down-stroke).
    compass_a = {"E": wm, "N": um, "W": w2, "S": u}
    compass_b = {"E": w, "N": um, "W": wm, "S": u2}
    if over:
        # w is the under-strand at both crossings; root at its incoming slot
        ta = tuple(compass_a[p] for p in _CCW_FROM["E" if w_along else "W"])
        tb = tuple(compass_b[p] for p in _CCW_FROM["E" if w_along else "W"])
    else:
        ta = tuple(compass_a[p] for p in _CCW_FROM["S" if u_along else "N"])
        tb = tuple(compass_b[p] for p in _CCW_FROM["N" if u_along else "S"])
    tuples.append(ta)
    tuples.append(tb)
    d2 = _rebuild(d, [tuple(t) for t in tuples], list(d.loops), _outer_corner(d))
    ca, cb = d2.n_crossings - 2, d2.n_crossings - 1
    if {d2.crossings[ca].sign, d2.crossings[cb].sign} != {1, -1}:
        raise AssertionError("r2 construction must create one crossing of each sign")
    edge_map = _identity_edge_map(d)
    data = MoveData(
        kind="r2", chi=0, edge_map=edge_map,
        loop_map={j: j for j in range(len(d.loops))},
        links=[],
        payload={"crossings": (ca, cb), "mid": (um, wm),
                 "tips": {u2: u, w2: w},
                 "forward": True},
    )
    return d2, data


def _apply_r2inv(d, ca, cb):
    for ci in (ca, cb):
        if not (0 <= ci < d.n_crossings):
            raise MovieError("unknown crossing x%d" % ci)
    if ca == cb:
        raise MovieError("r2inv needs two distinct crossings")
    ta, tb = d.crossings[ca].edges, d.crossings[cb].edges
    shared = sorted(set(ta) & set(tb))
    if len(shared) != 2:
        raise MovieError("crossings x%d, x%d do not form a cancelling pair" % (ca, cb))
    if d.crossings[ca].sign == d.crossings[cb].sign:
        raise MovieError("a cancelling pair needs opposite signs")

    def slots_of(t, e):
        return [s for s in range(4) if t[s] == e]

    m_over = m_under = None
    for e in shared:
        sa, sb = slots_of(ta, e), slots_of(tb, e)
        if len(sa) != 1 or len(sb) != 1:
            raise MovieError("shared edge %s revisits a crossing" % e)
        over_a, over_b = sa[0] in (1, 3), sb[0] in (1, 3)
        if over_a and over_b:
            m_over = e
        elif not over_a and not over_b:
            m_under = e
    if m_over is None or m_under is None:
        raise MovieError("crossings x%d, x%d are not a tongue pair" % (ca, cb))

    # outer pieces: the non-shared under-edges glue together, as do the overs
    def outer(t, mid, slots):
        return [t[s] for s in range(4) if s in slots and t[s] != mid]

    under_pieces = outer(ta, m_under, (0, 2)) + outer(tb, m_under, (0, 2))
    over_pieces = outer(ta, m_over, (1, 3)) + outer(tb, m_over, (1, 3))
    if len(under_pieces) != 2 or len(over_pieces) != 2:
        raise MovieError("crossings x%d, x%d are not a tongue pair" % (ca, cb))

    tuples = [list(c.edges) for ci, c in enumerate(d.crossings) if ci not in (ca, cb)]
    loops = list(d.loops)
    edge_map = {e: e for e in d.edges()}
    edge_map[m_over] = None
    edge_map[m_under] = None
    links = []
    new_loop_sources = []
    for pieces in (under_pieces, over_pieces):
        x, y = sorted(set(pieces))[0], sorted(set(pieces))[-1]
        if x == y:
            # the strand loses its last crossings and becomes a loop
            edge_map[x] = None
            new_loop_sources.append(x)
            continue
        for t in tuples:
            for s in range(4):
                if t[s] == y:
                    t[s] = x
        edge_map[y] = x
        edge_map[x] = x
    for x in new_loop_sources:
        loops.append(None)
        links.append((("e", x), ("l", len(loops) - 1)))

    removed = sorted((ca, cb))
    new_loops = []
    for corner in loops:
        if corner is None:
            new_loops.append(None)
            continue
        ci = corner // 4
        if ci in removed:
            new_loops.append(None)
            continue
        shift = sum(1 for rc in removed if rc < ci)
        new_loops.append(corner - 4 * shift)
    d2 = _rebuild(d, [tuple(t) for t in tuples], new_loops, _translate_outer(d, [ca, cb]))
    data = MoveData(
        kind="r2", chi=0, edge_map=edge_map,
        loop_map={j: j for j in range(len(d.loops))},
        links=links,
        payload={"crossings": (ca, cb), "mid": (m_over, m_under), "forward": False},
    )
    return d2, data


# -- induced chain maps --------------------------------------------------------

@dataclass
class InducedMap:
    source: FilteredComplex
    target: FilteredComplex
    mats: dict               # r -> SparseMatrix C_src^r -> C_tgt^r
    fdegree: int             # declared filtration degree = -chi

    def matrix(self, r):
        m = self.mats.get(r)
        if m is None:
            return SparseMatrix(self.target.dim(r), self.source.dim(r))
        return m

    def apply(self, r, vec):
        return self.matrix(r).apply(vec)

    def compose(self, first):
        """self o first."""
        if first.target is not self.source:
            raise MovieError("composition mismatch: target of the first map "
                             "must be the source of the second")
        mats = {}
        for r in first.source.degrees():
            if first.source.dim(r):
                mats[r] = self.matrix(r).compose(first.matrix(r))
        return InducedMap(source=first.source, target=self.target,
                          mats=mats, fdegree=self.fdegree + first.fdegree)

    def is_chain_map(self):
        for r in self.source.degrees():
            lhs = self.matrix(r + 1).compose(self.source.differential(r))
            rhs = self.target.differential(r).compose(self.matrix(r))
            if lhs != rhs:
                return False
        return True

    def filtered_degree_observed(self):
        """max over nonzero entries of q(target) - q(source); None if zero."""
        worst = None
        for r in self.source.degrees():
            m = self.mats.get(r)
            if m is None:
                continue
            for i, j, _ in m.entries():
                shift = self.target.qs[r][i] - self.source.qs[r][j]
                if worst is None or shift > worst:
                    worst = shift
        return worst

    def homology_matrix(self, r):
        """The induced matrix on homology at degree r, over the canonical
        homology bases of source and target, plus those bases."""
        from .homology import homology_basis, class_coordinates

        reps_s, _ = homology_basis(self.source, r)
        reps_t, bnd_t = homology_basis(self.target, r)
        out = SparseMatrix(len(reps_t), len(reps_s))
        for j, rep in enumerate(reps_s):
            img = self.apply(r, rep)
            coords = class_coordinates(self.target, r, img, reps_t, bnd_t)
            if coords is None:
                raise MovieError("image of a cycle is not a cycle; broken chain map")
            for i, x in coords.items():
                out.set(i, j, x)
        return out, reps_s, reps_t

    def homology_rank(self):
        total = 0
        for r in self.source.degrees():
            m, reps_s, _ = self.homology_matrix(r)
            if reps_s:
                total += m.rank()
        return total


def _complex_for(d, params, max_crossings):
    return FilteredComplex(d, params, max_crossings=max_crossings)


# -- Morse maps ---------------------------------------------------------------

def _morse_affected(data, res0, res1):
    """(op, affected source keys, affected target keys) at one vertex."""
    kind = data.kind
    if kind == "birth":
        return "insert", [], [("l", data.payload["new_loop"])]
    if kind == "death":
        return "drop", [("l", data.payload["dead_loop"])], []
    op = data.payload["op"]
    if op[0] == "merge":
        s1, s2 = op[1], op[2]
        k1 = s1 if s1[0] == "l" else res0.circle_of_edge(s1[1])
        k2 = s2 if s2[0] == "l" else res0.circle_of_edge(s2[1])
        if s1[0] == "l" and s2[0] == "l":
            tgt = [("l", data.loop_map[s1[1]])]
        else:
            esite = s2 if s2[0] == "e" else s1
            tgt = [res1.circle_of_edge(esite[1])]
        return "merge", [k1, k2], tgt
    if op[0] == "split":
        src_site = op[1]
        if src_site[0] == "l":
            k = src_site[1]
            return "split", [("l", k)], [("l", data.loop_map[k]),
                                         ("l", op[2][2])]
        e = src_site[1]
        return "split", [res0.circle_of_edge(e)], [res1.circle_of_edge(e),
                                                   ("l", op[2][2])]
    if op[0] == "reconnect":
        e1, e2 = op[1], op[2]
        k1, k2 = res0.circle_of_edge(e1), res0.circle_of_edge(e2)
        t1, t2 = res1.circle_of_edge(e1), res1.circle_of_edge(e2)
        if k1 != k2:
            if t1 != t2:
                raise AssertionError("saddle merge must yield one circle")
            return "merge", [k1, k2], [t1]
        if t1 == t2:
            raise AssertionError("saddle split must yield two circles")
        return "split", [k1], [t1, t2]
    raise AssertionError("unknown saddle op %r" % (op,))


def _rest_match(res0, res1, aff0, aff1, data):
    """Position pairs (src, tgt) for the circles untouched by the move."""
    keys0, keys1 = res0.circle_keys(), res1.circle_keys()
    sig1 = {}
    for q, k in enumerate(keys1):
        if k in aff1:
            continue
        sig = k if k[0] == "l" else frozenset(res1.circle(k).edges)
        sig1[sig] = q
    pairs = []
    for p, k in enumerate(keys0):
        if k in aff0:
            continue
        if k[0] == "l":
            sig = ("l", data.loop_map[k[1]])
        else:
            sig = frozenset(
                data.edge_map[e] for e in res0.circle(k).edges
                if data.edge_map.get(e) is not None
            )
        q = sig1.pop(sig, None)
        if q is None:
            raise AssertionError("circle matching failed at %s" % (k,))
        pairs.append((p, q))
    if sig1:
        raise AssertionError("unmatched target circles %s" % sig1)
    return pairs


def _morse_map(C0, C1, data) -> InducedMap:
    merge = algebra.merge_table(C0.params)
    split = algebra.split_table(C0.params)
    d0, d1 = C0.diagram, C1.diagram
    mats = {}
    for r in C0.degrees():
        mats[r] = SparseMatrix(C1.dim(r), C0.dim(r))
    for v in range(1 << d0.n_crossings):
        res0, res1 = resolve(d0, v), resolve(d1, v)
        r = bin(v).count("1") - C0.n_minus
        op, aff0, aff1 = _morse_affected(data, res0, res1)
        pairs = _rest_match(res0, res1, aff0, aff1, data)
        keys0, keys1 = res0.circle_keys(), res1.circle_keys()
        pos0 = {k: p for p, k in enumerate(keys0)}
        pos1 = {k: p for p, k in enumerate(keys1)}
        mat = mats[r]
        base0 = C0.index[r][(v, 0)]
        base1 = C1.index[r][(v, 0)]
        n0 = len(keys0)
        for labels in range(1 << n0):
            carried = 0
            for sp, tp in pairs:
                if (labels >> sp) & 1:
                    carried |= 1 << tp
            col = base0 + labels
            if op == "insert":
                # the new factor enters as the unit, label bit 0
                mat.add(base1 + carried, col, 1)
            elif op == "drop":
                if (labels >> pos0[aff0[0]]) & 1:
                    mat.add(base1 + carried, col, 1)
            elif op == "merge":
                p1, p2 = pos0[aff0[0]], pos0[aff0[1]]
                t0 = pos1[aff1[0]]
                for lab_out, coeff in merge[((labels >> p1) & 1, (labels >> p2) & 1)]:
                    mat.add(base1 + (carried | (lab_out << t0)), col, coeff)
            else:  # split
                p0 = pos0[aff0[0]]
                t1, t2 = sorted((pos1[aff1[0]], pos1[aff1[1]]))
                for (l1, l2), coeff in split[(labels >> p0) & 1]:
                    mat.add(base1 + (carried | (l1 << t1) | (l2 << t2)), col, coeff)
    return InducedMap(source=C0, target=C1, mats=mats, fdegree=-data.chi)


# -- Reidemeister maps via elimination ----------------------------------------

class _Retraction:
    """Gaussian elimination on a based complex with inclusion/projection
    tracking; eliminating unit entries yields a strong deformation retract."""

    def __init__(self, C):
        self.C = C
        self.alive = {r: set(range(C.dim(r))) for r in C.degrees()}
        self.d = {}
        for r in C.degrees():
            mat = C.differential(r)
            self.d[r] = {j: dict(mat.cols[j]) for j in range(C.dim(r))}
        one = Fraction(1)
        self.f = {r: {j: {j: one} for j in range(C.dim(r))} for r in C.degrees()}
        self.g = {r: {j: {j: one} for j in range(C.dim(r))} for r in C.degrees()}

    def eliminate(self, r, i, j):
        col_j = self.d[r].pop(j)
        lam = col_j.pop(i, None)
        if not lam:
            raise AssertionError("elimination pivot (%d, %d, %d) vanished" % (r, i, j))
        self.alive[r].discard(j)
        self.alive[r + 1].discard(i)
        fj = self.f[r].pop(j)
        for l, cl in self.d[r].items():
            beta = cl.pop(i, None)
            if beta:
                c = -beta / lam
                vec_addmul(cl, col_j, c)
                vec_addmul(self.f[r][l], fj, c)
        self.f[r + 1].pop(i, None)
        if r - 1 in self.d:
            for cl in self.d[r - 1].values():
                cl.pop(j, None)
        if r + 1 in self.d:
            self.d[r + 1].pop(i, None)
        subst = {k: -x / lam for k, x in col_j.items()}
        for vec in self.g[r].values():
            vec.pop(j, None)
        for vec in self.g[r + 1].values():
            ci_ = vec.pop(i, None)
            if ci_:
                vec_addmul(vec, subst, ci_)


def _transition(Cb, v0, v1):
    """Edge-set matching data for the cube transition v0 -> v1 (one bit).

    Returns (copy pairs, src unmatched positions, tgt unmatched positions).
    """
    d = Cb.diagram
    res0, res1 = resolve(d, v0), resolve(d, v1)
    keys0, keys1 = res0.circle_keys(), res1.circle_keys()
    sets1 = {}
    for q, k in enumerate(keys1):
        sig = k if k[0] == "l" else frozenset(res1.circle(k).edges)
        sets1[sig] = q
    copy = []
    src_un = []
    for p, k in enumerate(keys0):
        sig = k if k[0] == "l" else frozenset(res0.circle(k).edges)
        q = sets1.pop(sig, None)
        if q is None:
            src_un.append(p)
        else:
            copy.append((p, q))
    return copy, src_un, sorted(sets1.values())


def _merge_elim_pairs(Cb, v0, v1, drop_key):
    """Pair (v0, labels with the dropped circle labeled 1) against its
    m-image basis vector at v1: renders the unit block of a merge edge."""
    res0 = resolve(Cb.diagram, v0)
    keys0 = res0.circle_keys()
    p_drop = keys0.index(drop_key)
    copy, src_un, tgt_un = _transition(Cb, v0, v1)
    src_other = [p for p in src_un if p != p_drop]
    if len(src_other) != 1 or len(tgt_un) != 1:
        raise AssertionError("expected a two-into-one merge transition")
    p_other, t_other = src_other[0], tgt_un[0]
    r0 = bin(v0).count("1") - Cb.n_minus
    pairs = []
    for labels in range(1 << len(keys0)):
        if (labels >> p_drop) & 1:
            continue
        tl = 1 << t_other if (labels >> p_other) & 1 else 0
        for sp, tp in copy:
            if (labels >> sp) & 1:
                tl |= 1 << tp
        pairs.append((r0, Cb.index[r0 + 1][(v1, tl)], Cb.index[r0][(v0, labels)]))
    return pairs


def _split_elim_pairs(Cb, v0, v1, new_key):
    """Pair (v0, labels) against its split image with X on the new circle."""
    res1 = resolve(Cb.diagram, v1)
    keys1 = res1.circle_keys()
    t_new = keys1.index(new_key)
    copy, src_un, tgt_un = _transition(Cb, v0, v1)
    tgt_other = [q for q in tgt_un if q != t_new]
    if len(src_un) != 1 or len(tgt_other) != 1:
        raise AssertionError("expected a one-into-two split transition")
    p_src, t_other = src_un[0], tgt_other[0]
    r0 = bin(v0).count("1") - Cb.n_minus
    keys0 = resolve(Cb.diagram, v0).circle_keys()
    pairs = []
    for labels in range(1 << len(keys0)):
        tl = 1 << t_new
        if (labels >> p_src) & 1:
            tl |= 1 << t_other
        for sp, tp in copy:
            if (labels >> sp) & 1:
                tl |= 1 << tp
        pairs.append((r0, Cb.index[r0 + 1][(v1, tl)], Cb.index[r0][(v0, labels)]))
    return pairs


def _insert_bits(vs, fixed):
    """Widen a small-cube vertex into the big cube at the fixed positions."""
    vb = 0
    sp = 0
    total = max(fixed) + 1 if fixed else 0
    p = 0
    remaining = vs
    positions = sorted(fixed)
    while remaining or p < total:
        if p in fixed:
            vb |= fixed[p] << p
        else:
            vb |= (remaining & 1) << p
            remaining >>= 1
        p += 1
    return vb


def _slice_identification(Cb, Cs, fixed, pinned, edge_map, loop_map, vanished):
    """Identify the surviving big-cube slice with the small complex.

    fixed: {big crossing -> bit} for the move crossings; pinned: {frozenset
    of big edges -> forced label bit} for circles the elimination froze;
    edge_map: big edge -> small edge (None = vanishes); loop_map: big loop
    index -> small loop index; vanished: resolver small-key for circles all
    of whose edges vanish.  Returns {r: {big index: (small index, sign)}};
    the sign twist accounts for the cube-sign change after dropping the
    fixed coordinates.
    """
    db, ds = Cb.diagram, Cs.diagram
    active = sorted(ci for ci, val in fixed.items() if val)

    def eps(vb):
        s = 0
        for j in range(db.n_crossings):
            if j in fixed or not (vb >> j) & 1:
                continue
            s += sum(1 for a in active if a < j)
        return -1 if s & 1 else 1

    iso = {}
    for vs in range(1 << ds.n_crossings):
        vb = _insert_bits(vs, fixed)
        rs = bin(vs).count("1") - Cs.n_minus
        rb = bin(vb).count("1") - Cb.n_minus
        if rs != rb:
            raise AssertionError("homological degrees disagree across the move")
        res_b, res_s = resolve(db, vb), resolve(ds, vs)
        keys_b, keys_s = res_b.circle_keys(), res_s.circle_keys()
        small_pos = {}
        for q, k in enumerate(keys_s):
            sig = k if k[0] == "l" else frozenset(res_s.circle(k).edges)
            small_pos[sig] = q
        pinned_bits = 0
        transfer = []  # (small position, big position)
        for p, k in enumerate(keys_b):
            edges = res_b.circle(k).edges
            if k[0] != "l" and frozenset(edges) in pinned:
                if pinned[frozenset(edges)]:
                    pinned_bits |= 1 << p
                continue
            if k[0] == "l":
                sig = ("l", loop_map[k[1]])
            else:
                mapped = frozenset(
                    edge_map[e] for e in edges if edge_map.get(e) is not None
                )
                sig = mapped if mapped else vanished(frozenset(edges))
            q = small_pos.pop(sig, None)
            if q is None:
                raise AssertionError("slice circle matching failed at %s" % (k,))
            transfer.append((q, p))
        if small_pos:
            raise AssertionError("unmatched small circles %s" % small_pos)
        sign = eps(vb)
        for ls in range(1 << len(keys_s)):
            lb = pinned_bits
            for q, p in transfer:
                if (ls >> q) & 1:
                    lb |= 1 << p
            iso.setdefault(rs, {})[Cb.index[rb][(vb, lb)]] = (
                Cs.index[rs][(vs, ls)], sign)
    return iso


def _retract_maps(Cb, Cs, elim_pairs, fixed, pinned, edge_map, loop_map, vanished):
    """(f: C(small) -> C(big), g: C(big) -> C(small)) as matrix dicts."""
    ret = _Retraction(Cb)
    for (r, i, j) in elim_pairs:
        ret.eliminate(r, i, j)
    iso = _slice_identification(Cb, Cs, fixed, pinned, edge_map, loop_map, vanished)
    for r in Cb.degrees():
        expected = set(iso.get(r, {}))
        if expected != ret.alive[r]:
            raise AssertionError("surviving slice mismatch at degree %d" % r)
    f_mats, g_mats = {}, {}
    for r in Cs.degrees():
        fm = SparseMatrix(Cb.dim(r), Cs.dim(r))
        for bidx, (sidx, sg) in iso.get(r, {}).items():
            fm.cols[sidx] = vec_scale(ret.f[r][bidx], sg)
        f_mats[r] = fm
        gm = SparseMatrix(Cs.dim(r), Cb.dim(r))
        for o in range(Cb.dim(r)):
            out = {}
            for bidx, c in ret.g[r][o].items():
                sidx, sg = iso[r][bidx]
                vec_addmul(out, {sidx: Fraction(sg)}, c)
            gm.cols[o] = out
        g_mats[r] = gm
    return f_mats, g_mats


def _r1_move_maps(Cb, Cs, data):
    ci = data.payload["crossing"]
    ledge = data.payload["loop_edge"]
    kc_set = frozenset([ledge])
    # the smoothing bit at which the kink circle exists
    b = None
    for bit in (0, 1):
        res = resolve(Cb.diagram, bit << ci)
        key = res.circle_of_edge(ledge)
        if res.circle(key).edges == kc_set:
            b = bit
            break
    if b is None:
        raise AssertionError("kink circle not found on either smoothing")
    pairs = []
    nrest = Cb.diagram.n_crossings - 1
    for rest in range(1 << nrest):
        v0 = _insert_bits(rest, {ci: 0})
        v1 = v0 | (1 << ci)
        if b == 0:
            kc = resolve(Cb.diagram, v0).circle_of_edge(ledge)
            pairs += _merge_elim_pairs(Cb, v0, v1, kc)
        else:
            kc = resolve(Cb.diagram, v1).circle_of_edge(ledge)
            pairs += _split_elim_pairs(Cb, v0, v1, kc)
    # survivors stay on the circle-bearing slice: the X-part for a merge
    # cancellation (b = 0), the 1-part for a split cancellation (b = 1)
    fixed = {ci: b}
    pinned = {kc_set: 1 if b == 0 else 0}

    def no_vanished(edges):
        raise AssertionError("unexpected vanishing circle %s" % sorted(edges))

    if data.payload["forward"]:
        # big = after the kink was added; small = before
        site = data.payload["site"]
        small_edges = set(Cs.diagram.edges())
        if site[0] == "e":
            e = site[1]
            big_to_small = {
                x: (x if x in small_edges else (None if x == ledge else e))
                for x in Cb.diagram.edges()
            }
            big_loop_map = {k: k for k in range(len(Cb.diagram.loops))}
            vanished = no_vanished
        else:
            k = site[1]
            big_to_small = {
                x: (x if x in small_edges else None) for x in Cb.diagram.edges()
            }
            big_loop_map = {
                new: old for old, new in data.loop_map.items() if new is not None
            }
            vanished = lambda edges: ("l", k)
    else:
        # big = before the kink was removed; small = after
        big_to_small = data.edge_map
        big_loop_map = data.loop_map
        loop_targets = {ns for (_, ns) in data.links if ns[0] == "l"}
        if loop_targets:
            target = sorted(loop_targets)[0]
            vanished = lambda edges: target
        else:
            vanished = no_vanished
    f_mats, g_mats = _retract_maps(
        Cb, Cs, pairs, fixed, pinned, big_to_small, big_loop_map, vanished
    )
    return f_mats, g_mats


def _r2_move_maps(Cb, Cs, data):
    ca, cb = data.payload["crossings"]
    mid = frozenset(data.payload["mid"])
    s_circ = None
    for ba in (0, 1):
        for bb in (0, 1):
            v = (ba << ca) | (bb << cb)
            res = resolve(Cb.diagram, v)
            if any(res.circle(k).edges == mid for k in res.circle_keys()):
                if s_circ is not None:
                    raise AssertionError("trapped circle on two slices")
                s_circ = (ba, bb)
    if s_circ is None or s_circ.count(1) != 1:
        raise AssertionError("trapped circle slice not found")
    c_t = ca if s_circ[0] else cb     # flipping this bit creates the circle
    c_o = cb if s_circ[0] else ca
    pairs = []
    fixed_zero = {ca: 0, cb: 0}
    nrest = Cb.diagram.n_crossings - 2
    for rest in range(1 << nrest):
        v00 = _insert_bits(rest, fixed_zero)
        v10 = v00 | (1 << c_t)
        v11 = v10 | (1 << c_o)
        kc = resolve(Cb.diagram, v10).circle_of_edge(next(iter(mid)))
        pairs += _split_elim_pairs(Cb, v00, v10, kc)
        pairs += _merge_elim_pairs(Cb, v10, v11, kc)
    fixed = {ca: 1 - s_circ[0], cb: 1 - s_circ[1]}

    if data.payload["forward"]:
        # on the surviving slice each strand arc absorbs the other strand's
        # middle piece, so the mid edges are dropped from signatures entirely
        tips = data.payload["tips"]
        big_to_small = {
            x: (None if x in mid else tips.get(x, x)) for x in Cb.diagram.edges()
        }
        big_loop_map = {k: k for k in range(len(Cb.diagram.loops))}

        def vanished(edges):
            raise AssertionError("unexpected vanishing circle %s" % sorted(edges))
    else:
        big_to_small = data.edge_map
        big_loop_map = data.loop_map
        # strands that lose their last crossings become loops; a circle all
        # of whose edges die lies on such a strand and maps to its loop
        loop_of_comp = {}
        for (old_site, new_site) in data.links:
            loop_of_comp[Cb.diagram.component_of_edge(old_site[1])] = new_site

        def vanished(edges):
            comps = {Cb.diagram.component_of_edge(e) for e in edges}
            targets = {loop_of_comp[c] for c in comps if c in loop_of_comp}
            if len(targets) != 1:
                raise AssertionError(
                    "cannot resolve vanishing circle %s" % sorted(edges))
            return targets.pop()
    f_mats, g_mats = _retract_maps(
        Cb, Cs, pairs, fixed, {}, big_to_small, big_loop_map, vanished
    )
    return f_mats, g_mats


def elementary_map(C0, event, max_crossings=14):
    """(InducedMap for one event, its MoveData, the target complex)."""
    d2, data = apply_event(C0.diagram, event)
    C1 = _complex_for(d2, C0.params, max_crossings)
    if data.kind in ("birth", "death", "saddle"):
        imap = _morse_map(C0, C1, data)
        return imap, data, C1
    if data.kind == "r1":
        if data.payload["forward"]:
            f_mats, _ = _r1_move_maps(C1, C0, data)
            imap = InducedMap(source=C0, target=C1, mats=f_mats, fdegree=0)
        else:
            _, g_mats = _r1_move_maps(C0, C1, data)
            imap = InducedMap(source=C0, target=C1, mats=g_mats, fdegree=0)
        return imap, data, C1
    if data.kind == "r2":
        if data.payload["forward"]:
            f_mats, _ = _r2_move_maps(C1, C0, data)
            imap = InducedMap(source=C0, target=C1, mats=f_mats, fdegree=0)
        else:
            _, g_mats = _r2_move_maps(C0, C1, data)
            imap = InducedMap(source=C0, target=C1, mats=g_mats, fdegree=0)
        return imap, data, C1
    raise MovieError("unknown move kind %r" % data.kind)


# -- movies --------------------------------------------------------------------

@dataclass
class MovieResult:
    movie: Movie
    composite: InducedMap
    maps: list
    datas: list
    diagrams: list

    @property
    def chi(self):
        return sum(d.chi for d in self.datas)


def induced_map(movie: Movie, params, max_crossings=14) -> MovieResult:
    """Compose the elementary maps of a movie left to right."""
    C = _complex_for(movie.start, params, max_crossings)
    diagrams = [movie.start]
    maps = []
    datas = []
    composite = None
    for event in movie.events:
        imap, data, C_next = elementary_map(C, event, max_crossings=max_crossings)
        maps.append(imap)
        datas.append(data)
        diagrams.append(C_next.diagram)
        composite = imap if composite is None else imap.compose(composite)
        C = C_next
    if composite is None:
        mats = {r: SparseMatrix.identity(C.dim(r)) for r in C.degrees()}
        composite = InducedMap(source=C, target=C, mats=mats, fdegree=0)
    return MovieResult(movie=movie, composite=composite, maps=maps,
                       datas=datas, diagrams=diagrams)


def _status_combine(parents):
    labels = {p[1] for p in parents if p[0] == "evolved"}
    if any(p[0] == "conflict" for p in parents) or len(labels) > 1:
        return ("conflict",)
    if labels:
        return ("evolved", labels.pop())
    return ("free",)


def _comp_of_site(d, site):
    if site[0] == "e":
        return d.component_of_edge(site[1])
    return d.component_of_loop(site[1])


def compatible_states(result: MovieResult, state0):
    """States of the final diagram compatible with state0 on every component
    that evolved from the start diagram (via the component genealogy of the
    movie events).  Free components (created by births and never attached)
    may take either label."""
    d0 = result.diagrams[0]
    statuses = {}
    for idx in range(d0.n_components()):
        statuses[idx] = ("evolved", state0[idx])
    for step, data in enumerate(result.datas):
        d_old = result.diagrams[step]
        d_new = result.diagrams[step + 1]
        incoming = {j: [] for j in range(d_new.n_components())}
        for e, e2 in data.edge_map.items():
            if e2 is not None:
                incoming[d_new.component_of_edge(e2)].append(
                    statuses[d_old.component_of_edge(e)])
        for k, k2 in data.loop_map.items():
            if k2 is not None:
                incoming[d_new.component_of_loop(k2)].append(
                    statuses[d_old.component_of_loop(k)])
        for old_site, new_site in data.links:
            incoming[_comp_of_site(d_new, new_site)].append(
                statuses[_comp_of_site(d_old, old_site)])
        statuses = {j: _status_combine(ps) for j, ps in incoming.items()}
    n = result.diagrams[-1].n_components()
    out = []
    for state in canonical_states(result.diagrams[-1]):
        ok = True
        for j in range(n):
            st = statuses[j]
            if st[0] == "conflict":
                ok = False
            elif st[0] == "evolved" and state[j] != st[1]:
                ok = False
        if ok:
            out.append(state)
    return out


def expand_on_canonical(imap: InducedMap, state0, outer=None):
    """Expansion of the image of a canonical generator's class in the
    canonical classes of the target: {target state: coefficient}."""
    g0 = canonical_generator(imap.source, state0, outer=outer)
    img = imap.apply(g0.hdeg, g0.chain)
    r = g0.hdeg
    gens = [g for g in canonical_generators(imap.target, outer=outer)
            if g.hdeg == r]
    n = imap.target.dim(r)
    boundaries = (imap.target.differential(r - 1).image()
                  if imap.target.dim(r - 1) else Subspace(n))
    mat = SparseMatrix(n, len(gens) + boundaries.dim)
    mat.cols = [dict(g.chain) for g in gens] + [dict(b) for b in boundaries.basis]
    sol = mat.solve(img)
    if sol is None:
        raise MovieError("image class does not lie in the canonical span")
    return {gens[j].state: x for j, x in sol.items() if j < len(gens) and x}


def dry_run(movie: Movie):
    """Human-readable listing of the diagrams a movie passes through."""
    lines = ["step 0: %s  [%s]" % (movie.start.pd_text() or "(empty)",
                                   movie.start.summary())]
    d = movie.start
    for i, ev in enumerate(movie.events):
        d, data = apply_event(d, ev)
        lines.append("step %d: %s -> %s  [%s]" % (
            i + 1, " ".join(str(x) for x in ev), d.pd_text() or "(empty)",
            d.summary()))
    return "\n".join(lines)
