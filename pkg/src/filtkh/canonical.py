"""Canonical states, their distinguished cube vertices, and the homology
generators they induce.

A canonical state labels each link component with one of the two roots
(bit 0 = alpha, bit 1 = beta).  It selects the cube vertex that takes the
oriented smoothing exactly at the crossings where both strands carry the
same label.  Each circle of that resolution is then assigned one of the
orthogonal idempotents by a mod-2 count:

    (number of circles separating it from the outer face)
  + (1 if it runs clockwise)
  + (1 if it is labeled beta)

where a circle containing arcs of both labels is normalized to label alpha
travelling along its alpha-arcs.  Bit 0 picks z1, bit 1 picks z2; the
resulting tensor is a cycle whose class is a homology generator, and the
2^n classes form a basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import algebra
from .diagram import resolve, circle_depth, is_clockwise, DiagramError


class GeneratorError(RuntimeError):
    """A canonical chain failed its cycle postcondition; indicates an
    embedding or outer-face handling bug, not bad user input."""


def canonical_states(d):
    """All 2^n label assignments, as tuples of bits per component index."""
    n = d.n_components()
    return [tuple((mask >> i) & 1 for i in range(n)) for mask in range(1 << n)]


def canonical_vertex(d, state):
    """Oriented smoothing where the two strands' labels agree, the
    disoriented one where they differ."""
    v = 0
    for ci, cr in enumerate(d.crossings):
        under = d.component_of_edge(cr.edges[0])
        over = d.component_of_edge(cr.edges[1])
        oriented_bit = 0 if cr.sign > 0 else 1
        bit = oriented_bit if state[under] == state[over] else 1 - oriented_bit
        v |= bit << ci
    return v


def _circle_label_direction(d, res, circle, state):
    """(label bit, travel direction) of a circle under a canonical state.

    Pure circles keep their label and follow the link orientation; mixed
    circles are read as alpha-labeled with the direction of their
    alpha-arcs.  Arc coherence is a structural invariant of canonical
    resolutions and is asserted.
    """
    if circle.key[0] == "l":
        return state[d.component_of_loop(circle.key[1])], 1
    by_label = {0: set(), 1: set()}
    for e in circle.edges:
        by_label[state[d.component_of_edge(e)]].add(e)
    # direction of edge e within the canonical traversal: +1 when the
    # traversal arrives at the edge's head dart
    arrival = {}
    dgm = res.diagram
    for dart in circle.darts:
        ci, s = divmod(dart, 4)
        e = dgm.crossings[ci].edges[s]
        arrival[e] = 1 if dgm.orientations[e][1] == dart else -1
    if by_label[0] and by_label[1]:
        label = 0
        senses = {arrival[e] for e in by_label[0]}
    else:
        label = 0 if by_label[0] else 1
        senses = {arrival[e] for e in circle.edges}
    if len(senses) != 1:
        raise GeneratorError(
            "incoherently directed arcs on a canonical-resolution circle %s"
            % (circle.key,)
        )
    return label, senses.pop()


def circle_invariant(res, circle_key, state, outer=None):
    """The mod-2 invariant: 0 selects z1, 1 selects z2."""
    d = res.diagram
    circle = res.circle(circle_key)
    label, direction = _circle_label_direction(d, res, circle, state)
    depth = circle_depth(res, outer)[circle_key]
    cw = is_clockwise(res, circle_key, direction=direction, outer=outer)
    return (depth + (1 if cw else 0) + label) % 2


@dataclass
class CanonicalGenerator:
    state: tuple
    vertex: int
    idempotents: dict      # circle key -> 1 or 2
    hdeg: int
    q_level: int
    chain: dict            # basis index -> Fraction, within C^hdeg

    def as_dict(self):
        return {
            "state": "".join("ab"[b] for b in self.state),
            "vertex": self.vertex,
            "circles": [
                {"id": "%s%s" % k, "idempotent": "z%d" % z}
                for k, z in sorted(self.idempotents.items())
            ],
            "hdeg": self.hdeg,
            "qlevel": self.q_level,
        }


def canonical_generator(c, state, outer=None) -> CanonicalGenerator:
    """The chain-level generator for one canonical state of the complex's
    diagram, expanded in the standard basis and checked to be a cycle."""
    d = c.diagram
    v = canonical_vertex(d, state)
    res = resolve(d, v)
    z1, z2 = algebra.idempotents(c.params)
    keys = c.circle_keys(v)
    bits = {k: circle_invariant(res, k, state, outer=outer) for k in keys}
    factors = [z2 if bits[k] else z1 for k in keys]
    r = bin(v).count("1") - c.n_minus

    chain = {}
    n = len(keys)
    for labels in range(1 << n):
        coeff = Fraction(1)
        for p in range(n):
            c1, cX = factors[p].coeffs()
            coeff *= cX if (labels >> p) & 1 else c1
            if coeff == 0:
                break
        if coeff:
            chain[c.index[r][(v, labels)]] = coeff

    image = c.differential(r).apply(chain)
    if image:
        raise GeneratorError(
            "canonical chain for state %s is not a cycle" % (state,)
        )
    q_level = n - r + c.n_minus - c.n_plus
    return CanonicalGenerator(
        state=state,
        vertex=v,
        idempotents={k: 2 if bits[k] else 1 for k in keys},
        hdeg=r,
        q_level=q_level,
        chain=chain,
    )


def canonical_generators(c, outer=None):
    return [canonical_generator(c, s, outer=outer) for s in canonical_states(c.diagram)]


def generator_class_rank(c, gens=None):
    """Rank of the canonical classes in homology: stacks the chains on the
    boundary space degree by degree and counts the independent cosets."""
    from .linalg import Subspace

    if gens is None:
        gens = canonical_generators(c)
    total = 0
    by_deg = {}
    for g in gens:
        by_deg.setdefault(g.hdeg, []).append(g)
    for r, gs in by_deg.items():
        boundaries = c.differential(r - 1).image() if c.dim(r - 1) else None
        span = Subspace(c.dim(r), boundaries.basis if boundaries else ())
        base = span.dim
        for g in gs:
            span = span.sum(Subspace(c.dim(r), [g.chain]))
        total += span.dim - base
    return total
