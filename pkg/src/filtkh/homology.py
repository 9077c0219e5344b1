"""Homology of the filtered complex: the bigraded homology of the
q-preserving differential (the classical theory), the filtered homology
with its quantum filtration levels, and the s-type invariants.

Filtration levels come from rank bookkeeping of the q-ordered differential:
with Z = ker d, B = im d and F^k the span of basis vectors with q <= k,

    dim F^k H^r = dim(Z^r n F^k) - dim(B^r n F^k),

and both terms are read off a one-pass echelonization of d^r with columns
processed in q order and pivots chosen at the highest target q.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .linalg import RankProfile, Subspace, filtered_rank_profile


def _profile(c, r):
    """RankProfile of d^r with q-values as both column and row keys."""
    mat = c.differential(r)
    qs_src = c.qs.get(r, [])
    qs_tgt = c.qs.get(r + 1, [])
    pairs = filtered_rank_profile(mat, lambda j: qs_src[j], lambda i: qs_tgt[i])
    return RankProfile(pairs, qs_src)


class _Tables:
    """Cache of per-degree rank profiles for one complex."""

    def __init__(self, c):
        self.c = c
        self._profiles = {}

    def profile(self, r):
        if r not in self._profiles:
            self._profiles[r] = _profile(self.c, r)
        return self._profiles[r]

    def n(self, r, p):
        return self.profile(r).n_cols(p)

    def rho(self, r, p, t):
        return self.profile(r).rank(p, t)


def tables_for(c) -> _Tables:
    cached = getattr(c, "_rank_tables", None)
    if cached is None:
        cached = _Tables(c)
        c._rank_tables = cached
    return cached


def khovanov_homology(c):
    """Bigraded dims {(r, q): dim} of the q-preserving differential."""
    out = {}
    ranks = {}  # (r, q) -> rank of the q-block of the top differential
    for r in c.degrees():
        qs_tgt = c.qs.get(r + 1, [])
        top = c.top_differential(r)
        cols_by_q = {}
        for j, q in enumerate(c.qs.get(r, [])):
            cols_by_q.setdefault(q, []).append(j)
        for q, cols in cols_by_q.items():
            sub = top.submatrix(lambda i, q=q: qs_tgt[i] == q, cols)
            rk = sub.rank()
            if rk:
                ranks[(r, q)] = rk
    for r in c.degrees():
        counts = {}
        for q in c.qs.get(r, []):
            counts[q] = counts.get(q, 0) + 1
        for q, n in counts.items():
            dim = n - ranks.get((r, q), 0) - ranks.get((r - 1, q), 0)
            if dim:
                out[(r, q)] = dim
    return out


def filtered_homology(c):
    """Per-degree dims {r: dim} of the full differential's homology."""
    t = tables_for(c)
    out = {}
    for r in c.degrees():
        n = c.dim(r)
        rk = t.rho(r, None, None)
        rk_prev = t.rho(r - 1, None, None) if r - 1 in c.diff else 0
        dim = n - rk - rk_prev
        if dim:
            out[r] = dim
    return out


def filtration_profile(c):
    """{r: {k: dim F^k H^r}} over the q-values present in the chain basis."""
    t = tables_for(c)
    levels = c.q_values()
    out = {}
    for r in c.degrees():
        per = {}
        for k in levels:
            z = t.n(r, k) - t.rho(r, k, None)
            if r - 1 in c.diff:
                b = t.rho(r - 1, None, None) - t.rho(r - 1, None, k)
            else:
                b = 0
            per[k] = z - b
        if any(per.values()):
            out[r] = per
    return out


@dataclass
class SInvariants:
    s_min: int
    s_max: int
    s_bar: Fraction | None      # only for knots
    total_dim: int
    profile: dict               # {r: {k: dim F^k H^r}}

    def as_dict(self):
        d = {"smin": self.s_min, "smax": self.s_max}
        if self.s_bar is not None:
            d["sbar"] = self.s_bar
        return d


def filtration_levels(c) -> SInvariants:
    """Extreme filtration levels of the homology and their average.

    s_min = min{k : F^k H != 0}, s_max = min{k : F^k H = H}, ranging over
    all homological degrees jointly; s_bar is emitted for knots only.
    """
    prof = filtration_profile(c)
    total = sum(v for v in filtered_homology(c).values())
    if total == 0:
        raise RuntimeError("zero total homology: parameters must have distinct roots")
    levels = c.q_values()
    s_min = None
    s_max = None
    for k in levels:
        at_k = sum(per.get(k, 0) for per in prof.values())
        if s_min is None and at_k > 0:
            s_min = k
        if s_max is None and at_k == total:
            s_max = k
    if s_min is None or s_max is None:
        raise RuntimeError("filtration sweep failed to exhaust the homology")
    s_bar = Fraction(s_min + s_max, 2) if c.n_components == 1 else None
    return SInvariants(s_min=s_min, s_max=s_max, s_bar=s_bar,
                       total_dim=total, profile=prof)


def slice_bounds(s: SInvariants):
    """(upper bound for the slice Euler characteristic, lower bound for the
    slice genus).  chi_s(L) <= s_max always; for knots |s_bar|/2 <= g_s."""
    genus = abs(s.s_bar) / 2 if s.s_bar is not None else None
    return s.s_max, genus


def homology_basis(c, r):
    """(cycle representatives of a homology basis, boundary Subspace) at
    degree r.  Representatives are reduced against the boundaries."""
    mat = c.differential(r)
    kernel = mat.kernel() if c.dim(r) else Subspace(0)
    boundaries = (
        c.differential(r - 1).image() if c.dim(r - 1) else Subspace(c.dim(r))
    )
    if boundaries.ambient != c.dim(r):
        boundaries = Subspace(c.dim(r))
    reps = []
    span = Subspace(c.dim(r), boundaries.basis)
    for v in kernel.basis:
        rem = span.reduce(v)
        if rem:
            reps.append(rem)
            span = span.sum(Subspace(c.dim(r), [rem]))
    return reps, boundaries


def class_coordinates(c, r, vec, reps, boundaries):
    """Coefficients of [vec] in the homology basis [reps], or None if vec is
    not a cycle-representative combination (should not happen for cycles)."""
    from .linalg import SparseMatrix

    n = c.dim(r)
    m = SparseMatrix(n, len(reps) + boundaries.dim)
    m.cols = [dict(v) for v in reps] + [dict(b) for b in boundaries.basis]
    sol = m.solve(vec)
    if sol is None:
        return None
    return {j: x for j, x in sol.items() if j < len(reps) and x}
