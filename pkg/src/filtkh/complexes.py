"""The filtered cube-of-resolutions complex of a link diagram.

Chain groups: one tensor factor of the rank-two algebra per circle of each
of the 2^c resolutions.  A basis vector is (cube vertex, label bitmask)
where bit i set means the i-th circle (in the canonical circle order of the
resolution) carries X rather than 1.  Gradings:

    homological degree  r(v) = |v| - n_minus
    filtration grading  q = deg - r + n_minus - n_plus,
                        deg = #X - #1 over the circles

The writhe term enters with the sign that makes q invariant under
Reidemeister moves (checked empirically by the spectral-page tests); the
differential then never increases q, and the strictly-decreasing part drops
it by exactly 2 (h-terms) or 4 (a-terms).

Cube edges carry the merge/split maps on the affected tensor factors times
the alternating sign (-1)^(number of set bits below the flipped one).
"""

from __future__ import annotations

from . import algebra
from .diagram import resolve
from .linalg import SparseMatrix


class ResourceCapError(RuntimeError):
    """Raised when a diagram exceeds the configured crossing cap."""


def _popcount(x):
    return bin(x).count("1")


class FilteredComplex:
    def __init__(self, diagram, params, max_crossings=14):
        c = diagram.n_crossings
        if c > max_crossings:
            raise ResourceCapError(
                "diagram has %d crossings, over the cap of %d "
                "(raise it explicitly to proceed)" % (c, max_crossings)
            )
        self.diagram = diagram
        self.params = params
        self.n_plus = diagram.n_plus
        self.n_minus = diagram.n_minus
        self.n_components = diagram.n_components()
        self.r_min = -self.n_minus
        self.r_max = c - self.n_minus
        self._build()
        self._top = None

    def _build(self):
        d = self.diagram
        c = d.n_crossings
        wterm = self.n_minus - self.n_plus
        self._circles = {}
        self.basis = {r: [] for r in range(self.r_min, self.r_max + 1)}
        self.qs = {r: [] for r in range(self.r_min, self.r_max + 1)}
        self.index = {r: {} for r in range(self.r_min, self.r_max + 1)}
        for v in range(1 << c):
            res = resolve(d, v)
            keys = res.circle_keys()
            self._circles[v] = keys
            r = _popcount(v) - self.n_minus
            n = len(keys)
            base = len(self.basis[r])
            for labels in range(1 << n):
                self.basis[r].append((v, labels))
                self.qs[r].append(2 * _popcount(labels) - n - r + wterm)
                self.index[r][(v, labels)] = base + labels
        self.diff = self._differential(top=False)

    def _differential(self, top):
        merge = algebra.merge_table(self.params, top=top)
        split = algebra.split_table(self.params, top=top)
        d = self.diagram
        c = d.n_crossings
        mats = {}
        for r in range(self.r_min, self.r_max):
            mats[r] = SparseMatrix(len(self.basis[r + 1]), len(self.basis[r]))
        for v in range(1 << c):
            r = _popcount(v) - self.n_minus
            mat = mats.get(r)
            src_keys = self._circles[v]
            src_pos = {k: p for p, k in enumerate(src_keys)}
            src_sets = {k: resolve(d, v).circle(k).edges for k in src_keys}
            for i in range(c):
                if (v >> i) & 1:
                    continue
                w = v | (1 << i)
                sign = -1 if _popcount(v & ((1 << i) - 1)) & 1 else 1
                tgt_keys = self._circles[w]
                tgt_pos = {k: p for p, k in enumerate(tgt_keys)}
                tgt_sets = {k: resolve(d, w).circle(k).edges for k in tgt_keys}
                tgt_by_set = {tgt_sets[k]: k for k in tgt_keys}
                copy_pairs = []
                src_unmatched = []
                for k in src_keys:
                    mate = tgt_by_set.get(src_sets[k])
                    if mate is not None:
                        copy_pairs.append((src_pos[k], tgt_pos[mate]))
                    else:
                        src_unmatched.append(src_pos[k])
                tgt_unmatched = sorted(
                    set(range(len(tgt_keys))) - {t for _, t in copy_pairs}
                )
                base_src = self.index[r][(v, 0)]
                base_tgt = self.index[r + 1][(w, 0)]
                if len(src_unmatched) == 2 and len(tgt_unmatched) == 1:
                    p1, p2 = src_unmatched
                    t0 = tgt_unmatched[0]
                    for labels in range(1 << len(src_keys)):
                        pair = ((labels >> p1) & 1, (labels >> p2) & 1)
                        out = merge[pair]
                        if not out:
                            continue
                        carried = 0
                        for sp, tp in copy_pairs:
                            if (labels >> sp) & 1:
                                carried |= 1 << tp
                        col = base_src + labels
                        for lab_out, coeff in out:
                            row = base_tgt + (carried | (lab_out << t0))
                            mat.add(row, col, sign * coeff)
                elif len(src_unmatched) == 1 and len(tgt_unmatched) == 2:
                    p0 = src_unmatched[0]
                    t1, t2 = tgt_unmatched
                    for labels in range(1 << len(src_keys)):
                        out = split[(labels >> p0) & 1]
                        carried = 0
                        for sp, tp in copy_pairs:
                            if (labels >> sp) & 1:
                                carried |= 1 << tp
                        col = base_src + labels
                        for (l1, l2), coeff in out:
                            row = base_tgt + (carried | (l1 << t1) | (l2 << t2))
                            mat.add(row, col, sign * coeff)
                else:
                    raise AssertionError(
                        "cube edge must merge two circles or split one "
                        "(crossing %d, vertex %d)" % (i, v)
                    )
        return mats

    # -- accessors ---------------------------------------------------------

    def degrees(self):
        return range(self.r_min, self.r_max + 1)

    def dim(self, r):
        return len(self.basis.get(r, ()))

    def total_dim(self):
        return sum(len(b) for b in self.basis.values())

    def dims(self):
        return {r: self.dim(r) for r in self.degrees() if self.dim(r)}

    def differential(self, r):
        """Matrix C^r -> C^(r+1); zero-shaped outside the support."""
        m = self.diff.get(r)
        if m is None:
            return SparseMatrix(self.dim(r + 1), self.dim(r))
        return m

    def top_differential(self, r=None):
        """The q-preserving part of the differential (merge/split with the
        a- and h-terms dropped)."""
        if self._top is None:
            self._top = self._differential(top=True)
        if r is None:
            return self._top
        m = self._top.get(r)
        if m is None:
            return SparseMatrix(self.dim(r + 1), self.dim(r))
        return m

    def q_grading(self, r, i):
        return self.qs[r][i]

    def q_values(self):
        vals = set()
        for r in self.degrees():
            vals.update(self.qs[r])
        return sorted(vals)

    def q_spread(self):
        vals = self.q_values()
        return (vals[-1] - vals[0]) if vals else 0

    def filtration_basis(self, k, r):
        """Indices of the standard basis vectors of degree r with q <= k."""
        return [i for i, q in enumerate(self.qs.get(r, ())) if q <= k]

    def circle_keys(self, v):
        return self._circles[v]

    def describe_basis(self, r, i):
        v, labels = self.basis[r][i]
        keys = self._circles[v]
        lab = {k: ("X" if (labels >> p) & 1 else "1") for p, k in enumerate(keys)}
        return {"vertex": v, "labels": lab, "q": self.qs[r][i]}

    def dump(self):
        """Debug listing: basis vectors with q, plus matrix triplets."""
        out = {"dims": {str(r): self.dim(r) for r in self.degrees()}, "basis": {}, "diff": {}}
        for r in self.degrees():
            out["basis"][str(r)] = [self.describe_basis(r, i) for i in range(self.dim(r))]
        for r in self.degrees():
            if r in self.diff:
                out["diff"][str(r)] = sorted(
                    [i, j, str(x)] for i, j, x in self.diff[r].entries()
                )
        return out


def build_complex(diagram, params, max_crossings=14) -> FilteredComplex:
    return FilteredComplex(diagram, params, max_crossings=max_crossings)
