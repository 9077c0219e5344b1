"""Exact sparse linear algebra over the rationals.

Vectors are dicts {row index: Fraction} with no stored zeros; matrices are
column-major lists of such dicts.  Everything is computed by exact Gaussian
elimination -- no floating point enters this module.  Elimination order is
deterministic so that ranks, kernels and echelon bases are reproducible.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def vec_scale(v, c):
    c = Fraction(c)
    if c == 0:
        return {}
    return {i: c * x for i, x in v.items()}


def vec_addmul(acc, v, c):
    """acc += c*v in place; drops entries that cancel."""
    if c == 0:
        return acc
    for i, x in v.items():
        y = acc.get(i, ZERO) + c * x
        if y == 0:
            acc.pop(i, None)
        else:
            acc[i] = y
    return acc


def vec_copy(v):
    return dict(v)


class LinAlgError(ValueError):
    pass


class SparseMatrix:
    """Sparse rational matrix, stored as a list of column dicts."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows, ncols, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [dict() for _ in range(ncols)]
        self.cols = cols

    @classmethod
    def identity(cls, n):
        m = cls(n, n)
        for i in range(n):
            m.cols[i][i] = ONE
        return m

    @classmethod
    def from_rows(cls, rows):
        """Build from a dense list of row lists (ints / Fractions)."""
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        m = cls(nr, nc)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if x:
                    m.cols[j][i] = Fraction(x)
        return m

    def add(self, i, j, value):
        v = self.cols[j].get(i, ZERO) + Fraction(value)
        if v == 0:
            self.cols[j].pop(i, None)
        else:
            self.cols[j][i] = v

    def set(self, i, j, value):
        value = Fraction(value)
        if value == 0:
            self.cols[j].pop(i, None)
        else:
            self.cols[j][i] = value

    def get(self, i, j):
        return self.cols[j].get(i, ZERO)

    def entries(self):
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                yield i, j, x

    def nnz(self):
        return sum(len(c) for c in self.cols)

    def is_zero(self):
        return all(not c for c in self.cols)

    def apply(self, vec):
        """Matrix * vector, vector given as {col: coeff}."""
        out = {}
        for j, c in vec.items():
            vec_addmul(out, self.cols[j], c)
        return out

    def compose(self, other):
        """self o other (= self * other as matrices)."""
        if other.nrows != self.ncols:
            raise LinAlgError("dimension mismatch in compose")
        out = SparseMatrix(self.nrows, other.ncols)
        out.cols = [self.apply(c) for c in other.cols]
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.cols == other.cols
        )

    def scaled(self, c):
        out = SparseMatrix(self.nrows, self.ncols)
        out.cols = [vec_scale(col, c) for col in self.cols]
        return out

    def added(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise LinAlgError("dimension mismatch in added")
        out = SparseMatrix(self.nrows, self.ncols)
        out.cols = [vec_addmul(vec_copy(a), b, ONE) for a, b in zip(self.cols, other.cols)]
        return out

    def submatrix(self, row_pred, col_indices):
        """Columns restricted to col_indices, rows filtered by row_pred.

        Row indices are kept as in the parent (no renumbering): the result is
        only fed to rank-style computations which never mind gaps.
        """
        cols = []
        for j in col_indices:
            cols.append({i: x for i, x in self.cols[j].items() if row_pred(i)})
        out = SparseMatrix(self.nrows, len(cols))
        out.cols = cols
        return out

    # -- elimination-backed queries ------------------------------------

    def rank(self):
        return len(_echelon(self.cols))

    def kernel(self):
        """Subspace of column-coefficient vectors mapped to zero."""
        pivots = {}
        kernel_basis = []
        for j, col in enumerate(self.cols):
            work = vec_copy(col)
            combo = {j: ONE}
            _reduce_against(work, combo, pivots)
            if work:
                lead = max(work)
                inv = ONE / work[lead]
                pivots[lead] = (vec_scale(work, inv), vec_scale(combo, inv))
            else:
                kernel_basis.append(combo)
        return Subspace(self.ncols, kernel_basis)

    def image(self):
        """Column space as a Subspace of the target."""
        vecs = [vec_copy(c) for c in self.cols if c]
        return Subspace(self.nrows, vecs)

    def solve(self, rhs):
        """One solution x of self*x = rhs, or None when inconsistent."""
        pivots = {}
        order = []
        for j, col in enumerate(self.cols):
            work = vec_copy(col)
            combo = {j: ONE}
            _reduce_against(work, combo, pivots)
            if work:
                lead = max(work)
                inv = ONE / work[lead]
                pivots[lead] = (vec_scale(work, inv), vec_scale(combo, inv))
                order.append(lead)
        work = vec_copy(rhs)
        combo = {}
        _reduce_against(work, combo, pivots)
        if work:
            return None
        return {j: -c for j, c in combo.items() if c}


def _reduce_against(work, combo, pivots):
    """Reduce work (and its provenance combo) against pivot rows, in place."""
    while work:
        lead = max(work)
        hit = pivots.get(lead)
        if hit is None:
            return
        c = -work[lead]
        vec_addmul(work, hit[0], c)
        if combo is not None:
            vec_addmul(combo, hit[1], c)


def _echelon(columns):
    """Echelonize a list of column dicts; returns {pivot row: unit vector}."""
    pivots = {}
    for col in columns:
        work = vec_copy(col)
        _reduce_against(work, None, pivots)
        if work:
            lead = max(work)
            inv = ONE / work[lead]
            pivots[lead] = (vec_scale(work, inv), None)
    return pivots


class Subspace:
    """A subspace of an ambient coordinate space, kept as a staircase basis.

    Basis vectors have pairwise distinct leading (highest) indices and are
    normalized to a unit leading coefficient, which makes membership testing
    a straight reduction.
    """

    __slots__ = ("ambient", "basis", "_leads")

    def __init__(self, ambient, vectors=()):
        self.ambient = ambient
        self.basis = []
        self._leads = {}
        for v in vectors:
            self._insert(vec_copy(v))

    def _insert(self, work):
        while work:
            lead = max(work)
            hit = self._leads.get(lead)
            if hit is None:
                inv = ONE / work[lead]
                vec = vec_scale(work, inv)
                self._leads[lead] = vec
                self.basis.append(vec)
                return True
            vec_addmul(work, hit, -work[lead])
        return False

    @property
    def dim(self):
        return len(self.basis)

    def reduce(self, v):
        """Remainder of v after reduction against the basis."""
        work = vec_copy(v)
        while work:
            lead = max(work)
            hit = self._leads.get(lead)
            if hit is None:
                return work
            vec_addmul(work, hit, -work[lead])
        return work

    def member(self, v):
        return not self.reduce(v)

    def contains(self, other):
        return all(self.member(v) for v in other.basis)

    def sum(self, other):
        self._check(other)
        out = Subspace(self.ambient, self.basis)
        for v in other.basis:
            out._insert(vec_copy(v))
        return out

    def intersect(self, other):
        """Intersection, via the kernel of the stacked [U | V] system."""
        self._check(other)
        m = SparseMatrix(self.ambient, self.dim + other.dim)
        m.cols = [vec_copy(v) for v in self.basis] + [vec_copy(v) for v in other.basis]
        out = Subspace(self.ambient)
        for combo in m.kernel().basis:
            vec = {}
            for j, c in combo.items():
                if j < self.dim:
                    vec_addmul(vec, self.basis[j], c)
            out._insert(vec)
        return out

    def quotient_dim(self, sub):
        """dim(self / sub); raises unless sub is contained in self."""
        self._check(sub)
        if not self.contains(sub):
            raise LinAlgError("quotient_dim: the second space is not a subspace of the first")
        return self.dim - sub.dim

    def _check(self, other):
        if self.ambient != other.ambient:
            raise LinAlgError("ambient dimension mismatch")


def filtered_rank_profile(matrix, col_key, row_key):
    """Echelonize columns ordered by col_key, picking the highest-row_key pivot.

    Returns the list of (col_key, row_key-of-pivot) pairs, one per pivot, in
    processing order.  From it the rank of any submatrix "columns with key
    <= p, rows with key > t" is the number of pairs with col_key <= p and
    pivot row_key > t: processing columns in key order means prefixes of the
    column list have exactly the already-recorded pivots, and picking pivots
    at the highest row key makes the basis a staircase for row truncation.
    """
    order = sorted(range(matrix.ncols), key=lambda j: (col_key(j), j))
    pivots = {}
    profile = []
    for j in order:
        work = vec_copy(matrix.cols[j])
        while work:
            lead = max(work, key=lambda i: (row_key(i), -i))
            hit = pivots.get(lead)
            if hit is None:
                inv = ONE / work[lead]
                pivots[lead] = vec_scale(work, inv)
                profile.append((col_key(j), row_key(lead)))
                break
            vec_addmul(work, hit, -work[lead])
    return profile


class RankProfile:
    """Query helper over a filtered_rank_profile result."""

    def __init__(self, pairs, col_keys):
        self.pairs = sorted(pairs)
        self.col_keys = sorted(col_keys)

    def n_cols(self, p):
        """Number of columns with key <= p."""
        lo, hi = 0, len(self.col_keys)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.col_keys[mid] <= p:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def rank(self, p=None, t=None):
        """Rank of the submatrix (columns key <= p, rows key > t)."""
        n = 0
        for ck, rk in self.pairs:
            if p is not None and ck > p:
                break
            if t is None or rk > t:
                n += 1
        return n
