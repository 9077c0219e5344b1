"""The rank-two Frobenius algebra A = Q[X]/(X^2 - h*X - a) at exact parameters.

Elements are written over the basis {1, X} with deg(1) = -1, deg(X) = +1.
The parameters must split rationally: X^2 - h*X - a = (X - alpha)(X - beta)
with alpha != beta, i.e. h^2 + 4a must be the square of a nonzero rational.
The orthogonal idempotents z1 = (X - alpha)/(beta - alpha) and
z2 = (X - beta)/(alpha - beta) diagonalize every structure map.

Structure maps on basis elements:

    m(1 (x) 1) = 1        m(1 (x) X) = m(X (x) 1) = X     m(X (x) X) = h*X + a
    comult(1) = 1 (x) X + X (x) 1 - h * 1 (x) 1
    comult(X) = X (x) X + a * 1 (x) 1
    counit(1) = 0, counit(X) = 1, unit(1) = 1

The "top" variants drop the a- and h-terms; they are the degree-preserving
parts of m and comult and build the classical Khovanov differential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class ParameterError(ValueError):
    pass


def _rational_sqrt(x: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Fraction(rn, rd)


@dataclass(frozen=True)
class FrobeniusParams:
    """Exact parameters (a, h) together with the roots alpha > beta."""

    a: Fraction
    h: Fraction
    alpha: Fraction
    beta: Fraction

    @classmethod
    def from_ah(cls, a, h):
        a, h = Fraction(a), Fraction(h)
        disc = h * h + 4 * a
        if disc == 0:
            raise ParameterError(
                "h^2 + 4a = 0: the quadratic X^2 - hX - a has a repeated root"
            )
        s = _rational_sqrt(disc)
        if s is None:
            raise ParameterError(
                "h^2 + 4a = %s is not the square of a rational; this calculator "
                "works in exact rational arithmetic and needs rational roots" % disc
            )
        alpha = (h + s) / 2
        beta = (h - s) / 2
        return cls(a=a, h=h, alpha=alpha, beta=beta)

    @classmethod
    def from_roots(cls, alpha, beta):
        alpha, beta = Fraction(alpha), Fraction(beta)
        if alpha == beta:
            raise ParameterError("roots must be distinct")
        if alpha < beta:
            alpha, beta = beta, alpha
        return cls(a=-alpha * beta, h=alpha + beta, alpha=alpha, beta=beta)

    def label(self):
        for name, p in PRESETS.items():
            if (p.a, p.h) == (self.a, self.h):
                return name
        return "a:%s,h:%s" % (self.a, self.h)


PRESETS = {
    "lee": FrobeniusParams.from_ah(1, 0),        # roots +1, -1
    "bar-natan": FrobeniusParams.from_ah(0, 1),  # roots 1, 0
}


@dataclass(frozen=True)
class AlgebraElement:
    """Element c1*1 + cX*X of A."""

    c1: Fraction
    cX: Fraction

    def __add__(self, other):
        return AlgebraElement(self.c1 + other.c1, self.cX + other.cX)

    def __sub__(self, other):
        return AlgebraElement(self.c1 - other.c1, self.cX - other.cX)

    def __rmul__(self, scalar):
        scalar = Fraction(scalar)
        return AlgebraElement(scalar * self.c1, scalar * self.cX)

    def is_zero(self):
        return self.c1 == 0 and self.cX == 0

    def coeffs(self):
        return (self.c1, self.cX)


E_ONE = AlgebraElement(Fraction(1), Fraction(0))
E_X = AlgebraElement(Fraction(0), Fraction(1))


def unit():
    return E_ONE


def counit(u: AlgebraElement):
    return u.cX


def mult(p: FrobeniusParams, u: AlgebraElement, v: AlgebraElement):
    """m(u (x) v), bilinear over the 4 basis products."""
    c1 = u.c1 * v.c1 + p.a * u.cX * v.cX
    cX = u.c1 * v.cX + u.cX * v.c1 + p.h * u.cX * v.cX
    return AlgebraElement(c1, cX)


def comult(p: FrobeniusParams, u: AlgebraElement):
    """comult(u) as a dict {(i, j): coeff} over the basis of A (x) A, 0=1, 1=X."""
    out = {}
    if u.c1:
        out[(0, 1)] = u.c1
        out[(1, 0)] = u.c1
        if p.h:
            out[(0, 0)] = -p.h * u.c1
    if u.cX:
        out[(1, 1)] = u.cX
        if p.a:
            out[(0, 0)] = out.get((0, 0), Fraction(0)) + p.a * u.cX
    return {k: v for k, v in out.items() if v}


def khovanov_top_mult(u: AlgebraElement, v: AlgebraElement):
    """The degree-preserving part of m: kills X (x) X."""
    return AlgebraElement(u.c1 * v.c1, u.c1 * v.cX + u.cX * v.c1)


def khovanov_top_comult(u: AlgebraElement):
    """The degree-preserving part of comult."""
    out = {}
    if u.c1:
        out[(0, 1)] = u.c1
        out[(1, 0)] = u.c1
    if u.cX:
        out[(1, 1)] = u.cX
    return out


def idempotents(p: FrobeniusParams):
    """(z1, z2) with z1 = (X - alpha)/(beta - alpha), z2 = (X - beta)/(alpha - beta)."""
    d = p.beta - p.alpha
    z1 = AlgebraElement(-p.alpha / d, Fraction(1) / d)
    z2 = AlgebraElement(p.beta / d, -Fraction(1) / d)
    return z1, z2


def to_idempotent_basis(p: FrobeniusParams, u: AlgebraElement):
    """Coefficients (c_z1, c_z2) with u = c_z1*z1 + c_z2*z2."""
    # z1 + z2 = 1 and beta*z1 + alpha*z2 = X give the inverse change of basis.
    return (u.c1 + p.beta * u.cX, u.c1 + p.alpha * u.cX)


def from_idempotent_basis(p: FrobeniusParams, cz1, cz2):
    z1, z2 = idempotents(p)
    return Fraction(cz1) * z1 + Fraction(cz2) * z2


def deg(u: AlgebraElement):
    """Top degree of a nonzero element: deg(1) = -1, deg(X) = +1."""
    if u.cX:
        return 1
    if u.c1:
        return -1
    raise ValueError("degree of the zero element is undefined")


# -- raw coefficient tables used by the complex builder --------------------
#
# Basis indices: 0 = "1", 1 = "X".  merge_table maps a pair of input indices
# to a list of (output index, coefficient); split_table maps an input index
# to a list of ((output index, output index), coefficient).

def merge_table(p: FrobeniusParams, top=False):
    table = {
        (0, 0): [(0, Fraction(1))],
        (0, 1): [(1, Fraction(1))],
        (1, 0): [(1, Fraction(1))],
        (1, 1): [],
    }
    if not top:
        if p.h:
            table[(1, 1)].append((1, p.h))
        if p.a:
            table[(1, 1)].append((0, p.a))
    return table


def split_table(p: FrobeniusParams, top=False):
    table = {
        0: [((0, 1), Fraction(1)), ((1, 0), Fraction(1))],
        1: [((1, 1), Fraction(1))],
    }
    if not top:
        if p.h:
            table[0].append(((0, 0), -p.h))
        if p.a:
            table[1].append(((0, 0), p.a))
    return table
