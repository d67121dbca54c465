"""Exact Jacobi polynomials P_j^(alpha, beta) with rational parameters."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exactnum import RatPoly, as_fraction



def jacobi_poly(j: int, alpha=0, beta=0) -> RatPoly:
    """P_j^(alpha, beta)(x) by the three-term recurrence, in exact arithmetic.

    Normalised so that P_j(1) = binomial(j + alpha, j).
    """
    if j < 0:
        raise ValueError("degree must be non-negative")
    alpha, beta = as_fraction(alpha), as_fraction(beta)
    if alpha <= -1 or beta <= -1:
        raise ValueError("jacobi parameters must satisfy alpha, beta > -1")
    return _jacobi_list(j, alpha, beta)[j]


@lru_cache(maxsize=None)
def _jacobi_list(j: int, alpha: Fraction, beta: Fraction) -> tuple[RatPoly, ...]:
    # memoised by (degree, alpha, beta); the longest list seen so far is reused
    polys = [RatPoly([1])]
    if j >= 1:
        polys.append(RatPoly([(alpha - beta) / 2, (alpha + beta + 2) / 2]))
    s = alpha + beta
    for n in range(2, j + 1):
        c0 = 2 * n * (n + s) * (2 * n + s - 2)
        c1 = (2 * n + s - 1)
        lin = RatPoly([alpha * alpha - beta * beta, (2 * n + s) * (2 * n + s - 2)])
        c2 = 2 * (n + alpha - 1) * (n + beta - 1) * (2 * n + s)
        nxt = (lin * polys[-1]).scale(c1) - polys[-2].scale(c2)
        polys.append(nxt.scale(1 / Fraction(c0)))
    return tuple(polys)


@lru_cache(maxsize=None)
def jacobi_partial_sum(m: int, k: int) -> RatPoly:
    """sum_{j=0}^{m} P_j^(2k, 0)(x)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    polys = _jacobi_list(m, Fraction(2 * k), Fraction(0))
    out = RatPoly()
    for P in polys:
        out = out + P
    return out
