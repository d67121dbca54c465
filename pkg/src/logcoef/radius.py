"""Radii of the class U for the transforms H and P_f, as functions of b = |a_2|.

Each radius is the unique root in (0, 1) of a monotone equation:

    r1:  (2 pi^2/3 - 4 - b^2/4) r^4 (1 + r^2) = (1 - r^2)^3
    r2:  log 1/(1-r^2) + (-r^2 + 23 r^4 + 18 r^6)/(1-r^2)^3 = 20/(4 E - 5 b^2/84)
    r3:  (2 pi^2/3 - 4 - b^2/4) r^4 (r^6 - 5 r^4 + 19 r^2 + 9) = (1 - r^2)^5
    r4:  (4 B - 3 b^2/7) r^4 (r^6 + 2 r^4 + 11 r^2 + 4) = (3/4)(1 - r^2)^5

with E = E_{1,1/20} and B = B_{2/sqrt 3} taken from :mod:`constants`.
The equations are solved as written, by bisection.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from . import constants as K
from .certifier import b0_bracket
from .exactnum import RatPoly, count_real_roots

PREC = 128
IDS = ("r1", "r2", "r3", "r4")
MAX_ITER = 60
TOL = mpmath.mpf(2) ** -40  # bracket width; ~9e-13


def _mp(x) -> mpmath.mpf:
    if isinstance(x, K.HPReal):
        return x.mid
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def prefactor(rid: str, b) -> mpmath.mpf:
    """The b-dependent constant of each equation (must be positive)."""
    with mpmath.workprec(PREC):
        b = _mp(b)
        if rid in ("r1", "r3"):
            return 2 * mpmath.pi**2 / 3 - 4 - b**2 / 4
        if rid == "r2":
            return 4 * K.E_twentieth().mid - 5 * b**2 / 84
        if rid == "r4":
            return 4 * K.B_four_thirds().mid - 3 * b**2 / 7
    raise ValueError(f"unknown radius id {rid!r}")


def residual_fn(rid: str, b) -> Callable[[mpmath.mpf], mpmath.mpf]:
    """g(r) with g < 0 left of the root and g > 0 right of it."""
    P = prefactor(rid, b)
    if P <= 0:
        raise ValueError(f"prefactor of {rid} is not positive at b={b}")

    if rid == "r1":
        return lambda r: P * r**4 * (1 + r**2) - (1 - r**2) ** 3
    if rid == "r2":
        rhs = 20 / P
        return lambda r: (-mpmath.log(1 - r**2) + (-r**2 + 23 * r**4 + 18 * r**6) / (1 - r**2) ** 3) - rhs
    if rid == "r3":
        return lambda r: P * r**4 * (r**6 - 5 * r**4 + 19 * r**2 + 9) - (1 - r**2) ** 5
    return lambda r: P * r**4 * (r**6 + 2 * r**4 + 11 * r**2 + 4) - mpmath.mpf(3) / 4 * (1 - r**2) ** 5


@dataclass(frozen=True)
class RadiusSolution:
    rid: str
    b: object
    r: K.HPReal
    iterations: int
    residual: mpmath.mpf

    def __float__(self):
        return float(self.r.mid)


def solve_radius(rid: str, b) -> RadiusSolution:
    """Bisection on (0, 1) after checking the bracket changes sign."""
    if rid not in IDS:
        raise ValueError(f"unknown radius id {rid!r}")
    with mpmath.workprec(PREC):
        bb = _mp(b)
        if not 0 <= bb <= 2:
            raise ValueError("b must lie in [0, 2]")
        g = residual_fn(rid, b)
        lo, hi = mpmath.mpf(0), 1 - mpmath.mpf(2) ** -60
        if not (g(lo) < 0 < g(hi)):
            raise ArithmeticError(f"{rid}: no sign change on the bracket")
        it = 0
        while hi - lo > TOL:
            if it >= MAX_ITER:
                raise ArithmeticError(f"{rid}: bisection did not converge")
            mid = (lo + hi) / 2
            if g(mid) < 0:
                lo = mid
            else:
                hi = mid
            it += 1
        mid = (lo + hi) / 2
        return RadiusSolution(rid, b, K.HPReal(mid, (hi - lo) / 2), it, g(mid))


COLUMNS = ("b", "r1", "r2", "r2_minus_r1", "r3", "r4", "r4_minus_r3")


def default_grid(points: int = 21) -> list[Fraction]:
    return [Fraction(2 * i, points - 1) for i in range(points)]


def radius_table(b_grid: Sequence | None = None) -> list[dict]:
    """One row per b with all four radii and the two improvement columns."""
    rows = []
    for b in (default_grid() if b_grid is None else b_grid):
        r = {rid: float(solve_radius(rid, b)) for rid in IDS}
        bf = float(_mp(b))
        rows.append({
            "b": bf,
            "r1": r["r1"], "r2": r["r2"], "r2_minus_r1": r["r2"] - r["r1"],
            "r3": r["r3"], "r4": r["r4"], "r4_minus_r3": r["r4"] - r["r3"],
        })
    return rows


def radius_curve(rid: str, b_grid: Sequence) -> list[tuple[float, float]]:
    return [(float(_mp(b)), float(solve_radius(rid, b))) for b in b_grid]


def to_csv(rows: list[dict], columns: Sequence[str] = COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _fmt(x) -> str:
    return f"{x:.12f}" if isinstance(x, float) else str(x)


def nondecreasing(values: Sequence[float]) -> bool:
    return all(b >= a for a, b in zip(values, values[1:]))


CUBIC = RatPoly([440, -317, -40, -3])


@dataclass(frozen=True)
class B0:
    value: K.HPReal
    bracket: tuple[Fraction, Fraction]
    real_roots: int

    def __float__(self):
        return float(self.value.mid)


def solve_b0(tol=Fraction(1, 10**12)) -> B0:
    """Unique real root of 440 - 317 b - 40 b^2 - 3 b^3, by exact bisection on [1, 2]."""
    n = count_real_roots(CUBIC, -math.inf, math.inf)
    if n != 1:
        raise AssertionError(f"expected one real root, found {n}")
    lo, hi = b0_bracket(tol)
    with mpmath.workprec(PREC):
        mid = (lo + hi) / 2
        val = K.HPReal(mpmath.mpf(mid.numerator) / mid.denominator, mpmath.mpf((hi - lo).numerator) / (hi - lo).denominator)
    return B0(val, (lo, hi), n)
