"""Truncated power series, logarithmic coefficients and the U-operator.

A :class:`PowerSeries` holds c_0..c_M and never claims anything past z^M;
binary operations truncate to the smaller order.  Coefficients are either
exact (int, Fraction, :class:`GaussRat`) or mpmath ``mpc``/``mpf``; the
algorithms only use field operations, so both modes share one code path.

For normalized f = z + a_2 z^2 + ... the logarithmic coefficients are
defined by log(f(z)/z) = 2 sum gamma_n z^n.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from . import constants as K
from .exactnum import frac_str, mpf_to_fraction
from .weights import (
    Geometric,
    GeomShift,
    InvTwoFactor,
    PowerLaw,
    RatQuadNum,
    Reciprocal,
    SquaredFactor,
    TwoFactorNum,
    WeightFamily,
)

PREC = 128


def _at_prec(fn):
    """Run float-mode coefficient arithmetic at the module precision."""

    @functools.wraps(fn)
    def wrapper(*args, **kw):
        with mpmath.workprec(PREC):
            return fn(*args, **kw)

    return wrapper


class GaussRat:
    """Exact complex rational re + i im."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _c(x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x, 0)
        return NotImplemented

    def __add__(self, o):
        o = GaussRat._c(o)
        if o is NotImplemented:
            return o
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, o):
        o = GaussRat._c(o)
        if o is NotImplemented:
            return o
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussRat._c(o) - self

    def __mul__(self, o):
        o = GaussRat._c(o)
        if o is NotImplemented:
            return o
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussRat._c(o)
        if o is NotImplemented:
            return o
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero")
        return GaussRat((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, o):
        return GaussRat._c(o) / self

    def __pow__(self, n: int):
        out, base = GaussRat(1), self
        if n < 0:
            base, n = 1 / base, -n
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, o):
        o = GaussRat._c(o)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"


def abs2(x):
    """|x|^2 for any supported coefficient type."""
    if isinstance(x, GaussRat):
        return x.abs2()
    if isinstance(x, (int, Fraction)):
        return Fraction(x) * x
    if isinstance(x, mpmath.mpc):
        return x.real**2 + x.imag**2
    return x * x


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussRat))


def _parts(x) -> tuple:
    if isinstance(x, GaussRat):
        return x.re, x.im
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(0)
    c = mpmath.mpc(x)
    return mpf_to_fraction(c.real), mpf_to_fraction(c.imag)


class PowerSeries:
    """c_0 + c_1 z + ... + c_M z^M + O(z^(M+1))."""

    __slots__ = ("c", "order")

    def __init__(self, coeffs: Sequence, order: int | None = None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        coeffs = coeffs[: order + 1] + [0] * (order + 1 - len(coeffs))
        self.c = tuple(Fraction(x) if isinstance(x, int) else x for x in coeffs)
        self.order = order

    @classmethod
    def identity(cls, order: int) -> "PowerSeries":
        return cls([0, 1], order)

    @property
    def exact(self) -> bool:
        return all(_is_exact(x) for x in self.c)

    def __getitem__(self, n: int):
        if not 0 <= n <= self.order:
            raise IndexError(f"coefficient {n} beyond order {self.order}")
        return self.c[n]

    def __len__(self):
        return self.order + 1

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.c, order)

    def __eq__(self, o):
        return isinstance(o, PowerSeries) and self.order == o.order and self.c == o.c

    @_at_prec
    def __add__(self, o):
        o = _as_series(o, self.order)
        m = min(self.order, o.order)
        return PowerSeries([self.c[i] + o.c[i] for i in range(m + 1)], m)

    __radd__ = __add__

    @_at_prec
    def __neg__(self):
        return PowerSeries([-x for x in self.c], self.order)

    def __sub__(self, o):
        return self + (-_as_series(o, self.order))

    def __rsub__(self, o):
        return _as_series(o, self.order) - self

    @_at_prec
    def __mul__(self, o):
        if not isinstance(o, PowerSeries):
            return PowerSeries([x * o for x in self.c], self.order)
        m = min(self.order, o.order)
        out = []
        for n in range(m + 1):
            s = 0
            for i in range(n + 1):
                a = self.c[i]
                if a != 0:
                    s = s + a * o.c[n - i]
            out.append(s)
        return PowerSeries(out, m)

    def __rmul__(self, o):
        return self * o

    @_at_prec
    def __truediv__(self, o):
        if isinstance(o, PowerSeries):
            return self * o.inverse()
        return PowerSeries([x / o for x in self.c], self.order)

    def shift_up(self, k: int = 1) -> "PowerSeries":
        """z^k * self."""
        return PowerSeries([0] * k + list(self.c), self.order + k)

    def shift_down(self, k: int = 1) -> "PowerSeries":
        """self / z^k; the first k coefficients must vanish."""
        if any(self.c[i] != 0 for i in range(min(k, len(self.c)))):
            raise ValueError("series is not divisible by z^k")
        if self.order < k:
            raise ValueError("order too small to divide by z^k")
        return PowerSeries(self.c[k:], self.order - k)

    @_at_prec
    def derivative(self) -> "PowerSeries":
        if self.order == 0:
            raise ValueError("derivative of an order-0 series carries no information")
        return PowerSeries([n * self.c[n] for n in range(1, self.order + 1)], self.order - 1)

    @_at_prec
    def integrate(self) -> "PowerSeries":
        """Antiderivative with zero constant term."""
        return PowerSeries([0] + [self.c[n] / (n + 1) if _is_exact(self.c[n]) else self.c[n] / (n + 1)
                                  for n in range(self.order + 1)], self.order + 1)

    @_at_prec
    def inverse(self) -> "PowerSeries":
        """1/self, requires c_0 != 0."""
        c0 = self.c[0]
        if c0 == 0:
            raise ZeroDivisionError("constant term is zero; series is not invertible")
        inv0 = 1 / Fraction(c0) if isinstance(c0, int) else 1 / c0
        out = [inv0]
        for n in range(1, self.order + 1):
            s = 0
            for i in range(1, n + 1):
                if self.c[i] != 0:
                    s = s + self.c[i] * out[n - i]
            out.append(-s * inv0)
        return PowerSeries(out, self.order)

    @_at_prec
    def log(self) -> "PowerSeries":
        """log(self) for c_0 = 1, via (log g)' = g'/g."""
        if self.c[0] != 1:
            raise ValueError("log needs constant term 1")
        L = [0] * (self.order + 1)
        for n in range(1, self.order + 1):
            s = n * self.c[n]
            for k in range(1, n):
                if L[k] != 0 and self.c[n - k] != 0:
                    s = s - k * L[k] * self.c[n - k]
            L[n] = _div(s, n)
        return PowerSeries(L, self.order)

    @_at_prec
    def exp(self) -> "PowerSeries":
        """exp(self) for c_0 = 0."""
        if self.c[0] != 0:
            raise ValueError("exp needs constant term 0")
        E = [Fraction(1)] + [0] * self.order
        for n in range(1, self.order + 1):
            s = 0
            for k in range(1, n + 1):
                if self.c[k] != 0:
                    s = s + k * self.c[k] * E[n - k]
            E[n] = _div(s, n)
        return PowerSeries(E, self.order)

    @_at_prec
    def evaluate(self, z):
        """Horner evaluation of the stored polynomial part."""
        out = 0
        for x in reversed(self.c):
            out = out * z + (_to_mpc(x) if not isinstance(z, (int, Fraction, GaussRat)) else x)
        return out

    def to_json(self) -> str:
        return json.dumps({"order": self.order,
                           "coeffs": [[frac_str(a), frac_str(b)] for a, b in map(_parts, self.c)]})

    @classmethod
    def from_json(cls, text: str) -> "PowerSeries":
        d = json.loads(text)
        cs = []
        for re, im in d["coeffs"]:
            re, im = Fraction(re), Fraction(im)
            cs.append(re if im == 0 else GaussRat(re, im))
        return cls(cs, d["order"])

    def __repr__(self):
        return f"PowerSeries({list(self.c)!r}, order={self.order})"


def _div(s, n: int):
    if isinstance(s, int):
        return Fraction(s, n)
    return s / n


def _to_mpc(x):
    if isinstance(x, GaussRat):
        return mpmath.mpc(mpmath.mpf(x.re.numerator) / x.re.denominator,
                          mpmath.mpf(x.im.numerator) / x.im.denominator)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return x


def _as_series(o, order: int) -> PowerSeries:
    if isinstance(o, PowerSeries):
        return o
    return PowerSeries([o], order)


def _require_normalized(f: PowerSeries):
    if f.order < 1 or f.c[0] != 0 or f.c[1] != 1:
        raise ValueError("series must be normalized: c_0 = 0, c_1 = 1")


def koebe(M: int, rotation=None, theta=None) -> PowerSeries:
    """z/(1 - w z)^2 with |w| = 1, carrying enough terms for gamma_1..gamma_M.

    ``rotation`` is an exact unit-modulus GaussRat (e.g. 3/5 + 4i/5);
    ``theta`` gives w = e^{i theta} in mpc mode.  Default w = 1.
    """
    if rotation is not None and theta is not None:
        raise ValueError("give rotation or theta, not both")
    if theta is not None:
        with mpmath.workprec(PREC):
            w = mpmath.expjpi(mpmath.mpf(theta) / mpmath.pi)
            return PowerSeries([0] + [n * w ** (n - 1) for n in range(1, M + 2)], M + 1)
    w = Fraction(1) if rotation is None else rotation
    if isinstance(w, GaussRat) and w.abs2() != 1:
        raise ValueError("rotation must have modulus 1")
    return PowerSeries([0] + [n * w ** (n - 1) for n in range(1, M + 2)], M + 1)


# ---------------------------------------------------------------------------
# logarithmic coefficients


@dataclass(frozen=True)
class LogCoeffs:
    """gamma_1..gamma_M; index with 1-based ``g[n]``."""

    values: tuple

    @property
    def M(self) -> int:
        return len(self.values)

    @property
    def exact(self) -> bool:
        return all(_is_exact(x) for x in self.values)

    def __getitem__(self, n: int):
        if not 1 <= n <= self.M:
            raise IndexError(f"gamma_{n} outside 1..{self.M}")
        return self.values[n - 1]

    def to_series(self) -> PowerSeries:
        """2 sum gamma_n z^n as a series of order M."""
        return PowerSeries([0] + [2 * g for g in self.values], self.M)


@_at_prec
def log_coefficients(f: PowerSeries) -> LogCoeffs:
    """gamma_1..gamma_{M-1} for f of order M."""
    _require_normalized(f)
    L = f.shift_down().log()
    return LogCoeffs(tuple(_div(x, 2) if _is_exact(x) else x / 2 for x in L.c[1:]))


@_at_prec
def reconstruct(gamma: LogCoeffs) -> PowerSeries:
    """f = z exp(2 sum gamma_n z^n)."""
    return gamma.to_series().exp().shift_up()


@dataclass(frozen=True)
class LMCheck:
    n: int
    lhs: object
    rhs: Fraction
    slack: object


@_at_prec
def lebedev_milin_check(gamma: LogCoeffs, n: int) -> LMCheck:
    """sum_k k(n-k+1)|gamma_k|^2 against sum_k (n-k+1)/k."""
    if not 1 <= n <= gamma.M:
        raise ValueError(f"n must lie in 1..{gamma.M}")
    lhs = sum((k * (n - k + 1) * abs2(gamma[k]) for k in range(1, n + 1)), Fraction(0))
    rhs = sum((Fraction(n - k + 1, k) for k in range(1, n + 1)), Fraction(0))
    return LMCheck(n, lhs, rhs, rhs - lhs)


@dataclass(frozen=True)
class WeightedCheck:
    family: str
    M: int
    lhs_terms: tuple
    rhs_terms: tuple
    rhs_infinite: K.HPReal | None

    @property
    def lhs_partial(self):
        return sum(self.lhs_terms, Fraction(0))

    @property
    def rhs_partial(self):
        return sum(self.rhs_terms, Fraction(0))

    @property
    def termwise_equal(self) -> bool:
        return all(a == b for a, b in zip(self.lhs_terms, self.rhs_terms))


def infinite_rhs(family: WeightFamily) -> K.HPReal | None:
    """sum_n p_n / n in closed form, when one is known."""
    f = family
    if isinstance(f, Reciprocal):
        return K.A(f.alpha)
    if isinstance(f, RatQuadNum) and f.a == 0:
        return K.A(0) if f.b == 0 else (K.B(K.sqrt_rational(f.b)) if f.b > 0 else None)
    if isinstance(f, TwoFactorNum):
        return K.C(f.alpha, f.beta)
    if isinstance(f, InvTwoFactor):
        return K.D(f.alpha, f.beta)
    if isinstance(f, SquaredFactor):
        if f.alpha == 0:
            return K.A(f.beta)
        if f.beta == 0:
            return K.C(f.alpha, f.alpha)
        return K.E(f.alpha, f.beta)
    if isinstance(f, Geometric):
        return -K.log(1 - K.HPReal.exact(f.r) * f.r)
    if isinstance(f, GeomShift):
        r = K.HPReal.exact(f.r)
        return r / (1 - r) - K.log(1 - r) * f.alpha
    if isinstance(f, PowerLaw):
        return K.zeta(K.HPReal(f.alpha, mpmath.mpf(0)) + 1)
    return None


@_at_prec
def weighted_check(family: WeightFamily, gamma: LogCoeffs, M: int) -> WeightedCheck:
    """Partial sums to M of sum n p_n |gamma_n|^2 and sum p_n / n."""
    if not 1 <= M <= gamma.M:
        raise ValueError(f"M must lie in 1..{gamma.M}")
    ps = [family.p(n) for n in range(1, M + 1)]
    lhs = tuple(n * p * abs2(gamma[n]) for n, p in zip(range(1, M + 1), ps))
    rhs = tuple(p / n for n, p in zip(range(1, M + 1), ps))
    return WeightedCheck(family.spec(), M, lhs, rhs, infinite_rhs(family))


# ---------------------------------------------------------------------------
# transforms


@_at_prec
def transform_hf(f: PowerSeries, route: str = "gamma") -> PowerSeries:
    """h_f = integral of 1 + t (log f(t)/t)' = integral of t f'(t)/f(t).

    route "gamma": z + 2 sum_{n>=2} ((n-1)/n) gamma_{n-1} z^n.
    route "integral": divide z f'/f as series and integrate.
    """
    _require_normalized(f)
    if route == "gamma":
        g = log_coefficients(f)
        cs = [0, 1] + [2 * _div((n - 1) * g[n - 1], n) if _is_exact(g[n - 1]) else 2 * (n - 1) * g[n - 1] / n
                       for n in range(2, g.M + 2)]
        return PowerSeries(cs, g.M + 1)
    if route == "integral":
        q = f.derivative() * f.shift_down().inverse()  # f'/(f/z) = z f'/f
        return q.integrate()
    raise ValueError(f"unknown route {route!r}")


@_at_prec
def transform_H(f: PowerSeries) -> PowerSeries:
    """H = z^2 / h_f."""
    h = transform_hf(f)
    return h.shift_down().inverse().shift_up()


@_at_prec
def transform_pf(f: PowerSeries) -> PowerSeries:
    """P_f = f / f'."""
    _require_normalized(f)
    return (f.shift_down() * f.derivative().inverse()).shift_up()


@_at_prec
def u_operator(F: PowerSeries) -> PowerSeries:
    """U_F = F'(z) (z/F(z))^2 - 1."""
    _require_normalized(F)
    w = F.shift_down().inverse()
    return F.derivative() * w * w - 1


@_at_prec
def u_h_from_gamma(gamma: LogCoeffs, order: int) -> PowerSeries:
    """-2 sum_{n>=2} (n-1) n/(n+1) gamma_n z^n."""
    cs = [0, 0] + [-2 * _div((n - 1) * n * gamma[n], n + 1) if _is_exact(gamma[n])
                   else -2 * (n - 1) * n * gamma[n] / (n + 1) for n in range(2, order + 1)]
    return PowerSeries(cs, order)


@_at_prec
def u_pf_from_gamma(gamma: LogCoeffs, order: int) -> PowerSeries:
    """-2 sum_{n>=1} n (n-1) gamma_n z^n."""
    cs = [0] + [-2 * n * (n - 1) * gamma[n] for n in range(1, order + 1)]
    return PowerSeries(cs, order)


# ---------------------------------------------------------------------------
# closed forms of the majorant series


BETA = Fraction(1, 20)


def _term(kind: str, n: int, r2, alpha=0):
    if kind == "h_majorant":
        return mpmath.mpf((n - 1) ** 2) * (n + mpmath.mpf(1) / 20) / n * r2**n
    if kind == "pf_majorant":
        return mpmath.mpf((n - 1) ** 2) * (n * n + mpmath.mpf(4) / 3) * r2**n
    return (n + alpha) / mpmath.mpf(n) * r2**n


def series_sum(kind: str, r, alpha=0, terms: int | None = None):
    """Direct summation; n starts at 2 for the two majorants, at 1 for geom_shift_sum."""
    with mpmath.workprec(PREC):
        r2 = mpmath.mpf(r) ** 2
        alpha = mpmath.mpf(alpha)
        if terms is None:
            # r2^n n^4 < 2^-PREC
            terms = int((PREC * math.log(2) + 40) / -math.log(float(r2))) + 50
        start = 1 if kind == "geom_shift_sum" else 2
        return mpmath.fsum(_term(kind, n, r2, alpha) for n in range(start, terms))


def closed_form(kind: str, r, alpha=0):
    with mpmath.workprec(PREC):
        r = mpmath.mpf(r)
        r2 = r * r
        if kind == "h_majorant":
            return (-r2 + 23 * r2**2 + 18 * r2**3) / (20 * (1 - r2) ** 3) - mpmath.log(1 - r2) / 20
        if kind == "pf_majorant":
            return 4 * r2**2 * (r2**3 + 2 * r2**2 + 11 * r2 + 4) / (3 * (1 - r2) ** 5)
        if kind == "geom_shift_sum":
            return r2 / (1 - r2) + mpmath.mpf(alpha) * mpmath.log(1 / (1 - r2))
    raise ValueError(f"unknown series {kind!r}")


@dataclass(frozen=True)
class ClosedFormCheck:
    kind: str
    ok: bool
    max_deviation: float
    rows: tuple  # (r, direct, closed)

    def __bool__(self):
        return self.ok


RADII = (0.1, 0.3, 0.5, 0.7)
SERIES_IDS = ("h_majorant", "pf_majorant", "geom_shift_sum")


def series_closed_form_check(kind: str, radii=RADII, tol=1e-10, alpha=Fraction(1, 2)) -> ClosedFormCheck:
    if kind not in SERIES_IDS:
        raise ValueError(f"unknown series {kind!r}")
    rows, dev = [], 0.0
    a = alpha.numerator / alpha.denominator if isinstance(alpha, Fraction) else alpha
    for r in radii:
        d = series_sum(kind, r, a)
        c = closed_form(kind, r, a)
        dev = max(dev, float(abs(d - c)))
        rows.append((r, d, c))
    return ClosedFormCheck(kind, dev <= tol, dev, tuple(rows))


def cauchy_schwarz_chain(gamma: LogCoeffs, r, M: int | None = None) -> tuple:
    """(2 sum_{n=2}^M (n-1)n/(n+1)|gamma_n| r^n,  2 sqrt(E - 5|gamma_1|^2/84) sqrt(S(r))).

    S is the closed form of sum_{n>=2} (n-1)^2 (n+1/20) r^{2n} / n.
    """
    M = gamma.M if M is None else M
    E = K.E_twentieth()
    with mpmath.workprec(PREC):
        r = mpmath.mpf(r)
        lhs = 2 * mpmath.fsum((n - 1) * n / mpmath.mpf(n + 1) * mpmath.sqrt(_to_mpc(abs2(gamma[n]))) * r**n
                              for n in range(2, M + 1))
        g1 = _to_mpc(abs2(gamma[1]))
        rhs = 2 * mpmath.sqrt(E.mid - 5 * g1 / 84) * mpmath.sqrt(closed_form("h_majorant", r))
        return lhs, rhs
