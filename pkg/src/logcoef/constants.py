"""High-precision special functions and the sharp constants A, B, C, D, E.

Values are :class:`HPReal`: an mpmath midpoint plus an absolute error
bound that is pushed outward through every arithmetic step.  Digamma and
its derivatives use upward recurrence followed by the asymptotic
(Stirling-type) series, whose truncation error is bounded by the first
omitted term for real arguments.  Zeta uses Euler-Maclaurin summation.

The constants are the sums sum_n p_n / n for the standard weight shapes:

    A_a     = sum 1/(n(n+a))             = (psi(1+a) - psi(1)) / a
    B_a     = sum 1/(n^2+a^2)            = (pi a coth(pi a) - 1) / (2a^2)
    C_{a,b} = sum 1/((n+a)(n+b))         = (psi(1+b) - psi(1+a)) / (b - a)
    D_{a,b} = sum 1/(n(n+a)(n+b))        = (A_a - A_b) / (b - a)
    E_{a,b} = sum n/((n+a)^2(n+b))       = (b C_{a,b} - a C_{a,a}) / (b - a)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

PREC = 320  # working bits; certified targets are far below 2^-PREC
ULP = mpmath.mpf(2) ** (-PREC + 4)
NEAR = mpmath.mpf("1e-8")  # switch to Taylor branches below this separation


@dataclass(frozen=True)
class HPReal:
    """Midpoint ``mid`` with |true value - mid| <= ``err``."""

    mid: mpmath.mpf
    err: mpmath.mpf

    @classmethod
    def exact(cls, x) -> "HPReal":
        with mpmath.workprec(PREC):
            if isinstance(x, Fraction):
                m = mpmath.mpf(x.numerator) / x.denominator
                e = abs(m) * ULP if x.denominator & (x.denominator - 1) else mpmath.mpf(0)
                return cls(m, e)
            if isinstance(x, str) and "/" in x:
                return cls.exact(Fraction(x))
            m = mpmath.mpf(x)
            return cls(m, mpmath.mpf(0) if isinstance(x, (int, float)) else abs(m) * ULP)

    def _round(self, m, e) -> "HPReal":
        return HPReal(m, e + abs(m) * ULP)

    def __add__(self, o):
        o = _hp(o)
        with mpmath.workprec(PREC):
            return self._round(self.mid + o.mid, self.err + o.err)

    __radd__ = __add__

    def __neg__(self):
        with mpmath.workprec(PREC):
            return HPReal(-self.mid, self.err)

    def __sub__(self, o):
        return self + (-_hp(o))

    def __rsub__(self, o):
        return _hp(o) - self

    def __mul__(self, o):
        o = _hp(o)
        with mpmath.workprec(PREC):
            e = abs(self.mid) * o.err + abs(o.mid) * self.err + self.err * o.err
            return self._round(self.mid * o.mid, e)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _hp(o)
        with mpmath.workprec(PREC):
            lo = abs(o.mid) - o.err
            if lo <= 0:
                raise ZeroDivisionError("divisor interval contains zero")
            q = self.mid / o.mid
            e = (self.err + abs(q) * o.err) / lo
            return self._round(q, e)

    def __rtruediv__(self, o):
        return _hp(o) / self

    def __float__(self):
        return float(self.mid)

    def contains(self, x, slack=0) -> bool:
        with mpmath.workprec(PREC):
            return abs(self.mid - _hp(x).mid) <= self.err + _hp(x).err + slack

    def __repr__(self):
        return f"HPReal({mpmath.nstr(self.mid, 40)} +- {mpmath.nstr(self.err, 3)})"

    def __str__(self):
        return mpmath.nstr(self.mid, 30)


def _hp(x) -> HPReal:
    return x if isinstance(x, HPReal) else HPReal.exact(x)


def _pi() -> HPReal:
    with mpmath.workprec(PREC):
        return HPReal(+mpmath.pi, ULP * 4)


def _mpfunc(f, x: HPReal, deriv_bound) -> HPReal:
    """Apply an mpmath elementary function, propagating err via a derivative bound."""
    with mpmath.workprec(PREC):
        y = f(x.mid)
        return HPReal(y, abs(y) * ULP * 4 + deriv_bound * x.err)


def log(x) -> HPReal:
    x = _hp(x)
    with mpmath.workprec(PREC):
        if x.mid - x.err <= 0:
            raise ValueError("log of a non-positive interval")
        return _mpfunc(mpmath.log, x, 1 / (x.mid - x.err))


def exp(x) -> HPReal:
    x = _hp(x)
    with mpmath.workprec(PREC):
        return _mpfunc(mpmath.exp, x, mpmath.exp(x.mid + x.err))


def sqrt(x) -> HPReal:
    x = _hp(x)
    with mpmath.workprec(PREC):
        lo = x.mid - x.err
        if lo <= 0:
            raise ValueError("sqrt needs a positive interval")
        return _mpfunc(mpmath.sqrt, x, 1 / (2 * mpmath.sqrt(lo)))


# ---------------------------------------------------------------------------
# polygamma and zeta


@lru_cache(maxsize=None)
def _bernoulli(k: int) -> Fraction:
    p, q = mpmath.bernfrac(k)
    return Fraction(int(p), int(q))


SHIFT = 64      # recurrence pushes the argument to >= SHIFT
TERMS = 40      # asymptotic terms (B_80 / x^80 at x = 64 is ~1e-80)


def polygamma(m: int, x) -> HPReal:
    """psi^(m)(x) for real x > 0, m >= 0."""
    if m < 0:
        raise ValueError("order must be >= 0")
    x = _hp(x)
    with mpmath.workprec(PREC):
        if x.mid - x.err <= 0:
            raise ValueError("polygamma is only provided for x > 0 (poles at 0, -1, ...)")
        X = x.mid
        # upward recurrence: psi^(m)(x) = psi^(m)(x+1) - (-1)^m m! / x^(m+1)
        corr = mpmath.mpf(0)
        sign = -1 if m % 2 else 1
        fact = math.factorial(m)
        n = 0
        while X + n < SHIFT:
            corr += sign * fact / (X + n) ** (m + 1)
            n += 1
        y = X + n
        val, tail = _polygamma_asym(m, y)
        mid = val - corr
        # d/dx psi^(m) = psi^(m+1), |psi^(m+1)(t)| <= (m+1)!/t^(m+2) + m!/t^(m+1) ... bounded by a crude
        # envelope that is monotone in t: use the value at the left end of the input interval
        lo = x.mid - x.err
        slope = mpmath.mpf(math.factorial(m + 1)) * (1 / lo ** (m + 2) + 1 / lo ** (m + 1) + 1)
        err = tail + abs(mid) * ULP * (n + 8) + slope * x.err
        return HPReal(mid, err)


def _polygamma_asym(m: int, y) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Asymptotic series for psi^(m)(y), y large; returns (value, bound on remainder)."""
    terms = []
    if m == 0:
        s = mpmath.log(y) - 1 / (2 * y)
        for k in range(1, TERMS + 1):
            t = -_fr(_bernoulli(2 * k)) / (2 * k * y ** (2 * k))
            terms.append(t)
        last = -_fr(_bernoulli(2 * TERMS + 2)) / ((2 * TERMS + 2) * y ** (2 * TERMS + 2))
    else:
        # psi^(m)(y) ~ (-1)^(m+1) [ (m-1)!/y^m + m!/(2 y^(m+1)) + sum B_2k (2k+m-1)!/((2k)! y^(2k+m)) ]
        sg = 1 if m % 2 else -1
        s = sg * (mpmath.mpf(math.factorial(m - 1)) / y**m + mpmath.mpf(math.factorial(m)) / (2 * y ** (m + 1)))
        for k in range(1, TERMS + 1):
            c = _fr(_bernoulli(2 * k)) * math.factorial(2 * k + m - 1) / math.factorial(2 * k)
            terms.append(sg * c / y ** (2 * k + m))
        kk = TERMS + 1
        c = _fr(_bernoulli(2 * kk)) * math.factorial(2 * kk + m - 1) / math.factorial(2 * kk)
        last = c / y ** (2 * kk + m)
    return s + mpmath.fsum(terms), abs(last)


def _fr(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def digamma(x) -> HPReal:
    return polygamma(0, x)


def euler_gamma() -> HPReal:
    return -digamma(1)


def hurwitz(s: int, a) -> HPReal:
    """zeta(s, a) = sum_{n>=0} (n+a)^(-s) for integer s >= 2, a > 0, via polygamma."""
    pg = polygamma(s - 1, a)
    sgn = 1 if s % 2 == 0 else -1
    return pg * Fraction(sgn, math.factorial(s - 1))


def zeta(s) -> HPReal:
    """Riemann zeta for real s > 1 by Euler-Maclaurin with a certified tail."""
    s = _hp(s)
    with mpmath.workprec(PREC):
        S = s.mid
        if S - s.err <= 1:
            raise ValueError("zeta needs s > 1")
        Nn = 40
        total = mpmath.fsum(mpmath.mpf(n) ** (-S) for n in range(1, Nn))
        total += mpmath.mpf(Nn) ** (1 - S) / (S - 1) + mpmath.mpf(Nn) ** (-S) / 2
        rising = S  # s (s+1) ... (s+2k-2)
        terms = []
        K = 30
        for k in range(1, K + 2):
            t = _fr(_bernoulli(2 * k)) / math.factorial(2 * k) * rising * mpmath.mpf(Nn) ** (-S - 2 * k + 1)
            if k <= K:
                terms.append(t)
            else:
                rem = abs(t)
            rising *= (S + 2 * k - 1) * (S + 2 * k)
        val = total + mpmath.fsum(terms)
        # |d zeta/ds| <= sum log(n) n^-s <= zeta'(lo) bound; crude: 1/(lo-1)^2 + 1
        lo = S - s.err
        slope = 1 / (lo - 1) ** 2 + 1
        return HPReal(val, 2 * rem + abs(val) * ULP * 64 + slope * s.err)


# ---------------------------------------------------------------------------
# the constants


def A(alpha) -> HPReal:
    """A_alpha = sum 1/(n(n+alpha)), alpha > -1 (pi^2/6 at alpha = 0)."""
    a = _hp(alpha)
    with mpmath.workprec(PREC):
        if a.mid <= -1:
            raise ValueError("A needs alpha > -1")
        if abs(a.mid) < NEAR:
            # sum_j (-alpha)^j zeta(j+2); 6 terms leave < 1e-48 * zeta(8)
            out = HPReal.exact(0)
            pw = HPReal.exact(1)
            for j in range(6):
                out = out + pw * zeta(j + 2)
                pw = pw * (-a)
            return HPReal(out.mid, out.err + abs(a.mid) ** 6 * 2)
    return (digamma(a + 1) - digamma(1)) / a


def B(alpha) -> HPReal:
    """B_alpha = sum 1/(n^2 + alpha^2), alpha > 0."""
    a = _hp(alpha)
    with mpmath.workprec(PREC):
        if a.mid <= 0:
            raise ValueError("B needs alpha > 0")
        if a.mid < NEAR:
            # sum_j (-alpha^2)^j zeta(2j+2)
            out = HPReal.exact(0)
            pw = HPReal.exact(1)
            for j in range(4):
                out = out + pw * zeta(2 * j + 2)
                pw = pw * (-(a * a))
            return HPReal(out.mid, out.err + a.mid ** 8 * 2)
    x = _pi() * a
    e2 = exp(-(x * 2))
    coth = (1 + e2) / (1 - e2)
    return (x * coth - 1) / (a * a * 2)


def _check_gt_minus1(*xs):
    for x in xs:
        if x.mid <= -1:
            raise ValueError("parameters must exceed -1")


def C(alpha, beta) -> HPReal:
    """C_{alpha,beta} = sum 1/((n+alpha)(n+beta)), alpha, beta > -1."""
    a, b = _hp(alpha), _hp(beta)
    _check_gt_minus1(a, b)
    with mpmath.workprec(PREC):
        close = abs(b.mid - a.mid) < NEAR
    if close:
        # symmetric expansion about the midpoint: sum_j h^(2j) zeta(2j+2, 1+m)
        m = (a + b) / 2
        h = (b - a) / 2
        out = HPReal.exact(0)
        pw = HPReal.exact(1)
        for j in range(4):
            out = out + pw * hurwitz(2 * j + 2, m + 1)
            pw = pw * h * h
        # remainder h^8 zeta(10, 1+m) (1 + h^2/(1+m)^2 + ...) <= 2 h^8 zeta(10, 1+m)
        tail = hurwitz(10, m + 1)
        with mpmath.workprec(PREC):
            return HPReal(out.mid, out.err + abs(h.mid) ** 8 * 2 * (tail.mid + tail.err))
    return (digamma(b + 1) - digamma(a + 1)) / (b - a)


def D(alpha, beta) -> HPReal:
    """D_{alpha,beta} = sum 1/(n(n+alpha)(n+beta)), alpha, beta > -1 (zeta(3) at 0, 0)."""
    a, b = _hp(alpha), _hp(beta)
    _check_gt_minus1(a, b)
    small = mpmath.mpf("1e-6")
    with mpmath.workprec(PREC):
        both_small = abs(a.mid) < small and abs(b.mid) < small
        close = abs(b.mid - a.mid) < NEAR
    if both_small:
        # sum_{i,j} (-a)^i (-b)^j zeta(3+i+j); |a|,|b| < 1e-6 and i+j <= 12
        out = HPReal.exact(0)
        for tot in range(13):
            z = zeta(3 + tot)
            coef = HPReal.exact(0)
            for i in range(tot + 1):
                coef = coef + _pow(-a, i) * _pow(-b, tot - i)
            out = out + coef * z
        with mpmath.workprec(PREC):
            return HPReal(out.mid, out.err + 14 * small ** 13 * 2)
    if close:
        # sum_j h^(2j) S_{2j+2}(m),  S_p(m) = sum 1/(n (n+m)^p),  S_p = (S_{p-1} - zeta(p, 1+m)) / m
        m = (a + b) / 2
        h = (b - a) / 2
        S = A(m)
        out = HPReal.exact(0)
        pw = HPReal.exact(1)
        for p in range(2, 9):
            S = (S - hurwitz(p, m + 1)) / m
            if p % 2 == 0:
                out = out + pw * S
                pw = pw * h * h
        with mpmath.workprec(PREC):
            return HPReal(out.mid, out.err + abs(h.mid) ** 8 * 4 / abs(m.mid) ** 2)
    return (A(a) - A(b)) / (b - a)


def E(alpha, beta) -> HPReal:
    """E_{alpha,beta} = sum n/((n+alpha)^2 (n+beta)); alpha, beta nonzero and > -1."""
    a, b = _hp(alpha), _hp(beta)
    _check_gt_minus1(a, b)
    with mpmath.workprec(PREC):
        if a.mid == 0 or b.mid == 0:
            raise ValueError("E needs nonzero alpha and beta")
        close = abs(b.mid - a.mid) < NEAR
    if close:
        # sum_j (-(b-a))^j T_{3+j}(a),  T_p(a) = zeta(p-1, 1+a) - a zeta(p, 1+a)
        d = b - a
        out = HPReal.exact(0)
        pw = HPReal.exact(1)
        for j in range(5):
            T = hurwitz(2 + j, a + 1) - a * hurwitz(3 + j, a + 1)
            out = out + pw * T
            pw = pw * (-d)
        with mpmath.workprec(PREC):
            return HPReal(out.mid, out.err + abs(d.mid) ** 5 * 4 * (1 + abs(a.mid)) / (1 + a.mid) ** 2)
    return (b * C(a, b) - a * C(a, a)) / (b - a)


def _pow(x: HPReal, n: int) -> HPReal:
    out = HPReal.exact(1)
    for _ in range(n):
        out = out * x
    return out


def cubic_weight_constants() -> tuple[HPReal, HPReal]:
    """zeta(3) - 1 and (18 - pi^2 - 6 zeta(3)) / 6."""
    z3 = zeta(3)
    pi = _pi()
    return z3 - 1, (18 - pi * pi - z3 * 6) / 6


def e_alt_closed_form() -> HPReal:
    """(20/19^2)(1 - gamma - psi(21/20)) - (20/19)(pi^2/6 - 1).

    A partial-fraction closed form for E_{1,1/20} with the overall sign
    reversed: it evaluates to -E_{1,1/20}.
    """
    g = euler_gamma()
    pi = _pi()
    t1 = (1 - g - digamma(Fraction(21, 20))) * Fraction(20, 361)
    t2 = (pi * pi / 6 - 1) * Fraction(20, 19)
    return t1 - t2


def sqrt_rational(q: Fraction) -> HPReal:
    return sqrt(HPReal.exact(Fraction(q)))


def B_four_thirds() -> HPReal:
    """B at alpha = 2/sqrt(3), i.e. alpha^2 = 4/3."""
    return B(sqrt_rational(Fraction(4, 3)))


def E_twentieth() -> HPReal:
    return E(1, Fraction(1, 20))


def constants_table() -> list[dict]:
    """Named constants with values and bounds, for the CLI."""
    z3m1, c2 = cubic_weight_constants()
    pi = _pi()
    rows = [
        ("A(1)", A(1), "sum n/(n+1) |g_n|^2"),
        ("A(2)", A(2), "sum n/(n+2) |g_n|^2"),
        ("A(3)", A(3), "sum n/(n+3) |g_n|^2"),
        ("A(1/2)", A(Fraction(1, 2)), "= 4(1 - log 2); weight n/(2n+1) gives half"),
        ("A(-1/2)", A(Fraction(-1, 2)), "= 4 log 2; weight n/(2n-1) gives half"),
        ("A(0)", A(0), "= pi^2/6"),
        ("B(1)", B(1), "= (pi coth pi - 1)/2"),
        ("B(2/sqrt3)", B_four_thirds(), "weight n^2/(n^2+4/3)"),
        ("C(1/2,-1/2)", C(Fraction(1, 2), Fraction(-1, 2)), "= 2"),
        ("C(1/2,1)", C(Fraction(1, 2), 1), "= 2(2 log 2 - 1)"),
        ("C(1,1)", C(1, 1), "= pi^2/6 - 1 (weight n^2/(n+1)^2)"),
        ("D(1,2)", D(1, 2), "= 1/4"),
        ("D(1,1)", D(1, 1), "= 2 - pi^2/6"),
        ("D(0,0)", D(0, 0), "= zeta(3)"),
        ("E(1,1/20)", E_twentieth(), "weight n^3/((n+1)^2(n+1/20))"),
        ("zeta(3)-1", z3m1, "weight n^2/(n+1)^3"),
        ("(18-pi^2-6zeta(3))/6", c2, "weight n/(n+1)^3"),
        ("E(1,1/20) closed form", e_alt_closed_form(), "sign reversed: equals -E(1,1/20)"),
        ("2pi^2/3-4", pi * pi * Fraction(2, 3) - 4, "prefactor of r1, r3 equations"),
    ]
    return [{"name": n, "value": v, "note": note} for n, v, note in rows]
