"""Weight sequences p_n and their difference sequences.

A weight family is a positive sequence p_1, p_2, ... given by a closed
form.  From it we derive

    q_n = p_n - p_{n+1},        lambda_n = q_n - q_{n+1},

and the partial sums used by the certification machinery (mu, nu, v).
Families with rational parameters produce exact Fractions throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, ClassVar

import mpmath
from mpmath import iv

from .exactnum import RatPoly, as_fraction, count_real_roots, frac_str, poly_eval

HP_PREC = 128


class FamilyDomainError(ValueError):
    """Parameters outside the range where p_n is defined and positive."""


def _quadratic_positive_on_integers(a: Fraction, b: Fraction) -> bool:
    # n^2 + a n + b > 0 for every integer n >= 1
    vertex = -a / 2
    cands = {1}
    if vertex > 1:
        cands |= {math.floor(vertex), math.ceil(vertex)}
    return all(n * n + a * n + b > 0 for n in cands if n >= 1)


@dataclass(frozen=True)
class WeightFamily:
    """Base class; concrete shapes are the subclasses below."""

    tag: ClassVar[str] = ""
    rational: ClassVar[bool] = True

    def p(self, n: int):
        raise NotImplementedError

    def phi(self) -> tuple[RatPoly, RatPoly] | None:
        """(numerator, denominator) with p_n = num(n)/den(n), when p is a rational function."""
        return None

    def params(self) -> dict:
        return {}

    def spec(self) -> str:
        """Compact text form, inverse of :func:`parse_family`."""
        ps = ",".join(f"{k}={_fmt(v)}" for k, v in self.params().items())
        return f"{self.tag}:{ps}" if ps else self.tag

    def __str__(self) -> str:
        return self.spec()


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return mpmath.nstr(v, 30) if isinstance(v, mpmath.mpf) else str(v)


@dataclass(frozen=True)
class Reciprocal(WeightFamily):
    """p_n = 1/(n + alpha)."""

    alpha: Fraction
    tag: ClassVar[str] = "reciprocal"

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        if self.alpha <= -1:
            raise FamilyDomainError("reciprocal family needs alpha > -1")

    def p(self, n):
        return 1 / (n + self.alpha)

    def phi(self):
        return RatPoly([1]), RatPoly([self.alpha, 1])

    def params(self):
        return {"alpha": self.alpha}


@dataclass(frozen=True)
class RatQuadNum(WeightFamily):
    """p_n = n/(n^2 + a n + b)."""

    a: Fraction
    b: Fraction
    tag: ClassVar[str] = "ratquadnum"

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        if not _quadratic_positive_on_integers(self.a, self.b):
            raise FamilyDomainError("n^2 + a n + b must be positive for all n >= 1")

    def p(self, n):
        return Fraction(n) / (n * n + self.a * n + self.b)

    def phi(self):
        return RatPoly([0, 1]), RatPoly([self.b, self.a, 1])

    def params(self):
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class TwoFactorNum(WeightFamily):
    """p_n = n/((n + alpha)(n + beta))."""

    alpha: Fraction
    beta: Fraction
    tag: ClassVar[str] = "twofactornum"

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        if self.alpha <= -1 or self.beta <= -1:
            raise FamilyDomainError("twofactornum family needs alpha, beta > -1")

    def p(self, n):
        return Fraction(n) / ((n + self.alpha) * (n + self.beta))

    def phi(self):
        return RatPoly([0, 1]), RatPoly([self.alpha, 1]) * RatPoly([self.beta, 1])

    def params(self):
        return {"alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class InvQuad(WeightFamily):
    """p_n = 1/(n^2 + a n + b)."""

    a: Fraction
    b: Fraction
    tag: ClassVar[str] = "invquad"

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        if not _quadratic_positive_on_integers(self.a, self.b):
            raise FamilyDomainError("n^2 + a n + b must be positive for all n >= 1")

    def p(self, n):
        return 1 / (Fraction(n * n) + self.a * n + self.b)

    def phi(self):
        return RatPoly([1]), RatPoly([self.b, self.a, 1])

    def params(self):
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class InvTwoFactor(WeightFamily):
    """p_n = 1/((n + alpha)(n + beta))."""

    alpha: Fraction
    beta: Fraction
    tag: ClassVar[str] = "invtwofactor"

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        if self.alpha <= -1 or self.beta <= -1:
            raise FamilyDomainError("invtwofactor family needs alpha, beta > -1")

    def p(self, n):
        return 1 / ((n + self.alpha) * (n + self.beta))

    def phi(self):
        return RatPoly([1]), RatPoly([self.alpha, 1]) * RatPoly([self.beta, 1])

    def params(self):
        return {"alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class SquaredFactor(WeightFamily):
    """p_n = n^2/((n + alpha)^2 (n + beta))."""

    alpha: Fraction
    beta: Fraction
    tag: ClassVar[str] = "squaredfactor"

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        if self.alpha <= -1 or self.beta <= -1:
            raise FamilyDomainError("squaredfactor family needs alpha, beta > -1")

    def p(self, n):
        return Fraction(n * n) / ((n + self.alpha) ** 2 * (n + self.beta))

    def phi(self):
        return RatPoly([0, 0, 1]), RatPoly([self.alpha, 1]) ** 2 * RatPoly([self.beta, 1])

    def params(self):
        return {"alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class GeomShift(WeightFamily):
    """p_n = (n + alpha) r^n."""

    alpha: Fraction
    r: Fraction
    tag: ClassVar[str] = "geomshift"

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "r", as_fraction(self.r))
        if self.alpha <= -1 or not 0 < self.r < 1:
            raise FamilyDomainError("geomshift family needs alpha > -1 and 0 < r < 1")

    def p(self, n):
        return (n + self.alpha) * self.r**n

    def params(self):
        return {"alpha": self.alpha, "r": self.r}


@dataclass(frozen=True)
class Geometric(WeightFamily):
    """p_n = r^(2n)."""

    r: Fraction
    tag: ClassVar[str] = "geometric"

    def __post_init__(self):
        object.__setattr__(self, "r", as_fraction(self.r))
        if not 0 < self.r < 1:
            raise FamilyDomainError("geometric family needs 0 < r < 1")

    def p(self, n):
        return self.r ** (2 * n)

    def params(self):
        return {"r": self.r}


@dataclass(frozen=True)
class PowerLaw(WeightFamily):
    """p_n = n^(-alpha); floating point only."""

    alpha: mpmath.mpf
    tag: ClassVar[str] = "powerlaw"
    rational: ClassVar[bool] = False

    def __post_init__(self):
        with mpmath.workprec(HP_PREC):
            a = mpmath.mpf(self.alpha)
        object.__setattr__(self, "alpha", a)
        if a <= 0:
            raise FamilyDomainError("powerlaw family needs alpha > 0")

    def p(self, n):
        with mpmath.workprec(HP_PREC):
            return mpmath.mpf(n) ** (-self.alpha)

    def params(self):
        return {"alpha": self.alpha}


@dataclass(frozen=True)
class Custom(WeightFamily):
    """Caller-supplied exact evaluator n -> Fraction."""

    fn: Callable[[int], Fraction] = field(compare=False)
    name: str = "custom"
    tag: ClassVar[str] = "custom"

    def p(self, n):
        return as_fraction(self.fn(n))

    def spec(self):
        return f"custom:{self.name}"


FAMILIES: dict[str, type[WeightFamily]] = {
    cls.tag: cls
    for cls in (Reciprocal, RatQuadNum, TwoFactorNum, InvQuad, InvTwoFactor,
                SquaredFactor, GeomShift, Geometric, PowerLaw)
}

_ARG_ORDER = {
    "reciprocal": ("alpha",),
    "ratquadnum": ("a", "b"),
    "twofactornum": ("alpha", "beta"),
    "invquad": ("a", "b"),
    "invtwofactor": ("alpha", "beta"),
    "squaredfactor": ("alpha", "beta"),
    "geomshift": ("alpha", "r"),
    "geometric": ("r",),
    "powerlaw": ("alpha",),
}


def parse_family(text: str) -> WeightFamily:
    """Parse ``"ratquadnum:a=0,b=4/3"`` style descriptors.

    Values are exact rationals ``p/q`` (integers allowed); only
    ``powerlaw`` accepts a decimal exponent.
    """
    tag, _, rest = text.strip().partition(":")
    tag = tag.strip().lower()
    if tag not in FAMILIES:
        raise ValueError(f"unknown family {tag!r}; expected one of {sorted(FAMILIES)}")
    kv = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        k, eq, v = item.partition("=")
        if not eq:
            raise ValueError(f"malformed parameter {item!r}")
        kv[k.strip().lower()] = v.strip()
    expected = _ARG_ORDER[tag]
    if set(kv) != set(expected):
        raise ValueError(f"{tag} takes parameters {', '.join(expected)}; got {', '.join(sorted(kv)) or 'none'}")
    if tag == "powerlaw":
        with mpmath.workprec(HP_PREC):
            return PowerLaw(mpmath.mpf(kv["alpha"]))
    try:
        args = [Fraction(kv[k]) for k in expected]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational in {text!r}: {exc}") from None
    return FAMILIES[tag](*args)


class DerivedSeq:
    """p, q and lambda for one family, cached eagerly up to the cutoff N."""

    def __init__(self, family: WeightFamily, N: int):
        if N < 1:
            raise ValueError("cutoff N must be a positive integer")
        self.family = family
        self.N = N
        ps = [None] + [family.p(n) for n in range(1, N + 4)]
        self._p = tuple(ps)
        self._q = tuple([None] + [ps[n] - ps[n + 1] for n in range(1, N + 3)])
        self._lam = tuple([None] + [self._q[n] - self._q[n + 1] for n in range(1, N + 2)])

    @property
    def exact(self) -> bool:
        return self.family.rational

    def p(self, n: int):
        return self._p[n] if 1 <= n < len(self._p) else self.family.p(n)

    def q(self, n: int):
        return self._q[n] if 1 <= n < len(self._q) else self.p(n) - self.p(n + 1)

    def lam(self, n: int):
        if n < 1:
            raise ValueError("index must be >= 1")
        if n < len(self._lam):
            return self._lam[n]
        return self.p(n) - 2 * self.p(n + 1) + self.p(n + 2)

    def lambdas(self) -> tuple:
        """lambda_1 .. lambda_N."""
        return self._lam[1:self.N + 1]


def p(family: WeightFamily, n: int):
    if n < 1:
        raise ValueError("index must be >= 1")
    return family.p(n)


def lambda_(seq: DerivedSeq, n: int):
    return seq.lam(n)


def _check_index(seq: DerivedSeq, k: int, name: str):
    if not 1 <= k <= seq.N:
        raise ValueError(f"{name} index {k} outside 1..{seq.N}")


def mu(seq: DerivedSeq, k: int):
    """mu_k = sum_{n=k}^{N} lambda_n (n - k + 1), the initial value tau_k(0)."""
    _check_index(seq, k, "mu")
    return sum((seq.lam(n) * (n - k + 1) for n in range(k, seq.N + 1)), Fraction(0))


def nu(seq: DerivedSeq, m: int):
    """nu_m = q_m - q_{N+1} = lambda_m + ... + lambda_N."""
    _check_index(seq, m, "nu")
    return seq.q(m) - seq.q(seq.N + 1)


def v(seq: DerivedSeq, k: int):
    """v_k = lambda_k + lambda_{k+2} + ... (same parity as k, up to N)."""
    _check_index(seq, k, "v")
    return sum((seq.lam(n) for n in range(k, seq.N + 1, 2)), Fraction(0))


# ---------------------------------------------------------------------------
# convexity predicates and tail thresholds


class NoSymbolicCondition(ValueError):
    pass


def _geomshift_margin(alpha: Fraction, r: Fraction, target: Fraction) -> tuple[bool | None, float]:
    """Sign of (alpha + 1) log(1/r) - target in 128-bit interval arithmetic.

    None when the enclosure lies within 1e-20 of zero.
    """
    old = iv.prec
    iv.prec = HP_PREC
    try:
        a1 = iv.mpf(alpha.numerator) / alpha.denominator + 1
        lg = iv.log(iv.mpf(r.denominator) / r.numerator)
        t = iv.mpf(target.numerator) / target.denominator
        d = a1 * lg - t
        eps = iv.mpf(10) ** -20
        if d.a > eps:
            return True, float(d.a)
        if d.b < -eps:
            return False, float(d.b)
        return None, float(d.a)
    finally:
        iv.prec = old


def convexity_condition(family: WeightFamily) -> bool | None:
    """The parameter predicate under which the family is a convex sequence.

    Returns None only for the geometric-shift family when the logarithmic
    comparison is too close to call.
    """
    f = family
    if isinstance(f, Reciprocal):
        return f.alpha > -1
    if isinstance(f, RatQuadNum):
        return _ratquad_pred(f.a, f.b)
    if isinstance(f, TwoFactorNum):
        return f.alpha > -1 and f.beta > -1 and _ratquad_pred(f.alpha + f.beta, f.alpha * f.beta)
    if isinstance(f, InvQuad):
        a, b = f.a, f.b
        return a + b + 1 > 0 and a + 2 >= 0 and b <= a * a + 6 * a + 11
    if isinstance(f, InvTwoFactor):
        return f.alpha > -1 and f.beta > -1
    if isinstance(f, SquaredFactor):
        al, be = f.alpha, f.beta
        return al > -1 and be > -1 and abs(al) * (1 + 3 * abs(be) + be * be) <= Fraction(1, 2)
    if isinstance(f, GeomShift):
        if not (f.alpha > -1 and 0 < f.r < 1):
            return False
        return _geomshift_margin(f.alpha, f.r, Fraction(2))[0]
    if isinstance(f, Geometric):
        return 0 < f.r < 1
    if isinstance(f, PowerLaw):
        return f.alpha > 0
    raise NoSymbolicCondition("no symbolic condition available")


def _ratquad_pred(a: Fraction, b: Fraction) -> bool:
    return a + b + 1 > 0 and a + 3 >= 0 and (6 + a) * b <= 6


def second_derivative_numerator(num: RatPoly, den: RatPoly) -> RatPoly:
    """N with phi'' = N / den^3 for phi = num/den."""
    n1, n2 = num.derivative(), num.derivative().derivative()
    d1, d2 = den.derivative(), den.derivative().derivative()
    return (n2 * den - num * d2) * den - (n1 * den - num * d1) * d1 * 2


def _cauchy_bound(p: RatPoly) -> int:
    if p.degree < 1:
        return 0
    lc = abs(p.lc())
    return math.ceil(1 + max(abs(c) / lc for c in p.coeffs[:-1]))


def convex_from(num: RatPoly, den: RatPoly) -> int | None:
    """Smallest integer M >= 1 with num/den pole-free and convex on [M, oo).

    Decided exactly: the second-derivative numerator and the denominator
    are checked for roots on (M, oo) by Sturm counting.  None if the
    function is concave near infinity.
    """
    inf = math.inf
    sec = second_derivative_numerator(num, den)
    if den.lc() < 0:
        den, sec = -den, -sec
    if not sec.is_zero() and sec.lc() < 0:
        return None

    def ok(M: int) -> bool:
        if poly_eval(den, M) == 0 or count_real_roots(den, M, inf):
            return False
        return sec.is_zero() or count_real_roots(sec, M, inf) == 0

    hi = max(_cauchy_bound(sec), _cauchy_bound(den), 1) + 1
    if not ok(hi):
        return None
    lo = 1
    if ok(lo):
        return 1
    # ok() is monotone in M: invariant ok(hi) and not ok(lo)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class TailCertificate:
    """lambda_n >= 0 for every n >= n0 (n0 None when nothing could be certified)."""

    n0: int | None
    method: str
    window: tuple[int, int] | None = None

    def covers(self, N: int) -> bool:
        """Does the certificate discharge lambda_n >= 0 for all n > N?"""
        return self.n0 is not None and self.n0 <= N + 1

    def to_dict(self) -> dict:
        return {"n0": self.n0, "method": self.method,
                "window": list(self.window) if self.window else None}


def tail_certificate(family: WeightFamily, margin: int = 64) -> TailCertificate:
    """Threshold n0 with lambda_n >= 0 for all n >= n0.

    n0 = 1 when the family satisfies its convexity predicate.  Otherwise
    n0 is where the interpolating function becomes convex: decided
    exactly from phi'' for rational shapes, in interval arithmetic for the
    geometric shift.  As a runtime cross-check lambda_n >= 0 is verified
    directly on n0..n0+margin.
    """
    if isinstance(family, Custom):
        return TailCertificate(None, "none: custom family has no analytic threshold")
    try:
        pred = convexity_condition(family)
    except NoSymbolicCondition:
        pred = False
    n0: int | None
    if pred:
        n0, method = 1, "convexity predicate"
    elif family.phi() is not None:
        n0 = convex_from(*family.phi())
        method = "exact sign of second derivative"
    elif isinstance(family, GeomShift):
        n0, method = _geomshift_threshold(family), "interval bound on second derivative"
    else:
        n0, method = None, "none"
    if n0 is None:
        return TailCertificate(None, "none: not convex near infinity" if method != "none" else method)

    for n in range(n0, n0 + margin + 1):
        lam = family.p(n) - 2 * family.p(n + 1) + family.p(n + 2)
        if lam < 0:
            raise RuntimeError(f"{family}: lambda_{n} < 0 contradicts tail threshold {n0}")
    return TailCertificate(n0, method, (n0, n0 + margin))


def _geomshift_threshold(f: GeomShift) -> int | None:
    # phi''(x) = r^x log r (2 + (x + alpha) log r) >= 0  iff  (x + alpha) log(1/r) >= 2
    with mpmath.workprec(HP_PREC):
        guess = int(mpmath.ceil(2 / mpmath.log(1 / mpmath.mpf(f.r.numerator) * f.r.denominator)
                                - mpmath.mpf(f.alpha.numerator) / f.alpha.denominator))
    M = max(1, guess - 1)
    for M in range(M, M + 4):
        ok, _ = _geomshift_margin(f.alpha + M - 1, f.r, Fraction(2))
        if ok:
            return M
    return None


def describe_lambdas(seq: DerivedSeq) -> list[str]:
    return [frac_str(x) if isinstance(x, Fraction) else mpmath.nstr(x, 20) for x in seq.lambdas()]
