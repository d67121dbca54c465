"""Exact rational polynomials and Sturm-sequence root counting.

Coefficients are :class:`fractions.Fraction`, stored lowest-degree first.
Everything here is exact; no floating point value is ever produced.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]
Endpoint = Union[int, Fraction, float]  # float only for +-inf


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: they would silently smuggle rounding into an
    exact computation.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def mpf_to_fraction(x) -> Fraction:
    """Exact value of a finite mpmath mpf (a dyadic rational)."""
    sign, man, exp, _ = x._mpf_
    if not man and exp:
        raise ValueError("non-finite value")
    man = -int(man) if sign else int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


class RatPoly:
    """Immutable univariate polynomial over the rationals."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_fraction(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def constant(cls, a) -> "RatPoly":
        return cls([a])

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def lc(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def __call__(self, x):
        return poly_eval(self, x)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == RatPoly([other])._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"RatPoly([{', '.join(str(a) for a in self._c)}])"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(a) if (i == 0 or abs(a) != 1) else ("-" if a < 0 else "")
            terms.append(f"({coef}){mono}" if "/" in coef and mono else coef + mono)
        return " + ".join(terms)

    def __neg__(self) -> "RatPoly":
        return RatPoly(-a for a in self._c)

    def __add__(self, other) -> "RatPoly":
        other = _coerce(other)
        n = max(len(self._c), len(other._c))
        a = self._c + (Fraction(0),) * (n - len(self._c))
        b = other._c + (Fraction(0),) * (n - len(other._c))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other) -> "RatPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "RatPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "RatPoly":
        other = _coerce(other)
        if not self._c or not other._c:
            return RatPoly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(other._c):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatPoly":
        if n < 0:
            raise ValueError("negative power")
        out = RatPoly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, s) -> "RatPoly":
        s = as_fraction(s)
        return RatPoly(a * s for a in self._c)

    def derivative(self) -> "RatPoly":
        return RatPoly(i * a for i, a in enumerate(self._c) if i > 0)

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self._c)
        d = other.degree
        lc = other.lc()
        q = [Fraction(0)] * max(len(r) - d, 0)
        for i in range(len(r) - 1, d - 1, -1):
            t = r[i] / lc
            if t == 0:
                continue
            q[i - d] = t
            for j, b in enumerate(other._c):
                r[i - d + j] -= t * b
        return RatPoly(q), RatPoly(r[:d] if d > 0 else [])

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[1]

    def content(self) -> Fraction:
        """Positive rational c with self / c having coprime integer coefficients."""
        if not self._c:
            return Fraction(0)
        num = reduce(math.gcd, (a.numerator for a in self._c))
        den = reduce(lambda u, v: u * v // math.gcd(u, v), (a.denominator for a in self._c))
        return Fraction(abs(num), den)

    def primitive(self) -> "RatPoly":
        """Integer-coefficient, content-one multiple with the same sign."""
        if not self._c:
            return self
        return self.scale(1 / self.content())

    def monic(self) -> "RatPoly":
        return self.scale(1 / self.lc())

    def compose_linear(self, a, b) -> "RatPoly":
        """p(a*x + b)."""
        lin = RatPoly([b, a])
        out = RatPoly()
        for c in reversed(self._c):
            out = out * lin + RatPoly([c])
        return out

    def to_json(self) -> str:
        return json.dumps(poly_to_strings(self))

    @classmethod
    def from_json(cls, s: str) -> "RatPoly":
        return poly_from_strings(json.loads(s))


def _coerce(p) -> RatPoly:
    if isinstance(p, RatPoly):
        return p
    return RatPoly([p])


def frac_str(a: Fraction) -> str:
    """``"num/den"`` with the denominator always present."""
    return f"{a.numerator}/{a.denominator}"


def poly_to_strings(p: RatPoly) -> list[str]:
    return [frac_str(a) for a in p.coeffs]


def poly_from_strings(items: Sequence[str]) -> RatPoly:
    return RatPoly(Fraction(s) for s in items)


def poly_eval(p: RatPoly, x) -> Fraction:
    """Horner evaluation, exact."""
    x = as_fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, (a % b).primitive()
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: RatPoly) -> RatPoly:
    if p.is_zero():
        raise ValueError("degenerate input: zero polynomial")
    g = poly_gcd(p, p.derivative())
    return (p // g).primitive() if g.degree > 0 else p


@dataclass(frozen=True)
class SturmChain:
    """p0 = square-free part of p, p1 = p0', p_{i+1} = -rem(p_{i-1}, p_i) up to positive scaling."""

    chain: tuple[RatPoly, ...]

    @property
    def base(self) -> RatPoly:
        return self.chain[0]

    def variations(self, x: Endpoint) -> int:
        signs = [_sign_at(p, x) for p in self.chain]
        signs = [s for s in signs if s != 0]
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _sign_at(p: RatPoly, x: Endpoint) -> int:
    if isinstance(x, float):
        if not math.isinf(x):
            raise TypeError("finite endpoints must be exact rationals")
        if p.is_zero():
            return 0
        s = 1 if p.lc() > 0 else -1
        if x < 0 and p.degree % 2 == 1:
            s = -s
        return s
    v = poly_eval(p, x)
    return (v > 0) - (v < 0)


def sturm_chain(p: RatPoly) -> SturmChain:
    """Sturm chain of the square-free part of ``p``.

    Remainders are reduced to primitive integer form (positive content),
    which keeps coefficient growth in check without touching signs.
    """
    if p.is_zero():
        raise ValueError("degenerate input: zero polynomial")
    p0 = squarefree_part(p)
    if p0.degree <= 0:
        return SturmChain((p0,))
    chain = [p0, p0.derivative()]
    while True:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        chain.append((-r).primitive())
    return SturmChain(tuple(chain))


def count_real_roots(p: RatPoly, a: Endpoint, b: Endpoint) -> int:
    """Number of distinct real roots of ``p`` in the open interval (a, b).

    ``a`` and ``b`` may be ``-math.inf`` / ``math.inf``.
    """
    if not a < b:
        raise ValueError(f"empty interval: a={a} must be < b={b}")
    sc = sturm_chain(p)
    # V(a) - V(b) counts roots in (a, b]
    n = sc.variations(a) - sc.variations(b)
    if not isinstance(b, float) and poly_eval(sc.base, b) == 0:
        n -= 1
    return n


def is_root(p: RatPoly, x) -> bool:
    return poly_eval(p, x) == 0


def isolate_roots(p: RatPoly, a: Fraction, b: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open intervals in (a, b), each holding exactly one root of ``p``.

    Interval endpoints are never roots themselves.
    """
    sc = sturm_chain(p)
    base = sc.base

    def count(lo, hi):
        n = sc.variations(lo) - sc.variations(hi)
        return n - (1 if poly_eval(base, hi) == 0 else 0)

    out = []
    stack = [(as_fraction(a), as_fraction(b))]
    while stack:
        lo, hi = stack.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if poly_eval(base, mid) == 0:
            # nudge the split point off the root
            k = 3
            while poly_eval(base, mid) == 0:
                mid = lo + (hi - lo) * Fraction(k - 1, 2 * k)
                k += 1
        stack.append((mid, hi))
        stack.append((lo, mid))
    return sorted(out)


@dataclass(frozen=True)
class PositivityCertificate:
    positive: bool
    a: Fraction
    b: Fraction
    root_count: int
    sample: Fraction
    sample_value: Fraction
    # witness on failure: a point with p <= 0, and root-isolating intervals
    witness_point: Fraction | None = None
    witness_value: Fraction | None = None
    root_intervals: tuple[tuple[Fraction, Fraction], ...] = ()

    def __bool__(self) -> bool:
        return self.positive

    def to_dict(self) -> dict:
        d = {
            "positive": self.positive,
            "interval": [frac_str(self.a), frac_str(self.b)],
            "root_count": self.root_count,
            "sample": frac_str(self.sample),
            "sample_value": frac_str(self.sample_value),
        }
        if self.witness_point is not None:
            d["witness_point"] = frac_str(self.witness_point)
            d["witness_value"] = frac_str(self.witness_value)
        if self.root_intervals:
            d["root_intervals"] = [[frac_str(u), frac_str(v)] for u, v in self.root_intervals]
        return d


def certify_positive(p: RatPoly, a, b) -> PositivityCertificate:
    """Certify p > 0 on the open interval (a, b).

    True iff p has no root in (a, b) and is positive at an interior
    sample (the midpoint, moved toward ``a`` if it happens to be a root).
    On failure the certificate carries a point where p <= 0 whenever one
    exists, plus isolating intervals for the interior roots.
    """
    if p.is_zero():
        raise ValueError("degenerate input: zero polynomial")
    a, b = as_fraction(a), as_fraction(b)
    n = count_real_roots(p, a, b)
    sample = (a + b) / 2
    while poly_eval(p, sample) == 0:
        sample = (a + sample) / 2
    val = poly_eval(p, sample)
    if n == 0 and val > 0:
        return PositivityCertificate(True, a, b, 0, sample, val)

    intervals = tuple(isolate_roots(p, a, b)) if n else ()
    wx, wv = None, None
    if val <= 0:
        wx, wv = sample, val
    else:
        # probe between consecutive isolating intervals and at their endpoints
        probes = [x for iv in intervals for x in iv]
        probes += [(u[1] + v[0]) / 2 for u, v in zip(intervals, intervals[1:])]
        for x in sorted(set(probes)):
            if a < x < b:
                v = poly_eval(p, x)
                if v <= 0:
                    wx, wv = x, v
                    break
        if wx is None:
            # only even-multiplicity roots touch zero; report the root itself via refinement
            for lo, hi in intervals:
                wx, wv = _refine_to_nonpositive(p, lo, hi)
                if wx is not None:
                    break
    return PositivityCertificate(False, a, b, n, sample, val, wx, wv, intervals)


def _refine_to_nonpositive(p: RatPoly, lo: Fraction, hi: Fraction, steps: int = 200):
    """Search an isolating interval for a rational point where p <= 0."""
    base = sturm_chain(p).base
    for _ in range(steps):
        mid = (lo + hi) / 2
        v = poly_eval(p, mid)
        if v <= 0:
            return mid, v
        # keep the half that still holds the root of the square-free part
        if count_real_roots(base, lo, mid) or poly_eval(base, mid) == 0:
            hi = mid
        else:
            lo = mid
    # a repeated linear factor gives the touching root exactly
    g = squarefree_part(poly_gcd(p, p.derivative()))
    if g.degree == 1:
        r = -g.coeffs[0] / g.coeffs[1]
        if lo <= r <= hi and poly_eval(p, r) == 0:
            return r, Fraction(0)
    return None, None
