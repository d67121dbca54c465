"""The de Branges linear system and its closed-form solution.

With x_k = tau_k / k the system reads x' = A_N x, A_N upper triangular
with diagonal -1, ..., -N.  The closed form of tau_k' goes through Q_k:

    tau_k'(t) = -k e^{-kt} Q_k(1 - 2 e^{-t}).

At t = 0 the argument is -1 and Q_k(-1) = v_k, so tau_k'(0) = -k v_k.
The vector A_N x(0) therefore equals -(v_1, ..., v_N).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .certifier import build_Q
from .exactnum import mpf_to_fraction, poly_eval
from .weights import Custom, DerivedSeq, mu

PREC = 192


class TauSystem:
    """tau_1..tau_N for one weight sequence; tau_{N+1} = 0, tau_k(0) = mu_k."""

    def __init__(self, seq: DerivedSeq):
        self.seq = seq
        self.N = seq.N
        self._Q = {k: build_Q(seq, k) for k in range(1, self.N + 1)}

    def initial_values(self) -> list[Fraction]:
        return [mu(self.seq, k) for k in range(1, self.N + 1)]

    def Q(self, k: int):
        return self._Q[k]


def tau_prime(sys: TauSystem, k: int, t) -> mpmath.mpf:
    """-k e^{-kt} Q_k(1 - 2e^{-t}).

    The polynomial is evaluated exactly at the (dyadic) floating point
    argument, so at t = 0 the result is -k v_k rounded once.
    """
    if not 1 <= k <= sys.N:
        raise ValueError(f"k={k} outside 1..{sys.N}")
    with mpmath.workprec(PREC):
        t = mpmath.mpf(t)
        if t < 0:
            raise ValueError("t must be non-negative")
        e = mpmath.exp(-t)
        x = mpf_to_fraction(1 - 2 * e)
        val = poly_eval(sys.Q(k), x)
        return -k * mpmath.exp(-k * t) * mpmath.mpf(val.numerator) / val.denominator


def tau_prime_at_zero(sys: TauSystem, k: int) -> Fraction:
    """tau_k'(0) = -k Q_k(-1) as an exact rational."""
    if not 1 <= k <= sys.N:
        raise ValueError(f"k={k} outside 1..{sys.N}")
    return -k * poly_eval(sys.Q(k), -1)


def system_matrix(N: int) -> list[list[Fraction]]:
    """A_N: row k has -k on the diagonal and (-1)^(m-k+1) 2m in column m > k."""
    if N < 1:
        raise ValueError("N must be >= 1")
    A = [[Fraction(0)] * N for _ in range(N)]
    for k in range(1, N + 1):
        A[k - 1][k - 1] = Fraction(-k)
        for m in range(k + 1, N + 1):
            A[k - 1][m - 1] = Fraction((-1) ** (m - k + 1) * 2 * m)
    return A


def _to_mp(A) -> mpmath.matrix:
    M = mpmath.matrix(len(A), len(A[0]))
    for i, row in enumerate(A):
        for j, a in enumerate(row):
            a = Fraction(a)
            M[i, j] = mpmath.mpf(a.numerator) / a.denominator
    return M


def _norm1(M: mpmath.matrix) -> mpmath.mpf:
    return max(sum(abs(M[i, j]) for i in range(M.rows)) for j in range(M.cols))


def matrix_exp(A, t) -> mpmath.matrix:
    """e^{tA} by scaling and squaring of a Taylor series.

    The series for e^{B}, ||B|| <= 1/2, is cut once the remainder bound
    ||B||^{m+1}/(m+1)! * 2 drops below 2^-(PREC+10).
    """
    with mpmath.workprec(PREC):
        t = mpmath.mpf(t)
        if t < 0:
            raise ValueError("t must be non-negative")
        M = _to_mp(A) * t
        n = M.rows
        nrm = _norm1(M)
        s = 0
        while nrm > mpmath.mpf(1) / 2:
            nrm /= 2
            s += 1
        B = M / (2 ** s)
        out = mpmath.eye(n)
        term = mpmath.eye(n)
        tol = mpmath.mpf(2) ** -(PREC + 10)
        m = 0
        bound = mpmath.mpf(1)
        while True:
            m += 1
            term = term * B / m
            out += term
            bound = bound * nrm / (m + 1)
            if 2 * bound < tol:
                break
        for _ in range(s):
            out = out * out
        return out


def a_closed_forms(t) -> tuple[mpmath.matrix, mpmath.matrix]:
    """The closed forms of e^{tA_2} and e^{tA_3}."""
    with mpmath.workprec(PREC):
        e = mpmath.exp(-mpmath.mpf(t))
        E2 = mpmath.matrix([[e, 4 * e * (1 - e)], [0, e**2]])
        E3 = mpmath.matrix([
            [e, 4 * e * (1 - e), 3 * e * (1 - e) * (3 - 5 * e)],
            [0, e**2, 6 * e**2 * (1 - e)],
            [0, 0, e**3],
        ])
        return E2, E3


@dataclass(frozen=True)
class InsufficiencyWitness:
    epsilon: float
    v: tuple
    t_witness: mpmath.mpf
    first_entry_value: mpmath.mpf  # x_1'(t) = tau_1'(t); positive here
    note: str = ("x(t) = e^{tA_3} x0 with A_3 x0 = -v, so x'(t) = -e^{tA_3} v; "
                 "all v_k > 0 yet x_1'(t) > 0, i.e. tau_1' is not negative")


def insufficiency_demo(epsilon, t_max=0.5, steps: int = 500) -> InsufficiencyWitness:
    """Search t in (0, t_max] for x_1'(t) > 0 with v = (eps, eps, 1 - 2 eps)."""
    eps = Fraction(epsilon) if not isinstance(epsilon, float) else Fraction(repr(epsilon))
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    vv = (eps, eps, 1 - 2 * eps)
    if min(vv) <= 0:
        raise ValueError("demo failed: v must have positive entries")
    A3 = system_matrix(3)
    with mpmath.workprec(PREC):
        vm = _to_mp([[x] for x in vv])
        for i in range(1, steps + 1):
            t = mpmath.mpf(t_max) * i / steps
            first = -(matrix_exp(A3, t) * vm)[0, 0]
            if first > 0:
                return InsufficiencyWitness(float(epsilon), vv, t, first)
    raise RuntimeError("demo failed: no t with positive first entry")


def family_from_lambdas(lams) -> Custom:
    """A weight family whose lambda_1..lambda_N are the given values.

    p_{N+1} = p_{N+2} = 1 and p_n = 1 beyond, so lambda_n = 0 for n > N.
    """
    lams = [Fraction(x) for x in lams]
    N = len(lams)
    ps = {N + 1: Fraction(1), N + 2: Fraction(1)}
    for n in range(N, 0, -1):
        ps[n] = lams[n - 1] + 2 * ps[n + 1] - ps[n + 2]

    def fn(n: int) -> Fraction:
        return ps.get(n, Fraction(1))

    return Custom(fn, name="from-lambdas")


def lambdas_from_v(vv) -> list[Fraction]:
    """Invert v_k = lambda_k + lambda_{k+2} + ... for a given N = len(v)."""
    vv = [Fraction(x) for x in vv]
    N = len(vv)
    lam = [Fraction(0)] * N
    for k in range(N, 0, -1):
        lam[k - 1] = vv[k - 1] - (vv[k + 1] if k + 2 <= N else 0)
    return lam
