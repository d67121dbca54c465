"""Certification of weighted logarithmic-coefficient inequalities.

For a weight sequence p_n and a cutoff N the inequality

    sum n p_n |gamma_n|^2 <= sum p_n / n

holds for every univalent f provided

  (0)  p_{N+1} > 0,
  (i)  lambda_n >= 0 for all n > N,
  (ii) Q_k(x) = sum_{j=0}^{N-k} nu_{j+k} P_j^(2k,0)(x) > 0 on (-1, 1), k = 1..N.

The polynomials Q_k are built in exact arithmetic and (ii) is decided by
Sturm counting, so a CERTIFIED report contains no floating point step.
The condition is sufficient only: a FAILED report says the Q_k route is
obstructed (with a witness), not that the inequality is false.

Index convention: the summand coefficient is written with a single index,
nu_m = q_m - q_{N+1} with m = j + k.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable, Iterable

from .exactnum import (
    PositivityCertificate,
    RatPoly,
    certify_positive,
    count_real_roots,
    frac_str,
    poly_eval,
    poly_to_strings,
)
from .jacobi import jacobi_poly
from .weights import DerivedSeq, TailCertificate, WeightFamily, nu, parse_family, tail_certificate, v

CERTIFIED = "CERTIFIED"
FAILED = "FAILED"
INDETERMINATE = "INDETERMINATE"

EQUALITY_NOTE = "equality holds exactly for rotations of the Koebe function z/(1-z)^2"


def _require_exact(seq: DerivedSeq):
    if not seq.exact:
        raise ValueError(f"family {seq.family} is not rational-valued; exact certification unavailable")


def build_Q(seq: DerivedSeq, k: int) -> RatPoly:
    """Q_k = sum_{j=0}^{N-k} nu_{j+k} P_j^(2k,0), exactly."""
    _require_exact(seq)
    if not 1 <= k <= seq.N:
        raise ValueError(f"k={k} outside 1..{seq.N}")
    out = RatPoly()
    for j in range(seq.N - k + 1):
        out = out + jacobi_poly(j, 2 * k, 0).scale(nu(seq, j + k))
    return out


@dataclass(frozen=True)
class RootProfile:
    total_real_roots: int
    roots_left_of_minus1: int
    roots_in_unit_interval: int
    roots_right_of_1: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def root_profile(seq: DerivedSeq, k: int) -> RootProfile:
    """Distinct real roots of Q_k over (-oo, -1], (-1, 1) and [1, oo)."""
    return profile_of(build_Q(seq, k))


def profile_of(Q: RatPoly) -> RootProfile:
    inf = math.inf
    if Q.degree <= 0:
        return RootProfile(0, 0, 0, 0)
    left = count_real_roots(Q, -inf, -1) + (poly_eval(Q, -1) == 0)
    mid = count_real_roots(Q, -1, 1)
    right = count_real_roots(Q, 1, inf) + (poly_eval(Q, 1) == 0)
    total = count_real_roots(Q, -inf, inf)
    assert total == left + mid + right
    return RootProfile(total, left, mid, right)


ZERO_Q_NOTE = "Q_k vanishes identically, so tau_k' = 0; the non-strict requirement tau_k' <= 0 holds"


@dataclass
class ConditionII:
    k: int
    Q: RatPoly
    certificate: PositivityCertificate | None  # None when Q_k is the zero polynomial
    Q_at_minus1: Fraction
    v_k: Fraction

    @property
    def vanishes(self) -> bool:
        return self.certificate is None

    @property
    def passed(self) -> bool:
        return self.vanishes or self.certificate.positive

    @property
    def root_count(self) -> int | None:
        return None if self.vanishes else self.certificate.root_count

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "Q": poly_to_strings(self.Q),
            "roots_in_interval": self.root_count,
            "passed": self.passed,
            "Q_at_minus1": frac_str(self.Q_at_minus1),
            "certificate": ZERO_Q_NOTE if self.vanishes else self.certificate.to_dict(),
        }


@dataclass
class CertificateReport:
    family: str
    N: int
    p_next: Fraction
    tail: TailCertificate
    v_values: list[Fraction]
    condition_ii: list[ConditionII]
    verdict: str
    reason: str
    notes: list[str] = field(default_factory=list)

    @property
    def condition0(self) -> bool:
        return self.p_next > 0

    @property
    def condition_i(self) -> bool:
        return self.tail.covers(self.N)

    @property
    def necessary_v(self) -> bool:
        return all(x >= 0 for x in self.v_values)

    @property
    def parity_identity(self) -> bool:
        """Q_k(-1) == v_k for every k (exact)."""
        return all(c.Q_at_minus1 == c.v_k for c in self.condition_ii)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "N": self.N,
            "verdict": self.verdict,
            "reason": self.reason,
            "condition0": {"passed": self.condition0, "p_N_plus_1": frac_str(self.p_next)},
            "condition_i": {"passed": self.condition_i, **self.tail.to_dict()},
            "necessary_v": {
                "passed": self.necessary_v,
                "v": [{"k": k, "value": frac_str(x), "sign": (x > 0) - (x < 0)}
                      for k, x in enumerate(self.v_values, start=1)],
            },
            "condition_ii": [c.to_dict() for c in self.condition_ii],
            "parity_identity": self.parity_identity,
            "notes": list(self.notes),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def certify(family: WeightFamily, N: int) -> CertificateReport:
    """Run conditions (0), (i), (ii) and the v_k >= 0 pre-filter."""
    seq = DerivedSeq(family, N)
    _require_exact(seq)
    p_next = seq.p(N + 1)
    tail = tail_certificate(family)
    vs = [v(seq, k) for k in range(1, N + 1)]
    checks = []
    for k in range(1, N + 1):
        Q = build_Q(seq, k)
        cert = None if Q.is_zero() else certify_positive(Q, -1, 1)
        checks.append(ConditionII(k, Q, cert, poly_eval(Q, -1), vs[k - 1]))

    if p_next <= 0:
        verdict, reason = FAILED, f"condition (0): p_{N + 1} = {p_next} <= 0"
    elif any(x < 0 for x in vs):
        k = next(i for i, x in enumerate(vs, 1) if x < 0)
        verdict, reason = FAILED, f"necessary condition: v_{k} = {vs[k - 1]} < 0"
    elif not all(c.passed for c in checks):
        c = next(c for c in checks if not c.passed)
        w = c.certificate
        where = f"Q_{c.k}({w.witness_point}) = {w.witness_value}" if w.witness_point is not None \
            else f"{w.root_count} root(s) in (-1, 1)"
        verdict, reason = FAILED, f"condition (ii) at k={c.k}: {where}"
    elif not tail.covers(N):
        verdict, reason = INDETERMINATE, f"condition (i): no tail certificate reaching n > {N} ({tail.method})"
    else:
        verdict, reason = CERTIFIED, "all conditions hold"
    notes = [EQUALITY_NOTE] if verdict == CERTIFIED else []
    notes += [f"k={c.k}: {ZERO_Q_NOTE}" for c in checks if c.vanishes]
    return CertificateReport(family.spec(), N, p_next, tail, vs, checks, verdict, reason, notes)


def smallest_certified_N(family: WeightFamily, N_max: int) -> int | None:
    for N in range(1, N_max + 1):
        if certify(family, N).verdict == CERTIFIED:
            return N
    return None


# ---------------------------------------------------------------------------
# stored tables


TABLE_IDS = ("twofactor_n5", "ratquad_n9", "squared_n9")


def load_tables(path=None) -> dict:
    if path is None:
        text = resources.files("logcoef").joinpath("data/q_tables.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)["tables"]


@dataclass
class Mismatch:
    k: int
    degree: int
    expected: str
    computed: str


@dataclass
class AppendixCheck:
    table_id: str
    family: str
    N: int
    matched: int
    total: int
    mismatches: list[Mismatch]
    profiles: dict[int, RootProfile]

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.matched == self.total

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "table": self.table_id,
            "family": self.family,
            "N": self.N,
            "matched": self.matched,
            "total": self.total,
            "ok": self.ok,
            "mismatches": [m.__dict__ for m in self.mismatches],
            "root_profiles": {str(k): p.to_dict() for k, p in self.profiles.items()},
        }


def verify_appendix(table_id: str, tables: dict | None = None) -> AppendixCheck:
    """Rebuild every Q_k of a stored table and compare coefficient by coefficient."""
    tables = load_tables() if tables is None else tables
    if table_id not in tables:
        raise KeyError(f"unknown table {table_id!r}")
    t = tables[table_id]
    fam = parse_family(t["family"])
    N = t["N"]
    seq = DerivedSeq(fam, N)
    mismatches, matched, profiles = [], 0, {}
    for key, coeffs in sorted(t["Q"].items(), key=lambda kv: int(kv[0])):
        k = int(key)
        expected = [Fraction(s) for s in coeffs]
        got = build_Q(seq, k)
        gc = list(got.coeffs)
        n = max(len(expected), len(gc))
        bad = False
        for d in range(n):
            e = expected[d] if d < len(expected) else Fraction(0)
            g = gc[d] if d < len(gc) else Fraction(0)
            if e != g:
                bad = True
                mismatches.append(Mismatch(k, d, frac_str(e), frac_str(g)))
        matched += not bad
        profiles[k] = profile_of(got)
    missing = [k for k in range(1, N + 1) if str(k) not in t["Q"]]
    for k in missing:
        mismatches.append(Mismatch(k, -1, "missing", "present"))
    return AppendixCheck(table_id, fam.spec(), N, matched, N, mismatches, profiles)


def parity_claims_hold(check: AppendixCheck) -> bool:
    """Odd k: no real roots; even k: exactly one real root, left of -1."""
    for k, prof in check.profiles.items():
        if prof.roots_in_unit_interval:
            return False
        if check.table_id in ("ratquad_n9", "squared_n9"):
            if k % 2 == 1 and prof.total_real_roots != 0:
                return False
            if k % 2 == 0 and not (prof.total_real_roots == 1 and prof.roots_left_of_minus1 == 1):
                return False
    return True


# ---------------------------------------------------------------------------
# one-parameter scans


@dataclass
class ScanResult:
    points: list[tuple[Fraction, str]]

    @property
    def last_certified(self) -> Fraction | None:
        good = [b for b, verdict in self.points if verdict == CERTIFIED]
        return good[-1] if good else None

    @property
    def first_failed(self) -> Fraction | None:
        return next((b for b, verdict in self.points if verdict == FAILED), None)


def grid(lo, hi, steps: int) -> list[Fraction]:
    lo, hi = Fraction(lo), Fraction(hi)
    if steps < 1:
        return [lo]
    return [lo + (hi - lo) * i / steps for i in range(steps + 1)]


def scan_parameter(template: Callable[[Fraction], WeightFamily], b_lo, b_hi, steps: int, N: int,
                   points: Iterable | None = None) -> ScanResult:
    bs = list(points) if points is not None else grid(b_lo, b_hi, steps)
    return ScanResult([(Fraction(b), certify(template(Fraction(b)), N).verdict) for b in bs])


def b0_bracket(tol=Fraction(1, 10**30)) -> tuple[Fraction, Fraction]:
    """Rational bracket [lo, hi] of the real root of 440 - 317b - 40b^2 - 3b^3, width <= tol.

    The root is the largest b with v_1 >= 0 for p_n = n/(n^2 + b), N = 3.
    """
    cubic = RatPoly([440, -317, -40, -3])
    if count_real_roots(cubic, -math.inf, math.inf) != 1:
        raise AssertionError("cubic should have a single real root")
    lo, hi = Fraction(1), Fraction(2)
    if not poly_eval(cubic, lo) > 0 > poly_eval(cubic, hi):
        raise AssertionError("no sign change on [1, 2]")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if poly_eval(cubic, mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo, hi
