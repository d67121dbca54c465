from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logcoef.exactnum import RatPoly, poly_eval
from logcoef.weights import (
    Custom,
    DerivedSeq,
    FamilyDomainError,
    GeomShift,
    Geometric,
    InvQuad,
    InvTwoFactor,
    NoSymbolicCondition,
    PowerLaw,
    RatQuadNum,
    Reciprocal,
    SquaredFactor,
    TwoFactorNum,
    convexity_condition,
    lambda_,
    mu,
    nu,
    p,
    parse_family,
    second_derivative_numerator,
    tail_certificate,
    v,
)


def test_p_examples():
    assert p(RatQuadNum(0, F(4, 3)), 1) == F(3, 7)
    assert p(SquaredFactor(1, F(1, 20)), 1) == F(5, 21)
    assert p(TwoFactorNum(1, 1), 2) == F(2, 9)
    with pytest.raises(ValueError):
        p(Reciprocal(1), 0)


def test_lambda_examples():
    assert lambda_(DerivedSeq(TwoFactorNum(1, 1), 3), 1) == F(-1, 144)
    assert lambda_(DerivedSeq(RatQuadNum(0, F(4, 3)), 3), 1) == F(-27, 868)
    s = DerivedSeq(SquaredFactor(1, F(1, 20)), 3)
    assert lambda_(s, 1) == F(-6985, 630252)
    assert lambda_(s, 2) == F(12103, 2025810)


def test_domain_errors_at_construction():
    with pytest.raises(FamilyDomainError):
        Reciprocal(-1)
    with pytest.raises(FamilyDomainError):
        RatQuadNum(-3, 1)  # n^2 - 3n + 1 < 0 at n = 1, 2
    with pytest.raises(FamilyDomainError):
        TwoFactorNum(F(-3, 2), 0)
    with pytest.raises(FamilyDomainError):
        GeomShift(0, 1)
    with pytest.raises(FamilyDomainError):
        PowerLaw(0)


def test_exact_values():
    for fam in (Reciprocal(F(1, 3)), RatQuadNum(1, 2), InvQuad(0, 1), InvTwoFactor(F(1, 2), 2),
                SquaredFactor(1, F(1, 20)), GeomShift(F(1, 2), F(1, 3)), Geometric(F(1, 2))):
        assert all(isinstance(fam.p(n), F) for n in range(1, 20))
    assert isinstance(PowerLaw(2).p(3), mpmath.mpf)


def test_mu_nu_v_examples():
    s = DerivedSeq(TwoFactorNum(1, 1), 5)
    assert mu(s, 5) == lambda_(s, 5)
    assert nu(s, 5) == lambda_(s, 5)
    assert mu(s, 1) == sum(lambda_(s, n) * n for n in range(1, 6))
    assert nu(s, 1) == (F(1, 4) - F(2, 9)) - (F(6, 49) - F(7, 64))
    s3 = DerivedSeq(RatQuadNum(0, 1), 3)
    assert v(s3, 1) == lambda_(s3, 1) + lambda_(s3, 3)
    s4 = DerivedSeq(RatQuadNum(0, 1), 4)
    assert v(s4, 2) == lambda_(s4, 2) + lambda_(s4, 4)
    with pytest.raises(ValueError):
        mu(s, 6)
    with pytest.raises(ValueError):
        nu(s, 0)


@given(st.fractions(min_value=0, max_value=3, max_denominator=40))
def test_v13_closed_form(b):
    s = DerivedSeq(RatQuadNum(0, b), 3)
    expected = 12 * (440 - 317 * b - 40 * b**2 - 3 * b**3) / ((1 + b) * (4 + b) * (9 + b) * (16 + b) * (25 + b))
    assert v(s, 1) == expected


families = st.one_of(
    st.builds(Reciprocal, st.fractions(min_value=F(-9, 10), max_value=5, max_denominator=20)),
    st.builds(TwoFactorNum, st.fractions(min_value=0, max_value=3, max_denominator=10),
              st.fractions(min_value=0, max_value=3, max_denominator=10)),
    st.builds(InvTwoFactor, st.fractions(min_value=F(-1, 2), max_value=3, max_denominator=10),
              st.fractions(min_value=F(-1, 2), max_value=3, max_denominator=10)),
    st.builds(SquaredFactor, st.fractions(min_value=0, max_value=2, max_denominator=10),
              st.fractions(min_value=0, max_value=2, max_denominator=10)),
)


@given(families, st.integers(1, 12))
def test_telescoping_and_index_shift(fam, N):
    s = DerivedSeq(fam, N)
    for m in range(1, N + 1):
        assert nu(s, m) == sum(lambda_(s, n) for n in range(m, N + 1))
        if m < N:
            assert nu(s, m) - nu(s, m + 1) == lambda_(s, m)
        assert mu(s, m) == sum(j * lambda_(s, j + m - 1) for j in range(1, N - m + 2))
    for n in range(1, N + 2):
        assert s.q(n) == s.p(n) - s.p(n + 1)
        assert lambda_(s, n) == s.p(n) - 2 * s.p(n + 1) + s.p(n + 2)


def test_convexity_condition_examples():
    assert convexity_condition(RatQuadNum(0, 1)) is True
    assert convexity_condition(SquaredFactor(1, F(1, 20))) is False
    assert convexity_condition(RatQuadNum(0, F(6, 5))) is False
    assert convexity_condition(Reciprocal(1)) is True
    assert convexity_condition(GeomShift(1, F(1, 10))) is True  # 2 log 10 > 2
    assert convexity_condition(GeomShift(0, F(9, 10))) is False
    with pytest.raises(NoSymbolicCondition):
        convexity_condition(Custom(lambda n: F(1, n)))


def test_tail_certificate_thresholds():
    assert tail_certificate(RatQuadNum(0, F(4, 3))).n0 == 2
    assert tail_certificate(SquaredFactor(1, F(1, 20))).n0 == 3
    assert tail_certificate(Reciprocal(1)).n0 == 1
    assert tail_certificate(TwoFactorNum(1, 1)).n0 == 2
    assert tail_certificate(Custom(lambda n: F(1, n))).n0 is None


def test_tail_thresholds_are_sharp():
    # lambda just below the threshold is negative for these families
    assert DerivedSeq(RatQuadNum(0, F(4, 3)), 1).lam(1) < 0
    s = DerivedSeq(SquaredFactor(1, F(1, 20)), 3)
    assert s.lam(1) < 0 and s.lam(2) > 0


def test_second_derivative_numerator_independent():
    # phi = x^2/((x+a)^2 (x+b)); phi'' sign given by an independently derived quartic
    a, b = F(1), F(1, 20)
    num, den = RatPoly([0, 0, 1]), RatPoly([a, 1]) ** 2 * RatPoly([b, 1])
    sec = second_derivative_numerator(num, den)
    quartic = RatPoly([a * a * b * b, -2 * a * b * b, -6 * a * b, -2 * a, 1]).scale(2)
    for x in range(1, 30):
        lhs = poly_eval(sec, x) / poly_eval(den, x) ** 3
        rhs = poly_eval(quartic, x) / ((x + a) ** 4 * (x + b) ** 3)
        assert lhs == rhs


PRED_FAMILIES = [Reciprocal(0), Reciprocal(F(-1, 2)), RatQuadNum(0, 1), RatQuadNum(1, F(6, 7)),
                 TwoFactorNum(0, 1), InvQuad(1, 3), InvTwoFactor(1, 2), SquaredFactor(F(1, 4), 0),
                 GeomShift(2, F(1, 5)), Geometric(F(3, 4))]


@pytest.mark.parametrize("fam", PRED_FAMILIES, ids=str)
def test_predicate_families_convex(fam):
    assert convexity_condition(fam) is True
    s = DerivedSeq(fam, 256)
    assert all(s.lam(n) >= 0 for n in range(1, 257))


def test_tail_sum_identity_reciprocal():
    fam = Reciprocal(1)
    K = 10**4
    s = DerivedSeq(fam, K)
    prev = None
    for k in range(1, 11):
        err = abs(fam.p(k) - mu(s, k))
        assert err < F(1, 1000)
    # monotone convergence in K
    for k in (1, 5):
        errs = [abs(fam.p(k) - mu(DerivedSeq(fam, KK), k)) for KK in (20, 80, 320)]
        assert errs[0] > errs[1] > errs[2]


def test_parse_family_roundtrip():
    for text in ("ratquadnum:a=0,b=4/3", "squaredfactor:alpha=1,beta=1/20", "twofactornum:alpha=1,beta=1",
                 "geomshift:alpha=1/2,r=1/3", "reciprocal:alpha=-1/2"):
        fam = parse_family(text)
        assert parse_family(fam.spec()) == fam
    for bad in ("nope", "ratquadnum:a=0", "ratquadnum:a=0,b=x", "reciprocal:alpha"):
        with pytest.raises(ValueError):
            parse_family(bad)
