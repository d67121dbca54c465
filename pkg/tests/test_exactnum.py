import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from logcoef.exactnum import (
    RatPoly,
    as_fraction,
    certify_positive,
    count_real_roots,
    isolate_roots,
    poly_eval,
    poly_from_strings,
    poly_gcd,
    poly_to_strings,
    squarefree_part,
    sturm_chain,
)

X = RatPoly.x()
Q4_TWOFACTOR = RatPoly([F(15171, 705600), F(11875, 705600)])
Q5_TWOFACTOR = RatPoly([F(95, 28224)])


def same_up_to_positive_scale(p, q):
    if p.degree != q.degree:
        return False
    r = p.lc() / q.lc()
    return r > 0 and p == q.scale(r)


def test_canonical_form():
    assert RatPoly([1, 2, 0, 0]).degree == 1
    assert RatPoly([0, 0]).is_zero() and RatPoly([]).degree == -1
    assert RatPoly([F(2, 4)]).coeffs == (F(1, 2),)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    assert as_fraction("3/6") == F(1, 2)


def test_poly_eval_examples():
    assert poly_eval(RatPoly(), 7) == 0
    assert poly_eval(Q5_TWOFACTOR, F(1, 2)) == F(95, 28224)
    assert poly_eval(Q4_TWOFACTOR, -1) == F(3296, 705600) == F(103, 22050)


def test_sturm_chain_examples():
    ch = sturm_chain(X * X - 2).chain
    assert len(ch) == 3
    assert same_up_to_positive_scale(ch[0], X * X - 2)
    assert same_up_to_positive_scale(ch[1], X.scale(2))
    assert ch[2].degree == 0 and ch[2].lc() > 0
    ch = sturm_chain(X * X).chain
    assert [c.degree for c in ch] == [1, 0]
    assert same_up_to_positive_scale(ch[0], X)
    ch = sturm_chain(Q4_TWOFACTOR).chain
    assert len(ch) == 2 and same_up_to_positive_scale(ch[0], Q4_TWOFACTOR)
    assert same_up_to_positive_scale(ch[1], RatPoly([F(11875, 705600)]))


def test_sturm_chain_degenerate():
    with pytest.raises(ValueError, match="degenerate input"):
        sturm_chain(RatPoly())


def test_count_real_roots_examples():
    p = X * X - 2
    assert count_real_roots(p, 0, 2) == 1
    assert count_real_roots(p, -2, 2) == 2
    assert count_real_roots(Q4_TWOFACTOR, -1, 1) == 0
    assert count_real_roots(Q4_TWOFACTOR, -2, -1) == 1
    assert count_real_roots(p, -math.inf, math.inf) == 2
    with pytest.raises(ValueError):
        count_real_roots(p, 1, 1)
    with pytest.raises(ValueError):
        count_real_roots(p, 2, 1)


def test_open_interval_excludes_endpoints():
    p = (X - 1) * (X + 1)
    assert count_real_roots(p, -1, 1) == 0
    assert count_real_roots(p, -2, 2) == 2


def test_multiple_roots_counted_once():
    p = (X - 1) ** 3 * (X + 2) ** 2
    assert count_real_roots(p, -5, 5) == 2
    assert squarefree_part(p).degree == 2


def test_certify_positive_examples():
    assert certify_positive(Q5_TWOFACTOR, -1, 1)
    c = certify_positive(X * X - 2, -1, 1)
    assert not c and c.witness_point == 0 and c.witness_value == -2
    with pytest.raises(ValueError):
        certify_positive(RatPoly(), -1, 1)


def test_certify_positive_touching_root_gives_witness():
    c = certify_positive((X - F(1, 3)) ** 2, -1, 1)
    assert not c
    assert c.witness_point is not None and poly_eval((X - F(1, 3)) ** 2, c.witness_point) <= 0


def test_midpoint_root_perturbed():
    p = X * X  # root at the midpoint of (-1, 1)
    c = certify_positive(p, -1, 1)
    assert not c and c.sample == F(-1, 2)


def test_json_roundtrip():
    p = RatPoly([F(-3, 7), 0, F(5, 2)])
    assert RatPoly.from_json(p.to_json()) == p
    assert poly_to_strings(p) == ["-3/7", "0/1", "5/2"]
    assert poly_from_strings(poly_to_strings(p)) == p


def test_isolating_intervals():
    p = (X - F(1, 3)) * (X - F(1, 2)) * (X + F(2, 3))
    ivs = isolate_roots(p, -1, 1)
    assert len(ivs) == 3
    for lo, hi in ivs:
        assert count_real_roots(p, lo, hi) + (poly_eval(p, hi) == 0) == 1


polys = st.lists(st.integers(-20, 20), min_size=2, max_size=7).map(RatPoly).filter(lambda p: p.degree >= 1)
rats = st.fractions(min_value=-5, max_value=5, max_denominator=50)


@given(polys, rats, rats, rats)
def test_count_additivity(p, a, b, c):
    a, b, c = sorted((a, b, c))
    assume(a < b < c)
    whole = count_real_roots(p, a, c)
    assert whole == count_real_roots(p, a, b) + count_real_roots(p, b, c) + (poly_eval(p, b) == 0)


@given(polys)
def test_chain_of_squarefree_ends_in_constant(p):
    ch = sturm_chain(squarefree_part(p)).chain
    assert ch[-1].degree == 0 and not ch[-1].is_zero()


@given(polys)
def test_gcd_divides(p):
    g = poly_gcd(p, p.derivative())
    assert (p % g).is_zero() and (p.derivative() % g).is_zero() if not g.is_zero() else True


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=4), st.integers(1, 30), rats, rats)
def test_certified_positive_means_positive(cs, shift, a, b):
    assume(a < b)
    q = RatPoly(cs)
    p = q * q + RatPoly([F(shift, 100)])  # strictly positive everywhere
    p = p * (RatPoly([1, 0, 1])) if shift % 2 else p
    cert = certify_positive(p, a, b)
    assert cert
    rng = random.Random(shift)
    for _ in range(1000):
        t = F(rng.randrange(1, 10**6), 10**6)
        assert poly_eval(p, a + (b - a) * t) > 0


@given(polys, rats)
def test_evaluation_exact_and_repeatable(p, x):
    assert poly_eval(p, x) == poly_eval(p, x) == p(x)
