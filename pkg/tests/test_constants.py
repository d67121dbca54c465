import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logcoef import constants as K
from oracles import series_with_tail

TIGHT = mpmath.mpf(10) ** -30


def close(x, y, tol=TIGHT):
    with mpmath.workprec(K.PREC):
        return abs(x.mid - (y.mid if isinstance(y, K.HPReal) else y)) <= tol


def ref(expr):
    with mpmath.workprec(K.PREC):
        return expr()


def test_digamma_examples():
    assert close(K.digamma(1), ref(lambda: -mpmath.euler))
    assert close(K.digamma(2), ref(lambda: 1 - mpmath.euler))
    assert close(K.polygamma(1, 1), ref(lambda: mpmath.pi**2 / 6))
    assert K.digamma(1).err < TIGHT


def test_polygamma_against_mpmath():
    for m in range(3):
        for x in (F(1, 20), F(1, 2), 1, F(21, 20), 3, 70):
            X = ref(lambda: mpmath.mpf(x.numerator) / x.denominator if isinstance(x, F) else mpmath.mpf(x))
            val = K.polygamma(m, x)
            assert close(val, ref(lambda: mpmath.psi(m, X)))
            assert val.err < TIGHT


def test_domain_errors():
    for bad in (lambda: K.digamma(0), lambda: K.digamma(-1), lambda: K.A(-1), lambda: K.B(0),
                lambda: K.C(-1, 1), lambda: K.D(1, -2), lambda: K.E(0, 1), lambda: K.zeta(1)):
        with pytest.raises(ValueError):
            bad()


def test_zeta():
    assert close(K.zeta(2), ref(lambda: mpmath.pi**2 / 6))
    assert close(K.zeta(4), ref(lambda: mpmath.pi**4 / 90), mpmath.mpf(10) ** -25)
    assert close(K.zeta(3), ref(lambda: mpmath.zeta(3)))
    assert K.zeta(3).err < TIGHT


def test_A_values():
    assert close(K.A(1), 1, mpmath.mpf(10) ** -20)
    assert close(K.A(2), ref(lambda: mpmath.mpf(3) / 4))
    assert close(K.A(3), ref(lambda: mpmath.mpf(11) / 18))
    assert close(K.A(0), ref(lambda: mpmath.pi**2 / 6))
    # sum 1/(n(n+1/2)) = 4(1 - log 2); the weight n/(2n+1) has half of it
    assert close(K.A(F(1, 2)), ref(lambda: 4 * (1 - mpmath.log(2))))
    assert close(K.A(F(-1, 2)), ref(lambda: 4 * mpmath.log(2)))


def test_A_limit():
    z2 = ref(lambda: mpmath.pi**2 / 6)
    errs = [abs(float(K.A(F(1, 10**j)).mid - z2)) for j in (2, 4, 6, 9, 12)]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 1e-11


def test_B_values():
    assert abs(float(K.B_four_thirds()) - 0.98727) < 1e-5
    assert close(K.B(1), ref(lambda: (mpmath.pi * mpmath.coth(mpmath.pi) - 1) / 2))
    assert abs(float(K.B(F(1, 10**4))) - math.pi**2 / 6) < 1e-6
    assert close(K.B(F(1, 10**10)), ref(lambda: mpmath.pi**2 / 6 - mpmath.zeta(4) * mpmath.mpf(10) ** -20))


def test_C_values():
    assert close(K.C(F(1, 2), F(-1, 2)), 2)
    assert close(K.C(F(1, 2), 1), ref(lambda: 2 * (2 * mpmath.log(2) - 1)))
    assert close(K.C(1, 1), ref(lambda: mpmath.pi**2 / 6 - 1))


def test_D_values():
    assert close(K.D(1, 2), ref(lambda: mpmath.mpf(1) / 4))
    assert close(K.D(1, 1), ref(lambda: 2 - mpmath.pi**2 / 6))
    assert close(K.D(0, 0), ref(lambda: mpmath.zeta(3)))
    # one zero argument: (zeta(2) - A_a)/a
    assert close(K.D(0, 2), ref(lambda: (mpmath.pi**2 / 6 - mpmath.mpf(3) / 4) / 2))


def test_E_values():
    assert abs(float(K.E_twentieth()) - 0.62787) < 1e-5
    assert close(K.E(1, 1), ref(lambda: mpmath.psi(1, 2) + mpmath.psi(2, 2) / 2))
    # the alternative closed form carries the opposite sign
    assert close(K.e_alt_closed_form(), -K.E_twentieth())


def test_cubic_weight_constants():
    c1, c2 = K.cubic_weight_constants()
    assert c1.mid > 0 and c2.mid > 0
    assert abs(float(c1) - 0.2020569) < 1e-7
    assert close(c2, ref(lambda: 3 - mpmath.pi**2 / 6 - mpmath.zeta(3)))
    # 1/(n(n+1)^3) = 1/n - 1/(n+1) - 1/(n+1)^2 - 1/(n+1)^3, summed in closed form
    oracle = ref(lambda: 1 - (mpmath.pi**2 / 6 - 1) - (mpmath.zeta(3) - 1))
    assert close(c2, oracle)


@pytest.mark.parametrize("name,value,term", [
    ("A(3/2)", lambda: K.A(F(3, 2)), lambda n: 1 / (n * (n + 1.5))),
    ("B(2/sqrt3)", K.B_four_thirds, lambda n: 1 / (n * n + 4 / 3)),
    ("C(1/3,2)", lambda: K.C(F(1, 3), 2), lambda n: 1 / ((n + 1 / 3) * (n + 2))),
    ("D(1/2,3)", lambda: K.D(F(1, 2), 3), lambda n: 1 / (n * (n + 0.5) * (n + 3))),
    ("E(1,1/20)", K.E_twentieth, lambda n: n / ((n + 1) ** 2 * (n + 0.05))),
])
def test_series_oracles(name, value, term):
    assert abs(float(value()) - series_with_tail(term)) < 1e-8


def test_symmetry():
    for a, b in ((F(1, 3), 2), (0, F(5, 7)), (F(-1, 2), F(9, 4))):
        assert close(K.C(a, b), K.C(b, a)) and close(K.D(a, b), K.D(b, a))


@settings(max_examples=20)
@given(st.fractions(min_value=F(1, 100), max_value=5, max_denominator=100))
def test_branch_continuity(a):
    h = F(1, 10**7)
    assert abs(float(K.C(a, a + h).mid - K.C(a, a).mid)) <= 1e-6
    assert abs(float(K.D(a, a + h).mid - K.D(a, a).mid)) <= 1e-6
    assert abs(float(K.E(a, a + h).mid - K.E(a, a).mid)) <= 1e-6


def test_near_equal_branches_agree_with_generic():
    # separation just above and just below the switch give nearly the same value
    a = F(1, 3)
    for fn in (K.C, K.D, K.E):
        below = fn(a, a + F(1, 10**9)).mid
        above = fn(a, a + F(2, 10**8)).mid
        assert abs(float(below - above)) < 1e-7
    assert close(K.C(a, a + F(1, 10**9)), K.C(a, a), mpmath.mpf(10) ** -8)


def test_error_propagation_outward():
    x = K.HPReal(mpmath.mpf(1), mpmath.mpf(10) ** -10)
    y = (x * 3 - 1) / x
    assert y.err >= mpmath.mpf(10) ** -10
    assert K.log(x).err >= mpmath.mpf(10) ** -10 * 0.99
