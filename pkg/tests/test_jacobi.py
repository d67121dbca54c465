from fractions import Fraction as F
from math import comb

import pytest
import sympy

from logcoef.exactnum import RatPoly, poly_eval
from logcoef.jacobi import jacobi_partial_sum, jacobi_poly


def rodrigues(j, a, b):
    x = sympy.symbols("x")
    expr = (1 - x) ** (a + j) * (1 + x) ** (b + j)
    d = sympy.diff(expr, x, j) if j else expr
    P = sympy.Rational((-1) ** j, 2**j * sympy.factorial(j)) * d / ((1 - x) ** a * (1 + x) ** b)
    poly = sympy.Poly(sympy.cancel(sympy.simplify(P)), x)
    cs = [F(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return RatPoly(cs)


@pytest.mark.parametrize("a,b", [(2, 0), (4, 0), (6, 0), (1, 1)])
@pytest.mark.parametrize("j", range(9))
def test_recurrence_matches_rodrigues(j, a, b):
    assert jacobi_poly(j, a, b) == rodrigues(j, a, b)


def test_examples():
    assert jacobi_poly(0, 2, 0) == RatPoly([1])
    assert jacobi_poly(1, 2, 0) == RatPoly([1, 2])
    assert jacobi_partial_sum(0, 3) == RatPoly([1])
    assert jacobi_partial_sum(1, 1) == RatPoly([2, 2])


def test_parity_endpoint_identity():
    for m in range(17):
        for k in range(1, 11):
            assert poly_eval(jacobi_partial_sum(m, k), -1) == F(1 + (-1) ** m, 2)


def test_value_at_one():
    for j in range(13):
        for k in range(1, 7):
            assert poly_eval(jacobi_poly(j, 2 * k, 0), 1) == comb(j + 2 * k, j)


def test_rational_parameters_and_domain():
    P = jacobi_poly(3, F(1, 2), F(-1, 3))
    assert P.degree == 3
    with pytest.raises(ValueError):
        jacobi_poly(2, -1, 0)
    with pytest.raises(ValueError):
        jacobi_poly(-1)
