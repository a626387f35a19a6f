import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from arveson import multiindex as mi
from arveson.polynomials import Polynomial
from arveson.errors import InputError


def test_constructors():
    p = Polynomial.monomial((2, 0), 3.0)
    assert p.degree() == 2
    assert Polynomial.zero(2).degree() == -1
    assert Polynomial.constant(2, 5.0)((0.3, 0.4)) == 5.0
    x1 = Polynomial.variable(2, 0)
    assert x1((0.25, -1.0)) == 0.25


def test_dimension_mismatch():
    with pytest.raises(InputError):
        Polynomial(2, {(1,): 1.0})
    with pytest.raises(InputError):
        Polynomial.variable(2, 0) + Polynomial.variable(3, 0)


def test_arithmetic_and_eval():
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    p = (x + 2 * y) * (x - y) + 1
    z = (0.3, -0.7)
    want = (z[0] + 2 * z[1]) * (z[0] - z[1]) + 1
    assert_allclose(p(z), want, rtol=1e-14)


def test_partial_derivative():
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    p = x * x * y + 3 * y
    px = p.partial(0)
    assert px == 2 * x * y
    assert p.derivative((2, 1)) == Polynomial.constant(2, 2.0)


def test_shift_recenters_exactly():
    x = Polynomial.variable(1, 0)
    p = x * x * x - 2 * x + 5
    z = (0.4,)
    q = p.shift(z)
    # q(u) = p(u + z)
    for u in [(0.0,), (0.3,), (-0.9,)]:
        assert_allclose(q(u), p((u[0] + z[0],)), rtol=1e-13)


def test_taylor_coeff_is_scaled_derivative():
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    p = (x + y) ** 3
    # coefficient of (x-z)^alpha in the expansion at z
    z = (0.1, -0.2)
    alpha = (2, 1)
    want = p.derivative(alpha)(z) / mi.index_factorial(alpha)
    assert_allclose(p.taylor_coeff(z, alpha), want, rtol=1e-12)


def test_coeff_vector_round_trip():
    basis = mi.enumerate_indices(2, 3)
    p = Polynomial(2, {(1, 2): 2.0 - 1j, (0, 0): 3.0})
    v = p.coeff_vector(basis)
    q = Polynomial.from_coeff_vector(2, v, basis)
    assert q == p


def test_coeff_vector_degree_overflow():
    basis = mi.enumerate_indices(2, 1)
    p = Polynomial.monomial((2, 0))
    with pytest.raises(InputError):
        p.coeff_vector(basis)


def test_jet_truncates_at_order():
    x = Polynomial.variable(1, 0)
    p = (x - 0.5) ** 4 + 2 * (x - 0.5)
    basis = mi.enumerate_indices(1, 2)
    j = p.jet((0.5,), 2, basis)
    # orders 0..2 only: constant 0, linear 2, quadratic 0
    assert_allclose(j, [0.0, 2.0, 0.0], atol=1e-14)


coeff = st.complex_numbers(
    min_magnitude=0, max_magnitude=4, allow_nan=False, allow_infinity=False
)


@given(
    st.dictionaries(
        st.tuples(st.integers(0, 3), st.integers(0, 3)), coeff, max_size=5
    ),
    st.dictionaries(
        st.tuples(st.integers(0, 3), st.integers(0, 3)), coeff, max_size=5
    ),
)
def test_product_evaluates_pointwise(ca, cb):
    p = Polynomial(2, ca)
    q = Polynomial(2, cb)
    z = (0.37, -0.61)
    assert_allclose((p * q)(z), p(z) * q(z), atol=1e-9)


@given(
    st.dictionaries(st.tuples(st.integers(0, 4)), coeff, max_size=6),
    st.tuples(st.floats(-0.9, 0.9)),
)
def test_shift_then_unshift_is_identity(cs, z):
    p = Polynomial(1, cs)
    q = p.shift(z).shift(tuple(-x for x in z))
    r = p - q
    assert all(abs(c) < 1e-7 for c in r.coeffs.values())
