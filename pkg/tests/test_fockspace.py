import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from numpy.testing import assert_allclose

from arveson import fockspace as fk
from arveson import multiindex as mi
from arveson.errors import InputError
from arveson.polynomials import Polynomial


# -- oracles ---------------------------------------------------------------

def kernel_series_oracle(z, w, terms=4000):
    """Sum the kernel series directly in high precision."""
    with mpmath.workdps(50):
        ip = mpmath.fsum(
            mpmath.mpc(zi) * mpmath.conj(mpmath.mpc(wi)) for zi, wi in zip(z, w)
        )
        return complex(mpmath.fsum(ip**k for k in range(terms)))


def jet_norm_sq_oracle(z, alpha, cutoff=200):
    """Squared norm of the order-alpha jet at z, summed coefficient by
    coefficient in high precision: the component on x^(alpha+beta) carries
    (m+k)! (alpha+beta)! / (beta!)^2 * |z^beta|^2 with m=|alpha|, k=|beta|."""
    m = sum(alpha)
    d = len(z)
    with mpmath.workdps(60):
        zs = [mpmath.mpf(abs(x) ** 2) for x in z]
        terms = []
        for beta in mi.enumerate_indices(d, cutoff):
            k = sum(beta)
            w = mpmath.factorial(m + k)
            for aj, bj in zip(alpha, beta):
                w *= mpmath.factorial(aj + bj)
            for bj in beta:
                w /= mpmath.factorial(bj) ** 2
            for zj, bj in zip(zs, beta):
                w *= zj**bj
            terms.append(w)
        return float(mpmath.fsum(terms))


# -- truncation ------------------------------------------------------------

def test_truncation_degree_rule():
    rho = 0.5
    D = fk.truncation_degree(rho)
    assert rho ** (2 * (D + 1)) / (1 - rho**2) < fk.KERNEL_TAIL_TOL
    assert rho ** (2 * D) / (1 - rho**2) >= fk.KERNEL_TAIL_TOL


def test_truncation_degree_zero_point():
    assert fk.truncation_degree(0.0) == 0


def test_fock_truncation_layout():
    t = fk.FockTruncation(2, 3)
    assert t.dim == math.comb(2 + 3, 2)
    assert t.dim_up_to(2) == 6
    assert t.basis[0] == (0, 0)
    assert t.position[(1, 0)] == 1
    assert t.norms_sq[t.position[(1, 1)]] == Fraction(1, 2)


def test_monomial_norms_against_weight():
    # the squared monomial norm is the reciprocal multinomial weight
    t = fk.FockTruncation(3, 4)
    for a in t.basis:
        assert t.norms_sq[t.position[a]] == Fraction(1, mi.multinomial_weight(a))


def test_onb_coeffs_round_trip():
    t = fk.FockTruncation(2, 4)
    p = Polynomial(2, {(2, 1): 1.5 - 0.5j, (0, 0): 2.0, (0, 4): -1.0})
    v = t.onb_coeffs(p)
    q = t.from_onb_coeffs(v)
    r = p - q
    assert all(abs(c) < 1e-12 for c in r.coeffs.values())


def test_onb_coeffs_norm_is_space_norm():
    t = fk.FockTruncation(2, 3)
    p = Polynomial.monomial((2, 1), 1.0)
    # ||x^(2,1)||^2 = 2!1!/3! = 1/3
    assert_allclose(np.linalg.norm(t.onb_coeffs(p)) ** 2, 1 / 3, rtol=1e-14)


# -- kernel ----------------------------------------------------------------

def test_kernel_matches_series():
    z = [0.3 + 0.2j, -0.4]
    w = [0.1 - 0.5j, 0.25 + 0.25j]
    assert_allclose(fk.kernel(z, w), kernel_series_oracle(z, w), rtol=1e-13)


def test_kernel_rejects_sphere():
    with pytest.raises(InputError):
        fk.kernel([1.0, 0.0], [0.0, 0.0])


def test_kernel_at_origin():
    assert fk.kernel([0.0], [0.7]) == pytest.approx(1.0)


# -- jets ------------------------------------------------------------------

def test_jet_pairing_is_derivative():
    t = fk.FockTruncation(2, 8)
    z = (0.2 - 0.1j, 0.3)
    p = Polynomial(2, {(3, 1): 2.0, (1, 2): -1j, (0, 0): 0.5})
    for alpha in [(0, 0), (1, 0), (2, 1), (0, 3)]:
        j = fk.jet_vector(z, alpha, t)
        want = p.derivative(alpha)(z)
        assert_allclose(j.pair(p, t), want, atol=1e-12)


def test_jet_vector_norm_matches_series_oracle():
    t = fk.FockTruncation(2, fk.truncation_degree(0.5))
    z = (0.3, -0.4)
    for alpha in [(0, 0), (1, 0), (1, 1)]:
        j = fk.jet_vector(z, alpha, t)
        truncated = np.linalg.norm(j.coeffs) ** 2
        want = jet_norm_sq_oracle(z, alpha, cutoff=120)
        # truncated mass brackets the true squared norm from below, and the
        # tail bound covers what was cut
        assert truncated <= want + 1e-12
        assert truncated + j.tail_bound**2 >= want - 1e-12
        assert want - truncated <= j.tail_bound**2 + 1e-12


def test_jet_tail_bound_dominates_discarded_mass():
    # compare the reported tail bound with the actual mass beyond the cut
    z = (0.45, 0.1)
    alpha = (1, 0)
    small = fk.FockTruncation(2, 12)
    big = fk.FockTruncation(2, 40)
    js = fk.jet_vector(z, alpha, small)
    jb = fk.jet_vector(z, alpha, big)
    discarded = np.linalg.norm(jb.coeffs) ** 2 - np.linalg.norm(js.coeffs) ** 2
    assert js.tail_bound**2 >= discarded - 1e-15
    assert js.tail_bound < 5e-3


def test_jet_zero_order_is_kernel_vector():
    t = fk.FockTruncation(1, fk.truncation_degree(0.6))
    z = (0.6,)
    j = fk.jet_vector(z, (0,), t)
    # pairing with p recovers p(z)
    p = Polynomial(1, {(3,): 1.0, (1,): -2.0, (0,): 1.0})
    assert_allclose(j.pair(p, t), p(z), rtol=1e-12)
    # squared norm approaches k(z, z)
    assert_allclose(
        np.linalg.norm(j.coeffs) ** 2, fk.kernel(z, z).real, atol=1e-13
    )


def test_jet_rejects_outside_ball():
    t = fk.FockTruncation(1, 4)
    with pytest.raises(InputError):
        fk.jet_vector((1.2,), (0,), t)


# -- multiplication --------------------------------------------------------

def test_mult_matrix_multiplies_when_room():
    t = fk.FockTruncation(2, 5)
    p = Polynomial(2, {(1, 0): 1.0, (0, 1): -2.0})
    q = Polynomial(2, {(2, 1): 1.0, (0, 0): 3.0})
    M = fk.mult_matrix(p, t)
    got = M @ t.onb_coeffs(q)
    want = t.onb_coeffs(p * q)
    assert_allclose(got, want, atol=1e-13)


def test_mult_matrix_truncates_top_degree():
    t = fk.FockTruncation(1, 3)
    x = Polynomial.variable(1, 0)
    M = fk.mult_matrix(x, t)
    top = t.onb_coeffs(Polynomial.monomial((3,)))
    assert_allclose(M @ top, 0, atol=1e-14)


def test_coordinate_multipliers_form_row_contraction():
    t = fk.FockTruncation(3, 4)
    Ms = [fk.mult_matrix(Polynomial.variable(3, j), t) for j in range(3)]
    S = sum(M @ M.conj().T for M in Ms)
    vals = np.linalg.eigvalsh(S)
    assert vals.max() <= 1 + 1e-12
    # the top eigenvalue is exactly 1: row sums within a nonconstant degree
    assert_allclose(vals.max(), 1.0, rtol=1e-12)


def test_mult_matrix_degree_guard():
    t = fk.FockTruncation(1, 2)
    with pytest.raises(InputError):
        fk.mult_matrix(Polynomial.monomial((3,)), t)
