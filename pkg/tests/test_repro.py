import numpy as np
import pytest
from numpy.testing import assert_allclose

from arveson import repro
from arveson.errors import InputError


def test_f_two_variable_closed_values():
    # f(1) is the golden ratio, f(0) collapses to sqrt(2)
    assert_allclose(repro.f_two_variable(1.0), (1 + np.sqrt(5)) / 2, rtol=1e-12)
    assert_allclose(repro.f_two_variable(0.001), np.sqrt(2), atol=1e-5)
    assert_allclose(repro.f_two_variable(0.0), np.sqrt(2), rtol=1e-12)


def test_f_two_variable_is_row_norm():
    # f(eps)^2 must equal the norm of M1 M1* + M2 M2*
    for eps in [0.3, 1.0, 2.5]:
        R1, R2, f = repro.two_variable_family(eps)
        S = R1 @ R1.conj().T + R2 @ R2.conj().T
        # after dividing by f the row norm is exactly 1
        assert_allclose(np.linalg.norm(S, 2), 1.0, rtol=1e-12)
        assert_allclose(f, repro.f_two_variable(eps), rtol=1e-12)


def test_one_variable_rows():
    rep = repro.example_one_variable(eps_list=[0.1, 0.01], lams=[0.5])
    assert len(rep.rows) == 2
    for r in rep.rows:
        assert r.nullspace_dim == 2
        assert r.form_matches
        assert r.cyclic_ok
        assert r.annihilator_matches
        assert r.within_one_percent
        assert_allclose(r.measured_min_cond, 1.0 / r.eps, rtol=1e-2)
    assert rep.ok


def test_one_variable_other_base_point():
    rep = repro.example_one_variable(eps_list=[0.1], lams=[0.25])
    assert rep.ok


def test_one_variable_rejects_empty():
    with pytest.raises(InputError):
        repro.example_one_variable(eps_list=[])


def test_two_variable_rows():
    rep = repro.example_two_variable(eps_list=[0.1, 0.001])
    assert rep.ok
    for r in rep.rows:
        assert r.nullspace_dim == 3
        assert r.form_matches
        assert r.det_identity_ok
        assert r.bound_holds
        # the witness with b = c = 0 has condition number f^2/eps
        f = repro.f_two_variable(r.eps)
        assert_allclose(r.witness_cond, f**2 / r.eps, rtol=1e-6)
        # the measured minimum is within the witness and above the bound
        assert r.measured_min_cond <= r.witness_cond * (1 + 1e-9)
        assert r.measured_min_cond >= r.lower_bound - 1e-6
        # cube root growth: bound = (f^2/eps)^(1/3)
        assert_allclose(r.lower_bound, (f**2 / r.eps) ** (1 / 3), rtol=1e-9)


def test_two_variable_moebius_transport():
    rep = repro.example_two_variable(eps_list=[0.1])
    assert len(rep.moebius_rows) == 1
    row = rep.moebius_rows[0]
    assert row.annihilator_matches
    assert row.transport_residual < 1e-10


def test_dichotomy_bounded_regime():
    rep = repro.dichotomy_demo(kappa=0)
    assert rep.kappa == 0
    assert rep.bounded
    assert rep.jet_model_cond is not None
    assert rep.jet_model_cond < 10


def test_dichotomy_degrading_regime():
    rep = repro.dichotomy_demo(kappa=1)
    assert rep.kappa == 1
    assert rep.global_min_cond >= 64 - 1e-6
    assert rep.blocks_forced_diagonal
    # per block the minimum condition number is exactly 1/eps
    for row in rep.rows:
        assert_allclose(row.block_min_cond, 1.0 / row.eps, rtol=1e-6)


def test_dichotomy_rejects_bad_kappa():
    with pytest.raises(InputError):
        repro.dichotomy_demo(kappa=3)
