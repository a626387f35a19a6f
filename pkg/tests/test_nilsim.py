import numpy as np
import pytest
from numpy.testing import assert_allclose

from arveson import models, nilsim, repro, tuples
from arveson.errors import InputError, ValidationError

SQUARE = [(2, 0), (1, 1), (0, 2)]


def square_model():
    return models.monomial_model(SQUARE, 2)


def test_check_hypotheses_exact_model():
    m = square_model()
    h = nilsim.check_hypotheses(m.tuple, m.cyclic)
    assert h.epsilon <= 1e-12
    assert h.card == 3
    assert h.L == 1
    assert h.layers_direct
    assert h.gamma == pytest.approx(1.0, abs=1e-9)
    assert h.admissible


def test_check_hypotheses_requires_unit_vector():
    m = square_model()
    with pytest.raises(InputError):
        nilsim.check_hypotheses(m.tuple, 2 * m.cyclic)


def test_check_hypotheses_requires_nilpotent():
    T = tuples.validate([np.array([[0.5]]), np.array([[0.1]])])
    with pytest.raises(ValidationError):
        nilsim.check_hypotheses(T, np.array([1.0]))


def test_check_hypotheses_requires_cyclic():
    m = square_model()
    xi = np.array([0.0, 1.0, 0.0])
    with pytest.raises(ValidationError):
        nilsim.check_hypotheses(m.tuple, xi)


def test_gauge_conjugation_rotates_layers():
    m = square_model()
    h = nilsim.check_hypotheses(m.tuple, m.cyclic)
    for t in np.linspace(0, 2 * np.pi, 8, endpoint=False):
        Y = h.gauge(t)
        Yi = np.linalg.inv(Y)
        for Nj in m.tuple.matrices:
            assert_allclose(Y @ Nj @ Yi, np.exp(1j * t) * Nj, atol=1e-13)


def test_build_similarity_identity_on_exact_model():
    m = square_model()
    cert = nilsim.build_similarity(m.tuple, m.cyclic, SQUARE)
    assert_allclose(cert.X, np.eye(3), atol=1e-12)
    assert cert.cond == pytest.approx(1.0, abs=1e-12)
    assert cert.bounds_hold
    assert cert.residual <= 1e-12


def perturbed_square(delta):
    """Commuting perturbation of the square monomial model, rescaled back
    into the row contraction regime."""
    m = square_model()
    N1, N2 = [M.copy() for M in m.tuple.matrices]
    mats = [N1, N2 + delta * N1]
    s = np.sqrt(np.linalg.norm(sum(M @ M.conj().T for M in mats), 2))
    return tuples.validate([M / s for M in mats]), m.cyclic


def test_build_similarity_perturbed_admissible():
    T, xi = perturbed_square(0.05)
    cert = nilsim.build_similarity(T, xi, SQUARE)
    h = cert.hypotheses
    assert 0 < h.epsilon < 1
    assert h.epsilon * h.card < 1
    assert cert.bounds_hold
    assert cert.norm_X <= cert.bound_X + 1e-9
    assert cert.norm_X_inv <= cert.bound_X_inv + 1e-9
    # the certificate really intertwines
    Z = cert.model.tuple.matrices
    Xi = cert.X_inv
    for Tj, Zj in zip(T.matrices, Z):
        assert np.linalg.norm(cert.X @ Tj @ Xi - Zj) < 1e-8 * cert.cond


def test_build_similarity_rejects_wrong_ideal():
    m = square_model()
    with pytest.raises(ValidationError):
        nilsim.build_similarity(m.tuple, m.cyclic, [(3, 0), (1, 1), (0, 3)])


def test_troubled_family_is_never_admissible():
    # the troubled two-variable family fails epsilon * card < 1 at every t
    for t in [0.05, 0.1, 0.3]:
        R1, R2, f = repro.two_variable_family(t)
        T = tuples.validate([R1, R2])
        xi = np.array([1.0, 0.0, 0.0], dtype=complex)
        h = nilsim.check_hypotheses(T, xi)
        assert h.epsilon >= 0.5 - 1e-12
        assert h.epsilon * h.card > 1
        assert not h.admissible
        with pytest.raises(ValidationError):
            nilsim.build_similarity(T, xi, SQUARE)


def test_correspondence_similarity_exists_for_troubled_family():
    # the similarity itself exists with ||X^-1|| <= L + 1 even when the
    # two-sided certificate is out of reach
    t = 0.2
    R1, R2, f = repro.two_variable_family(t)
    T = tuples.validate([R1, R2])
    xi = np.array([1.0, 0.0, 0.0], dtype=complex)
    X, model, residual = nilsim.correspondence_similarity(T, xi, SQUARE)
    assert residual < 1e-10
    # the orbit matrix has unit norm by the choice of f, so ||X^-1|| = 1
    assert np.linalg.norm(np.linalg.inv(X), 2) <= 1.0 + 1e-9
    assert_allclose(np.linalg.norm(X, 2), f**2 / t, rtol=1e-9)


def test_necessity_check_on_certified_similarity():
    T, xi = perturbed_square(0.05)
    cert = nilsim.build_similarity(T, xi, SQUARE)
    rep = nilsim.necessity_check(T, cert.X, SQUARE)
    assert rep.ok
    assert rep.gauge_ok
    # every weighted orbit norm clears the conditioning floor; the floor is
    # 1/cond^2 and tight (a scaled model attains it with equality)
    assert rep.worst_orbit_margin >= -1e-9
    assert rep.orbit_floor == pytest.approx(1.0 / rep.cond**2, rel=1e-9)


def test_necessity_floor_is_tight_on_scaled_model():
    # N = 0.9 Z on <x^2> has X = diag(1, 1/0.9), cond = 1/0.9, and the
    # single surviving orbit norm is 0.81 = 1/cond^2 on the nose; any
    # stronger floor would reject a genuine intertwiner
    m = models.monomial_model([(2,)], 1)
    N = tuples.validate([0.9 * Z for Z in m.tuple.matrices])
    cert = nilsim.build_similarity(N, m.cyclic, [(2,)])
    rep = nilsim.necessity_check(N, cert.X, [(2,)])
    assert rep.ok
    assert rep.cond == pytest.approx(1.0 / 0.9, rel=1e-12)
    assert min(v for _, v in rep.per_alpha) == pytest.approx(0.81, rel=1e-12)
    assert rep.worst_orbit_margin == pytest.approx(0.0, abs=1e-12)


def test_necessity_check_rejects_non_intertwiner():
    m = square_model()
    X = np.eye(3)
    X[0, 0] = 2.0
    T = tuples.validate([m.tuple.matrices[0], m.tuple.matrices[1]])
    with pytest.raises(ValidationError):
        nilsim.necessity_check(T, np.array([[1.0, 1, 0], [0, 1, 0], [1, 0, 1]]), SQUARE)


def test_lemma_checks_on_exact_model():
    m = models.monomial_model([(3, 0), (2, 1), (1, 2), (0, 3)], 2)
    rep = nilsim.lemma_checks(m.tuple, m.cyclic, epsilon=0.05, seed=0)
    assert rep.ok
    names = [s.name for s in rep.sections]
    assert "same_length_orthogonality" in names
    assert "same_length_lower_bound" in names
    assert "two_sided_equivalence" in names
    for s in rep.sections:
        assert s.passed


def test_lemma_checks_perturbed_tuple():
    T, xi = perturbed_square(0.08)
    rep = nilsim.lemma_checks(T, xi, epsilon=0.2, seed=1)
    assert rep.ok


def test_lemma_checks_scaled_tuple_stays_sound():
    # shrinking the tuple grows epsilon; the two-sided section can go
    # vacuous but must never report a violated inequality
    m = square_model()
    T = tuples.validate([0.9 * M for M in m.tuple.matrices])
    rep = nilsim.lemma_checks(T, m.cyclic, epsilon=0.3, seed=2)
    assert rep.ok
