"""Similarity of commuting nilpotent tuples to their ideal models.

A cyclic commuting nilpotent row contraction N with monomial annihilator
is conjugated onto the compressed shift model by the correspondence
X : sqrt(|a|!/a!) N^a xi -> normalized monomial at a. The certificate
couples that matrix with the quantitative hypotheses (epsilon on the
weighted orbit norms, gauge constant gamma from the homogeneous layers)
and the resulting norm bounds

    ||X|| <= (L+1) gamma / sqrt(1 - epsilon card),   ||X^{-1}|| <= L + 1.

Necessity runs the other way: any intertwiner produces a distinguished
cyclic vector, gauge operators with norm at most cond(X), and a floor of
1/cond(X) on every weighted orbit norm.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from . import models, multiindex as mi, numerics, tuples
from .errors import InputError, NumericalError, ValidationError

NILPOTENT_RTOL = 1e-9
RESIDUAL_RTOL = 1e-8
BOUND_SLACK = 1e-7


@dataclass(frozen=True)
class NilsimHypotheses:
    """Measured hypothesis data for the similarity theorem.

    epsilon is the worst defect 1 - (|a|!/a!) ||N^a xi||^2 over the support
    Xi = {a : N^a != 0} (the zero index included), L the top degree in Xi.
    gamma is the supremum norm of the layer gauge Y_t over t, available
    only when the homogeneous layers span directly.
    """

    xi: np.ndarray
    support: tuple
    card: int
    L: int
    epsilon: float
    layers_direct: bool
    layer_dims: tuple
    gamma: float | None
    gauge_defect: float | None
    grid: int
    _layer_basis: np.ndarray | None = field(default=None, repr=False)
    _layer_labels: tuple = field(default=(), repr=False)

    @property
    def admissible(self) -> bool:
        return (
            self.layers_direct
            and self.gamma is not None
            and self.epsilon * self.card < 1.0
        )

    def gauge(self, t: float) -> np.ndarray:
        """Y_t = B diag(e^{i l t}) B^{-1} scaling the l-th layer by e^{ilt}."""
        if self._layer_basis is None:
            raise ValidationError(
                "layers are not a direct sum; no layer gauge is available"
            )
        phases = np.array([cmath.exp(1j * ell * t) for ell in self._layer_labels])
        B = self._layer_basis
        return (B * phases) @ numerics.inv(B)


def _require_unit(xi, n: int) -> np.ndarray:
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if xi.size != n:
        raise InputError(f"vector has size {xi.size}, expected {n}")
    nrm = float(np.linalg.norm(xi))
    if abs(nrm - 1.0) > 1e-9:
        raise InputError(f"cyclic vector must be a unit vector, got norm {nrm:.6g}")
    return xi / nrm


def _require_nilpotent(N: tuples.CommutingTuple, tol: float = NILPOTENT_RTOL) -> None:
    for j, Nj in enumerate(N.matrices):
        P = np.linalg.matrix_power(Nj, N.n)
        gate = tol * max(1.0, numerics.operator_norm(Nj)) ** N.n
        if float(np.linalg.norm(P)) <= gate:
            # Frobenius dominates the spectral norm
            continue
        if numerics.operator_norm(P) > gate:
            raise ValidationError(
                f"matrix {j + 1} is not nilpotent within tolerance "
                f"(||N^n|| = {numerics.operator_norm(P):.3e})"
            )


def check_hypotheses(
    N: tuples.CommutingTuple,
    xi,
    grid: int = 64,
    tol: float = numerics.DEFAULT_TOL,
) -> NilsimHypotheses:
    """Measure (epsilon, gamma, L, card Xi) for a cyclic nilpotent tuple.

    gamma is a grid supremum over [0, 2pi) refined once locally around the
    maximizer; for orthogonal layers it is exactly 1. When the layers fail
    to span directly the gauge is reported as unavailable rather than
    estimated.
    """
    N.require_commuting(tol)
    _require_nilpotent(N)
    if not N.is_row_contraction(tol):
        raise ValidationError(
            f"row contraction defect {N.row_defect:.3e} exceeds tolerance"
        )
    xi = _require_unit(xi, N.n)
    kry = tuples.krylov(N, xi, N.n)
    if not kry.is_cyclic:
        raise ValidationError(
            f"vector is not cyclic: orbit spans {kry.basis.shape[1]} of {N.n} "
            f"dimensions"
        )

    support = []
    eps = 0.0
    root_n = math.sqrt(N.n)
    level = {(0,) * N.d: np.eye(N.n, dtype=complex)}
    for ell in range(max(N.n - 1, 0) + 1):
        if ell > 0:
            nxt = {}
            for alpha in mi._homogeneous(N.d, ell):
                j = next(i for i, a in enumerate(alpha) if a > 0)
                parent = list(alpha)
                parent[j] -= 1
                nxt[alpha] = N.matrices[j] @ level[tuple(parent)]
            level = nxt
        alive = False
        for alpha in mi._homogeneous(N.d, ell):
            P = level[alpha]
            fro = float(np.linalg.norm(P))
            if fro > 0.0:
                alive = True
            if fro <= tol:
                # the spectral norm is dominated by the Frobenius norm
                continue
            if fro <= tol * root_n and numerics.operator_norm(P) <= tol:
                continue
            support.append(alpha)
            w = mi.multinomial_weight(alpha)
            val = w * float(np.linalg.norm(P @ xi)) ** 2
            eps = max(eps, 1.0 - val)
        if not alive:
            # every power at this degree vanished identically, so all deeper
            # ones are products with these and vanish too
            break
    eps = max(eps, 0.0)
    L = max(mi.degree(a) for a in support)

    layer_basis = None
    labels = ()
    gamma = None
    gauge_defect = None
    if kry.layers_direct:
        layer_basis = np.hstack(kry.layer_bases)
        labels = tuple(
            ell for ell, B in enumerate(kry.layer_bases) for _ in range(B.shape[1])
        )
        gram_defect = numerics.operator_norm(
            layer_basis.conj().T @ layer_basis - np.eye(layer_basis.shape[1])
        )
        if gram_defect <= 1e-12:
            # orthonormal layers make every W_t an isometry, so the supremum
            # is 1 without any grid search
            gamma = 1.0
            B_inv = layer_basis.conj().T
        else:
            B_inv = numerics.inv(layer_basis)

            def norm_at(t: float) -> float:
                phases = np.array([cmath.exp(1j * ell * t) for ell in labels])
                return numerics.operator_norm((layer_basis * phases) @ B_inv)

            ts = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
            vals = [norm_at(t) for t in ts]
            k = int(np.argmax(vals))
            gamma = vals[k]
            if len(set(labels)) > 1:
                width = 2.0 * np.pi / grid
                res = scipy.optimize.minimize_scalar(
                    lambda t: -norm_at(t),
                    bounds=(ts[k] - width, ts[k] + width),
                    method="bounded",
                    options={"xatol": 1e-10},
                )
                gamma = max(gamma, -float(res.fun))
        # subdiagonal layer structure makes the commutation exact; measure it
        t0 = np.pi / 3.0
        phases = np.array([cmath.exp(1j * ell * t0) for ell in labels])
        Y = (layer_basis * phases) @ B_inv
        Y_inv = (layer_basis * phases.conj()) @ B_inv
        gauge_defect = max(
            numerics.operator_norm(Y @ Nj @ Y_inv - cmath.exp(1j * t0) * Nj)
            for Nj in N.matrices
        )

    return NilsimHypotheses(
        xi=xi,
        support=tuple(support),
        card=len(support),
        L=L,
        epsilon=eps,
        layers_direct=kry.layers_direct,
        layer_dims=kry.layer_dims,
        gamma=gamma,
        gauge_defect=gauge_defect,
        grid=grid,
        _layer_basis=layer_basis,
        _layer_labels=labels,
    )


def _annihilator_matches_ideal(
    N: tuples.CommutingTuple,
    generators,
    model: models.ModelTuple,
    tol: float = 1e-8,
) -> bool:
    gens = [mi.as_index(g) for g in generators]
    box_degree = max((mi.degree(b) for b in model.basis_indices), default=0)
    D = max(box_degree + 1, max(mi.degree(g) for g in gens))
    ann = tuples.annihilator_slice(N, D)
    basis = mi.enumerate_indices(N.d, D)
    # for monomial generators the degree slice is the span of the divisible
    # monomials, which is a coordinate subspace
    B = np.array(basis, dtype=np.int64)
    G = np.array(gens, dtype=np.int64)
    in_ideal = (B[:, None, :] >= G[None, :, :]).all(axis=2).any(axis=1)
    k = int(in_ideal.sum())
    if not ann:
        return k == 0
    A = np.column_stack([p.coeff_vector(basis) for p in ann])
    if A.shape[1] != k:
        return False
    E = np.eye(len(basis), dtype=complex)[:, in_ideal]
    return numerics.subspace_equal(numerics.orth_columns(A), E, tol)


def correspondence_similarity(
    N: tuples.CommutingTuple,
    xi,
    generators,
) -> tuple:
    """X mapping sqrt(w_a) N^a xi to the model basis vectors, ungated.

    Returns (X, model, residual). This is the raw change of basis behind
    the similarity theorem; it exists whenever the weighted orbit is a
    basis, regardless of whether the quantitative hypotheses hold, so the
    norm bounds attached to the certificate do not apply to it.
    """
    model = models.monomial_model(generators, N.d)
    if model.dim != N.n:
        raise ValidationError(
            f"tuple acts on dimension {N.n} but the ideal complement has "
            f"dimension {model.dim}"
        )
    xi = _require_unit(xi, N.n)
    cache = tuples._power_cache(N, max(mi.degree(b) for b in model.basis_indices))
    cols = []
    for beta in model.basis_indices:
        w = math.sqrt(mi.multinomial_weight(beta))
        cols.append(w * (cache[beta] @ xi))
    U = np.column_stack(cols)
    X = numerics.inv(U)
    residual = max(
        numerics.operator_norm(X @ Nj @ U - Zj)
        for Nj, Zj in zip(N.matrices, model.tuple.matrices)
    )
    return X, model, residual


@dataclass(frozen=True)
class SimilarityCertificate:
    X: np.ndarray
    X_inv: np.ndarray
    model: models.ModelTuple
    hypotheses: NilsimHypotheses
    norm_X: float
    norm_X_inv: float
    cond: float
    bound_X: float
    bound_X_inv: float
    bounds_hold: bool
    residual: float


def build_similarity(
    N: tuples.CommutingTuple,
    xi,
    generators,
    tol: float = numerics.DEFAULT_TOL,
) -> SimilarityCertificate:
    """Certified similarity X N_j X^{-1} = Z_j onto the monomial model.

    Requires the annihilator of N to match the monomial ideal, the
    hypotheses to be admissible (epsilon card Xi < 1 and a direct layer
    decomposition), and the conjugation residual to be at rounding level;
    the returned norms are checked against the theorem bounds.
    """
    hyps = check_hypotheses(N, xi, tol=tol)
    X, model, residual = correspondence_similarity(N, hyps.xi, generators)
    if not _annihilator_matches_ideal(N, generators, model):
        raise ValidationError(
            "annihilator of the tuple does not match the monomial ideal"
        )
    if not hyps.layers_direct:
        raise ValidationError(
            "homogeneous layers of the orbit are not a direct sum; the gauge "
            "hypothesis fails"
        )
    if hyps.epsilon * hyps.card >= 1.0:
        raise ValidationError(
            f"epsilon card Xi = {hyps.epsilon * hyps.card:.6g} >= 1; the "
            f"similarity bounds do not apply"
        )
    scale = max(1.0, N.scale())
    if residual > RESIDUAL_RTOL * scale * numerics.cond(X):
        raise NumericalError(
            f"conjugation residual {residual:.3e} is too large; the "
            f"correspondence matrix is unreliable"
        )
    norm_X = numerics.operator_norm(X)
    X_inv = numerics.inv(X)
    norm_X_inv = numerics.operator_norm(X_inv)
    bound_X = (
        (hyps.L + 1)
        * hyps.gamma
        / math.sqrt(1.0 - hyps.epsilon * hyps.card)
    )
    bound_X_inv = float(hyps.L + 1)
    holds = (
        norm_X <= bound_X * (1.0 + BOUND_SLACK)
        and norm_X_inv <= bound_X_inv * (1.0 + BOUND_SLACK)
    )
    return SimilarityCertificate(
        X=X,
        X_inv=X_inv,
        model=model,
        hypotheses=hyps,
        norm_X=norm_X,
        norm_X_inv=norm_X_inv,
        cond=norm_X * norm_X_inv,
        bound_X=bound_X,
        bound_X_inv=bound_X_inv,
        bounds_hold=holds,
        residual=residual,
    )


@dataclass(frozen=True)
class NecessityReport:
    ok: bool
    cond: float
    intertwine_residual: float
    xi: np.ndarray
    orbit_floor: float
    worst_orbit_margin: float
    per_alpha: tuple
    gauge_ok: bool
    gauge_norm_max: float
    gauge_commute_defect: float
    gauge_fix_defect: float


def necessity_check(
    N: tuples.CommutingTuple,
    X,
    generators,
    xi=None,
    t_values: int = 8,
    tol: float = 1e-8,
) -> NecessityReport:
    """Consequences any intertwiner X N_j X^{-1} = Z_j must satisfy.

    From X alone: the normalized xi = X^{-1} 1 is cyclic, the transported
    gauge Y_t = X^{-1} W_t X has norm at most cond(X), conjugates N to
    e^{it} N while fixing xi, and every surviving weighted orbit norm is
    at least 1 / cond(X)^2.
    """
    model = models.monomial_model(generators, N.d)
    X = numerics.as_cmatrix(X)
    if X.shape != (model.dim, N.n) or model.dim != N.n:
        raise InputError(
            f"intertwiner has shape {X.shape}, expected ({model.dim}, {N.n})"
        )
    scale = max(1.0, N.scale())
    X_inv = numerics.inv(X)
    resid = max(
        numerics.operator_norm(X @ Nj - Zj @ X)
        for Nj, Zj in zip(N.matrices, model.tuple.matrices)
    )
    if resid > tol * scale * numerics.operator_norm(X):
        raise ValidationError(
            f"matrix does not intertwine the tuple with the model "
            f"(residual {resid:.3e})"
        )
    if xi is None:
        v = X_inv @ model.cyclic
        xi = v / np.linalg.norm(v)
    else:
        xi = _require_unit(xi, N.n)
    cond = numerics.operator_norm(X) * numerics.operator_norm(X_inv)
    # The survival floor: w |N^a xi|^2 = w |X^-1 Z^a 1|^2 / |X^-1 1|^2 with
    # |X^-1 Z^a 1| >= |Z^a 1| / |X| and |X^-1 1| <= |X^-1|, so the provable
    # constant is 1/cond^2. It is attained: scaling the model by s makes
    # every orbit norm s^(2|a|) with cond(X) = s^(-L).
    floor = 1.0 / cond**2

    cache = tuples._power_cache(N, max(mi.degree(b) for b in model.basis_indices))
    per_alpha = []
    worst = np.inf
    for beta in model.basis_indices:
        val = mi.multinomial_weight(beta) * float(np.linalg.norm(cache[beta] @ xi)) ** 2
        per_alpha.append((beta, val))
        worst = min(worst, val - floor)
    orbit_ok = worst >= -tol

    gauge_norm = 0.0
    commute = 0.0
    fix = 0.0
    for k in range(t_values):
        t = 2.0 * np.pi * k / t_values
        W = models.gauge_unitary(model, t)
        Y = X_inv @ W @ X
        Y_inv = X_inv @ W.conj().T @ X
        gauge_norm = max(gauge_norm, numerics.operator_norm(Y))
        commute = max(
            commute,
            max(
                numerics.operator_norm(Y @ Nj @ Y_inv - cmath.exp(1j * t) * Nj)
                for Nj in N.matrices
            ),
        )
        fix = max(fix, float(np.linalg.norm(Y_inv @ xi - xi)))
    gauge_ok = (
        gauge_norm <= cond * (1.0 + tol)
        and commute <= tol * scale * max(1.0, cond)
        and fix <= tol * max(1.0, cond)
    )
    return NecessityReport(
        ok=bool(orbit_ok and gauge_ok),
        cond=cond,
        intertwine_residual=resid,
        xi=xi,
        orbit_floor=floor,
        worst_orbit_margin=float(worst),
        per_alpha=tuple(per_alpha),
        gauge_ok=bool(gauge_ok),
        gauge_norm_max=gauge_norm,
        gauge_commute_defect=commute,
        gauge_fix_defect=fix,
    )


@dataclass(frozen=True)
class LemmaSection:
    name: str
    ran: bool
    samples: int
    worst_slack: float
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class LemmaCheckReport:
    epsilon: float
    sections: tuple

    @property
    def ok(self) -> bool:
        return all(s.passed for s in self.sections if s.ran)


def lemma_checks(
    T: tuples.CommutingTuple,
    xi,
    epsilon: float,
    seed: int = 0,
    samples: int = 100,
    tol: float = 1e-10,
) -> LemmaCheckReport:
    """Numerical witnesses for the orbit inequalities.

    Checks, on the qualifying index sets of the given tuple: near
    orthogonality of same-length orbit vectors, the same-length lower
    bound on random coefficient vectors, and (when the tuple is nilpotent
    with a direct layer gauge) the two-sided norm equivalence on the full
    support. Sections whose hypotheses the tuple does not meet are
    reported as skipped, not failed.
    """
    T.require_commuting()
    if not T.is_row_contraction(numerics.DEFAULT_TOL):
        raise ValidationError(
            f"row contraction defect {T.row_defect:.3e} exceeds tolerance"
        )
    xi = _require_unit(xi, T.n)
    if epsilon < 0:
        raise InputError(f"epsilon must be >= 0, got {epsilon}")
    rng = np.random.default_rng(seed)
    cache = tuples._power_cache(T, max(T.n - 1, 0))
    orbit = {a: P @ xi for a, P in cache.items()}
    weighted = {
        a: mi.multinomial_weight(a) * float(np.linalg.norm(v)) ** 2
        for a, v in orbit.items()
    }
    by_level = {}
    for a in cache:
        by_level.setdefault(mi.degree(a), []).append(a)

    sections = []

    # same-length near orthogonality on qualifying pairs
    worst = -np.inf
    pairs = 0
    for ell, idxs in by_level.items():
        Q = [a for a in idxs if weighted[a] >= 1.0 - epsilon]
        for i in range(len(Q)):
            for j in range(i + 1, len(Q)):
                a, b = Q[i], Q[j]
                w = math.sqrt(mi.multinomial_weight(a) * mi.multinomial_weight(b))
                val = w * abs(complex(np.vdot(orbit[b], orbit[a])))
                worst = max(worst, val - epsilon)
                pairs += 1
    sections.append(
        LemmaSection(
            name="same_length_orthogonality",
            ran=pairs > 0,
            samples=pairs,
            worst_slack=float(worst) if pairs else 0.0,
            passed=bool(pairs == 0 or worst <= tol),
            note="" if pairs else "no qualifying pair at this epsilon",
        )
    )

    # same-length lower bound on random supported coefficients
    worst = -np.inf
    runs = 0
    for ell, idxs in by_level.items():
        Q = [a for a in idxs if weighted[a] >= 1.0 - epsilon]
        if not Q:
            continue
        for _ in range(max(1, samples // max(1, len(by_level)))):
            mask = rng.random(len(Q)) < 0.7
            if not mask.any():
                mask[rng.integers(len(Q))] = True
            S = [a for a, m_ in zip(Q, mask) if m_]
            c = rng.standard_normal(len(S)) + 1j * rng.standard_normal(len(S))
            h = sum(
                cv * math.sqrt(mi.multinomial_weight(a)) * orbit[a]
                for cv, a in zip(c, S)
            )
            lhs = (1.0 - epsilon * len(S)) * float(np.vdot(c, c).real)
            rhs = float(np.vdot(h, h).real)
            worst = max(worst, lhs - rhs)
            runs += 1
    sections.append(
        LemmaSection(
            name="same_length_lower_bound",
            ran=runs > 0,
            samples=runs,
            worst_slack=float(worst) if runs else 0.0,
            passed=bool(runs == 0 or worst <= tol * max(1.0, abs(worst) + 1.0)),
            note="" if runs else "no qualifying index at this epsilon",
        )
    )

    # full two-sided equivalence; needs the nilpotent gauge hypotheses
    try:
        hyps = check_hypotheses(T, xi)
    except (ValidationError, NumericalError) as exc:
        sections.append(
            LemmaSection(
                name="two_sided_equivalence",
                ran=False,
                samples=0,
                worst_slack=0.0,
                passed=True,
                note=f"hypotheses unavailable: {exc}",
            )
        )
        return LemmaCheckReport(epsilon=epsilon, sections=tuple(sections))
    if hyps.gamma is None:
        sections.append(
            LemmaSection(
                name="two_sided_equivalence",
                ran=False,
                samples=0,
                worst_slack=0.0,
                passed=True,
                note="layers are not a direct sum; gauge unverified",
            )
        )
        return LemmaCheckReport(epsilon=epsilon, sections=tuple(sections))
    eps_eff = max(epsilon, hyps.epsilon)
    lower_factor = (1.0 - eps_eff * hyps.card) / ((hyps.L + 1) * hyps.gamma**2)
    upper_factor = float(hyps.L + 1)
    worst = -np.inf
    for _ in range(samples):
        c = rng.standard_normal(hyps.card) + 1j * rng.standard_normal(hyps.card)
        h = sum(
            cv * math.sqrt(mi.multinomial_weight(a)) * orbit[a]
            for cv, a in zip(c, hyps.support)
        )
        csq = float(np.vdot(c, c).real)
        hsq = float(np.vdot(h, h).real)
        worst = max(worst, lower_factor * csq - hsq, hsq - upper_factor * csq)
    note = f"evaluated at epsilon = {eps_eff:.6g}"
    if lower_factor <= 0:
        note += "; lower bound vacuous (epsilon card Xi >= 1)"
    sections.append(
        LemmaSection(
            name="two_sided_equivalence",
            ran=True,
            samples=samples,
            worst_slack=float(worst),
            passed=bool(worst <= tol * max(1.0, upper_factor)),
            note=note,
        )
    )
    return LemmaCheckReport(epsilon=epsilon, sections=tuple(sections))
