"""Compressed shift models attached to polynomial ideals.

Two constructions. ``monomial_model`` is exact: for a monomial ideal with
finite complement the coinvariant subspace is spanned by the surviving
normalized monomials, and the compressed shifts are weighted truncated
shifts whose entries are square roots of rational numbers.

``jet_model`` handles finitely many points with local ideal data: the
model space is spanned by derivative-kernel combinations dual to each
local quotient, computed in a degree truncation chosen so the neglected
tails are below the kernel tolerance. The compressions are exact up to
those tails because the span is invariant under every adjoint shift.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import fockspace, multiindex as mi, numerics, polyideal, tuples
from .errors import InputError, NumericalError, ValidationError
from .polynomials import Polynomial

GRAM_FLOOR_RTOL = 1e-12


@dataclass(frozen=True)
class ModelTuple:
    """A compressed shift tuple together with its model bookkeeping.

    ``kind`` is "monomial" or "jet". For monomial models ``basis_indices``
    lists the surviving monomial exponents (graded lex). For jet models
    ``points`` and ``local_dims`` describe which derivative functionals
    built the space and ``tail_bound`` bounds every neglected truncation
    tail that entered the Gram matrix.
    """

    kind: str
    tuple: tuples.CommutingTuple
    cyclic: np.ndarray
    basis_indices: tuple = ()
    points: tuple = ()
    local_dims: tuple = ()
    orders: tuple = ()
    tail_bound: float = 0.0
    truncation_degree: int = 0
    dual_coeffs: tuple = field(default=(), repr=False)

    @property
    def d(self) -> int:
        return self.tuple.d

    @property
    def dim(self) -> int:
        return self.tuple.n


def _monomial_complement(generators: Sequence, d: int) -> list:
    gens = [mi.as_index(g) for g in generators]
    for g in gens:
        if len(g) != d:
            raise InputError(f"generator {g} has length {len(g)}, expected {d}")
    if any(mi.degree(g) == 0 for g in gens):
        raise InputError("the ideal contains a unit; the model space is zero")
    # finite complement iff every variable appears as a pure power generator
    box = []
    for j in range(d):
        powers = [g[j] for g in gens if all(g[i] == 0 for i in range(d) if i != j)]
        powers = [p for p in powers if p > 0]
        if not powers:
            raise InputError(
                f"no pure power of variable {j + 1} among the generators; "
                f"the quotient is infinite dimensional"
            )
        box.append(min(powers))
    max_deg = sum(p - 1 for p in box)
    cand = mi.enumerate_indices(d, max_deg)
    B = np.array(cand, dtype=np.int64)
    G = np.array(gens, dtype=np.int64)
    in_ideal = (B[:, None, :] >= G[None, :, :]).all(axis=2).any(axis=1)
    return [beta for beta, hit in zip(cand, in_ideal) if not hit]


def monomial_model(generators: Sequence, d: int) -> ModelTuple:
    """Compression of the shift tuple to the complement of a monomial ideal.

    Z_j maps the normalized monomial at beta to the ratio
    ||x^(beta+e_j)|| / ||x^beta|| times the one at beta+e_j, or to zero if
    the shifted monomial falls in the ideal. Entries are exact up to one
    floating square root of a rational.
    """
    comp = _monomial_complement(generators, d)
    pos = {beta: i for i, beta in enumerate(comp)}
    m = len(comp)
    mats = []
    for j in range(d):
        Z = np.zeros((m, m), dtype=complex)
        for beta, col in pos.items():
            target = mi.add(beta, mi.unit(d, j))
            row = pos.get(target)
            if row is None:
                continue
            ratio = mi.monomial_norm_sq(target) / mi.monomial_norm_sq(beta)
            Z[row, col] = math.sqrt(float(ratio))
        mats.append(Z)
    cyclic = np.zeros(m, dtype=complex)
    cyclic[pos[(0,) * d]] = 1.0
    return ModelTuple(
        kind="monomial",
        tuple=tuples.validate(mats),
        cyclic=cyclic,
        basis_indices=tuple(comp),
    )


def gauge_unitary(model: ModelTuple, t: float) -> np.ndarray:
    """Diagonal unitary W_t with W_t Z_j W_t* = e^{it} Z_j and W_t 1 = 1.

    This is the compression of composition with z -> e^{it} z, which is
    diagonal on monomials with phase e^{i |beta| t}. Only homogeneous
    (here: monomial) models admit it.
    """
    if model.kind != "monomial":
        raise InputError("gauge unitaries are only defined for monomial models")
    phases = [cmath.exp(1j * t * mi.degree(beta)) for beta in model.basis_indices]
    return np.diag(phases).astype(complex)


def _local_dual_basis(
    ideal: polyideal.PolyIdeal, z: np.ndarray, kappa: int, tol: float
) -> np.ndarray:
    """Jet-coefficient vectors spanning the annihilator of the local ideal.

    Rows of the constraint matrix are order-kappa jets of q*g; a dual
    vector c defines the functional p -> sum_beta c_beta (d^beta p)(z)/beta!
    which kills the ideal, and these functionals span the dual of the
    local quotient because m_z^(kappa+1) lies inside the ideal.
    """
    local = polyideal.localize(ideal, z, kappa)
    rows = local.basis.conj().T
    if rows.shape[0] == 0:
        return np.eye(len(local.jet_basis), dtype=complex)
    # c kills the image iff c^T basis = 0, i.e. conj(c) is orthogonal to it
    return np.conj(numerics.nullspace(rows, rtol=tol))


def jet_model(
    points: Sequence[Sequence[complex]],
    local_ideals: Sequence[polyideal.PolyIdeal],
    tol: float = numerics.DEFAULT_TOL,
    max_degree: int | None = None,
) -> ModelTuple:
    """Model tuple for finitely many points with prescribed local ideals.

    For each point the local quotient dual is realized by derivative-kernel
    vectors; their span is adjoint-shift invariant, so compressing the
    truncated shifts to an orthonormal basis of the span gives the model
    up to the reported truncation tail.
    """
    pts = [np.asarray(p, dtype=complex).reshape(-1) for p in points]
    if not pts:
        raise InputError("need at least one point")
    d = pts[0].size
    for p in pts:
        if p.size != d:
            raise InputError("points live in different dimensions")
    if len(local_ideals) != len(pts):
        raise InputError(
            f"{len(pts)} points but {len(local_ideals)} local ideals"
        )
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if np.linalg.norm(pts[i] - pts[j]) < 1e-12:
                raise InputError(f"points {i} and {j} coincide")
    rho = 0.0
    for p in pts:
        r = float(np.linalg.norm(p))
        if r >= 1.0:
            raise InputError(
                f"point with norm {r:.6g} is not inside the open unit ball"
            )
        rho = max(rho, r)

    orders = []
    duals = []
    for z, ideal in zip(pts, local_ideals):
        if ideal.d != d:
            raise InputError("local ideal dimension mismatch")
        kappa = polyideal.polynomial_order(ideal, z, tol=tol)
        C = _local_dual_basis(ideal, z, kappa, tol)
        if C.shape[1] == 0:
            raise ValidationError(
                f"local ideal at {tuple(z.tolist())} has a zero quotient"
            )
        orders.append(kappa)
        duals.append(C)

    D = fockspace.truncation_degree(rho)
    D = max(D, max(orders) + 1)
    if max_degree is not None:
        D = max(D, int(max_degree))
    trunc = fockspace.FockTruncation(d, D)

    cols = []
    tail = 0.0
    dual_coeffs = []
    for z, kappa, C in zip(pts, orders, duals):
        jet_basis = mi.enumerate_indices(d, kappa)
        jets = [fockspace.jet_vector(z, beta, trunc) for beta in jet_basis]
        point_coeffs = []
        for c in C.T:
            v = np.zeros(trunc.dim, dtype=complex)
            t_bound = 0.0
            for cb, beta, jv in zip(c, jet_basis, jets):
                w = np.conj(cb) / mi.index_factorial(beta)
                v += w * jv.coeffs
                t_bound += abs(w) * jv.tail_bound
            nrm = float(np.linalg.norm(v))
            if nrm <= 1e-300:
                raise NumericalError("a dual functional collapsed under truncation")
            cols.append(v / nrm)
            tail = max(tail, t_bound / nrm)
            point_coeffs.append(np.asarray(c))
        dual_coeffs.append(tuple(point_coeffs))

    W = np.column_stack(cols)
    G = W.conj().T @ W
    vals, vecs = numerics.hermitian_eig(G)
    if float(vals[0]) <= GRAM_FLOOR_RTOL * float(vals[-1]):
        raise NumericalError(
            f"kernel data Gram matrix is numerically singular (eigenvalue "
            f"ratio {float(vals[0]) / float(vals[-1]):.3e}); the points are "
            f"too close for this truncation"
        )
    B = W @ (vecs * (vals ** -0.5)) @ vecs.conj().T
    mats = []
    for j in range(d):
        M = fockspace.mult_matrix(Polynomial.variable(d, j), trunc)
        mats.append(B.conj().T @ M @ B)
    e0 = np.zeros(trunc.dim, dtype=complex)
    e0[0] = 1.0
    cyclic = B.conj().T @ e0
    return ModelTuple(
        kind="jet",
        tuple=tuples.validate(mats),
        cyclic=cyclic,
        points=tuple(tuple(z.tolist()) for z in pts),
        local_dims=tuple(C.shape[1] for C in duals),
        orders=tuple(orders),
        tail_bound=tail,
        truncation_degree=D,
        dual_coeffs=tuple(dual_coeffs),
    )


@dataclass(frozen=True)
class LocalizationReport:
    point: tuple
    order: int
    jet_order: int
    annihilator_dim: int
    expected_dim: int
    matches: bool


def verify_localizations(
    model: ModelTuple,
    local_ideals: Sequence[polyideal.PolyIdeal],
    tol: float = 1e-8,
) -> list:
    """Check that the model's polynomial annihilator localizes back to the
    prescribed local ideal at every point.

    The annihilator is sliced at a degree where products of local
    generators with enough separating factors already live, so localizing
    its span at each point must reproduce the local jet image exactly.
    """
    if model.kind != "jet":
        raise InputError("localization checks need a jet model")
    if len(local_ideals) != len(model.points):
        raise InputError(
            f"{len(model.points)} points but {len(local_ideals)} local ideals"
        )
    gen_deg = max(i.max_generator_degree for i in local_ideals)
    sep_deg = sum(k + 1 for k in model.orders)
    D_found = gen_deg + sep_deg
    mus = [k + 2 for k in model.orders]
    D_ann = D_found + max(mus) - 1
    ann = tuples.annihilator_slice(model.tuple, D_found, tol=numerics.DEFAULT_TOL)
    if not ann:
        raise ValidationError(
            f"model has no annihilating polynomials up to degree {D_found}"
        )
    ann_ideal = polyideal.PolyIdeal(ann, D_ann, d=model.d)
    out = []
    for z, kappa, mu, ideal in zip(model.points, model.orders, mus, local_ideals):
        got = polyideal.localize(ann_ideal, np.asarray(z), mu)
        want = polyideal.localize(
            polyideal.PolyIdeal(ideal.generators, ideal.max_generator_degree + mu - 1, d=model.d),
            np.asarray(z),
            mu,
        )
        ok = got.dim == want.dim and numerics.subspace_equal(got.basis, want.basis, tol)
        out.append(
            LocalizationReport(
                point=tuple(z),
                order=kappa,
                jet_order=mu,
                annihilator_dim=got.dim,
                expected_dim=want.dim,
                matches=bool(ok),
            )
        )
    return out
