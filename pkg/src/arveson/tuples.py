"""Commuting tuples of matrices: validation, calculus, Krylov data.

A tuple T = (T_1, ..., T_d) on C^n is the basic object everything else
consumes. Validation records the worst commutator and row-contraction
defects instead of silently trusting the caller; downstream code calls
``require_commuting`` before relying on functional calculus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import multiindex as mi
from . import numerics
from .errors import InputError, NumericalError, ValidationError
from .polynomials import Polynomial


@dataclass(frozen=True)
class CommutingTuple:
    matrices: tuple
    commutator_defect: float
    row_defect: float

    @property
    def d(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0]

    def scale(self) -> float:
        """Largest operator norm among the coordinates (computed once)."""
        cached = self.__dict__.get("_scale")
        if cached is None:
            cached = max(numerics.operator_norm(T) for T in self.matrices)
            object.__setattr__(self, "_scale", cached)
        return cached

    def is_row_contraction(self, tol: float = numerics.DEFAULT_TOL) -> bool:
        return self.row_defect <= tol

    def require_commuting(self, tol: float = numerics.DEFAULT_TOL) -> None:
        bound = tol * max(1.0, self.scale()) ** 2
        if self.commutator_defect > bound:
            raise ValidationError(
                f"commutator defect {self.commutator_defect:.3e} exceeds "
                f"tolerance {bound:.3e}"
            )

    def __repr__(self) -> str:
        return (
            f"CommutingTuple(d={self.d}, n={self.n}, "
            f"commutator_defect={self.commutator_defect:.2e}, "
            f"row_defect={self.row_defect:.2e})"
        )


def validate(matrices: Sequence[np.ndarray]) -> CommutingTuple:
    """Wrap matrices as a tuple, measuring commutator and row defects."""
    if len(matrices) == 0:
        raise InputError("a tuple needs at least one matrix")
    mats = tuple(numerics.as_cmatrix(M) for M in matrices)
    n = mats[0].shape[0]
    for k, M in enumerate(mats):
        if M.shape != (n, n):
            raise InputError(
                f"matrix {k} has shape {M.shape}, expected ({n}, {n})"
            )
    defect = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            defect = max(
                defect,
                numerics.operator_norm(mats[i] @ mats[j] - mats[j] @ mats[i]),
            )
    gram = sum(M @ M.conj().T for M in mats)
    excess = numerics.hermitian_eig(gram)[0].max() - 1.0
    return CommutingTuple(
        matrices=mats,
        commutator_defect=defect,
        row_defect=max(0.0, float(excess)),
    )


def _power_cache(T: CommutingTuple, degree: int) -> dict:
    """All T^alpha for |alpha| <= degree, built one multiplication each."""
    n = T.n
    cache = {(0,) * T.d: np.eye(n, dtype=complex)}
    for alpha in mi.enumerate_indices(T.d, degree):
        if alpha in cache:
            continue
        j = next(i for i, a in enumerate(alpha) if a > 0)
        prev = list(alpha)
        prev[j] -= 1
        cache[alpha] = T.matrices[j] @ cache[tuple(prev)]
    return cache


def apply_poly(p: Polynomial, T: CommutingTuple) -> np.ndarray:
    """p(T) by functional calculus; requires the tuple to commute."""
    if p.d != T.d:
        raise InputError(f"polynomial dimension {p.d}, expected {T.d}")
    T.require_commuting()
    out = np.zeros((T.n, T.n), dtype=complex)
    if p.is_zero():
        return out
    cache = _power_cache(T, p.degree())
    for alpha, c in p.coeffs.items():
        out += c * cache[alpha]
    return out


@dataclass(frozen=True)
class KrylovData:
    basis: np.ndarray
    is_cyclic: bool
    layer_dims: tuple
    layers_direct: bool
    layer_bases: tuple = field(repr=False)


def krylov(T: CommutingTuple, xi: np.ndarray, max_degree: int) -> KrylovData:
    """Span of {T^alpha xi : |alpha| <= max_degree}, organized by degree.

    layer_dims[l] is the dimension of span{T^alpha xi : |alpha| = l};
    layers_direct records whether those homogeneous layers sum directly
    (their dimensions add up to the full Krylov dimension). Trailing zero
    layers are dropped.
    """
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if xi.size != T.n:
        raise InputError(f"vector has size {xi.size}, expected {T.n}")
    if np.linalg.norm(xi) == 0:
        raise InputError("cyclic vector candidate is zero")
    layer_bases = []
    layer_dims = []
    all_cols = []
    s = max(1.0, T.scale())
    ref = float(np.linalg.norm(xi))
    level = {(0,) * T.d: xi}
    for ell in range(max_degree + 1):
        if ell > 0:
            # orbit vectors one matvec at a time; the dead-layer break below
            # means nothing past the first dead layer is ever computed
            nxt = {}
            for alpha in mi._homogeneous(T.d, ell):
                j = next(i for i, a in enumerate(alpha) if a > 0)
                parent = list(alpha)
                parent[j] -= 1
                nxt[alpha] = T.matrices[j] @ level[tuple(parent)]
            level = nxt
        V = np.column_stack([level[a] for a in mi._homogeneous(T.d, ell)])
        scale = float(np.abs(V).max())
        # every orbit vector at this degree is bounded by s^ell |xi|, so a
        # layer this far below that bound is numerically zero; deeper layers
        # are products with this one and inherit the same relative bound
        thresh = 1e-13 * ref * s**ell
        if scale == 0.0 or (math.isfinite(thresh) and scale <= thresh):
            break
        B = numerics.orth_columns(V)
        layer_bases.append(B)
        layer_dims.append(B.shape[1])
        all_cols.append(V)
    if all_cols:
        basis = numerics.orth_columns(np.hstack(all_cols))
    else:
        basis = np.zeros((T.n, 0), dtype=complex)
    total = basis.shape[1]
    return KrylovData(
        basis=basis,
        is_cyclic=(total == T.n),
        layer_dims=tuple(layer_dims),
        layers_direct=(sum(layer_dims) == total),
        layer_bases=tuple(layer_bases),
    )


def annihilator_slice(
    T: CommutingTuple,
    degree_bound: int,
    tol: float = numerics.DEFAULT_TOL,
) -> list:
    """Basis of {p : deg p <= degree_bound, p(T) = 0 up to tolerance}.

    Columns vec(T^alpha) are rescaled by max(1, scale^|alpha|) so that a
    tuple with large norm does not drown low-degree relations; the kernel
    coefficients are rescaled back before returning polynomials.
    """
    T.require_commuting(tol)
    basis = mi.enumerate_indices(T.d, degree_bound)
    cache = _power_cache(T, degree_bound)
    s = max(1.0, T.scale())
    col_scales = np.array([max(1.0, s ** mi.degree(a)) for a in basis])
    A = np.column_stack([cache[a].ravel() / w for a, w in zip(basis, col_scales)])
    kernel = numerics.nullspace(A, rtol=tol)
    out = []
    for j in range(kernel.shape[1]):
        coeffs = kernel[:, j] / col_scales
        coeffs /= np.linalg.norm(coeffs)
        out.append(Polynomial.from_coeff_vector(T.d, coeffs, basis))
    return out


def moebius(T: CommutingTuple, w: Sequence[complex]) -> CommutingTuple:
    """Ball automorphism applied to the tuple by functional calculus.

    gamma_w(T)_k = (w_k I - (1-s) w_k/|w|^2 C - s T_k)(I - C)^{-1} with
    C = sum conj(w_j) T_j and s = sqrt(1 - |w|^2). Fixes nothing pointwise
    but swaps 0 and w, and is an involution on tuples with I - C invertible.
    """
    w = np.asarray(w, dtype=complex).reshape(-1)
    if w.size != T.d:
        raise InputError(f"automorphism point has size {w.size}, expected {T.d}")
    wnorm_sq = float(np.vdot(w, w).real)
    if wnorm_sq >= 1.0:
        raise InputError(
            f"automorphism point with norm {math.sqrt(wnorm_sq):.6g} is not "
            f"inside the open unit ball"
        )
    T.require_commuting()
    n = T.n
    if wnorm_sq == 0.0:
        return validate([-Tk for Tk in T.matrices])
    s = math.sqrt(1.0 - wnorm_sq)
    C = sum(np.conj(wj) * Tk for wj, Tk in zip(w, T.matrices))
    I = np.eye(n, dtype=complex)
    try:
        R = numerics.inv(I - C)
    except NumericalError as exc:
        raise NumericalError(
            f"resolvent (I - C)^(-1) failed for the automorphism point: {exc}"
        ) from exc
    coef = (1.0 - s) / wnorm_sq
    out = []
    for k in range(T.d):
        num = w[k] * I - coef * w[k] * C - s * T.matrices[k]
        out.append(num @ R)
    return validate(out)
