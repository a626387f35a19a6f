"""Degree slices of polynomial ideals and their local jet geometry.

An ideal never appears here in closed form; it is handled through two
finite-dimensional shadows. ``PolyIdeal`` stores the span of q*g for
generators g and monomials q inside a fixed degree bound, which is enough
for membership tests up to that degree. ``localize`` passes to the space
of Taylor jets at a point, and ``polynomial_order`` finds the smallest k
with m_z^(k+1) contained in the jet image, i.e. the vanishing order the
ideal prescribes at an isolated common zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import multiindex as mi
from . import numerics
from .errors import InputError, ValidationError
from .polynomials import Polynomial


class PolyIdeal:
    """Span of {q * g : g generator, deg(q*g) <= degree_bound}."""

    def __init__(self, generators: Sequence[Polynomial], degree_bound: int, d: int | None = None):
        generators = [g for g in generators if not g.is_zero()]
        if d is None:
            if not generators:
                raise InputError("cannot infer dimension from an empty generator list")
            d = generators[0].d
        for g in generators:
            if g.d != d:
                raise InputError("generators live in different dimensions")
        if degree_bound < 0:
            raise InputError(f"degree_bound must be >= 0, got {degree_bound}")
        self.d = int(d)
        self.degree_bound = int(degree_bound)
        self.generators = list(generators)
        self.max_generator_degree = max((g.degree() for g in generators), default=0)
        if self.max_generator_degree > degree_bound:
            raise InputError(
                f"generator degree {self.max_generator_degree} exceeds the "
                f"degree bound {degree_bound}"
            )
        self.basis = mi.enumerate_indices(self.d, self.degree_bound)
        self.slice_basis = self._build_slice()

    def _build_slice(self) -> np.ndarray:
        cols = []
        for g in self.generators:
            room = self.degree_bound - g.degree()
            for q_alpha in mi.enumerate_indices(self.d, room):
                prod = Polynomial.monomial(q_alpha) * g
                cols.append(prod.coeff_vector(self.basis))
        if not cols:
            return np.zeros((len(self.basis), 0), dtype=complex)
        return numerics.orth_columns(np.column_stack(cols))

    @property
    def slice_dim(self) -> int:
        return self.slice_basis.shape[1]

    def contains(self, p: Polynomial, tol: float = numerics.DEFAULT_TOL) -> bool:
        """Membership of p in the degree slice, relative to ||p||."""
        if p.d != self.d:
            raise InputError(f"polynomial dimension {p.d}, expected {self.d}")
        if p.is_zero():
            return True
        if p.degree() > self.degree_bound:
            raise InputError(
                f"membership query degree {p.degree()} exceeds bound {self.degree_bound}"
            )
        v = p.coeff_vector(self.basis)
        resid = v - self.slice_basis @ (self.slice_basis.conj().T @ v)
        return float(np.linalg.norm(resid)) <= tol * float(np.linalg.norm(v))

    def __repr__(self) -> str:
        return (
            f"PolyIdeal(d={self.d}, generators={len(self.generators)}, "
            f"degree_bound={self.degree_bound}, slice_dim={self.slice_dim})"
        )


@dataclass(frozen=True)
class LocalJetIdeal:
    """Orthonormal basis of the order-mu jet image of an ideal at a point.

    Jet coordinates are Taylor coefficients p_beta = d^beta p(z) / beta!
    indexed by the graded lex monomials of degree <= mu.
    """

    z: tuple
    mu: int
    d: int
    jet_basis: tuple
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def contains_jet(self, jet: np.ndarray, tol: float = numerics.DEFAULT_TOL) -> bool:
        jet = np.asarray(jet, dtype=complex)
        if jet.shape != (len(self.jet_basis),):
            raise InputError(
                f"jet has shape {jet.shape}, expected ({len(self.jet_basis)},)"
            )
        nrm = float(np.linalg.norm(jet))
        if nrm == 0.0:
            return True
        resid = jet - self.basis @ (self.basis.conj().T @ jet)
        return float(np.linalg.norm(resid)) <= tol * nrm

    def contains(self, p: Polynomial, tol: float = numerics.DEFAULT_TOL) -> bool:
        return self.contains_jet(p.jet(self.z, self.mu, self.jet_basis), tol)


def localize(ideal: PolyIdeal, z: Sequence[complex], mu: int) -> LocalJetIdeal:
    """Order-mu jet image of the ideal at z.

    Spanned by jets of (x - z)^beta * g over generators g and |beta| <= mu;
    multiplying by centered monomials up to the jet order itself is what
    makes the span complete (a factor of higher degree cannot influence
    jets of order <= mu, while units at z need the full range).
    """
    z = np.asarray(z, dtype=complex)
    if z.shape != (ideal.d,):
        raise InputError(f"point has shape {z.shape}, expected ({ideal.d},)")
    if mu < 0:
        raise InputError(f"jet order must be >= 0, got {mu}")
    max_mu = ideal.degree_bound - ideal.max_generator_degree + 1
    if mu > max_mu:
        raise InputError(
            f"jet order {mu} exceeds what degree_bound={ideal.degree_bound} "
            f"supports (max {max_mu})"
        )
    jet_basis = mi.enumerate_indices(ideal.d, mu)
    cols = []
    for g in ideal.generators:
        for beta in mi.enumerate_indices(ideal.d, mu):
            factor = Polynomial.constant(ideal.d, 1.0)
            for j, bj in enumerate(beta):
                if bj:
                    lin = Polynomial.variable(ideal.d, j) - Polynomial.constant(ideal.d, z[j])
                    for _ in range(bj):
                        factor = factor * lin
            cols.append((factor * g).jet(z, mu, jet_basis))
    if not cols:
        basis = np.zeros((len(jet_basis), 0), dtype=complex)
    else:
        basis = numerics.orth_columns(np.column_stack(cols))
    return LocalJetIdeal(z=tuple(z.tolist()), mu=mu, d=ideal.d, jet_basis=jet_basis, basis=basis)


def _isolation_mesh_check(ideal: PolyIdeal, z: np.ndarray, seed: int = 0) -> None:
    # Definite non-isolation test: a nearby point where every generator
    # vanishes means z cannot be an isolated common zero.
    rng = np.random.default_rng(seed)
    radius = 0.1
    probes = []
    for _ in range(64):
        v = rng.standard_normal(ideal.d) + 1j * rng.standard_normal(ideal.d)
        v /= np.linalg.norm(v)
        probes.append(z + radius * v)
    for j in range(ideal.d):
        e = np.zeros(ideal.d, dtype=complex)
        e[j] = radius
        probes.append(z + e)
        probes.append(z - e)
    for w in probes:
        all_vanish = True
        for g in ideal.generators:
            scale = 1.0 + max(abs(c) for c in g.coeffs.values())
            if abs(g(w)) > 1e-10 * scale:
                all_vanish = False
                break
        if all_vanish:
            raise ValidationError(
                f"common zero of all generators at distance {radius} from the "
                f"point; it is not isolated"
            )


def polynomial_order(
    ideal: PolyIdeal,
    z: Sequence[complex],
    tol: float = numerics.DEFAULT_TOL,
    seed: int = 0,
) -> int:
    """Smallest k >= 0 with every jet of m_z^(k+1) inside the jet image.

    The search is capped by what the degree bound supports; failure to
    terminate inside the cap raises, since order is only defined when the
    ideal contains a power of the maximal ideal at z.
    """
    z = np.asarray(z, dtype=complex)
    if z.shape != (ideal.d,):
        raise InputError(f"point has shape {z.shape}, expected ({ideal.d},)")
    if not ideal.generators:
        raise ValidationError("the zero ideal has no finite vanishing order")
    _isolation_mesh_check(ideal, z, seed=seed)
    max_mu = ideal.degree_bound - ideal.max_generator_degree + 1
    kappa = 0
    while kappa + 2 <= max_mu:
        mu = kappa + 2
        local = localize(ideal, z, mu)
        contained = True
        for beta in local.jet_basis:
            if mi.degree(beta) < kappa + 1:
                continue
            e = np.zeros(len(local.jet_basis), dtype=complex)
            e[local.jet_basis.index(beta)] = 1.0
            if not local.contains_jet(e, tol):
                contained = False
                break
        if contained:
            return kappa
        kappa += 1
    raise ValidationError(
        f"vanishing order at {tuple(z.tolist())} exceeds what "
        f"degree_bound={ideal.degree_bound} can certify"
    )


def vanishing_ideal_slice(
    points: Sequence[Sequence[complex]],
    kappa: int,
    degree_bound: int,
    tol: float = numerics.RANK_RTOL,
) -> PolyIdeal:
    """Degree slice of the polynomials whose derivatives of order <= kappa
    vanish at every point; kappa may be one order for all points or one
    order per point."""
    pts = [np.asarray(p, dtype=complex) for p in points]
    if not pts:
        raise InputError("need at least one point")
    d = pts[0].size
    for p in pts:
        if p.size != d:
            raise InputError("points live in different dimensions")
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if np.linalg.norm(pts[i] - pts[j]) < 1e-12:
                raise InputError(f"points {i} and {j} coincide")
    try:
        kappas = [int(kappa)] * len(pts)
    except TypeError:
        kappas = [int(k) for k in kappa]
        if len(kappas) != len(pts):
            raise InputError(
                f"got {len(kappas)} orders for {len(pts)} points"
            )
    if any(k < 0 for k in kappas):
        raise InputError(f"orders must be >= 0, got {kappas}")
    basis = mi.enumerate_indices(d, degree_bound)
    rows = []
    for z, kz in zip(pts, kappas):
        for alpha in mi.enumerate_indices(d, kz):
            row = np.zeros(len(basis), dtype=complex)
            for col, gamma in enumerate(basis):
                if not mi.divides(alpha, gamma):
                    continue
                c = 1.0
                zpow = 1.0 + 0j
                for gj, aj, zj in zip(gamma, alpha, z):
                    c *= float(np.prod(np.arange(gj - aj + 1, gj + 1)))
                    if gj - aj:
                        zpow *= zj ** (gj - aj)
                row[col] = c * zpow
            nrm = np.linalg.norm(row)
            if nrm > 0:
                row /= nrm
            rows.append(row)
    kernel = numerics.nullspace(np.array(rows), rtol=tol)
    gens = [Polynomial.from_coeff_vector(d, kernel[:, j], basis) for j in range(kernel.shape[1])]
    return PolyIdeal(gens, degree_bound, d=d)
