"""Norm-bound certificates for similarities onto monomial models.

A cyclic commuting nilpotent row contraction N is similar to the model
tuple of its annihilating monomial ideal. The certificate machinery
measures four quantities (epsilon, gamma, L, card Xi) from N alone and,
when epsilon * card Xi < 1, produces the similarity X together with proved
bounds on ||X|| and ||X^-1||. This script shows the whole range: an exact
model (trivial certificate), a perturbed one (bounds with real content),
and a family where the hypothesis genuinely fails.
"""

import numpy as np

from arveson import models, nilsim, repro, tuples
from arveson.errors import ValidationError

gens = [(2, 0), (1, 1), (0, 2)]
model = models.monomial_model(gens, 2)

# --- exact model: everything collapses to the identity -------------------
cert = nilsim.build_similarity(model.tuple, model.cyclic, gens)
h = cert.hypotheses
print("exact model:")
print(f"  epsilon = {h.epsilon:.2e}, gamma = {h.gamma:.12f}, L = {h.L}, card = {h.card}")
print(f"  ||X|| = {cert.norm_X:.12f} <= bound {cert.bound_X:.6f}")
print(f"  ||X - I|| = {np.linalg.norm(cert.X - np.eye(model.dim), 2):.2e}")

# --- perturbed input: the bounds have slack but hold ----------------------
rng = np.random.default_rng(3)
S = np.eye(model.dim) + 0.03 * (
    rng.standard_normal((model.dim,) * 2) + 1j * rng.standard_normal((model.dim,) * 2)
)
Si = np.linalg.inv(S)
mats = [S @ Z @ Si for Z in model.tuple.matrices]
g = np.linalg.norm(sum(M @ M.conj().T for M in mats), 2)
if g > 1.0:
    mats = [M / np.sqrt(g) for M in mats]  # back inside the row contraction ball
N = tuples.validate(mats)
xi = S @ model.cyclic
xi /= np.linalg.norm(xi)

cert = nilsim.build_similarity(N, xi, gens)
h = cert.hypotheses
print("perturbed model:")
print(f"  epsilon*card = {h.epsilon * h.card:.4f}  (< 1, so the certificate applies)")
print(f"  ||X||   = {cert.norm_X:.6f} <= {cert.bound_X:.6f}")
print(f"  ||X^-1|| = {cert.norm_X_inv:.6f} <= {cert.bound_X_inv:.6f}")
print(f"  intertwining residual = {cert.residual:.2e}")

# necessity: any similarity at all forces every weighted orbit norm above
# 1 / cond(X)^2, and the gauge circle must act boundedly
nec = nilsim.necessity_check(N, cert.X, gens)
print(f"  necessity: ok={nec.ok}, orbit floor = {nec.orbit_floor:.4f}, "
      f"worst margin = {nec.worst_orbit_margin:.4f}")

# --- the troubled family --------------------------------------------------
# R(t) = (N1, N1 + t N2) / f(t) is cyclic, nilpotent, and similar to its
# model for every t > 0, but epsilon >= 1 - 1/f(t)^2 >= 1/2 while card = 3,
# so epsilon * card >= 3/2 and the norm-bound hypothesis never holds. The
# certificate is refused; the raw intertwiner still exists.
print("troubled family R(t):")
e0 = np.array([1.0, 0.0, 0.0], dtype=complex)
for t in (0.05, 0.3):
    R1, R2, f = repro.two_variable_family(t)
    R = tuples.validate([R1, R2])
    xi_t = e0
    h = nilsim.check_hypotheses(R, xi_t)
    try:
        nilsim.build_similarity(R, xi_t, [(2, 0), (1, 1), (0, 2)])
        refused = False
    except ValidationError:
        refused = True
    X, mdl, res = nilsim.correspondence_similarity(R, xi_t, [(2, 0), (1, 1), (0, 2)])
    print(f"  t={t}: epsilon*card = {h.epsilon * h.card:.4f}, certificate refused: {refused}, "
          f"bare intertwiner residual = {res:.1e}, ||X^-1|| = {np.linalg.norm(np.linalg.inv(X), 2):.4f}")
