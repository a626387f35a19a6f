"""Families where every similarity is forced to be badly conditioned.

Two compact families of cyclic nilpotent tuples that are similar to their
monomial models, with the whole intertwiner space known in closed form, so
the minimal condition number over all intertwiners can be computed and
compared against the predicted growth rates 1/eps and eps^(-1/3).
"""

from arveson import repro

# One variable: 2x2 blocks [[0, eps], [0, 0]] against the model [[0,1],[0,0]].
# The intertwiners are upper triangular and the best condition number is
# exactly 1/eps.
rep = repro.example_one_variable(eps_list=(0.1, 0.01, 0.001), lams=(0.5,))
print("one variable family (predicted min cond = 1/eps):")
for row in rep.rows:
    print(f"  eps = {row.eps:7.4f}: measured {row.measured_min_cond:10.2f}, "
          f"formula {row.formula_min_cond:10.2f}, "
          f"within 1%: {row.within_one_percent}")

# Two variables: R(eps) = (N1, N1 + eps N2)/f(eps) on 3x3. The intertwiner
# space is three dimensional with an explicit parametric form, det X =
# a^3 eps / f^2 along it, and the minimal condition number grows like
# eps^(-1/3) f^(2/3) even though the family converges as eps -> 0.
rep2 = repro.example_two_variable(eps_list=(1.0, 0.1, 0.01, 0.001))
print("two variable family (lower bound eps^(-1/3) f^(2/3) - tol):")
for row in rep2.rows:
    print(f"  eps = {row.eps:7.4f}: f = {row.f_measured:8.5f}, "
          f"nullspace dim {row.nullspace_dim}, "
          f"min cond {row.measured_min_cond:9.3f} >= {row.lower_bound:9.3f}: "
          f"{row.bound_holds}")

# The dichotomy at a glance: separated simple nodes keep a uniformly
# bounded diagonalizer, while the nilpotent families above degrade at a
# polynomial rate in eps. Both behaviors from one report.
rep3 = repro.dichotomy_demo()
print(f"dichotomy: jet model cond = {rep3.jet_model_cond:.4f} (bounded), "
      f"family min cond over eps = {rep3.global_min_cond:.2f} (degrading)")
