"""Exact Schur-type numbers, from seconds to certificates.

Walks the four rule variants: prove the small classic and weak numbers,
confirm the closed forms for the modular families, and show how every
result ships with a verifying certificate.
"""

from schurlab import Budget, Constraint, SearchParams, solve, verify_coloring

# --- classic numbers: 1, 4, 13 are instant; 44 takes about a minute ---------
for K in (1, 2, 3):
    result = solve(SearchParams(K=K))
    print(f"S({K}) = {result.value}   certificate: {result.certificate.describe()}")

# every certificate re-verifies through the independent checker
result = solve(SearchParams(K=3))
assert verify_coloring(result.certificate, Constraint.classic()).valid

# --- weak variant: pairwise-distinct summands loosen the rule ---------------
for K in (1, 2, 3):
    result = solve(SearchParams(K=K, constraint=Constraint.weak()))
    print(f"WS({K}) = {result.value}  certificate: {result.certificate.describe()}")

# --- modular variants trade exponential growth for closed forms -------------
print("\nmodulus 3, classic rule: the number saturates at 2")
for K in (1, 2, 4, 6):
    result = solve(SearchParams(K=K, constraint=Constraint.modular(3)))
    print(f"  S_3({K}) = {result.value}")

print("modulus 3, weak rule: linear growth 6(K-2)+2")
for K in (3, 4, 5, 6):
    result = solve(SearchParams(K=K, constraint=Constraint.weak_modular(3)))
    print(f"  WS_3({K}) = {result.value}")

# --- budgets make the hard instances safe to poke at ------------------------
capped = solve(SearchParams(K=4, budget=Budget(nodes=50_000)))
print(f"\nK=4 with a 50k-node budget: best depth {capped.value}, "
      f"proven={capped.proven_maximal} (the full proof needs ~35M nodes)")
