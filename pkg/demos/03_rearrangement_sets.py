"""Degeneracy of maximal partitions and the rearrangement group question.

The maximal partitions of one instance are connected by value relocations.
Anchored at the lexicographically least canonical partition, the set of all
such rearrangements has the degeneracy as its cardinality, and may or may
not close under composition.  K = 3 closes into the cyclic group of order
3; K = 4 famously does not close at all.
"""

from schurlab import build_rset, check_group, compose, first_order_moves
from schurlab.constraints import Constraint

# --- K = 3: three maximal partitions, one movable value ---------------------
rset = build_rset(3)
print(f"K=3: {rset.cardinality} maximal partitions at n = {rset.value}")
print(f"reference: {rset.reference.describe()}")
for i, t in enumerate(rset.elements):
    moves = ", ".join(f"{v}: {a}->{b}" for v, a, b in t.moves) or "identity"
    print(f"  element {i}: {moves}")

report = check_group(rset)
print(f"group: {report.is_group}, structure: {report.identified_structure}")
print("composition table:")
for row in report.cayley:
    print("   ", row)

# relocation semantics: applying the same single move twice walks the value
# one block further, which is exactly why the set closes cyclically
_, r1, r2 = rset.elements
print(f"r1 o r1 lands on r2's target: {compose(r1, r1).target == r2.target}")

# first-order moves can be listed for any verified partition
moves = first_order_moves(rset.reference, Constraint.classic())
print(f"single-value moves from the reference: {[t.moves[0] for t in moves]}")

# --- K = 4 answers an open counting question (takes ~2 minutes) -------------
print("\nbuilding the K=4 set (full enumeration at n = 44)...")
rset4 = build_rset(4)
report4 = check_group(rset4)
print(f"K=4: cardinality {rset4.cardinality}, is_group = {report4.is_group}, "
      f"{len(report4.closure_failures)} of {rset4.cardinality ** 2} "
      f"compositions leave the set")
