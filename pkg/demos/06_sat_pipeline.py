"""Round trip through an external SAT solver's file formats.

Export an instance as DIMACS CNF, pretend a solver produced a model (here
the built-in search stands in), and decode the model back into a
certificate that the verifier accepts.
"""

from schurlab import (
    Constraint,
    SearchParams,
    assignment_from_coloring,
    export_cnf,
    import_sat_assignment,
    solve,
    verify_coloring,
)

classic = Constraint.classic()

doc = export_cnf(K=2, n=4, constraint=classic)
print(f"instance K=2, n=4: {doc.num_variables} variables, "
      f"{len(doc.clauses)} clauses")
print("DIMACS head:")
for line in doc.to_dimacs().splitlines()[:8]:
    print("  ", line)

# a model, as an external solver would print it
certificate = solve(SearchParams(K=2)).certificate
model_text = "s SATISFIABLE\n" + assignment_from_coloring(doc, certificate)
print("\nmodel line:", model_text.splitlines()[1][:50], "...")

decoded = import_sat_assignment(doc, model_text)
print("decoded blocks:", decoded.describe())
print("verifies:", verify_coloring(decoded, classic).valid)

# the n = 5 instance is unsatisfiable (that is exactly the statement S(2)=4);
# a CNF solver would answer UNSAT, matching the prover's exhaustion
doc5 = export_cnf(K=2, n=5, constraint=classic)
print(f"\nK=2, n=5 exports {len(doc5.clauses)} clauses; "
      "an external solver reports UNSAT, matching the exact proof S(2)=4")
