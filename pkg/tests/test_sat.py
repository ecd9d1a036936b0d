"""CNF export/import checks, including a tiny truth-table satisfiability
oracle cross-checked against the search engine's existence answer."""

from __future__ import annotations

from itertools import product

import pytest

from schurlab.constraints import Constraint, verify_coloring
from schurlab.errors import InconsistentAssignment, MalformedAssignment
from schurlab.sat import (
    assignment_from_coloring,
    export_cnf,
    import_sat_assignment,
    parse_assignment_text,
)
from schurlab.search import enumerate_colorings

CLASSIC = Constraint.classic()


def truth_table_satisfiable(doc) -> bool:
    """Evaluate every assignment of the document's variables."""
    V = doc.num_variables
    for bits in product((False, True), repeat=V):
        if all(any(bits[lit - 1] if lit > 0 else not bits[-lit - 1] for lit in clause)
               for clause in doc.clauses):
            return True
    return False


def test_variable_count_and_header():
    doc = export_cnf(2, 4, CLASSIC)
    assert doc.num_variables == 8
    dimacs = doc.to_dimacs()
    header = [ln for ln in dimacs.splitlines() if ln.startswith("p cnf")][0]
    assert header == f"p cnf 8 {len(doc.clauses)}"
    assert all(ln.endswith(" 0") for ln in dimacs.splitlines()
               if ln and not ln.startswith(("c", "p")))


def test_variable_map_roundtrip():
    doc = export_cnf(3, 5, CLASSIC)
    for v in range(1, 6):
        for k in range(1, 4):
            assert doc.variable_meaning(doc.variable(v, k)) == (v, k)


@pytest.mark.parametrize(
    "K,n,constraint",
    [
        (2, 4, CLASSIC),
        (2, 5, CLASSIC),
        (1, 2, CLASSIC),
        (2, 3, Constraint.weak()),
        (2, 2, Constraint.modular(2)),
        (1, 1, Constraint.modular(1)),
    ],
    ids=str,
)
def test_satisfiability_matches_coloring_existence(K, n, constraint):
    doc = export_cnf(K, n, constraint)
    exists = bool(list(enumerate_colorings(K, n, constraint, canonical=True)))
    assert truth_table_satisfiable(doc) == exists


def test_unsat_beyond_schur_number():
    # S(2) = 4, so n = 5 must be unsatisfiable
    assert not truth_table_satisfiable(export_cnf(2, 5, CLASSIC))


def test_model_roundtrip_through_decoder():
    doc = export_cnf(2, 4, CLASSIC)
    certificate = next(enumerate_colorings(2, 4, CLASSIC))
    text = assignment_from_coloring(doc, certificate)
    decoded = import_sat_assignment(doc, text)
    assert decoded == certificate
    assert verify_coloring(decoded, CLASSIC).valid


def test_k3_model_decodes_to_maximal_certificate():
    doc = export_cnf(3, 13, CLASSIC)
    for certificate in enumerate_colorings(3, 13, CLASSIC):
        decoded = import_sat_assignment(doc, assignment_from_coloring(doc, certificate))
        assert decoded == certificate
        assert verify_coloring(decoded, CLASSIC).valid


def test_decoder_accepts_raw_literals_without_v_prefix():
    doc = export_cnf(2, 4, CLASSIC)
    certificate = next(enumerate_colorings(2, 4, CLASSIC))
    text = assignment_from_coloring(doc, certificate)
    raw = text[2:]  # strip the "v " prefix
    assert import_sat_assignment(doc, raw) == certificate


def test_decoder_accepts_solver_chatter():
    doc = export_cnf(2, 4, CLASSIC)
    certificate = next(enumerate_colorings(2, 4, CLASSIC))
    text = "c solved by something\ns SATISFIABLE\n" + assignment_from_coloring(
        doc, certificate
    )
    assert import_sat_assignment(doc, text) == certificate


def test_value_in_two_blocks_is_inconsistent():
    doc = export_cnf(2, 4, CLASSIC)
    lits = [1, 2]  # value 1 true in both blocks
    for v in range(2, 5):
        lits += [doc.variable(v, 1), -doc.variable(v, 2)]
    with pytest.raises(InconsistentAssignment):
        import_sat_assignment(doc, " ".join(map(str, lits)))


def test_truncated_assignment_is_malformed():
    doc = export_cnf(2, 4, CLASSIC)
    with pytest.raises(MalformedAssignment):
        import_sat_assignment(doc, "v 1 -2 3 0")
    with pytest.raises(MalformedAssignment):
        import_sat_assignment(doc, "v nonsense 0")
    with pytest.raises(MalformedAssignment):
        import_sat_assignment(doc, "")
    with pytest.raises(MalformedAssignment):
        import_sat_assignment(doc, "v 99 0")


def test_parse_assignment_tolerates_multiline():
    lits = parse_assignment_text("v 1 -2\nv 3 -4 0\n")
    assert lits == [1, -2, 3, -4]


def test_doubling_clause_is_binary():
    doc = export_cnf(1, 2, CLASSIC)
    # 1 + 1 = 2 dedupes to a two-literal clause
    assert (-2, -1) in doc.clauses or (-1, -2) in doc.clauses


def test_modular_self_violation_gives_unit_clause():
    doc = export_cnf(2, 2, Constraint.modular(2))
    # 2 + 2 is congruent to 2 (mod 2): value 2 can sit in no block
    units = [c for c in doc.clauses if len(c) == 1]
    assert {(-doc.variable(2, 1),), (-doc.variable(2, 2),)} <= set(units)
