"""CNF export of coloring instances and re-import of solver models.

The encoding is the direct one: a boolean variable per (value, block) pair,
exactly-one clauses per value, and one negative clause per in-block triple
that would violate the active sum-free rule.  The document is satisfiable
iff a valid K-coloring of 1..n exists, so an external SAT solver can stand
in for the built-in search and its model can be decoded back into a
certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constraints import Coloring, Constraint, residue
from .errors import InconsistentAssignment, MalformedAssignment


@dataclass(frozen=True)
class CnfDocument:
    """Variable map and clause list for one (K, n, constraint) instance."""

    K: int
    n: int
    constraint: Constraint
    clauses: tuple[tuple[int, ...], ...]

    @property
    def num_variables(self) -> int:
        return self.K * self.n

    def variable(self, value: int, block: int) -> int:
        """1-based DIMACS index of the 'value sits in block' variable."""
        if not (1 <= value <= self.n and 1 <= block <= self.K):
            raise ValueError(f"no variable for value {value}, block {block}")
        return (value - 1) * self.K + block

    def variable_meaning(self, index: int) -> tuple[int, int]:
        if not (1 <= index <= self.num_variables):
            raise ValueError(f"variable {index} outside 1..{self.num_variables}")
        value, block = divmod(index - 1, self.K)
        return value + 1, block + 1

    def to_dimacs(self) -> str:
        lines = [
            f"c sum-free coloring, kind={self.constraint.kind}"
            + (f" mod {self.constraint.modulus}" if self.constraint.is_modular else ""),
            f"c K={self.K} n={self.n}, var (v,k) = (v-1)*K + k",
            f"p cnf {self.num_variables} {len(self.clauses)}",
        ]
        for clause in self.clauses:
            lines.append(" ".join(map(str, clause)) + " 0")
        return "\n".join(lines) + "\n"


def _violating_triples(n: int, constraint: Constraint):
    """All (x, y, z) from 1..n that may not share a block, in lex order."""
    weak = constraint.pairwise_distinct
    m = constraint.modulus
    for x in range(1, n + 1):
        for y in range(x + 1 if weak else x, n + 1):
            if m is None:
                z = x + y
                if z <= n:
                    yield (x, y, z)
            else:
                r = residue(x + y, m)
                for z in range(1, n + 1):
                    if weak and (z == x or z == y):
                        continue
                    if residue(z, m) == r:
                        yield (x, y, z)


def export_cnf(K: int, n: int, constraint: Constraint) -> CnfDocument:
    """Encode the instance; satisfiable iff a valid coloring exists."""
    if K < 1 or n < 1:
        raise ValueError("K and n must be >= 1")
    doc = CnfDocument(K=K, n=n, constraint=constraint, clauses=())
    clauses: list[tuple[int, ...]] = []
    for v in range(1, n + 1):
        clauses.append(tuple(doc.variable(v, k) for k in range(1, K + 1)))
        for k1 in range(1, K + 1):
            for k2 in range(k1 + 1, K + 1):
                clauses.append((-doc.variable(v, k1), -doc.variable(v, k2)))
    seen = set()
    for x, y, z in _violating_triples(n, constraint):
        for k in range(1, K + 1):
            lits = tuple(sorted({-doc.variable(w, k) for w in (x, y, z)}, reverse=True))
            if lits not in seen:
                seen.add(lits)
                clauses.append(lits)
    return CnfDocument(K=K, n=n, constraint=constraint, clauses=tuple(clauses))


def parse_assignment_text(text: str) -> list[int]:
    """Signed literals from a solver's output.

    Accepts DIMACS-style 'v' lines, raw signed-integer lists, or full solver
    output with comment/status lines; a terminating 0 is optional.
    """
    lits: list[int] = []
    saw_any = False
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(("c", "s", "#")):
            continue
        if line.startswith(("v", "V")):
            line = line[1:]
        for token in line.split():
            try:
                lit = int(token)
            except ValueError as exc:
                raise MalformedAssignment(f"unreadable literal {token!r}") from exc
            saw_any = True
            if lit == 0:
                continue
            lits.append(lit)
    if not saw_any:
        raise MalformedAssignment("assignment text contains no literals")
    return lits


def import_sat_assignment(doc: CnfDocument, assignment: str) -> Coloring:
    """Decode a model of `doc` into the coloring it represents."""
    lits = parse_assignment_text(assignment)
    polarity: dict[int, bool] = {}
    for lit in lits:
        var = abs(lit)
        if var > doc.num_variables:
            raise MalformedAssignment(
                f"literal {lit} names variable {var} outside 1..{doc.num_variables}"
            )
        value = lit > 0
        if polarity.get(var, value) != value:
            raise MalformedAssignment(f"variable {var} assigned both polarities")
        polarity[var] = value
    missing = [v for v in range(1, doc.num_variables + 1) if v not in polarity]
    if missing:
        raise MalformedAssignment(
            f"assignment leaves {len(missing)} variables unset (first: {missing[0]})"
        )
    assign: list[int] = []
    for value in range(1, doc.n + 1):
        blocks = [k for k in range(1, doc.K + 1) if polarity[doc.variable(value, k)]]
        if len(blocks) != 1:
            raise InconsistentAssignment(
                f"value {value} is placed in {len(blocks)} blocks: {blocks}"
            )
        assign.append(blocks[0])
    return Coloring(n=doc.n, K=doc.K, assignment=tuple(assign))


def assignment_from_coloring(doc: CnfDocument, coloring: Coloring) -> str:
    """Render a coloring as a DIMACS 'v' line (the inverse of decoding)."""
    if coloring.n != doc.n or coloring.K != doc.K:
        raise ValueError("coloring shape does not match the document")
    lits = []
    for value in range(1, doc.n + 1):
        placed = coloring.block_of(value)
        for k in range(1, doc.K + 1):
            var = doc.variable(value, k)
            lits.append(var if k == placed else -var)
    return "v " + " ".join(map(str, lits)) + " 0\n"
