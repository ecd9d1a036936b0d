"""Rearrangements between maximal sum-free partitions.

A maximal partition for a given K is generally not unique; the surviving
freedom is a set of value relocations that map one valid maximal partition
onto another.  This module builds the full set of such rearrangements for
one instance, anchored at a fixed reference partition (the lexicographically
least canonical one), and examines whether the set closes into a group.

Composition uses relocation semantics: a move (v, from, to) displaces v by
(to - from) blocks, modulo K, from wherever v currently sits.  Applying a
rearrangement to its own source therefore lands exactly on its target, and
repeated application walks values around the blocks cyclically, which is the
reading under which the K = 3 classic set closes into the cyclic group of
order 3.  A composite whose outcome stops verifying is reported as Invalid,
a value rather than an exception, since such failures are the interesting
finding here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constraints import (
    Coloring,
    Constraint,
    certificate_to_dict,
    is_sum_free,
    verify_coloring,
)
from .errors import ScaleRefusal
from .search import PROVE, SearchParams, enumerate_colorings, solve

DEFAULT_ELEMENT_CAP = 100_000


def canonicalize(coloring: Coloring) -> Coloring:
    """Relabel blocks so their minima increase; empty blocks go last.

    Content is untouched and the function is idempotent.
    """
    blocks = coloring.blocks()
    order = sorted(
        range(coloring.K),
        key=lambda i: (len(blocks[i]) == 0, blocks[i][0] if blocks[i] else 0, i),
    )
    relabel = {old + 1: new + 1 for new, old in enumerate(order)}
    assignment = tuple(relabel[k] for k in coloring.assignment)
    return Coloring(n=coloring.n, K=coloring.K, assignment=assignment)


@dataclass(frozen=True)
class Transformation:
    """A value relocation between two verified colorings of the same 1..n.

    moves lists (value, from-block, to-block) for exactly the values whose
    block differs between source and target; order = number of moved values.
    """

    source: Coloring
    target: Coloring
    moves: tuple[tuple[int, int, int], ...]
    constraint: Constraint

    @property
    def order(self) -> int:
        return len(self.moves)

    @property
    def is_identity(self) -> bool:
        return not self.moves

    @classmethod
    def from_pair(
        cls, source: Coloring, target: Coloring, constraint: Constraint
    ) -> "Transformation":
        if (source.n, source.K) != (target.n, target.K):
            raise ValueError("source and target must color the same 1..n into K blocks")
        for name, coloring in (("source", source), ("target", target)):
            if not verify_coloring(coloring, constraint).valid:
                raise ValueError(f"{name} coloring does not verify")
        moves = tuple(
            (v, source.block_of(v), target.block_of(v))
            for v in range(1, source.n + 1)
            if source.block_of(v) != target.block_of(v)
        )
        return cls(source=source, target=target, moves=moves, constraint=constraint)


@dataclass(frozen=True)
class Invalid:
    """Outcome of a composition whose result stops verifying."""

    reason: str


def apply_moves(
    coloring: Coloring, moves: tuple[tuple[int, int, int], ...]
) -> Coloring:
    """Displace each moved value by (to - from) mod K from its current block."""
    K = coloring.K
    assignment = list(coloring.assignment)
    for v, origin, destination in moves:
        cur = assignment[v - 1]
        assignment[v - 1] = (cur - 1 + destination - origin) % K + 1
    return Coloring(n=coloring.n, K=K, assignment=tuple(assignment))


def _fast_valid(coloring: Coloring, constraint: Constraint) -> bool:
    """Validity check tuned for the composition table's inner loop."""
    if constraint.is_modular:
        return verify_coloring(coloring, constraint).valid
    weak = constraint.pairwise_distinct
    n = coloring.n
    full = (1 << (2 * n + 2)) - 1
    elems = [0] * coloring.K
    sums = [0] * coloring.K
    for v, k in enumerate(coloring.assignment, start=1):
        k -= 1
        if (sums[k] >> v) & 1:
            return False
        bit = 1 << v
        ns = sums[k] | ((elems[k] << v) & full)
        if not weak:
            ns |= bit << v
        sums[k] = ns
        elems[k] |= bit
    return True


def compose(a: Transformation, b: Transformation) -> Transformation | Invalid:
    """Apply a to the shared source, then b's moves to the outcome.

    The intermediate coloring equals a.target, which carried verification
    from construction; the final coloring is re-verified and an Invalid
    value is returned when it breaks the sum-free rule.
    """
    if a.source != b.source:
        raise ValueError("compose needs transformations anchored at one reference")
    if a.constraint != b.constraint:
        raise ValueError("compose needs a shared constraint")
    final = apply_moves(a.target, b.moves)
    if not _fast_valid(final, a.constraint):
        report = verify_coloring(final, a.constraint)
        witness = report.violations[0] if report.violations else None
        return Invalid(
            reason=f"composite coloring violates the rule, witness {witness}"
        )
    return Transformation.from_pair(a.source, final, a.constraint)


def _can_insert(block: tuple[int, ...], v: int, constraint: Constraint) -> bool:
    """Would block + {v} stay sum-free?  v must not already be a member.

    Non-modular fast path: the doubling check (2v present), the pair-sum
    check (v equals a sum from the block), and the difference check (two
    block members differ by v).
    """
    if constraint.is_modular:
        ok, _ = is_sum_free(block + (v,), constraint)
        return ok
    members = set(block)
    weak = constraint.pairwise_distinct
    if not weak and 2 * v in members:
        return False
    for x in block:
        if v + x in members:
            return False
        y = v - x
        if y >= 1 and y in members:
            if x < y or (not weak and x == y):
                return False
    return True


def first_order_moves(
    coloring: Coloring, constraint: Constraint
) -> list[Transformation]:
    """All single-value relocations whose outcome still verifies.

    Matches a brute-force filter of the n * (K - 1) candidate moves; results
    are ordered by (value, destination block).
    """
    if not verify_coloring(coloring, constraint).valid:
        raise ValueError("coloring does not verify")
    blocks = coloring.blocks()
    out: list[Transformation] = []
    for v in range(1, coloring.n + 1):
        cur = coloring.block_of(v)
        for dest in range(1, coloring.K + 1):
            if dest == cur:
                continue
            if not _can_insert(blocks[dest - 1], v, constraint):
                continue
            assignment = list(coloring.assignment)
            assignment[v - 1] = dest
            target = Coloring(n=coloring.n, K=coloring.K, assignment=tuple(assignment))
            out.append(
                Transformation(
                    source=coloring,
                    target=target,
                    moves=((v, cur, dest),),
                    constraint=constraint,
                )
            )
    return out


@dataclass(frozen=True)
class RearrangementSet:
    """Every rearrangement from the reference partition, identity included.

    cardinality equals the number of canonical maximal partitions, which is
    the intrinsic degeneracy of the instance.
    """

    reference: Coloring
    elements: tuple[Transformation, ...]
    constraint: Constraint
    value: int

    @property
    def cardinality(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class GroupReport:
    is_group: bool
    closure_failures: tuple[tuple[tuple[int, int], str], ...]
    identified_structure: str | None
    cayley: tuple[tuple[int | None, ...], ...]


def _scale_guard(K: int, constraint: Constraint) -> None:
    if constraint.is_modular:
        if constraint.modulus > 4:
            raise ScaleRefusal(
                f"rearrangement sets for modulus {constraint.modulus} are beyond "
                "the configured desk scale (modulus <= 4 supported)"
            )
        return
    limit = 4 if not constraint.pairwise_distinct else 3
    if K > limit:
        raise ScaleRefusal(
            f"rearrangement set for K={K} {constraint.kind} partitions needs "
            f"enumeration beyond desk scale (K <= {limit} supported)"
        )


def build_rset(
    K: int,
    constraint: Constraint = Constraint.classic(),
    element_cap: int = DEFAULT_ELEMENT_CAP,
) -> RearrangementSet:
    """Solve the instance, enumerate all canonical maximal partitions, and
    anchor one rearrangement per partition at the lexicographically least.
    """
    _scale_guard(K, constraint)
    result = solve(SearchParams(K=K, constraint=constraint, mode=PROVE))
    value = result.value
    if value == 0:
        reference = Coloring(n=0, K=K, assignment=())
        identity = Transformation(
            source=reference, target=reference, moves=(), constraint=constraint
        )
        return RearrangementSet(
            reference=reference, elements=(identity,), constraint=constraint, value=0
        )
    partitions: list[Coloring] = []
    for coloring in enumerate_colorings(K, value, constraint, canonical=True):
        partitions.append(coloring)
        if len(partitions) > element_cap:
            raise ScaleRefusal(
                f"more than {element_cap} maximal partitions; raise element_cap "
                "to enumerate this instance"
            )
    reference = partitions[0]
    elements = tuple(
        Transformation.from_pair(reference, p, constraint) for p in partitions
    )
    return RearrangementSet(
        reference=reference, elements=elements, constraint=constraint, value=value
    )


def check_group(rset: RearrangementSet) -> GroupReport:
    """Compose every ordered pair; closure plus inverses makes it a group.

    A single generator whose powers cover the whole set is reported as a
    cyclic structure.
    """
    elements = rset.elements
    count = len(elements)
    index_of = {t.target.assignment: i for i, t in enumerate(elements)}
    identity_index = next(i for i, t in enumerate(elements) if t.is_identity)
    table: list[list[int | None]] = [[None] * count for _ in range(count)]
    failures: list[tuple[tuple[int, int], str]] = []
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            composite = compose(a, b)
            if isinstance(composite, Invalid):
                failures.append(((i, j), composite.reason))
                continue
            idx = index_of.get(composite.target.assignment)
            if idx is None:
                failures.append(
                    ((i, j), "composite verifies but is not an element of the set")
                )
                continue
            table[i][j] = idx
    has_inverses = all(
        any(
            table[i][j] == identity_index and table[j][i] == identity_index
            for j in range(count)
        )
        for i in range(count)
    )
    is_group = not failures and has_inverses
    structure: str | None = None
    if count == 1 and is_group:
        structure = "trivial"
    elif is_group:
        for g in range(count):
            orbit: set[int] = set()
            cur = identity_index
            while True:
                cur = table[cur][g]
                if cur in orbit:
                    break
                orbit.add(cur)
                if cur == identity_index:
                    break
            if len(orbit) == count:
                structure = f"cyclic of order {count}"
                break
    return GroupReport(
        is_group=is_group,
        closure_failures=tuple(failures),
        identified_structure=structure,
        cayley=tuple(tuple(row) for row in table),
    )


def rset_to_dict(rset: RearrangementSet, report: GroupReport | None = None) -> dict:
    data = {
        "value": rset.value,
        "cardinality": rset.cardinality,
        "reference": certificate_to_dict(rset.reference, rset.constraint),
        "moves": [[list(m) for m in t.moves] for t in rset.elements],
    }
    if report is not None:
        data["group"] = {
            "is_group": report.is_group,
            "identified_structure": report.identified_structure,
            "closure_failure_count": len(report.closure_failures),
            "closure_failures_sample": [
                {"pair": list(pair), "reason": reason}
                for pair, reason in report.closure_failures[:20]
            ],
        }
    return data
