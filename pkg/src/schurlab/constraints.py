"""Sum-free rules, residue conventions, and certificate verification.

A block of positive integers is *sum-free* when no equation x + y = z can be
formed from its members.  Four variants of the rule are supported:

* classic:        x = y is allowed, so 2x = z already counts as a violation.
* weak:           x, y, z must be pairwise distinct values.
* modular (m):    the equation is read on residues; the representative
                  system is {1..m} with m standing for the zero class.
* weak-modular:   modular with the pairwise-distinctness requirement.

The {1..m} residue convention (rather than {0..m-1}) is what makes the
modulus m itself uncolourable: m + m falls in the class of m, so any block
containing m violates the rule on its own.  All other modules treat the
functions here as the single source of truth for admissibility.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

CLASSIC = "classic"
WEAK = "weak"
MODULAR = "modular"
WEAK_MODULAR = "weak-modular"

_KINDS = (CLASSIC, WEAK, MODULAR, WEAK_MODULAR)


def residue(x: int, m: int) -> int:
    """Residue of x in the representative system {1..m}.

    residue(7, 3) == 1, residue(6, 3) == 3 (the zero class is written m).
    """
    if x < 1 or m < 1:
        raise ValueError(f"residue needs x >= 1 and m >= 1, got x={x}, m={m}")
    return (x - 1) % m + 1


@dataclass(frozen=True)
class Constraint:
    """Which sum-free rule applies; modulus present iff the rule is modular."""

    kind: str
    modulus: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.kind in (MODULAR, WEAK_MODULAR):
            if self.modulus is None or self.modulus < 1:
                raise ValueError(f"{self.kind} constraint needs modulus >= 1")
        elif self.modulus is not None:
            raise ValueError(f"{self.kind} constraint takes no modulus")

    @classmethod
    def classic(cls) -> "Constraint":
        return cls(CLASSIC)

    @classmethod
    def weak(cls) -> "Constraint":
        return cls(WEAK)

    @classmethod
    def modular(cls, m: int) -> "Constraint":
        return cls(MODULAR, m)

    @classmethod
    def weak_modular(cls, m: int) -> "Constraint":
        return cls(WEAK_MODULAR, m)

    @property
    def pairwise_distinct(self) -> bool:
        """True when x, y, z must be pairwise distinct (the weak variants)."""
        return self.kind in (WEAK, WEAK_MODULAR)

    @property
    def is_modular(self) -> bool:
        return self.modulus is not None

    def describe(self) -> str:
        if self.is_modular:
            return f"{self.kind} (mod {self.modulus})"
        return self.kind


def as_block(values: Iterable[int]) -> tuple[int, ...]:
    """Normalize an iterable into a strictly increasing tuple of positives."""
    vals = tuple(sorted(values))
    if any(v < 1 for v in vals):
        raise ValueError("block values must be positive integers")
    if any(a == b for a, b in zip(vals, vals[1:])):
        raise ValueError("block values must be distinct")
    return vals


def is_sum_free(
    block: Iterable[int], constraint: Constraint
) -> tuple[bool, tuple[int, int, int] | None]:
    """Check one block; on violation return the lexicographically first
    witness (x, y, z) with x + y = z (or the residue equation modularly).

    The empty block is sum-free under every constraint.
    """
    vals = as_block(block)
    present = set(vals)
    weak = constraint.pairwise_distinct
    m = constraint.modulus
    if m is None:
        for i, x in enumerate(vals):
            for y in vals[i + 1 if weak else i:]:
                z = x + y
                # z > y >= x, so pairwise distinctness of z is automatic
                if z in present:
                    return False, (x, y, z)
        return True, None
    for i, x in enumerate(vals):
        for y in vals[i + 1 if weak else i:]:
            r = residue(x + y, m)
            for z in vals:
                if weak and (z == x or z == y):
                    continue
                if residue(z, m) == r:
                    return False, (x, y, z)
    return True, None


@dataclass(frozen=True)
class Coloring:
    """Assignment of each integer 1..n to one of K blocks (1-based indices).

    assignment[v - 1] is the block of value v.  n = 0 encodes the empty
    coloring (needed for instances whose maximum is zero, e.g. modulus 1).
    """

    n: int
    K: int
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if len(self.assignment) != self.n:
            raise ValueError("assignment length must equal n")
        if any(not (1 <= k <= self.K) for k in self.assignment):
            raise ValueError("assignment entries must be block indices 1..K")

    @classmethod
    def from_blocks(
        cls, blocks: Sequence[Iterable[int]], K: int | None = None, n: int | None = None
    ) -> "Coloring":
        """Build from explicit blocks; they must partition 1..n."""
        blocks = [as_block(b) for b in blocks]
        if K is None:
            K = len(blocks)
        if len(blocks) > K:
            raise ValueError(f"{len(blocks)} blocks but K={K}")
        values = [v for b in blocks for v in b]
        if n is None:
            n = max(values, default=0)
        if sorted(values) != list(range(1, n + 1)):
            raise ValueError("blocks must partition 1..n exactly")
        assign = [0] * n
        for k, b in enumerate(blocks, start=1):
            for v in b:
                assign[v - 1] = k
        return cls(n=n, K=K, assignment=tuple(assign))

    def block_of(self, v: int) -> int:
        return self.assignment[v - 1]

    def blocks(self) -> list[tuple[int, ...]]:
        """Blocks as sorted tuples, indexed by label order (may be empty)."""
        out: list[list[int]] = [[] for _ in range(self.K)]
        for v, k in enumerate(self.assignment, start=1):
            out[k - 1].append(v)
        return [tuple(b) for b in out]

    def describe(self) -> str:
        return " | ".join(
            ",".join(map(str, b)) if b else "-" for b in self.blocks()
        )


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of a certificate check; valid iff no violating triples."""

    valid: bool
    violations: tuple[tuple[int, int, int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.valid != (len(self.violations) == 0):
            raise ValueError("valid must mirror an empty violation list")


def verify_coloring(coloring: Coloring, constraint: Constraint) -> VerifyReport:
    """List every violating (block, x, y, z) across all blocks."""
    violations: list[tuple[int, int, int, int]] = []
    weak = constraint.pairwise_distinct
    m = constraint.modulus
    for k, block in enumerate(coloring.blocks(), start=1):
        present = set(block)
        for i, x in enumerate(block):
            for y in block[i + 1 if weak else i:]:
                if m is None:
                    z = x + y
                    if z in present:
                        violations.append((k, x, y, z))
                else:
                    r = residue(x + y, m)
                    for z in block:
                        if weak and (z == x or z == y):
                            continue
                        if residue(z, m) == r:
                            violations.append((k, x, y, z))
    return VerifyReport(valid=not violations, violations=tuple(violations))


# --- certificate JSON -------------------------------------------------------

def constraint_to_dict(constraint: Constraint) -> dict:
    return {"kind": constraint.kind, "modulus": constraint.modulus}


def constraint_from_dict(data: dict) -> Constraint:
    return Constraint(kind=data["kind"], modulus=data.get("modulus"))


def certificate_to_dict(coloring: Coloring, constraint: Constraint) -> dict:
    """Certificate schema: blocks sorted ascending, ordered by minimum."""
    blocks = [list(b) for b in coloring.blocks()]
    nonempty = sorted((b for b in blocks if b), key=lambda b: b[0])
    empty = [b for b in blocks if not b]
    return {
        "kind": constraint.kind,
        "modulus": constraint.modulus,
        "K": coloring.K,
        "n": coloring.n,
        "blocks": nonempty + empty,
    }


def certificate_from_dict(data: dict) -> tuple[Coloring, Constraint]:
    constraint = constraint_from_dict(data)
    coloring = Coloring.from_blocks(data["blocks"], K=data["K"], n=data["n"])
    return coloring, constraint


def save_certificate(path: str | Path, coloring: Coloring, constraint: Constraint) -> None:
    Path(path).write_text(
        json.dumps(certificate_to_dict(coloring, constraint), indent=2) + "\n"
    )


def load_certificate(path: str | Path) -> tuple[Coloring, Constraint]:
    return certificate_from_dict(json.loads(Path(path).read_text()))
