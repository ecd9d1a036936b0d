"""The doubling-free sequence 1, 3, 4, 5, 7, 9, 11, 12, 13, 15, ...

This is the increasing sequence of positive integers n such that 2n is not
in the sequence, i.e. the single-block filling under the restricted rule
"a value excludes only its own double".  Starting from 1, the next term is
n + 1 unless n + 1 is even with half of it already a term, in which case
n + 2; consecutive gaps are therefore 1 or 2 and every odd number appears.

Two structural identities are checkable at any finite scale and exposed as
report functions:

* self-similarity: deleting the odd terms leaves multiples of 4 whose
  quarters reproduce the sequence from the start;
* the generating identity sum_i n_i x^i = 1/(1-x) * prod_i (1 + x^{e_i}),
  with exponents e_1 = 1 and e_{i+1} = 2 e_i + 1 for even i, 2 e_i - 1 for
  odd i (so 1, 1, 3, 5, 11, 21, 43, ...).  Truncating the product to E
  factors is exact for coefficients of x^j with j < e_{E+1}.

The same generator doubles as a site-occupancy pattern on a 1D lattice,
rendered by :func:`occupancy_string`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InsufficientTerms


@dataclass(frozen=True)
class SequenceState:
    """Generated prefix of the sequence plus a constant-time membership index."""

    terms: tuple[int, ...]
    _member: bytearray = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, value: int) -> bool:
        return 0 < value < len(self._member) and self._member[value] == 1

    @property
    def limit(self) -> int:
        """Largest generated term; membership is decided for 1..limit."""
        return self.terms[-1]


def generate(count: int) -> SequenceState:
    """First `count` terms by the gap recursion; O(1) amortized per term."""
    if count < 1:
        raise ValueError("count must be >= 1")
    member = bytearray(2 * count + 4)
    terms = [1]
    member[1] = 1
    cur = 1
    for _ in range(count - 1):
        nxt = cur + 1
        if nxt % 2 == 0 and member[nxt // 2]:
            nxt = cur + 2
        if nxt >= len(member):
            member.extend(bytes(len(member)))
        member[nxt] = 1
        terms.append(nxt)
        cur = nxt
    state = SequenceState(terms=tuple(terms), _member=member[: cur + 1])
    return state


def greedy_reference(count: int) -> list[int]:
    """Independent construction: scan n = 1, 2, 3, ... and admit n iff n/2
    is not an admitted term.  Used as the oracle for :func:`generate`.
    """
    admitted = set()
    out: list[int] = []
    n = 1
    while len(out) < count:
        if n % 2 == 1 or n // 2 not in admitted:
            admitted.add(n)
            out.append(n)
        n += 1
    return out


@dataclass(frozen=True)
class FractalReport:
    odd_terms_complete: bool
    even_terms_divisible_by_4: bool
    quarters_match_prefix: bool
    prefix_length: int

    @property
    def passed(self) -> bool:
        return (
            self.odd_terms_complete
            and self.even_terms_divisible_by_4
            and self.quarters_match_prefix
        )


def fractal_check(state: SequenceState) -> FractalReport:
    """Confirm the self-similarity of the generated range.

    (a) every odd integer up to the last term is a term; (b) the even terms
    are multiples of 4; (c) those terms divided by 4 reproduce an exact
    prefix of the sequence.  Reports the verified prefix length.
    """
    if len(state) < 50:
        raise InsufficientTerms(
            f"fractal check needs at least 50 terms, got {len(state)}"
        )
    odds_ok = all(x in state for x in range(1, state.limit + 1, 2))
    evens = [t for t in state.terms if t % 2 == 0]
    div4_ok = all(t % 4 == 0 for t in evens)
    quarters = [t // 4 for t in evens]
    prefix_ok = tuple(quarters) == state.terms[: len(quarters)]
    return FractalReport(
        odd_terms_complete=odds_ok,
        even_terms_divisible_by_4=div4_ok,
        quarters_match_prefix=prefix_ok,
        prefix_length=len(quarters),
    )


def exponents(count: int) -> list[int]:
    """First `count` exponents: 1, 1, 3, 5, 11, 21, 43, ...

    e_{i+1} doubles e_i and adds 1 for even i, subtracts 1 for odd i.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    out = [1]
    for i in range(1, count):
        out.append(2 * out[-1] + (1 if i % 2 == 0 else -1))
    return out


@dataclass(frozen=True)
class GenfunReport:
    orders_checked: int
    mismatches: tuple[tuple[int, int, int], ...]  # (order, expected, found)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def genfun_check(state: SequenceState, num_exponents: int) -> GenfunReport:
    """Expand the truncated product, fold in the 1/(1-x) factor as cumulative
    sums, and compare coefficient j against term j for every j < e_{E+1}.
    """
    if num_exponents < 1:
        raise ValueError("num_exponents must be >= 1")
    es = exponents(num_exponents + 1)
    limit = es[-1]  # orders 0 .. limit-1 are unaffected by omitted factors
    if len(state) < limit:
        raise InsufficientTerms(
            f"checking {num_exponents} exponents needs {limit} terms, "
            f"got {len(state)}"
        )
    coeffs = [0] * limit
    coeffs[0] = 1
    for e in es[:-1]:
        if e >= limit:
            continue
        # multiply by (1 + x^e), truncated
        for j in range(limit - 1, e - 1, -1):
            coeffs[j] += coeffs[j - e]
    mismatches = []
    running = 0
    for j in range(limit):
        running += coeffs[j]
        if running != state.terms[j]:
            mismatches.append((j, state.terms[j], running))
    return GenfunReport(orders_checked=limit, mismatches=tuple(mismatches))


def occupancy_string(state: SequenceState, sites: int) -> str:
    """Lattice rendering: '1' when the site index is a term, else '0'."""
    if sites < 1:
        raise ValueError("sites must be >= 1")
    if sites > state.limit:
        raise InsufficientTerms(
            f"occupancy of {sites} sites needs terms beyond {state.limit}"
        )
    return "".join("1" if site in state else "0" for site in range(1, sites + 1))
