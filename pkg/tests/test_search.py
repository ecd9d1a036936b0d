"""Solver checks: known values, an independent search oracle, enumeration
counts, determinism, budgets, and the lower-bound ladder."""

from __future__ import annotations

from itertools import product

import pytest

from schurlab.constraints import Coloring, Constraint, is_sum_free, verify_coloring
from schurlab.errors import ScaleRefusal
from schurlab.search import (
    LOWER_BOUND,
    Budget,
    SearchParams,
    admissible_blocks,
    enumerate_colorings,
    solve,
)

CLASSIC = Constraint.classic()
WEAK = Constraint.weak()


def naive_max_n(K: int, constraint: Constraint, stop: int = 30) -> int:
    """Independent oracle: plain recursion over full block rechecks, no
    symmetry breaking, no incremental state."""
    best = 0

    def rec(v, blocks):
        nonlocal best
        if v - 1 > best:
            best = v - 1
        if v > stop:
            return
        for k in range(K):
            cand = blocks[k] + (v,)
            if is_sum_free(cand, constraint)[0]:
                rec(v + 1, blocks[:k] + (cand,) + blocks[k + 1:])

    rec(1, ((),) * K)
    return best


def brute_force_colorings(K: int, n: int, constraint: Constraint) -> list[tuple[int, ...]]:
    """All labeled valid colorings by checking every K^n assignment."""
    out = []
    for assign in product(range(1, K + 1), repeat=n):
        blocks = [tuple(v for v in range(1, n + 1) if assign[v - 1] == k)
                  for k in range(1, K + 1)]
        if all(is_sum_free(b, constraint)[0] for b in blocks):
            out.append(assign)
    return out


@pytest.mark.parametrize(
    "K,constraint,expected",
    [
        (1, CLASSIC, 1),
        (2, CLASSIC, 4),
        (3, CLASSIC, 13),
        (1, WEAK, 2),
        (2, WEAK, 8),
        (3, WEAK, 23),
        (3, Constraint.modular(3), 2),
        (3, Constraint.weak_modular(3), 8),
    ],
)
def test_known_values(K, constraint, expected):
    result = solve(SearchParams(K=K, constraint=constraint))
    assert result.value == expected
    assert result.proven_maximal
    assert verify_coloring(result.certificate, constraint).valid
    assert result.certificate.n == expected


def test_s2_certificate_is_unique_partition():
    result = solve(SearchParams(K=2))
    assert result.certificate.blocks() == [(1, 4), (2, 3)]


def test_modulus_one_classic_is_zero():
    result = solve(SearchParams(K=3, constraint=Constraint.modular(1)))
    assert result.value == 0
    assert result.certificate.n == 0
    assert result.proven_maximal


@pytest.mark.parametrize("K", [1, 2, 3])
@pytest.mark.parametrize(
    "constraint",
    [CLASSIC, Constraint.modular(2), Constraint.modular(4),
     Constraint.weak_modular(2), Constraint.weak_modular(4)],
    ids=lambda c: c.describe(),
)
def test_oracle_equivalence_fast_grid(K, constraint):
    result = solve(SearchParams(K=K, constraint=constraint))
    assert result.value == naive_max_n(K, constraint)


@pytest.mark.slow
@pytest.mark.parametrize("K", [1, 2, 3])
@pytest.mark.parametrize(
    "constraint",
    [WEAK, Constraint.modular(1), Constraint.modular(3),
     Constraint.weak_modular(1), Constraint.weak_modular(3)],
    ids=lambda c: c.describe(),
)
def test_oracle_equivalence_slow_grid(K, constraint):
    result = solve(SearchParams(K=K, constraint=constraint))
    assert result.value == naive_max_n(K, constraint)


def test_admissible_blocks_examples():
    partial = Coloring.from_blocks([[1]], K=2, n=1)
    assert admissible_blocks(partial, 2, CLASSIC) == [2]
    partial = Coloring.from_blocks([[1], [2]], K=2)
    assert admissible_blocks(partial, 3, CLASSIC) == [1, 2]
    partial = Coloring.from_blocks([[1, 4], [2, 3]], K=2)
    assert admissible_blocks(partial, 5, CLASSIC) == []


def test_admissible_blocks_matches_per_block_recheck():
    partial = Coloring.from_blocks([[1, 4], [2, 3]], K=3, n=4)
    # the third (empty) block is the only one that can absorb 5
    assert admissible_blocks(partial, 5, CLASSIC) == [3]
    cases = [
        (partial, 5, CLASSIC),
        (partial, 5, WEAK),
        (Coloring.from_blocks([[1], [2]], K=3, n=2), 3, Constraint.modular(3)),
        (Coloring.from_blocks([[1, 2], [3]], K=3, n=3), 4, Constraint.weak_modular(3)),
    ]
    for coloring, v, constraint in cases:
        got = admissible_blocks(coloring, v, constraint)
        expected = [
            k
            for k, block in enumerate(coloring.blocks(), start=1)
            if is_sum_free(block + (v,), constraint)[0]
        ]
        assert got == expected


def test_enumerate_canonical_counts():
    assert len(list(enumerate_colorings(3, 13, CLASSIC))) == 3
    assert len(list(enumerate_colorings(2, 4, CLASSIC))) == 1
    assert len(list(enumerate_colorings(1, 1, CLASSIC))) == 1
    assert list(enumerate_colorings(1, 2, CLASSIC)) == []


def test_enumerate_streams_in_lexicographic_order():
    colorings = list(enumerate_colorings(3, 13, CLASSIC))
    vectors = [c.assignment for c in colorings]
    assert vectors == sorted(vectors)
    # the three maximal partitions differ exactly in the block of value 7
    assert [c.block_of(7) for c in colorings] == [1, 2, 3]


@pytest.mark.parametrize("K,n", [(2, 4), (2, 5), (3, 4), (2, 1), (3, 6)])
@pytest.mark.parametrize(
    "constraint",
    [CLASSIC, WEAK, Constraint.modular(3), Constraint.weak_modular(2)],
    ids=lambda c: c.describe(),
)
def test_enumerate_against_brute_force(K, n, constraint):
    labeled = brute_force_colorings(K, n, constraint)
    got_all = list(enumerate_colorings(K, n, constraint, canonical=False))
    assert [c.assignment for c in got_all] == sorted(labeled)
    canon = list(enumerate_colorings(K, n, constraint, canonical=True))
    # one representative per relabeling class
    seen = set()
    classes = 0
    for assign in labeled:
        key = tuple(sorted(map(tuple, (
            tuple(v for v in range(1, n + 1) if assign[v - 1] == k)
            for k in range(1, K + 1)))))
        if key not in seen:
            seen.add(key)
            classes += 1
    assert len(canon) == classes


def test_canonical_labeled_count_relation():
    # labeled count = sum over canonical classes of K! / (K - used)!
    from math import perm

    K, n = 3, 6
    canon = list(enumerate_colorings(K, n, CLASSIC, canonical=True))
    labeled = list(enumerate_colorings(K, n, CLASSIC, canonical=False))
    expected = sum(
        perm(K, sum(1 for b in c.blocks() if b)) for c in canon
    )
    assert len(labeled) == expected


def test_determinism_and_worker_independence():
    a = solve(SearchParams(K=3))
    b = solve(SearchParams(K=3))
    assert a.value == b.value and a.certificate == b.certificate
    c = solve(SearchParams(K=3, threads=2))
    assert c.value == a.value and c.proven_maximal
    assert c.certificate == a.certificate


def test_budget_exhaustion_flags_unproven():
    result = solve(SearchParams(K=4, budget=Budget(nodes=500)))
    assert not result.proven_maximal
    assert result.stats.budget_exhausted
    assert verify_coloring(result.certificate, CLASSIC).valid
    # the best-so-far certificate must survive the budget hit
    assert result.value >= 20
    assert result.certificate.n == result.value


def test_scale_refusal_for_k5_classic_prove():
    with pytest.raises(ScaleRefusal):
        solve(SearchParams(K=5))


def test_lower_bound_reaches_weak_k2():
    result = solve(
        SearchParams(K=2, constraint=WEAK, mode=LOWER_BOUND,
                     budget=Budget(nodes=300_000))
    )
    assert result.value >= 8
    assert not result.proven_maximal


def test_lower_bound_accepts_hint():
    hint = solve(SearchParams(K=3)).certificate
    result = solve(
        SearchParams(K=3, mode=LOWER_BOUND, start_hint=hint,
                     budget=Budget(seconds=2.0))
    )
    assert result.value >= 13
    assert verify_coloring(result.certificate, CLASSIC).valid


def test_recurrence_and_exponential_bounds():
    values = {K: solve(SearchParams(K=K)).value for K in (1, 2, 3)}
    assert values[2] == 3 * values[1] + 1
    assert values[3] == 3 * values[2] + 1
    for K, v in values.items():
        assert v >= (3**K - 1) // 2


def test_ordering_chain_on_solved_instances():
    for K in (1, 2, 3):
        s = solve(SearchParams(K=K)).value
        ws = solve(SearchParams(K=K, constraint=WEAK)).value
        assert s <= ws
        for m in (2, 3):
            sm = solve(SearchParams(K=K, constraint=Constraint.modular(m))).value
            wsm = solve(SearchParams(K=K, constraint=Constraint.weak_modular(m))).value
            assert sm <= s
            assert sm <= wsm
            assert sm <= m - 1
