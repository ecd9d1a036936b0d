"""Exact search for Schur-type numbers and enumeration of valid colorings.

Three engines sit behind :func:`solve`:

* classic / weak proofs run a depth-first exhaustion over values 1, 2, 3, ...
  with per-block *forbidden-sum* bit vectors: adding v to a block whose
  element mask is E forbids every bit of (E << v) (and 1 << 2v classically)
  for the rest of that branch, so admissibility is one shift and one bit
  test.  A branch is abandoned early when some future value is forbidden in
  every block and the branch therefore cannot beat the incumbent depth.
  Exhausting the tree both finds the maximum n and refutes n + 1, which is
  exactly the proof obligation.

* modular proofs exploit that a block's future is fully determined by its
  residue-count profile with counts capped at 2 (no admissibility rule ever
  asks for more than "at least two").  The search over (next residue,
  multiset of profiles) states is memoized, which turns instances that take
  minutes of plain backtracking into a few hundred table entries.

* lower-bound mode is a seeded min-conflicts ladder: starting from a quick
  depth-first incumbent (or a caller-supplied hint), it repeatedly tries to
  repair a random/warm-started assignment of 1..n with local moves, and
  climbs n while repairs keep succeeding within the budget.

Symmetry breaking everywhere: value 1 is pinned to block 1 and block k + 1
can be opened only while block k is nonempty, removing the K! relabeling
factor.  All reported outcomes except timing are deterministic for a fixed
seed and independent of the worker count.
"""

from __future__ import annotations

import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .constraints import (
    Coloring,
    Constraint,
    is_sum_free,
    residue,
    verify_coloring,
)
from .errors import ScaleRefusal

PROVE = "prove"
LOWER_BOUND = "lower-bound"

# Published lower-bound targets for instances beyond desk scale; stored for
# reference only, never consulted by the solver.
PUBLISHED_LOWER_BOUND_TARGETS = {6: 536, 7: 1680}

_BUDGET_CHECK_MASK = 0x1FFF


@dataclass(frozen=True)
class Budget:
    """Wall-clock and/or node limits; None means unlimited."""

    seconds: float | None = None
    nodes: int | None = None

    def __post_init__(self) -> None:
        if self.seconds is not None and self.seconds <= 0:
            raise ValueError("seconds budget must be positive")
        if self.nodes is not None and self.nodes <= 0:
            raise ValueError("node budget must be positive")


@dataclass(frozen=True)
class SearchParams:
    K: int
    constraint: Constraint = Constraint.classic()
    mode: str = PROVE
    budget: Budget | None = None
    start_hint: Coloring | None = None
    threads: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.mode not in (PROVE, LOWER_BOUND):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class SearchStats:
    nodes: int = 0
    seconds: float = 0.0
    restarts: int = 0
    budget_exhausted: bool = False


@dataclass
class SearchResult:
    value: int
    proven_maximal: bool
    certificate: Coloring
    stats: SearchStats


class _BudgetHit(Exception):
    pass


class _Clock:
    """Deadline plus node allowance, checked cheaply inside hot loops."""

    def __init__(self, budget: Budget | None):
        self.deadline = None
        self.node_limit = None
        if budget is not None:
            if budget.seconds is not None:
                self.deadline = time.monotonic() + budget.seconds
            self.node_limit = budget.nodes

    def check(self, nodes: int) -> None:
        if self.node_limit is not None and nodes >= self.node_limit:
            raise _BudgetHit
        if self.deadline is not None and (nodes & _BUDGET_CHECK_MASK) == 0:
            if time.monotonic() > self.deadline:
                raise _BudgetHit


def admissible_blocks(partial: Coloring, v: int, constraint: Constraint) -> list[int]:
    """Blocks of a valid partial coloring of 1..v-1 that can absorb value v.

    Returns 1-based block indices k such that block k stays sum-free with v
    appended; other blocks are untouched by the move, so this is the full
    admissibility test.
    """
    if partial.n != v - 1:
        raise ValueError(f"partial coloring must cover 1..{v - 1}")
    report = verify_coloring(partial, constraint)
    if not report.valid:
        raise ValueError("partial coloring does not verify")
    out = []
    for k, block in enumerate(partial.blocks(), start=1):
        ok, _ = is_sum_free(block + (v,), constraint)
        if ok:
            out.append(k)
    return out


# --- classic / weak proof engine --------------------------------------------

def _dfs_exhaust(K, weak, horizon, clock, state=None):
    """Exhaust the coloring tree; return (best, assignment, nodes, exhausted).

    Forbidden-sum masks are truncated at `horizon` bits, so the result is
    only trustworthy when best <= horizon - 2 (the caller widens and reruns
    otherwise).  Branches are pruned when some future value <= horizon is
    forbidden in every block and the branch cannot exceed the incumbent.
    A budget hit stops the walk but keeps the best certificate found.
    """
    full = (1 << (horizon + 1)) - 1
    if state is None:
        elems = [0] * K
        sums = [0] * K
        assign: list[int] = []
        start_v, used = 1, 0
    else:
        elems, sums, assign, start_v, used = state
        elems, sums, assign = list(elems), list(sums), list(assign)
    counter = [0]
    best = [0, None]
    sys.setrecursionlimit(max(sys.getrecursionlimit(), horizon * 4 + 1000))

    def rec(v, used):
        counter[0] += 1
        clock.check(counter[0])
        if v - 1 > best[0]:
            best[0] = v - 1
            best[1] = tuple(assign)
        t = sums[0]
        for k in range(1, K):
            t &= sums[k]
        t >>= v
        if t:
            w = v + (t & -t).bit_length() - 1
            if w - 1 <= best[0]:
                return
        lim = used + 1 if used < K else K
        bit = 1 << v
        for k in range(lim):
            if (sums[k] >> v) & 1:
                continue
            oe, os_ = elems[k], sums[k]
            elems[k] = oe | bit
            ns = os_ | ((oe << v) & full)
            if not weak:
                ns = (ns | (bit << v)) & full
            sums[k] = ns
            assign.append(k + 1)
            rec(v + 1, used + (1 if k == used else 0))
            assign.pop()
            elems[k], sums[k] = oe, os_

    exhausted = False
    try:
        rec(start_v, used)
    except _BudgetHit:
        exhausted = True
    return best[0], best[1], counter[0], exhausted


def _expand_roots(K, weak, depth, horizon):
    """Breadth-first prefixes of the search tree down to `depth` values.

    Returns (roots, dead_best, dead_assign): prefixes that died during
    expansion are already fully explored, so their best depth is merged in.
    """
    full = (1 << (horizon + 1)) - 1
    frontier = [((0,) * K, (0,) * K, (), 0)]
    dead_best, dead_assign = 0, ()
    for v in range(1, depth + 1):
        nxt = []
        bit = 1 << v
        for elems, sums, assign, used in frontier:
            lim = used + 1 if used < K else K
            extended = False
            for k in range(lim):
                if (sums[k] >> v) & 1:
                    continue
                ns = sums[k] | ((elems[k] << v) & full)
                if not weak:
                    ns = (ns | (bit << v)) & full
                nxt.append(
                    (
                        elems[:k] + (elems[k] | bit,) + elems[k + 1:],
                        sums[:k] + (ns,) + sums[k + 1:],
                        assign + (k + 1,),
                        used + (1 if k == used else 0),
                    )
                )
                extended = True
            if not extended and len(assign) > dead_best:
                dead_best, dead_assign = len(assign), assign
        frontier = nxt
    roots = [
        (elems, sums, assign, depth + 1, used)
        for elems, sums, assign, used in frontier
    ]
    return roots, dead_best, dead_assign


def _prove_worker(payload):
    K, weak, horizon, state, budget_tuple = payload
    clock = _Clock(Budget(*budget_tuple) if budget_tuple else None)
    return _dfs_exhaust(K, weak, horizon, clock, state=state)


def _prove_nonmodular(params: SearchParams) -> SearchResult:
    K = params.K
    weak = params.constraint.pairwise_distinct
    clock = _Clock(params.budget)
    horizon = 64
    t0 = time.monotonic()
    total_nodes = 0
    exhausted = False
    best, best_assign = 0, None
    while True:
        if params.threads > 1:
            split_depth = 6
            roots, dead_best, dead_assign = _expand_roots(K, weak, split_depth, horizon)
            budget_tuple = (
                (params.budget.seconds, params.budget.nodes)
                if params.budget
                else None
            )
            payloads = [(K, weak, horizon, r, budget_tuple) for r in roots]
            best, best_assign = dead_best, dead_assign or None
            with ProcessPoolExecutor(max_workers=params.threads) as pool:
                for b, a, nds, exh in pool.map(_prove_worker, payloads):
                    total_nodes += nds
                    exhausted = exhausted or exh
                    if b > best:
                        best, best_assign = b, a
        else:
            best, best_assign, nodes, exhausted = _dfs_exhaust(K, weak, horizon, clock)
            total_nodes += nodes
        if exhausted or best <= horizon - 2:
            break
        horizon *= 2
    if best == 0:
        certificate = Coloring(n=0, K=K, assignment=())
    else:
        certificate = Coloring(n=best, K=K, assignment=tuple(best_assign))
    stats = SearchStats(
        nodes=total_nodes,
        seconds=time.monotonic() - t0,
        budget_exhausted=exhausted,
    )
    return SearchResult(
        value=best,
        proven_maximal=not exhausted,
        certificate=certificate,
        stats=stats,
    )


# --- modular proof engine ----------------------------------------------------

def _modular_tables(m: int, weak: bool):
    addm = [[0] * (m + 1) for _ in range(m + 1)]
    for r in range(1, m + 1):
        for s in range(1, m + 1):
            addm[r][s] = (r + s - 1) % m + 1

    def can_add(profile: tuple[int, ...], r: int) -> bool:
        # profile[i] = capped count of residue i + 1 in the block
        if weak:
            for s in range(1, m + 1):
                cs = profile[s - 1]
                if not cs:
                    continue
                for t in range(1, m + 1):
                    ct = profile[t - 1]
                    if not ct:
                        continue
                    pair_ok = s != t or cs >= 2
                    if addm[s][t] == r and pair_ok:
                        return False
                    if addm[r][s] == t and pair_ok:
                        return False
            return True
        if addm[r][r] == r:
            return False
        for s in range(1, m + 1):
            if not profile[s - 1]:
                continue
            if addm[r][s] == r or addm[r][r] == s:
                return False
            for t in range(1, m + 1):
                if not profile[t - 1]:
                    continue
                if addm[r][s] == t or addm[s][t] == r:
                    return False
        return True

    return can_add


def _prove_modular(params: SearchParams) -> SearchResult:
    K = params.K
    m = params.constraint.modulus
    weak = params.constraint.pairwise_distinct
    can_add = _modular_tables(m, weak)
    clock = _Clock(params.budget)
    t0 = time.monotonic()
    memo: dict = {}
    zero = (0,) * m
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 8 * K * m + 1000))

    def bump(profile, r):
        c = list(profile)
        c[r - 1] = min(c[r - 1] + 1, 2)
        return tuple(c)

    def extra_depth(pos, profiles):
        key = (pos, profiles)
        hit = memo.get(key)
        if hit is not None:
            return hit
        clock.check(len(memo))
        best = 0
        tried = set()
        for i, p in enumerate(profiles):
            if p in tried:
                continue
            tried.add(p)
            if can_add(p, pos):
                nprof = tuple(sorted(profiles[:i] + (bump(p, pos),) + profiles[i + 1:]))
                d = 1 + extra_depth(pos % m + 1, nprof)
                if d > best:
                    best = d
        memo[key] = best
        return best

    try:
        value = extra_depth(1, (zero,) * K)
        exhausted = False
    except _BudgetHit:
        value, exhausted = 0, True
    if exhausted:
        # fall back to a greedy first-fit certificate
        assign = []
        blocks: list[list[int]] = [[] for _ in range(K)]
        v = 1
        while True:
            placed = False
            for k in range(K):
                ok, _ = is_sum_free(blocks[k] + [v], params.constraint)
                if ok:
                    blocks[k].append(v)
                    assign.append(k + 1)
                    placed = True
                    break
            if not placed:
                break
            v += 1
        value = len(assign)
        certificate = Coloring(n=value, K=K, assignment=tuple(assign))
        stats = SearchStats(
            nodes=len(memo), seconds=time.monotonic() - t0, budget_exhausted=True
        )
        return SearchResult(value, False, certificate, stats)

    # replay a deterministic certificate following the memo table
    assign = []
    live = [zero] * K
    pos = 1
    remaining = value
    while remaining > 0:
        tried = set()
        for k in range(K):
            p = live[k]
            if p in tried:
                continue
            tried.add(p)
            if not can_add(p, pos):
                continue
            cand = list(live)
            cand[k] = bump(p, pos)
            if 1 + extra_depth(pos % m + 1, tuple(sorted(cand))) == remaining:
                live[k] = cand[k]
                assign.append(k + 1)
                break
        else:  # pragma: no cover - the memo guarantees a choice exists
            raise RuntimeError("certificate replay diverged from the memo table")
        pos = pos % m + 1
        remaining -= 1
    certificate = Coloring(n=value, K=K, assignment=tuple(assign))
    stats = SearchStats(nodes=len(memo), seconds=time.monotonic() - t0)
    return SearchResult(value, True, certificate, stats)


# --- lower-bound engine (min-conflicts ladder) --------------------------------

def _conflicts(v: int, block: set[int], constraint: Constraint) -> int:
    """Number of violating triples that value v would form inside `block`.

    The candidate v must not be a member of `block` when calling.
    """
    weak = constraint.pairwise_distinct
    m = constraint.modulus
    c = 0
    if m is None:
        for x in block:
            if x < v:
                y = v - x
                if y in block and (x < y or (not weak and x == y)):
                    c += 1
            if v + x in block:
                c += 1
        if not weak and 2 * v in block:
            c += 1
        return c
    members = sorted(block | {v})
    for i, x in enumerate(members):
        for y in members[i + 1 if weak else i:]:
            r = residue(x + y, m)
            for z in members:
                if weak and (z == x or z == y):
                    continue
                if residue(z, m) == r and v in (x, y, z):
                    c += 1
    return c


def _total_violations(blocks: list[set[int]], constraint: Constraint) -> int:
    total = 0
    weak = constraint.pairwise_distinct
    m = constraint.modulus
    for B in blocks:
        vals = sorted(B)
        for i, x in enumerate(vals):
            for y in vals[i + 1 if weak else i:]:
                if m is None:
                    if x + y in B:
                        total += 1
                else:
                    r = residue(x + y, m)
                    for z in vals:
                        if weak and (z == x or z == y):
                            continue
                        if residue(z, m) == r:
                            total += 1
    return total


def _min_conflicts(
    K: int,
    n: int,
    constraint: Constraint,
    rng: random.Random,
    step_cap: int,
    clock: _Clock,
    counter: list[int],
    warm: list[int] | None = None,
) -> list[int] | None:
    """Try to repair an assignment of 1..n into K blocks; None on failure."""
    if warm is not None:
        assign = list(warm)
    else:
        assign = [0] + [rng.randrange(1, K + 1) for _ in range(n)]
    blocks: list[set[int]] = [set() for _ in range(K + 1)]
    for v in range(1, n + 1):
        blocks[assign[v]].add(v)
    noise = 0.10
    for step in range(step_cap):
        counter[0] += 1
        clock.check(counter[0])
        if step % 256 == 0 and _total_violations(blocks[1:], constraint) == 0:
            return assign
        v = 0
        for _ in range(64):
            cand = rng.randint(1, n)
            k = assign[cand]
            blocks[k].discard(cand)
            bad = _conflicts(cand, blocks[k], constraint) > 0
            blocks[k].add(cand)
            if bad:
                v = cand
                break
        if v == 0:
            if _total_violations(blocks[1:], constraint) == 0:
                return assign
            continue
        k_old = assign[v]
        blocks[k_old].discard(v)
        if rng.random() < noise:
            k_new = rng.randrange(1, K + 1)
        else:
            best = min(
                (_conflicts(v, blocks[k], constraint), rng.random(), k)
                for k in range(1, K + 1)
            )
            k_new = best[2]
        assign[v] = k_new
        blocks[k_new].add(v)
    return None


def _lower_bound(params: SearchParams) -> SearchResult:
    K = params.K
    constraint = params.constraint
    clock = _Clock(params.budget)
    rng = random.Random(params.seed)
    counter = [0]
    t0 = time.monotonic()
    restarts = 0
    exhausted = False

    incumbent: Coloring | None = None
    if params.start_hint is not None:
        hint = params.start_hint
        if hint.K != K:
            raise ValueError("start_hint must use the same K")
        if not verify_coloring(hint, constraint).valid:
            raise ValueError("start_hint does not verify under the constraint")
        incumbent = hint
    else:
        # quick capped depth-first pass for a starting incumbent
        probe_nodes = 200_000
        probe_seconds = None
        if params.budget is not None:
            probe_seconds = params.budget.seconds
            if params.budget.nodes is not None:
                probe_nodes = min(probe_nodes, params.budget.nodes)
        probe_budget = Budget(seconds=probe_seconds, nodes=probe_nodes)
        probe = SearchParams(
            K=K, constraint=constraint, mode=PROVE, budget=probe_budget
        )
        if constraint.is_modular:
            res = _prove_modular(probe)
        else:
            res = _prove_nonmodular(probe)
        counter[0] += res.stats.nodes
        incumbent = res.certificate

    try:
        n = incumbent.n + 1
        while True:
            solved = None
            for attempt in range(8):
                restarts += 1
                warm = None
                if attempt == 0 and incumbent.n == n - 1:
                    warm = [0] + list(incumbent.assignment) + [rng.randrange(1, K + 1)]
                solved = _min_conflicts(
                    K,
                    n,
                    constraint,
                    random.Random(params.seed * 1_000_003 + n * 1_009 + attempt),
                    step_cap=max(30_000, 1_200 * n),
                    clock=clock,
                    counter=counter,
                    warm=warm,
                )
                if solved is not None:
                    break
            if solved is None:
                break
            incumbent = Coloring(n=n, K=K, assignment=tuple(solved[1:]))
            n += 1
    except _BudgetHit:
        exhausted = True

    report = verify_coloring(incumbent, constraint)
    if not report.valid:  # pragma: no cover - repaired assignments are rechecked
        raise RuntimeError("lower-bound incumbent failed verification")
    stats = SearchStats(
        nodes=counter[0],
        seconds=time.monotonic() - t0,
        restarts=restarts,
        budget_exhausted=exhausted,
    )
    return SearchResult(
        value=incumbent.n,
        proven_maximal=False,
        certificate=incumbent,
        stats=stats,
    )


# --- public entry points ------------------------------------------------------

def solve(params: SearchParams) -> SearchResult:
    """Solve one Schur-type instance.

    Prove mode exhausts all colorings of 1..(value + 1) and returns the exact
    number with a verifying certificate; when the budget runs out first, the
    best-so-far certificate is returned flagged unproven.  Lower-bound mode
    returns the deepest verifying certificate found within the budget.
    """
    if params.mode == PROVE and not params.constraint.is_modular:
        if params.K >= 5:
            raise ScaleRefusal(
                f"exhaustive proof for K={params.K} {params.constraint.kind} "
                "partitions is beyond desk scale (the K=5 classic case took "
                "petabytes of proof); use lower-bound mode"
            )
    if params.mode == PROVE:
        if params.constraint.is_modular:
            result = _prove_modular(params)
        else:
            result = _prove_nonmodular(params)
    else:
        result = _lower_bound(params)
    report = verify_coloring(result.certificate, params.constraint)
    if not report.valid:  # pragma: no cover - engines only emit checked states
        raise RuntimeError("solver produced a non-verifying certificate")
    return result


def enumerate_colorings(
    K: int, n: int, constraint: Constraint, canonical: bool = True
):
    """Yield every valid coloring of 1..n into K blocks, lexicographically.

    With canonical=True exactly one representative per block-relabeling
    class is yielded (blocks ordered by first use, so block minima increase
    and unused blocks come last).
    """
    if K < 1 or n < 1:
        raise ValueError("K and n must be >= 1")
    if constraint.is_modular:
        yield from _enumerate_modular(K, n, constraint, canonical)
    else:
        yield from _enumerate_nonmodular(K, n, constraint.pairwise_distinct, canonical)


def _enumerate_nonmodular(K, n, weak, canonical):
    full = (1 << (2 * n + 2)) - 1
    future = (1 << (n + 1)) - 1
    elems = [0] * K
    sums = [0] * K
    assign: list[int] = []

    def rec(v, used):
        if v > n:
            yield Coloring(n=n, K=K, assignment=tuple(assign))
            return
        t = sums[0]
        for k in range(1, K):
            t &= sums[k]
        if (t >> v) & (future >> v):
            return  # some value in v..n is forbidden everywhere
        lim = (used + 1 if used < K else K) if canonical else K
        bit = 1 << v
        for k in range(lim):
            if (sums[k] >> v) & 1:
                continue
            oe, os_ = elems[k], sums[k]
            elems[k] = oe | bit
            ns = os_ | ((oe << v) & full)
            if not weak:
                ns = (ns | (bit << v)) & full
            sums[k] = ns
            assign.append(k + 1)
            yield from rec(v + 1, used + (1 if k == used else 0))
            assign.pop()
            elems[k], sums[k] = oe, os_

    yield from rec(1, 0)


def _enumerate_modular(K, n, constraint, canonical):
    m = constraint.modulus
    can_add = _modular_tables(m, constraint.pairwise_distinct)
    profiles = [(0,) * m for _ in range(K)]
    assign: list[int] = []

    def bump(profile, r):
        c = list(profile)
        c[r - 1] = min(c[r - 1] + 1, 2)
        return tuple(c)

    def rec(v, used):
        if v > n:
            yield Coloring(n=n, K=K, assignment=tuple(assign))
            return
        r = (v - 1) % m + 1
        lim = (used + 1 if used < K else K) if canonical else K
        for k in range(lim):
            if not can_add(profiles[k], r):
                continue
            old = profiles[k]
            profiles[k] = bump(old, r)
            assign.append(k + 1)
            yield from rec(v + 1, used + (1 if k == used else 0))
            assign.pop()
            profiles[k] = old

    yield from rec(1, 0)
