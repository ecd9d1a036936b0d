"""Exact finite realization of sum-free many-body configurations.

A basis state places each value 1..n either at one of K levels or nowhere
(absence is a distinct mark, not a zero quantum number: a zero would break
the sum rule by itself through 0 + 0 = 0).  Every level's occupied values
must form a sum-free block, so two occupied values of one level veto their
sum at that level.

Creation operators toggle a value into a level and project away outcomes
that would violate the rule; annihilation is the exact adjoint and never
needs a projector, since removing a value cannot create a sum.  The algebra
that results is a constrained hard-core variant: (B+)^2 = 0, annihilators
commute, and [B, B+] = 1 - 2N wherever the constraint projector is inert,
with every deviation attributable to one concrete blocked insertion.
:func:`algebra_report` measures all of this exactly over integer matrices.

Dynamics live in :func:`hamiltonian`: level energies on the diagonal, a
hopping term that relocates one value between levels when allowed, and a
density-density coupling between level occupancies.  Ground states come
from a dense symmetric eigensolve with a degeneracy count at tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .constraints import Constraint, is_sum_free
from .errors import BasisTooLarge, NumericalFailure, TooManyValues
from .transforms import _can_insert

DEFAULT_STATE_CAP = 20_000

ABSENT = 0


@dataclass(frozen=True)
class BasisState:
    """Placement of values 1..n over K levels; 0 marks absence."""

    n: int
    K: int
    placement: tuple[int, ...]

    def level_of(self, value: int) -> int:
        return self.placement[value - 1]

    def level_blocks(self) -> list[tuple[int, ...]]:
        blocks: list[list[int]] = [[] for _ in range(self.K)]
        for v, k in enumerate(self.placement, start=1):
            if k != ABSENT:
                blocks[k - 1].append(v)
        return [tuple(b) for b in blocks]

    def occupancies(self) -> tuple[int, ...]:
        counts = [0] * self.K
        for k in self.placement:
            if k != ABSENT:
                counts[k - 1] += 1
        return tuple(counts)

    def describe(self) -> str:
        parts = []
        for k, block in enumerate(self.level_blocks(), start=1):
            inside = ",".join(map(str, block)) if block else "-"
            parts.append(f"[{inside}]_{k}")
        return " ".join(parts)


class Basis:
    """Ordered collection of all admissible basis states for one instance.

    `values` is the set of participating quantum numbers; by default all of
    1..n, but a sparse subset is allowed (non-members stay marked absent in
    every state and carry no operators).
    """

    def __init__(
        self,
        K: int,
        n: int,
        constraint: Constraint,
        allow_absent: bool,
        states: tuple[BasisState, ...],
        values: tuple[int, ...],
    ):
        self.K = K
        self.n = n
        self.constraint = constraint
        self.allow_absent = allow_absent
        self.states = states
        self.values = values
        self._index = {s.placement: i for i, s in enumerate(states)}

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i: int) -> BasisState:
        return self.states[i]

    def index_of(self, placement: tuple[int, ...]) -> int | None:
        return self._index.get(placement)

    def vacuum_index(self) -> int | None:
        return self.index_of((ABSENT,) * self.n)


def build_basis(
    K: int,
    n: int,
    constraint: Constraint = Constraint.classic(),
    allow_absent: bool = True,
    state_cap: int = DEFAULT_STATE_CAP,
    values=None,
) -> Basis:
    """All placements with every level sum-free, in lexicographic order
    (absent < level 1 < ... < level K per value).

    `values` restricts the participating quantum numbers to a subset of
    1..n; by default every value takes part.
    """
    if K < 1 or n < 1:
        raise ValueError("K and n must be >= 1")
    if values is None:
        members = tuple(range(1, n + 1))
    else:
        members = tuple(sorted(set(values)))
        if not members or members[0] < 1 or members[-1] > n:
            raise ValueError("values must be a nonempty subset of 1..n")
    states: list[BasisState] = []
    placement = [ABSENT] * n
    blocks: list[list[int]] = [[] for _ in range(K)]

    def rec(pos: int) -> None:
        if pos == len(members):
            if len(states) >= state_cap:
                raise BasisTooLarge(
                    f"basis exceeds the {state_cap}-state cap; raise state_cap"
                )
            states.append(BasisState(n=n, K=K, placement=tuple(placement)))
            return
        v = members[pos]
        if allow_absent:
            rec(pos + 1)
        for k in range(1, K + 1):
            block = blocks[k - 1]
            if _can_insert(tuple(block), v, constraint):
                block.append(v)
                placement[v - 1] = k
                rec(pos + 1)
                placement[v - 1] = ABSENT
                block.pop()

    rec(0)
    return Basis(K=K, n=n, constraint=constraint, allow_absent=allow_absent,
                 states=tuple(states), values=members)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense matrix over the basis; integer for the algebra, float for H."""

    label: str
    matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(label=f"{self.label}+", matrix=self.matrix.T.conj())


# --- partial-map internals ----------------------------------------------------
# Creation/annihilation matrices have at most one unit entry per column, so
# each operator is a partial map on basis indices (-1 = annihilated).  The
# identity checks compose these maps instead of multiplying dense matrices.

def _creation_map(basis: Basis, v: int, k: int) -> np.ndarray:
    dst = np.full(len(basis), -1, dtype=np.int64)
    for i, s in enumerate(basis):
        if s.placement[v - 1] != ABSENT:
            continue
        t = list(s.placement)
        t[v - 1] = k
        j = basis.index_of(tuple(t))
        if j is not None:
            dst[i] = j
    return dst


def _annihilation_map(basis: Basis, v: int, k: int) -> np.ndarray:
    dst = np.full(len(basis), -1, dtype=np.int64)
    for i, s in enumerate(basis):
        if s.placement[v - 1] != k:
            continue
        t = list(s.placement)
        t[v - 1] = ABSENT
        j = basis.index_of(tuple(t))
        if j is None:  # pragma: no cover - removal always stays admissible
            raise RuntimeError("basis is missing a sub-placement")
        dst[i] = j
    return dst


def _compose(after: np.ndarray, first: np.ndarray) -> np.ndarray:
    out = np.full_like(first, -1)
    alive = first >= 0
    out[alive] = after[first[alive]]
    return out


def _map_to_matrix(dst: np.ndarray, label: str) -> OperatorMatrix:
    d = len(dst)
    m = np.zeros((d, d), dtype=np.int64)
    for col, row in enumerate(dst):
        if row >= 0:
            m[row, col] = 1
    return OperatorMatrix(label=label, matrix=m)


def creation(v: int, k: int, basis: Basis) -> OperatorMatrix:
    """Place value v at level k; zero on occupied or rule-breaking outcomes."""
    _check_mode(v, k, basis)
    return _map_to_matrix(_creation_map(basis, v, k), f"B+({v},{k})")


def annihilation(v: int, k: int, basis: Basis) -> OperatorMatrix:
    """Remove value v from level k; built directly, equals creation's adjoint."""
    _check_mode(v, k, basis)
    return _map_to_matrix(_annihilation_map(basis, v, k), f"B({v},{k})")


def number_operator(v: int, k: int, basis: Basis) -> OperatorMatrix:
    """Diagonal 0/1 matrix marking states with value v at level k."""
    _check_mode(v, k, basis)
    diag = np.array(
        [1 if s.placement[v - 1] == k else 0 for s in basis], dtype=np.int64
    )
    return OperatorMatrix(label=f"N({v},{k})", matrix=np.diag(diag))


def _check_mode(v: int, k: int, basis: Basis) -> None:
    if v not in basis.values:
        raise ValueError(f"value {v} is not a participating quantum number")
    if not (1 <= k <= basis.K):
        raise ValueError(f"level {k} outside 1..{basis.K}")


# --- algebra verification ------------------------------------------------------

@dataclass(frozen=True)
class BlockedDeviation:
    """One itemized failure of the unconstrained-subspace identities."""

    kind: str  # "same-mode" or "cross-mode"
    value: int
    level: int
    other_value: int
    other_level: int
    state_index: int
    witness: tuple[int, int, int]


@dataclass(frozen=True)
class AlgebraReport:
    dimension: int
    modes: int
    adjointness_ok: bool
    vacuum_ok: bool
    number_diagonal_ok: bool
    double_creation_zero_ok: bool
    annihilators_commute_ok: bool
    same_mode_identity_ok: bool
    cross_mode_identity_ok: bool
    blocked_deviations: tuple[BlockedDeviation, ...]
    parked_exclusions: int

    @property
    def passed(self) -> bool:
        return (
            self.adjointness_ok
            and self.vacuum_ok
            and self.number_diagonal_ok
            and self.double_creation_zero_ok
            and self.annihilators_commute_ok
            and self.same_mode_identity_ok
            and self.cross_mode_identity_ok
        )


def _insertion_witness(
    basis: Basis, state: BasisState, v: int, k: int
) -> tuple[int, int, int] | None:
    block = state.level_blocks()[k - 1]
    ok, witness = is_sum_free(block + (v,), basis.constraint)
    return None if ok else witness


def algebra_report(basis: Basis) -> AlgebraReport:
    """Measure the operator algebra exactly over the whole basis.

    Identities asserted on the subspace where the involved toggles are
    unconstrained; every deviation is itemized together with the violating
    triple of the blocked insertion that causes it.
    """
    if not basis.allow_absent:
        raise ValueError("algebra needs a basis built with allow_absent=True")
    d = len(basis)
    modes = [(v, k) for v in basis.values for k in range(1, basis.K + 1)]
    cmaps = {m: _creation_map(basis, *m) for m in modes}
    amaps = {m: _annihilation_map(basis, *m) for m in modes}

    adjoint_ok = True
    for m in modes:
        cm, am = cmaps[m], amaps[m]
        for i in range(d):
            if cm[i] >= 0 and am[cm[i]] != i:
                adjoint_ok = False
            if am[i] >= 0 and cm[am[i]] != i:
                adjoint_ok = False

    vac = basis.vacuum_index()
    vacuum_ok = vac is not None and all(amaps[m][vac] == -1 for m in modes)

    number_ok = True
    for v, k in modes:
        nd = _compose(cmaps[(v, k)], amaps[(v, k)])  # N = B+ B
        for i, s in enumerate(basis):
            expect = i if s.placement[v - 1] == k else -1
            if nd[i] != expect:
                number_ok = False

    double_zero = all(
        np.all(_compose(cmaps[m], cmaps[m]) == -1) for m in modes
    )

    annih_commute = True
    for a in modes:
        for b in modes:
            left = _compose(amaps[a], amaps[b])
            right = _compose(amaps[b], amaps[a])
            if not np.array_equal(left, right):
                annih_commute = False

    deviations: list[BlockedDeviation] = []
    parked = 0

    same_mode_ok = True
    for v, k in modes:
        cm, am = cmaps[(v, k)], amaps[(v, k)]
        for i, s in enumerate(basis):
            place = s.placement[v - 1]
            # commutator action: +1 on creatable states, -1 on occupied, 0 else
            create_ok = cm[i] >= 0
            if place == k:
                continue  # identity gives -1 exactly; B B+ dies, B+ B restores
            if place != ABSENT:
                parked += 1  # toggling v at k impossible: v parked elsewhere
                continue
            if not create_ok:
                witness = _insertion_witness(basis, s, v, k)
                if witness is None:
                    same_mode_ok = False
                    continue
                deviations.append(
                    BlockedDeviation(
                        kind="same-mode",
                        value=v,
                        level=k,
                        other_value=v,
                        other_level=k,
                        state_index=i,
                        witness=witness,
                    )
                )

    cross_mode_ok = True
    for v, k in modes:
        for w, kp in modes:
            if v == w:
                continue
            bv, bwc = amaps[(v, k)], cmaps[(w, kp)]
            left = _compose(bv, bwc)  # B_v B+_w
            right = _compose(bwc, bv)  # B+_w B_v
            diff = np.nonzero(left != right)[0]
            for i in diff:
                s = basis[i]
                if s.placement[v - 1] != k or s.placement[w - 1] != ABSENT:
                    # occupancy alone should kill both legs identically
                    cross_mode_ok = False
                    continue
                witness = _insertion_witness(basis, s, w, kp)
                if witness is None:
                    t = list(s.placement)
                    t[v - 1] = ABSENT
                    witness = _insertion_witness(
                        basis, basis[basis.index_of(tuple(t))], w, kp
                    )
                if witness is None:
                    cross_mode_ok = False
                    continue
                deviations.append(
                    BlockedDeviation(
                        kind="cross-mode",
                        value=v,
                        level=k,
                        other_value=w,
                        other_level=kp,
                        state_index=int(i),
                        witness=witness,
                    )
                )

    return AlgebraReport(
        dimension=d,
        modes=len(modes),
        adjointness_ok=adjoint_ok,
        vacuum_ok=bool(vacuum_ok),
        number_diagonal_ok=number_ok,
        double_creation_zero_ok=bool(double_zero),
        annihilators_commute_ok=annih_commute,
        same_mode_identity_ok=same_mode_ok,
        cross_mode_identity_ok=cross_mode_ok,
        blocked_deviations=tuple(deviations),
        parked_exclusions=parked,
    )


# --- Hamiltonian and spectra ----------------------------------------------------

def hamiltonian(
    basis: Basis,
    energies: tuple[float, ...] | list[float],
    hop: float = 0.0,
    interaction: float = 0.0,
) -> OperatorMatrix:
    """H = sum_k E(k) n_k  +  J * (allowed single-value level changes)
    + lambda * sum_{k<k'} n_k n_k' with n_k the level occupancy.
    """
    if len(energies) != basis.K:
        raise ValueError(f"need {basis.K} level energies, got {len(energies)}")
    d = len(basis)
    H = np.zeros((d, d), dtype=np.float64)
    for i, s in enumerate(basis):
        occ = s.occupancies()
        diag = sum(e * c for e, c in zip(energies, occ))
        if interaction:
            diag += interaction * sum(
                occ[a] * occ[b]
                for a in range(basis.K)
                for b in range(a + 1, basis.K)
            )
        H[i, i] = diag
    if hop:
        for i, s in enumerate(basis):
            for v in basis.values:
                src = s.placement[v - 1]
                if src == ABSENT:
                    continue
                for dest in range(1, basis.K + 1):
                    if dest == src:
                        continue
                    t = list(s.placement)
                    t[v - 1] = dest
                    j = basis.index_of(tuple(t))
                    if j is not None:
                        H[j, i] += hop
    return OperatorMatrix(label="H", matrix=H)


@dataclass(frozen=True)
class GroundStateReport:
    energy: float
    degeneracy: int
    eigenvectors: np.ndarray  # (dimension, degeneracy), orthonormal columns
    tolerance: float


def ground_state(
    op: OperatorMatrix | np.ndarray, tolerance: float = 1e-9
) -> GroundStateReport:
    """Smallest eigenvalue of a self-adjoint operator with its eigenspace."""
    H = op.matrix if isinstance(op, OperatorMatrix) else np.asarray(op)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("operator must be a square matrix")
    if not np.allclose(H, H.T.conj(), atol=1e-12, equal_nan=True):
        raise ValueError("operator must be self-adjoint")
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolver did not converge: {exc}") from exc
    energy = float(eigenvalues[0])
    degenerate = eigenvalues <= energy + tolerance
    return GroundStateReport(
        energy=energy,
        degeneracy=int(np.count_nonzero(degenerate)),
        eigenvectors=eigenvectors[:, degenerate],
        tolerance=tolerance,
    )


def minimum_energy_states(
    basis: Basis, energies: tuple[float, ...] | list[float], interaction: float = 0.0
) -> tuple[float, list[int]]:
    """Combinatorial minimum of the diagonal energy; the independent route
    against which the eigensolver's ground energy is checked at J = 0.
    """
    best = None
    winners: list[int] = []
    for i, s in enumerate(basis):
        occ = s.occupancies()
        e = sum(en * c for en, c in zip(energies, occ))
        if interaction:
            e += interaction * sum(
                occ[a] * occ[b]
                for a in range(basis.K)
                for b in range(a + 1, basis.K)
            )
        if best is None or e < best - 1e-12:
            best, winners = e, [i]
        elif abs(e - best) <= 1e-12:
            winners.append(i)
    return float(best), winners


# --- state vectors and symmetrized registers -------------------------------------

@dataclass(frozen=True)
class StateVector:
    """Amplitudes over an ordered basis; exact zero vectors are rejected."""

    basis: Basis
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if len(self.amplitudes) != len(self.basis):
            raise ValueError("amplitude count must match the basis size")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.basis, self.amplitudes / n)


def superposition(basis: Basis, weights: dict[tuple[int, ...], complex]) -> StateVector:
    """StateVector from placement -> amplitude; unknown placements are errors."""
    amps = np.zeros(len(basis), dtype=np.complex128)
    for placement, amplitude in weights.items():
        idx = basis.index_of(placement)
        if idx is None:
            raise ValueError(f"placement {placement} is not in the basis")
        amps[idx] = amplitude
    return StateVector(basis=basis, amplitudes=amps)


@dataclass(frozen=True)
class SymmetrizedRegister:
    """Equal-weight formal sum over all orderings of a block's values."""

    values: tuple[int, ...]
    terms: dict[tuple[int, ...], int] = field(compare=False)

    @property
    def term_count(self) -> int:
        return len(self.terms)


def permanent_register(values) -> SymmetrizedRegister:
    """All orderings of the given distinct values with coefficient one."""
    vals = tuple(values)
    if not 1 <= len(vals) <= 8:
        raise TooManyValues(
            f"register length must be 1..8 (factorial growth), got {len(vals)}"
        )
    if len(set(vals)) != len(vals):
        raise ValueError("register values must be distinct")
    terms = {perm: 1 for perm in permutations(vals)}
    return SymmetrizedRegister(values=tuple(sorted(vals)), terms=terms)


# --- export helpers ---------------------------------------------------------------

def basis_to_dict(basis: Basis) -> dict:
    return {
        "K": basis.K,
        "n": basis.n,
        "kind": basis.constraint.kind,
        "modulus": basis.constraint.modulus,
        "allow_absent": basis.allow_absent,
        "states": [list(s.placement) for s in basis],
    }


def matrix_to_text(op: OperatorMatrix) -> str:
    """Dense text format: dimension header line, then row-major entries."""
    d = op.dimension
    lines = [str(d)]
    for row in op.matrix:
        lines.append(" ".join(repr(x) for x in row.tolist()))
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    d = int(lines[0])
    rows = [[float(x) for x in ln.split()] for ln in lines[1 : d + 1]]
    out = np.array(rows, dtype=np.float64)
    if out.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix")
    return out


def ground_state_to_dict(report: GroundStateReport, basis: Basis | None = None) -> dict:
    data = {
        "energy": report.energy,
        "degeneracy": report.degeneracy,
        "tolerance": report.tolerance,
        "amplitudes": [
            [float(x) for x in report.eigenvectors[:, j]]
            for j in range(report.degeneracy)
        ],
    }
    if basis is not None:
        data["states"] = [list(s.placement) for s in basis]
    return data
