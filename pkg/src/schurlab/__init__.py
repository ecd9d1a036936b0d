"""schurlab: exact combinatorics of sum-free partitions and their quantum reading.

The package solves and verifies Schur-type coloring problems (classic, weak,
and modular variants), builds the rearrangement sets that connect maximal
partitions, generates the self-similar doubling-free sequence, and realizes
the constrained creation/annihilation algebra with exact small-scale spectra.
"""

from .constraints import (
    CLASSIC,
    MODULAR,
    WEAK,
    WEAK_MODULAR,
    Coloring,
    Constraint,
    VerifyReport,
    as_block,
    certificate_from_dict,
    certificate_to_dict,
    is_sum_free,
    load_certificate,
    residue,
    save_certificate,
    verify_coloring,
)
from .errors import (
    BasisTooLarge,
    InconsistentAssignment,
    InsufficientTerms,
    MalformedAssignment,
    NumericalFailure,
    ScaleRefusal,
    SchurlabError,
    TooManyValues,
)
from .manybody import (
    Basis,
    BasisState,
    GroundStateReport,
    OperatorMatrix,
    StateVector,
    SymmetrizedRegister,
    algebra_report,
    annihilation,
    build_basis,
    creation,
    ground_state,
    hamiltonian,
    minimum_energy_states,
    number_operator,
    permanent_register,
    superposition,
)
from .sat import (
    CnfDocument,
    assignment_from_coloring,
    export_cnf,
    import_sat_assignment,
)
from .search import (
    LOWER_BOUND,
    PROVE,
    Budget,
    SearchParams,
    SearchResult,
    SearchStats,
    admissible_blocks,
    enumerate_colorings,
    solve,
)
from .sequence import (
    FractalReport,
    GenfunReport,
    SequenceState,
    exponents,
    fractal_check,
    generate,
    genfun_check,
    greedy_reference,
    occupancy_string,
)
from .transforms import (
    GroupReport,
    Invalid,
    RearrangementSet,
    Transformation,
    build_rset,
    canonicalize,
    check_group,
    compose,
    first_order_moves,
)

__version__ = "0.1.0"

EXOO_CERTIFICATE = "s5_exoo.json"


def data_path(name: str):
    """Path of a bundled data file, e.g. the K=5 lower-bound certificate."""
    from importlib import resources

    return resources.files(__package__).joinpath("data", name)
