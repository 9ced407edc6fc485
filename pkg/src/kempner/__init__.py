"""Digit-restricted integer sets without k-term arithmetic progressions.

Construction and verification of Kempner sets K(S, b), certified-
precision harmonic sums of their shifts, and branch-and-bound search for
digit sets with large harmonic sum or logarithmic density.
"""

from .progressions import (
    APWitness,
    NotKFreeError,
    ResidueSet,
    SearchState,
    candidate_extensions,
    embedding_base,
    extend_state,
    find_ap_witness,
    find_integer_ap,
    initial_state,
    is_kfree_mod,
)
from .sets import (
    KempnerSpec,
    approximate_by_kempner,
    contains,
    enumerate_upto,
    greedy_set,
    iter_members,
    kfree_certificate,
    log_density,
    longest_ap,
)
from .harmonic import (
    CertifiedSum,
    PowerSums,
    PrecisionConfig,
    PrecisionError,
    ShiftDecomposition,
    depth_power_sums,
    harmonic_number,
    harmonic_sum_shifted,
    quick_estimate,
    shift_sum_decomposition,
)
from .search import (
    CandidateRecord,
    SearchBudgetExceeded,
    SearchConfig,
    branch_and_bound,
    density_search,
    greedy_reference,
    rescore,
    run_search,
)

__version__ = "0.1.0"
