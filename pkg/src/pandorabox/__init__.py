"""Exact solver and verifier for generalized sequential box-opening search.

Prizes live in boxes that cost something to open; the reward is a symmetric
utility of everything found, net of opening costs.  The package computes
reservation values exactly, runs the greatest-reservation-value rule over
the full outcome tree, certifies or refutes its optimality against a
brute-force dynamic-programming oracle, calibrates the equivalent bandit
index for base/bonus utilities, and rebuilds the classic demonstration
instances with verification baked in.
"""

from .cases import (
    CaseBundle,
    CaseVerification,
    CheckOutcome,
    build_bernoulli_triple_case,
    build_concave_bernoulli_case,
    build_degenerate_triple_case,
    build_increment_dependence_case,
    fixed_order_expected_payoff,
    geometric_diminishing_table,
    search_order_weighted_counterexample,
    verify_bundle,
)
from .core import (
    AssumptionReport,
    Box,
    ConcaveSumUtility,
    ExplicitTableUtility,
    FiniteDistribution,
    Instance,
    LevelTable,
    MaxUtility,
    OrderWeightedUtility,
    PiecewiseLinear,
    SearchState,
    SprUtility,
    Utility,
    Witness,
    check_increment_independence,
    check_monotone_submodular,
    check_ord,
    check_spr,
    enumerate_histories,
    evaluate_utility,
    identity_table,
    level_functions,
    spr_bonus,
    zero_table,
)
from .documents import (
    bundle_from_document,
    bundle_to_document,
    instance_from_document,
    instance_to_document,
    load_bundle_file,
    load_instance_file,
    parse_instance,
    save_document,
)
from .errors import (
    ConstructionError,
    DomainError,
    PandoraError,
    ResourceLimitError,
    StateError,
    TableMissError,
    ValidationError,
    VerificationError,
)
from .gittins import (
    IndexConsistency,
    TargetBandit,
    gittins_index,
    map_to_target_bandit,
    schedule_reward,
    verify_index_consistency,
)
from .policy import (
    Action,
    PolicyEvaluation,
    TieBreak,
    default_tie_break,
    optimal_expected_value,
    pandora_expected_value,
    pandora_next_action,
    policy_gap,
    policy_gaps_over_tiebreaks,
    reference_optimal_value,
    simulate,
    stop_payoff,
)
from .reservation import (
    ReservationValue,
    bernoulli_concave_reservation,
    generalized_reservation,
    generalized_reservation_with_method,
    probe_upper_bound,
    weitzman_reservation,
)

__version__ = "0.1.0"
