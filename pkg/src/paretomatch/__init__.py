"""Two-sided matching with weak preferences on a priority-auction core.

The library computes weakly stable, Pareto-stable matchings for stable
marriage with incomplete weak preferences and for college admissions with
capacities, through mechanisms that are strategyproof for the proposing
side.  Exhaustive oracles validate every guarantee at small scale, and a
text CLI exposes solving, verification, enumeration, and misreport sweeps.
"""

from .uap import (
    DUMMY_ITEM,
    Bidder,
    Matching,
    SolverState,
    ThresholdPair,
    Uap,
    greedy_mwm,
    priority_histogram,
    threshold,
)
from .iuap import (
    Iuap,
    Multibidder,
    RevelationOutcome,
    add_bidder,
    exit_check,
    iuap_threshold,
    losers,
    reveal_all,
    to_uap,
    winners,
)
from .smiw import (
    UNMATCHED,
    MatchingOutcome,
    SmiwInstance,
    ThresholdFact,
    UtilityAssignment,
    WeakOrder,
    build_iuap,
    canonical_assignment,
    canonical_utility,
    smiw_threshold_report,
    solve_smiw,
    threshold_without_man,
)
from .caw import (
    CawInstance,
    CawOutcome,
    GroupPreferenceMode,
    SmiwReduction,
    caw_weak_stability_check,
    expand_to_smiw,
    solve_caw,
)
from .oracles import (
    ManipulationReport,
    MatchingSet,
    all_greedy_matchings,
    all_weak_orders,
    brute_force_greedy_mwm,
    enumerate_matchings,
    find_dominator,
    is_individually_rational,
    manipulation_search,
    pareto_dominates,
    pareto_stable_set,
    rationality_violations,
    strongly_blocking_pairs,
    two_phase_baseline,
    weakly_stable_set,
)
from .fileio import ParseError, emit_instance, emit_matching, parse_instance, parse_matching
from .generator import random_caw_instance, random_smiw_instance, random_weak_order

__version__ = "0.1.0"
