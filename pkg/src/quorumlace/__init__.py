"""Permissionless quorum systems: slices, survivor sets, quorums and leagues,
the register and reliable-broadcast protocols, a deterministic simulator,
and checkers relating the model to classic, asymmetric, FBAS and PBQS trust.
"""

from .league import (
    LeagueAnalyzer,
    LeagueReport,
    check_availability,
    check_consistency,
    find_maximal_leagues,
    inclusive_rooted_minimal,
    is_league,
    tolerated_sets,
    union_preserves_league,
)
from .model import (
    EMPTY_CONFIG,
    CapacityError,
    ConfigError,
    Configuration,
    ContractError,
    DegenerateConfigurationWarning,
    Pfps,
    QuorumlaceError,
    View,
    blocked_closure,
    blocks,
    contains_quorum,
    has_slice_in,
    is_quorum,
    is_resilient,
    max_closed_subset,
    normalize_config,
    pset,
    quorums,
    slices_of,
    survivor_sets,
    tolerated_by,
    tolerates,
    worst_case_view,
)

__all__ = [
    "EMPTY_CONFIG", "CapacityError", "ConfigError", "Configuration", "ContractError",
    "DegenerateConfigurationWarning", "LeagueAnalyzer", "LeagueReport", "Pfps", "QuorumlaceError", "View",
    "blocked_closure", "blocks", "check_availability", "check_consistency", "contains_quorum",
    "find_maximal_leagues", "has_slice_in", "inclusive_rooted_minimal", "is_league", "is_quorum",
    "is_resilient", "max_closed_subset", "normalize_config", "pset", "quorums", "slices_of",
    "survivor_sets", "tolerated_by", "tolerated_sets", "tolerates", "union_preserves_league",
    "worst_case_view",
]
