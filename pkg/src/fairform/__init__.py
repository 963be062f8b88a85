"""Diversity-aware group formation.

Builds Boolean protected-group profiles for candidates, selects maximally
diverse groups with greedy algorithms, and measures the diversity gained and
the utility given up against a random-selection baseline.
"""

from .errors import (
    BudgetExceededError,
    ConfigError,
    FairformError,
    IntegrityError,
    SchemaError,
)
from .ingestion import (
    ExclusionEntry,
    PoolFile,
    RowIssue,
    apply_exclusions,
    dump_pool,
    load_epscor_states,
    load_gdp_table,
    load_pool,
    load_threshold_config,
)
from .metrics import (
    REPORTING_GROUPS,
    EvaluationReport,
    baseline_expectation,
    diversity_gain,
    evaluate_selection,
    f_measure,
    monte_carlo_baseline,
    proportions,
    rho_gain,
    utility,
    utility_loss_pct,
    utility_savings_pct,
)
from .profiles import (
    SCORING_FEATURES,
    PoolThresholds,
    ProtectedFlags,
    RawCandidate,
    ThresholdConfig,
    derive_thresholds,
    diversity_score,
    to_protected_flags,
)
from .seeding import derive_seed
from .selection import (
    ALGORITHMS,
    ScoredCandidate,
    Selection,
    brute_force_max_score,
    build_scored_pool,
    mga_select,
    rsa_select,
    select,
    total_score,
    uga_select,
)
from .synth import HIndexModel, SynthSpec, generate_pool, load_synth_spec

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BudgetExceededError",
    "ConfigError",
    "EvaluationReport",
    "ExclusionEntry",
    "FairformError",
    "HIndexModel",
    "IntegrityError",
    "PoolFile",
    "PoolThresholds",
    "ProtectedFlags",
    "RawCandidate",
    "REPORTING_GROUPS",
    "RowIssue",
    "SchemaError",
    "ScoredCandidate",
    "SCORING_FEATURES",
    "Selection",
    "SynthSpec",
    "ThresholdConfig",
    "apply_exclusions",
    "baseline_expectation",
    "brute_force_max_score",
    "build_scored_pool",
    "derive_seed",
    "derive_thresholds",
    "diversity_gain",
    "diversity_score",
    "dump_pool",
    "evaluate_selection",
    "f_measure",
    "generate_pool",
    "load_epscor_states",
    "load_gdp_table",
    "load_pool",
    "load_synth_spec",
    "load_threshold_config",
    "mga_select",
    "monte_carlo_baseline",
    "proportions",
    "rho_gain",
    "rsa_select",
    "select",
    "total_score",
    "to_protected_flags",
    "uga_select",
    "utility",
    "utility_loss_pct",
    "utility_savings_pct",
    "__version__",
]
