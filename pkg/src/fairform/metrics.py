"""Evaluation measures for a selection against a random-selection baseline.

The chain of measures, all expressed as percentages:

* per-group proportion       - share of group members in a selection
* rho (per-group gain)       - relative change of a proportion vs baseline
* d_gain (diversity gain)    - mean over groups of rho, each capped at 100
                               so one runaway feature cannot dominate
* utility                    - mean h-index of the selected members
* ul_pct (utility loss)      - baseline-relative percentage utility drop;
                               negative when the selection beats the baseline
* y_pct (utility savings)    - complement of the loss: y = 100 - ul, i.e.
                               the share of baseline utility retained
* f                          - harmonic mean of d_gain and y_pct

The baseline is the random-selection expectation: uniform sampling without
replacement preserves means, so the expected proportions and utility equal
the pool's own. A seeded Monte-Carlo mode is available to realize the
baseline from actual random draws instead.

Reporting defaults to six groups (the geographic feature split into its
developing-country and EPSCoR subgroups); a five-group mode mirrors the
scoring features exactly.
"""

from __future__ import annotations

import json
import math
from array import array
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from . import _kernels
from .errors import IntegrityError
from .profiles import SCORING_FEATURES, ProtectedFlags
from .selection import ScoredCandidate, Selection

#: Six reporting groups, in canonical order.
REPORTING_GROUPS = (
    "female",
    "non_white",
    "junior",
    "developing",
    "epscor",
    "low_rank_university",
)

GROUP_PREDICATES: dict[str, Callable[[ProtectedFlags], bool]] = {
    "female": lambda f: f.female,
    "non_white": lambda f: f.non_white,
    "junior": lambda f: f.junior,
    "geo_protected": lambda f: f.geo_protected,
    "developing": lambda f: f.geo_subgroup == "developing",
    "epscor": lambda f: f.geo_subgroup == "epscor",
    "low_rank_university": lambda f: f.low_rank_university,
}


def groups_for_mode(group_mode: int) -> tuple[str, ...]:
    """The group set for a reporting mode: 6 (default) or 5 (scoring features)."""
    if group_mode == 6:
        return REPORTING_GROUPS
    if group_mode == 5:
        return SCORING_FEATURES
    raise ValueError(f"group_mode must be 5 or 6, got {group_mode}")


def index_pool(pool: Sequence[ScoredCandidate]) -> dict[str, ScoredCandidate]:
    return {c.id: c for c in pool}


def _members(
    selection: Selection, pool: Sequence[ScoredCandidate] | Mapping[str, ScoredCandidate]
) -> list[ScoredCandidate]:
    store = pool if isinstance(pool, Mapping) else index_pool(pool)
    missing = [m for m in selection.member_ids if m not in store]
    if missing:
        raise IntegrityError(
            f"selection members not found in pool: {', '.join(missing[:5])}"
        )
    return [store[m] for m in selection.member_ids]


def _proportions_of(
    candidates: Sequence[ScoredCandidate], groups: Sequence[str]
) -> dict[str, float]:
    if not candidates:
        raise ValueError("cannot compute proportions of an empty group")
    out = {}
    for g in groups:
        pred = GROUP_PREDICATES[g]
        out[g] = 100.0 * sum(pred(c.flags) for c in candidates) / len(candidates)
    return out


def proportions(
    selection: Selection,
    pool: Sequence[ScoredCandidate] | Mapping[str, ScoredCandidate],
    groups: Sequence[str] = REPORTING_GROUPS,
) -> dict[str, float]:
    """Percentage of selected members carrying each protected flag."""
    return _proportions_of(_members(selection, pool), groups)


def rho_gain(p_alg: float, p_base: float) -> float:
    """Relative percentage gain of a proportion versus the baseline.

    A zero baseline with any positive achieved proportion yields ``inf``,
    which downstream capping turns into the maximum contribution of 100;
    zero against zero is no change.
    """
    if not (0.0 <= p_alg <= 100.0 and 0.0 <= p_base <= 100.0):
        raise ValueError("proportions must lie in [0, 100]")
    if p_base > 0.0:
        return 100.0 * (p_alg - p_base) / p_base
    return math.inf if p_alg > 0.0 else 0.0


def diversity_gain(rhos: Sequence[float]) -> float:
    """Mean per-group gain with each term capped at 100.

    Negative gains are not floored, so a loss in one group drags the mean
    down; the mean itself is also clamped to at most 100 (redundant once the
    terms are capped, but kept as a guard).
    """
    if not rhos:
        raise ValueError("need at least one per-group gain")
    capped = [min(r, 100.0) for r in rhos]
    return min(sum(capped) / len(capped), 100.0)


def utility(
    selection: Selection,
    pool: Sequence[ScoredCandidate] | Mapping[str, ScoredCandidate],
) -> float:
    """Mean h-index of the selected members."""
    members = _members(selection, pool)
    if not members:
        raise ValueError("utility of an empty selection is undefined")
    return sum(c.h_index for c in members) / len(members)


def utility_loss_pct(u_alg: float, u_base: float) -> float:
    """Baseline-relative percentage utility drop (negative = improvement)."""
    if u_base <= 0:
        raise ValueError(f"baseline utility must be positive, got {u_base}")
    return 100.0 * (u_base - u_alg) / u_base


def utility_savings_pct(ul_pct: float) -> float:
    """Share of baseline utility retained: the complement of the loss."""
    return 100.0 - ul_pct


def f_measure(d_gain: float, y_pct: float) -> float:
    """Harmonic mean of diversity gain and utility savings.

    Both inputs zero returns 0 by convention; any other zero-sum pair has
    no meaningful harmonic mean and is rejected.
    """
    if d_gain == 0.0 and y_pct == 0.0:
        return 0.0
    if d_gain + y_pct == 0.0:
        raise ValueError("d_gain + y_pct must be nonzero")
    return 2.0 * d_gain * y_pct / (d_gain + y_pct)


def baseline_expectation(
    pool: Sequence[ScoredCandidate],
    n: int | None = None,
    groups: Sequence[str] = REPORTING_GROUPS,
) -> tuple[dict[str, float], float]:
    """Expected random-baseline proportions and utility.

    Uniform sampling without replacement preserves means, so the expectation
    equals the pool's own proportions and mean h-index regardless of the
    group size ``n`` (accepted for interface symmetry with the Monte-Carlo
    mode).
    """
    if not pool:
        raise ValueError("candidate pool is empty")
    props = _proportions_of(pool, groups)
    mean_h = sum(c.h_index for c in pool) / len(pool)
    return props, mean_h


def monte_carlo_baseline(
    pool: Sequence[ScoredCandidate],
    n: int,
    trials: int = 1000,
    seed: int = 0,
    groups: Sequence[str] = REPORTING_GROUPS,
) -> tuple[dict[str, float], float]:
    """Random-baseline proportions and utility averaged over seeded draws.

    Runs ``trials`` uniform n-subset draws (per-trial sub-seeds derive
    deterministically from ``seed``, so results are independent of
    evaluation order) and averages the group proportions and h-index.
    """
    if not pool:
        raise ValueError("candidate pool is empty")
    if n < 1:
        raise ValueError(f"group size must be >= 1, got {n}")
    if trials < 1:
        raise ValueError(f"trial count must be >= 1, got {trials}")

    flags = bytes(
        GROUP_PREDICATES[g](c.flags) for c in pool for g in groups
    )
    h = array("q", (c.h_index for c in pool))
    counts, h_total = _kernels.rsa_trial_totals(
        flags, len(pool), len(groups), h, n, trials, seed
    )
    drawn = trials * min(n, len(pool))
    props = {g: 100.0 * counts[i] / drawn for i, g in enumerate(groups)}
    return props, h_total / drawn


@dataclass(frozen=True)
class EvaluationReport:
    """All measures for one selection against one baseline."""

    rho: dict[str, float]
    d_gain: float
    utility_alg: float
    utility_base: float
    ul_pct: float
    y_pct: float
    f: float
    baseline_mode: str
    proportions_alg: dict[str, float]
    proportions_base: dict[str, float]
    groups: tuple[str, ...]
    algorithm: str = ""
    seed: int = 0

    def to_dict(self) -> dict:
        """JSON-safe representation; an infinite rho serializes as null with
        its capped value alongside."""
        group_block = {}
        for g in self.groups:
            r = self.rho[g]
            group_block[g] = {
                "baseline_pct": self.proportions_base[g],
                "selected_pct": self.proportions_alg[g],
                "rho": None if math.isinf(r) else r,
                "rho_capped": min(r, 100.0),
            }
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "baseline_mode": self.baseline_mode,
            "group_mode": len(self.groups),
            "groups": group_block,
            "d_gain": self.d_gain,
            "utility": {"selected": self.utility_alg, "baseline": self.utility_base},
            "ul_pct": self.ul_pct,
            "y_pct": self.y_pct,
            "f": self.f,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    # TSV column order is part of the interface: d_gain, ul, y, f.
    TSV_COLUMNS = ("d_gain", "ul_pct", "y_pct", "f")

    @classmethod
    def tsv_header(cls) -> str:
        return "\t".join(cls.TSV_COLUMNS)

    def to_tsv_row(self) -> str:
        return "\t".join(f"{getattr(self, c):.2f}" for c in self.TSV_COLUMNS)


def evaluate_selection(
    selection: Selection,
    pool: Sequence[ScoredCandidate],
    group_mode: int = 6,
    baseline: str = "analytic",
    trials: int = 1000,
    seed: int = 0,
    baseline_override: tuple[Mapping[str, float], float] | None = None,
) -> EvaluationReport:
    """Full evaluation of a selection against the random baseline.

    ``baseline`` is ``analytic`` (expectation, the default) or
    ``monte_carlo`` (averaged over ``trials`` seeded draws). Passing
    ``baseline_override`` as ``(proportions, utility)`` substitutes an
    explicit baseline instead, e.g. a concrete committee to compare against.
    """
    groups = groups_for_mode(group_mode)
    props_alg = proportions(selection, pool, groups)
    u_alg = utility(selection, pool)

    if baseline_override is not None:
        props_base = {g: baseline_override[0][g] for g in groups}
        u_base = baseline_override[1]
        mode = "explicit"
    elif baseline == "analytic":
        props_base, u_base = baseline_expectation(pool, selection.size, groups)
        mode = "analytic"
    elif baseline == "monte_carlo":
        props_base, u_base = monte_carlo_baseline(
            pool, selection.size, trials, seed, groups
        )
        mode = f"monte_carlo:{trials}"
    else:
        raise ValueError(f"unknown baseline {baseline!r}")

    rho = {g: rho_gain(props_alg[g], props_base[g]) for g in groups}
    d_gain = diversity_gain([rho[g] for g in groups])
    ul = utility_loss_pct(u_alg, u_base)
    y = utility_savings_pct(ul)
    return EvaluationReport(
        rho=rho,
        d_gain=d_gain,
        utility_alg=u_alg,
        utility_base=u_base,
        ul_pct=ul,
        y_pct=y,
        f=f_measure(d_gain, y),
        baseline_mode=mode,
        proportions_alg=props_alg,
        proportions_base=props_base,
        groups=groups,
        algorithm=selection.algorithm,
        seed=selection.seed,
    )
