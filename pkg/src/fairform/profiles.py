"""Demographic profile modeling.

Turns a candidate's raw attributes into a five-feature Boolean vector of
protected-group memberships and sums that vector into a diversity score.
The protected class for each feature is the one underrepresented in the
studied population:

* gender        -> female
* ethnicity     -> non-white
* geolocation   -> developing country, or EPSCoR state for US candidates
* university    -> low-ranked institution (rank number above the cutoff)
* career stage  -> junior researcher

Thresholds that binarize the continuous attributes (world-GDP mean, the
university-rank cutoff) are derived once per pool and then applied as pure
functions, so flag computation is deterministic and thread-safe.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ConfigError, IntegrityError

GENDERS = ("female", "male", "unknown")
ETHNICITIES = ("white", "non_white", "unknown")
SECTORS = ("academia", "industry", "unknown")

#: Rank value assigned to institutions absent from the rank table.
UNRANKED = 1401

#: The five Boolean scoring features, in canonical order.
SCORING_FEATURES = (
    "female",
    "non_white",
    "geo_protected",
    "low_rank_university",
    "junior",
)

GEO_SUBGROUPS = ("developing", "epscor", "none")

#: Titles resolved to the senior career stage when a pool file carries raw
#: titles instead of the canonical junior/senior labels.
DEFAULT_SENIOR_TITLES = frozenset(
    {
        "associate professor",
        "professor",
        "full professor",
        "distinguished professor",
        "chair",
        "emeritus",
    }
)


@dataclass(frozen=True)
class RawCandidate:
    """A candidate's attributes as ingested, before any binarization.

    ``career_stage`` holds either a canonical label (``junior``/``senior``/
    ``unknown``) or a raw academic title that is resolved against the
    configured senior-title set when flags are computed. ``None`` in an
    optional field means the value was missing from the source file; the
    exclusion pass removes such candidates before flags are derived.
    """

    id: str
    gender: str = "unknown"
    ethnicity: str = "unknown"
    country: Optional[str] = None
    us_state: Optional[str] = None
    university_rank: Optional[int] = None
    career_stage: str = "unknown"
    h_index: Optional[int] = None
    has_scholar_profile: bool = False
    sector: str = "unknown"
    full_name: Optional[str] = None

    def __post_init__(self) -> None:
        if self.university_rank is not None and not 1 <= self.university_rank <= UNRANKED:
            raise ValueError(
                f"candidate {self.id!r}: university_rank {self.university_rank} "
                f"outside [1, {UNRANKED}]"
            )
        if self.h_index is not None and self.h_index < 0:
            raise ValueError(f"candidate {self.id!r}: negative h_index")
        if self.us_state is not None and self.country != "US":
            raise ValueError(
                f"candidate {self.id!r}: us_state set but country is {self.country!r}"
            )


@dataclass(frozen=True)
class ThresholdConfig:
    """How pool cutoffs are computed.

    ``rank_cutoff_mode`` is ``pool_mean`` (cutoff = mean university rank of
    the candidate pool, the default) or ``fixed`` (cutoff =
    ``fixed_rank_cutoff``).
    """

    rank_cutoff_mode: str = "pool_mean"
    fixed_rank_cutoff: Optional[float] = None
    senior_titles: frozenset[str] = DEFAULT_SENIOR_TITLES

    def __post_init__(self) -> None:
        if self.rank_cutoff_mode not in ("pool_mean", "fixed"):
            raise ConfigError(
                f"unknown rank_cutoff_mode {self.rank_cutoff_mode!r}; "
                "expected 'pool_mean' or 'fixed'"
            )
        if self.rank_cutoff_mode == "fixed":
            if self.fixed_rank_cutoff is None:
                raise ConfigError("rank_cutoff_mode 'fixed' requires fixed_rank_cutoff")
            if not 1 < self.fixed_rank_cutoff < UNRANKED:
                raise ConfigError(
                    f"fixed_rank_cutoff must lie in (1, {UNRANKED}), "
                    f"got {self.fixed_rank_cutoff}"
                )


@dataclass(frozen=True)
class PoolThresholds:
    """Pool-level cutoffs used to binarize candidate attributes."""

    gdp_mean: float
    developed_countries: frozenset[str]
    epscor_states: frozenset[str]
    rank_cutoff: float
    senior_titles: frozenset[str] = DEFAULT_SENIOR_TITLES
    #: Set when every candidate in the pool was unranked; the rank rule then
    #: protects everyone instead of nobody.
    all_unranked: bool = False


@dataclass(frozen=True)
class ProtectedFlags:
    """The five Boolean scoring features plus a reporting-only geo refinement.

    ``geo_subgroup`` records whether geographic protection came from a
    developing country or an EPSCoR state; it never enters the diversity
    score and is ``none`` exactly when ``geo_protected`` is false.
    """

    female: bool
    non_white: bool
    geo_protected: bool
    low_rank_university: bool
    junior: bool
    geo_subgroup: str = field(default="none")

    def __post_init__(self) -> None:
        if self.geo_subgroup not in GEO_SUBGROUPS:
            raise ValueError(f"unknown geo_subgroup {self.geo_subgroup!r}")
        if (self.geo_subgroup != "none") != self.geo_protected:
            raise ValueError(
                "geo_subgroup must be 'developing' or 'epscor' iff geo_protected"
            )


def resolve_career_stage(value: str, senior_titles: Iterable[str] = DEFAULT_SENIOR_TITLES) -> str:
    """Map a career-stage cell to ``junior``, ``senior``, or ``unknown``.

    The canonical labels pass through; any other non-empty string is treated
    as an academic title: senior when it appears in ``senior_titles``
    (case-insensitive), junior otherwise.
    """
    norm = value.strip().lower()
    if norm in ("", "unknown"):
        return "unknown"
    if norm in ("junior", "senior"):
        return norm
    return "senior" if norm in {t.lower() for t in senior_titles} else "junior"


def derive_thresholds(
    gdp_table: Mapping[str, float],
    epscor_states: Iterable[str],
    pool: Sequence[RawCandidate],
    config: ThresholdConfig = ThresholdConfig(),
) -> PoolThresholds:
    """Compute the cutoffs for a candidate pool.

    The GDP mean is the arithmetic mean over the country table; countries at
    or above the mean are classified developed (only below-average GDP marks
    a country as protected). The rank cutoff defaults to the mean university
    rank of the pool itself; a fixed cutoff can be configured instead.

    A pool in which every candidate is unranked makes the pool-mean rule
    vacuous; in that case the cutoff degenerates to the unranked value, a
    warning is emitted, and all candidates are treated as low-rank protected.
    """
    if not gdp_table:
        raise ConfigError("GDP table is empty")
    if not pool:
        raise ConfigError("candidate pool is empty; cannot derive thresholds")
    for candidate in pool:
        if candidate.university_rank is None:
            raise IntegrityError(
                f"candidate {candidate.id!r} has no university rank; "
                "apply exclusions before deriving thresholds"
            )

    gdp_mean = sum(gdp_table.values()) / len(gdp_table)
    developed = frozenset(c for c, gdp in gdp_table.items() if gdp >= gdp_mean)

    all_unranked = False
    if config.rank_cutoff_mode == "fixed":
        rank_cutoff = float(config.fixed_rank_cutoff)  # type: ignore[arg-type]
    else:
        ranks = [c.university_rank for c in pool]
        rank_cutoff = sum(ranks) / len(ranks)
        if all(r == UNRANKED for r in ranks):
            all_unranked = True
            warnings.warn(
                f"every candidate is unranked (rank {UNRANKED}); treating the "
                "whole pool as low-rank protected",
                stacklevel=2,
            )

    return PoolThresholds(
        gdp_mean=gdp_mean,
        developed_countries=developed,
        epscor_states=frozenset(s.upper() for s in epscor_states),
        rank_cutoff=rank_cutoff,
        senior_titles=config.senior_titles,
        all_unranked=all_unranked,
    )


def to_protected_flags(candidate: RawCandidate, thresholds: PoolThresholds) -> ProtectedFlags:
    """Binarize one candidate's attributes against pool thresholds.

    US candidates are judged geographically by EPSCoR state membership;
    everyone else by whether their country sits below the world-GDP mean.
    Candidates with unknown gender, ethnicity, or career stage must not reach
    this point; they indicate a missing exclusion pass upstream.
    """
    if candidate.gender == "unknown":
        raise IntegrityError(f"candidate {candidate.id!r} has unknown gender")
    if candidate.ethnicity == "unknown":
        raise IntegrityError(f"candidate {candidate.id!r} has unknown ethnicity")
    stage = resolve_career_stage(candidate.career_stage, thresholds.senior_titles)
    if stage == "unknown":
        raise IntegrityError(f"candidate {candidate.id!r} has unknown career stage")
    if candidate.country is None:
        raise IntegrityError(f"candidate {candidate.id!r} has no country")
    if candidate.university_rank is None:
        raise IntegrityError(f"candidate {candidate.id!r} has no university rank")

    if candidate.country == "US":
        in_epscor = candidate.us_state is not None and candidate.us_state in thresholds.epscor_states
        geo_protected = in_epscor
        geo_subgroup = "epscor" if in_epscor else "none"
    else:
        geo_protected = candidate.country not in thresholds.developed_countries
        geo_subgroup = "developing" if geo_protected else "none"

    low_rank = candidate.university_rank > thresholds.rank_cutoff or thresholds.all_unranked

    return ProtectedFlags(
        female=candidate.gender == "female",
        non_white=candidate.ethnicity == "non_white",
        geo_protected=geo_protected,
        low_rank_university=low_rank,
        junior=stage == "junior",
        geo_subgroup=geo_subgroup,
    )


def diversity_score(flags: ProtectedFlags) -> int:
    """Sum of the five Boolean scoring features; ranges over [0, 5]."""
    return sum(getattr(flags, name) for name in SCORING_FEATURES)
