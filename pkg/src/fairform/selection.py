"""Group-formation algorithms.

Three seeded, reproducible strategies over a pool of scored candidates:

* ``uga_select`` - univariate greedy: one priority queue ordered by total
  diversity score; take the top n.
* ``mga_select`` - multivariate greedy: one priority queue per scoring
  feature, each ordered by that feature's Boolean weight alone; a round
  robin over the queues picks the best not-yet-selected candidate from each
  in turn, so no single feature can crowd out the others.
* ``rsa_select`` - the random baseline: a uniform n-subset.

Ties are broken by a random tag drawn once per candidate from the seed, so
a draw is replayable and identical tie semantics apply across all queues.
``brute_force_max_score`` is the exhaustive oracle used to verify the
univariate strategy; it enumerates subsets outright and shares no logic
with the selection path.
"""

from __future__ import annotations

import math
import random
from array import array
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _kernels
from .errors import BudgetExceededError
from .profiles import (
    SCORING_FEATURES,
    PoolThresholds,
    ProtectedFlags,
    RawCandidate,
    diversity_score,
    to_protected_flags,
)

ALGORITHMS = ("uga", "mga", "rsa")

#: Default enumeration budget for the brute-force oracle.
DEFAULT_ORACLE_BUDGET = 2_000_000


@dataclass(frozen=True)
class ScoredCandidate:
    """A candidate reduced to what selection needs: flags, score, utility."""

    id: str
    flags: ProtectedFlags
    score: int
    h_index: int

    def __post_init__(self) -> None:
        if self.score != diversity_score(self.flags):
            raise ValueError(
                f"candidate {self.id!r}: score {self.score} does not match flags"
            )


def scored(id: str, flags: ProtectedFlags, h_index: int = 0) -> ScoredCandidate:
    """Build a ScoredCandidate with the score computed from its flags."""
    return ScoredCandidate(id=id, flags=flags, score=diversity_score(flags), h_index=h_index)


def build_scored_pool(
    candidates: Sequence[RawCandidate], thresholds: PoolThresholds
) -> list[ScoredCandidate]:
    """Derive flags and scores for a whole (already filtered) pool."""
    out = []
    for c in candidates:
        flags = to_protected_flags(c, thresholds)
        out.append(scored(c.id, flags, c.h_index if c.h_index is not None else 0))
    return out


@dataclass(frozen=True)
class Selection:
    """An ordered group of chosen candidate ids plus draw provenance.

    ``member_ids`` preserves insertion order: rank order for the univariate
    strategy, round-robin order for the multivariate one, draw order for the
    random baseline. ``shortfall`` is set when fewer than ``size`` candidates
    were available and the whole pool was returned instead.
    """

    member_ids: tuple[str, ...]
    algorithm: str
    seed: int
    size: int
    shortfall: bool = field(default=False)

    def __post_init__(self) -> None:
        if len(set(self.member_ids)) != len(self.member_ids):
            raise ValueError("selection contains duplicate member ids")


def _check_args(pool: Sequence[ScoredCandidate], n: int) -> None:
    if n < 1:
        raise ValueError(f"group size must be >= 1, got {n}")
    if not pool:
        raise ValueError("candidate pool is empty")


def _tags(pool: Sequence[ScoredCandidate], seed: int) -> dict[str, float]:
    """Seed-derived random tie-break tag per candidate, shared by all queues."""
    rng = random.Random(seed)
    return {c.id: rng.random() for c in pool}


def uga_select(pool: Sequence[ScoredCandidate], n: int, seed: int = 0) -> Selection:
    """Select the n candidates with the highest total diversity scores.

    Candidates tied at the boundary score are chosen uniformly at random
    (via the seed), so the multiset of selected scores is seed-independent
    while identities within the boundary tier vary.
    """
    _check_args(pool, n)
    tags = _tags(pool, seed)
    ranked = sorted(pool, key=lambda c: (-c.score, tags[c.id]))
    shortfall = n > len(pool)
    chosen = ranked[: min(n, len(pool))]
    return Selection(
        member_ids=tuple(c.id for c in chosen),
        algorithm="uga",
        seed=seed,
        size=n,
        shortfall=shortfall,
    )


def mga_select(
    pool: Sequence[ScoredCandidate],
    n: int,
    seed: int = 0,
    feature_order: Sequence[str] = SCORING_FEATURES,
    tie_break: str = "random",
) -> Selection:
    """Select n candidates by round robin over one queue per feature.

    Each queue orders the pool by the single feature's Boolean weight
    (protected before unprotected), with ties broken by the shared random
    tag; ``tie_break="total_score"`` instead prefers higher total diversity
    score within a weight tier. The round robin visits queues in
    ``feature_order``, taking the best not-yet-selected candidate from each;
    a candidate chosen from one queue is never chosen again from another.
    """
    _check_args(pool, n)
    unknown = set(feature_order) - set(SCORING_FEATURES)
    if unknown:
        raise ValueError(f"unknown scoring features: {sorted(unknown)}")
    if tie_break not in ("random", "total_score"):
        raise ValueError(f"unknown tie_break {tie_break!r}")

    tags = _tags(pool, seed)

    def queue_key(feature: str):
        if tie_break == "total_score":
            return lambda c: (-getattr(c.flags, feature), -c.score, tags[c.id])
        return lambda c: (-getattr(c.flags, feature), tags[c.id])

    queues = {f: sorted(pool, key=queue_key(f)) for f in feature_order}
    cursors = {f: 0 for f in feature_order}

    target = min(n, len(pool))
    selected: list[str] = []
    selected_set: set[str] = set()
    turn = 0
    while len(selected) < target:
        feature = feature_order[turn % len(feature_order)]
        queue = queues[feature]
        i = cursors[feature]
        while queue[i].id in selected_set:  # lazy removal from this queue
            i += 1
        cursors[feature] = i + 1
        selected.append(queue[i].id)
        selected_set.add(queue[i].id)
        turn += 1

    return Selection(
        member_ids=tuple(selected),
        algorithm="mga",
        seed=seed,
        size=n,
        shortfall=n > len(pool),
    )


def rsa_select(pool: Sequence[ScoredCandidate], n: int, seed: int = 0) -> Selection:
    """Uniform random n-subset of the pool; the no-diversity baseline."""
    _check_args(pool, n)
    rng = random.Random(seed)
    shortfall = n > len(pool)
    chosen = rng.sample(list(pool), min(n, len(pool)))
    return Selection(
        member_ids=tuple(c.id for c in chosen),
        algorithm="rsa",
        seed=seed,
        size=n,
        shortfall=shortfall,
    )


def select(
    algorithm: str, pool: Sequence[ScoredCandidate], n: int, seed: int = 0, **kwargs
) -> Selection:
    """Dispatch to one of the named algorithms (``uga``, ``mga``, ``rsa``)."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    fn = {"uga": uga_select, "mga": mga_select, "rsa": rsa_select}[algorithm]
    return fn(pool, n, seed, **kwargs)


def total_score(selection: Selection, pool: Iterable[ScoredCandidate]) -> int:
    """Sum of diversity scores over the selected members."""
    by_id = {c.id: c for c in pool}
    return sum(by_id[m].score for m in selection.member_ids)


def brute_force_max_score(
    pool: Sequence[ScoredCandidate], n: int, budget: int = DEFAULT_ORACLE_BUDGET
) -> int:
    """Maximum achievable total diversity score over all n-subsets.

    Exhaustive enumeration (the verification oracle for ``uga_select``);
    refuses outright when the number of subsets exceeds ``budget``.
    """
    _check_args(pool, n)
    n = min(n, len(pool))
    n_subsets = math.comb(len(pool), n)
    if n_subsets > budget:
        raise BudgetExceededError(
            f"C({len(pool)}, {n}) = {n_subsets} subsets exceeds the "
            f"enumeration budget of {budget}"
        )
    scores = array("q", (c.score for c in pool))
    return int(_kernels.max_subset_score(scores, n))
