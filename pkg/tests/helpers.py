"""Shared builders, fixtures, and independent reference implementations.

The reference implementations here deliberately use different data
structures and algorithms than the production code (eager removal instead
of lazy cursors, itertools enumeration instead of the compiled kernel) so
that agreement between the two routes is meaningful evidence.
"""

from __future__ import annotations

import itertools
import random
from typing import Optional, Sequence

from fairform.profiles import SCORING_FEATURES, ProtectedFlags
from fairform.selection import ScoredCandidate, scored


def make_flags(
    female: bool = False,
    non_white: bool = False,
    geo: Optional[str] = None,
    low_rank: bool = False,
    junior: bool = False,
) -> ProtectedFlags:
    """Flags builder; ``geo`` is None, 'developing', or 'epscor'."""
    return ProtectedFlags(
        female=female,
        non_white=non_white,
        geo_protected=geo is not None,
        low_rank_university=low_rank,
        junior=junior,
        geo_subgroup=geo or "none",
    )


def rand_flags(rng: random.Random, p: float = 0.5) -> ProtectedFlags:
    geo = rng.choice((None, "developing", "epscor")) if rng.random() < p else None
    return make_flags(
        female=rng.random() < p,
        non_white=rng.random() < p,
        geo=geo,
        low_rank=rng.random() < p,
        junior=rng.random() < p,
    )


def rand_pool(rng: random.Random, size: int, h_max: int = 0, p: float = 0.5) -> list[ScoredCandidate]:
    return [
        scored(f"c{i:04d}", rand_flags(rng, p), rng.randint(0, h_max) if h_max else 0)
        for i in range(size)
    ]


#: Known-good (d_gain, ul_pct, y_pct, f) quadruples used as fixed oracles
#: for the metric identities (UL + Y = 100, F = harmonic mean of D_G and Y).
REFERENCE_ROWS = (
    (67.18, 32.88, 67.12, 67.15),
    (55.50, 20.67, 79.33, 65.31),
    (50.51, 17.47, 82.53, 62.67),
    (53.00, -2.42, 102.42, 69.85),
    (46.80, 55.37, 44.63, 45.69),
    (50.56, 27.99, 72.01, 59.41),
)


def committee_23() -> list[ScoredCandidate]:
    """A 23-member committee with hand-counted group membership.

    Column sums: 2 female, 7 non-white, 8 junior, 1 developing-country,
    0 EPSCoR, 6 low-rank. female 2/23 = 8.70%.
    """
    overrides = {
        1: dict(female=True, non_white=True),
        2: dict(female=True, junior=True),
        3: dict(non_white=True, junior=True),
        4: dict(non_white=True, low_rank=True),
        5: dict(non_white=True),
        6: dict(non_white=True),
        7: dict(non_white=True),
        8: dict(non_white=True),
        9: dict(junior=True, low_rank=True),
        10: dict(junior=True),
        11: dict(junior=True),
        12: dict(junior=True),
        13: dict(junior=True),
        14: dict(junior=True),
        15: dict(geo="developing", low_rank=True),
        16: dict(low_rank=True),
        17: dict(low_rank=True),
        18: dict(low_rank=True),
    }
    return [
        scored(f"m{i:02d}", make_flags(**overrides.get(i, {})))
        for i in range(1, 24)
    ]


def utility_fixture_213() -> list[ScoredCandidate]:
    """213 members whose mean h-index is 24.55 to two decimals."""
    hs = [25] * 117 + [24] * 96
    return [scored(f"u{i:03d}", make_flags(), h) for i, h in enumerate(hs)]


def reference_max_subset_score(scores: Sequence[int], n: int) -> int:
    """Exhaustive subset maximum via itertools; independent of the kernels."""
    n = min(n, len(scores))
    if n <= 0:
        return 0
    return max(sum(c) for c in itertools.combinations(scores, n))


def reference_mga(
    pool: Sequence[ScoredCandidate],
    n: int,
    seed: int,
    feature_order: Sequence[str] = SCORING_FEATURES,
) -> tuple[str, ...]:
    """Round-robin selection re-derived with eager removal from every queue."""
    rng = random.Random(seed)
    tags = {c.id: rng.random() for c in pool}
    queues = {
        f: sorted(pool, key=lambda c, f=f: (-getattr(c.flags, f), tags[c.id]))
        for f in feature_order
    }
    target = min(n, len(pool))
    chosen: list[str] = []
    turn = 0
    while len(chosen) < target:
        f = feature_order[turn % len(feature_order)]
        pick = queues[f][0]
        chosen.append(pick.id)
        for q in queues.values():
            q.remove(pick)
        turn += 1
    return tuple(chosen)
