"""Pure-Python implementations of the hot kernels.

These are the import-time fallback for the compiled extension and the
reference the extension is tested against. Both backends implement the same
arithmetic, including the same splitmix64 generator, so results are
bit-identical regardless of which one is active.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(state: int) -> tuple[int, int]:
    """Advance the splitmix64 state once; returns (output, new_state)."""
    state = (state + _GOLDEN) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31), state


def _trial_state(seed: int, trial: int) -> int:
    """Derive an independent stream state for one trial from the master seed."""
    out, _ = _splitmix64((seed ^ ((trial * _GOLDEN) & _MASK64)) & _MASK64)
    return out


def max_subset_score(scores: Sequence[int], n: int) -> int:
    """Exhaustive maximum total score over all n-subsets of ``scores``.

    Plain enumeration, deliberately independent of any sorting-based
    selection logic it is used to verify.
    """
    if n <= 0:
        return 0
    n = min(n, len(scores))
    return max(map(sum, combinations(scores, n)))


def rsa_trial_totals(
    flags: bytes,
    n_candidates: int,
    n_groups: int,
    h_index: Sequence[int],
    n: int,
    trials: int,
    seed: int,
) -> tuple[list[int], int]:
    """Accumulate totals over repeated uniform n-subsets of a pool.

    ``flags`` is a row-major 0/1 byte matrix (candidate-major, ``n_groups``
    columns). Each trial draws n of ``n_candidates`` without replacement via
    a partial Fisher-Yates shuffle seeded independently per trial, then adds
    the drawn members' group flags and h-indices into running integer totals.

    Returns ``(group_counts, h_total)`` where ``group_counts[g]`` is the
    number of (trial, member) pairs carrying flag ``g``.
    """
    n = min(n, n_candidates)
    counts = [0] * n_groups
    h_total = 0
    for trial in range(trials):
        state = _trial_state(seed, trial)
        idx = list(range(n_candidates))
        for i in range(n):
            r, state = _splitmix64(state)
            j = i + r % (n_candidates - i)
            idx[i], idx[j] = idx[j], idx[i]
            member = idx[i]
            h_total += h_index[member]
            base = member * n_groups
            for g in range(n_groups):
                counts[g] += flags[base + g]
    return counts, h_total
