"""Deterministic sub-seed derivation.

All randomness in a run flows from a single master seed. Every consumer
(each algorithm, the Monte-Carlo baseline, the pool generator) gets its own
sub-seed derived by hashing the master seed together with a fixed label, so
adding a new consumer never perturbs the draws of existing ones.
"""

from __future__ import annotations

import hashlib

MASK64 = (1 << 64) - 1


def derive_seed(master: int, label: str) -> int:
    """Return a 64-bit sub-seed for ``label``, stable across runs and platforms."""
    digest = hashlib.sha256(f"{master}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & MASK64
