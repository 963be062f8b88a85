"""Hot-kernel backend selection.

The compiled extension is preferred when it was built; otherwise the
pure-Python backend takes over transparently. Setting the environment
variable ``FAIRFORM_PURE`` (to any non-empty value) forces the pure backend
even when the extension is present, useful for benchmarking and debugging.
"""

from __future__ import annotations

import os

from . import pure

_impl = pure
BACKEND = "pure"

if not os.environ.get("FAIRFORM_PURE"):
    try:
        from . import _speedups as _ext  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _ext
        BACKEND = "compiled"

max_subset_score = _impl.max_subset_score
rsa_trial_totals = _impl.rsa_trial_totals


def backends() -> dict[str, object]:
    """Available backend modules keyed by name (for tests and benchmarks)."""
    found: dict[str, object] = {"pure": pure}
    try:
        from . import _speedups  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        found["compiled"] = _speedups
    return found
