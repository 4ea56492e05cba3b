"""Optional numba acceleration.

Set ``COPKIT_DISABLE_NUMBA=1`` to run every kernel as plain Python over
numpy arrays. Both paths execute the same source and must agree
bit-for-bit; the benchmark in ``benchmarks/`` compares their speed.
"""

from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

HAS_NUMBA = numba is not None
DISABLED = os.environ.get("COPKIT_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
USE_NUMBA = HAS_NUMBA and not DISABLED


def njit(func=None, **options):
    """``numba.njit(cache=True)`` when enabled, otherwise the identity."""

    def wrap(f):
        if not USE_NUMBA:
            return f
        return numba.njit(cache=True, **options)(f)

    return wrap if func is None else wrap(func)
