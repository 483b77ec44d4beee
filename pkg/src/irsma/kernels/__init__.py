"""Kernel backend selection.

Prefers the compiled extension, falls back to the numpy implementation.
Set IRSMA_FORCE_PURE=1 to skip the extension (benchmarking, debugging).
"""

import os

from . import _pure

if os.environ.get("IRSMA_FORCE_PURE", "") not in ("", "0"):
    _impl = _pure
else:
    try:
        from . import _fast as _impl
    except ImportError:
        _impl = _pure

BACKEND_NAME = _impl.BACKEND_NAME

evaluate_levels = _impl.evaluate_levels
enumerate_weighted_inverse = _impl.enumerate_weighted_inverse
ao_sweeps = _impl.ao_sweeps


def get_backend() -> str:
    """Name of the active kernel backend ("cython" or "pure")."""
    return BACKEND_NAME
