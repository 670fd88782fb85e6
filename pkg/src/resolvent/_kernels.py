"""Kernel backend selection.

The compiled ``_speedups`` extension is used when it imports; otherwise the
pure-Python ``_pure`` module. Setting ``RESOLVENT_PURE=1`` forces the
fallback, which the test-suite and the benchmark use to compare both.
"""
import os

from . import _pure

try:
    if os.environ.get("RESOLVENT_PURE"):
        raise ImportError("pure backend requested")
    from . import _speedups as _impl
except ImportError:
    _impl = _pure

BACKEND = _impl.BACKEND
aberth = _impl.aberth
track_segment = _impl.track_segment
closure = _impl.closure
cycle_types = _impl.cycle_types


def available_backends():
    """Map backend name to module for every importable backend."""
    out = {"pure": _pure}
    try:
        from . import _speedups
    except ImportError:
        pass
    else:
        out["compiled"] = _speedups
    return out
