"""Backend selection for the hot kernels.

The compiled ``_core`` extension is used when it imports; otherwise the
pure-Python ``_pycore`` twin.  Setting ``RANDDEG_PURE_PYTHON=1`` forces the
fallback (benchmarks and equivalence tests use this).
"""
import os

from . import _pycore

if os.environ.get("RANDDEG_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pycore
else:
    try:
        from . import _core as _impl
    except ImportError:  # extension not built
        _impl = _pycore

BACKEND = "compiled" if _impl is not _pycore else "python"

SwitchChain = _impl.SwitchChain
mixing_steps = _impl.mixing_steps
eccentricities = _impl.eccentricities
connected_subset_stats = _impl.connected_subset_stats
sweep_min_cond = _impl.sweep_min_cond
MAX_SUBSET_VERTICES = _impl.MAX_SUBSET_VERTICES


def backends():
    """Mapping of available backend names to kernel modules."""
    found = {"python": _pycore}
    try:
        from . import _core
    except ImportError:
        pass
    else:
        found["compiled"] = _core
    return found
