"""Selection between the compiled stepping core and the numpy fallback.

The compiled extension is used when importable; ``select`` switches
explicitly.  Both backends expose the same kernel functions and, given
the same inputs, perform the same floating-point update sequence.
"""

from __future__ import annotations

import numpy as np

from . import _kernels_py
from .errors import ConfigError

try:
    from . import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

HAS_COMPILED = _kernels_c is not None

_active = _kernels_c if HAS_COMPILED else _kernels_py
_active_name = "compiled" if HAS_COMPILED else "python"


def select(name: str = "auto") -> str:
    """Choose the stepping backend.

    ``"compiled"`` requires the extension, ``"python"`` forces the numpy
    fallback, ``"auto"`` prefers the extension.  Returns the name of the
    backend now active.
    """
    global _active, _active_name
    if name == "auto":
        name = "compiled" if HAS_COMPILED else "python"
    if name == "compiled":
        if not HAS_COMPILED:
            raise ConfigError("compiled backend requested but the extension is not built")
        _active, _active_name = _kernels_c, "compiled"
    elif name == "python":
        _active, _active_name = _kernels_py, "python"
    else:
        raise ConfigError(f"unknown backend {name!r}; expected auto, compiled, or python")
    return _active_name


def active_name() -> str:
    return _active_name


def kernels():
    return _active


def make_workspace(neuron_count: int, node_count: int) -> dict:
    """Preallocated scratch arrays for the stepping kernels."""
    s3 = (neuron_count, 4, node_count)
    s2 = (neuron_count, node_count)
    ws = {name: np.empty(s3) for name in ("k1", "k2", "k3", "k4", "yt")}
    ws.update({name: np.empty(s2) for name in ("kv1", "kv2", "kv3", "kv4", "vt", "gam")})
    return ws


def make_extrema_buffers(neuron_count: int) -> dict:
    """Running-extrema accumulators consumed by ``scan_state``."""
    vext = np.empty((4, neuron_count))
    vext[0] = np.inf
    vext[1] = -np.inf
    vext[2:] = 0.0
    gext = np.array([np.inf, -np.inf, 0.0, 0.0])
    return {
        "vext": vext,
        "vnode": np.zeros((2, neuron_count), dtype=np.intp),
        "gext": gext,
        "gloc": np.zeros(6, dtype=np.intp),
    }
