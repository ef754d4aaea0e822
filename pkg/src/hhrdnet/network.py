"""Container types for network simulations.

State is stored as one C-contiguous float64 array of shape
``(neurons, 4, nodes)`` whose component axis orders V, n, m, h.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .grid import SpatialConfig
from .model import ModelParams

COMPONENTS = ("V", "n", "m", "h")


@dataclass(frozen=True)
class NetworkSpec:
    """Immutable description of a coupled network on a shared grid.

    Attributes
    ----------
    model : ModelParams
    spatial : SpatialConfig
    current : ndarray, shape (neurons, nodes)
        Applied current profile per neuron, frozen in time.
    coupling : ndarray, shape (neurons, neurons, nodes)
        ``coupling[i, j, k]`` weights the drive neuron ``i`` receives
        from neuron ``j`` at node ``k``.  All weights are nonnegative
        and the diagonal is zero (no self-coupling).
    """

    model: ModelParams
    spatial: SpatialConfig
    current: np.ndarray
    coupling: np.ndarray

    def __post_init__(self):
        cur = np.array(self.current, dtype=float, order="C")
        coup = np.array(self.coupling, dtype=float, order="C")
        nx = self.spatial.node_count
        if cur.ndim != 2 or cur.shape[1] != nx:
            raise ConfigError("current must have shape (neurons, node_count)")
        nn = cur.shape[0]
        if nn < 1:
            raise ConfigError("network needs at least one neuron")
        if coup.shape != (nn, nn, nx):
            raise ConfigError("coupling must have shape (neurons, neurons, node_count)")
        if not np.all(np.isfinite(cur)):
            raise ConfigError("current must be finite")
        if np.any(coup < 0.0) or not np.all(np.isfinite(coup)):
            raise ConfigError("coupling weights must be finite and nonnegative")
        if np.any(coup[np.arange(nn), np.arange(nn), :] != 0.0):
            raise ConfigError("self-coupling weights must be zero")
        cur.flags.writeable = False
        coup.flags.writeable = False
        object.__setattr__(self, "current", cur)
        object.__setattr__(self, "coupling", coup)

    @property
    def neuron_count(self) -> int:
        return self.current.shape[0]

    @property
    def has_coupling(self) -> bool:
        return bool(np.any(self.coupling != 0.0))


class NetworkState:
    """Mutable network state array with named accessors.

    ``data`` has shape ``(neurons, 4, nodes)``; gates are expected to
    stay in [0, 1] and are monitored at run time rather than enforced
    here.
    """

    def __init__(self, data):
        arr = np.array(data, dtype=float, order="C")
        if arr.ndim != 3 or arr.shape[1] != len(COMPONENTS):
            raise DomainError("state must have shape (neurons, 4, nodes)")
        self.data = arr

    @classmethod
    def constant(cls, neuron_count, node_count, values) -> "NetworkState":
        """Spatially uniform state.

        ``values`` is one (V, n, m, h) quadruple shared by all neurons,
        or a sequence of one quadruple per neuron.
        """
        vals = np.asarray(values, dtype=float)
        if vals.shape == (len(COMPONENTS),):
            vals = np.tile(vals, (neuron_count, 1))
        if vals.shape != (neuron_count, len(COMPONENTS)):
            raise DomainError(
                "values must be one (V, n, m, h) quadruple or one per neuron")
        return cls(np.repeat(vals[:, :, None], node_count, axis=2))

    @property
    def neuron_count(self) -> int:
        return self.data.shape[0]

    @property
    def node_count(self) -> int:
        return self.data.shape[2]

    @property
    def v(self) -> np.ndarray:
        return self.data[:, 0]

    @property
    def n(self) -> np.ndarray:
        return self.data[:, 1]

    @property
    def m(self) -> np.ndarray:
        return self.data[:, 2]

    @property
    def h(self) -> np.ndarray:
        return self.data[:, 3]

    def copy(self) -> "NetworkState":
        return NetworkState(self.data)


@dataclass(frozen=True)
class TimeGrid:
    """Fixed-step time axis from 0 to t_end.

    ``t_end`` must be an integer multiple of ``dt`` (to one part in
    1e6); every ``record_stride``-th step is recorded, step 0 included.
    """

    dt: float = 0.01
    t_end: float = 500.0
    record_stride: int = 1

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ConfigError("dt must be strictly positive")
        if self.t_end < 0.0:
            raise ConfigError("t_end must be nonnegative")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ConfigError("record_stride must be an integer >= 1")
        steps = round(self.t_end / self.dt)
        if abs(steps * self.dt - self.t_end) > 1.0e-6 * max(self.t_end, self.dt):
            raise ConfigError("t_end must be an integer multiple of dt")

    @property
    def n_steps(self) -> int:
        return round(self.t_end / self.dt)


@dataclass
class StateExtrema:
    """Per-neuron voltage extrema and global gate extrema over a run.

    Voltage fields are arrays of length ``neurons``; each extremum
    carries the time and node where it was attained.  Gate extrema are
    global across neurons and gates, located by
    ``(time, neuron, gate, node)``.
    """

    v_min: np.ndarray
    v_max: np.ndarray
    v_min_time: np.ndarray
    v_max_time: np.ndarray
    v_min_node: np.ndarray
    v_max_node: np.ndarray
    gate_min: float
    gate_max: float
    gate_min_at: tuple
    gate_max_at: tuple


@dataclass
class TrajectoryRecord:
    """Everything a simulation run produces.

    ``series`` has shape ``(samples, neurons, probes, 4)`` holding the
    V, n, m, h values at each probe node; ``snapshots`` has shape
    ``(snapshot_count, neurons, 4, nodes)``.  ``verdicts`` maps monitor
    names to their outcomes and ``labels`` holds one regime label per
    neuron when classification ran.
    """

    spec: NetworkSpec
    grid_x: np.ndarray
    probe_nodes: tuple
    times: np.ndarray
    series: np.ndarray
    snapshot_times: np.ndarray
    snapshots: np.ndarray
    scheme: str
    dt: float
    extrema: StateExtrema | None = None
    verdicts: dict = field(default_factory=dict)
    labels: list = field(default_factory=list)

    @property
    def neuron_count(self) -> int:
        return self.series.shape[1]

    @property
    def probe_x(self) -> np.ndarray:
        return self.grid_x[list(self.probe_nodes)]

    def probe_series(self, neuron, node, component="V"):
        """Time series of one component at one probed node.

        Returns ``(times, values)``; raises DomainError if the node was
        not probed or the component name is unknown.
        """
        try:
            p = self.probe_nodes.index(node)
        except ValueError:
            raise DomainError(f"node {node} was not probed") from None
        try:
            c = COMPONENTS.index(component)
        except ValueError:
            raise DomainError(f"unknown component {component!r}") from None
        return self.times, self.series[:, neuron, p, c]
