"""Ready-made scenarios on the standard 100-unit segment.

All presets share the default membrane parameters, unit diffusion, a
101-node grid, and a 500 ms horizon at dt = 0.01.  The drive is a step
current on the left tenth of the domain; the two-neuron preset adds
one-way coupling sensed on the right tenth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grid import SpatialConfig, StepProfile, build_grid, sample_step_profile
from .model import ModelParams
from .network import NetworkSpec, NetworkState, TimeGrid

_DOMAIN = SpatialConfig(a=0.0, b=100.0, node_count=101, diffusion=1.0)
_TIME = TimeGrid(dt=0.01, t_end=500.0, record_stride=1)
_DRIVE_FRACTION = 0.1


@dataclass(frozen=True)
class Preset:
    """A complete scenario: network, initial data, horizon, and probes."""

    name: str
    description: str
    spec: NetworkSpec
    init_values: tuple
    time_grid: TimeGrid
    probes: tuple
    snapshot_times: tuple

    def initial_state(self) -> NetworkState:
        """Fresh spatially uniform initial state (safe to mutate)."""
        return NetworkState.constant(self.spec.neuron_count,
                                     self.spec.spatial.node_count,
                                     self.init_values)


def single_drive_spec(i0: float, model: ModelParams = ModelParams(),
                      domain: SpatialConfig = _DOMAIN) -> NetworkSpec:
    """One uncoupled neuron driven by ``i0`` on the left tenth of the domain."""
    grid = build_grid(domain)
    profile = StepProfile(high_value=float(i0),
                          boundary_fraction=_DRIVE_FRACTION, high_side="left")
    current = sample_step_profile(profile, grid)[None, :]
    coupling = np.zeros((1, 1, domain.node_count))
    return NetworkSpec(model, domain, current, coupling)


def _single(name, i0, init, probes, snaps, description):
    return Preset(name=name, description=description,
                  spec=single_drive_spec(i0),
                  init_values=(tuple(init),), time_grid=_TIME,
                  probes=tuple(probes), snapshot_times=tuple(snaps))


def _pair(name, i0, description):
    grid = build_grid(_DOMAIN)
    nx = _DOMAIN.node_count
    current = np.zeros((2, nx))
    current[0] = sample_step_profile(
        StepProfile(high_value=float(i0), boundary_fraction=_DRIVE_FRACTION,
                    high_side="left"), grid)
    coupling = np.zeros((2, 2, nx))
    coupling[1, 0] = sample_step_profile(
        StepProfile(high_value=1.0, boundary_fraction=_DRIVE_FRACTION,
                    high_side="right"), grid)
    spec = NetworkSpec(ModelParams(), _DOMAIN, current, coupling)
    return Preset(name=name, description=description, spec=spec,
                  init_values=((1.0, 1.0, 1.0, 1.0), (0.0, 0.0, 0.0, 0.0)),
                  time_grid=_TIME, probes=(0, 100), snapshot_times=(200.0, 250.0))


_BUILDERS = {
    "fig2": lambda: _single(
        "fig2", 5.2, (1.0, 1.0, 1.0, 1.0), (0, 100), (500.0,),
        "relaxation to a steady state just below the oscillation onset"),
    "fig3a": lambda: _single(
        "fig3a", 5.3, (1.0, 1.0, 1.0, 1.0), (0, 100), (500.0,),
        "tonic periodic waves just above the oscillation onset"),
    "fig3b": lambda: _single(
        "fig3b", 5.3, (0.0, 0.0, 0.0, 0.0), (0, 100), (500.0,),
        "coexisting steady state at the same drive, reached from rest"),
    "fig4": lambda: _single(
        "fig4", 130.0, (1.0, 1.0, 1.0, 1.0), (0, 8, 100), (200.0, 250.0),
        "strong drive: tonic spiking at the drive site, grouped wave "
        "trains downstream"),
    "fig5": lambda: _single(
        "fig5", 145.0, (1.0, 1.0, 1.0, 1.0), (0, 10, 100), (200.0, 250.0),
        "stronger drive: waves fail to propagate, the far end stays quiet"),
    "fig6": lambda: _pair(
        "fig6", 130.0,
        "two neurons: the first drives the second through one-way "
        "coupling sensed on the right tenth of the domain"),
}


def preset_names() -> tuple:
    return tuple(sorted(_BUILDERS))


def preset(name: str) -> Preset:
    """Build a named scenario; repeated calls give equal, fresh objects."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        known = ", ".join(preset_names())
        raise ConfigError(f"unknown preset {name!r}; expected one of {known}") from None
    return builder()
