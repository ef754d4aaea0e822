"""Networks of excitable reaction-diffusion neurons on a 1-D segment.

Simulates coupled Hodgkin-Huxley cables with zero-flux boundaries and
excitatory sigmoid coupling, monitors the trapping invariants of the
dynamics (gates in [0, 1], voltage inside a computable interval) at run
time, classifies the long-time regime per neuron, and ships presets,
a bisection sweep for the oscillation onset, and a CSV/SVG emitting
command line tool.
"""

from . import backend
from .analysis import (ClassifierParams, ProbeStats, Regime, RegimeLabel,
                       RegionBounds, SpikeTrain, Verdict, check_gate_bounds,
                       check_voltage_region, check_voltage_regions,
                       classify_regime, classify_timeseries, detect_bursts,
                       detect_spikes, first_spike_times_per_burst,
                       mixed_mode_counts, region_bounds)
from .config import RunConfig, load_config, parse_config
from .errors import (BlowUpError, BracketError, ConfigError,
                     DegenerateRateError, DomainError, HHError)
from .grid import (SpatialConfig, StepProfile, build_grid, laplacian_neumann,
                   sample_step_profile)
from .integrate import (gate_exact_step, network_rhs, rk4_step, simulate,
                        split_step)
from .model import (GateKind, ModelParams, PointState, coupling_input,
                    gamma_sigmoid, gate_steady, nernst_potential, rate_alpha,
                    rate_beta, reaction_gate, reaction_v)
from .network import (COMPONENTS, NetworkSpec, NetworkState, StateExtrema,
                      TimeGrid, TrajectoryRecord)
from .presets import Preset, preset, preset_names, single_drive_spec
from .sweep import SweepResult, sweep_bifurcation

__version__ = "0.1.0"

__all__ = [
    "BlowUpError", "BracketError", "COMPONENTS", "ClassifierParams",
    "ConfigError", "DegenerateRateError", "DomainError", "GateKind",
    "HHError", "ModelParams", "NetworkSpec", "NetworkState", "PointState",
    "Preset", "ProbeStats", "Regime", "RegimeLabel", "RegionBounds",
    "RunConfig", "SpatialConfig", "SpikeTrain", "StateExtrema", "StepProfile",
    "SweepResult", "TimeGrid", "TrajectoryRecord", "Verdict", "backend",
    "build_grid", "check_gate_bounds", "check_voltage_region",
    "check_voltage_regions", "classify_regime", "classify_timeseries",
    "coupling_input", "detect_bursts", "detect_spikes",
    "first_spike_times_per_burst", "gamma_sigmoid", "gate_exact_step",
    "gate_steady", "laplacian_neumann", "load_config", "mixed_mode_counts",
    "nernst_potential", "network_rhs", "parse_config", "preset",
    "preset_names", "rate_alpha", "rate_beta", "reaction_gate", "reaction_v",
    "region_bounds", "rk4_step", "sample_step_profile", "simulate",
    "single_drive_spec", "split_step", "sweep_bifurcation",
]
