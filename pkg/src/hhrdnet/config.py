"""TOML run configuration: parsing, validation, and assembly.

Sections and keys (all optional; defaults in parentheses):

``[model]``
    Any field of ModelParams, e.g. ``g_na`` (120), ``e_k`` (-12),
    ``s_reversal`` (100), ``lambda_slope`` (20), ``theta_threshold`` (60).
``[spatial]``
    ``a`` (0), ``b`` (100), ``nodes`` (101), ``diffusion`` (1).
``[time]``
    ``dt`` (0.01), ``t_end`` (500), ``record_stride`` (1),
    ``scheme`` ("rk4" or "split").
``[network]``
    ``neurons`` (inferred, else 1); ``init`` (rest, [0,0,0,0]) or
    ``init_<i>`` per neuron; drive ``i0`` with optional ``i0_fraction``
    (0.1), ``i0_side`` ("left"), ``i0_low`` (0).  Unsuffixed drive keys
    apply to neuron 1; ``i0_<i>``-style keys address neuron ``i``.
``[coupling]``
    ``alpha_<i>_<j>`` gives the weight neuron ``i`` receives from
    neuron ``j`` (a step profile like the drive, default side "right"),
    with optional ``_fraction``, ``_side``, ``_low`` suffixes.
``[output]``
    ``directory`` ("out"), ``probes`` (domain endpoints, as positions),
    ``snapshots`` ([t_end]), ``svg`` (false), ``window`` ([250, 500]),
    ``spike_threshold`` (25), ``spike_reset`` (20), ``gap_factor`` (2),
    ``amplitude_cut`` (1), ``isi_cv_max`` (0.1).

Unknown sections or keys are rejected by name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields, replace

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .analysis import ClassifierParams
from .errors import ConfigError
from .grid import SpatialConfig, StepProfile, build_grid, sample_step_profile
from .integrate import SCHEMES
from .model import ModelParams
from .network import NetworkSpec, NetworkState, TimeGrid

_MODEL_KEYS = {f.name for f in fields(ModelParams)}
_SPATIAL_KEYS = {"a", "b", "nodes", "diffusion"}
_TIME_KEYS = {"dt", "t_end", "record_stride", "scheme"}
_OUTPUT_KEYS = {"directory", "probes", "snapshots", "svg", "window",
                "spike_threshold", "spike_reset", "gap_factor",
                "amplitude_cut", "isi_cv_max"}
_SECTIONS = {"model", "spatial", "time", "network", "coupling", "output"}

_DRIVE_KEY = re.compile(r"^i0(?:_(\d+))?(?:_(fraction|side|low))?$")
_INIT_KEY = re.compile(r"^init(?:_(\d+))?$")
_NETWORK_PLAIN = {"neurons"}
_ALPHA_KEY = re.compile(r"^alpha_(\d+)_(\d+)(?:_(fraction|side|low))?$")


def _num(section, key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {key} must be a number")
    return float(value)


def _intval(section, key, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"[{section}] {key} must be an integer")
    return value


def _numlist(section, key, value, length=None):
    if not isinstance(value, list) or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in value):
        raise ConfigError(f"[{section}] {key} must be a list of numbers")
    if length is not None and len(value) != length:
        raise ConfigError(f"[{section}] {key} must have {length} entries")
    return [float(v) for v in value]


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved run: network, schedule, and output options."""

    model: ModelParams
    spatial: SpatialConfig
    time_grid: TimeGrid
    scheme: str
    init_values: tuple
    current: np.ndarray
    coupling: np.ndarray
    probe_nodes: tuple
    snapshot_times: tuple
    classifier: ClassifierParams
    out_dir: str
    svg: bool

    @property
    def neuron_count(self) -> int:
        return len(self.init_values)

    def network_spec(self) -> NetworkSpec:
        return NetworkSpec(self.model, self.spatial, self.current, self.coupling)

    def initial_state(self) -> NetworkState:
        return NetworkState.constant(self.neuron_count,
                                     self.spatial.node_count, self.init_values)

    def echo(self) -> dict:
        """Flat key/value view of the resolved settings, for summaries."""
        out = {}
        for f in fields(ModelParams):
            out[f"model.{f.name}"] = getattr(self.model, f.name)
        for name in ("a", "b", "node_count", "diffusion"):
            out[f"spatial.{name}"] = getattr(self.spatial, name)
        out["time.dt"] = self.time_grid.dt
        out["time.t_end"] = self.time_grid.t_end
        out["time.record_stride"] = self.time_grid.record_stride
        out["time.scheme"] = self.scheme
        out["network.neurons"] = self.neuron_count
        for i, quad in enumerate(self.init_values):
            out[f"network.init_{i + 1}"] = list(quad)
        for i in range(self.neuron_count):
            out[f"network.i0_sup_{i + 1}"] = float(self.current[i].max())
        out["output.probes"] = [int(p) for p in self.probe_nodes]
        out["output.snapshots"] = list(self.snapshot_times)
        return out


def _model_from(section: dict) -> ModelParams:
    unknown = set(section) - _MODEL_KEYS
    if unknown:
        raise ConfigError(f"[model] unknown keys: {', '.join(sorted(unknown))}")
    return ModelParams(**{k: _num("model", k, v) for k, v in section.items()})


def _spatial_from(section: dict) -> SpatialConfig:
    unknown = set(section) - _SPATIAL_KEYS
    if unknown:
        raise ConfigError(f"[spatial] unknown keys: {', '.join(sorted(unknown))}")
    kw = {}
    if "a" in section:
        kw["a"] = _num("spatial", "a", section["a"])
    if "b" in section:
        kw["b"] = _num("spatial", "b", section["b"])
    if "nodes" in section:
        kw["node_count"] = _intval("spatial", "nodes", section["nodes"])
    if "diffusion" in section:
        kw["diffusion"] = _num("spatial", "diffusion", section["diffusion"])
    return SpatialConfig(**kw)


def _time_from(section: dict):
    unknown = set(section) - _TIME_KEYS
    if unknown:
        raise ConfigError(f"[time] unknown keys: {', '.join(sorted(unknown))}")
    kw = {}
    if "dt" in section:
        kw["dt"] = _num("time", "dt", section["dt"])
    if "t_end" in section:
        kw["t_end"] = _num("time", "t_end", section["t_end"])
    if "record_stride" in section:
        kw["record_stride"] = _intval("time", "record_stride",
                                      section["record_stride"])
    scheme = section.get("scheme", "rk4")
    if scheme not in SCHEMES:
        raise ConfigError(f"[time] scheme must be one of {', '.join(SCHEMES)}")
    return TimeGrid(**kw), scheme


def _profile_params(section_name, entries, key_base, default_side):
    """Collect value/fraction/side/low for one step profile."""
    value = entries.get("", 0.0)
    fraction = entries.get("fraction", 0.1)
    side = entries.get("side", default_side)
    low = entries.get("low", 0.0)
    if side not in ("left", "right"):
        raise ConfigError(f"[{section_name}] {key_base}_side must be "
                          f"'left' or 'right'")
    return StepProfile(high_value=value, low_value=low,
                       boundary_fraction=fraction, high_side=side)


def _network_from(section: dict, coupling_section: dict, node_count, grid):
    drives = {}
    inits = {}
    neurons_declared = None
    for key, value in section.items():
        if key in _NETWORK_PLAIN:
            neurons_declared = _intval("network", key, value)
            continue
        m = _DRIVE_KEY.match(key)
        if m is not None:
            idx = int(m.group(1)) - 1 if m.group(1) else 0
            part = m.group(2) or ""
            if part == "side":
                if not isinstance(value, str):
                    raise ConfigError(f"[network] {key} must be a string")
                drives.setdefault(idx, {})[part] = value
            else:
                drives.setdefault(idx, {})[part] = _num("network", key, value)
            continue
        m = _INIT_KEY.match(key)
        if m is not None:
            idx = int(m.group(1)) - 1 if m.group(1) else None
            inits[idx] = tuple(_numlist("network", key, value, length=4))
            continue
        raise ConfigError(f"[network] unknown key: {key}")

    couplings = {}
    for key, value in coupling_section.items():
        m = _ALPHA_KEY.match(key)
        if m is None:
            raise ConfigError(f"[coupling] unknown key: {key}")
        i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
        if i == j:
            raise ConfigError(f"[coupling] {key}: self-coupling is not allowed")
        part = m.group(3) or ""
        if part == "side":
            if not isinstance(value, str):
                raise ConfigError(f"[coupling] {key} must be a string")
            couplings.setdefault((i, j), {})[part] = value
        else:
            couplings.setdefault((i, j), {})[part] = _num("coupling", key, value)

    implied = [idx for idx in drives] + [i for i in inits if i is not None]
    implied += [i for ij in couplings for i in ij]
    neurons = neurons_declared if neurons_declared is not None else (
        max(implied) + 1 if implied else 1)
    if neurons < 1:
        raise ConfigError("[network] neurons must be at least 1")
    for idx in drives:
        if idx >= neurons:
            raise ConfigError(f"[network] drive for neuron {idx + 1} but only "
                              f"{neurons} neurons")
    for idx in inits:
        if idx is not None and idx >= neurons:
            raise ConfigError(f"[network] init for neuron {idx + 1} but only "
                              f"{neurons} neurons")
    for i, j in couplings:
        if i >= neurons or j >= neurons:
            raise ConfigError(f"[coupling] alpha_{i + 1}_{j + 1} but only "
                              f"{neurons} neurons")

    default_init = inits.get(None, (0.0, 0.0, 0.0, 0.0))
    init_values = tuple(inits.get(i, default_init) for i in range(neurons))

    current = np.zeros((neurons, node_count))
    for idx, entries in drives.items():
        profile = _profile_params("network", entries,
                                  f"i0_{idx + 1}", default_side="left")
        current[idx] = sample_step_profile(profile, grid)

    coupling = np.zeros((neurons, neurons, node_count))
    for (i, j), entries in couplings.items():
        profile = _profile_params("coupling", entries,
                                  f"alpha_{i + 1}_{j + 1}", default_side="right")
        coupling[i, j] = sample_step_profile(profile, grid)

    return init_values, current, coupling


def _probe_node(pos, spatial: SpatialConfig, grid):
    idx = int(round((pos - spatial.a) / spatial.spacing))
    if not 0 <= idx < spatial.node_count or not np.isclose(
            grid[idx], pos, atol=0.5 * spatial.spacing + 1e-9, rtol=0.0):
        raise ConfigError(f"probe position {pos:g} is outside the domain")
    return idx


def _output_from(section: dict, spatial, time_grid, grid):
    unknown = set(section) - _OUTPUT_KEYS
    if unknown:
        raise ConfigError(f"[output] unknown keys: {', '.join(sorted(unknown))}")
    out_dir = section.get("directory", "out")
    if not isinstance(out_dir, str):
        raise ConfigError("[output] directory must be a string")
    svg = section.get("svg", False)
    if not isinstance(svg, bool):
        raise ConfigError("[output] svg must be a boolean")
    positions = _numlist("output", "probes", section["probes"]) \
        if "probes" in section else [spatial.a, spatial.b]
    probe_nodes = tuple(_probe_node(p, spatial, grid) for p in positions)
    snaps = _numlist("output", "snapshots", section["snapshots"]) \
        if "snapshots" in section else [time_grid.t_end]
    cp_kw = {}
    if "window" in section:
        cp_kw["window"] = tuple(_numlist("output", "window",
                                         section["window"], length=2))
    for key in ("spike_threshold", "spike_reset", "gap_factor",
                "amplitude_cut", "isi_cv_max"):
        if key in section:
            cp_kw[key] = _num("output", key, section[key])
    classifier = replace(ClassifierParams(), **cp_kw)
    return out_dir, svg, probe_nodes, tuple(snaps), classifier


def parse_config(text: str) -> RunConfig:
    """Parse and validate a TOML run configuration.

    Raises ConfigError describing the offending section, key, or value;
    TOML syntax errors are reported with the parser's line information.
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from None
    unknown = set(data) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown sections: {', '.join(sorted(unknown))}")
    for name in _SECTIONS:
        if name in data and not isinstance(data[name], dict):
            raise ConfigError(f"[{name}] must be a table")
    model = _model_from(data.get("model", {}))
    spatial = _spatial_from(data.get("spatial", {}))
    time_grid, scheme = _time_from(data.get("time", {}))
    grid = build_grid(spatial)
    init_values, current, coupling = _network_from(
        data.get("network", {}), data.get("coupling", {}),
        spatial.node_count, grid)
    out_dir, svg, probe_nodes, snaps, classifier = _output_from(
        data.get("output", {}), spatial, time_grid, grid)
    return RunConfig(model=model, spatial=spatial, time_grid=time_grid,
                     scheme=scheme, init_values=init_values, current=current,
                     coupling=coupling, probe_nodes=probe_nodes,
                     snapshot_times=snaps, classifier=classifier,
                     out_dir=out_dir, svg=svg)


def load_config(path) -> RunConfig:
    """Read and parse a TOML run configuration file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
