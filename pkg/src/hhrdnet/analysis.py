"""Runtime invariant monitors, spike detection, and regime labeling.

Monitors check the trapping properties of the dynamics on recorded
data: gates must stay in [0, 1] and voltages inside the interval given
by ``region_bounds``.  Classification reduces each neuron's probe
series to one of five labels: stationary, periodic, bursting,
death_spot, or unresolved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import ConfigError, DomainError
from .model import ModelParams
from .network import COMPONENTS, TrajectoryRecord


@dataclass(frozen=True)
class RegionBounds:
    """Voltage interval that the dynamics cannot leave.

    ``sharp`` is True when the interval is the reversal-potential one;
    False when the applied current is large enough that the upper bound
    had to be widened to ``i_sup / g_l + e_l``.
    """

    v_lo: float
    v_hi: float
    sharp: bool


def region_bounds(params: ModelParams, i_sup) -> RegionBounds:
    """Trapping interval for the voltage given a bound on applied current.

    For drive below ``g_l (e_na - e_l)`` the reversal interval
    ``[e_k, e_na]`` is invariant (coupling pulls toward ``s_reversal``
    inside it, so it cannot break the bound).  Stronger drive widens the
    upper bound to ``i_sup / g_l + e_l``.
    """
    i_sup = float(i_sup)
    if i_sup < 0.0:
        raise DomainError("i_sup must be nonnegative")
    margin = params.g_l * (params.e_na - params.e_l)
    if i_sup < margin:
        return RegionBounds(params.e_k, params.e_na, True)
    return RegionBounds(params.e_k, i_sup / params.g_l + params.e_l, False)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one runtime monitor.

    ``worst_at`` is ``(time, neuron, component, node)``; entries are
    None when the source data does not carry that coordinate.
    """

    name: str
    passed: bool
    detail: str
    worst_value: float
    worst_at: tuple


def _candidates(record: TrajectoryRecord, comps, neuron=None):
    """Extreme values of selected state components over all record data.

    Yields (value, (time, neuron, component, node)) pairs for the
    minimum and maximum found in the extrema accumulator, the probe
    series, and the snapshots.
    """
    out = []
    e = record.extrema
    if e is not None:
        if 0 in comps:
            idx = range(len(e.v_min)) if neuron is None else [neuron]
            for i in idx:
                out.append((e.v_min[i], (e.v_min_time[i], i, "V", int(e.v_min_node[i]))))
                out.append((e.v_max[i], (e.v_max_time[i], i, "V", int(e.v_max_node[i]))))
        gate_comps = [c for c in comps if c > 0]
        if gate_comps and neuron is None:
            out.append((e.gate_min, e.gate_min_at))
            out.append((e.gate_max, e.gate_max_at))
    sel = slice(None) if neuron is None else slice(neuron, neuron + 1)
    base = 0 if neuron is None else neuron
    if record.series.size:
        s = record.series[:, sel]
        for c in comps:
            block = s[:, :, :, c]
            for pick in (np.argmin, np.argmax):
                r, i, p = np.unravel_index(int(pick(block)), block.shape)
                out.append((float(block[r, i, p]),
                            (float(record.times[r]), base + int(i), COMPONENTS[c],
                             int(record.probe_nodes[p]))))
    if record.snapshots.size:
        s = record.snapshots[:, sel]
        for c in comps:
            block = s[:, :, c, :]
            for pick in (np.argmin, np.argmax):
                r, i, k = np.unravel_index(int(pick(block)), block.shape)
                out.append((float(block[r, i, k]),
                            (float(record.snapshot_times[r]), base + int(i),
                             COMPONENTS[c], int(k))))
    if not out:
        raise DomainError("record holds no data to check")
    return out


def check_gate_bounds(record: TrajectoryRecord, tol: float = 0.0) -> Verdict:
    """Verify every recorded gate value lies in [-tol, 1 + tol]."""
    if tol < 0.0:
        raise ConfigError("tol must be nonnegative")
    cand = _candidates(record, (1, 2, 3))
    low = min(cand, key=lambda c: c[0])
    high = max(cand, key=lambda c: c[0])
    excess_low = 0.0 - low[0]
    excess_high = high[0] - 1.0
    worst = low if excess_low >= excess_high else high
    passed = excess_low <= tol and excess_high <= tol
    detail = (f"gate range [{low[0]:.9g}, {high[0]:.9g}] vs allowed "
              f"[{-tol:.3g}, {1.0 + tol:.3g}]")
    return Verdict("gate_bounds", passed, detail, worst[0], worst[1])


def check_voltage_region(record: TrajectoryRecord, bounds: RegionBounds,
                         tol: float = 0.0, neuron=None) -> Verdict:
    """Verify recorded voltages stay inside ``bounds`` widened by ``tol``."""
    if tol < 0.0:
        raise ConfigError("tol must be nonnegative")
    cand = _candidates(record, (0,), neuron=neuron)
    low = min(cand, key=lambda c: c[0])
    high = max(cand, key=lambda c: c[0])
    excess_low = bounds.v_lo - low[0]
    excess_high = high[0] - bounds.v_hi
    worst = low if excess_low >= excess_high else high
    passed = excess_low <= tol and excess_high <= tol
    who = "all neurons" if neuron is None else f"neuron {neuron}"
    detail = (f"{who}: V range [{low[0]:.6g}, {high[0]:.6g}] vs allowed "
              f"[{bounds.v_lo:.6g}, {bounds.v_hi:.6g}] + tol {tol:.3g}")
    return Verdict("voltage_region", passed, detail, worst[0], worst[1])


def check_voltage_regions(record: TrajectoryRecord, tol: float = 0.0) -> Verdict:
    """Per-neuron region check with bounds derived from each neuron's drive."""
    spec = record.spec
    verdicts = []
    for i in range(record.neuron_count):
        i_sup = max(0.0, float(spec.current[i].max()))
        verdicts.append(check_voltage_region(
            record, region_bounds(spec.model, i_sup), tol, neuron=i))
    failed = [v for v in verdicts if not v.passed]
    worst = (failed or verdicts)[0]
    detail = "; ".join(v.detail for v in verdicts)
    return Verdict("voltage_region", not failed, detail,
                   worst.worst_value, worst.worst_at)


@dataclass(frozen=True)
class SpikeTrain:
    """Interpolated threshold-crossing times of one voltage series."""

    times: np.ndarray
    threshold: float
    reset: float

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1:
            raise DomainError("spike times must form a 1-D array")
        if t.size > 1 and not np.all(np.diff(t) > 0.0):
            raise DomainError("spike times must be strictly increasing")
        object.__setattr__(self, "times", t)

    @property
    def count(self) -> int:
        return int(self.times.size)

    def isi(self) -> np.ndarray:
        return np.diff(self.times)


def detect_spikes(times, values, threshold: float = 60.0,
                  reset: float = 30.0) -> SpikeTrain:
    """Upward threshold crossings with hysteresis.

    A spike is recorded when the series rises through ``threshold``;
    the detector then stays quiet until the series has fallen below
    ``reset``.  Spike times are linearly interpolated between samples.
    """
    if not reset < threshold:
        raise ConfigError("reset must be strictly below threshold")
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise DomainError("times and values must be 1-D arrays of equal length")
    if t.size > 1 and not np.all(np.diff(t) > 0.0):
        raise DomainError("times must be strictly increasing")
    if t.size < 2:
        return SpikeTrain(np.empty(0), threshold, reset)
    up = np.flatnonzero((v[:-1] < threshold) & (v[1:] >= threshold)) + 1
    below = v < reset
    spikes = []
    prev = None
    for u in up:
        if prev is not None and not below[prev:u].any():
            continue
        frac = (threshold - v[u - 1]) / (v[u] - v[u - 1])
        spikes.append(t[u - 1] + frac * (t[u] - t[u - 1]))
        prev = u
    return SpikeTrain(np.asarray(spikes), threshold, reset)


def detect_bursts(train: SpikeTrain, gap_factor: float = 3.0) -> list:
    """Split a spike train at gaps larger than ``gap_factor`` times the median gap.

    Returns a list of arrays of spike times; a perfectly regular train
    comes back as a single segment.
    """
    if not gap_factor > 1.0:
        raise ConfigError("gap_factor must exceed 1")
    if train.count == 0:
        return []
    if train.count == 1:
        return [train.times.copy()]
    gaps = train.isi()
    cuts = np.flatnonzero(gaps > gap_factor * np.median(gaps)) + 1
    return list(np.split(train.times, cuts))


def first_spike_times_per_burst(train: SpikeTrain, gap_factor: float = 3.0,
                                min_spikes: int = 2) -> np.ndarray:
    """First spike time of each burst with at least ``min_spikes`` spikes."""
    return np.asarray([seg[0] for seg in detect_bursts(train, gap_factor)
                       if seg.size >= min_spikes])


class Regime(Enum):
    STATIONARY = "stationary"
    PERIODIC = "periodic"
    BURSTING = "bursting"
    DEATH_SPOT = "death_spot"
    UNRESOLVED = "unresolved"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ClassifierParams:
    """Thresholds and windows used by ``classify_regime``.

    The defaults suit runs of 500 ms sampled every hundredth of a ms:
    the analysis window skips the first half (transients), a probe
    counts as quiet when it has no spikes and less than ``amplitude_cut``
    mV of peak-to-peak movement, a train splits into bursts at gaps
    beyond ``gap_factor`` times its median gap, and a regular train
    (ISI coefficient of variation below ``isi_cv_max``) is periodic.
    """

    window: tuple = (250.0, 500.0)
    spike_threshold: float = 25.0
    spike_reset: float = 20.0
    amplitude_cut: float = 1.0
    gap_factor: float = 2.0
    burst_min_spikes: int = 2
    min_spikes_periodic: int = 3
    death_min_spikes: int = 5
    isi_cv_max: float = 0.1
    mixed_mode_bands: tuple = (40.0, 80.0)

    def __post_init__(self):
        if not self.window[0] < self.window[1]:
            raise ConfigError("window must satisfy start < end")
        if not self.spike_reset < self.spike_threshold:
            raise ConfigError("spike_reset must be below spike_threshold")


@dataclass(frozen=True)
class ProbeStats:
    """Spike statistics of one probe over the analysis window."""

    node: int
    x: float
    spike_count: int
    burst_count: int
    isi_cv: float
    amplitude: float


@dataclass(frozen=True)
class RegimeLabel:
    """Per-neuron classification with the statistics that produced it."""

    neuron: int
    label: Regime
    near: ProbeStats
    far: ProbeStats


def _probe_stats(t, v, node, x, cp: ClassifierParams) -> ProbeStats:
    train = detect_spikes(t, v, cp.spike_threshold, cp.spike_reset)
    segments = detect_bursts(train, cp.gap_factor) if train.count else []
    bursts = sum(1 for seg in segments if seg.size >= cp.burst_min_spikes)
    if train.count >= 3:
        gaps = train.isi()
        cv = float(np.std(gaps) / np.mean(gaps))
    else:
        cv = float("nan")
    amp = float(np.ptp(v)) if v.size else 0.0
    return ProbeStats(node, x, train.count, bursts, cv, amp)


def _quiet(stats: ProbeStats, cp: ClassifierParams) -> bool:
    return stats.spike_count == 0 and stats.amplitude < cp.amplitude_cut


def _decide(near: ProbeStats, far: ProbeStats, cp: ClassifierParams) -> Regime:
    if _quiet(near, cp) and _quiet(far, cp):
        return Regime.STATIONARY
    if (near.spike_count >= cp.min_spikes_periodic
            and far.spike_count >= cp.min_spikes_periodic
            and np.isfinite(near.isi_cv) and near.isi_cv < cp.isi_cv_max
            and np.isfinite(far.isi_cv) and far.isi_cv < cp.isi_cv_max
            and near.burst_count <= 1 and far.burst_count <= 1):
        return Regime.PERIODIC
    if far.burst_count >= 2:
        return Regime.BURSTING
    if (near.spike_count >= cp.death_min_spikes and far.spike_count == 0
            and far.amplitude < cp.amplitude_cut):
        return Regime.DEATH_SPOT
    return Regime.UNRESOLVED


def _window_select(t, cp, dt):
    w0, w1 = cp.window
    pad = 0.5 * dt
    if w0 < t[0] - pad or w1 > t[-1] + pad:
        raise DomainError(
            f"analysis window [{w0:g}, {w1:g}] outside recorded span "
            f"[{t[0]:g}, {t[-1]:g}]")
    return (t >= w0 - pad) & (t <= w1 + pad)


def classify_regime(record: TrajectoryRecord, window=None,
                    params: ClassifierParams | None = None) -> list:
    """Label each neuron from its probes at the two domain endpoints.

    Requires the record to carry probes at the first and last grid
    nodes; statistics are computed over the analysis window and the
    decision goes: both endpoints quiet is stationary, regular
    ungrouped trains at both ends are periodic, repeated burst grouping
    at the far end is bursting, a sustained near train against a silent
    flat far end is a death spot, anything else is unresolved.
    """
    cp = params if params is not None else ClassifierParams()
    if window is not None:
        cp = replace(cp, window=(float(window[0]), float(window[1])))
    nx = record.grid_x.size
    try:
        p_near = record.probe_nodes.index(0)
        p_far = record.probe_nodes.index(nx - 1)
    except ValueError:
        raise DomainError(
            "classification requires probes at both domain endpoints") from None
    sel = _window_select(record.times, cp, record.dt)
    t = record.times[sel]
    labels = []
    for i in range(record.neuron_count):
        near = _probe_stats(t, record.series[sel, i, p_near, 0], 0,
                            float(record.grid_x[0]), cp)
        far = _probe_stats(t, record.series[sel, i, p_far, 0], nx - 1,
                           float(record.grid_x[-1]), cp)
        labels.append(RegimeLabel(i, _decide(near, far, cp), near, far))
    return labels


_COLUMN = re.compile(r"n(\d+)_V@x([0-9eE+.\-]+)$")


def classify_timeseries(times, columns: dict, window=None,
                        params: ClassifierParams | None = None) -> list:
    """Classify from named voltage columns, e.g. CSV data.

    Column names follow the timeseries format ``n<i>_V@x<pos>``; other
    columns are ignored.  The probe with the smallest position plays
    the near role and the largest the far role; with a single probe the
    same series plays both.
    """
    cp = params if params is not None else ClassifierParams()
    if window is not None:
        cp = replace(cp, window=(float(window[0]), float(window[1])))
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise DomainError("times must be a 1-D array with at least two samples")
    per_neuron = {}
    for name, col in columns.items():
        match = _COLUMN.match(name)
        if match is None:
            continue
        idx = int(match.group(1)) - 1
        pos = float(match.group(2))
        per_neuron.setdefault(idx, {})[pos] = np.asarray(col, dtype=float)
    if not per_neuron:
        raise ConfigError("no voltage columns of the form n<i>_V@x<pos> found")
    dt = float(np.median(np.diff(t)))
    sel = _window_select(t, cp, dt)
    tw = t[sel]
    labels = []
    for idx in sorted(per_neuron):
        series = per_neuron[idx]
        lo, hi = min(series), max(series)
        near = _probe_stats(tw, series[lo][sel], -1, lo, cp)
        far = _probe_stats(tw, series[hi][sel], -1, hi, cp)
        labels.append(RegimeLabel(idx, _decide(near, far, cp), near, far))
    return labels


def mixed_mode_counts(times, values, window, bands=(40.0, 80.0)):
    """Count strict local maxima below and above the two band edges.

    Returns ``(small, large)``: peaks under ``bands[0]`` and peaks over
    ``bands[1]`` within the window.  Both being positive signals
    alternation of small and large oscillations.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise DomainError("times and values must be 1-D arrays of equal length")
    w0, w1 = float(window[0]), float(window[1])
    sel = (t >= w0) & (t <= w1)
    vw = v[sel]
    if vw.size < 3:
        return 0, 0
    peaks = vw[1:-1][(vw[1:-1] > vw[:-2]) & (vw[1:-1] > vw[2:])]
    return int((peaks < bands[0]).sum()), int((peaks > bands[1]).sum())
