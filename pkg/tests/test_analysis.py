"""Spike/burst detectors, regime rules, region bounds, and monitors."""

import numpy as np
import pytest

from hhrdnet.analysis import (ClassifierParams, Regime, SpikeTrain,
                              check_gate_bounds, check_voltage_region,
                              check_voltage_regions, classify_regime,
                              classify_timeseries, detect_bursts,
                              detect_spikes, first_spike_times_per_burst,
                              mixed_mode_counts, region_bounds)
from hhrdnet.errors import ConfigError, DomainError
from hhrdnet.grid import SpatialConfig
from hhrdnet.integrate import simulate
from hhrdnet.model import ModelParams
from hhrdnet.network import NetworkSpec, NetworkState, TimeGrid


def _pulse_train(t, centers, height=90.0, width=1.0, base=0.0):
    v = np.full_like(t, float(base))
    for c in centers:
        v += (height - base) * np.exp(-(((t - c) / width) ** 2))
    return v


# ---------------------------------------------------------------- spikes


def test_detect_spikes_counts_three_pulses():
    t = np.linspace(0.0, 100.0, 4001)
    v = _pulse_train(t, (20.0, 50.0, 80.0))
    train = detect_spikes(t, v, threshold=60.0, reset=30.0)
    assert train.count == 3
    assert np.allclose(train.times, (20.0, 50.0, 80.0), atol=1.0)


def test_detect_spikes_hysteresis_ignores_re_crossings():
    # Rises through 60, dips to 40 (never below the reset at 30), rises
    # through 60 again: one spike, not two.
    t = np.arange(7.0)
    v = np.asarray([0.0, 70.0, 40.0, 70.0, 40.0, 20.0, 70.0])
    train = detect_spikes(t, v, threshold=60.0, reset=30.0)
    assert train.count == 2
    assert train.times[0] == pytest.approx(6.0 / 7.0, rel=1e-12)


def test_detect_spikes_interpolates_crossing_times():
    t = np.asarray([0.0, 1.0, 2.0])
    v = np.asarray([0.0, 50.0, 100.0])
    train = detect_spikes(t, v, threshold=60.0, reset=30.0)
    # Crossing of 60 between samples (50 -> 100): fraction 10/50.
    assert train.times[0] == pytest.approx(1.2, rel=1e-12)


def test_detect_spikes_edge_cases_and_validation():
    t = np.linspace(0.0, 1.0, 5)
    assert detect_spikes(t, np.zeros(5)).count == 0
    assert detect_spikes(np.asarray([0.0]), np.asarray([0.0])).count == 0
    with pytest.raises(ConfigError):
        detect_spikes(t, np.zeros(5), threshold=30.0, reset=30.0)
    with pytest.raises(DomainError):
        detect_spikes(t, np.zeros(4))
    with pytest.raises(DomainError):
        detect_spikes(t[::-1], np.zeros(5))


def test_detect_spikes_translation_equivariance(rng):
    t = np.arange(0.0, 200.0, 0.125)
    centers = np.sort(rng.choice(np.arange(10.0, 190.0, 5.0), 8, replace=False))
    v = _pulse_train(t, centers)
    base = detect_spikes(t, v)
    shifted = detect_spikes(t + 32.0, v)
    assert shifted.count == base.count
    assert np.allclose(shifted.times, base.times + 32.0, atol=1e-9)


def test_detect_spikes_rescaling_count_invariance(rng):
    t = np.arange(0.0, 200.0, 0.125)
    centers = np.sort(rng.choice(np.arange(10.0, 190.0, 5.0), 6, replace=False))
    v = _pulse_train(t, centers)
    base = detect_spikes(t, v, threshold=60.0, reset=30.0)
    for k in (0.5, 3.7, 1000.0):
        scaled = detect_spikes(t, k * v, threshold=60.0 * k, reset=30.0 * k)
        assert scaled.count == base.count
        assert np.allclose(scaled.times, base.times, atol=1e-9)


def test_spike_train_validation():
    with pytest.raises(DomainError):
        SpikeTrain(np.asarray([1.0, 1.0]), 60.0, 30.0)
    with pytest.raises(DomainError):
        SpikeTrain(np.asarray([[1.0]]), 60.0, 30.0)
    assert SpikeTrain(np.asarray([1.0, 2.0]), 60.0, 30.0).isi()[0] == 1.0


# ---------------------------------------------------------------- bursts


def test_detect_bursts_splits_on_long_gaps():
    # ISIs 5,5,5,100,5,5,5 with gap_factor 3: median gap 5, cut at 15,
    # so the train splits into two four-spike segments.
    times = np.asarray([0.0, 5.0, 10.0, 15.0, 115.0, 120.0, 125.0, 130.0])
    segments = detect_bursts(SpikeTrain(times, 60.0, 30.0), gap_factor=3.0)
    assert len(segments) == 2
    assert [len(s) for s in segments] == [4, 4]
    assert segments[0][0] == 0.0 and segments[1][0] == 115.0


def test_detect_bursts_regular_train_is_one_segment():
    times = np.arange(0.0, 100.0, 10.0)
    assert len(detect_bursts(SpikeTrain(times, 60.0, 30.0), 3.0)) == 1


def test_detect_bursts_trivial_trains():
    assert detect_bursts(SpikeTrain(np.empty(0), 60.0, 30.0)) == []
    single = detect_bursts(SpikeTrain(np.asarray([4.0]), 60.0, 30.0))
    assert len(single) == 1 and single[0][0] == 4.0
    with pytest.raises(ConfigError):
        detect_bursts(SpikeTrain(np.empty(0), 60.0, 30.0), gap_factor=1.0)


def test_first_spike_times_per_burst_drops_stragglers():
    times = np.asarray([0.0, 5.0, 10.0, 60.0, 120.0, 125.0, 130.0])
    firsts = first_spike_times_per_burst(SpikeTrain(times, 60.0, 30.0),
                                         gap_factor=3.0)
    # The lone spike at 60 is not a burst.
    assert np.array_equal(firsts, [0.0, 120.0])


# ---------------------------------------------------------------- bounds


def test_region_bounds_sharp_below_the_leak_margin():
    p = ModelParams()
    margin = p.g_l * (p.e_na - p.e_l)
    for i_sup in (0.0, 5.2, 5.3, margin - 1e-9):
        b = region_bounds(p, i_sup)
        assert b.sharp
        assert (b.v_lo, b.v_hi) == (-12.0, 120.0)


def test_region_bounds_widened_above_the_margin():
    p = ModelParams()
    b130 = region_bounds(p, 130.0)
    assert not b130.sharp
    assert b130.v_lo == -12.0
    assert b130.v_hi == pytest.approx(130.0 / 0.3 + 10.6, rel=1e-12)
    assert b130.v_hi == pytest.approx(443.94, abs=0.01)
    b145 = region_bounds(p, 145.0)
    assert b145.v_hi == pytest.approx(145.0 / 0.3 + 10.6, rel=1e-12)


def test_region_bounds_monotone_and_continuous_at_the_switch():
    p = ModelParams()
    margin = p.g_l * (p.e_na - p.e_l)
    grid = [0.0, 1.0, 20.0, margin - 1e-9, margin, margin + 1e-9, 60.0, 145.0]
    highs = [region_bounds(p, s).v_hi for s in grid]
    assert all(b - a >= -1e-9 for a, b in zip(highs, highs[1:]))
    # At the switch the widened bound equals the sharp one: no jump.
    assert region_bounds(p, margin).v_hi == pytest.approx(120.0, rel=1e-12)
    with pytest.raises(DomainError):
        region_bounds(p, -1.0)


# ------------------------------------------------------------- monitors


def _tiny_record(v_series, gate_value=0.5, nx=5, dt=0.1):
    """A minimal one-neuron record with probes at both endpoints."""
    n_rec = v_series.shape[0]
    spatial = SpatialConfig(a=0.0, b=float(nx - 1), node_count=nx)
    spec = NetworkSpec(ModelParams(), spatial, np.zeros((1, nx)),
                       np.zeros((1, 1, nx)))
    series = np.full((n_rec, 1, 2, 4), gate_value)
    series[:, 0, :, 0] = v_series
    from hhrdnet.network import TrajectoryRecord
    return TrajectoryRecord(
        spec=spec, grid_x=np.linspace(0.0, nx - 1.0, nx), probe_nodes=(0, nx - 1),
        times=np.arange(n_rec) * dt, series=series,
        snapshot_times=np.empty(0), snapshots=np.empty((0, 1, 4, nx)),
        scheme="rk4", dt=dt)


def test_check_gate_bounds_flags_planted_violation():
    v = np.zeros((10, 2))
    rec = _tiny_record(v)
    rec.series[4, 0, 1, 2] = 1.5  # gate m at the far probe, sample 4
    verdict = check_gate_bounds(rec, tol=1e-6)
    assert not verdict.passed
    assert verdict.worst_value == 1.5
    t, neuron, comp, node = verdict.worst_at
    assert (t, neuron, comp, node) == (pytest.approx(0.4), 0, "m", 4)
    rec.series[4, 0, 1, 2] = 0.5
    assert check_gate_bounds(rec, tol=0.0).passed


def test_check_voltage_region_flags_planted_violation():
    v = np.zeros((10, 2))
    v[7, 0] = -13.0
    rec = _tiny_record(v)
    verdict = check_voltage_region(rec, region_bounds(ModelParams(), 0.0),
                                   tol=0.1)
    assert not verdict.passed
    assert verdict.worst_value == -13.0
    assert verdict.worst_at[2] == "V"
    v[7, 0] = -11.9
    assert check_voltage_region(_tiny_record(v),
                                region_bounds(ModelParams(), 0.0), 0.1).passed


def test_check_voltage_regions_uses_each_neurons_drive():
    # 119 mV is fine for any drive; raising it above 120.1 must fail a
    # zero-drive neuron.
    v = np.full((6, 2), 119.0)
    assert check_voltage_regions(_tiny_record(v), tol=0.1).passed
    v[3, 1] = 121.0
    assert not check_voltage_regions(_tiny_record(v), tol=0.1).passed


def test_monitor_tolerance_validation():
    rec = _tiny_record(np.zeros((4, 2)))
    with pytest.raises(ConfigError):
        check_gate_bounds(rec, tol=-1.0)


# ------------------------------------------------------------- classify


def _label_of(near, far, t):
    cols = {"n1_V@x0": near, "n1_V@x100": far}
    labels = classify_timeseries(t, cols, window=(250.0, 500.0))
    assert len(labels) == 1
    return labels[0].label


@pytest.fixture(scope="module")
def taxis():
    return np.arange(0.0, 500.0 + 1e-9, 0.05)


def test_classify_stationary_when_both_ends_are_quiet(taxis):
    assert _label_of(np.zeros_like(taxis), np.zeros_like(taxis),
                     taxis) is Regime.STATIONARY


def test_classify_not_stationary_when_amplitude_is_large(taxis):
    drift = np.where(taxis > 300.0, 5.0, 0.0)
    assert _label_of(np.zeros_like(taxis), drift, taxis) is Regime.UNRESOLVED


def test_classify_periodic_for_regular_trains(taxis):
    centers = np.arange(20.0, 500.0, 20.0)
    v = _pulse_train(taxis, centers)
    assert _label_of(v, v, taxis) is Regime.PERIODIC


def test_classify_bursting_on_far_probe_grouping(taxis):
    near = _pulse_train(taxis, np.arange(20.0, 500.0, 20.0))
    groups = [c + o for c in (270.0, 350.0, 430.0) for o in (0.0, 15.0, 30.0)]
    far = _pulse_train(taxis, groups)
    assert _label_of(near, far, taxis) is Regime.BURSTING


def test_classify_death_spot_when_waves_never_arrive(taxis):
    near = _pulse_train(taxis, np.arange(20.0, 500.0, 20.0))
    far = np.zeros_like(taxis)
    assert _label_of(near, far, taxis) is Regime.DEATH_SPOT


def test_classify_death_spot_needs_a_flat_far_probe(taxis):
    near = _pulse_train(taxis, np.arange(20.0, 500.0, 20.0))
    far = np.where(taxis > 300.0, 2.0, 0.0)  # drifts by 2 mV, no spikes
    assert _label_of(near, far, taxis) is Regime.UNRESOLVED


def test_classify_unresolved_for_sparse_far_spiking(taxis):
    near = _pulse_train(taxis, np.arange(20.0, 500.0, 20.0))
    far = _pulse_train(taxis, (300.0, 400.0))
    assert _label_of(near, far, taxis) is Regime.UNRESOLVED


def test_classify_timeseries_requires_voltage_columns(taxis):
    with pytest.raises(ConfigError):
        classify_timeseries(taxis, {"n1_n@x0": np.zeros_like(taxis)})


def test_classify_window_must_fit_the_record():
    t = np.arange(0.0, 100.0, 0.05)
    with pytest.raises(DomainError):
        classify_timeseries(t, {"n1_V@x0": np.zeros_like(t)},
                            window=(250.0, 500.0))


def test_classify_regime_requires_endpoint_probes():
    spatial = SpatialConfig(a=0.0, b=2.0, node_count=3, diffusion=0.0)
    spec = NetworkSpec(ModelParams(), spatial, np.zeros((1, 3)),
                       np.zeros((1, 1, 3)))
    rec = simulate(spec, NetworkState.constant(1, 3, (0.0, 0.5, 0.5, 0.5)),
                   TimeGrid(0.01, 1.0), probes=(1,))
    with pytest.raises(DomainError):
        classify_regime(rec, window=(0.0, 1.0))


def test_classifier_params_validation():
    with pytest.raises(ConfigError):
        ClassifierParams(window=(500.0, 250.0))
    with pytest.raises(ConfigError):
        ClassifierParams(spike_threshold=20.0, spike_reset=25.0)


def test_regime_str_is_the_label():
    assert str(Regime.DEATH_SPOT) == "death_spot"
    assert str(Regime.STATIONARY) == "stationary"


# ----------------------------------------------------------- mixed mode


def test_mixed_mode_counts_sees_both_bands():
    t = np.arange(0.0, 200.0, 0.05)
    small = _pulse_train(t, np.arange(10.0, 200.0, 40.0), height=30.0)
    large = _pulse_train(t, np.arange(30.0, 200.0, 40.0), height=100.0)
    s, l = mixed_mode_counts(t, small + large, window=(0.0, 200.0))
    assert s == 5 and l == 5


def test_mixed_mode_counts_respects_window_and_bands():
    t = np.arange(0.0, 100.0, 0.05)
    v = _pulse_train(t, (10.0, 50.0, 90.0), height=100.0)
    s, l = mixed_mode_counts(t, v, window=(40.0, 60.0))
    assert (s, l) == (0, 1)
    s, l = mixed_mode_counts(t, v, window=(40.0, 60.0), bands=(40.0, 120.0))
    assert (s, l) == (0, 0)
    assert mixed_mode_counts(t[:2], v[:2], window=(0.0, 1.0)) == (0, 0)
