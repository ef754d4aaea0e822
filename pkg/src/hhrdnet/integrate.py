"""Fixed-step time integration of the coupled reaction-diffusion network.

Two schemes are offered.  ``rk4`` applies the classical four-stage
Runge-Kutta update to the full semi-discrete system.  ``split`` treats
the gates exactly (closed-form relaxation at frozen voltage, half a
step on either side) and advances only the voltage block with RK4, so
gate values can never leave [0, 1].

Every step the full state is scanned: non-finite values or voltages
beyond ``V_BLOWUP_LIMIT`` abort the run, and per-neuron voltage extrema
plus global gate extrema are accumulated for the runtime monitors.
"""

from __future__ import annotations

import numpy as np

from . import analysis, backend
from .errors import BlowUpError, ConfigError, DomainError
from .grid import build_grid
from .model import GateKind, gate_steady
from .network import (COMPONENTS, NetworkSpec, NetworkState, StateExtrema,
                      TimeGrid, TrajectoryRecord)

V_BLOWUP_LIMIT = 1.0e4
GATE_TOL_RK4 = 1.0e-6
REGION_TOL = 0.1

SCHEMES = ("rk4", "split")


def _pack(spec: NetworkSpec):
    p = spec.model
    pv = np.array([p.g_na, p.g_k, p.g_l, p.e_na, p.e_k, p.e_l,
                   1.0 / p.capacitance, p.s_reversal, p.lambda_slope,
                   p.theta_threshold])
    h = spec.spatial.spacing
    dh2 = spec.spatial.diffusion / (h * h)
    return pv, dh2


def _check_state(spec: NetworkSpec, state: NetworkState):
    want = (spec.neuron_count, len(COMPONENTS), spec.spatial.node_count)
    if state.data.shape != want:
        raise DomainError(f"state shape {state.data.shape} does not match "
                          f"network shape {want}")


def _raise_if_untrusted(y, t):
    bufs = backend.make_extrema_buffers(y.shape[0])
    bad = backend.kernels().scan_state(y, V_BLOWUP_LIMIT, 0.0, bufs["vext"],
                                       bufs["vnode"], bufs["gext"], bufs["gloc"])
    if bad is not None:
        _raise_blowup(bad, t)


def _raise_blowup(bad, t):
    i, c, k, val = bad
    if t is None:
        when = "after the step"
    elif t == 0.0:
        when = "initially"
    else:
        when = f"at t={t:.6g} ms"
    raise BlowUpError(
        f"state left the trusted range {when}: neuron {i}, "
        f"{COMPONENTS[c]} at node {k} is {val:.6g}",
        t=t, neuron=int(i), node=int(k), component=COMPONENTS[c],
        value=float(val))


def network_rhs(spec: NetworkSpec, state: NetworkState) -> NetworkState:
    """Time derivative of the full network state."""
    _check_state(spec, state)
    pv, dh2 = _pack(spec)
    y = state.data
    out = np.empty_like(y)
    gam = np.empty((y.shape[0], y.shape[2]))
    backend.kernels().rhs_full(y, out, spec.current, spec.coupling,
                               spec.has_coupling, pv, dh2, gam)
    return NetworkState(out)


def rk4_step(spec: NetworkSpec, state: NetworkState, dt: float) -> NetworkState:
    """One classical RK4 step; raises BlowUpError on an untrusted result."""
    if not dt > 0.0:
        raise DomainError("dt must be strictly positive")
    _check_state(spec, state)
    pv, dh2 = _pack(spec)
    y = state.data.copy()
    ws = backend.make_workspace(y.shape[0], y.shape[2])
    backend.kernels().rk4_step(y, spec.current, spec.coupling,
                               spec.has_coupling, pv, dh2, dt,
                               ws["k1"], ws["k2"], ws["k3"], ws["k4"],
                               ws["yt"], ws["gam"])
    _raise_if_untrusted(y, None)
    return NetworkState(y)


def gate_exact_step(v_frozen, gates, dt: float) -> np.ndarray:
    """Advance the three gates exactly at frozen voltage.

    ``gates`` stacks (n, m, h) along the first axis.  Each gate relaxes
    toward its steady state with its own time constant; the result is
    clamped to the convex hull of the input and [0, 1], so values
    inside [0, 1] remain inside for any dt.
    """
    if not dt > 0.0:
        raise DomainError("dt must be strictly positive")
    v = np.asarray(v_frozen, dtype=float)
    g = np.asarray(gates, dtype=float)
    if g.shape != (3,) + v.shape:
        raise DomainError("gates must stack (n, m, h) over the voltage shape")
    out = np.empty_like(g)
    for idx, kind in enumerate((GateKind.N, GateKind.M, GateKind.H)):
        x_inf, tau = gate_steady(kind, v)
        x = g[idx]
        relaxed = x_inf + (x - x_inf) * np.exp(-dt / np.asarray(tau))
        out[idx] = np.clip(relaxed, np.minimum(x, 0.0), np.maximum(x, 1.0))
    return out


def split_step(spec: NetworkSpec, state: NetworkState, dt: float) -> NetworkState:
    """One gate-exact / voltage-RK4 / gate-exact step."""
    if not dt > 0.0:
        raise DomainError("dt must be strictly positive")
    _check_state(spec, state)
    pv, dh2 = _pack(spec)
    y = state.data.copy()
    ws = backend.make_workspace(y.shape[0], y.shape[2])
    kern = backend.kernels()
    kern.gate_exact(y, 0.5 * dt)
    kern.v_rk4_step(y, spec.current, spec.coupling, spec.has_coupling, pv,
                    dh2, dt, ws["kv1"], ws["kv2"], ws["kv3"], ws["kv4"],
                    ws["vt"], ws["gam"])
    kern.gate_exact(y, 0.5 * dt)
    _raise_if_untrusted(y, None)
    return NetworkState(y)


def _build_extrema(bufs) -> StateExtrema:
    vext, vnode = bufs["vext"], bufs["vnode"]
    gext, gloc = bufs["gext"], bufs["gloc"]
    return StateExtrema(
        v_min=vext[0].copy(), v_max=vext[1].copy(),
        v_min_time=vext[2].copy(), v_max_time=vext[3].copy(),
        v_min_node=vnode[0].copy(), v_max_node=vnode[1].copy(),
        gate_min=float(gext[0]), gate_max=float(gext[1]),
        gate_min_at=(float(gext[2]), int(gloc[0]), COMPONENTS[int(gloc[1])],
                     int(gloc[2])),
        gate_max_at=(float(gext[3]), int(gloc[3]), COMPONENTS[int(gloc[4])],
                     int(gloc[5])))


def simulate(spec: NetworkSpec, init: NetworkState, time_grid: TimeGrid,
             scheme: str = "rk4", probes=(), snapshot_times=(),
             classifier=None, attach_monitors: bool = True) -> TrajectoryRecord:
    """Integrate the network and record probes, snapshots, and monitors.

    Parameters
    ----------
    probes : sequence of int
        Node indices whose full (V, n, m, h) history is recorded every
        ``record_stride`` steps.
    snapshot_times : sequence of float
        Times at which the whole state is stored; each must lie in
        [0, t_end] and snaps to the nearest step.
    classifier : ClassifierParams, optional
        Settings for the regime labels attached to the record.
    attach_monitors : bool
        When true, gate-bound and voltage-region verdicts are attached,
        plus per-neuron regime labels when the classifier window fits
        the horizon and both domain endpoints are probed.

    Raises
    ------
    BlowUpError
        When the state becomes non-finite or |V| exceeds
        ``V_BLOWUP_LIMIT``; carries the time, neuron, component, node.
    """
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    _check_state(spec, init)
    nn = spec.neuron_count
    nx = spec.spatial.node_count
    probes = tuple(int(p) for p in probes)
    for p in probes:
        if not 0 <= p < nx:
            raise ConfigError(f"probe node {p} outside grid of {nx} nodes")
    dt = time_grid.dt
    n_steps = time_grid.n_steps
    snap_req = np.asarray(sorted(set(float(s) for s in snapshot_times)))
    for s in snap_req:
        if not 0.0 <= s <= time_grid.t_end:
            raise ConfigError(f"snapshot time {s:g} outside [0, {time_grid.t_end:g}]")
    snap_steps = [min(n_steps, round(s / dt)) for s in snap_req]

    pv, dh2 = _pack(spec)
    kern = backend.kernels()
    ws = backend.make_workspace(nn, nx)
    bufs = backend.make_extrema_buffers(nn)
    y = np.array(init.data, dtype=float, order="C")
    cur, coup, has_coup = spec.current, spec.coupling, spec.has_coupling
    half = 0.5 * dt

    stride = time_grid.record_stride
    n_rec = n_steps // stride + 1
    times = np.empty(n_rec)
    series = np.empty((n_rec, nn, len(probes), len(COMPONENTS)))
    probe_idx = np.asarray(probes, dtype=np.intp)
    snapshots = np.empty((len(snap_steps), nn, len(COMPONENTS), nx))

    def record_row(r, t):
        times[r] = t
        if probes:
            series[r] = y[:, :, probe_idx].transpose(0, 2, 1)

    bad = kern.scan_state(y, V_BLOWUP_LIMIT, 0.0, bufs["vext"], bufs["vnode"],
                          bufs["gext"], bufs["gloc"])
    if bad is not None:
        _raise_blowup(bad, 0.0)
    record_row(0, 0.0)
    row = 1
    for s, step in enumerate(snap_steps):
        if step == 0:
            snapshots[s] = y

    for k in range(1, n_steps + 1):
        if scheme == "rk4":
            kern.rk4_step(y, cur, coup, has_coup, pv, dh2, dt,
                          ws["k1"], ws["k2"], ws["k3"], ws["k4"],
                          ws["yt"], ws["gam"])
        else:
            kern.gate_exact(y, half)
            kern.v_rk4_step(y, cur, coup, has_coup, pv, dh2, dt,
                            ws["kv1"], ws["kv2"], ws["kv3"], ws["kv4"],
                            ws["vt"], ws["gam"])
            kern.gate_exact(y, half)
        t = k * dt
        bad = kern.scan_state(y, V_BLOWUP_LIMIT, t, bufs["vext"], bufs["vnode"],
                              bufs["gext"], bufs["gloc"])
        if bad is not None:
            _raise_blowup(bad, t)
        if k % stride == 0:
            record_row(row, t)
            row += 1
        for s, step in enumerate(snap_steps):
            if step == k:
                snapshots[s] = y

    record = TrajectoryRecord(
        spec=spec, grid_x=build_grid(spec.spatial), probe_nodes=probes,
        times=times, series=series, snapshot_times=snap_req,
        snapshots=snapshots, scheme=scheme, dt=dt,
        extrema=_build_extrema(bufs))

    if attach_monitors:
        cp = classifier if classifier is not None else analysis.ClassifierParams()
        gate_tol = 0.0 if scheme == "split" else GATE_TOL_RK4
        record.verdicts["gate_bounds"] = analysis.check_gate_bounds(record, gate_tol)
        record.verdicts["voltage_region"] = analysis.check_voltage_regions(
            record, REGION_TOL)
        if (0 in probes and nx - 1 in probes and time_grid.t_end >= cp.window[1]
                and cp.window[0] >= 0.0):
            record.labels = analysis.classify_regime(record, params=cp)
    return record
