"""Membrane point kinetics: gating rates, ionic currents, sigmoid coupling.

Voltages are in mV, times in ms, conductances in mS/cm^2, currents in
uA/cm^2.  The resting potential sits at 0 mV, so the sodium, potassium,
and leak reversal potentials default to 120, -12, and 10.6 mV.

Every function here is pure and accepts scalars or numpy arrays for the
state arguments; scalar inputs yield plain floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError, DegenerateRateError, DomainError

GAS_CONSTANT = 8.315      # J / (mol K)
FARADAY = 96485.0         # C / mol


class GateKind(Enum):
    N = "n"
    M = "m"
    H = "h"


@dataclass(frozen=True)
class ModelParams:
    """Conductances, reversal potentials, and coupling sigmoid shape.

    The coupling drive toward ``s_reversal`` is excitatory: the sigmoid
    threshold ``theta_threshold`` and slope ``lambda_slope`` shape the
    presynaptic activation, and ``s_reversal`` must sit strictly between
    the leak and sodium reversals so that coupling cannot push the
    voltage out of the invariant region.
    """

    g_na: float = 120.0
    g_k: float = 36.0
    g_l: float = 0.3
    e_na: float = 120.0
    e_k: float = -12.0
    e_l: float = 10.6
    capacitance: float = 1.0
    s_reversal: float = 100.0
    lambda_slope: float = 20.0
    theta_threshold: float = 60.0

    def __post_init__(self):
        for name in ("g_na", "g_k", "g_l", "capacitance"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} must be strictly positive")
        if not (self.e_k < self.e_l < self.e_na):
            raise ConfigError("reversal potentials must satisfy e_k < e_l < e_na")
        if not (self.e_k < self.s_reversal < self.e_na):
            raise ConfigError("s_reversal must lie strictly between e_k and e_na")
        if not self.lambda_slope > 0.0:
            raise ConfigError("lambda_slope must be strictly positive")


@dataclass(frozen=True)
class PointState:
    """State of a single membrane patch: voltage plus the three gates."""

    v: float
    n: float
    m: float
    h: float


def _as_gate(gate) -> GateKind:
    if isinstance(gate, GateKind):
        return gate
    try:
        return GateKind(str(gate))
    except ValueError:
        raise DomainError(f"unknown gate {gate!r}; expected one of n, m, h") from None


def _checked_potential(v):
    arr = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("membrane potential must be finite")
    return arr


def _maybe_scalar(out, *like):
    if all(np.ndim(a) == 0 for a in like):
        return float(out)
    return out


def _expm1_ratio(x):
    """x / (exp(x) - 1), with a series branch across the removable zero."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1.0e-4
    series = 1.0 - 0.5 * x + x * x / 12.0
    safe = np.where(small, 1.0, x)
    with np.errstate(over="ignore"):
        ratio = safe / np.expm1(safe)
    return np.where(small, series, ratio)


def _sigmoid(z):
    """Logistic function, overflow-safe on both tails."""
    z = np.asarray(z, dtype=float)
    e = np.exp(-np.abs(z))
    return np.where(z >= 0.0, 1.0 / (1.0 + e), e / (1.0 + e))


_ALPHA = {
    GateKind.N: lambda v: 0.1 * _expm1_ratio(1.0 - 0.1 * v),
    GateKind.M: lambda v: _expm1_ratio(2.5 - 0.1 * v),
    GateKind.H: lambda v: 0.07 * np.exp(-v / 20.0),
}

_BETA = {
    GateKind.N: lambda v: 0.125 * np.exp(-v / 80.0),
    GateKind.M: lambda v: 4.0 * np.exp(-v / 18.0),
    GateKind.H: lambda v: _sigmoid(0.1 * v - 3.0),
}


def _rate(table, kind, arr):
    # Exponential rates may saturate to inf far outside the physical
    # range; that is the intended limit, not an error.
    with np.errstate(over="ignore"):
        return table[kind](arr)


def rate_alpha(gate, v):
    """Opening rate of ``gate`` at membrane potential ``v`` (1/ms).

    The n and m rates have removable singularities at v = 10 and v = 25;
    both are evaluated through a series branch so the result is smooth
    and exact there (0.1 and 1.0 respectively).
    """
    kind = _as_gate(gate)
    arr = _checked_potential(v)
    return _maybe_scalar(_rate(_ALPHA, kind, arr), v)


def rate_beta(gate, v):
    """Closing rate of ``gate`` at membrane potential ``v`` (1/ms)."""
    kind = _as_gate(gate)
    arr = _checked_potential(v)
    return _maybe_scalar(_rate(_BETA, kind, arr), v)


def gate_steady(gate, v):
    """Steady state and relaxation time of ``gate`` at fixed ``v``.

    Returns
    -------
    (x_inf, tau) : tuple
        ``x_inf = alpha / (alpha + beta)`` and ``tau = 1 / (alpha + beta)``.

    Raises
    ------
    DegenerateRateError
        If ``alpha + beta`` is not strictly positive anywhere.
    """
    kind = _as_gate(gate)
    arr = _checked_potential(v)
    a = _rate(_ALPHA, kind, arr)
    b = _rate(_BETA, kind, arr)
    s = a + b
    if not np.all(s > 0.0):
        raise DegenerateRateError("alpha + beta must be strictly positive")
    with np.errstate(invalid="ignore"):
        x_inf = np.where(np.isinf(a), 1.0, np.where(np.isinf(b), 0.0, a / s))
        tau = np.where(np.isinf(s), 0.0, 1.0 / s)
    if not np.all(np.isfinite(x_inf)):
        raise DegenerateRateError("both rates overflowed")
    return _maybe_scalar(x_inf, v), _maybe_scalar(tau, v)


def reaction_v(params: ModelParams, state: PointState, i_ext=0.0):
    """Voltage reaction term: (applied + ionic currents) / capacitance."""
    v, n, m, h = state.v, state.n, state.m, state.h
    i_na = params.g_na * (m * m * m) * h * (params.e_na - v)
    i_k = params.g_k * (n * n * n * n) * (params.e_k - v)
    i_l = params.g_l * (params.e_l - v)
    return (i_ext + i_na + i_k + i_l) / params.capacitance


def reaction_gate(gate, v, x):
    """Gate reaction term alpha(v) (1 - x) - beta(v) x."""
    kind = _as_gate(gate)
    arr = _checked_potential(v)
    xa = np.asarray(x, dtype=float)
    out = _rate(_ALPHA, kind, arr) * (1.0 - xa) - _rate(_BETA, kind, arr) * xa
    return _maybe_scalar(out, v, x)


def gamma_sigmoid(params: ModelParams, s):
    """Presynaptic activation: logistic in s with the model's slope and threshold.

    Monotone, contained in [0, 1], equal to 1/2 at the threshold, and
    safe against overflow for any finite argument; it reaches 0 or 1
    exactly only by floating-point underflow far from the threshold.
    """
    z = params.lambda_slope * (np.asarray(s, dtype=float) - params.theta_threshold)
    return _maybe_scalar(_sigmoid(z), s)


def coupling_input(params: ModelParams, alpha_row, v_self, v_sources):
    """Drive received by one node from its presynaptic sources.

    ``alpha_row[j]`` weights source ``j``; each source contributes
    ``alpha_row[j] * (s_reversal - v_self) * gamma_sigmoid(v_sources[j])``.

    Raises
    ------
    ConfigError
        If any weight is negative.
    DomainError
        If the weight and source arrays have different shapes.
    """
    w = np.asarray(alpha_row, dtype=float)
    src = np.asarray(v_sources, dtype=float)
    if w.shape != src.shape:
        raise DomainError("alpha_row and v_sources must have the same shape")
    if np.any(w < 0.0):
        raise ConfigError("coupling weights must be nonnegative")
    gain = params.s_reversal - float(v_self)
    return float(np.sum(w * gain * _sigmoid(
        params.lambda_slope * (src - params.theta_threshold))))


def nernst_potential(temperature, valence, c_out, c_in, shift=0.0):
    """Equilibrium potential (mV) of an ion across the membrane.

    Parameters
    ----------
    temperature : float
        Absolute temperature in K.
    valence : int
        Ion charge number; must be nonzero.
    c_out, c_in : float
        Outside and inside concentrations; both strictly positive.
    shift : float
        Offset added to the result, for rebasing onto a shifted
        voltage scale.
    """
    if not (c_out > 0.0 and c_in > 0.0):
        raise DomainError("concentrations must be strictly positive")
    if valence == 0:
        raise DomainError("valence must be nonzero")
    volts = GAS_CONSTANT * temperature / (valence * FARADAY) * math.log(c_out / c_in)
    return 1000.0 * volts + shift
