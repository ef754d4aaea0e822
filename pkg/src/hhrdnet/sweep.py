"""Bisection for the drive amplitude where oscillations switch on."""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import ClassifierParams, Regime
from .errors import BracketError, ConfigError
from .integrate import simulate
from .network import NetworkState, TimeGrid
from .presets import single_drive_spec


@dataclass(frozen=True)
class SweepResult:
    """Final bracket of a bisection sweep.

    ``evaluations`` lists every ``(amplitude, Regime)`` pair in the
    order it was computed, endpoints first.
    """

    lo: float
    hi: float
    lo_label: Regime
    hi_label: Regime
    evaluations: tuple

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


def sweep_bifurcation(lo: float, hi: float, target_width: float,
                      spec_builder=None, time_grid: TimeGrid | None = None,
                      init=(1.0, 1.0, 1.0, 1.0),
                      params: ClassifierParams | None = None) -> SweepResult:
    """Bisect [lo, hi] down to ``target_width`` on the stationary/periodic edge.

    The low endpoint must classify stationary and the high endpoint
    periodic; each midpoint must come back as one of those two labels.
    Any other outcome raises BracketError carrying the offending labels.
    ``spec_builder`` maps an amplitude to a NetworkSpec; by default one
    neuron driven on the left tenth of the standard domain.
    """
    if not lo < hi:
        raise ConfigError("sweep needs lo < hi")
    if not target_width > 0.0:
        raise ConfigError("target_width must be strictly positive")
    builder = spec_builder if spec_builder is not None else single_drive_spec
    tg = time_grid if time_grid is not None else TimeGrid()
    cp = params if params is not None else ClassifierParams()
    evals = []

    def label_at(amp):
        spec = builder(amp)
        nx = spec.spatial.node_count
        state = NetworkState.constant(spec.neuron_count, nx, init)
        rec = simulate(spec, state, tg, scheme="rk4", probes=(0, nx - 1),
                       classifier=cp)
        lab = rec.labels[0].label
        evals.append((amp, lab))
        return lab

    lo_label = label_at(lo)
    hi_label = label_at(hi)
    if lo_label is not Regime.STATIONARY or hi_label is not Regime.PERIODIC:
        raise BracketError(
            f"endpoints must classify stationary/periodic, got "
            f"{lo_label}/{hi_label}", labels={lo: lo_label, hi: hi_label})
    while hi - lo > target_width:
        mid = 0.5 * (lo + hi)
        lab = label_at(mid)
        if lab is Regime.STATIONARY:
            lo = mid
        elif lab is Regime.PERIODIC:
            hi = mid
        else:
            raise BracketError(f"midpoint {mid:g} classified as {lab}",
                               labels={mid: lab})
    return SweepResult(lo, hi, lo_label, hi_label, tuple(evals))
