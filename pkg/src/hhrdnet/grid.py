"""Uniform 1-D grid, zero-flux Laplacian, and step-shaped spatial profiles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

# Nodes this close to a step edge (relative to the domain span) are
# treated as sitting exactly on it, so nominal edges like span/10 land
# on the intended node despite rounding in fraction * span.
_EDGE_SNAP = 1.0e-12


@dataclass(frozen=True)
class SpatialConfig:
    """Interval [a, b] discretized by equally spaced nodes.

    ``diffusion`` is the voltage diffusion coefficient; zero turns the
    cable term off (space-clamped dynamics on every node).
    """

    a: float = 0.0
    b: float = 100.0
    node_count: int = 101
    diffusion: float = 1.0

    def __post_init__(self):
        if not self.b > self.a:
            raise ConfigError("domain must satisfy b > a")
        if int(self.node_count) != self.node_count or self.node_count < 3:
            raise ConfigError("node_count must be an integer >= 3")
        if self.diffusion < 0.0:
            raise ConfigError("diffusion must be nonnegative")

    @property
    def spacing(self) -> float:
        return (self.b - self.a) / (self.node_count - 1)


@dataclass(frozen=True)
class StepProfile:
    """Piecewise-constant profile: one value near a boundary, another elsewhere.

    ``boundary_fraction`` of the span, measured from the chosen side,
    takes ``high_value``.  On the left side the cut itself belongs to the
    low region (strictly ``x < a + fraction * span``); on the right side
    it belongs to the high region (``x >= b - fraction * span``).
    """

    high_value: float
    low_value: float = 0.0
    boundary_fraction: float = 0.1
    high_side: str = "left"

    def __post_init__(self):
        if not 0.0 <= self.boundary_fraction <= 1.0:
            raise ConfigError("boundary_fraction must lie in [0, 1]")
        if self.high_side not in ("left", "right"):
            raise ConfigError("high_side must be 'left' or 'right'")


def build_grid(config: SpatialConfig) -> np.ndarray:
    """Node positions a + i * spacing, with both endpoints exact."""
    return np.linspace(config.a, config.b, config.node_count)


def sample_step_profile(profile: StepProfile, grid) -> np.ndarray:
    """Evaluate a step profile on grid nodes.

    Nodes within a relative tolerance of the cut position count as
    exactly on it, so a cut at one tenth of the span selects exactly the
    first tenth of the nodes regardless of rounding.
    """
    x = np.asarray(grid, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise DomainError("grid must be a 1-D array with at least two nodes")
    a, b = float(x[0]), float(x[-1])
    span = b - a
    snap = _EDGE_SNAP * max(abs(span), 1.0)
    cut = profile.boundary_fraction * span
    if profile.high_side == "left":
        mask = x < a + cut - snap
    else:
        mask = x >= b - cut - snap
    return np.where(mask, profile.high_value, profile.low_value).astype(float)


def laplacian_neumann(u, spacing) -> np.ndarray:
    """Second difference of ``u`` with mirrored (zero-flux) endpoints.

    The end stencils are ``2 (u[1] - u[0]) / spacing**2`` and its mirror,
    which keeps second-order accuracy for profiles with vanishing
    boundary slope and makes the trapezoid-weighted sum of the output
    exactly telescoping (discrete conservation).
    """
    v = np.asarray(u, dtype=float)
    if v.ndim != 1 or v.size < 3:
        raise DomainError("u must be a 1-D array with at least three nodes")
    if not spacing > 0.0:
        raise DomainError("spacing must be strictly positive")
    inv_h2 = 1.0 / (spacing * spacing)
    out = np.empty_like(v)
    out[1:-1] = (v[:-2] - 2.0 * v[1:-1] + v[2:]) * inv_h2
    out[0] = 2.0 * (v[1] - v[0]) * inv_h2
    out[-1] = 2.0 * (v[-2] - v[-1]) * inv_h2
    return out
