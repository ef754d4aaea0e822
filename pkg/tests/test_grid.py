"""Grid construction, step profiles, and the zero-flux Laplacian."""

import numpy as np
import pytest

from hhrdnet.errors import ConfigError, DomainError
from hhrdnet.grid import (SpatialConfig, StepProfile, build_grid,
                          laplacian_neumann, sample_step_profile)


def test_build_grid_endpoints_and_spacing():
    cfg = SpatialConfig(a=0.0, b=100.0, node_count=101)
    x = build_grid(cfg)
    assert x[0] == 0.0 and x[-1] == 100.0
    assert x.size == 101
    assert cfg.spacing == 1.0
    assert np.allclose(np.diff(x), 1.0, rtol=0.0, atol=1e-12)


def test_build_grid_nontrivial_interval():
    cfg = SpatialConfig(a=-2.5, b=7.5, node_count=11)
    x = build_grid(cfg)
    assert x[0] == -2.5 and x[-1] == 7.5
    assert cfg.spacing == pytest.approx(1.0)


@pytest.mark.parametrize("kw", [dict(a=1.0, b=1.0), dict(a=5.0, b=-5.0),
                                dict(node_count=2), dict(node_count=0),
                                dict(diffusion=-1.0)])
def test_spatial_config_validation(kw):
    with pytest.raises(ConfigError):
        SpatialConfig(**kw)


def test_left_step_selects_exactly_the_first_tenth():
    # Cut at span/10 on 101 nodes: nodes 0..9 high, node 10 (= the cut
    # position itself) already low.
    x = build_grid(SpatialConfig())
    prof = StepProfile(high_value=130.0, boundary_fraction=0.1)
    vals = sample_step_profile(prof, x)
    assert np.all(vals[:10] == 130.0)
    assert np.all(vals[10:] == 0.0)


def test_right_step_includes_the_cut_node():
    x = build_grid(SpatialConfig())
    prof = StepProfile(high_value=1.0, boundary_fraction=0.1, high_side="right")
    vals = sample_step_profile(prof, x)
    assert np.all(vals[:90] == 0.0)
    assert np.all(vals[90:] == 1.0)


def test_step_profile_low_value_and_full_fraction():
    x = build_grid(SpatialConfig(node_count=11))
    vals = sample_step_profile(StepProfile(7.0, low_value=-1.0,
                                           boundary_fraction=0.3), x)
    assert np.all(vals[:3] == 7.0) and np.all(vals[3:] == -1.0)
    everywhere = sample_step_profile(StepProfile(2.0, boundary_fraction=1.0,
                                                 high_side="right"), x)
    assert np.all(everywhere == 2.0)
    nowhere = sample_step_profile(StepProfile(2.0, boundary_fraction=0.0), x)
    assert np.all(nowhere == 0.0)


def test_step_profile_survives_inexact_spans():
    # A domain whose span/10 is not exactly representable must still put
    # the nominal number of nodes on the high side.
    cfg = SpatialConfig(a=0.0, b=0.3, node_count=31)
    x = build_grid(cfg)
    vals = sample_step_profile(StepProfile(1.0, boundary_fraction=0.1), x)
    assert int(vals.sum()) == 3


@pytest.mark.parametrize("kw", [dict(boundary_fraction=-0.1),
                                dict(boundary_fraction=1.5),
                                dict(high_side="top")])
def test_step_profile_validation(kw):
    with pytest.raises(ConfigError):
        StepProfile(1.0, **kw)


def test_sample_step_profile_rejects_bad_grids():
    with pytest.raises(DomainError):
        sample_step_profile(StepProfile(1.0), np.zeros((3, 3)))
    with pytest.raises(DomainError):
        sample_step_profile(StepProfile(1.0), [0.0])


def test_laplacian_constant_is_zero():
    u = np.full(17, 4.2)
    assert np.all(laplacian_neumann(u, 0.5) == 0.0)


def test_laplacian_interior_matches_second_difference():
    rng = np.random.default_rng(7)
    u = rng.normal(size=25)
    h = 0.25
    lap = laplacian_neumann(u, h)
    want = (u[:-2] - 2.0 * u[1:-1] + u[2:]) / h ** 2
    assert np.allclose(lap[1:-1], want, rtol=1e-14, atol=0.0)
    assert lap[0] == 2.0 * (u[1] - u[0]) / h ** 2
    assert lap[-1] == 2.0 * (u[-2] - u[-1]) / h ** 2


def test_laplacian_discrete_conservation(rng):
    # Trapezoid-weighted sum telescopes to zero: no flux enters or
    # leaves through the mirrored ends.
    u = rng.normal(size=41)
    lap = laplacian_neumann(u, 1.0)
    weights = np.ones(41)
    weights[0] = weights[-1] = 0.5
    assert abs(np.sum(weights * lap)) < 1e-11 * np.abs(lap).max()


def test_laplacian_second_order_on_cosine():
    # u = cos(pi x / L) has zero slope at both ends, so the mirrored
    # stencil keeps the error O(h^2); halving h must quarter the error.
    L = 100.0
    errs = []
    for n in (101, 201, 401):
        cfg = SpatialConfig(a=0.0, b=L, node_count=n)
        x = build_grid(cfg)
        u = np.cos(np.pi * x / L)
        exact = -(np.pi / L) ** 2 * np.cos(np.pi * x / L)
        errs.append(np.abs(laplacian_neumann(u, cfg.spacing) - exact).max())
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
    for order in orders:
        assert 1.8 <= order <= 2.2


def test_laplacian_rejects_bad_input():
    with pytest.raises(DomainError):
        laplacian_neumann(np.zeros(2), 1.0)
    with pytest.raises(DomainError):
        laplacian_neumann(np.zeros((4, 4)), 1.0)
    with pytest.raises(DomainError):
        laplacian_neumann(np.zeros(5), 0.0)
