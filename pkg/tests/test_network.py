"""NetworkSpec / NetworkState / TimeGrid container invariants."""

import numpy as np
import pytest

from hhrdnet.errors import ConfigError, DomainError
from hhrdnet.grid import SpatialConfig
from hhrdnet.model import ModelParams
from hhrdnet.network import NetworkSpec, NetworkState, TimeGrid


def _spec(nn=2, nx=5, **kw):
    args = dict(model=ModelParams(), spatial=SpatialConfig(node_count=nx),
                current=np.zeros((nn, nx)), coupling=np.zeros((nn, nn, nx)))
    args.update(kw)
    return NetworkSpec(**args)


def test_spec_freezes_and_copies_inputs():
    cur = np.ones((1, 5))
    spec = _spec(nn=1, current=cur)
    cur[0, 0] = 99.0
    assert spec.current[0, 0] == 1.0
    assert not spec.current.flags.writeable
    assert not spec.coupling.flags.writeable
    with pytest.raises(ValueError):
        spec.current[0, 0] = 0.0


def test_spec_counts_and_coupling_flag():
    spec = _spec()
    assert spec.neuron_count == 2
    assert not spec.has_coupling
    coup = np.zeros((2, 2, 5))
    coup[1, 0, 3] = 0.5
    assert _spec(coupling=coup).has_coupling


@pytest.mark.parametrize("bad", [
    dict(current=np.zeros((2, 4))),            # node count mismatch
    dict(current=np.zeros(5)),                 # wrong rank
    dict(current=np.zeros((0, 5))),            # no neurons
    dict(coupling=np.zeros((2, 2, 4))),        # node count mismatch
    dict(coupling=np.zeros((2, 3, 5))),        # non-square
    dict(current=np.full((2, 5), np.nan)),     # non-finite drive
])
def test_spec_shape_and_finiteness_validation(bad):
    with pytest.raises(ConfigError):
        _spec(**bad)


def test_spec_rejects_negative_and_self_coupling():
    coup = np.zeros((2, 2, 5))
    coup[0, 1, 0] = -1.0
    with pytest.raises(ConfigError):
        _spec(coupling=coup)
    coup = np.zeros((2, 2, 5))
    coup[1, 1, 2] = 0.3
    with pytest.raises(ConfigError):
        _spec(coupling=coup)


def test_state_constant_shared_quadruple():
    st = NetworkState.constant(2, 4, (1.0, 0.2, 0.3, 0.4))
    assert st.data.shape == (2, 4, 4)
    assert np.all(st.v == 1.0)
    assert np.all(st.n == 0.2)
    assert np.all(st.m == 0.3)
    assert np.all(st.h == 0.4)


def test_state_constant_per_neuron():
    st = NetworkState.constant(2, 3, [(1.0, 1.0, 1.0, 1.0),
                                      (0.0, 0.0, 0.0, 0.0)])
    assert np.all(st.data[0] == 1.0)
    assert np.all(st.data[1] == 0.0)
    with pytest.raises(DomainError):
        NetworkState.constant(2, 3, [(1.0, 1.0, 1.0)])


def test_state_copy_is_independent():
    st = NetworkState.constant(1, 3, (0.0, 0.0, 0.0, 0.0))
    dup = st.copy()
    dup.data[0, 0, 0] = 5.0
    assert st.data[0, 0, 0] == 0.0


def test_state_rejects_wrong_shapes():
    with pytest.raises(DomainError):
        NetworkState(np.zeros((2, 3, 4)))
    with pytest.raises(DomainError):
        NetworkState(np.zeros((4, 5)))


def test_time_grid_steps_and_defaults():
    tg = TimeGrid()
    assert tg.dt == 0.01 and tg.t_end == 500.0
    assert tg.n_steps == 50000
    assert TimeGrid(dt=0.1, t_end=1.0).n_steps == 10
    assert TimeGrid(dt=0.01, t_end=0.0).n_steps == 0


@pytest.mark.parametrize("kw", [dict(dt=0.0), dict(dt=-0.01),
                                dict(t_end=-1.0), dict(record_stride=0),
                                dict(dt=0.3, t_end=1.0)])
def test_time_grid_validation(kw):
    with pytest.raises(ConfigError):
        TimeGrid(**kw)
