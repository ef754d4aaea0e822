"""Numpy fallback stepping kernels.

Mirrors the compiled extension's interface exactly; the update order of
every in-place operation matches the compiled loops so that both
backends apply identical floating-point operations (remaining
differences come only from the exp/expm1 implementations).

Array arguments (all float64, preallocated by the caller):
``y`` is the state ``(neurons, 4, nodes)``; ``pv`` packs the model
scalars ``(g_na, g_k, g_l, e_na, e_k, e_l, 1/C, s_rev, lambda, theta)``;
``dh2`` is diffusion / spacing^2; ``gam`` is scratch for the coupling
sigmoid.
"""

import numpy as np

from .model import _expm1_ratio as _phi
from .model import _sigmoid as _sig


def _rates(v):
    an = 0.1 * _phi(1.0 - 0.1 * v)
    am = _phi(2.5 - 0.1 * v)
    ah = 0.07 * np.exp(-v / 20.0)
    bn = 0.125 * np.exp(-v / 80.0)
    bm = 4.0 * np.exp(-v / 18.0)
    bh = _sig(0.1 * v - 3.0)
    return an, am, ah, bn, bm, bh


def _laplacian_into(v, out):
    out[:, 1:-1] = (v[:, :-2] - 2.0 * v[:, 1:-1] + v[:, 2:])
    out[:, 0] = 2.0 * (v[:, 1] - v[:, 0])
    out[:, -1] = 2.0 * (v[:, -2] - v[:, -1])


def _v_rhs(v, y, out, cur, coup, has_coup, pv, dh2, gam):
    # Voltage equation only; gates read from y, voltage from v.
    g_na, g_k, g_l, e_na, e_k, e_l, inv_c, s_rev, lam, theta = pv
    n = y[:, 1]
    m = y[:, 2]
    h = y[:, 3]
    lap = np.empty_like(v)
    _laplacian_into(v, lap)
    ionic = (cur + g_na * (m * m * m) * h * (e_na - v)
             + g_k * (n * n * n * n) * (e_k - v) + g_l * (e_l - v))
    out[...] = ionic * inv_c + lap * dh2
    if has_coup:
        gam[...] = _sig(lam * (v - theta))
        out += (s_rev - v) * np.einsum("ijk,jk->ik", coup, gam)


def rhs_full(y, out, cur, coup, has_coup, pv, dh2, gam):
    v = y[:, 0]
    _v_rhs(v, y, out[:, 0], cur, coup, has_coup, pv, dh2, gam)
    an, am, ah, bn, bm, bh = _rates(v)
    n = y[:, 1]
    m = y[:, 2]
    h = y[:, 3]
    out[:, 1] = an * (1.0 - n) - bn * n
    out[:, 2] = am * (1.0 - m) - bm * m
    out[:, 3] = ah * (1.0 - h) - bh * h


def rk4_step(y, cur, coup, has_coup, pv, dh2, dt, k1, k2, k3, k4, yt, gam):
    half = 0.5 * dt
    rhs_full(y, k1, cur, coup, has_coup, pv, dh2, gam)
    np.multiply(k1, half, out=yt)
    yt += y
    rhs_full(yt, k2, cur, coup, has_coup, pv, dh2, gam)
    np.multiply(k2, half, out=yt)
    yt += y
    rhs_full(yt, k3, cur, coup, has_coup, pv, dh2, gam)
    np.multiply(k3, dt, out=yt)
    yt += y
    rhs_full(yt, k4, cur, coup, has_coup, pv, dh2, gam)
    k2 += k3
    k2 *= 2.0
    k2 += k1
    k2 += k4
    k2 *= dt / 6.0
    y += k2


def v_rk4_step(y, cur, coup, has_coup, pv, dh2, dt, kv1, kv2, kv3, kv4, vt, gam):
    # RK4 on the voltage block only, gates frozen.
    half = 0.5 * dt
    v = y[:, 0]
    _v_rhs(v, y, kv1, cur, coup, has_coup, pv, dh2, gam)
    np.multiply(kv1, half, out=vt)
    vt += v
    _v_rhs(vt, y, kv2, cur, coup, has_coup, pv, dh2, gam)
    np.multiply(kv2, half, out=vt)
    vt += v
    _v_rhs(vt, y, kv3, cur, coup, has_coup, pv, dh2, gam)
    np.multiply(kv3, dt, out=vt)
    vt += v
    _v_rhs(vt, y, kv4, cur, coup, has_coup, pv, dh2, gam)
    kv2 += kv3
    kv2 *= 2.0
    kv2 += kv1
    kv2 += kv4
    kv2 *= dt / 6.0
    v += kv2


def gate_exact(y, dt):
    """Relax each gate toward its frozen-voltage steady state.

    Uses the closed-form solution of the linear gate equation; output is
    clamped to the convex hull of {x, 0, 1}, so values inside [0, 1]
    stay inside exactly.
    """
    v = y[:, 0]
    an, am, ah, bn, bm, bh = _rates(v)
    for idx, a, b in ((1, an, bn), (2, am, bm), (3, ah, bh)):
        s = a + b
        x_inf = a / s
        w = np.exp(-dt * s)
        x = y[:, idx]
        xr = x_inf + (x - x_inf) * w
        np.clip(xr, np.minimum(x, 0.0), np.maximum(x, 1.0), out=y[:, idx])


def scan_state(y, v_limit, t, vext, vnode, gext, gloc):
    """Blow-up check plus running extrema update for one state.

    Returns ``None`` when the state is trusted, else a tuple
    ``(neuron, component, node, value)`` locating an offending entry.
    ``vext``/``vnode`` accumulate per-neuron voltage extrema with their
    times and nodes; ``gext``/``gloc`` accumulate global gate extrema.
    """
    if not np.isfinite(y).all():
        flat = int(np.flatnonzero(~np.isfinite(y).ravel())[0])
        i, c, k = np.unravel_index(flat, y.shape)
        return int(i), int(c), int(k), float(y[i, c, k])
    v = y[:, 0]
    av = np.abs(v)
    if av.max() > v_limit:
        flat = int(np.flatnonzero((av > v_limit).ravel())[0])
        i, k = np.unravel_index(flat, v.shape)
        return int(i), 0, int(k), float(v[i, k])

    kmin = v.argmin(axis=1)
    kmax = v.argmax(axis=1)
    rows = np.arange(v.shape[0])
    smin = v[rows, kmin]
    smax = v[rows, kmax]
    lower = smin < vext[0]
    upper = smax > vext[1]
    vext[0][lower] = smin[lower]
    vext[2][lower] = t
    vnode[0][lower] = kmin[lower]
    vext[1][upper] = smax[upper]
    vext[3][upper] = t
    vnode[1][upper] = kmax[upper]

    g = y[:, 1:4]
    gmin = float(g.min())
    if gmin < gext[0]:
        i, c, k = np.unravel_index(int(g.argmin()), g.shape)
        gext[0] = gmin
        gext[2] = t
        gloc[0:3] = (i, c + 1, k)
    gmax = float(g.max())
    if gmax > gext[1]:
        i, c, k = np.unravel_index(int(g.argmax()), g.shape)
        gext[1] = gmax
        gext[3] = t
        gloc[3:6] = (i, c + 1, k)
    return None
