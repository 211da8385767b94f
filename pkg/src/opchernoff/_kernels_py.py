"""Pure-Python adaptive Gauss-Kronrod kernels.

This is the reference implementation of the hot loop. ``_kernels.pyx``
mirrors :func:`catalog_integral` and :func:`eval_integrand` with the same
rule, the same bisection order and the same integrand codes, so both
backends return the same numbers up to floating-point reassociation.

Integrand codes
---------------
A catalog integrand is ``p(y) * w(z + y)`` where ``p`` is a catalog density
and ``w`` a weight. Densities take a 3-vector of parameters whose last
entry is the precomputed log normalizer:

====  ===========  =============================
code  density      dparams
====  ===========  =============================
0     normal       (mu, sigma, log(sigma*sqrt(2pi)))
1     exponential  (rate, log(rate), 0)
2     gamma        (shape, scale, lgamma(shape) + shape*log(scale))
3     uniform      (a, b, log(b - a))
4     lognormal    (mu, sigma, log(sigma*sqrt(2pi)))
====  ===========  =============================

====  ==========  ==============================================
code  weight      w(s)
====  ==========  ==============================================
0     one         1
1     power       s**alpha for s > 0, else 0
2     exp         exp(alpha*s)
3     trunc-exp   exp(alpha*s) for s > 0, else 0
4     step        1 for s > 0, else 0
5     logistic    1 / (1 + exp(-s/alpha))
6     polynomial  sum_k c_k s**k   (wparams holds c_0 ... c_K)
====  ==========  ==============================================
"""
from __future__ import annotations

import heapq
import math

import numpy as np

# QUADPACK qk15 abscissae (descending, last is the centre) and weights.
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss-7 weights for XGK[1], XGK[3], XGK[5], XGK[7].
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Node layout on [-1, 1]: 7 negative, centre, 7 positive.
_NODES = np.concatenate([-XGK[:7], [0.0], XGK[6::-1]])
_KW = np.concatenate([WGK[:7], [WGK[7]], WGK[6::-1]])
_GIDX = np.array([1, 3, 5, 7, 9, 11, 13])
_GW = np.concatenate([WG[:3], [WG[3]], WG[2::-1]])

NORMAL, EXPONENTIAL, GAMMA, UNIFORM, LOGNORMAL = range(5)
W_ONE, W_POWER, W_EXP, W_TRUNC_EXP, W_STEP, W_LOGISTIC, W_POLY = range(7)


def gk15(func, a, b):
    """One 15-point Kronrod panel with the embedded 7-point Gauss estimate.

    Returns ``(kronrod, |kronrod - gauss|)``. ``func`` is called once with
    a length-15 array.
    """
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    fx = np.asarray(func(centre + half * _NODES), dtype=float)
    k = half * float(_KW @ fx)
    g = half * float(_GW @ fx[_GIDX])
    return k, abs(k - g)


def adaptive_gk(func, a, b, abs_tol, rel_tol, max_sub):
    """Globally adaptive bisection on the panel with the largest error.

    ``a`` and ``b`` must be finite. Returns
    ``(value, error, converged, evaluations)``.
    """
    val, err = gk15(func, a, b)
    nev = 15
    # heap of (-err, a, b, val, err)
    heap = [(-err, a, b, val, err)]
    total, total_err = val, err
    nsub = 1
    while total_err > max(abs_tol, rel_tol * abs(total)):
        if nsub >= max_sub or not math.isfinite(total):
            return total, total_err, False, nev
        _, pa, pb, pval, perr = heapq.heappop(heap)
        mid = 0.5 * (pa + pb)
        if not (pa < mid < pb):
            # panel below floating-point resolution
            heapq.heappush(heap, (0.0, pa, pb, pval, perr))
            return total, total_err, False, nev
        lv, le = gk15(func, pa, mid)
        rv, re = gk15(func, mid, pb)
        nev += 30
        nsub += 1
        total += lv + rv - pval
        total_err += le + re - perr
        heapq.heappush(heap, (-le, pa, mid, lv, le))
        heapq.heappush(heap, (-re, mid, pb, rv, re))
    # re-sum to shed the drift of incremental updates
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(item[4] for item in heap)
    return total, total_err, True, nev


def log_density(dcode, dparams, y):
    y = np.asarray(y, dtype=float)
    p0, p1, p2 = dparams[0], dparams[1], dparams[2]
    out = np.full(y.shape, -np.inf)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if dcode == NORMAL:
            u = (y - p0) / p1
            out = -0.5 * u * u - p2
        elif dcode == EXPONENTIAL:
            m = y >= 0.0
            out[m] = p1 - p0 * y[m]
        elif dcode == GAMMA:
            m = y > 0.0
            out[m] = (p0 - 1.0) * np.log(y[m]) - y[m] / p1 - p2
        elif dcode == UNIFORM:
            m = (y >= p0) & (y <= p1)
            out[m] = -p2
        elif dcode == LOGNORMAL:
            m = y > 0.0
            ly = np.log(y[m])
            u = (ly - p0) / p1
            out[m] = -0.5 * u * u - ly - p2
        else:
            raise ValueError(f"unknown density code {dcode}")
    return out


def log_weight(wcode, wparams, s):
    s = np.asarray(s, dtype=float)
    alpha = wparams[0] if len(wparams) else 0.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if wcode == W_ONE:
            return np.zeros(s.shape)
        if wcode == W_POWER:
            out = np.full(s.shape, -np.inf)
            m = s > 0.0
            out[m] = 0.0 if alpha == 0.0 else alpha * np.log(s[m])
            return out
        if wcode == W_EXP:
            return alpha * s
        if wcode == W_TRUNC_EXP:
            return np.where(s > 0.0, alpha * s, -np.inf)
        if wcode == W_STEP:
            return np.where(s > 0.0, 0.0, -np.inf)
        if wcode == W_LOGISTIC:
            t = s / alpha
            return np.where(t >= 0.0, -np.log1p(np.exp(-np.abs(t))),
                            t - np.log1p(np.exp(-np.abs(t))))
    raise ValueError(f"weight code {wcode} has no log form")


def eval_integrand(dcode, dparams, wcode, wparams, z, y):
    """Vectorized ``p(y) * w(z + y)``."""
    y = np.asarray(y, dtype=float)
    lp = log_density(dcode, dparams, y)
    with np.errstate(over="ignore", invalid="ignore"):
        if wcode == W_POLY:
            s = z + y
            poly = np.zeros(y.shape)
            for c in reversed(list(wparams)):
                poly = poly * s + c
            return np.where(np.isneginf(lp), 0.0, np.exp(lp) * poly)
        lw = log_weight(wcode, wparams, z + y)
        tot = lp + lw
        return np.where(np.isneginf(tot), 0.0, np.exp(tot))


def catalog_integral(dcode, dparams, wcode, wparams, z, a, b,
                     abs_tol, rel_tol, max_sub):
    """Integrate ``p(y) * w(z + y)`` over the finite interval ``[a, b]``."""
    dparams = tuple(float(v) for v in dparams)
    wparams = np.asarray(wparams, dtype=float)

    def func(y):
        return eval_integrand(dcode, dparams, wcode, wparams, z, y)

    return adaptive_gk(func, float(a), float(b), abs_tol, rel_tol, int(max_sub))
