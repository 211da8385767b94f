"""Guarded one-dimensional minimization.

A 64-point seed grid locates the basin (objectives may be ``+inf`` on part
of the domain), then golden-section search refines between the grid
neighbours of the best point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoFiniteValue

GRID_POINTS = 64
DEFAULT_XTOL = 1e-9
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ScalarMinimum:
    argmin: float
    value: float
    evaluations: int
    bracketed: bool
    domain_clipped: bool


def seed_grid(lo: float, hi: float, n: int = GRID_POINTS, kind: str = "auto") -> np.ndarray:
    """``n`` interior points of the open interval ``(lo, hi)``.

    ``kind="auto"`` picks a geometric grid when ``lo > 0`` and the domain
    spans at least three decades, uniform otherwise.
    """
    if kind == "auto":
        kind = "geometric" if lo > 0 and hi / lo >= 1e3 else "uniform"
    if kind == "geometric":
        return np.geomspace(lo, hi, n + 2)[1:-1]
    return np.linspace(lo, hi, n + 2)[1:-1]


def _safe(g, x):
    v = float(g(x))
    if math.isnan(v):
        return math.inf
    return v


def minimize_scalar(g, domain: tuple, tol: float = DEFAULT_XTOL,
                    grid: str = "auto") -> ScalarMinimum:
    """Minimize ``g`` over the open interval ``domain``.

    ``g`` may return ``+inf`` (worse than any finite value). Raises
    :class:`NoFiniteValue` when every seed point is infinite.
    """
    lo, hi = float(domain[0]), float(domain[1])
    if not (lo < hi and math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError(f"need a finite interval lo < hi, got {domain}")
    xs = seed_grid(lo, hi, GRID_POINTS, grid)
    fs = np.array([_safe(g, x) for x in xs])
    nev = len(xs)
    if not np.any(np.isfinite(fs)):
        raise NoFiniteValue(f"objective is +inf on the whole seed grid over {domain}")
    i = int(np.argmin(fs))
    clipped = i == 0 or i == len(xs) - 1
    a = xs[i - 1] if i > 0 else lo
    b = xs[i + 1] if i < len(xs) - 1 else hi
    best_x, best_f = float(xs[i]), float(fs[i])

    # golden section on [a, b]
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = _safe(g, c), _safe(g, d)
    nev += 2
    while abs(b - a) > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = _safe(g, c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = _safe(g, d)
        nev += 1
        for x, f in ((c, fc), (d, fd)):
            if f < best_f:
                best_x, best_f = x, f
    bracketed = not clipped and best_f <= fs[i - 1] and best_f <= fs[i + 1]
    return ScalarMinimum(float(best_x), float(best_f), nev, bool(bracketed), bool(clipped))
