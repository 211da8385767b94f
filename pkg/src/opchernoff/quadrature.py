"""Adaptive quadrature on finite and infinite intervals.

Two entry points:

* :func:`integrate` for an arbitrary callable. Infinite endpoints are mapped
  to a finite interval with ``y = x / (1 - x^2)`` on ``(-inf, inf)`` and
  ``y = a + x / (1 - x)`` on ``(a, inf)`` (mirrored for ``(-inf, b)``).
* :func:`expectation` / :func:`convolution_expectation` for
  ``E[f(z + Z)]`` restricted to a range of ``Z``. These integrate a finite
  core and then walk each infinite side on nested truncations whose widths
  double, which is where divergence is detected. Jumps of ``f`` are never
  straddled: the range starts exactly at the support cutoff.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import _kernels_py, kernels
from .errors import Diverged, NonConvergent


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not 0 < self.abs_tol < 1:
            raise ValueError(f"abs_tol must be in (0, 1), got {self.abs_tol}")
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must be in (0, 1), got {self.rel_tol}")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    @classmethod
    def from_env(cls) -> "Tolerance":
        """Defaults overridden by ``OPCHERNOFF_ABS_TOL`` / ``OPCHERNOFF_REL_TOL``
        / ``OPCHERNOFF_MAX_SUBDIVISIONS``."""
        env = os.environ
        return cls(
            abs_tol=float(env.get("OPCHERNOFF_ABS_TOL", cls.abs_tol)),
            rel_tol=float(env.get("OPCHERNOFF_REL_TOL", cls.rel_tol)),
            max_subdivisions=int(env.get("OPCHERNOFF_MAX_SUBDIVISIONS", cls.max_subdivisions)),
        )

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    converged: bool
    evaluations: int
    diverged: bool = False


def _as_vectorized(f):
    mode = {}

    def g(y):
        if mode.get("vec", True):
            try:
                out = np.asarray(f(y), dtype=float)
                if out.shape == y.shape:
                    mode["vec"] = True
                    return out
            except (TypeError, ValueError):
                pass
            mode["vec"] = False
        return np.array([float(f(v)) for v in y])

    return g


def _guarded(f, y, jac):
    fy = f(y)
    with np.errstate(invalid="ignore", over="ignore"):
        out = fy * jac
    # f(y) == 0 far out may meet an infinite Jacobian
    return np.where(fy == 0.0, 0.0, out)


def integrate(f, a: float, b: float, tol: Tolerance = DEFAULT_TOL) -> QuadratureResult:
    """Adaptive 15-point Gauss-Kronrod estimate of the integral of f over (a, b).

    ``f`` may be scalar or vectorized. A run that exhausts
    ``tol.max_subdivisions`` returns with ``converged=False``; it does not
    raise.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"need a < b, got ({a}, {b})")
    fv = _as_vectorized(f)
    if math.isinf(a) and math.isinf(b):
        def g(x):
            d = 1.0 - x * x
            return _guarded(fv, x / d, (1.0 + x * x) / (d * d))
        lo, hi = -1.0, 1.0
    elif math.isinf(b):
        def g(x):
            d = 1.0 - x
            return _guarded(fv, a + x / d, 1.0 / (d * d))
        lo, hi = 0.0, 1.0
    elif math.isinf(a):
        def g(x):
            d = 1.0 - x
            return _guarded(fv, b - x / d, 1.0 / (d * d))
        lo, hi = 0.0, 1.0
    else:
        g, lo, hi = fv, a, b
    val, err, conv, nev = _kernels_py.adaptive_gk(
        g, lo, hi, tol.abs_tol, tol.rel_tol, tol.max_subdivisions)
    return QuadratureResult(val, err, bool(conv), nev)


# ---------------------------------------------------------------------------
# E[f(z + Z)] over a range of Z

MAX_DOUBLINGS = 900
GROWTH_RUN = 6
_SLOPE_SLACK = 1e-6


def _piece_fn(d, f, z, max_sub):
    """Return ``piece(a, b, abs_tol, rel_tol)`` integrating p(y) f(z+y)."""
    if d.kernel is not None and f.kernel is not None:
        dcode, dparams = d.kernel
        wcode, wparams = f.kernel
        wp = np.asarray(wparams, dtype=float)
        impl = kernels.catalog_integral

        def piece(a, b, at, rt):
            return impl(dcode, dparams, wcode, wp, z, a, b, at, rt, max_sub)
        return piece

    pdf, ev = d.pdf, f.eval

    def func(y):
        py = pdf(y)
        with np.errstate(invalid="ignore", over="ignore"):
            out = py * ev(z + y)
        return np.where(py == 0.0, 0.0, out)

    def piece(a, b, at, rt):
        return _kernels_py.adaptive_gk(func, a, b, at, rt, max_sub)
    return piece


class _Acc:
    __slots__ = ("total", "err", "nev", "ok", "diverged")

    def __init__(self):
        self.total = 0.0
        self.err = 0.0
        self.nev = 0
        self.ok = True
        self.diverged = False

    def add(self, v, e, c, n):
        self.total += v
        self.err += e
        self.nev += n
        self.ok = self.ok and bool(c)
        if not math.isfinite(v):
            self.diverged = True


def _walk_tail(piece, edge, direction, scale, tol, acc):
    """Integrate from ``edge`` to +/-inf on pieces of doubling width.

    Stops when the geometric tail estimate ``|I_k| rho / (1 - rho)`` is
    below the error budget. Declares divergence when the log-ratio of
    successive increments is nonnegative and non-decreasing for
    ``GROWTH_RUN`` consecutive doublings, or when a piece overflows.
    """
    width = scale
    t = edge
    prev = None
    prev_slope = None
    run = 0
    for k in range(MAX_DOUBLINGS):
        target = tol.target(acc.total)
        a, b = (t, t + width) if direction > 0 else (t - width, t)
        v, e, c, n = piece(a, b, 0.125 * target * 0.5 ** k, 0.5 * tol.rel_tol)
        acc.add(v, e, c, n)
        if acc.diverged:
            return
        cur = abs(v)
        if prev is not None:
            if cur == 0.0:
                return
            if prev > 0.0:
                rho = cur / prev
                slope = math.log(rho)
                if slope >= 0.0 and (prev_slope is None or slope >= prev_slope - _SLOPE_SLACK):
                    run += 1
                else:
                    run = 0
                if run >= GROWTH_RUN:
                    acc.diverged = True
                    return
                prev_slope = slope
                if rho < 1.0:
                    est = cur * rho / (1.0 - rho)
                    if est <= 0.125 * tol.target(acc.total):
                        acc.err += est
                        return
        prev = cur
        t = t + direction * width
        width *= 2.0
    acc.ok = False


def expectation(d, f, z: float = 0.0, lo: float = -math.inf, hi: float = math.inf,
                tol: Tolerance = DEFAULT_TOL) -> QuadratureResult:
    """Integral of ``p(y) f(z + y)`` over ``y`` in ``(lo, hi)``.

    Never raises on numerical trouble: the result carries ``converged`` and
    ``diverged`` flags. ``d`` is a :class:`~opchernoff.distributions.Distribution`
    (or anything with ``support``, ``pdf``, ``kernel``, ``center``,
    ``scale``) and ``f`` a :class:`~opchernoff.shift.ShiftFunction`.
    """
    z = float(z)
    s_lo, s_hi = d.support
    lo = max(float(lo), s_lo)
    hi = min(float(hi), s_hi)
    if f.support_cutoff is not None:
        lo = max(lo, f.support_cutoff - z)
    if not lo < hi:
        return QuadratureResult(0.0, 0.0, True, 0)

    piece = _piece_fn(d, f, z, tol.max_subdivisions)
    scale = d.scale
    if math.isfinite(lo):
        left = lo
    else:
        left = d.center - scale
        if math.isfinite(hi):
            left = min(left, hi - scale)
    if math.isfinite(hi):
        right = hi
    else:
        right = max(d.center + scale, left + scale)
    acc = _Acc()
    v, e, c, n = piece(left, right, 0.5 * tol.abs_tol, 0.5 * tol.rel_tol)
    acc.add(v, e, c, n)
    if not acc.diverged and math.isinf(hi):
        _walk_tail(piece, right, +1, scale, tol, acc)
    if not acc.diverged and math.isinf(lo):
        _walk_tail(piece, left, -1, scale, tol, acc)
    if acc.diverged:
        return QuadratureResult(acc.total, math.inf, False, acc.nev, diverged=True)
    converged = acc.ok and acc.err <= tol.target(acc.total)
    return QuadratureResult(acc.total, acc.err, converged, acc.nev)


def convolution_expectation(d, f, z: float, tol: Tolerance = DEFAULT_TOL) -> QuadratureResult:
    """``E[f(z + Z)] = integral of f(z + y) p(y) dy``, the operator
    ``P(-q) f(z)`` realized by quadrature.

    Raises :class:`Diverged` when the truncations grow without bound and
    :class:`NonConvergent` when the error target is missed.
    """
    res = expectation(d, f, z, tol=tol)
    if res.diverged:
        raise Diverged(f"E[{f.name}(z + Z)] diverges for {d.label} at z={z}", res)
    if not res.converged:
        raise NonConvergent(
            f"E[{f.name}(z + Z)] for {d.label}: error {res.error_estimate:.3g} "
            f"above target", res)
    return res
