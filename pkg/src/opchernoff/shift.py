"""Shift functions f used in the operational ratio E[f(z + Z)] / f(x + z).

Every catalog entry carries an analytic derivative oracle (high-order
finite differences are useless) and, where possible, a kernel code so the
compiled quadrature can evaluate ``p(y) * f(z + y)`` natively.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import polynomial as P

from . import _kernels_py as K
from .errors import SpecError


@dataclass(frozen=True, eq=False)
class ShiftFunction:
    name: str
    params: tuple
    eval: Callable[[np.ndarray], np.ndarray]
    derivative: Optional[Callable[[int, float], float]] = None
    nondecreasing: bool = True
    sam_claimed: bool = False
    support_cutoff: Optional[float] = None
    kernel: Optional[tuple] = field(default=None, repr=False)

    def __call__(self, w):
        return self.eval(w)

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}:" + ",".join(repr(float(p)) for p in self.params)


def _step(w):
    w = np.asarray(w, dtype=float)
    return np.where(w > 0, 1.0, np.where(w == 0, 0.5, 0.0))


def exp_fn(alpha: float) -> ShiftFunction:
    """``e^{alpha w}``; strictly absolutely monotonic for ``alpha > 0``."""
    alpha = float(alpha)

    def ev(w):
        with np.errstate(over="ignore"):
            return np.exp(alpha * np.asarray(w, dtype=float))

    def der(n, w):
        if n == 0:
            return math.exp(alpha * w)
        return alpha ** n * math.exp(alpha * w)

    return ShiftFunction("exp", (alpha,), ev, der, nondecreasing=alpha >= 0,
                         sam_claimed=alpha > 0, kernel=(K.W_EXP, (alpha,)))


def constant_fn(c: float = 1.0) -> ShiftFunction:
    c = float(c)
    if c < 0:
        raise ValueError("shift functions are nonnegative")

    def ev(w):
        return np.full(np.shape(w), c)

    def der(n, w):
        return c if n == 0 else 0.0

    kernel = (K.W_ONE, ()) if c == 1.0 else (K.W_POLY, (c,))
    return ShiftFunction("const", (c,), ev, der, kernel=kernel)


def step_fn() -> ShiftFunction:
    """Heaviside step with ``u(0) = 1/2``."""

    def der(n, w):
        if n == 0:
            return float(_step(w))
        return 0.0

    return ShiftFunction("step", (), _step, der, support_cutoff=0.0,
                         kernel=(K.W_STEP, ()))


def _falling(alpha, n):
    out = 1.0
    for k in range(n):
        out *= alpha - k
    return out


def power_fn(alpha: float) -> ShiftFunction:
    """``w^alpha u(w)``; at ``alpha = 0`` this is the step on ``w > 0``."""
    alpha = float(alpha)
    if alpha < 0:
        raise ValueError("power exponent must be >= 0")

    def ev(w):
        w = np.asarray(w, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            pos = np.where(w > 0, w, 1.0)
            return np.where(w > 0, pos ** alpha, 0.0)

    def der(n, w):
        if w <= 0:
            return 0.0
        c = _falling(alpha, n)
        return 0.0 if c == 0.0 else c * w ** (alpha - n)

    return ShiftFunction("power", (alpha,), ev, der, support_cutoff=0.0,
                         kernel=(K.W_POWER, (alpha,)))


def trunc_exp_fn(alpha: float) -> ShiftFunction:
    """``e^{alpha w} u(w)``: positive and increasing, jumps at zero."""
    alpha = float(alpha)

    def ev(w):
        w = np.asarray(w, dtype=float)
        with np.errstate(over="ignore"):
            return np.where(w > 0, np.exp(alpha * w), 0.0)

    def der(n, w):
        if w <= 0:
            return 0.0
        return alpha ** n * math.exp(alpha * w)

    return ShiftFunction("trunc-exp", (alpha,), ev, der,
                         nondecreasing=alpha >= 0, support_cutoff=0.0,
                         kernel=(K.W_TRUNC_EXP, (alpha,)))


@lru_cache(maxsize=None)
def _sigmoid_poly(n: int) -> tuple:
    # d^n/dt^n sigma(t) as a polynomial in s = sigma(t): Q_{n+1} = Q_n'(s) (s - s^2)
    q = np.array([0.0, 1.0])
    for _ in range(n):
        q = P.polymul(P.polyder(q), [0.0, 1.0, -1.0])
    return tuple(q)


def logistic_fn(alpha: float) -> ShiftFunction:
    """``1 / (1 + e^{-w/alpha})``, a smooth approximation of the step."""
    alpha = float(alpha)
    if alpha <= 0:
        raise ValueError("logistic smoothing must be > 0")

    def ev(w):
        t = np.asarray(w, dtype=float) / alpha
        with np.errstate(over="ignore"):
            return np.where(t >= 0, 1.0 / (1.0 + np.exp(-np.abs(t))),
                            np.exp(-np.abs(t)) / (1.0 + np.exp(-np.abs(t))))

    def der(n, w):
        s = float(ev(w))
        return P.polyval(s, _sigmoid_poly(n)) / alpha ** n

    return ShiftFunction("logistic", (alpha,), ev, der,
                         kernel=(K.W_LOGISTIC, (alpha,)))


def polynomial_fn(coeffs) -> ShiftFunction:
    """``sum_k c_k w^k``. Not assumed monotone; used to check series against
    quadrature, where the operator series terminates."""
    c = tuple(float(v) for v in coeffs)

    def ev(w):
        return P.polyval(np.asarray(w, dtype=float), c)

    def der(n, w):
        d = P.polyder(c, n) if n else np.array(c)
        return float(P.polyval(w, d)) if len(d) else 0.0

    return ShiftFunction("poly", c, ev, der, nondecreasing=False,
                         kernel=(K.W_POLY, c))


_GRAMMAR = {
    "exp": (exp_fn, 1),
    "step": (step_fn, 0),
    "power": (power_fn, 1),
    "trunc-exp": (trunc_exp_fn, 1),
    "logistic": (logistic_fn, 1),
}


def parse_shift(spec: str) -> ShiftFunction:
    """Parse ``exp:alpha``, ``step``, ``power:alpha``, ``trunc-exp:alpha``
    or ``logistic:alpha``."""
    name, _, rest = spec.strip().partition(":")
    if name not in _GRAMMAR:
        valid = ", ".join(f"{k}" + (":alpha" if n else "") for k, (_, n) in _GRAMMAR.items())
        raise SpecError(f"unknown shift function {name!r}; valid: {valid}")
    ctor, arity = _GRAMMAR[name]
    args = [a for a in rest.split(",") if a.strip()] if rest else []
    if len(args) != arity:
        raise SpecError(f"{name} takes {arity} parameter(s), got {len(args)}")
    try:
        values = [float(a) for a in args]
    except ValueError as exc:
        raise SpecError(f"bad number in {spec!r}") from exc
    try:
        return ctor(*values)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def validate_shift(f: ShiftFunction, lo: float = -10.0, hi: float = 10.0,
                   n: int = 1024) -> list[str]:
    """Probe the catalog invariants on ``n`` points of ``[lo, hi]``.

    Returns a list of human-readable problems (empty when all hold).
    """
    problems = []
    w = np.linspace(lo, hi, n)
    v = f.eval(w)
    if np.any(v < 0):
        problems.append("negative value")
    if f.nondecreasing and np.any(np.diff(v) < -1e-12 * np.maximum(1.0, np.abs(v[1:]))):
        problems.append("decreasing on probe grid")
    if f.derivative is not None:
        h = 1e-6
        for wi in w[:: max(1, n // 64)]:
            if f.support_cutoff is not None and abs(wi - f.support_cutoff) < 1e-3:
                continue
            fd = (float(f.eval(wi + h)) - float(f.eval(wi - h))) / (2 * h)
            d1 = f.derivative(1, wi)
            if abs(fd - d1) > 1e-5 * max(abs(d1), 1e-8) and abs(fd - d1) > 1e-9:
                problems.append(f"derivative mismatch at {wi:.4g}: {d1} vs {fd}")
                break
    return problems
