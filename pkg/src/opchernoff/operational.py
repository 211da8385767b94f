"""Truncated operator series and the checks built on them.

A distribution acts on ``f`` as ``E[f(z + Z)] = sum_n (m_n / n!) f^(n)(z)``:
the Taylor expansion of ``f`` around ``z`` averaged over ``Z``. The
coefficients ``m_n / n!`` are those of ``E[e^{qZ}]`` in the derivative
symbol ``q``; the two-sided Laplace convention ``P(q) = E[e^{-qZ}]`` carries
``(-1)^n m_n / n!`` instead, and ``E[f(z + Z)]`` is ``P(-q) f(z)``, so the
sign flips cancel and no ``(-1)^n`` appears here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .distributions import (Distribution, mgf, positive_fractional_moment,
                            raw_moment)
from .errors import (LengthMismatch, MissingDerivativeOracle, NonConvergent,
                     NonPositiveEntry)
from .extended import INFINITY, Extended, ext_close, ext_le
from .quadrature import DEFAULT_TOL, Tolerance, expectation
from .shift import ShiftFunction, exp_fn

DEFAULT_SAM_ORDER = 16
_RATIO_WINDOW = 6


@dataclass(frozen=True)
class OperatorSeries:
    """Coefficients ``G_0 ... G_N`` of ``G(q) = sum_n G_n q^n``."""

    coefficients: tuple

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("an operator series needs at least G_0")
        if not all(math.isfinite(c) for c in self.coefficients):
            raise ValueError("operator coefficients must be finite")

    @property
    def truncation_order(self) -> int:
        return len(self.coefficients) - 1


def series_coefficients(d: Distribution, N: int, tol: Tolerance = DEFAULT_TOL) -> OperatorSeries:
    """``m_n / n!`` for ``n = 0..N``; applying them realizes ``E[f(z + Z)]``."""
    if N < 0:
        raise ValueError("order must be >= 0")
    coeffs = []
    for n in range(N + 1):
        m = raw_moment(d, n, tol)
        coeffs.append(m / math.factorial(n))
    return OperatorSeries(tuple(coeffs))


class SeriesResult(NamedTuple):
    value: float
    partial_sums: list

    @property
    def status(self) -> str:
        return classify_partial_sums(self.partial_sums)


def classify_partial_sums(partial_sums) -> str:
    """``"converged"``, ``"truncated"`` (still moving) or ``"diverging"``.

    Uses the per-index geometric ratio of the last few nonzero terms; a
    ratio >= 1 means the terms are not shrinking.
    """
    terms = [partial_sums[0]] + [b - a for a, b in zip(partial_sums, partial_sums[1:])]
    nz = [(i, abs(t)) for i, t in enumerate(terms) if t != 0.0]
    if not nz:
        return "converged"
    last_i, last_t = nz[-1]
    if last_i < len(terms) - 2:
        return "converged"  # the series terminated
    window = nz[-_RATIO_WINDOW:]
    if len(window) >= 2:
        (i0, t0), (i1, t1) = window[0], window[-1]
        rate = (t1 / t0) ** (1.0 / (i1 - i0))
        if rate >= 1.0:
            return "diverging"
    total = abs(partial_sums[-1])
    if last_t <= 1e-12 * max(total, 1e-300):
        return "converged"
    return "truncated"


def apply_operator_series(s: OperatorSeries, f: ShiftFunction, z: float) -> SeriesResult:
    """``sum_n G_n f^(n)(z)`` and its partial sums.

    ``z`` must stay away from ``f.support_cutoff`` where the derivatives jump.
    """
    if f.derivative is None:
        raise MissingDerivativeOracle(f"{f.label} has no derivative oracle")
    if f.support_cutoff is not None and abs(z - f.support_cutoff) < 1e-12:
        raise ValueError(f"z={z} sits on the cutoff of {f.label}")
    total = 0.0
    partial = []
    for n, c in enumerate(s.coefficients):
        if c != 0.0:
            total += c * f.derivative(n, z)
        partial.append(total)
    return SeriesResult(total, partial)


def exponential_eigenfunction_residual(d: Distribution, alpha: float, z: float,
                                       N: int, tol: Tolerance = DEFAULT_TOL) -> float:
    """Relative error of the series for ``e^{alpha w}`` against
    ``e^{alpha z} E[e^{alpha Z}]``."""
    if not d.in_mgf_domain(alpha):
        raise ValueError(f"alpha={alpha} outside the MGF domain of {d.label}")
    exact = math.exp(alpha * z) * mgf(d, alpha, tol).value
    approx = apply_operator_series(series_coefficients(d, N, tol), exp_fn(alpha), z).value
    return abs(approx - exact) / exact


@dataclass(frozen=True)
class SamReport:
    is_sam: bool
    first_violation: Optional[tuple]  # (order, point, derivative value)
    orders_checked: int
    points_checked: tuple


def sam_check(f: ShiftFunction, points, N: int = DEFAULT_SAM_ORDER) -> SamReport:
    """Strict positivity of ``f^(n)(z)`` for ``n <= N`` at each probe point.

    A pass means "strictly absolutely monotonic up to order N at these
    points", nothing more.
    """
    if f.derivative is None:
        raise MissingDerivativeOracle(f"{f.label} has no derivative oracle")
    points = tuple(float(p) for p in points)
    for z in points:
        for n in range(N + 1):
            v = float(f.derivative(n, z))
            if not v > 0:
                return SamReport(False, (n, z, v), N, points)
    return SamReport(True, None, N, points)


class CauchyResult(NamedTuple):
    r: float
    ratio: float
    R: float
    holds: bool


def cauchy_third_inequality(a, b) -> CauchyResult:
    """``min a_n/b_n <= sum a / sum b <= max a_n/b_n`` for positive sequences.

    ``holds`` allows a relative rounding slack of 1e-12.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    if len(a) != len(b):
        raise LengthMismatch(f"lengths {len(a)} and {len(b)} differ")
    if not a:
        raise LengthMismatch("sequences must be non-empty")
    if any(not v > 0 for v in a) or any(not v > 0 for v in b):
        raise NonPositiveEntry("all entries must be > 0")
    ratios = [x / y for x, y in zip(a, b)]
    r, R = min(ratios), max(ratios)
    ratio = math.fsum(a) / math.fsum(b)
    eps = 1e-12
    holds = r * (1 - eps) <= ratio <= R * (1 + eps)
    return CauchyResult(r, ratio, R, holds)


@dataclass(frozen=True)
class Lemma43Row:
    z: float
    moment_min: float
    series_ratio: float
    cauchy: CauchyResult
    conv_a: Extended
    conv_b: Extended
    conv_c: Extended
    conv_d: Extended
    quadrature_ratio: Extended
    lemma_ok: bool
    chain_ok: bool
    ordering_ok: bool


@dataclass(frozen=True)
class Lemma43Report:
    dist: str
    shift: str
    x: float
    order: int
    rows: tuple

    @property
    def passed(self) -> bool:
        return all(r.lemma_ok and r.chain_ok and r.ordering_ok for r in self.rows)


def _ext(res, what) -> Extended:
    if res.diverged:
        return INFINITY
    if not res.converged:
        raise NonConvergent(f"{what} did not converge", res)
    return Extended.finite(res.value)


def lemma43_check(d: Distribution, f: ShiftFunction, x: float, z_grid,
                  N: int = DEFAULT_SAM_ORDER, tol: Tolerance = DEFAULT_TOL,
                  slack: float = 1e-8) -> Lemma43Report:
    """Check, at each ``z <= 0`` of ``z_grid``:

    * ``min_n m_n^+ / x^n <= [sum (m_n^+/n!) f^(n)(z)] / [sum (x^n/n!) f^(n)(z)]``
      with the sums truncated at ``N`` (via the Cauchy ratio bound);
    * the four restricted convolutions obey ``(c) = (d) <= (b) <= (a)``;
    * ``min_n m_n^+ / x^n <= (a) / f(x + z)``.

    Infinite convolutions compare in the extended order.
    """
    x = float(x)
    if not x > 0:
        raise ValueError("x must be > 0")
    zs = tuple(float(z) for z in z_grid)
    if any(z > 0 for z in zs):
        raise ValueError("z_grid must be <= 0")
    if not f.sam_claimed:
        raise ValueError(f"{f.label} is not claimed strictly absolutely monotonic")
    sam = sam_check(f, zs, N)
    if not sam.is_sam:
        raise ValueError(f"{f.label} fails the SAM probe: {sam.first_violation}")

    mplus = []
    for n in range(N + 1):
        m = positive_fractional_moment(d, float(n), tol)
        if not m.is_finite:
            raise ValueError(f"m_{n}^+ of {d.label} is infinite")
        mplus.append(m.value)
    moment_min = min(m / x ** n for n, m in enumerate(mplus))

    rows = []
    for z in zs:
        ders = [f.derivative(n, z) for n in range(N + 1)]
        a = [mplus[n] * ders[n] / math.factorial(n) for n in range(N + 1)]
        b = [x ** n * ders[n] / math.factorial(n) for n in range(N + 1)]
        cr = cauchy_third_inequality(a, b)
        lemma_ok = cr.holds and moment_min <= cr.ratio * (1 + 1e-12)

        ca = _ext(expectation(d, f, z, tol=tol), "(a)")
        cb = _ext(expectation(d, f, z, lo=0.0, tol=tol), "(b)")
        cc = _ext(expectation(d, f, z, lo=-z, tol=tol), "(c)")
        cd = _ext(expectation(d, f, z, lo=max(0.0, -z), tol=tol), "(d)")
        chain_ok = (ext_close(cc, cd, slack) and ext_le(cc, cb, slack)
                    and ext_le(cb, ca, slack))

        den = float(f.eval(x + z))
        qr = INFINITY if not ca.is_finite else Extended.finite(ca.value / den)
        ordering_ok = ext_le(Extended.finite(moment_min), qr, slack)
        rows.append(Lemma43Row(z, moment_min, cr.ratio, cr, ca, cb, cc, cd, qr,
                               bool(lemma_ok), bool(chain_ok), bool(ordering_ok)))
    return Lemma43Report(d.label, f.label, x, N, tuple(rows))
