"""Upper bounds on Pr[Z >= x].

All of them are instances of the operational ratio
``E[f(z + Z)] / f(x + z)`` for a nonnegative non-decreasing ``f``:

* Markov: ``f(w) = w u(w)`` at ``z = 0`` and a fixed exponent.
* Chernoff: ``f(w) = e^{alpha w}``; the ratio does not depend on ``z``.
* moment: ``f(w) = w^alpha u(w)`` at ``z = 0``, optimized over alpha.
* Heaviside: ``f = u``; the optimal ``z`` is ``-x`` from the right and the
  ratio collapses to the exact tail.
* logistic / truncated exponential / truncated power: functions that are
  not strictly absolutely monotonic, evaluated by direct quadrature.

Raw bound values may exceed one; ``bound_clamped`` is ``min(raw, 1)``.
Ordering checks use the raw values.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .distributions import (Distribution, exact_upper_tail, log_mgf,
                            positive_fractional_moment)
from .errors import DenominatorZero, Diverged, NoFiniteValue
from .extended import INFINITY, Extended, ext_le
from .optimize import minimize_scalar
from .quadrature import DEFAULT_TOL, Tolerance, convolution_expectation
from .shift import (ShiftFunction, constant_fn, exp_fn, logistic_fn, power_fn,
                    step_fn, trunc_exp_fn)

ALPHA_EPS = 1e-9
ALPHA_MAX = 64.0
ALPHA_CAP = 2.0 ** 20
Z_EPS = 1e-6
ORDER_SLACK = 1e-6
DEFAULT_LOGISTIC_ALPHAS = (0.4, 0.2, 0.1, 0.05)


class Method(str, enum.Enum):
    MARKOV = "markov"
    CHERNOFF = "chernoff"
    MOMENT = "moment"
    OPERATIONAL = "operational"
    HEAVISIDE_EXACT = "heaviside_exact"
    LOGISTIC = "logistic"
    TRUNCATED_EXP = "truncated_exp"
    TRUNCATED_POWER = "truncated_power"


class Status(str, enum.Enum):
    OK = "ok"
    CLAMPED = "clamped"
    MGF_DOMAIN_EMPTY = "mgf_domain_empty"
    DIVERGED = "diverged"
    NONCONVERGENT = "nonconvergent"


@dataclass(frozen=True)
class BoundReport:
    method: Method
    bound_raw: Extended
    bound_clamped: float
    argmin_alpha: Optional[float] = None
    argmin_z: Optional[float] = None
    status: Status = Status.OK
    evaluations: int = 0
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def value(self) -> float:
        return float(self.bound_raw)


def _report(method, raw: Extended, *, status=None, **kw) -> BoundReport:
    if not raw.is_finite:
        return BoundReport(method, raw, 1.0, status=status or Status.DIVERGED, **kw)
    v = raw.value
    if status is None:
        status = Status.CLAMPED if v > 1.0 else Status.OK
    return BoundReport(method, raw, min(max(v, 0.0), 1.0), status=status, **kw)


def _check_x(x):
    x = float(x)
    if not x > 0:
        raise ValueError(f"x must be > 0, got {x}")
    return x


def _log(v: float) -> float:
    return math.log(v) if v > 0 else -math.inf


def _minimize_extending(obj, lo, hi, *, extend: bool, grid="auto"):
    """Minimize on (lo, hi); while the minimum sits at the top edge, widen."""
    res = minimize_scalar(obj, (lo, hi), grid=grid)
    nev = res.evaluations
    while (extend and res.domain_clipped and res.argmin > 0.5 * (lo + hi)
           and hi < ALPHA_CAP):
        hi *= 4.0
        res = minimize_scalar(obj, (lo, hi), grid=grid)
        nev += res.evaluations
    return res, nev


# ---------------------------------------------------------------------------

def markov_bound(d: Distribution, x: float, tol: Tolerance = DEFAULT_TOL) -> BoundReport:
    """``E[Z^+] / x``; for a positive variable this is the Markov inequality."""
    x = _check_x(x)
    m1 = positive_fractional_moment(d, 1.0, tol)
    if not m1.is_finite:
        return _report(Method.MARKOV, INFINITY, argmin_alpha=1.0, argmin_z=0.0)
    return _report(Method.MARKOV, Extended.finite(m1.value / x),
                   argmin_alpha=1.0, argmin_z=0.0, evaluations=1)


def chernoff_bound(d: Distribution, x: float, tol: Tolerance = DEFAULT_TOL) -> BoundReport:
    """``min over alpha > 0 of E[e^{alpha Z}] e^{-alpha x}``, in log space.

    The alpha -> 0+ limit (value 1) is always a candidate. Distributions
    whose MGF is infinite for every alpha > 0 report ``mgf_domain_empty``.
    """
    x = float(x)
    t_hi = d.mgf_domain[1]
    if not t_hi > 0:
        return _report(Method.CHERNOFF, INFINITY, status=Status.MGF_DOMAIN_EMPTY)

    def obj(a):
        return log_mgf(d, a, tol) - a * x

    finite_top = math.isfinite(t_hi)
    hi = t_hi * (1.0 - ALPHA_EPS) if finite_top else ALPHA_MAX
    res, nev = _minimize_extending(obj, ALPHA_EPS, hi, extend=not finite_top)
    if res.value >= 0.0:
        return _report(Method.CHERNOFF, Extended.finite(1.0), argmin_alpha=0.0,
                       evaluations=nev, diagnostics={"limit_candidate": True})
    return _report(Method.CHERNOFF, Extended.finite(math.exp(res.value)),
                   argmin_alpha=res.argmin, evaluations=nev,
                   diagnostics={"domain_clipped": res.domain_clipped})


def moment_bound(d: Distribution, x: float, tol: Tolerance = DEFAULT_TOL,
                 alpha_max: float = ALPHA_MAX) -> BoundReport:
    """``min over alpha >= 0 of m_alpha^+ / x^alpha``, in log space."""
    x = _check_x(x)
    lx = math.log(x)

    def moment(a):
        return positive_fractional_moment(d, a, tol)

    return _power_family(Method.MOMENT, moment, lx, alpha_max)


def _power_family(method, moment, lx, alpha_max):
    m0 = moment(0.0)
    if m0.is_finite and m0.value == 0.0:
        return _report(method, Extended.finite(0.0), argmin_alpha=0.0, argmin_z=0.0)

    def obj(a):
        m = moment(a)
        if not m.is_finite:
            return math.inf
        return _log(m.value) - a * lx

    res, nev = _minimize_extending(obj, 0.0, alpha_max, extend=True, grid="uniform")
    base = obj(0.0)
    if base <= res.value:
        return _report(method, Extended.finite(math.exp(base)), argmin_alpha=0.0,
                       argmin_z=0.0, evaluations=nev + 1)
    return _report(method, Extended.finite(math.exp(res.value)), argmin_alpha=res.argmin,
                   argmin_z=0.0, evaluations=nev + 1,
                   diagnostics={"domain_clipped": res.domain_clipped})


def operational_ratio(d: Distribution, f: ShiftFunction, x: float, z: float,
                      tol: Tolerance = DEFAULT_TOL) -> Extended:
    """``E[f(z + Z)] / f(x + z)``; infinite when the numerator diverges."""
    den = float(f.eval(float(x) + float(z)))
    if not den > 0:
        raise DenominatorZero(f"{f.label}({x} + {z}) = {den}")
    if math.isinf(den):
        raise DenominatorZero(f"{f.label}({x} + {z}) overflows")
    # absolute error of the ratio, not of the numerator, must meet abs_tol
    if den < 1.0:
        tol = replace(tol, abs_tol=max(tol.abs_tol * den, 1e-300))
    try:
        num = convolution_expectation(d, f, z, tol).value
    except Diverged:
        return INFINITY
    return Extended.from_float(num / den)


def default_z_domain(d: Distribution, f: ShiftFunction, x: float) -> tuple:
    if f.support_cutoff is not None:
        lo = f.support_cutoff - x + Z_EPS
        return lo, lo + 8.0 * d.scale + 8.0
    if f.name == "logistic":
        w = 40.0 * f.params[0]
        return -x - w, -x + w
    w = 8.0 * d.scale + 8.0
    return -x - w, -x + w


def operational_bound(d: Distribution, f: ShiftFunction, x: float,
                      z_domain: Optional[tuple] = None, tol: Tolerance = DEFAULT_TOL,
                      method: Method = Method.OPERATIONAL) -> BoundReport:
    """``min over z of E[f(z + Z)] / f(x + z)`` for a fixed ``f``.

    For functions vanishing below a cutoff ``c`` the default search is
    ``z in (c - x + 1e-6, ...]``, the right neighbourhood of ``z = -x``.
    """
    x = float(x)
    if z_domain is None:
        z_domain = default_z_domain(d, f, x)

    def obj(z):
        try:
            r = operational_ratio(d, f, x, z, tol)
        except DenominatorZero:
            return math.inf
        return math.inf if not r.is_finite else _log(r.value)

    try:
        res = minimize_scalar(obj, z_domain)
    except NoFiniteValue:
        return _report(method, INFINITY, diagnostics={"shift": f.label})
    raw = Extended.finite(math.exp(res.value)) if res.value > -math.inf else Extended.finite(0.0)
    return _report(method, raw, argmin_z=res.argmin, evaluations=res.evaluations,
                   diagnostics={"shift": f.label, "domain_clipped": res.domain_clipped})


def heaviside_chernoff(d: Distribution, x: float, tol: Tolerance = DEFAULT_TOL) -> BoundReport:
    """The step-function bound at ``z = -x`` from the right: the exact tail."""
    x = float(x)
    return _report(Method.HEAVISIDE_EXACT, Extended.finite(exact_upper_tail(d, x, tol)),
                   argmin_z=-x)


def logistic_bound_sweep(d: Distribution, x: float,
                         alphas=DEFAULT_LOGISTIC_ALPHAS,
                         tol: Tolerance = DEFAULT_TOL) -> list[BoundReport]:
    """Operational bounds with ``f = 1/(1 + e^{-w/alpha})`` for decreasing alpha.

    Each report's diagnostics carry the exact tail, the gap to it, and the
    smoothed tail ``E[f(Z - x)]`` which tends to the tail as alpha -> 0.
    """
    alphas = [float(a) for a in alphas]
    if not alphas or any(a <= 0 for a in alphas):
        raise ValueError("alphas must be positive")
    if any(b >= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alphas must be strictly decreasing")
    exact = exact_upper_tail(d, x, tol)
    out = []
    for a in alphas:
        f = logistic_fn(a)
        rep = operational_bound(d, f, x, tol=tol, method=Method.LOGISTIC)
        smooth = convolution_expectation(d, f, -float(x), tol).value
        diag = dict(rep.diagnostics, exact=exact, gap=abs(rep.value - exact),
                    smoothed_tail=smooth)
        out.append(BoundReport(rep.method, rep.bound_raw, rep.bound_clamped, a,
                               rep.argmin_z, rep.status, rep.evaluations, diag))
    return out


def truncated_exp_bound(d: Distribution, x: float, tol: Tolerance = DEFAULT_TOL) -> BoundReport:
    """``f = e^{alpha w} u(w)`` at ``z = 0``, optimized over alpha >= 0.

    alpha = 0 is the step ``u(w)``, giving ``Pr[Z > 0]``.
    """
    x = _check_x(x)
    m0 = operational_ratio(d, step_fn(), x, 0.0, tol)
    best = _report(Method.TRUNCATED_EXP, m0, argmin_alpha=0.0, argmin_z=0.0)
    t_hi = d.mgf_domain[1]
    if not t_hi > 0:
        return best

    def obj(a):
        r = operational_ratio(d, trunc_exp_fn(a), x, 0.0, tol)
        return _log(r.value) if r.is_finite else math.inf

    finite_top = math.isfinite(t_hi)
    hi = t_hi * (1.0 - ALPHA_EPS) if finite_top else ALPHA_MAX
    try:
        res, nev = _minimize_extending(obj, ALPHA_EPS, hi, extend=not finite_top)
    except NoFiniteValue:
        return best
    if m0.is_finite and _log(m0.value) <= res.value:
        return best
    return _report(Method.TRUNCATED_EXP, Extended.finite(math.exp(res.value)),
                   argmin_alpha=res.argmin, argmin_z=0.0, evaluations=nev)


def truncated_power_bound(d: Distribution, x: float, tol: Tolerance = DEFAULT_TOL,
                          alpha_max: float = ALPHA_MAX) -> BoundReport:
    """``f = w^alpha u(w)`` at ``z = 0`` through the convolution integral.

    This is the moment bound reached through ``convolution_expectation``
    instead of ``positive_fractional_moment``. Both evaluate the same
    integral, so the two agree to rounding.
    """
    x = _check_x(x)

    def moment(a):
        f = step_fn() if a == 0.0 else power_fn(a)
        try:
            num = convolution_expectation(d, f, 0.0, tol).value
        except Diverged:
            return INFINITY
        return Extended.finite(num)

    return _power_family(Method.TRUNCATED_POWER, moment, math.log(x), alpha_max)


def section5_bounds(d: Distribution, x: float, tol: Tolerance = DEFAULT_TOL) -> list[BoundReport]:
    """Truncated-exponential and truncated-power bounds, both at ``z = 0``."""
    return [truncated_exp_bound(d, x, tol), truncated_power_bound(d, x, tol)]


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Comparison:
    dist: str
    x: float
    rows: tuple
    exact: float
    ordering_ok: bool

    def row(self, method) -> BoundReport:
        method = Method(method)
        for r in self.rows:
            if r.method is method:
                return r
        raise KeyError(method)


def compare_all(d: Distribution, x: float, f: Optional[ShiftFunction] = None,
                logistic_alpha: float = 0.05, tol: Tolerance = DEFAULT_TOL) -> Comparison:
    """Every bound family at one threshold, plus the ordering verdict
    ``exact <= moment <= chernoff`` (each with slack 1e-6; the chernoff leg
    holds vacuously when the MGF domain is empty).

    ``f`` selects the shift function of the ``operational`` row; by default
    it is ``e^{alpha* w}`` at the Chernoff optimum.
    """
    x = _check_x(x)
    exact = heaviside_chernoff(d, x, tol)
    moment = moment_bound(d, x, tol)
    chern = chernoff_bound(d, x, tol)
    tpow = truncated_power_bound(d, x, tol)
    texp = truncated_exp_bound(d, x, tol)
    markov = markov_bound(d, x, tol)
    logi = logistic_bound_sweep(d, x, [logistic_alpha], tol)[0]
    if f is None:
        if chern.status is Status.MGF_DOMAIN_EMPTY:
            oper = _report(Method.OPERATIONAL, INFINITY, status=Status.MGF_DOMAIN_EMPTY,
                           diagnostics={"shift": "exp"})
        else:
            a = chern.argmin_alpha or 0.0
            oper = operational_bound(d, exp_fn(a) if a > 0 else constant_fn(1.0), x, tol=tol)
    else:
        oper = operational_bound(d, f, x, tol=tol)
    ok = ext_le(exact.bound_raw, moment.bound_raw, ORDER_SLACK)
    if chern.status is not Status.MGF_DOMAIN_EMPTY:
        ok = ok and ext_le(moment.bound_raw, chern.bound_raw, ORDER_SLACK)
    rows = (exact, logi, moment, tpow, markov, texp, chern, oper)
    return Comparison(d.label, x, rows, exact.value, bool(ok))


__all__ = [
    "Method", "Status", "BoundReport", "Comparison", "markov_bound", "chernoff_bound",
    "moment_bound", "operational_ratio", "operational_bound", "heaviside_chernoff",
    "logistic_bound_sweep", "truncated_exp_bound", "truncated_power_bound",
    "section5_bounds", "compare_all", "default_z_domain", "ShiftFunction",
]
