"""Property suite over the distribution and shift-function catalogs.

Each property returns a :class:`PropertyResult` with the number of cases
checked and the failing cases. Randomized inputs (threshold jitter, Cauchy
sequences) come from ``numpy.random.default_rng(seed)``, so a fixed seed
gives identical reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import bounds as B
from .distributions import (Distribution, exact_upper_tail, exponential, gamma,
                            lognormal, mgf, normal, positive_fractional_moment,
                            scaled_density, uniform)
from .errors import DenominatorZero, NonConvergent
from .operational import (apply_operator_series, cauchy_third_inequality,
                          exponential_eigenfunction_residual, lemma43_check,
                          series_coefficients)
from .quadrature import DEFAULT_TOL, Tolerance, convolution_expectation, integrate
from .shift import (exp_fn, logistic_fn, polynomial_fn, power_fn, step_fn,
                    trunc_exp_fn)

SLACK = 1e-6


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    nonconvergent: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures and self.nonconvergent == 0

    def fail(self, case: str):
        self.failures.append(case)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "failed": len(self.failures), "nonconvergent": self.nonconvergent,
                "failures": list(self.failures)}


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 0
    density_scale: float = 1.0
    tol: Tolerance = DEFAULT_TOL
    only: Optional[tuple] = None
    skip: tuple = ()


def catalog(scale: float = 1.0) -> list[Distribution]:
    ds = [normal(0, 1), exponential(1), gamma(2, 1), uniform(0, 1), lognormal(0, 1)]
    if scale != 1.0:
        ds = [scaled_density(d, scale) for d in ds]
    return ds


def _x_grid(d: Distribution, rng, n: int = 4) -> list[float]:
    """Upper-tail thresholds for ``d``, jittered by the seeded generator."""
    lo, hi = d.support
    if math.isfinite(hi):
        base = lo + (hi - lo) * np.linspace(0.3, 0.9, n)
        jit = 0.02 * (hi - lo)
    else:
        c = max(d.center, 0.0)
        base = c + d.scale * np.linspace(0.5, 3.0, n)
        jit = 0.1 * d.scale
    xs = base + rng.uniform(-jit, jit, size=n)
    return [float(x) for x in xs if x > 0]


def _shifts():
    return [exp_fn(0.5), exp_fn(1.0), step_fn(), power_fn(1.0), power_fn(2.0),
            trunc_exp_fn(0.5), logistic_fn(0.2)]


def _case(d, x, extra="") -> str:
    s = f"{d.label} x={x!r}"
    return f"{s} {extra}" if extra else s


# ---------------------------------------------------------------------------
# properties

def prop_normalization(cfg, rng) -> PropertyResult:
    r = PropertyResult("normalization")
    for d in catalog(cfg.density_scale):
        lo, hi = d.support
        res = integrate(d.pdf, lo, hi, cfg.tol)
        r.checked += 1
        if not res.converged:
            r.nonconvergent += 1
        elif abs(res.value - 1.0) > 1e-8:
            r.fail(f"{d.label}: mass {res.value!r}")
    return r


def prop_mgf_closed_form(cfg, rng) -> PropertyResult:
    r = PropertyResult("mgf_closed_form")
    for d in catalog(cfg.density_scale):
        if d.log_mgf is None:
            continue
        t_hi = d.mgf_domain[1]
        for t in (-0.5, 0.25, min(0.5, 0.5 * t_hi)):
            r.checked += 1
            try:
                q = mgf(d, t, cfg.tol, method="quadrature").value
            except NonConvergent:
                r.nonconvergent += 1
                continue
            c = math.exp(d.log_mgf(t))
            if abs(q - c) > 1e-8 * c:
                r.fail(f"{d.label} t={t}: quad {q!r} vs closed {c!r}")
    return r


def prop_tail_monotone(cfg, rng) -> PropertyResult:
    r = PropertyResult("tail_monotone")
    for d in catalog(cfg.density_scale):
        xs = sorted(_x_grid(d, rng, 8))
        tails = [exact_upper_tail(d, x, cfg.tol) for x in xs]
        r.checked += 1
        if any(b > a + 1e-12 for a, b in zip(tails, tails[1:])):
            r.fail(f"{d.label}: tail not non-increasing on {xs}")
    return r


def prop_soundness(cfg, rng) -> PropertyResult:
    r = PropertyResult("soundness")
    for d in catalog(cfg.density_scale):
        for x in _x_grid(d, rng, 2):
            exact = exact_upper_tail(d, x, cfg.tol)
            for f in _shifts():
                for z in (-0.5 * x, 0.0, 1.0):
                    try:
                        q = B.operational_ratio(d, f, x, z, cfg.tol)
                    except DenominatorZero:
                        continue
                    except NonConvergent:
                        r.nonconvergent += 1
                        continue
                    r.checked += 1
                    if q.is_finite and q.value < exact - SLACK:
                        r.fail(_case(d, x, f"{f.label} z={z}: {q.value!r} < exact {exact!r}"))
    return r


def _bounds_cache(cfg, rng):
    """moment / chernoff / markov / exact per (d, x) for the ordering family."""
    out = []
    for d in catalog(cfg.density_scale):
        for x in _x_grid(d, rng, 3):
            out.append((d, x, exact_upper_tail(d, x, cfg.tol),
                        B.moment_bound(d, x, cfg.tol), B.chernoff_bound(d, x, cfg.tol),
                        B.markov_bound(d, x, cfg.tol)))
    return out


def prop_ordering(cfg, rng) -> PropertyResult:
    r = PropertyResult("ordering")
    for d, x, exact, mom, ch, _ in _bounds_cache(cfg, rng):
        if ch.status is B.Status.MGF_DOMAIN_EMPTY:
            continue
        r.checked += 1
        if ch.bound_raw.is_finite and mom.value > ch.value + SLACK:
            r.fail(_case(d, x, f"moment {mom.value!r} > chernoff {ch.value!r}"))
    return r


def prop_exactness_floor(cfg, rng) -> PropertyResult:
    r = PropertyResult("exactness_floor")
    for d, x, exact, mom, _, mk in _bounds_cache(cfg, rng):
        r.checked += 2
        if mom.bound_raw.is_finite and mom.value < exact - SLACK:
            r.fail(_case(d, x, f"moment {mom.value!r} < exact {exact!r}"))
        if mk.bound_raw.is_finite and mk.value < exact - SLACK:
            r.fail(_case(d, x, f"markov {mk.value!r} < exact {exact!r}"))
    return r


def prop_markov_special_case(cfg, rng) -> PropertyResult:
    r = PropertyResult("markov_special_case")
    for d in catalog(cfg.density_scale):
        if d.support[0] < 0:
            continue
        for x in _x_grid(d, rng, 2):
            r.checked += 1
            obj = positive_fractional_moment(d, 1.0, cfg.tol).value / x
            mk = B.markov_bound(d, x, cfg.tol).value
            if abs(obj - mk) > 1e-9 * max(1.0, mk):
                r.fail(_case(d, x, f"objective {obj!r} vs markov {mk!r}"))
    return r


def prop_z_flatness(cfg, rng) -> PropertyResult:
    r = PropertyResult("z_flatness")
    for d in catalog(cfg.density_scale):
        if d.log_mgf is None:
            continue
        a = 0.5 * min(1.0, d.mgf_domain[1])
        f = exp_fn(a)
        for x in _x_grid(d, rng, 1):
            vals = [B.operational_ratio(d, f, x, z, cfg.tol).value for z in (-1.0, 0.0, 1.0, 5.0)]
            r.checked += 1
            if max(vals) - min(vals) > 1e-8 * min(vals):
                r.fail(_case(d, x, f"{f.label} spread {max(vals) - min(vals)!r}"))
    return r


def prop_truncated_power_reduction(cfg, rng) -> PropertyResult:
    r = PropertyResult("truncated_power_reduction")
    for d in catalog(cfg.density_scale)[1:3]:
        for x in (1.5, 2.0, 3.0):
            r.checked += 1
            tp = B.truncated_power_bound(d, x, cfg.tol).value
            mb = B.moment_bound(d, x, cfg.tol).value
            if abs(tp - mb) > 1e-6 * mb:
                r.fail(_case(d, x, f"truncated power {tp!r} vs moment {mb!r}"))
    return r


def prop_logistic_convergence(cfg, rng) -> PropertyResult:
    r = PropertyResult("logistic_convergence")
    ds = catalog(cfg.density_scale)
    for d, x in ((ds[0], 1.0), (ds[1], 2.0)):
        reps = B.logistic_bound_sweep(d, x, B.DEFAULT_LOGISTIC_ALPHAS, cfg.tol)
        gaps = [rep.diagnostics["gap"] for rep in reps]
        exact = reps[0].diagnostics["exact"]
        r.checked += 1
        if any(b > a + 1e-12 for a, b in zip(gaps, gaps[1:])):
            r.fail(_case(d, x, f"gaps not non-increasing: {gaps}"))
        elif gaps[-1] >= 0.05 * exact:
            r.fail(_case(d, x, f"final relative gap {gaps[-1] / exact:.4g} >= 0.05"))
    return r


def prop_eigenfunction(cfg, rng) -> PropertyResult:
    r = PropertyResult("eigenfunction")
    d = catalog(cfg.density_scale)[0]
    for a in (0.25, 0.5, 1.0):
        for z in (-1.0, 0.0, 0.3):
            res = [exponential_eigenfunction_residual(d, a, z, N, cfg.tol) for N in (10, 20, 40)]
            r.checked += 1
            if res[-1] >= 1e-8 or res[1] > res[0] or res[2] > res[1]:
                r.fail(f"{d.label} alpha={a} z={z}: residuals {res}")
    return r


def prop_series_polynomial(cfg, rng) -> PropertyResult:
    r = PropertyResult("series_polynomial")
    f = polynomial_fn([1.0, -2.0, 0.5, 0.25])
    for d in catalog(cfg.density_scale)[:4]:
        s = series_coefficients(d, 5, cfg.tol)
        for z in (-1.0, 0.5):
            r.checked += 1
            sv = apply_operator_series(s, f, z).value
            try:
                qv = convolution_expectation(d, f, z, cfg.tol).value
            except NonConvergent:
                r.nonconvergent += 1
                continue
            if abs(sv - qv) > 1e-10 * max(1.0, abs(qv)):
                r.fail(f"{d.label} z={z}: series {sv!r} vs quadrature {qv!r}")
    return r


def prop_cauchy(cfg, rng) -> PropertyResult:
    r = PropertyResult("cauchy_third_inequality")
    for _ in range(1000):
        n = int(rng.integers(1, 51))
        a = rng.uniform(1e-3, 10.0, n) * 10.0 ** rng.uniform(-3, 3, n)
        b = rng.uniform(1e-3, 10.0, n) * 10.0 ** rng.uniform(-3, 3, n)
        r.checked += 1
        if not cauchy_third_inequality(a, b).holds:
            r.fail(f"length {n} sequence pair")
    return r


def prop_lemma43(cfg, rng) -> PropertyResult:
    r = PropertyResult("lemma43")
    for d in catalog(cfg.density_scale)[:3]:
        for a in (0.5, 1.0):
            f = exp_fn(a)
            for x in (1.0, 2.0, 3.0):
                r.checked += 1
                try:
                    rep = lemma43_check(d, f, x, (-2.0, -1.0, 0.0), tol=cfg.tol)
                except NonConvergent:
                    r.nonconvergent += 1
                    continue
                if not rep.passed:
                    bad = [row.z for row in rep.rows
                           if not (row.lemma_ok and row.chain_ok and row.ordering_ok)]
                    r.fail(_case(d, x, f"{f.label} fails at z={bad}"))
    return r


PROPERTIES: dict[str, Callable] = {
    "normalization": prop_normalization,
    "mgf_closed_form": prop_mgf_closed_form,
    "tail_monotone": prop_tail_monotone,
    "soundness": prop_soundness,
    "ordering": prop_ordering,
    "exactness_floor": prop_exactness_floor,
    "markov_special_case": prop_markov_special_case,
    "z_flatness": prop_z_flatness,
    "truncated_power_reduction": prop_truncated_power_reduction,
    "logistic_convergence": prop_logistic_convergence,
    "eigenfunction": prop_eigenfunction,
    "series_polynomial": prop_series_polynomial,
    "cauchy_third_inequality": prop_cauchy,
    "lemma43": prop_lemma43,
}


def run_suite(cfg: VerifyConfig = VerifyConfig()) -> list[PropertyResult]:
    names = list(PROPERTIES)
    if cfg.only:
        unknown = set(cfg.only) - set(PROPERTIES)
        if unknown:
            raise ValueError(f"unknown properties: {sorted(unknown)}")
        names = [n for n in names if n in cfg.only]
    names = [n for n in names if n not in cfg.skip]
    out = []
    for name in names:
        # each property gets its own stream so --only does not shift the others
        rng = np.random.default_rng([cfg.seed, list(PROPERTIES).index(name)])
        out.append(PROPERTIES[name](cfg, rng))
    return out
