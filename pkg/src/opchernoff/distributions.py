"""Continuous distribution catalog: densities, MGFs, moments and tails.

Convention: ``mgf(d, t) = E[e^{tZ}]``, finite on ``d.mgf_domain`` (and at
``t = 0``), reported as :data:`~opchernoff.extended.INFINITY` elsewhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special

from . import _kernels_py as K
from .errors import NonConvergent, SpecError, ZeroMass
from .extended import INFINITY, Extended
from .quadrature import DEFAULT_TOL, Tolerance, expectation
from .shift import constant_fn, exp_fn, polynomial_fn, power_fn, step_fn

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
ZERO_MASS_THRESHOLD = 1e-12


@dataclass(frozen=True, eq=False)
class Distribution:
    """A continuous law on ``support``.

    ``pdf`` is vectorized. ``log_mgf``, ``tail`` and ``moment`` are optional
    closed forms; when absent the corresponding operation falls back to
    quadrature. ``kernel`` is the ``(density code, params)`` pair understood
    by the compiled integrator; custom laws leave it ``None`` and go through
    the pure-Python path. ``center`` and ``scale`` anchor the truncation
    walk over infinite supports.
    """

    name: str
    params: tuple
    support: tuple
    pdf: Callable[[np.ndarray], np.ndarray]
    mgf_domain: tuple
    center: float
    scale: float
    log_mgf: Optional[Callable[[float], float]] = None
    tail: Optional[Callable[[float], float]] = None
    moment: Optional[Callable[[int], float]] = None
    kernel: Optional[tuple] = field(default=None, repr=False)

    def density(self, z):
        return self.pdf(z)

    @property
    def label(self) -> str:
        return f"{self.name}:" + ",".join(f"{p:g}" for p in self.params)

    def in_mgf_domain(self, t: float) -> bool:
        lo, hi = self.mgf_domain
        return t == 0.0 or lo < t < hi


# ---------------------------------------------------------------------------
# catalog

def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def normal(mu: float = 0.0, sigma: float = 1.0) -> Distribution:
    mu, sigma = float(mu), float(sigma)
    if not sigma > 0:
        raise ValueError("normal sigma must be > 0")
    c = math.log(sigma) + _LOG_SQRT_2PI

    def pdf(y):
        u = (np.asarray(y, dtype=float) - mu) / sigma
        return np.exp(-0.5 * u * u - c)

    def moment(n):
        # E[(mu + sigma G)^n] with E[G^k] = (k-1)!! for even k
        total = 0.0
        for k in range(0, n + 1, 2):
            total += math.comb(n, k) * mu ** (n - k) * sigma ** k * _double_factorial(k - 1)
        return float(total)

    return Distribution(
        "normal", (mu, sigma), (-math.inf, math.inf), pdf, (-math.inf, math.inf),
        center=mu, scale=sigma,
        log_mgf=lambda t: mu * t + 0.5 * sigma * sigma * t * t,
        tail=lambda x: 0.5 * special.erfc((x - mu) / (sigma * math.sqrt(2.0))),
        moment=moment,
        kernel=(K.NORMAL, (mu, sigma, c)),
    )


def exponential(rate: float = 1.0) -> Distribution:
    lam = float(rate)
    if not lam > 0:
        raise ValueError("exponential rate must be > 0")
    ll = math.log(lam)

    def pdf(y):
        y = np.asarray(y, dtype=float)
        with np.errstate(over="ignore"):
            return np.where(y >= 0, lam * np.exp(-lam * np.maximum(y, 0.0)), 0.0)

    def log_mgf(t):
        return math.log(lam) - math.log(lam - t) if t < lam else math.inf

    return Distribution(
        "exp", (lam,), (0.0, math.inf), pdf, (-math.inf, lam),
        center=1.0 / lam, scale=1.0 / lam,
        log_mgf=log_mgf,
        tail=lambda x: 1.0 if x <= 0 else math.exp(-lam * x),
        moment=lambda n: math.factorial(n) / lam ** n,
        kernel=(K.EXPONENTIAL, (lam, ll, 0.0)),
    )


def gamma(shape: float, scale: float = 1.0) -> Distribution:
    k, theta = float(shape), float(scale)
    if not (k > 0 and theta > 0):
        raise ValueError("gamma shape and scale must be > 0")
    c = math.lgamma(k) + k * math.log(theta)

    def pdf(y):
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            pos = np.where(y > 0, y, 1.0)
            return np.where(y > 0, np.exp((k - 1) * np.log(pos) - pos / theta - c), 0.0)

    def log_mgf(t):
        return -k * math.log1p(-theta * t) if theta * t < 1 else math.inf

    def moment(n):
        return math.exp(n * math.log(theta) + math.lgamma(k + n) - math.lgamma(k))

    return Distribution(
        "gamma", (k, theta), (0.0, math.inf), pdf, (-math.inf, 1.0 / theta),
        center=k * theta, scale=math.sqrt(k) * theta,
        log_mgf=log_mgf,
        tail=lambda x: 1.0 if x <= 0 else float(special.gammaincc(k, x / theta)),
        moment=moment,
        kernel=(K.GAMMA, (k, theta, c)),
    )


def uniform(a: float = 0.0, b: float = 1.0) -> Distribution:
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError("uniform needs a < b")
    width = b - a

    def pdf(y):
        y = np.asarray(y, dtype=float)
        return np.where((y >= a) & (y <= b), 1.0 / width, 0.0)

    def log_mgf(t):
        if t == 0:
            return 0.0
        # log((e^{tb} - e^{ta}) / (t (b - a))) without overflow
        if t > 0:
            return t * b + math.log(-math.expm1(-t * width)) - math.log(t * width)
        return t * a + math.log(-math.expm1(t * width)) - math.log(-t * width)

    def moment(n):
        return (b ** (n + 1) - a ** (n + 1)) / ((n + 1) * width)

    return Distribution(
        "uniform", (a, b), (a, b), pdf, (-math.inf, math.inf),
        center=0.5 * (a + b), scale=width,
        log_mgf=log_mgf,
        tail=lambda x: min(1.0, max(0.0, (b - x) / width)),
        moment=moment,
        kernel=(K.UNIFORM, (a, b, math.log(width))),
    )


def lognormal(mu: float = 0.0, sigma: float = 1.0) -> Distribution:
    """Lognormal: every moment is finite but ``E[e^{tZ}] = inf`` for all
    ``t > 0``, so the classical Chernoff bound is unavailable."""
    mu, sigma = float(mu), float(sigma)
    if not sigma > 0:
        raise ValueError("lognormal sigma must be > 0")
    c = math.log(sigma) + _LOG_SQRT_2PI

    def pdf(y):
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            pos = np.where(y > 0, y, 1.0)
            ly = np.log(pos)
            u = (ly - mu) / sigma
            return np.where(y > 0, np.exp(-0.5 * u * u - ly - c), 0.0)

    def tail(x):
        if x <= 0:
            return 1.0
        return 0.5 * float(special.erfc((math.log(x) - mu) / (sigma * math.sqrt(2.0))))

    return Distribution(
        "lognormal", (mu, sigma), (0.0, math.inf), pdf, (-math.inf, 0.0),
        center=math.exp(mu), scale=math.exp(mu) * sigma,
        tail=tail,
        moment=lambda n: math.exp(n * mu + 0.5 * n * n * sigma * sigma),
        kernel=(K.LOGNORMAL, (mu, sigma, c)),
    )


def custom(name: str, pdf, support, *, mgf_domain=(-math.inf, math.inf),
           center: float = 0.0, scale: float = 1.0, params=()) -> Distribution:
    """A law given only by its density; every quantity goes through quadrature."""
    return Distribution(name, tuple(params), tuple(support), pdf, tuple(mgf_domain),
                        center=float(center), scale=float(scale))


def scaled_density(d: Distribution, factor: float) -> Distribution:
    """``d`` with its density multiplied by ``factor`` (no longer normalized).

    Used to inject faults into the verification suite.
    """
    base = d.pdf
    return Distribution(f"{d.name}*{factor:g}", d.params, d.support,
                        lambda y: factor * base(y), d.mgf_domain, d.center, d.scale)


CATALOG = {
    "normal": (normal, (0, 2)),
    "exp": (exponential, (1,)),
    "gamma": (gamma, (1, 2)),
    "uniform": (uniform, (2,)),
    "lognormal": (lognormal, (0, 2)),
}
_ALIASES = {"norm": "normal", "exponential": "exp"}


def parse_dist(spec: str) -> Distribution:
    """Parse ``name:param1,param2`` (e.g. ``normal:0,1``, ``exp:1``)."""
    name, _, rest = spec.strip().partition(":")
    name = _ALIASES.get(name, name)
    if name not in CATALOG:
        raise SpecError(f"unknown distribution {name!r}; valid: " + _grammar())
    ctor, arities = CATALOG[name]
    args = [a for a in rest.split(",") if a.strip()] if rest else []
    if len(args) not in arities:
        raise SpecError(f"{name} takes {' or '.join(map(str, arities))} parameter(s), "
                        f"got {len(args)}; valid: " + _grammar())
    try:
        values = [float(a) for a in args]
    except ValueError as exc:
        raise SpecError(f"bad number in {spec!r}") from exc
    try:
        return ctor(*values)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def _grammar() -> str:
    return "normal[:mu,sigma], exp:rate, gamma:shape[,scale], uniform:a,b, lognormal[:mu,sigma]"


# ---------------------------------------------------------------------------
# operations

def density(d: Distribution, z):
    """``p(z)``; zero outside the support."""
    out = d.pdf(z)
    return float(out) if np.ndim(out) == 0 else out


def _require(res, what):
    if res.diverged:
        return None
    if not res.converged:
        raise NonConvergent(f"{what}: quadrature error {res.error_estimate:.3g} above target", res)
    return res.value


def mgf(d: Distribution, t: float, tol: Tolerance = DEFAULT_TOL,
        method: str = "auto") -> Extended:
    """``E[e^{tZ}]``, with :data:`INFINITY` outside ``d.mgf_domain``.

    ``method="quadrature"`` ignores the closed form.
    """
    t = float(t)
    if t == 0.0:
        return Extended.finite(1.0)
    if not d.in_mgf_domain(t):
        return INFINITY
    if method == "auto" and d.log_mgf is not None:
        return Extended.from_float(math.exp(d.log_mgf(t)))
    val = _require(expectation(d, exp_fn(t), 0.0, tol=tol), f"mgf({t})")
    return INFINITY if val is None else Extended.finite(val)


def log_mgf(d: Distribution, t: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """``log E[e^{tZ}]`` as a float (``inf`` outside the domain)."""
    if t == 0.0:
        return 0.0
    if not d.in_mgf_domain(t):
        return math.inf
    if d.log_mgf is not None:
        return d.log_mgf(t)
    m = mgf(d, t, tol)
    return math.log(m.value) if m.is_finite else math.inf


def raw_moment(d: Distribution, n: int, tol: Tolerance = DEFAULT_TOL,
               method: str = "auto") -> float:
    """``m_n = E[Z^n]`` from the closed form when present, else quadrature."""
    n = int(n)
    if n < 0:
        raise ValueError("moment order must be >= 0")
    if n == 0:
        return 1.0 if method == "auto" else _total_mass(d, tol)
    if method == "auto" and d.moment is not None:
        return float(d.moment(n))
    coeffs = [0.0] * n + [1.0]
    val = _require(expectation(d, polynomial_fn(coeffs), 0.0, tol=tol), f"m_{n}")
    if val is None:
        raise NonConvergent(f"m_{n} of {d.label} diverges")
    return val


def _total_mass(d, tol):
    val = _require(expectation(d, constant_fn(1.0), 0.0, tol=tol), "total mass")
    return val


def positive_fractional_moment(d: Distribution, alpha: float,
                               tol: Tolerance = DEFAULT_TOL) -> Extended:
    """``m_alpha^+ = integral_0^inf y^alpha p(y) dy`` by quadrature.

    ``alpha = 0`` gives ``Pr[Z > 0]``. Returns :data:`INFINITY` when the
    nested truncations diverge (or overflow); raises
    :class:`NonConvergent` when the error target is missed.
    """
    alpha = float(alpha)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    f = step_fn() if alpha == 0.0 else power_fn(alpha)
    val = _require(expectation(d, f, 0.0, tol=tol), f"m_{alpha}^+")
    return INFINITY if val is None else Extended.finite(val)


def exact_upper_tail(d: Distribution, x: float, tol: Tolerance = DEFAULT_TOL,
                     method: str = "auto") -> float:
    """``Pr[Z >= x]`` from the closed form, else quadrature over ``[x, inf)``."""
    x = float(x)
    if method == "auto" and d.tail is not None:
        val = float(d.tail(x))
    else:
        val = _require(expectation(d, constant_fn(1.0), 0.0, lo=x, tol=tol), f"tail({x})")
    return min(1.0, max(0.0, val))


@dataclass(frozen=True, eq=False)
class PositiveRestriction:
    """``Z`` conditioned on ``Z > 0``: density ``p(z) / Pr[Z > 0]`` for z > 0."""

    base: Distribution
    mass: float

    def density(self, z):
        z = np.asarray(z, dtype=float)
        out = np.where(z > 0, self.base.pdf(z) / self.mass, 0.0)
        return float(out) if out.ndim == 0 else out

    def moment(self, n: float, tol: Tolerance = DEFAULT_TOL) -> Extended:
        """Conditional moment ``m_n^+ / m_0^+``."""
        m = positive_fractional_moment(self.base, n, tol)
        return m if not m.is_finite else Extended.finite(m.value / self.mass)

    def as_distribution(self) -> Distribution:
        b = self.base
        lo = max(0.0, b.support[0])
        return Distribution(
            f"{b.name}+", b.params, (lo, b.support[1]), self.density,
            b.mgf_domain, center=max(b.center, b.scale), scale=b.scale)


def restrict_positive(d: Distribution, tol: Tolerance = DEFAULT_TOL) -> PositiveRestriction:
    """Condition ``d`` on ``Z > 0``; raises :class:`ZeroMass` if
    ``Pr[Z > 0]`` is below ``1e-12``."""
    mass = positive_fractional_moment(d, 0.0, tol).value
    if not mass > ZERO_MASS_THRESHOLD:
        raise ZeroMass(f"Pr[Z > 0] = {mass:.3g} for {d.label}")
    return PositiveRestriction(d, min(mass, 1.0))
