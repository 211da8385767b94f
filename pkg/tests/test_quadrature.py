import math

import numpy as np
import pytest

from opchernoff import (Diverged, NonConvergent, Tolerance, convolution_expectation,
                        custom, expectation, exponential, integrate, lognormal, normal)
from opchernoff.shift import constant_fn, exp_fn, polynomial_fn, power_fn, step_fn


def cauchy():
    return custom("cauchy", lambda y: 1.0 / (math.pi * (1.0 + np.asarray(y) ** 2)),
                  (-math.inf, math.inf), mgf_domain=(0.0, 0.0))


def test_integrate_gaussian_whole_line():
    r = integrate(lambda y: np.exp(-0.5 * y * y), -math.inf, math.inf)
    assert r.converged
    assert r.value == pytest.approx(math.sqrt(2 * math.pi), rel=1e-12)


def test_integrate_half_lines():
    assert integrate(lambda y: 1.0 / (y * y), 1.0, math.inf).value == pytest.approx(1.0, rel=1e-10)
    assert integrate(lambda y: np.exp(y), -math.inf, 0.0).value == pytest.approx(1.0, rel=1e-12)


def test_integrate_accepts_scalar_callables():
    r = integrate(lambda y: math.cos(y), 0.0, math.pi / 2)
    assert r.value == pytest.approx(1.0, rel=1e-13)


def test_integrate_rejects_empty_interval():
    with pytest.raises(ValueError):
        integrate(lambda y: y, 1.0, 1.0)


def test_integrate_flags_nonconvergence():
    r = integrate(lambda y: np.abs(y - 0.3) ** -0.9, 0.0, 1.0, Tolerance(max_subdivisions=5))
    assert not r.converged


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(abs_tol=0.0)
    with pytest.raises(ValueError):
        Tolerance(rel_tol=1.5)
    with pytest.raises(ValueError):
        Tolerance(max_subdivisions=0)


def test_tolerance_from_env(monkeypatch):
    monkeypatch.setenv("OPCHERNOFF_REL_TOL", "1e-6")
    monkeypatch.setenv("OPCHERNOFF_MAX_SUBDIVISIONS", "50")
    t = Tolerance.from_env()
    assert t.rel_tol == 1e-6 and t.max_subdivisions == 50 and t.abs_tol == 1e-10


def test_expectation_gaussian_mgf():
    r = expectation(normal(0, 1), exp_fn(1.0), 0.0)
    assert r.converged
    assert r.value == pytest.approx(math.exp(0.5), rel=1e-10)


def test_expectation_restricted_range():
    # integral over y >= 1 of e^{-y}: the exponential tail
    r = expectation(exponential(1), constant_fn(1.0), 0.0, lo=1.0)
    assert r.value == pytest.approx(math.exp(-1), rel=1e-10)
    r = expectation(normal(0, 1), constant_fn(1.0), 0.0, hi=0.0)
    assert r.value == pytest.approx(0.5, rel=1e-10)


def test_expectation_empty_range_is_zero():
    r = expectation(exponential(1), constant_fn(1.0), 0.0, hi=-1.0)
    assert r.value == 0.0 and r.converged


def test_step_cutoff_starts_range():
    # E[u(z + Z)] = Pr[Z > -z]
    r = expectation(normal(0, 1), step_fn(), 1.0)
    assert r.value == pytest.approx(0.8413447460685429, rel=1e-10)


def test_divergence_at_mgf_boundary():
    r = expectation(exponential(1), exp_fn(1.0), 0.0)
    assert r.diverged and not r.converged
    assert expectation(exponential(1), exp_fn(1.5), 0.0).diverged
    assert expectation(lognormal(0, 1), exp_fn(0.1), 0.0).diverged


def test_heavy_tail_divergence_and_convergence():
    assert expectation(cauchy(), power_fn(1.0), 0.0).diverged
    r = expectation(cauchy(), constant_fn(1.0), 0.0)
    assert r.converged
    assert r.value == pytest.approx(1.0, abs=1e-8)
    r = expectation(cauchy(), power_fn(0.5), 0.0)
    assert r.converged
    # integral_0^inf sqrt(y) / (pi (1 + y^2)) dy = 1 / sqrt(2)
    assert r.value == pytest.approx(1 / math.sqrt(2), rel=1e-8)


def test_lognormal_total_mass():
    r = expectation(lognormal(0, 1), constant_fn(1.0), 0.0)
    assert r.value == pytest.approx(1.0, abs=1e-8)


def test_convolution_expectation_raises():
    with pytest.raises(Diverged):
        convolution_expectation(exponential(1), exp_fn(2.0), 0.0)
    with pytest.raises(NonConvergent):
        convolution_expectation(normal(0, 1), polynomial_fn([0, 0, 0, 0, 0, 0, 1.0]), 0.0,
                                Tolerance(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=1))


def test_python_callable_path_matches_kernel_path():
    d = normal(0.5, 1.5)
    f = exp_fn(0.7)
    plain = custom("n", d.pdf, d.support, center=d.center, scale=d.scale)
    a = expectation(d, f, 0.2).value
    b = expectation(plain, f, 0.2).value
    assert a == pytest.approx(b, rel=1e-10)
    assert a == pytest.approx(math.exp(0.7 * 0.2 + 0.7 * 0.5 + 0.5 * 0.49 * 2.25), rel=1e-10)


def test_spec_integrate_examples():
    assert integrate(lambda y: np.exp(-y), 0.0, math.inf).value == pytest.approx(1.0, rel=1e-12)
    assert integrate(normal(0, 1).pdf, -math.inf, math.inf).value == pytest.approx(1.0, rel=1e-12)
    assert integrate(lambda y: y * y * np.exp(-y), 0.0, math.inf).value == pytest.approx(2.0, rel=1e-12)


def test_splitting_invariance():
    rng = np.random.default_rng(3)
    f = lambda y: np.sin(3 * y) ** 2 * np.exp(-0.2 * y)
    whole = integrate(f, 0.0, 10.0)
    for c in rng.uniform(0.0, 10.0, 10):
        left, right = integrate(f, 0.0, c), integrate(f, c, 10.0)
        slack = whole.error_estimate + left.error_estimate + right.error_estimate + 1e-14
        assert abs(left.value + right.value - whole.value) <= slack


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_halving_abs_tol_never_hurts_gamma_family(k):
    oracle = math.gamma(k + 1)
    prev = math.inf
    for at in (1e-4, 5e-5, 2.5e-5, 1.25e-5):
        r = integrate(lambda y: y ** k * np.exp(-y), 0.0, math.inf, Tolerance(abs_tol=at, rel_tol=1e-3))
        err = abs(r.value - oracle)
        assert err <= prev
        prev = err


def test_converged_error_within_target():
    r = expectation(normal(0, 1), exp_fn(2.0), 0.3)
    tol = Tolerance()
    assert r.converged and r.error_estimate <= tol.target(r.value) and r.evaluations > 0
