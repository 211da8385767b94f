import math

import numpy as np
import pytest

from opchernoff import (INFINITY, DenominatorZero, Method, Status, chernoff_bound,
                        compare_all, exact_upper_tail, exponential, gamma,
                        heaviside_chernoff, logistic_bound_sweep, lognormal,
                        markov_bound, moment_bound, normal, operational_bound,
                        operational_ratio, section5_bounds, truncated_exp_bound,
                        truncated_power_bound, uniform)
from opchernoff.bounds import DEFAULT_LOGISTIC_ALPHAS
from opchernoff.shift import (constant_fn, exp_fn, logistic_fn, power_fn,
                              step_fn, trunc_exp_fn)

# min over alpha of m_alpha^+ / x^alpha from closed-form positive moments,
# dense grid (step 1e-4 on [0, 40]) plus bounded refinement
MOMENT_ORACLE = {
    ("normal", 1.0): (0.39736992537363686, 0.8660252215525204),
    ("normal", 2.0): (0.09374045435504602, 3.9593749041116277),
    ("normal", 3.0): (0.007782980033457411, 8.981581401827214),
    ("exp", 1.5): (0.6665125185540315, 0.9733703462991381),
    ("exp", 2.0): (0.4699449467262301, 1.479687434032622),
    ("exp", 3.0): (0.21318641075406705, 2.4862750582970605),
    ("exp", 5.0): (0.03745318572047148, 4.491703364942712),
    ("gamma", 2.0): (0.93988989345246, 0.4796874559803174),
    ("gamma", 3.0): (0.6395592322622009, 1.4862751172188438),
    ("gamma", 6.0): (0.0906853424518704, 4.493076865179356),
    ("uniform", 0.5): (0.94208469268186, 0.4426950418215697),
    ("uniform", 0.9): (0.2577596176347695, 8.491221331864846),
}
DISTS = {"normal": normal(0, 1), "exp": exponential(1), "gamma": gamma(2, 1),
         "uniform": uniform(0, 1)}

# logistic bounds by scipy quad + brute-force z grid, frozen
LOGISTIC_ORACLE = {
    "normal": (1.0, 0.20746148682452883, [1.58, 0.94, 0.54, 0.3076]),
    "exp": (2.0, 0.16573435658988245, None),
}


@pytest.mark.parametrize("key", MOMENT_ORACLE, ids=lambda k: f"{k[0]}-{k[1]}")
def test_moment_bound_matches_oracle(key):
    value, alpha = MOMENT_ORACLE[key]
    rep = moment_bound(DISTS[key[0]], key[1])
    assert rep.value == pytest.approx(value, rel=1e-8)
    if alpha > 1e-3:
        assert rep.argmin_alpha == pytest.approx(alpha, rel=1e-3)


def test_moment_bound_spec_example():
    rep = moment_bound(exponential(1), 2.0)
    assert rep.value == pytest.approx(0.470, abs=0.005)
    assert rep.argmin_alpha == pytest.approx(1.49, abs=0.05)
    assert rep.status is Status.OK


def test_moment_bound_alpha_zero_when_x_small():
    rep = moment_bound(gamma(2, 1), 1.5)
    assert rep.argmin_alpha == 0.0
    assert rep.value == pytest.approx(1.0, rel=1e-10)


def test_moment_bound_lognormal_finite():
    rep = moment_bound(lognormal(0, 1), 2.0)
    assert rep.bound_raw.is_finite
    # m_a^+ = exp(a^2/2): optimum at a = ln 2
    assert rep.value == pytest.approx(math.exp(-0.5 * math.log(2) ** 2), rel=1e-8)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 3.0])
def test_chernoff_gaussian_closed_form(x):
    rep = chernoff_bound(normal(0, 1), x)
    assert rep.value == pytest.approx(math.exp(-x * x / 2), rel=1e-6)
    assert rep.argmin_alpha == pytest.approx(x, rel=1e-6)


def test_chernoff_examples():
    rep = chernoff_bound(exponential(1), 2.0)
    assert rep.value == pytest.approx(2 * math.exp(-1), rel=1e-10)
    assert rep.argmin_alpha == pytest.approx(0.5, abs=1e-6)
    rep = chernoff_bound(lognormal(0, 1), 2.0)
    assert rep.status is Status.MGF_DOMAIN_EMPTY and rep.bound_clamped == 1.0
    assert not rep.bound_raw.is_finite
    # gamma(2,1): closed form (x/2)^2 e^{2 - x} at alpha = 1 - 2/x
    rep = chernoff_bound(gamma(2, 1), 6.0)
    assert rep.value == pytest.approx(9 * math.exp(-4), rel=1e-8)
    # x at or below the mean: only the alpha -> 0 limit remains
    assert chernoff_bound(exponential(1), 0.5).value == pytest.approx(1.0, abs=1e-12)


def test_markov_examples():
    assert markov_bound(exponential(1), 2.0).value == pytest.approx(0.5, rel=1e-10)
    rep = markov_bound(exponential(1), 0.5)
    assert rep.value == pytest.approx(2.0, rel=1e-10)
    assert rep.bound_clamped == 1.0 and rep.status is Status.CLAMPED
    assert markov_bound(normal(0, 1), 1.0).value == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-10)
    with pytest.raises(ValueError):
        markov_bound(exponential(1), 0.0)


def test_operational_ratio_examples():
    d = normal(0, 1)
    for z in (-3.0, 0.0, 2.0):
        assert operational_ratio(d, exp_fn(1.0), 1.0, z).value == pytest.approx(math.exp(-0.5), rel=1e-10)
    assert operational_ratio(d, constant_fn(1.0), 1.7, 0.3).value == pytest.approx(1.0, rel=1e-12)
    assert operational_ratio(exponential(1), power_fn(1.0), 2.0, 0.0).value == pytest.approx(0.5, rel=1e-10)
    assert operational_ratio(exponential(1), exp_fn(1.0), 2.0, 0.0) == INFINITY
    with pytest.raises(DenominatorZero):
        operational_ratio(d, step_fn(), 1.0, -2.0)


def test_operational_bound_exp_family_is_chernoff_value():
    rep = operational_bound(normal(0, 1), exp_fn(1.0), 1.0)
    assert rep.value == pytest.approx(math.exp(-0.5), rel=1e-9)
    rep = operational_bound(exponential(1), exp_fn(0.5), 2.0)
    assert rep.value == pytest.approx(2 * math.exp(-1), rel=1e-9)


def test_operational_bound_step_reaches_exact_tail():
    rep = operational_bound(normal(0, 1), step_fn(), 1.0)
    assert rep.value == pytest.approx(0.15865525393145707, rel=1e-5)
    assert rep.argmin_z == pytest.approx(-1.0, abs=1e-4)


def test_operational_bound_logistic_bracketed():
    v = operational_bound(normal(0, 1), logistic_fn(0.1), 1.0).value
    assert 0.158655 < v < 0.606531


def test_heaviside_examples():
    assert heaviside_chernoff(exponential(1), 2.0).value == pytest.approx(math.exp(-2), rel=1e-14)
    assert heaviside_chernoff(normal(0, 1), 0.0).value == pytest.approx(0.5, rel=1e-14)
    assert heaviside_chernoff(uniform(0, 1), 0.25).value == pytest.approx(0.75, rel=1e-14)


@pytest.mark.parametrize("name", ["normal", "exp"])
def test_logistic_sweep_against_oracle(name):
    d = DISTS[name]
    x, final, rel_gaps = LOGISTIC_ORACLE[name]
    reps = logistic_bound_sweep(d, x)
    assert [r.argmin_alpha for r in reps] == list(DEFAULT_LOGISTIC_ALPHAS)
    assert reps[-1].value == pytest.approx(final, rel=1e-6)
    gaps = [r.diagnostics["gap"] for r in reps]
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    exact = exact_upper_tail(d, x)
    if rel_gaps:
        assert [g / exact for g in gaps] == pytest.approx(rel_gaps, abs=5e-3)
    # the smoothed tail E[f(Z - x)] approaches the exact tail much faster
    assert abs(reps[-1].diagnostics["smoothed_tail"] - exact) < 0.05 * exact


def test_logistic_large_alpha_tends_to_one():
    rep = logistic_bound_sweep(normal(0, 1), 1.0, [50.0])[0]
    assert rep.bound_clamped > 0.95


def test_logistic_sweep_validates_alphas():
    with pytest.raises(ValueError):
        logistic_bound_sweep(normal(0, 1), 1.0, [0.1, 0.2])
    with pytest.raises(ValueError):
        logistic_bound_sweep(normal(0, 1), 1.0, [0.1, -0.2])


def test_section5_bounds():
    te, tp = section5_bounds(exponential(1), 2.0)
    assert te.method is Method.TRUNCATED_EXP and tp.method is Method.TRUNCATED_POWER
    assert tp.value == pytest.approx(moment_bound(exponential(1), 2.0).value, rel=1e-6)
    assert operational_ratio(exponential(1), trunc_exp_fn(0.5), 2.0, 0.0).value == \
        pytest.approx(2 / math.e, rel=1e-10)
    # alpha -> 0 of the z = 0 ratio is Pr[Z > 0]
    small = operational_ratio(normal(0, 1), trunc_exp_fn(1e-7), 1.0, 0.0).value
    assert small == pytest.approx(0.5, rel=1e-6)


@pytest.mark.parametrize("name", ["exp", "gamma"])
@pytest.mark.parametrize("x", [1.5, 2.0, 3.0])
def test_truncated_power_reduces_to_moment(name, x):
    d = DISTS[name]
    assert truncated_power_bound(d, x).value == pytest.approx(moment_bound(d, x).value, rel=1e-6)


def test_truncated_exp_bounds_exact_tail():
    for d, x in ((normal(0, 1), 1.0), (exponential(1), 2.0), (gamma(2, 1), 4.0)):
        assert truncated_exp_bound(d, x).value >= exact_upper_tail(d, x) - 1e-9


@pytest.mark.parametrize("name", list(DISTS) + ["lognormal"])
def test_compare_all_ordering(name):
    d = DISTS.get(name) or lognormal(0, 1)
    x = {"normal": 1.0, "exp": 2.0, "gamma": 4.0, "uniform": 0.75, "lognormal": 2.0}[name]
    cmp = compare_all(d, x)
    assert cmp.ordering_ok
    assert [r.method.value for r in cmp.rows] == [
        "heaviside_exact", "logistic", "moment", "truncated_power", "markov",
        "truncated_exp", "chernoff", "operational"]
    ex = cmp.row("heaviside_exact").value
    for r in cmp.rows:
        if r.bound_raw.is_finite:
            assert r.value >= ex - 1e-6
            assert r.bound_clamped == min(1.0, r.value)
        else:
            assert r.bound_clamped == 1.0


def test_compare_all_examples():
    cmp = compare_all(exponential(1), 2.0)
    assert cmp.exact == pytest.approx(0.1353352832366127)
    assert cmp.row("moment").value == pytest.approx(0.470, abs=0.005)
    assert cmp.row("chernoff").value == pytest.approx(0.735759, abs=1e-6)
    cmp = compare_all(lognormal(0, 1), 2.0)
    assert cmp.row("chernoff").status is Status.MGF_DOMAIN_EMPTY
    assert cmp.row("moment").bound_raw.is_finite and cmp.ordering_ok


def test_compare_all_custom_shift():
    cmp = compare_all(normal(0, 1), 1.0, f=exp_fn(1.0))
    assert cmp.row("operational").value == pytest.approx(math.exp(-0.5), rel=1e-9)


def test_soundness_grid():
    fs = [exp_fn(0.5), step_fn(), power_fn(1.0), power_fn(3.0), trunc_exp_fn(0.5), logistic_fn(0.2)]
    for d in (normal(0, 1), exponential(1), gamma(2, 1), uniform(0, 1), lognormal(0, 1)):
        for x in (0.5, 1.0, 2.5):
            ex = exact_upper_tail(d, x)
            for f in fs:
                for z in np.linspace(-x + 0.01, 2.0, 5):
                    try:
                        r = operational_ratio(d, f, x, z)
                    except DenominatorZero:
                        continue
                    if r.is_finite:
                        assert r.value >= ex - 1e-6, (d.label, x, f.label, z)


def test_markov_special_case_of_moment_objective():
    from opchernoff import positive_fractional_moment
    for d in (exponential(1), gamma(2, 1), uniform(0, 1), lognormal(0, 1)):
        for x in (0.7, 2.0):
            obj = positive_fractional_moment(d, 1.0).value / x
            assert obj == pytest.approx(markov_bound(d, x).value, rel=1e-9)


def test_z_flatness():
    for d, a in ((normal(0, 1), 1.0), (exponential(1), 0.5), (gamma(2, 1), 0.3), (uniform(0, 1), 2.0)):
        vals = [operational_ratio(d, exp_fn(a), 1.0, z).value for z in (-1.0, 0.0, 1.0, 5.0)]
        assert max(vals) - min(vals) < 1e-8 * min(vals)
