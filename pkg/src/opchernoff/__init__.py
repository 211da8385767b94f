"""Operational Chernoff tail bounds.

Upper bounds on ``Pr[Z >= x]`` of the form ``E[f(z + Z)] / f(x + z)``,
optimized over the shift ``z`` and over parametric families of ``f``, with
the classical Chernoff, Markov and fractional-moment bounds as members.
"""
from .bounds import (BoundReport, Comparison, Method, Status, chernoff_bound,
                     compare_all, heaviside_chernoff, logistic_bound_sweep,
                     markov_bound, moment_bound, operational_bound,
                     operational_ratio, section5_bounds, truncated_exp_bound,
                     truncated_power_bound)
from .distributions import (Distribution, custom, density, exact_upper_tail,
                            exponential, gamma, log_mgf, lognormal, mgf, normal,
                            parse_dist, positive_fractional_moment, raw_moment,
                            restrict_positive, uniform)
from .errors import (DenominatorZero, Diverged, LengthMismatch,
                     MissingDerivativeOracle, NoFiniteValue, NonConvergent,
                     NonPositiveEntry, OpChernoffError, SpecError, ZeroMass)
from .extended import INFINITY, NOT_COMPUTED, Extended, ExtState
from .kernels import BACKEND
from .operational import (OperatorSeries, SamReport, apply_operator_series,
                          cauchy_third_inequality,
                          exponential_eigenfunction_residual, lemma43_check,
                          sam_check, series_coefficients)
from .optimize import ScalarMinimum, minimize_scalar
from .quadrature import (DEFAULT_TOL, QuadratureResult, Tolerance,
                         convolution_expectation, expectation, integrate)
from .shift import (ShiftFunction, constant_fn, exp_fn, logistic_fn, parse_shift,
                    polynomial_fn, power_fn, step_fn, trunc_exp_fn)

__version__ = "0.1.0"
