import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mp_eta
from eta_embed.errors import AccuracyError, DomainError, SingularityError, UsageError
from eta_embed.eta_core import (EvalConfig, eta, eta_derivative, eta_many,
                                eta_oracle, functional_residual,
                                functional_residuals, lambda_factor,
                                parallel_series)
from eta_embed.numkernel import AccumMode

LN2 = math.log(2)


# -- eta ---------------------------------------------------------------------------

def test_eta_at_one_is_ln2():
    assert abs(eta(1).value - LN2) < 1e-12


def test_eta_at_two():
    assert abs(eta(2).value - math.pi ** 2 / 12) < 1e-12


def test_eta_trivial_zero_at_minus_two():
    assert abs(eta(-2).value) < 1e-10


def test_eta_zero_from_two_power_factor():
    assert abs(eta(1 + 2j * math.pi / LN2).value) < 1e-8


def test_eta_at_zero_is_half():
    assert abs(eta(0).value - 0.5) < 1e-13


def test_eta_value_fields():
    v = eta(0.5 + 3j)
    assert v.est_error >= 0
    assert 1 <= v.terms_used <= 160


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-8, max_value=6), st.floats(min_value=-50, max_value=50))
def test_eta_conjugation(x, y):
    s = complex(x, y)
    a, b = eta_many([s, s.conjugate()])
    assert abs(a.value.conjugate() - b.value) <= 1e-14 * max(1.0, abs(a.value))


def test_eta_matches_mpmath_and_error_estimate_bounds_it():
    pts = [complex(x, y) for x in (-10, -6, -3, -0.5, 0.2, 0.5, 1.5, 3, 6)
           for y in (0, 4.5, 17, 33, 59)]
    vals = eta_many(pts)
    for s, v in zip(pts, vals):
        ref = mp_eta(s)
        err = abs(v.value - ref)
        assert err <= v.est_error, (s, err, v.est_error)
        # left of the strip the inner terms grow like (m+1)^-Re(s), so
        # absolute accuracy is only promised through est_error there
        if s.real >= -0.5:
            assert err <= 1e-12, (s, err)


def test_eta_against_internal_oracle_grid():
    pts = [complex(x, y) for x in np.linspace(0.5, 5, 6) for y in np.linspace(-40, 40, 9)]
    for s, v in zip(pts, eta_many(pts)):
        assert abs(v.value - eta_oracle(s)) <= 1e-9


def test_eta_all_modes_agree():
    s = 0.5 + 21j
    ref = mp_eta(s)
    for mode in AccumMode:
        v = eta(s, EvalConfig(mode=mode))
        assert abs(v.value - ref) < 1e-11


def test_eta_accuracy_error_when_kmax_too_small():
    with pytest.raises(AccuracyError) as info:
        eta(0.5 + 50j, EvalConfig(kmax=8))
    assert info.value.est_error > 0
    assert info.value.value is not None


@pytest.mark.parametrize("bad", [dict(kmax=7), dict(kmax=513), dict(kmax=2.5),
                                 dict(tol=1e-16), dict(tol=float("nan")), dict(mode="x")])
def test_eval_config_validation(bad):
    with pytest.raises(UsageError):
        EvalConfig(**bad)


def test_eta_rejects_nonfinite():
    with pytest.raises(DomainError):
        eta(complex(math.inf, 0))


def test_parallel_series_independent_of_thread_count():
    pts = 0.5 + 1j * np.linspace(0, 40, 300)
    one = parallel_series(pts, threads=1)
    many = parallel_series(pts, threads=8)
    assert np.array_equal(one.values, many.values)
    assert np.array_equal(one.est_errors, many.est_errors)


# -- derivative ----------------------------------------------------------------------

def _central_difference(s, h=1e-5):
    return (eta(s + h).value - eta(s - h).value) / (2 * h)


@pytest.mark.parametrize("s", [10, 10 + 3j, 1, 0.5 + 14j, -1.5 + 2j])
def test_derivative_matches_finite_difference(s):
    assert abs(eta_derivative(s).value - _central_difference(s)) < 1e-7


def test_derivative_conjugation():
    s = 0.3 + 9j
    assert abs(eta_derivative(s.conjugate()).value - eta_derivative(s).value.conjugate()) < 1e-13


def test_derivative_at_one_closed_form():
    # eta'(1) = ln2 (gamma - ln2 / 2)
    gamma = 0.5772156649015329
    assert abs(eta_derivative(1).value - LN2 * (gamma - LN2 / 2)) < 1e-12


# -- lambda ----------------------------------------------------------------------------

@pytest.mark.parametrize("t", [0.1, 2, 14.1, 30, 60])
def test_lambda_unit_modulus_on_critical_line(t):
    assert abs(abs(lambda_factor(0.5 + 1j * t)) - 1) < 1e-10


def test_lambda_vanishes_at_trivial_zero():
    assert abs(lambda_factor(-2)) < 1e-12


@pytest.mark.parametrize("s", [0.3 + 5j, -2.5 + 1j, 3.7 - 20j, 0.5 + 0.1j])
def test_lambda_involution(s):
    assert abs(lambda_factor(s) * lambda_factor(1 - s) - 1) < 1e-9


def test_lambda_limit_at_zero():
    # s = 0 itself is excluded, but eta(0) = lambda(0) eta(1) fixes the limit 1/(2 ln 2)
    assert abs(lambda_factor(1e-7) - 0.5 / LN2) < 1e-6


def test_lambda_large_t_no_overflow():
    for s in (-3 + 30j, 4 - 30j, 0.5 + 200j):
        v = lambda_factor(s)
        assert cmath.isfinite(v)


@pytest.mark.parametrize("s", [0, 1, 1 + 1e-11, 2j * math.pi / LN2, -4j * math.pi / LN2, 3, 5])
def test_lambda_singular_set(s):
    with pytest.raises(SingularityError):
        lambda_factor(s)


def test_lambda_near_but_outside_singular_set():
    assert cmath.isfinite(lambda_factor(1 + 1e-6))


# -- functional residual ------------------------------------------------------------------

@pytest.mark.parametrize("s,tol", [(0.3 + 7j, 1e-8), (0.5 + 2j, 1e-9), (4, 1e-10)])
def test_functional_residual_examples(s, tol):
    assert functional_residual(s) < tol


def test_functional_residuals_on_wide_grid():
    pts = [complex(x, y) for x in np.linspace(-3, 4, 20) for y in np.linspace(-30, 30, 10)]
    res = functional_residuals(pts)
    assert res.shape == (200,)
    assert float(np.max(res)) < 1e-8


def test_functional_residual_propagates_singularity():
    with pytest.raises(SingularityError):
        functional_residual(1)


# -- internal oracle --------------------------------------------------------------------

def test_oracle_examples():
    assert abs(eta_oracle(1) - LN2) < 1e-10
    assert abs(eta_oracle(2) - math.pi ** 2 / 12) < 1e-10
    assert abs(eta_oracle(0.5 + 10j) - eta(0.5 + 10j).value) < 1e-9


def test_oracle_against_mpmath():
    for s in (0.5 + 45j, 0.7 - 3j, 5 + 50j):
        assert abs(eta_oracle(s) - mp_eta(s)) < 1e-10


def test_oracle_domain():
    with pytest.raises(DomainError):
        eta_oracle(0.05)
    with pytest.raises(UsageError):
        eta_oracle(1, nterms=0)
