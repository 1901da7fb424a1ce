"""Closed-form scalar delay ODE solver vs analytic cases and the stepping oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dde_steps import dde_steps
from delayheat.delay_ode import (
    DelayOdeParams,
    HistoryFunction,
    kernel,
    solve_forced,
    solve_homogeneous,
    superpose,
)
from delayheat.delayed_exp import DelayedExpParams, delayed_exp_eval
from delayheat.errors import DomainError, InputError
from delayheat.funcspec import parse_function


def _const_history(value=1.0):
    return HistoryFunction.from_callables(
        lambda s: np.full_like(np.asarray(s, dtype=float), value),
        lambda s: np.zeros_like(np.asarray(s, dtype=float)),
    )


def test_kernel_reduces_to_delayed_exponential_when_rate_zero():
    params = DelayOdeParams(a=0.0, b=0.8, tau=0.7)
    dep = DelayedExpParams(rate=0.8, delay=0.7)
    xi = np.linspace(-0.7, 3.0, 57)
    got = kernel(params, xi)
    want = np.array([delayed_exp_eval(dep, v) for v in xi])
    np.testing.assert_allclose(got, want, rtol=1e-13, atol=1e-14)


def test_kernel_pure_exponential_when_lag_coupling_zero():
    params = DelayOdeParams(a=-1.3, b=0.0, tau=1.0)
    xi = np.linspace(-1.0, 2.0, 31)
    np.testing.assert_allclose(kernel(params, xi), np.exp(-1.3 * (xi + 1.0)),
                               rtol=1e-13)
    assert kernel(params, -1.0 - 1e-9) == 0.0


def test_exponential_solution_reproduced_exactly():
    # x' = x with lag coupling 0 and history e^s: solution e^t.
    params = DelayOdeParams(a=1.0, b=0.0, tau=1.0)
    history = HistoryFunction.from_callables(
        lambda s: np.exp(np.asarray(s, dtype=float)),
        lambda s: np.exp(np.asarray(s, dtype=float)),
    )
    t = np.linspace(0.0, 3.0, 13)
    np.testing.assert_allclose(solve_homogeneous(params, history, t), np.exp(t),
                               rtol=1e-11)


def test_pure_lag_with_unit_history_is_delayed_exponential():
    params = DelayOdeParams(a=0.0, b=1.0, tau=1.0)
    dep = DelayedExpParams(rate=1.0, delay=1.0)
    t = np.linspace(0.0, 4.0, 17)
    got = solve_homogeneous(params, _const_history(), t)
    want = np.array([delayed_exp_eval(dep, v) for v in t])
    np.testing.assert_allclose(got, want, rtol=1e-11, atol=1e-13)
    assert solve_homogeneous(params, _const_history(), 1.5) == pytest.approx(2.625)


def test_forced_constant_rate_free_grows_linearly():
    params = DelayOdeParams(a=0.0, b=0.0, tau=1.0)
    t = np.linspace(0.0, 2.5, 11)
    got = solve_forced(params, lambda s: np.ones_like(np.asarray(s, float)), t)
    np.testing.assert_allclose(got, t, rtol=1e-12, atol=1e-13)


def test_history_returned_below_zero():
    params = DelayOdeParams(a=0.3, b=-0.4, tau=1.0)
    history = HistoryFunction.from_funcspec(parse_function("cos(t)"))
    assert solve_homogeneous(params, history, -0.5) == pytest.approx(math.cos(-0.5))
    with pytest.raises(DomainError):
        solve_homogeneous(params, history, -1.5)


def test_validation():
    with pytest.raises(InputError):
        DelayOdeParams(a=0.0, b=0.0, tau=-1.0)
    with pytest.raises(InputError):
        DelayOdeParams(a=math.nan, b=0.0, tau=1.0)


@pytest.mark.parametrize("a, b, tau", [
    (-1.0, -0.8, 1.0),
    (0.5, 0.8, 0.5),
    (0.0, -0.8, 0.5),
    (-1.0, 0.8, 1.0),
])
def test_homogeneous_matches_stepping_oracle(a, b, tau):
    params = DelayOdeParams(a=a, b=b, tau=tau)
    history = HistoryFunction.from_funcspec(parse_function("1 + t"))
    t = np.linspace(0.0, 4 * tau, 21)
    mine = solve_homogeneous(params, history, t)
    ref = dde_steps(a, b, tau, lambda s: 1.0 + s, t)
    np.testing.assert_allclose(mine, ref, rtol=0, atol=5e-10)


def test_forced_matches_stepping_oracle():
    a, b, tau = -0.5, 0.6, 0.8
    params = DelayOdeParams(a=a, b=b, tau=tau)
    history = HistoryFunction.from_funcspec(parse_function("cos(t)"))
    rho = lambda s: np.sin(np.asarray(s, dtype=float))
    t = np.linspace(0.0, 4 * tau, 17)
    mine = superpose(params, history, rho, t)
    ref = dde_steps(a, b, tau, lambda s: math.cos(s), t, rho=lambda s: math.sin(s))
    np.testing.assert_allclose(mine, ref, rtol=0, atol=5e-10)


def test_stiff_mode_stays_finite_and_accurate():
    # Strong decay with lag coupling: naive scaling b*exp(-a*tau) overflows
    # for a large and negative; the evaluation must not.
    a, b, tau = -200.0, 30.0, 1.0
    params = DelayOdeParams(a=a, b=b, tau=tau)
    xi = np.linspace(-tau, 3.0, 41)
    vals = kernel(params, xi)
    assert np.all(np.isfinite(vals))
    t = np.linspace(0.0, 2.5, 11)
    mine = solve_homogeneous(params, _const_history(), t)
    ref = dde_steps(a, b, tau, lambda s: 1.0, t, method="Radau", rtol=1e-11,
                    atol=1e-14)
    np.testing.assert_allclose(mine, ref, rtol=0, atol=1e-8)


def test_extreme_decay_rate_no_overflow():
    params = DelayOdeParams(a=-900.0, b=5.0, tau=1.0)
    xi = np.linspace(-1.0, 2.0, 23)
    vals = kernel(params, xi)
    assert np.all(np.isfinite(vals))
    t = np.linspace(0.0, 2.0, 9)
    sol = solve_homogeneous(params, _const_history(), t)
    assert np.all(np.isfinite(sol))
    # after one delay interval the solution is quasi-static: x ~ -(b/a) x(t-tau)
    assert abs(sol[-1]) < 1e-3


def test_solution_continuous_at_zero_and_knots():
    params = DelayOdeParams(a=-0.7, b=0.9, tau=0.6)
    history = HistoryFunction.from_funcspec(parse_function("1 + t^2"))
    eps = 1e-10
    left = solve_homogeneous(params, history, -eps)
    right = solve_homogeneous(params, history, eps)
    assert right == pytest.approx(left, abs=1e-8)
    for knot in (0.6, 1.2, 1.8):
        lo = solve_homogeneous(params, history, knot - eps)
        hi = solve_homogeneous(params, history, knot + eps)
        assert hi == pytest.approx(lo, abs=1e-8)


def test_residual_satisfies_equation():
    a, b, tau = -0.4, 0.5, 1.0
    params = DelayOdeParams(a=a, b=b, tau=tau)
    history = HistoryFunction.from_funcspec(parse_function("cos(t)"))
    rho = lambda s: 0.3 * np.asarray(s, dtype=float)
    h = 1e-5
    for t in (0.37, 0.81, 1.43, 2.21):  # away from knots
        xp = superpose(params, history, rho, t + h)
        xm = superpose(params, history, rho, t - h)
        x = superpose(params, history, rho, t)
        x_lag = superpose(params, history, rho, t - tau)
        resid = (xp - xm) / (2 * h) - (a * x + b * x_lag + rho(t))
        assert abs(resid) < 1e-7


@settings(max_examples=20, deadline=None)
@given(
    c1=st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
    c2=st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
)
def test_property_linearity_in_history(c1, c2):
    params = DelayOdeParams(a=-0.6, b=0.7, tau=0.9)
    h1 = HistoryFunction.from_funcspec(parse_function("1 + t"))
    h2 = HistoryFunction.from_funcspec(parse_function("cos(t)"))
    combo = HistoryFunction.from_callables(
        lambda s: c1 * (1.0 + np.asarray(s, float)) + c2 * np.cos(np.asarray(s, float)),
        lambda s: c1 * np.ones_like(np.asarray(s, float)) - c2 * np.sin(np.asarray(s, float)),
    )
    t = 1.7
    lhs = solve_homogeneous(params, combo, t)
    rhs = (c1 * solve_homogeneous(params, h1, t)
           + c2 * solve_homogeneous(params, h2, t))
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-10)
