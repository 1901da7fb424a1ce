"""Tests for the sine eigenbasis: projection, synthesis, and decay fitting."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delayheat import (
    DecayReport,
    EigenBasis,
    InputError,
    InsufficientDataError,
    decay_fit,
    sine_coefficients,
    sine_synthesis,
)


# ---------------------------------------------------------------------------
# Basis bookkeeping
# ---------------------------------------------------------------------------


def test_mode_numbers_and_eigenvalues():
    basis = EigenBasis(length=2.0, n_modes=5)
    assert np.array_equal(basis.mode_numbers, [1, 2, 3, 4, 5])
    np.testing.assert_allclose(basis.wavenumbers(), np.pi * np.arange(1, 6) / 2.0)
    np.testing.assert_allclose(basis.eigenvalues(), (np.pi * np.arange(1, 6) / 2.0) ** 2)


def test_eigenfunctions_shape_and_values():
    basis = EigenBasis(length=np.pi, n_modes=3)
    x = np.array([0.0, np.pi / 2.0, np.pi])
    table = basis.eigenfunctions(x)
    assert table.shape == (3, 3)
    # Modes vanish at both ends of the interval.
    np.testing.assert_allclose(table[:, 0], 0.0, atol=1e-15)
    np.testing.assert_allclose(table[:, -1], 0.0, atol=1e-14)
    # sin(n x) at x = pi/2 is 1, 0, -1 for n = 1, 2, 3.
    np.testing.assert_allclose(table[:, 1], [1.0, 0.0, -1.0], atol=1e-15)


def test_basis_validation():
    with pytest.raises(InputError):
        EigenBasis(length=-1.0, n_modes=4)
    with pytest.raises(InputError):
        EigenBasis(length=math.inf, n_modes=4)
    with pytest.raises(InputError):
        EigenBasis(length=1.0, n_modes=0)


# ---------------------------------------------------------------------------
# Projection against closed forms
# ---------------------------------------------------------------------------


def test_single_mode_projection_is_unit_vector():
    basis = EigenBasis(length=np.pi, n_modes=8)
    coeffs = sine_coefficients(lambda x: np.sin(3.0 * x), basis)
    expected = np.zeros(8)
    expected[2] = 1.0
    np.testing.assert_allclose(coeffs, expected, atol=1e-12)


def test_parabola_coefficients_match_closed_form():
    # x (1 - x) on [0, 1] has sine coefficients 8 / (pi^3 n^3) for odd n,
    # zero for even n.
    basis = EigenBasis(length=1.0, n_modes=63)
    coeffs = sine_coefficients(lambda x: x * (1.0 - x), basis)
    n = basis.mode_numbers
    expected = np.where(n % 2 == 1, 8.0 / (np.pi**3 * n.astype(float) ** 3), 0.0)
    np.testing.assert_allclose(coeffs, expected, atol=1e-10)


def test_parabola_coefficients_scale_with_length():
    # x (l - x) scales the odd coefficients to 8 l^2 / (pi^3 n^3).
    length = 2.5
    basis = EigenBasis(length=length, n_modes=21)
    coeffs = sine_coefficients(lambda x: x * (length - x), basis)
    n = basis.mode_numbers
    expected = np.where(
        n % 2 == 1, 8.0 * length**2 / (np.pi**3 * n.astype(float) ** 3), 0.0
    )
    np.testing.assert_allclose(coeffs, expected, atol=1e-10)


def test_projection_synthesis_round_trip_band_limited():
    basis = EigenBasis(length=1.7, n_modes=12)
    rng = np.random.default_rng(7)
    target = rng.normal(size=12)
    f = lambda x: sine_synthesis(target, basis, x)
    recovered = sine_coefficients(f, basis)
    np.testing.assert_allclose(recovered, target, atol=1e-11)


def test_parseval_identity():
    # For f = sum c_n sin(pi n x / l), the integral of f^2 over [0, l]
    # equals (l / 2) * sum c_n^2.
    basis = EigenBasis(length=1.3, n_modes=6)
    coeffs = np.array([0.9, -0.4, 0.2, 0.0, 0.05, -0.01])
    xs = np.linspace(0.0, basis.length, 20001)
    vals = sine_synthesis(coeffs, basis, xs)
    integral = np.trapezoid(vals**2, xs)
    assert integral == pytest.approx(basis.length / 2.0 * np.sum(coeffs**2), rel=1e-6)


def test_synthesis_scalar_and_validation():
    basis = EigenBasis(length=1.0, n_modes=2)
    val = sine_synthesis([1.0, 0.5], basis, 0.25)
    assert isinstance(val, float)
    assert val == pytest.approx(
        math.sin(math.pi * 0.25) + 0.5 * math.sin(2.0 * math.pi * 0.25), abs=1e-14
    )
    with pytest.raises(InputError):
        sine_synthesis([1.0, 2.0, 3.0], basis, 0.5)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.floats(min_value=-5.0, max_value=5.0, allow_nan=False),
        min_size=4,
        max_size=10,
    )
)
def test_round_trip_property(target):
    basis = EigenBasis(length=1.0, n_modes=len(target))
    target = np.asarray(target)
    recovered = sine_coefficients(lambda x: sine_synthesis(target, basis, x), basis)
    np.testing.assert_allclose(recovered, target, atol=1e-9)


# ---------------------------------------------------------------------------
# Decay fitting
# ---------------------------------------------------------------------------


def test_decay_fit_recovers_cubic_rate():
    n = np.arange(1, 64, dtype=float)
    coeffs = np.where(n % 2 == 1, 8.0 / (np.pi**3 * n**3), 0.0)
    report = decay_fit(coeffs)
    assert isinstance(report, DecayReport)
    assert report.slope == pytest.approx(3.0, abs=0.1)
    assert not report.super_polynomial
    assert report.n_used == 32  # odd modes only
    assert report.window == (1, 63)


def test_decay_fit_thresholds():
    n = np.arange(1, 64, dtype=float)
    coeffs = np.where(n % 2 == 1, 8.0 / (np.pi**3 * n**3), 0.0)
    # Slope ~3 clears the class threshold 2.5 for m = 1 ...
    assert decay_fit(coeffs, m=1).passed
    # ... but not 4.5 for m = 2.
    assert not decay_fit(coeffs, m=2).passed


def test_decay_fit_super_polynomial_flag():
    n = np.arange(1, 41, dtype=float)
    coeffs = np.exp(-n)
    report = decay_fit(coeffs, m=3)
    assert report.super_polynomial
    # Super-polynomial decay passes any algebraic class threshold.
    assert report.passed


def test_decay_fit_pure_power_not_flagged_super_polynomial():
    n = np.arange(1, 41, dtype=float)
    report = decay_fit(1.0 / n**2)
    assert not report.super_polynomial
    assert report.slope == pytest.approx(2.0, abs=1e-8)
    assert report.constant == pytest.approx(1.0, rel=1e-6)


def test_decay_fit_ignores_floor_noise():
    # Entries within 1e-13 of the peak magnitude are quadrature junk and
    # must not enter the fit window.
    n = np.arange(1, 21, dtype=float)
    coeffs = 1.0 / n**3
    coeffs[10:] = 1e-16  # below the relative floor
    report = decay_fit(coeffs)
    assert report.n_used == 10
    assert report.window == (1, 10)
    assert report.slope == pytest.approx(3.0, abs=1e-6)


def test_decay_fit_insufficient_data():
    with pytest.raises(InsufficientDataError):
        decay_fit([1.0, 0.5, 0.25, 0.125])
    # Plenty of entries but almost all at the relative floor.
    seq = np.full(30, 1e-16)
    seq[:5] = 1.0 / np.arange(1, 6, dtype=float)
    with pytest.raises(InsufficientDataError):
        decay_fit(seq)


def test_decay_fit_rejects_matrix_input():
    with pytest.raises(InputError):
        decay_fit(np.ones((4, 4)))


def test_decay_report_serialization():
    report = decay_fit(1.0 / np.arange(1, 20, dtype=float) ** 3, m=1)
    data = report.to_dict()
    assert data["pass"] is True
    assert data["threshold"] == pytest.approx(2.5)
    assert data["slope"] == pytest.approx(report.slope)
    assert data["window"] == [1, 19]
