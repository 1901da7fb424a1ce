"""Closed-form solution of the scalar linear delay ODE

    x'(t) = a x(t) + b x(t - tau),    x = beta on [-tau, 0].

Everything is expressed through one kernel

    K(xi) = exp(a (xi + tau)) * delayed_exp(b * exp(-a tau); xi)
          = sum_{j=0}^{k(xi)}  b^j psi_j^j exp(a psi_j) / j!,   psi_j = xi - (j-1) tau,

(zero for xi < -tau), where k(xi) is the delayed-exponential segment index.
The right-hand form never materializes b * exp(-a tau): each term combines its
power, factorial, and exponential in log space, so stiff coefficients (|a| tau
of order thousands, as produced by high spatial modes of the delayed heat
equation) evaluate without overflow.

Solution formulas:

    homogeneous:  x(t) = K(t) beta(-tau)
                         + integral_{-tau}^{0} K(t - tau - s) [beta'(s) - a beta(s)] ds
    forced (zero history):
                  x(t) = integral_{0}^{t} K(t - tau - s) rho(s) ds

and the full solution is their sum.  Integrands are piecewise smooth with
kinks where t - tau - s crosses a multiple of tau; quadrature panels split
there and are graded toward the end where exp(-a s) peaks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError, NumericError
from .funcspec import FunctionSpec
from .quadrature import QuadratureConfig, composite_gauss, graded_breakpoints


@dataclass(frozen=True)
class DelayOdeParams:
    """Coefficients of x'(t) = a x(t) + b x(t - tau)."""

    a: float
    b: float
    tau: float

    def __post_init__(self):
        for name in ("a", "b", "tau"):
            if not math.isfinite(getattr(self, name)):
                raise InputError(f"{name} must be finite")
        if self.tau <= 0.0:
            raise InputError(f"tau must be positive, got {self.tau!r}")

    @property
    def scaled_delay_coeff(self):
        """b * exp(-a tau): the delayed-exponential parameter of the closed form.

        Computed lazily; overflows in float for strongly negative a * tau,
        which is why the solver never uses it directly (see module docstring).
        Diagnostics use :meth:`log_abs_scaled_delay_coeff` instead.
        """
        return self.b * math.exp(-self.a * self.tau)

    def log_abs_scaled_delay_coeff(self):
        """log |b * exp(-a tau)|; -inf when b == 0."""
        if self.b == 0.0:
            return -math.inf
        return math.log(abs(self.b)) - self.a * self.tau


@dataclass
class HistoryFunction:
    """History segment beta on [-tau, 0] with its derivative.

    Both callables must accept numpy arrays.  ``beta_prime`` is either
    supplied directly or produced by differentiating the expression / the
    interpolating spline of the source data.
    """

    beta: object
    beta_prime: object

    @classmethod
    def from_funcspec(cls, fs):
        if not isinstance(fs, FunctionSpec):
            raise InputError("from_funcspec expects a FunctionSpec")
        d = fs.differentiate("t", 1)
        return cls(beta=lambda s: fs(0.0, s), beta_prime=lambda s: d(0.0, s))

    @classmethod
    def from_samples(cls, points, values):
        from scipy.interpolate import CubicSpline

        spline = CubicSpline(np.asarray(points, float), np.asarray(values, float))
        return cls(beta=spline, beta_prime=spline.derivative(1))

    @classmethod
    def from_callables(cls, beta, beta_prime):
        return cls(beta=beta, beta_prime=beta_prime)


_MAX_EXP_ARG = 700.0  # below the float64 overflow threshold of exp


def kernel(params, xi):
    """Evaluate K(xi) (see module docstring), vectorized over xi."""
    xi = np.asarray(xi, dtype=float)
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi)
    out = np.zeros_like(xi)
    alive = xi >= -params.tau
    if not np.any(alive):
        return float(out[0]) if scalar else out
    seg = np.zeros(xi.shape, dtype=int)
    seg[alive] = np.floor(xi[alive] / params.tau).astype(int) + 1
    kmax = int(seg[alive].max())
    a, b, tau = params.a, params.b, params.tau
    for j in range(kmax + 1):
        mask = alive & (seg >= j)
        if not np.any(mask):
            continue
        psi = xi[mask] - (j - 1) * tau
        if j == 0:
            arg = a * psi
            if np.any(arg > _MAX_EXP_ARG):
                raise NumericError("delay kernel overflow (a * xi too large)")
            term = np.exp(arg)
        else:
            base = b * psi  # psi >= 0 whenever term j is present
            term = np.zeros_like(psi)
            nz = base != 0.0
            if np.any(nz):
                logmag = (j * np.log(np.abs(base[nz])) + a * psi[nz]
                          - math.lgamma(j + 1))
                if np.any(logmag > _MAX_EXP_ARG):
                    raise NumericError(
                        "delay kernel overflow: term magnitude exceeds float range"
                    )
                sign = np.where(base[nz] < 0.0, (-1.0) ** j, 1.0)
                term[nz] = sign * np.exp(logmag)
        out[mask] += term
    if not np.all(np.isfinite(out)):
        raise NumericError("delay kernel produced a non-finite value")
    return float(out[0]) if scalar else out


def _knot_crossings(t, tau, lo, hi):
    """Points s in (lo, hi) where t - tau - s crosses a multiple of tau."""
    m_lo = int(math.floor((t - hi) / tau)) - 1
    m_hi = int(math.ceil((t - lo) / tau)) + 1
    return [t - m * tau for m in range(m_lo, m_hi + 1) if lo < t - m * tau < hi]


def solve_homogeneous(params, history, t, quad=None):
    """x(t) for the homogeneous problem (rho = 0) with history ``history``.

    ``t`` may be a scalar or an array (evaluated pointwise)."""
    if quad is None:
        quad = QuadratureConfig()
    t_arr = np.asarray(t, dtype=float)
    if t_arr.ndim > 0:
        return np.array(
            [solve_homogeneous(params, history, tv, quad) for tv in t_arr])
    t = float(t_arr)
    if not math.isfinite(t):
        raise InputError(f"t must be finite, got {t!r}")
    if t < -params.tau:
        raise DomainError(f"t={t!r} is below -tau={-params.tau!r}")
    if t <= 0.0:
        return float(np.asarray(history.beta(t), dtype=float))
    a = params.a
    beta_start = float(np.asarray(history.beta(-params.tau), dtype=float))
    head = kernel(params, t) * beta_start

    def integrand(s):
        return kernel(params, t - params.tau - s) * (
            np.asarray(history.beta_prime(s), dtype=float)
            - a * np.asarray(history.beta(s), dtype=float)
        )

    breaks = _knot_crossings(t, params.tau, -params.tau, 0.0)
    breaks += graded_breakpoints(-params.tau, 0.0, -a)
    tail = composite_gauss(integrand, -params.tau, 0.0, quad, breaks)
    return head + tail


def solve_forced(params, rho, t, quad=None):
    """x(t) for zero history and forcing rho (Duhamel form).

    ``t`` may be a scalar or an array (evaluated pointwise)."""
    if quad is None:
        quad = QuadratureConfig()
    t_arr = np.asarray(t, dtype=float)
    if t_arr.ndim > 0:
        return np.array([solve_forced(params, rho, tv, quad) for tv in t_arr])
    t = float(t_arr)
    if not math.isfinite(t):
        raise InputError(f"t must be finite, got {t!r}")
    if t < -params.tau:
        raise DomainError(f"t={t!r} is below -tau={-params.tau!r}")
    if t <= 0.0:
        return 0.0

    def integrand(s):
        return kernel(params, t - params.tau - s) * np.asarray(rho(s), dtype=float)

    breaks = _knot_crossings(t, params.tau, 0.0, t)
    breaks += graded_breakpoints(0.0, t, -params.a)
    return composite_gauss(integrand, 0.0, t, quad, breaks)


def superpose(params, history, rho, t, quad=None):
    """Full solution: homogeneous part plus forced part."""
    return solve_homogeneous(params, history, t, quad) + solve_forced(
        params, rho, t, quad
    )
