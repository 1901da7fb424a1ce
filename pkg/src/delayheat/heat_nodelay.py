"""Spectral solver for the 1D linear heat equation with drift and reaction:

    v_t = a^2 v_xx + b v_x + c v + g(x, t)      on (0, l) x (0, T],
    v(0, t) = theta1(t),  v(l, t) = theta2(t),  v(x, 0) = psi(x).

Change of variables
-------------------
With mu = -b / (2 a^2) and gamma = c - (b / (2a))^2, the substitution
v = exp(mu x + gamma t) u removes drift and reaction:

    u_t = a^2 u_xx + f,                 f = exp(-mu x - gamma t) g,
    u(0, t) = mu1(t) = exp(-gamma t) theta1(t),
    u(l, t) = mu2(t) = exp(-mu l - gamma t) theta2(t),
    u(x, 0) = phi(x) = exp(-mu x) psi(x).

Writing u = w + lift with the linear boundary lift
lift(x, t) = mu1(t) + (x / l)(mu2(t) - mu1(t)) gives a homogeneous Dirichlet
problem for w with initial value Phi = phi - lift(., 0) and forcing
F = f - d/dt lift (the lift is spatially linear, so it drops out of the
diffusion term; no zeroth-order term survives the substitution).  The
``include_lift_reaction`` switch adds the alternative reading F += c * lift
for comparison experiments; it is off by default because it contradicts the
reduced equation (see test_heat_nodelay for the head-to-head check).

The solution splits into three parts synthesized over the sine eigenbasis:

    u1: free decay of Phi,      u1_n(t) = Phi_n exp(-(pi n a / l)^2 t)
    u2: Duhamel forcing term,   u2_n(t) = integral_0^t exp(-(pi n a / l)^2 (t-s)) F_n(s) ds
    u3: the boundary lift itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InputError
from .field import GridSpec, SolutionField
from .funcspec import (
    FunctionSpec,
    fs_const,
    fs_exp_weight,
    fs_ramp_x,
    fs_scale,
    fs_sum,
)
from .parallel import map_ordered
from .quadrature import QuadratureConfig, composite_gauss, graded_breakpoints
from .spectral import EigenBasis, sine_projection_rule

_NEGLIGIBLE_REL = 1e-14  # per-mode contribution floor for early stopping


@dataclass
class HeatProblem:
    """Problem data for the drift-reaction heat equation (no delay)."""

    a: float
    b: float
    c: float
    length: float
    horizon: float
    g: FunctionSpec
    psi: FunctionSpec
    theta1: FunctionSpec
    theta2: FunctionSpec
    include_lift_reaction: bool = False

    def __post_init__(self):
        for name in ("a", "b", "c", "length", "horizon"):
            if not math.isfinite(getattr(self, name)):
                raise InputError(f"{name} must be finite")
        if self.a == 0.0:
            raise InputError("diffusion coefficient a must be nonzero")
        if self.length <= 0.0:
            raise InputError(f"length must be positive, got {self.length!r}")
        if self.horizon <= 0.0:
            raise InputError(f"horizon must be positive, got {self.horizon!r}")
        for name in ("g", "psi", "theta1", "theta2"):
            if not isinstance(getattr(self, name), FunctionSpec):
                raise InputError(f"{name} must be a FunctionSpec")


@dataclass
class ReducedProblem:
    """Drift-free form of a :class:`HeatProblem` after the exponential
    change of variables; produced by :func:`reduce_problem`."""

    a: float
    length: float
    horizon: float
    mu: float
    gamma: float
    f: FunctionSpec
    phi: FunctionSpec
    mu1: FunctionSpec
    mu2: FunctionSpec
    lift: FunctionSpec
    shifted_initial: FunctionSpec  # Phi = phi - lift(., 0)
    forcing: FunctionSpec          # F = f - d/dt lift (+ c * lift if requested)
    _cache: dict = field(default_factory=dict, repr=False)


def reduce_problem(p):
    """Apply the drift/reaction-removing change of variables."""
    mu = -p.b / (2.0 * p.a**2)
    gamma = p.c - (p.b / (2.0 * p.a)) ** 2
    f = fs_exp_weight(p.g, coef_x=-mu, coef_t=-gamma)
    phi = fs_exp_weight(p.psi, coef_x=-mu)
    mu1 = fs_exp_weight(p.theta1, coef_t=-gamma)
    mu2 = fs_exp_weight(p.theta2, coef_t=-gamma, offset=-mu * p.length)
    slope = fs_scale(fs_sum(mu2, fs_scale(mu1, -1.0)), 1.0 / p.length)
    lift = fs_sum(mu1, fs_ramp_x(slope))

    mu1_0 = mu1(0.0, 0.0)
    mu2_0 = mu2(0.0, 0.0)
    shifted_initial = fs_sum(
        phi,
        fs_const(-mu1_0),
        fs_ramp_x(fs_const(-(mu2_0 - mu1_0) / p.length)),
    )
    forcing = fs_sum(f, fs_scale(lift.differentiate("t"), -1.0))
    if p.include_lift_reaction:
        forcing = fs_sum(forcing, fs_scale(lift, p.c))
    return ReducedProblem(
        a=p.a,
        length=p.length,
        horizon=p.horizon,
        mu=mu,
        gamma=gamma,
        f=f,
        phi=phi,
        mu1=mu1,
        mu2=mu2,
        lift=lift,
        shifted_initial=shifted_initial,
        forcing=forcing,
    )


# ---------------------------------------------------------------------------
# Mode data (projected coefficient paths), cached per (basis, quad)
# ---------------------------------------------------------------------------


@dataclass
class _ModeData:
    initial_coeffs: np.ndarray      # Phi_n
    decay_rates: np.ndarray         # (pi n a / l)^2
    forcing_splines: list           # per-mode cubic splines of F_n(t) on [0, T]
    forcing_sup: np.ndarray         # sup_t |F_n| over the samples


def _mode_data(rp, basis, quad, path_samples=257):
    key = (basis, quad, path_samples)
    cached = rp._cache.get(key)
    if cached is not None:
        return cached
    from scipy.interpolate import CubicSpline

    pts, wts, sin_table = sine_projection_rule(basis, quad)
    weight = (2.0 / basis.length) * wts
    phi_vals = np.asarray(rp.shifted_initial(pts, 0.0), dtype=float)
    initial_coeffs = sin_table @ (weight * phi_vals)

    ts = np.linspace(0.0, rp.horizon, path_samples)
    f_grid = np.asarray(rp.forcing(pts[:, None], ts[None, :]), dtype=float)
    f_paths = sin_table @ (weight[:, None] * f_grid)  # (N, path_samples)
    splines = [CubicSpline(ts, f_paths[i]) for i in range(basis.n_modes)]
    data = _ModeData(
        initial_coeffs=initial_coeffs,
        decay_rates=basis.eigenvalues() * rp.a**2,
        forcing_splines=splines,
        forcing_sup=np.max(np.abs(f_paths), axis=1),
    )
    rp._cache[key] = data
    return data


def _duhamel_decay(rate, forcing_spline, t, quad):
    """integral_0^t exp(-rate (t - s)) forcing(s) ds with graded panels."""
    if t == 0.0:
        return 0.0

    def integrand(s):
        return np.exp(-rate * (t - s)) * forcing_spline(s)

    breaks = graded_breakpoints(0.0, t, rate)
    return composite_gauss(integrand, 0.0, t, quad, breaks)


def _check_point(rp, x, t):
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < -1e-12) or np.any(x_arr > rp.length + 1e-12):
        raise DomainError(f"x outside [0, {rp.length}]")
    if not (-1e-12 <= t <= rp.horizon + 1e-9):
        raise DomainError(f"t={t!r} outside [0, {rp.horizon}]")


def solve_u1(rp, basis, x, t, quad=None):
    """Free-decay part sum_n Phi_n exp(-(pi n a / l)^2 t) sin(pi n x / l)."""
    if quad is None:
        quad = QuadratureConfig()
    _check_point(rp, x, t)
    data = _mode_data(rp, basis, quad)
    weights = data.initial_coeffs * np.exp(-data.decay_rates * t)
    out = weights @ basis.eigenfunctions(x)
    return float(out[0]) if np.ndim(x) == 0 else out


def solve_u2(rp, basis, x, t, quad=None):
    """Duhamel part of the forced response at (x, t)."""
    if quad is None:
        quad = QuadratureConfig()
    _check_point(rp, x, t)
    data = _mode_data(rp, basis, quad)
    coeffs = np.array([
        _duhamel_decay(data.decay_rates[i], data.forcing_splines[i], float(t), quad)
        for i in range(basis.n_modes)
    ])
    out = coeffs @ basis.eigenfunctions(x)
    return float(out[0]) if np.ndim(x) == 0 else out


def solve_u3(rp, x, t):
    """Boundary lift mu1(t) + (x / l)(mu2(t) - mu1(t))."""
    _check_point(rp, x, t)
    return rp.lift(x, t)


def solve(p, basis, grid=None, quad=None, path_samples=257):
    """Solve the full problem on a grid; returns a :class:`SolutionField`.

    The field carries both the reduced-frame values u and the original-frame
    values v = exp(mu x + gamma t) u.
    """
    if quad is None:
        quad = QuadratureConfig()
    if grid is None:
        grid = GridSpec(nx=200, nt=200)
    if not isinstance(basis, EigenBasis):
        raise InputError("basis must be an EigenBasis")
    rp = reduce_problem(p)
    x = grid.x_points(p.length)
    t = grid.t_points(p.horizon)
    data = _mode_data(rp, basis, quad, path_samples)
    sin_x = basis.eigenfunctions(x)  # (N, nx+1)

    # Free decay, vectorized over the whole grid.
    decay = np.exp(-np.outer(t, data.decay_rates))  # (nt+1, N)
    u = (decay * data.initial_coeffs) @ sin_x

    # Duhamel term, mode by mode with an early-out for negligible forcing:
    # u2_n is bounded by sup|F_n| * min(t, 1/rate).
    rates = data.decay_rates
    bounds = data.forcing_sup * np.minimum(p.horizon, 1.0 / np.maximum(rates, 1e-300))
    scale = max(float(np.max(np.abs(u))), float(bounds.max()), 1e-300)
    consecutive_negligible = 0
    active = []
    for i in range(basis.n_modes):
        if bounds[i] < _NEGLIGIBLE_REL * scale:
            consecutive_negligible += 1
            if consecutive_negligible >= 3:
                break
            continue
        consecutive_negligible = 0
        active.append(i)

    def mode_trajectory(i):
        traj = np.zeros(t.size)
        for j, tj in enumerate(t):
            if tj > 0.0:
                traj[j] = _duhamel_decay(rates[i], data.forcing_splines[i],
                                         float(tj), quad)
        return traj

    for i, traj in zip(active, map_ordered(mode_trajectory, active)):
        u += np.outer(traj, sin_x[i])

    # Boundary lift and return to the original frame.
    u += np.asarray(rp.lift(x[None, :], t[:, None]), dtype=float)
    v = u * np.exp(rp.mu * x)[None, :] * np.exp(rp.gamma * t)[:, None]
    meta = {
        "model": "heat_nodelay",
        "coefficients": {"a": p.a, "b": p.b, "c": p.c},
        "length": p.length,
        "horizon": p.horizon,
        "n_modes": basis.n_modes,
        "mu": rp.mu,
        "gamma": rp.gamma,
        "quad": {
            "nodes_per_panel": quad.nodes_per_panel,
            "max_panel_splits": quad.max_panel_splits,
            "abs_tol": quad.abs_tol,
        },
    }
    return SolutionField(x=x, t=t, v=v, u=u, source="spectral", meta=meta)
