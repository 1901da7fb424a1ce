"""Finite-difference cross-check solver (method of lines + method of steps).

Space: central second-order stencils on a uniform grid, Dirichlet rows pinned.
Time: Crank-Nicolson (default) or backward Euler, tridiagonal solves via
banded LU.  The delayed terms are explicit data: with dt = tau / nt_per_tau
the lagged time level t - tau is exactly a stored row, so each step of the
delayed problem only solves the instantaneous operator implicitly.

This module is deliberately independent of the spectral solver stack
(delayed_exp / delay_ode / spectral / heat_* are never imported here); the
two solution paths share nothing but problem data and the field container.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import InputError
from .field import SolutionField

_SCHEMES = ("crank_nicolson", "backward_euler")


@dataclass(frozen=True)
class FdConfig:
    """Grid and scheme for the finite-difference solver."""

    nx: int = 200
    nt: int = None           # time steps over [0, T] (problems without delay)
    nt_per_tau: int = None   # time steps per delay (delayed problems)
    scheme: str = "crank_nicolson"

    def __post_init__(self):
        if self.nx < 3:
            raise InputError(f"nx must be at least 3, got {self.nx!r}")
        if self.scheme not in _SCHEMES:
            raise InputError(f"scheme must be one of {_SCHEMES}, got {self.scheme!r}")
        if self.nt is not None and self.nt < 1:
            raise InputError(f"nt must be at least 1, got {self.nt!r}")
        if self.nt_per_tau is not None and self.nt_per_tau < 1:
            raise InputError(f"nt_per_tau must be at least 1, got {self.nt_per_tau!r}")


def _stencil(nx, dx, diff2, drift, react):
    """Rows of the interior operator diff2 * v_xx + drift * v_x + react * v."""
    sub = np.full(nx + 1, diff2 / dx**2 - drift / (2.0 * dx))
    diag = np.full(nx + 1, -2.0 * diff2 / dx**2 + react)
    sup = np.full(nx + 1, diff2 / dx**2 + drift / (2.0 * dx))
    for arr in (sub, diag, sup):
        arr[0] = arr[-1] = 0.0
    return sub, diag, sup


def _implicit_bands(nx, sub, diag, sup, theta_dt):
    """Banded form of I - theta_dt * A with identity boundary rows."""
    ab = np.zeros((3, nx + 1))
    ab[1, :] = 1.0 - theta_dt * diag
    ab[0, 1:] = -theta_dt * sup[:-1]
    ab[2, :-1] = -theta_dt * sub[1:]
    return ab


def _apply_interior(sub, diag, sup, v):
    out = np.zeros_like(v)
    out[1:-1] = sub[1:-1] * v[:-2] + diag[1:-1] * v[1:-1] + sup[1:-1] * v[2:]
    return out


def fd_solve_nodelay(p, cfg):
    """Finite-difference solution of the drift-reaction heat equation."""
    if cfg.nt is None:
        raise InputError("FdConfig.nt is required for problems without delay")
    nx, nt = cfg.nx, cfg.nt
    x = np.linspace(0.0, p.length, nx + 1)
    t = np.linspace(0.0, p.horizon, nt + 1)
    dx = x[1] - x[0]
    dt = t[1] - t[0]

    sub, diag, sup = _stencil(nx, dx, p.a**2, p.b, p.c)
    g_rows = np.asarray(p.g(x[None, :], t[:, None]), dtype=float)
    left = np.asarray(p.theta1(0.0, t), dtype=float)
    right = np.asarray(p.theta2(0.0, t), dtype=float)

    v = np.empty((nt + 1, nx + 1))
    v[0] = np.asarray(p.psi(x, 0.0), dtype=float)
    v[0, 0], v[0, -1] = left[0], right[0]

    implicit_weight = 0.5 * dt if cfg.scheme == "crank_nicolson" else dt
    ab = _implicit_bands(nx, sub, diag, sup, implicit_weight)
    for j in range(nt):
        if cfg.scheme == "crank_nicolson":
            rhs = v[j] + 0.5 * dt * _apply_interior(sub, diag, sup, v[j])
            rhs[1:-1] += 0.5 * dt * (g_rows[j, 1:-1] + g_rows[j + 1, 1:-1])
        else:
            rhs = v[j].copy()
            rhs[1:-1] += dt * g_rows[j + 1, 1:-1]
        rhs[0], rhs[-1] = left[j + 1], right[j + 1]
        v[j + 1] = solve_banded((1, 1), ab, rhs)

    meta = {
        "model": "heat_nodelay",
        "scheme": cfg.scheme,
        "nx": nx,
        "nt": nt,
        "dx": float(dx),
        "dt": float(dt),
    }
    return SolutionField(x=x, t=t, v=v, source="fd", meta=meta)


def fd_solve_delay(p, cfg):
    """Method-of-steps finite-difference solution of the delayed heat equation.

    The time step divides tau exactly, so v(., t - tau) is a stored row; its
    spatial derivatives are taken with the same central stencils and fed to
    the implicit step as data.
    """
    if cfg.nt_per_tau is None:
        raise InputError("FdConfig.nt_per_tau is required for delayed problems")
    nx, m = cfg.nx, cfg.nt_per_tau
    dt = p.tau / m
    steps = int(math.ceil(p.horizon / dt - 1e-9))
    x = np.linspace(0.0, p.length, nx + 1)
    t = dt * np.arange(-m, steps + 1)
    dx = x[1] - x[0]

    sub1, diag1, sup1 = _stencil(nx, dx, p.a1**2, p.b1, p.d1)
    sub2, diag2, sup2 = _stencil(nx, dx, p.a2**2, p.b2, p.d2)
    left = np.asarray(p.theta1(0.0, t), dtype=float)
    right = np.asarray(p.theta2(0.0, t), dtype=float)
    t_pos = t[m:]
    g_rows = np.asarray(p.g(x[None, :], t_pos[:, None]), dtype=float)

    v = np.empty((t.size, nx + 1))
    v[: m + 1] = np.asarray(p.psi(x[None, :], t[: m + 1, None]), dtype=float)
    v[: m + 1, 0], v[: m + 1, -1] = left[: m + 1], right[: m + 1]

    def lagged_data(row):
        return _apply_interior(sub2, diag2, sup2, v[row])

    implicit_weight = 0.5 * dt if cfg.scheme == "crank_nicolson" else dt
    ab = _implicit_bands(nx, sub1, diag1, sup1, implicit_weight)
    for i in range(m, t.size - 1):
        j = i - m  # index into g_rows (time t_i = t_pos[j])
        if cfg.scheme == "crank_nicolson":
            rhs = v[i] + 0.5 * dt * _apply_interior(sub1, diag1, sup1, v[i])
            rhs[1:-1] += 0.5 * dt * (
                lagged_data(i - m)[1:-1] + lagged_data(i + 1 - m)[1:-1]
            )
            rhs[1:-1] += 0.5 * dt * (g_rows[j, 1:-1] + g_rows[j + 1, 1:-1])
        else:
            rhs = v[i].copy()
            rhs[1:-1] += dt * lagged_data(i + 1 - m)[1:-1]
            rhs[1:-1] += dt * g_rows[j + 1, 1:-1]
        rhs[0], rhs[-1] = left[i + 1], right[i + 1]
        v[i + 1] = solve_banded((1, 1), ab, rhs)

    meta = {
        "model": "heat_delay",
        "scheme": cfg.scheme,
        "nx": nx,
        "nt_per_tau": m,
        "dx": float(dx),
        "dt": float(dt),
    }
    return SolutionField(x=x, t=t, v=v, source="fd", meta=meta)
