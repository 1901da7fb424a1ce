"""Sine eigenbasis on [0, l]: projection, synthesis, and tail-decay fitting.

The Dirichlet Laplacian on [0, l] has eigenfunctions sin(pi n x / l) with
eigenvalues (pi n / l)^2.  Projections use composite Gauss panels whose count
scales with the highest requested mode (at least max(4, 2N) panels), then a
panel-doubling check, so oscillatory integrands stay resolved.

``decay_fit`` estimates the algebraic decay rate of a coefficient sequence:
least squares of log|c_n| against log n over the nonzero tail.  The fitted
slope is the practical proxy this package uses for membership in the
smoothness classes that guarantee classical solvability (|c_n| <= C / n^p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InsufficientDataError, QuadratureError
from .quadrature import QuadratureConfig, panel_nodes


@dataclass(frozen=True)
class EigenBasis:
    """First ``n_modes`` Dirichlet sine modes on [0, length]."""

    length: float
    n_modes: int

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0.0):
            raise InputError(f"length must be positive and finite, got {self.length!r}")
        if self.n_modes < 1:
            raise InputError(f"n_modes must be at least 1, got {self.n_modes!r}")

    @property
    def mode_numbers(self):
        return np.arange(1, self.n_modes + 1)

    def wavenumbers(self):
        """pi n / length for n = 1..N."""
        return np.pi * self.mode_numbers / self.length

    def eigenvalues(self):
        """(pi n / length)^2 for n = 1..N."""
        return self.wavenumbers() ** 2

    def eigenfunctions(self, x):
        """Matrix sin(pi n x / length), shape (N, len(x))."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.sin(np.outer(self.wavenumbers(), x))


def sine_projection_rule(basis, quad=None):
    """Quadrature rule resolving all basis modes: (points, weights, sin_table).

    Uses max(4, 2 N) uniform panels on [0, length] so the fastest mode has
    at least two panels per period; sin_table has shape (N, n_points).
    """
    if quad is None:
        quad = QuadratureConfig()
    panels = max(4, 2 * basis.n_modes)
    edges = np.linspace(0.0, basis.length, panels + 1)
    pts, wts = panel_nodes(edges, quad.nodes_per_panel)
    return pts, wts, basis.eigenfunctions(pts)


def sine_coefficients(f, basis, quad=None):
    """Coefficients c_n = (2 / l) * integral f(x) sin(pi n x / l) dx, n = 1..N.

    ``f`` must be vectorized over x.  The panel count is doubled until the
    whole coefficient vector is stable to quadrature tolerance.
    """
    if quad is None:
        quad = QuadratureConfig()
    panels = max(4, 2 * basis.n_modes)

    def level(panels):
        edges = np.linspace(0.0, basis.length, panels + 1)
        pts, wts = panel_nodes(edges, quad.nodes_per_panel)
        vals = np.asarray(f(pts), dtype=float)
        return (2.0 / basis.length) * (basis.eigenfunctions(pts) @ (wts * vals))

    coeffs = level(panels)
    residual = np.inf
    for _ in range(quad.max_panel_splits):
        panels *= 2
        refined = level(panels)
        residual = float(np.max(np.abs(refined - coeffs)))
        coeffs = refined
        scale = float(np.max(np.abs(refined))) if refined.size else 0.0
        if residual <= quad.abs_tol + 1e-14 * scale:
            return coeffs
    raise QuadratureError(
        f"sine projection did not converge to {quad.abs_tol:g}", residual=residual
    )


def sine_synthesis(coeffs, basis, x):
    """Evaluate sum_n c_n sin(pi n x / l) at the points x."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size != basis.n_modes:
        raise InputError(
            f"coefficient count {coeffs.size} does not match basis size {basis.n_modes}"
        )
    x_arr = np.asarray(x, dtype=float)
    out = coeffs @ basis.eigenfunctions(x_arr)
    if np.ndim(x) == 0:
        return float(out[0])
    return out


@dataclass
class DecayReport:
    """Result of fitting |c_n| ~ constant / n^slope over the nonzero tail.

    ``threshold``/``passed`` are filled when a target smoothness class was
    requested; ``passed`` is also granted when the sequence decays faster
    than any power (log-log curvature test), recorded in
    ``super_polynomial``.  Serialized with the key ``"pass"``.
    """

    slope: float
    constant: float
    window: tuple
    n_used: int
    super_polynomial: bool
    threshold: float = None
    passed: bool = None

    def to_dict(self):
        return {
            "slope": self.slope,
            "constant": self.constant,
            "window": list(self.window),
            "n_used": self.n_used,
            "super_polynomial": self.super_polynomial,
            "threshold": self.threshold,
            "pass": self.passed,
        }


def decay_fit(coeffs, m=None, fit_slack=0.25):
    """Fit the algebraic decay rate of a coefficient sequence.

    Zeros (and entries within factor 1e-13 of the largest magnitude, i.e.
    quadrature junk) are excluded.  With ``m`` given, the fit is judged
    against the class threshold 2 m + 1/2: passes when
    slope >= 2 m + 1/2 - fit_slack, or when decay is super-polynomial.
    Raises :class:`InsufficientDataError` with fewer than 8 usable entries.
    """
    mags = np.abs(np.asarray(coeffs, dtype=float))
    if mags.ndim != 1:
        raise InputError("decay_fit expects a 1D coefficient sequence")
    top = float(mags.max()) if mags.size else 0.0
    floor = top * 1e-13
    usable = np.flatnonzero(mags > floor)
    if usable.size < 8:
        raise InsufficientDataError(
            f"decay_fit needs at least 8 usable coefficients, found {usable.size}"
        )
    n = usable + 1.0
    logn = np.log(n)
    logc = np.log(mags[usable])
    alpha, intercept = np.polyfit(logn, logc, 1)
    slope = -float(alpha)
    constant = float(np.exp(intercept))

    super_poly = False
    half = usable.size // 2
    if half >= 4:
        a1, _ = np.polyfit(logn[:half], logc[:half], 1)
        a2, _ = np.polyfit(logn[half:], logc[half:], 1)
        super_poly = (-a2) - (-a1) > 1.0

    threshold = None
    passed = None
    if m is not None:
        threshold = 2.0 * m + 0.5
        passed = bool(super_poly or slope >= threshold - fit_slack)
    return DecayReport(
        slope=slope,
        constant=constant,
        window=(int(n[0]), int(n[-1])),
        n_used=int(usable.size),
        super_polynomial=bool(super_poly),
        threshold=threshold,
        passed=passed,
    )
