"""JSON run configuration.

A run is described by one JSON object::

    {
      "problem": {
        "kind": "delay",                 # or "nodelay"
        "diffusion": 1.0,                # instantaneous diffusion (squared rate)
        "drift": 0.0,                    # instantaneous drift
        "reaction": 0.0,                 # instantaneous reaction
        "diffusion_lag": 0.5,            # lagged counterparts (delay only)
        "drift_lag": 0.0,
        "reaction_lag": -1.0,
        "delay": 1.0,                    # lag tau (delay only)
        "length": 3.141592653589793,
        "horizon": 2.0,
        "source": "0",                   # f(x, t)
        "initial": "sin(x)",             # initial value (delay: on [-tau, 0])
        "trace_left": 0,                 # boundary trace at x = 0
        "trace_right": 0                 # boundary trace at x = length
      },
      "solver": {
        "modes": 64, "nx": 200, "nt": null, "nt_per_tau": 16,
        "path_samples": null,
        "quadrature": {"nodes_per_panel": 16, "max_panel_splits": 8,
                       "abs_tol": 1e-10}
      },
      "check": {"m": null, "delta": 0.5, "fit_slack": 0.25, "tol": 1e-8},
      "outputs": {"field_csv": "field.csv", "report_json": "report.json"},
      "mode": "solve"
    }

``outputs`` and ``mode`` are optional defaults; command-line flags and the
chosen subcommand take precedence.

Each function slot accepts a number (a constant), an expression string over
``x`` and ``t`` (with ``pi`` plus the problem's ``l`` and ``tau`` bound as
constants), or a sampled table::

    {"table": "1d", "var": "t", "points": [...], "values": [...],
     "interp": "cubic"}
    {"table": "2d", "x": [...], "t": [...], "values": [[...]],
     "interp": "cubic"}        # values[i][j] = f(x[i], t[j])

Unknown keys anywhere are rejected so typos cannot silently change a run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ConfigError, DelayHeatError
from .funcspec import (
    FunctionSpec,
    Sampled1DFunction,
    Sampled2DFunction,
    fs_const,
    parse_function,
)
from .heat_delay import DelayHeatProblem
from .heat_nodelay import HeatProblem
from .quadrature import QuadratureConfig


@dataclass
class SolverSettings:
    """Discretization choices for a run."""

    modes: int = 64
    nx: int = 200
    nt: int = None
    nt_per_tau: int = 16
    path_samples: int = None
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)


@dataclass
class CheckSettings:
    """Admissibility-check knobs."""

    m: int = None
    delta: float = 0.5
    fit_slack: float = 0.25
    tol: float = 1e-8


@dataclass
class RunConfig:
    problem: object
    solver: SolverSettings
    check: CheckSettings
    outputs: dict = field(default_factory=dict)
    mode: str = None

    @property
    def kind(self):
        return "delay" if isinstance(self.problem, DelayHeatProblem) else "nodelay"


def _require(mapping, key, where):
    if key not in mapping:
        raise ConfigError(f"missing key {key!r} in {where}")
    return mapping[key]


def _reject_unknown(mapping, allowed, where):
    extra = sorted(set(mapping) - set(allowed))
    if extra:
        raise ConfigError(f"unknown key(s) {extra} in {where}")


def _number(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key!r} must be a number, got {value!r}")
    return float(value)


def _int_or_none(mapping, key, default, where):
    value = mapping.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key!r} in {where} must be an integer, got {value!r}")
    return value


def build_function(value, length, tau=None, slot="function"):
    """Turn a config function slot into a :class:`FunctionSpec`."""
    if isinstance(value, FunctionSpec):
        return value
    if isinstance(value, bool):
        raise ConfigError(f"{slot}: expected a function, got {value!r}")
    if isinstance(value, (int, float)):
        return fs_const(float(value))
    consts = {"l": length}
    if tau is not None:
        consts["tau"] = tau
    if isinstance(value, str):
        try:
            return parse_function(value, **consts)
        except DelayHeatError as exc:
            raise ConfigError(f"{slot}: {exc}") from exc
    if isinstance(value, dict):
        table = value.get("table")
        try:
            if table == "1d":
                _reject_unknown(value, ("table", "var", "points", "values", "interp"),
                                slot)
                return Sampled1DFunction(
                    var=_require(value, "var", slot),
                    points=_require(value, "points", slot),
                    values=_require(value, "values", slot),
                    kind=value.get("interp", "cubic"),
                )
            if table == "2d":
                _reject_unknown(value, ("table", "x", "t", "values", "interp"), slot)
                return Sampled2DFunction(
                    x_points=_require(value, "x", slot),
                    t_points=_require(value, "t", slot),
                    values=_require(value, "values", slot),
                    kind=value.get("interp", "cubic"),
                )
        except DelayHeatError as exc:
            raise ConfigError(f"{slot}: {exc}") from exc
        raise ConfigError(f"{slot}: table kind must be '1d' or '2d', got {table!r}")
    raise ConfigError(f"{slot}: expected number, expression string, or table object")


_NODELAY_KEYS = ("kind", "diffusion", "drift", "reaction", "length", "horizon",
                 "source", "initial", "trace_left", "trace_right",
                 "include_lift_reaction")
_DELAY_KEYS = ("kind", "diffusion", "diffusion_lag", "drift", "drift_lag",
               "reaction", "reaction_lag", "delay", "length", "horizon",
               "source", "initial", "trace_left", "trace_right")


def problem_from_dict(data):
    """Build a problem object from the ``"problem"`` section."""
    if not isinstance(data, dict):
        raise ConfigError("'problem' must be an object")
    kind = data.get("kind")
    if kind not in ("delay", "nodelay"):
        raise ConfigError(f"problem kind must be 'delay' or 'nodelay', got {kind!r}")
    where = "problem"
    length = _number(_require(data, "length", where), "length")
    horizon = _number(_require(data, "horizon", where), "horizon")
    try:
        if kind == "nodelay":
            _reject_unknown(data, _NODELAY_KEYS, where)
            fn = lambda key: build_function(
                _require(data, key, where), length, None, f"problem.{key}")
            flag = data.get("include_lift_reaction", False)
            if not isinstance(flag, bool):
                raise ConfigError("include_lift_reaction must be a boolean")
            return HeatProblem(
                a=_number(_require(data, "diffusion", where), "diffusion"),
                b=_number(data.get("drift", 0.0), "drift"),
                c=_number(data.get("reaction", 0.0), "reaction"),
                length=length,
                horizon=horizon,
                g=fn("source"),
                psi=fn("initial"),
                theta1=fn("trace_left"),
                theta2=fn("trace_right"),
                include_lift_reaction=flag,
            )
        _reject_unknown(data, _DELAY_KEYS, where)
        tau = _number(_require(data, "delay", where), "delay")
        fn = lambda key: build_function(
            _require(data, key, where), length, tau, f"problem.{key}")
        return DelayHeatProblem(
            a1=_number(_require(data, "diffusion", where), "diffusion"),
            a2=_number(data.get("diffusion_lag", 0.0), "diffusion_lag"),
            b1=_number(data.get("drift", 0.0), "drift"),
            b2=_number(data.get("drift_lag", 0.0), "drift_lag"),
            d1=_number(data.get("reaction", 0.0), "reaction"),
            d2=_number(data.get("reaction_lag", 0.0), "reaction_lag"),
            tau=tau,
            length=length,
            horizon=horizon,
            g=fn("source"),
            psi=fn("initial"),
            theta1=fn("trace_left"),
            theta2=fn("trace_right"),
        )
    except ConfigError:
        raise
    except DelayHeatError as exc:
        raise ConfigError(f"invalid problem data: {exc}") from exc


def solver_from_dict(data):
    if data is None:
        return SolverSettings()
    if not isinstance(data, dict):
        raise ConfigError("'solver' must be an object")
    where = "solver"
    _reject_unknown(data, ("modes", "nx", "nt", "nt_per_tau", "path_samples",
                           "quadrature"), where)
    quad_data = data.get("quadrature")
    if quad_data is None:
        quad = QuadratureConfig()
    elif isinstance(quad_data, dict):
        _reject_unknown(quad_data, ("nodes_per_panel", "max_panel_splits",
                                    "abs_tol"), "solver.quadrature")
        try:
            quad = QuadratureConfig(
                nodes_per_panel=quad_data.get("nodes_per_panel", 16),
                max_panel_splits=quad_data.get("max_panel_splits", 8),
                abs_tol=quad_data.get("abs_tol", 1e-10),
            )
        except DelayHeatError as exc:
            raise ConfigError(f"invalid quadrature settings: {exc}") from exc
    else:
        raise ConfigError("'solver.quadrature' must be an object")
    modes = _int_or_none(data, "modes", 64, where)
    nx = _int_or_none(data, "nx", 200, where)
    settings = SolverSettings(
        modes=64 if modes is None else modes,
        nx=200 if nx is None else nx,
        nt=_int_or_none(data, "nt", None, where),
        nt_per_tau=_int_or_none(data, "nt_per_tau", 16, where),
        path_samples=_int_or_none(data, "path_samples", None, where),
        quadrature=quad,
    )
    if settings.modes < 1:
        raise ConfigError(f"modes must be at least 1, got {settings.modes}")
    if settings.nx < 2:
        raise ConfigError(f"nx must be at least 2, got {settings.nx}")
    return settings


def check_from_dict(data):
    if data is None:
        return CheckSettings()
    if not isinstance(data, dict):
        raise ConfigError("'check' must be an object")
    _reject_unknown(data, ("m", "delta", "fit_slack", "tol"), "check")
    settings = CheckSettings(
        m=_int_or_none(data, "m", None, "check"),
        delta=_number(data.get("delta", 0.5), "delta"),
        fit_slack=_number(data.get("fit_slack", 0.25), "fit_slack"),
        tol=_number(data.get("tol", 1e-8), "tol"),
    )
    if settings.tol <= 0.0:
        raise ConfigError("check tol must be positive")
    return settings


def outputs_from_dict(data):
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("'outputs' must be an object")
    _reject_unknown(data, ("field_csv", "report_json"), "outputs")
    for key, value in data.items():
        if value is not None and not isinstance(value, str):
            raise ConfigError(f"outputs.{key} must be a path string")
    return {key: value for key, value in data.items() if value is not None}


def config_from_dict(data):
    if not isinstance(data, dict):
        raise ConfigError("run configuration must be a JSON object")
    _reject_unknown(data, ("problem", "solver", "check", "outputs", "mode"),
                    "run configuration")
    mode = data.get("mode")
    if mode is not None and mode not in ("check", "solve", "compare", "sweep"):
        raise ConfigError(
            f"mode must be one of check/solve/compare/sweep, got {mode!r}")
    problem = problem_from_dict(_require(data, "problem", "run configuration"))
    return RunConfig(
        problem=problem,
        solver=solver_from_dict(data.get("solver")),
        check=check_from_dict(data.get("check")),
        outputs=outputs_from_dict(data.get("outputs")),
        mode=mode,
    )


def load_config(path):
    """Read a JSON run configuration from ``path``."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)
