"""Tests for grid construction, CSV field serialization, and difference reports."""

import json
import math

import numpy as np
import pytest

from delayheat import (
    GridSpec,
    InputError,
    SolutionField,
    field_difference_report,
    read_field_csv,
)


def _sample_field(nx=4, nt=3, with_u=False):
    x = np.linspace(0.0, 1.0, nx + 1)
    t = np.linspace(0.0, 0.5, nt + 1)
    v = np.sin(np.outer(t + 1.0, x))
    u = (v * 0.5) if with_u else None
    return SolutionField(x=x, t=t, v=v, u=u, meta={"label": "sample"})


# ---------------------------------------------------------------------------
# GridSpec
# ---------------------------------------------------------------------------


def test_grid_x_points():
    grid = GridSpec(nx=4, nt=2)
    np.testing.assert_allclose(grid.x_points(2.0), [0.0, 0.5, 1.0, 1.5, 2.0])


def test_grid_plain_time_rows():
    grid = GridSpec(nx=4, nt=5)
    np.testing.assert_allclose(grid.t_points(1.0), np.linspace(0.0, 1.0, 6))
    assert grid.time_step(1.0) == pytest.approx(0.2)


def test_grid_delay_time_rows_start_at_minus_tau():
    tau = 0.5
    grid = GridSpec(nx=4, nt_per_tau=4)
    t = grid.t_points(1.0, tau=tau)
    # dt divides the delay exactly; the rows start at -tau and end at the
    # smallest grid multiple covering the horizon.
    assert t[0] == pytest.approx(-tau)
    assert t[-1] == pytest.approx(1.0)
    np.testing.assert_allclose(np.diff(t), tau / 4.0)
    # -tau, 0, and tau all land exactly on grid rows.
    for knot in (-tau, 0.0, tau):
        assert np.min(np.abs(t - knot)) < 1e-15


def test_grid_delay_rows_cover_ragged_horizon():
    tau = 0.3
    grid = GridSpec(nx=4, nt_per_tau=3)
    t = grid.t_points(1.0, tau=tau)  # 1.0 / 0.1 = 10 steps exactly
    assert t[-1] >= 1.0 - 1e-12
    t2 = grid.t_points(0.95, tau=tau)  # needs rounding up to a grid multiple
    assert t2[-1] >= 0.95 - 1e-12
    assert t2[-1] - (tau / 3.0) < 0.95


def test_grid_validation():
    with pytest.raises(InputError):
        GridSpec(nx=1, nt=10)
    with pytest.raises(InputError):
        GridSpec(nx=4)
    with pytest.raises(InputError):
        GridSpec(nx=4, nt=0)
    with pytest.raises(InputError):
        GridSpec(nx=4, nt_per_tau=0)
    grid = GridSpec(nx=4, nt_per_tau=4)
    with pytest.raises(InputError):
        grid.t_points(1.0)  # delay resolution without a delay


# ---------------------------------------------------------------------------
# SolutionField and CSV round trip
# ---------------------------------------------------------------------------


def test_field_shape_validation():
    x = np.linspace(0.0, 1.0, 5)
    t = np.linspace(0.0, 1.0, 3)
    with pytest.raises(InputError):
        SolutionField(x=x, t=t, v=np.zeros((5, 3)))
    with pytest.raises(InputError):
        SolutionField(x=x, t=t, v=np.zeros((3, 5)), u=np.zeros((2, 5)))


def test_csv_round_trip(tmp_path):
    field = _sample_field()
    path = tmp_path / "field.csv"
    field.write_csv(path)
    back = read_field_csv(path)
    np.testing.assert_array_equal(back.x, field.x)
    np.testing.assert_array_equal(back.t, field.t)
    np.testing.assert_array_equal(back.v, field.v)
    assert back.u is None


def test_csv_round_trip_with_reduced_frame(tmp_path):
    field = _sample_field(with_u=True)
    path = tmp_path / "field.csv"
    field.write_csv(path)
    back = read_field_csv(path)
    np.testing.assert_array_equal(back.u, field.u)


def test_csv_layout_is_t_major_with_full_precision(tmp_path):
    field = _sample_field(nx=2, nt=1)
    path = tmp_path / "field.csv"
    field.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,t,v"
    assert len(lines) == 1 + field.t.size * field.x.size
    # Row order: all x at t[0], then all x at t[1].
    first = [float(part) for part in lines[1].split(",")]
    assert first[0] == field.x[0] and first[1] == field.t[0]
    fourth = [float(part) for part in lines[4].split(",")]
    assert fourth[0] == field.x[0] and fourth[1] == field.t[1]
    # 17 significant digits reproduce doubles exactly.
    third = float(lines[3].split(",")[2])
    assert third == field.v[0, 2]


def test_csv_writes_are_deterministic(tmp_path):
    field = _sample_field(with_u=True)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    field.write_csv(p1)
    field.write_csv(p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_meta_sidecar(tmp_path):
    field = _sample_field(with_u=True)
    path = tmp_path / "meta.json"
    field.write_meta(path)
    payload = json.loads(path.read_text())
    assert payload["source"] == "spectral"
    assert payload["nx"] == 4
    assert payload["n_times"] == 4
    assert payload["t_first"] == 0.0
    assert payload["t_last"] == pytest.approx(0.5)
    assert payload["has_reduced_frame"] is True
    assert payload["label"] == "sample"


def test_read_rejects_partial_grid(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("x,t,v\n0,0,1\n1,0,2\n0,1,3\n")
    with pytest.raises(InputError):
        read_field_csv(path)


# ---------------------------------------------------------------------------
# Difference reports
# ---------------------------------------------------------------------------


def test_difference_report_norms():
    x = np.linspace(0.0, 1.0, 11)
    t = np.linspace(0.0, 1.0, 5)
    base = np.zeros((5, 11))
    other = np.zeros((5, 11))
    other[2, 3] = 0.25  # a single bump
    fa = SolutionField(x=x, t=t, v=base, source="spectral")
    fb = SolutionField(x=x, t=t, v=other, source="fd")
    report = field_difference_report(fa, fb)
    assert report["sup"] == pytest.approx(0.25)
    dx, dt = 0.1, 0.25
    assert report["l2"] == pytest.approx(math.sqrt(dt * dx * 0.25**2))
    assert report["sources"] == ["spectral", "fd"]
    assert len(report["slices"]) == 5
    trow = report["slices"][2]
    assert trow[0] == pytest.approx(0.5)
    assert trow[1] == pytest.approx(0.25)


def test_difference_report_requires_matching_grids():
    fa = _sample_field(nx=4)
    fb = _sample_field(nx=5)
    with pytest.raises(InputError):
        field_difference_report(fa, fb)
    fc = _sample_field(nx=4)
    fc.t = fc.t + 0.125  # same shape, shifted rows
    with pytest.raises(InputError):
        field_difference_report(fa, fc)
