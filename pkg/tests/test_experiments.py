import math

import pytest

from hypertel.errors import InsufficientData, InvalidOmega, RankDeficient
from hypertel.experiments import (FIT_HEADER, HEIGHT_HEADER, FitModel, emit_report, fit_all,
                                  least_squares_fit, read_heights, run_height_experiment, worker_count)
from hypertel.solver import HeightRecord

PLANTED = {
    FitModel.M1: (1.43, 3.30, -1.66),
    FitModel.M2: (5.06, -9.22, 4.23),
    FitModel.M3: (34.8, -167.0, 221.0),
    FitModel.M4: (58.9, -182.0, 123.0),
}


def synth(model, coeffs, omegas=range(1, 11)):
    return [(w, model.evaluate(coeffs, w)) for w in omegas]


@pytest.mark.parametrize("model", list(FitModel))
def test_round_trip(model):
    res = least_squares_fit(synth(model, PLANTED[model]), model)
    assert all(abs(a - b) <= 1e-9 for a, b in zip(res.coefficients, PLANTED[model]))
    assert res.rss <= 1e-18


def test_interpolation_three_points():
    res = least_squares_fit([(1, 0.3), (2, 1.7), (5, -0.2)], "M2")
    assert res.rss == 0


def test_preconditions():
    with pytest.raises(InsufficientData):
        least_squares_fit([(1, 1.0), (2, 2.0)], "M2")
    with pytest.raises(RankDeficient):
        least_squares_fit([(3, 1.0), (3, 2.0), (3, 1.5)], "M2")
    with pytest.raises(RankDeficient):
        least_squares_fit([(1, 0.0)] * 4, "M1")


def test_nan_points_ignored():
    pts = synth(FitModel.M2, PLANTED[FitModel.M2]) + [(11, math.nan)]
    res = least_squares_fit(pts, "M2")
    assert abs(res.coefficients[0] - 5.06) <= 1e-9


def _records():
    return [HeightRecord(w, w + 1, w, 0.5 * w ** 3 + w, 1.0 + w, 10 * w) for w in (1, 2, 3)]


def test_emit_report(tmp_path):
    recs = _records()
    # log-type models vanish at Omega=1, leaving only two usable rows
    assert [f.model for f in fit_all(recs)] == [FitModel.M2, FitModel.M4]
    fits = [least_squares_fit(synth(m, c), m) for m, c in PLANTED.items()]
    paths = emit_report(recs, fits, tmp_path, plot=False)
    lines = (tmp_path / "heights.csv").read_text().splitlines()
    assert lines[0] == ",".join(HEIGHT_HEADER) and len(lines) == 4
    fl = (tmp_path / "fits.csv").read_text().splitlines()
    assert fl[0] == ",".join(FIT_HEADER) and len(fl) == 5
    assert not (tmp_path / "heights.png").exists()
    assert {p.name for p in paths} == {"heights.csv", "fits.csv", "runs.csv", "heights.dat"}
    assert [r["omega"] for r in read_heights(tmp_path / "heights.csv")] == [1.0, 2.0, 3.0]


def test_emit_deterministic(tmp_path):
    recs = _records()
    fits = fit_all(recs)
    a, b = tmp_path / "a", tmp_path / "b"
    emit_report(recs, fits, a)
    emit_report(recs, fits, b)
    for name in ("heights.csv", "fits.csv", "runs.csv", "heights.dat", "heights.png"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_emit_empty(tmp_path):
    with pytest.raises(ValueError):
        emit_report([], [], tmp_path)


def test_minimal_experiment():
    recs = run_height_experiment(3, "minimal", workers=0)
    assert [r.r for r in recs] == [2, 3, 4]
    assert all(a.H <= b.H for a, b in zip(recs, recs[1:]))
    assert all(r.H <= r.ln_bound for r in recs)


def test_nonminimal_experiment():
    recs = run_height_experiment(2, "nonminimal", workers=1)
    for r in recs:
        assert r.status == "ok" and r.r == 2 * (r.omega + 1)
        assert r.d <= 4 * (r.omega + 1) * r.omega or r.escalated
        assert math.isnan(r.ln_bound)


def test_timeout_and_cap():
    recs = run_height_experiment(5, "minimal", omega_min=4, timeout=0.01, workers=1, cap=4)
    assert [r.status for r in recs] == ["timeout", "capped"]


def test_bad_inputs(monkeypatch):
    with pytest.raises(InvalidOmega):
        run_height_experiment(0)
    with pytest.raises(ValueError):
        run_height_experiment(2, "other")
    monkeypatch.setenv("HYPERTEL_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("HYPERTEL_THREADS", "x")
    assert worker_count() == 1
