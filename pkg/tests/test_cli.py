from __future__ import annotations

import json

import numpy as np
import pytest

from anapt import Gaussian, TimeSeries, sample
from anapt.cli import main
from anapt.formats import read_diagram, read_series, write_series


def run(capsys, *args):
    status = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return status, out, err


@pytest.fixture
def noise_csv(tmp_path):
    path = tmp_path / "noise.csv"
    write_series(TimeSeries(sample(Gaussian(1.0), 5000, 3).values, 10.0), path)
    return path


def test_cutoff_uniform(capsys):
    status, out, _ = run(capsys, "cutoff", "--family", "uniform", "--param", 1, "--alpha", 0.001, "--n", 100000)
    assert status == 0
    assert float(out) == pytest.approx(0.99999936, abs=5e-9)


def test_cutoff_from_median(capsys):
    status, out, _ = run(capsys, "cutoff", "--median", 1, "--n", 100000)
    assert status == 0 and float(out) == pytest.approx(6.79, abs=0.02)


def test_cutoff_needs_exactly_one_source(capsys):
    status, _, err = run(capsys, "cutoff", "--n", 100)
    assert status != 0
    assert "error" in json.loads(err)


def test_analyze_pure_noise(capsys, tmp_path, noise_csv):
    rep, dgm = tmp_path / "r.json", tmp_path / "d.csv"
    status, _, _ = run(capsys, "analyze", noise_csv, "--report", rep, "--diagram", dgm)
    assert status == 0
    report = json.loads(rep.read_text())
    assert report["n_signal"] == 0
    assert len(report["noise_pairs"]) == report["n_pairs"]
    assert "label" in dgm.read_text().splitlines()[0]


def test_persist_round_trip(capsys, tmp_path, noise_csv):
    dgm_path = tmp_path / "d.csv"
    assert run(capsys, "persist", noise_csv, "-o", dgm_path)[0] == 0
    from anapt import sublevel_persistence

    direct = sublevel_persistence(read_series(noise_csv))
    back = read_diagram(dgm_path)
    assert np.array_equal(np.sort(back.lifetimes), np.sort(direct.lifetimes))


def test_simulate_analyze_quasiperiodic(capsys, tmp_path):
    path = tmp_path / "q.csv"
    status, _, _ = run(capsys, "simulate", "--kind", "quasiperiodic", "--amplitude", 10, "--noise", "gaussian",
                       "--noise-param", 1, "--seed", 4, "-o", path)
    assert status == 0
    assert len(read_series(path)) == 601
    status, out, _ = run(capsys, "analyze", path)
    assert status == 0
    assert json.loads(out)["compensated_cutoff"] == pytest.approx(7.54, rel=0.25)


def test_simulate_is_seeded(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(capsys, "simulate", "--kind", "wood2", "--noise", "rayleigh", "--noise-param", 0.5, "--seed", 9, "-o", p)
    assert a.read_bytes() == b.read_bytes()


def test_missing_file(capsys, tmp_path):
    status, _, err = run(capsys, "analyze", tmp_path / "nope.csv")
    assert status == 1
    assert json.loads(err)["error"] == "file_not_found"


def test_nonuniform_times_rejected(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,value\n0,1\n1,2\n3,1\n4,5\n")
    status, _, err = run(capsys, "persist", path)
    assert status == 1
    assert json.loads(err)["error"] == "parse_error"


def test_bad_alpha(capsys, noise_csv):
    status, _, err = run(capsys, "analyze", noise_csv, "--alpha", 1.5)
    assert status == 1
    assert json.loads(err)["error"] == "domain_error"


def test_unknown_option(capsys):
    status, _, err = run(capsys, "cutoff", "--bogus")
    assert status == 2
    assert json.loads(err)["error"] == "usage_error"


def test_calibration_env(capsys, tmp_path, noise_csv, monkeypatch):
    cal = tmp_path / "cal.json"
    cal.write_text(json.dumps({"rho": {"gaussian": 2.308}}))
    _, base, _ = run(capsys, "analyze", noise_csv)
    monkeypatch.setenv("ANAPT_CALIBRATION", str(cal))
    _, alt, _ = run(capsys, "analyze", noise_csv)
    assert json.loads(alt)["raw_param"] == pytest.approx(2 * json.loads(base)["raw_param"], rel=1e-9)


def test_baselines(capsys, noise_csv, tmp_path):
    sig = tmp_path / "s.csv"
    run(capsys, "simulate", "--kind", "quasiperiodic", "--amplitude", 10, "--noise", "gaussian", "--noise-param", 1,
        "--seed", 1, "-o", sig)
    status, out, _ = run(capsys, "baseline", "entropy", sig)
    assert status == 0 and json.loads(out)["n_signal"] > 0
    status, out, _ = run(capsys, "baseline", "sigma", sig)
    assert status == 0 and set(json.loads(out)) >= {"spline", "lowpass", "anapt"}
    args = ("baseline", "bootstrap", sig, "--resamples", 20, "--seed", 2)
    first, second = run(capsys, *args)[1], run(capsys, *args)[1]
    assert first == second
    assert json.loads(first)["threshold"] > 0


def test_render(capsys, tmp_path, noise_csv):
    dgm, rep, svg = tmp_path / "d.csv", tmp_path / "r.json", tmp_path / "p.svg"
    run(capsys, "persist", noise_csv, "-o", dgm)
    run(capsys, "analyze", noise_csv, "--report", rep)
    assert run(capsys, "render", dgm, "--report", rep, "-o", svg)[0] == 0
    assert svg.read_text().startswith("<svg")
    assert 'class="noise-band"' in svg.read_text()


def test_calibrate_rho(capsys):
    status, out, _ = run(capsys, "calibrate", "rho", "--family", "uniform", "--n", 10000, "--trials", 3)
    assert status == 0
    assert json.loads(out)["rho"]["uniform"]["value"] == pytest.approx(1.0, abs=0.02)
