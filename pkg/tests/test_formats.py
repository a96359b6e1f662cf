from __future__ import annotations

import io
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from anapt import Gaussian, ParseError, TimeSeries, anapt, sample, sublevel_persistence
from anapt.formats import read_diagram, read_series, render_svg, write_diagram, write_series


def test_series_round_trip(tmp_path):
    x = TimeSeries(np.random.default_rng(0).normal(size=100), 40.0, 2.5)
    path = tmp_path / "x.csv"
    write_series(x, path)
    y = read_series(path)
    assert np.array_equal(x.values, y.values)
    assert y.sample_rate == pytest.approx(40.0, rel=1e-12)
    assert y.t0 == 2.5


def test_single_column_with_and_without_header(tmp_path):
    a = tmp_path / "a.csv"
    a.write_text("value\n1\n2\n3\n")
    b = tmp_path / "b.csv"
    b.write_text("1\n2\n3\n")
    assert read_series(a).values.tolist() == read_series(b).values.tolist() == [1.0, 2.0, 3.0]
    assert read_series(b, 10.0).sample_rate == 10.0


@pytest.mark.parametrize(
    "text",
    [
        "time,value\n0,1\n0.1,2\n0.3,3\n",  # non-uniform
        "time,value\n0,1\n0.1\n",  # ragged
        "1,2,3\n4,5,6\n",  # too wide
        "1\nabc\n",  # non-numeric
        "1\nnan\n",  # non-finite
        "1\n",  # too short
    ],
)
def test_malformed_series(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(ParseError):
        read_series(path)


def test_rate_mismatch(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("time,value\n0,1\n0.1,2\n0.2,3\n")
    assert read_series(path, 10.0).sample_rate == pytest.approx(10.0)
    with pytest.raises(ParseError):
        read_series(path, 20.0)


def test_diagram_round_trip(tmp_path):
    dgm = sublevel_persistence(sample(Gaussian(1.0), 500, 1))
    path = tmp_path / "d.csv"
    write_diagram(dgm, path, labels=dgm.lifetimes > 2)
    back = read_diagram(path, len(dgm))
    assert np.array_equal(back.births, dgm.births)
    assert np.array_equal(back.deaths, dgm.deaths)
    assert np.array_equal(back.birth_indices, dgm.birth_indices)
    assert back.essential_birth == dgm.essential_birth


def test_diagram_stream_and_essential_row():
    dgm = sublevel_persistence([2.0, 0.0, 3.0, 1.0, 4.0])
    buf = io.StringIO()
    write_diagram(dgm, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "birth,death,lifetime,birth_index,death_index"
    assert lines[1] == "1,3,2,3,2"
    assert lines[2] == "0,inf,inf,-1,-1"


def test_bad_diagram(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ParseError):
        read_diagram(path)
    path.write_text("birth,death,lifetime,birth_index,death_index\n3,1,-2,0,1\n")
    with pytest.raises(ParseError):
        read_diagram(path)


def test_svg_classes():
    dgm = sublevel_persistence(np.array([0.0, 5.0, 4.5, 6.0, 0.5, 10.0]))
    cut = 1.0
    root = ET.fromstring(render_svg(dgm, cut, title="a < b"))
    ns = {"s": "http://www.w3.org/2000/svg"}
    circles = root.findall("s:circle", ns)
    assert len(circles) == len(dgm)
    assert sorted(c.get("class") for c in circles) == sorted("noise" if l <= cut else "signal" for l in dgm.lifetimes)
    assert root.find("s:polygon[@class='noise-band']", ns) is not None
    assert root.find("s:line[@class='diagonal']", ns) is not None


def test_svg_without_cutoff_or_points():
    root = ET.fromstring(render_svg(sublevel_persistence([1.0, 2.0])))
    assert root.tag.endswith("svg")


def test_report_json_is_parseable():
    import json

    from anapt.formats import report_json

    rep = anapt(sample(Gaussian(1.0), 2000, 1))
    d = json.loads(report_json(rep))
    assert d["compensated_cutoff"] == rep.compensated_cutoff
    assert math.isfinite(d["raw_param"])
