from __future__ import annotations

import json

import pytest

from anapt import DEFAULT_TABLES, CalibrationTables, Estimate, ParseError


def test_defaults():
    assert DEFAULT_TABLES.rho_for("gaussian") == 1.154
    c = DEFAULT_TABLES.constants("exponential")
    assert (c.c1, c.c2) == (0.436, 0.393)
    assert DEFAULT_TABLES.c2["gaussian"] == Estimate(0.809, 0.061)


def test_round_trip(tmp_path):
    t = DEFAULT_TABLES.replace(rho={"uniform": Estimate(1.01, 0.002)}, provenance={"source": "test"})
    path = tmp_path / "cal.json"
    t.save(path)
    assert CalibrationTables.load(path) == t


def test_partial_file_falls_back_to_defaults(tmp_path):
    path = tmp_path / "cal.json"
    path.write_text(json.dumps({"c1": {"gaussian": 0.9}}))
    t = CalibrationTables.load(path)
    assert t.c1["gaussian"].value == 0.9
    assert t.rho == DEFAULT_TABLES.rho


@pytest.mark.parametrize("text", ["{not json", json.dumps({"rho": {"gaussian": {"uncertainty": 1}}}), json.dumps({"rho": {"laplace": 1.0}})])
def test_bad_files(tmp_path, text):
    path = tmp_path / "cal.json"
    path.write_text(text)
    with pytest.raises(ParseError):
        CalibrationTables.load(path)
