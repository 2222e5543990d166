import csv
import io
import json
import math

import pytest

from spinsusy.halfint import half
from spinsusy.oracle import RadialGrid
from spinsusy.radial import RadialBlock
from spinsusy.report import (
    CSV_COLUMNS,
    LevelRow,
    SpectrumReport,
    dumps,
    ground_state_distance,
    reports_to_csv,
    spectrum_report,
    write_atomic,
)


@pytest.fixture(scope="module")
def report():
    return spectrum_report(RadialBlock(half(3), half(1), 1.0), 3)


def test_levels_match_analytic(report):
    assert [row.e_analytic for row in report.levels] == pytest.approx([-1 / 16, -1 / 36, -1 / 64])
    assert report.passed()
    assert report.max_rel_err < 1e-3
    for row in report.levels:
        assert row.disc_err > 0
        # extrapolation beats the finer raw value
        assert abs(row.e_oracle - row.e_analytic) < abs(row.e_fine - row.e_analytic)


def test_json_layout(report):
    doc = report.to_json()
    assert doc["branch"] == "primary"
    assert doc["grid"]["n_points"] == report.grid.n_points
    assert [lv["n"] for lv in doc["levels"]] == [0, 1, 2]
    assert json.loads(dumps(doc)) == doc


def test_csv(report):
    text = reports_to_csv([report])
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 4
    assert rows[1][0] == "(3/2,1/2)" and float(rows[1][5]) == -1 / 16
    # floats are written losslessly
    assert float(rows[1][6]) == report.levels[0].e_oracle


def test_report_validation():
    block = RadialBlock(half(1), half(1), 1.0)
    with pytest.raises(ValueError):
        SpectrumReport(block, RadialGrid(1.0, 10), [LevelRow(0, 0.1, 0.1, 0.1, 0.1)])
    with pytest.raises(ValueError):
        SpectrumReport(block, RadialGrid(1.0, 10), [LevelRow(0, -1, -1, -1, -1), LevelRow(1, -2, -2, -2, -2)])
    with pytest.raises(ValueError):
        spectrum_report(block, 0)


def test_failing_tolerance_is_reported():
    # a grid far too short truncates the tail of the excited states
    rep = spectrum_report(RadialBlock(half(1), half(1), 1.0), 2, RadialGrid(8.0, 2000))
    assert not rep.passed()


@pytest.mark.parametrize("kappa, nu", [("1/2", "1/2"), ("1/2", "3/2"), ("2", "0")])
def test_ground_state_matches_oracle_vector(kappa, nu):
    assert ground_state_distance(RadialBlock(kappa, nu, 1.0)) < 1e-3


def test_dumps_is_deterministic():
    doc = {"b": 0.1 + 0.2, "a": [1, math.pi]}
    assert dumps(doc) == dumps(dict(reversed(list(doc.items()))))
    assert json.loads(dumps(doc))["b"] == 0.1 + 0.2


def test_write_atomic(tmp_path):
    target = tmp_path / "sub" / "out.json"
    write_atomic(target, "first\n")
    write_atomic(target, "second\n")
    assert target.read_text() == "second\n"
    assert [p.name for p in target.parent.iterdir()] == ["out.json"]
