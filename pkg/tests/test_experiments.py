import csv
import json
import math

import pytest

from errors import FormatError, InputError, PreconditionError
from experiments import (STUDIES, adjust_count, groundstate_scaling,
                         lattice_inside, limit_shape, load_polygon,
                         log_spaced, mass_conservation, measures_study,
                         recovery, recovery_config, run_study, write_csv)
from geometry import PolygonSet
from groundstate import hexagon_config
from lattice import LatticeConfig, is_connected
from surface import WULFF_AREA


def test_log_spaced():
    assert log_spaced(10, 1000, 3) == [10, 100, 1000]
    assert log_spaced(5, 5, 4) == [5]
    assert log_spaced(7, 9000, 1) == [7]
    ns = log_spaced(1, 10, 10)
    assert ns == sorted(set(ns)) and ns[0] == 1 and ns[-1] == 10
    with pytest.raises(PreconditionError):
        log_spaced(0, 10, 3)


def test_groundstate_scaling_has_no_failures():
    study = groundstate_scaling(log_spaced(10, 5000, 8))
    assert study.failures == []
    assert study.header[0] == "N"
    # the scaled excess 2 sqrt(12N - 3) / sqrt(N) stays near 4 sqrt(3)
    for row in study.rows:
        assert row[2] == pytest.approx(4 * math.sqrt(3), abs=3.0)


def test_limit_shape_area():
    assert limit_shape().area == pytest.approx(WULFF_AREA)


def test_lattice_inside_square():
    square = PolygonSet([[(0, 0), (1, 0), (1, 1), (0, 1)]])
    cfg = lattice_inside(square, 10.0)
    # about 100 / (sqrt(3)/2) points
    assert 100 < len(cfg) < 135


def test_adjust_count():
    cfg = hexagon_config(2)
    assert adjust_count(cfg, 19) == cfg
    fewer = adjust_count(cfg, 12)
    assert len(fewer) == 12
    assert all(tuple(s) in cfg for s in fewer.sites.tolist())
    more = adjust_count(cfg, 30)
    assert len(more) == 30
    assert not is_connected(more, 1.0)
    assert len(adjust_count(LatticeConfig(), 5)) == 5


def test_recovery_config_has_exact_size():
    cfg, raw = recovery_config(limit_shape(), 200, 100)
    assert len(cfg) == 200
    assert abs(len(raw) - 200) < 40
    with pytest.raises(PreconditionError):
        recovery_config(limit_shape(), 0, 100)


def test_recovery_study_on_the_limit_shape():
    study = recovery(limit_shape(), [100, 400, 1600], 100)
    assert study.failures == []
    assert [row[1] for row in study.rows] == [100, 400, 1600]
    assert study.rows[-1][-1] < study.rows[0][-1] + 0.5
    assert study.rows[0][5] == pytest.approx(4 * math.sqrt(3))


def test_mass_conservation():
    study = mass_conservation([10, 100, 1000])
    assert study.failures == []
    assert all(row[3] == pytest.approx(1.0) for row in study.rows)


@pytest.mark.slow
def test_measures_study():
    study = measures_study([7, 37, 127], h=0.005, levels=2)
    assert study.failures == []
    assert [row[0] for row in study.rows] == [7, 37, 127]


@pytest.mark.slow
def test_wulff_distance_sweep():
    study = run_study("wulff-distance", [19, 127, 469])
    assert study.failures == []


def test_run_study_rejects_unknown_names():
    assert "recovery" in STUDIES
    with pytest.raises(PreconditionError):
        run_study("nope", [10])


def test_write_csv(tmp_path):
    study = groundstate_scaling([7, 19])
    path = str(tmp_path / "out.csv")
    write_csv(path, study)
    with open(path) as csv_file:
        rows = list(csv.reader(csv_file))
    assert rows[0] == list(study.header)
    assert rows[1][:2] == ["7", "-24"]
    with pytest.raises(InputError):
        write_csv(str(tmp_path / "no" / "such" / "dir.csv"), study)


def test_load_polygon(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(json.dumps({"loops": [[[0, 0], [1, 0], [1, 1], [0, 1]]]}))
    assert load_polygon(str(path)).area == pytest.approx(1.0)
    path.write_text("[")
    with pytest.raises(FormatError):
        load_polygon(str(path))
    with pytest.raises(InputError):
        load_polygon(str(tmp_path / "missing.json"))
