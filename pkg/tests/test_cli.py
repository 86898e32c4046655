import json

import pytest

import hexcluster
from measures import RHO, DensityGrid


@pytest.fixture(autouse=True)
def ini(tmp_path, monkeypatch):
    path = tmp_path / "hexcluster.ini"
    path.write_text(
        "[General]\n"
        "log_level = DEBUG\n"
        "store = Json\n"
        "oracle_table = {0}\n"
        "oracle_cap = 8\n"
        "[Search]\n"
        "steps = 200\n".format(tmp_path / "oracle.json"))
    monkeypatch.setattr(hexcluster, "config_file", str(path))
    return path


def run(capsys, *argv):
    code = hexcluster.main(list(argv))
    return code, capsys.readouterr().out


def test_generate_and_energy(tmp_path, capsys):
    cfg = str(tmp_path / "hex.json")
    code, out = run(capsys, "generate", "--hexagon", "1", "--out", cfg)
    assert code == 0
    assert json.loads(out) == {"N": 7, "bonds": 12, "energy": -24}
    code, out = run(capsys, "energy", "--config", cfg)
    assert code == 0
    report = json.loads(out)
    assert report["energy"] == -24.0
    assert report["lower_ok"] and report["upper_ok"]
    assert report["neighbor_histogram"]["3"] == 6
    assert report["hypotheses"]["h3_ok"]


def test_generate_spiral_and_search(tmp_path, capsys):
    cfg = str(tmp_path / "spiral.json")
    code, out = run(capsys, "generate", "--spiral", "10", "--out", cfg)
    assert code == 0
    assert json.loads(out)["energy"] == -38
    code, out = run(capsys, "--seed", "4", "generate", "--search", "8", "--out", cfg)
    assert code == 0
    assert json.loads(out)["N"] == 8


def test_generate_from_polygon(tmp_path, capsys):
    polygon = tmp_path / "square.json"
    side = 0.9306048591020996
    polygon.write_text(json.dumps(
        {"loops": [[[0, 0], [side, 0], [side, side], [0, side]]]}))
    cfg = str(tmp_path / "square_cfg.json")
    code, out = run(capsys, "generate", "--polygon", str(polygon), "--N", "50", "--out", cfg)
    assert code == 0
    assert json.loads(out)["N"] == 50
    code, _ = run(capsys, "generate", "--polygon", str(polygon), "--out", cfg)
    assert code == 3


def test_geometry_outputs(tmp_path, capsys):
    cfg = str(tmp_path / "hex.json")
    run(capsys, "generate", "--hexagon", "2", "--out", cfg)
    out_json = str(tmp_path / "hnprime.json")
    svg = str(tmp_path / "hnprime.svg")
    stats = str(tmp_path / "stats.json")
    code, out = run(capsys, "geometry", "--config", cfg, "--emit", "hnprime",
                    "--out", out_json, "--svg", svg, "--stats", stats)
    assert code == 0
    assert json.loads(out)["broken_bonds"] == 30
    with open(svg) as svg_file:
        assert "<svg" in svg_file.read()
    with open(out_json) as json_file:
        assert len(json.load(json_file)["loops"]) == 1
    code, out = run(capsys, "geometry", "--config", cfg, "--emit", "omega")
    assert code == 0
    assert json.loads(out)["loops_outer"] == 1


def test_geometry_needs_lattice_points(tmp_path, capsys):
    cfg = tmp_path / "points.json"
    cfg.write_text(json.dumps({"points": [[0, 0], [1.01, 0]]}))
    code, _ = run(capsys, "geometry", "--config", str(cfg), "--emit", "hn")
    assert code == 3


def test_wulff(tmp_path, capsys):
    code, out = run(capsys, "wulff", "--samples", "12", "--out", str(tmp_path / "w.json"))
    assert code == 0
    report = json.loads(out)
    assert report["scale"] == pytest.approx(0.25)
    assert report["surface_integral"] == pytest.approx(4 * 3 ** 0.5)
    code, _ = run(capsys, "wulff", "--area", "-1")
    assert code == 3


def test_converge_writes_csv(tmp_path, capsys):
    path = tmp_path / "scaling.csv"
    code, _ = run(capsys, "converge", "--study", "groundstate-scaling", "--nmin", "10",
                  "--nmax", "1000", "--points", "4", "--csv", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0].startswith("N,E,")
    assert len(lines) == 5


def test_oracle_checks_against_closed_form(tmp_path, capsys):
    code, out = run(capsys, "oracle", "--nmax", "6")
    assert code == 0
    assert json.loads(out)["6"] == 9
    table = tmp_path / "oracle.json"
    data = json.loads(table.read_text())
    data["6"] = 10
    table.write_text(json.dumps(data))
    code, _ = run(capsys, "oracle", "--nmax", "6")
    assert code == 4
    code, _ = run(capsys, "--no-assert", "oracle", "--nmax", "6")
    assert code == 0
    code, _ = run(capsys, "oracle", "--nmax", "6", "--no-cache")
    assert code == 0
    code, _ = run(capsys, "oracle", "--nmax", "9")
    assert code == 3


def test_input_errors(tmp_path, capsys):
    code, _ = run(capsys, "energy", "--config", str(tmp_path / "missing.json"))
    assert code == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _ = run(capsys, "energy", "--config", str(bad))
    assert code == 2
    dup = tmp_path / "dup.json"
    dup.write_text(json.dumps({"sites": [[0, 0], [0, 0]]}))
    code, _ = run(capsys, "energy", "--config", str(dup))
    assert code == 2


def test_geometry_writes_density_grids(tmp_path, capsys):
    cfg = str(tmp_path / "hex.json")
    run(capsys, "generate", "--hexagon", "2", "--out", cfg)
    grid = str(tmp_path / "cells.bin")
    code, out = run(capsys, "geometry", "--config", cfg, "--emit", "omega",
                    "--grid", grid, "--grid-format", "bin")
    assert code == 0
    assert json.loads(out)["grid_mass"] == pytest.approx(1.0, abs=0.03)
    back = DensityGrid.load(grid)
    assert back.mass == pytest.approx(1.0, abs=0.03)
    assert float(back.values.max()) == pytest.approx(RHO)

    points = tmp_path / "points.json"
    points.write_text(json.dumps({"points": [[0, 0], [1.01, 0], [0.5, 0.87]]}))
    smeared = str(tmp_path / "smeared.csv")
    code, _ = run(capsys, "geometry", "--config", str(points), "--emit", "omega",
                  "--grid", smeared, "--grid-measure", "mu_tilde")
    assert code == 0
    assert DensityGrid.load(smeared).mass == pytest.approx(1.0, abs=0.05)
    code, _ = run(capsys, "geometry", "--config", str(points), "--emit", "omega",
                  "--grid", smeared)
    assert code == 3
