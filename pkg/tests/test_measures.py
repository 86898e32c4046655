import math

import numpy as np
import pytest
from shapely.geometry import box

from errors import FormatError, InputError, PreconditionError
from groundstate import hexagon_config
from lattice import LatticeConfig
from measures import (RHO, DensityGrid, EmpiricalMeasure,
                      bounded_lipschitz_distance, empirical, l1_distance,
                      mass_in_ball, mu_tilde, mu_tilde_tilde, rasterize)


def test_empirical_measure():
    cfg = hexagon_config(1)
    mu = empirical(cfg)
    assert mu.mass == pytest.approx(1.0)
    assert mu.centroid == pytest.approx([0.0, 0.0], abs=1e-12)
    assert mu.support_radius() == pytest.approx(1.0 / math.sqrt(7))
    shifted = empirical(cfg.translated(3, 0)).centered()
    assert shifted.centroid == pytest.approx([0.0, 0.0], abs=1e-12)
    with pytest.raises(PreconditionError):
        empirical(LatticeConfig())


def test_mass_in_ball():
    mu = empirical(hexagon_config(2))
    assert mass_in_ball(mu, (0, 0), 10.0) == pytest.approx(1.0)
    assert mass_in_ball(mu, (0, 0), 1e-6) == pytest.approx(1.0 / 19)
    with pytest.raises(PreconditionError):
        mass_in_ball(mu, (0, 0), 0.0)


def test_rasterize_unit_square():
    grid = rasterize([box(0, 0, 1, 1)], [2.0], h=0.01)
    assert grid.mass == pytest.approx(2.0, rel=0.03)
    assert grid.sample(0.5, 0.5) == pytest.approx(2.0)
    assert grid.sample(5.0, 5.0) == 0.0


def test_auxiliary_densities_have_unit_mass():
    cfg = hexagon_config(2)
    smeared = mu_tilde(cfg, h=0.005)
    cells = mu_tilde_tilde(cfg, h=0.005)
    assert smeared.mass == pytest.approx(1.0, abs=0.03)
    assert cells.mass == pytest.approx(1.0, abs=0.03)
    assert float(cells.values.max()) == pytest.approx(RHO)
    assert 0.0 < l1_distance(smeared, cells) < 2.0
    assert l1_distance(cells, cells) == 0.0


def test_bounded_lipschitz():
    cfg = hexagon_config(2)
    mu = empirical(cfg)
    assert bounded_lipschitz_distance(mu, mu) == pytest.approx(0.0, abs=1e-12)
    cells = mu_tilde_tilde(cfg, h=0.01)
    d = bounded_lipschitz_distance(mu, cells, levels=2)
    assert 0.0 <= d <= 2.0
    far = EmpiricalMeasure(mu.points + 10.0)
    assert 0.5 < bounded_lipschitz_distance(mu, far, levels=1) <= 1.0


def test_grid_save_and_load(tmp_path):
    grid = DensityGrid((0.5, -1.0), 0.25, np.arange(6, dtype=float).reshape(2, 3))
    for fmt in ("csv", "bin"):
        path = str(tmp_path / ("grid." + fmt))
        grid.save(path, fmt)
        back = DensityGrid.load(path)
        assert back.dims == (2, 3)
        assert back.h == 0.25
        assert np.array_equal(back.values, grid.values)
        assert back.origin.tolist() == [0.5, -1.0]
    with pytest.raises(FormatError):
        grid.save(str(tmp_path / "grid.x"), "png")
    with pytest.raises(InputError):
        DensityGrid.load(str(tmp_path / "missing"))


def test_cell_density_of_an_island_inside_a_hole():
    sites = [tuple(s) for s in hexagon_config(3).sites.tolist()
             if max(abs(s[0]), abs(s[1]), abs(s[0] + s[1])) != 1]
    cells = mu_tilde_tilde(LatticeConfig(sites), h=0.005)
    assert cells.mass == pytest.approx(1.0, abs=0.03)


def test_cell_density_takes_two_values():
    values = mu_tilde_tilde(hexagon_config(2), h=0.01).values
    assert np.all(np.isclose(values, 0.0) | np.isclose(values, RHO))


def test_l1_distance_resamples_other_steps():
    fine = rasterize([box(0, 0, 1, 1)], [1.0], h=0.01)
    coarse = rasterize([box(0, 0, 1, 1)], [1.0], h=0.02)
    assert l1_distance(fine, coarse) == pytest.approx(0.0, abs=1e-12)
    shifted = rasterize([box(0.5, 0, 1.5, 1)], [1.0], h=0.02)
    assert l1_distance(fine, shifted) == pytest.approx(1.0, abs=1e-6)


def test_l1_triangle_inequality():
    a = rasterize([box(0, 0, 1, 1)], [1.0], h=0.01)
    b = rasterize([box(0.3, 0.2, 1.1, 0.9)], [2.0], h=0.01)
    c = rasterize([box(-0.5, 0, 0.5, 0.5)], [0.5], h=0.01)
    assert l1_distance(a, c) <= l1_distance(a, b) + l1_distance(b, c) + 1e-12


@pytest.mark.parametrize("d", (0.05, 0.1, 0.3))
def test_bounded_lipschitz_of_a_shifted_point_mass(d):
    here = EmpiricalMeasure([(0.013, 0.007)])
    there = EmpiricalMeasure([(0.013 + d, 0.007)])
    value = bounded_lipschitz_distance(here, there)
    assert d / 2 <= value <= d + 1e-12
