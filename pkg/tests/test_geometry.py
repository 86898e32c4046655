import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from shapely.geometry import Point

from errors import FormatError, PreconditionError
from geometry import (HEX_CELL_AREA, PolygonSet, boundary_contributors,
                      broken_bonds, clip_halfplane, deoscillate,
                      diameter_boundary_bound_check, disc_polygon,
                      energy_perimeter_identity_check, h_set, omega,
                      omega_is_connected, signed_area, sublattice,
                      symmetric_difference, symmetric_difference_bound,
                      truncated_cells, volume_excess, voronoi_cells)
from groundstate import hexagon_config, random_connected_config, spiral_config
from lattice import SQRT3, LatticeConfig, PointConfig, perturbed_points
from surface import surface_integral

SQUARE = np.array([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])


def test_clip_halfplane():
    half = clip_halfplane(SQUARE, np.array([0.5, 0.0]), np.array([-1.0, 0.0]))
    assert signed_area(half) == pytest.approx(0.5)
    assert len(clip_halfplane(SQUARE, np.array([2.0, 0.0]), np.array([1.0, 0.0]))) == 0
    assert signed_area(clip_halfplane(SQUARE, np.array([-1.0, 0.0]),
                                      np.array([1.0, 0.0]))) == pytest.approx(1.0)


def test_disc_polygon_is_counterclockwise():
    xy = disc_polygon((0.0, 0.0), 1.0, 64)
    assert signed_area(xy) == pytest.approx(32 * math.sin(2 * math.pi / 64))


def test_polygon_set_checks_loops():
    with pytest.raises(FormatError):
        PolygonSet([[(0, 0), (1, 0)]])
    with pytest.raises(FormatError):
        PolygonSet([SQUARE], orientations=[-1])
    hole = SQUARE[::-1] * 0.5 + 0.25
    ring = PolygonSet([SQUARE, hole])
    assert ring.orientations == [1, -1]
    assert ring.area == pytest.approx(0.75)
    assert ring.to_shapely().area == pytest.approx(0.75)
    assert PolygonSet.from_json(ring.to_json()).area == pytest.approx(0.75)
    assert PolygonSet.from_shapely(ring.to_shapely()).area == pytest.approx(0.75)
    with pytest.raises(FormatError):
        PolygonSet.from_json({"rings": []})


def test_voronoi_cells_of_lattice_hexagon():
    cfg = hexagon_config(1)
    cells = voronoi_cells(cfg)
    assert len(cells) == 7
    centre = [c for c in cells if np.allclose(c.site, (0.0, 0.0))][0]
    assert centre.area == pytest.approx(HEX_CELL_AREA)
    assert len(centre.vertices) == 6


def test_voronoi_rejects_duplicates():
    with pytest.raises(FormatError):
        voronoi_cells(PointConfig([(0, 0), (0, 0)]))
    with pytest.raises(PreconditionError):
        voronoi_cells(PointConfig())


def test_truncated_cells():
    single = truncated_cells(LatticeConfig([(0, 0)]))
    assert single[0].area == pytest.approx(32 * math.sin(2 * math.pi / 64))
    cells = truncated_cells(hexagon_config(2))
    # interior cells are untouched lattice hexagons
    areas = sorted(c.area for c in cells)
    assert areas[-1] > areas[0]
    assert volume_excess(0, hexagon_config(2)) >= 0.0
    centre = list(map(tuple, hexagon_config(2).sites.tolist())).index((0, 0))
    assert volume_excess(centre, hexagon_config(2)) == pytest.approx(0.0, abs=1e-9)


def test_omega():
    shape = omega(hexagon_config(1))
    assert sum(1 for o in shape.orientations if o > 0) == 1
    assert shape.area == pytest.approx(sum(c.area for c in truncated_cells(hexagon_config(1))),
                                       rel=1e-6)
    apart = omega(PointConfig([(0, 0), (5, 0)]))
    assert sum(1 for o in apart.orientations if o > 0) == 2


def test_omega_connectivity():
    assert omega_is_connected(PointConfig([(0, 0), (1.5, 0)]), 2.0)
    assert not omega_is_connected(PointConfig([(0, 0), (3, 0)]), 2.0)
    assert omega_is_connected(PointConfig([(0, 0)]), 1.0)


def test_sublattice_tags():
    assert sublattice(1, 1) == "A"
    assert sublattice(-1, 2) == "B"


def test_h_set_of_hexagon():
    cfg = hexagon_config(1)
    h = h_set(cfg)
    assert len(h) == 1
    assert h.edge_count == 18
    assert h.area == pytest.approx(7 * HEX_CELL_AREA)
    assert h.perimeter == pytest.approx(18 / SQRT3)
    scaled = h_set(cfg, 7)
    assert scaled.area == pytest.approx(HEX_CELL_AREA)
    for i in range(len(h)):
        tags = [sublattice(v.a, v.b) for v in h.dual_vertices(i)]
        assert all(a != b for a, b in zip(tags, tags[1:] + tags[:1]))


def test_h_set_with_hole():
    ring = [tuple(s) for s in hexagon_config(2).sites.tolist() if tuple(s) != (0, 0)]
    h = h_set(LatticeConfig(ring))
    assert sorted(h.orientations) == [-1, 1]
    assert h.area == pytest.approx(18 * HEX_CELL_AREA)


def test_deoscillate_single_cell():
    h = h_set(LatticeConfig([(0, 0)]))
    hp = deoscillate(h)
    assert hp.edge_count == 3
    assert hp.perimeter == pytest.approx(3.0)
    with pytest.raises(PreconditionError):
        deoscillate(PolygonSet([SQUARE]))


def test_identity_on_hexagon():
    check = energy_perimeter_identity_check(hexagon_config(1))
    assert check.lhs == 18
    assert check.rhs == pytest.approx(18.0)
    assert check.equal


@settings(deadline=None)
@given(st.integers(2, 60), st.integers(0, 10 ** 6))
def test_identity_on_random_animals(N, seed):
    cfg = random_connected_config(N, seed=seed)
    check = energy_perimeter_identity_check(cfg)
    assert check.equal
    assert check.lhs == broken_bonds(cfg)


@settings(deadline=None)
@given(st.integers(1, 40), st.integers(0, 10 ** 6))
def test_symmetric_difference_bound(N, seed):
    cfg = random_connected_config(N, seed=seed)
    check = symmetric_difference_bound(cfg)
    assert check.ok
    assert check.measured == pytest.approx(check.segments_bound, rel=1e-6)


def test_symmetric_difference_single_atom():
    check = symmetric_difference_bound(LatticeConfig([(0, 0)]))
    assert check.measured == pytest.approx(SQRT3 / 4)
    assert check.atoms_bound == pytest.approx(6 / (8 * SQRT3))
    h = h_set(LatticeConfig([(0, 0)]))
    assert symmetric_difference(h, h) == pytest.approx(0.0, abs=1e-12)


def test_perimeter_matches_surface_integral():
    cfg = spiral_config(30)
    hp = deoscillate(h_set(cfg, 30))
    assert math.sqrt(30) * surface_integral(hp) == pytest.approx(broken_bonds(cfg))


def test_diameter_bound():
    check = diameter_boundary_bound_check(hexagon_config(1))
    assert check.diam == pytest.approx(2.0)
    assert check.pi_times_boundary == pytest.approx(6 * math.pi)
    assert check.ok
    line = LatticeConfig([(m, 0) for m in range(20)])
    assert diameter_boundary_bound_check(line).ok
    with pytest.raises(PreconditionError):
        diameter_boundary_bound_check(LatticeConfig([(0, 0), (3, 0)]))


def test_no_interior_atom_reaches_the_boundary():
    assert boundary_contributors(hexagon_config(2)) == []


def island_in_hole():
    """Rings 2 and 3 of the radius 3 hexagon around a lone centre site."""
    sites = [tuple(s) for s in hexagon_config(3).sites.tolist()
             if max(abs(s[0]), abs(s[1]), abs(s[0] + s[1])) != 1]
    return LatticeConfig(sites)


def test_island_inside_a_hole_stays_filled():
    cfg = island_in_hole()
    assert len(cfg) == 31
    h = h_set(cfg)
    assert sorted(h.orientations) == [-1, 1, 1]
    assert h.area == pytest.approx(31 * HEX_CELL_AREA)
    assert h.to_shapely().area == pytest.approx(h.area)
    hp = deoscillate(h)
    assert hp.to_shapely().area == pytest.approx(hp.area)
    check = symmetric_difference_bound(cfg)
    assert check.measured == pytest.approx(check.segments_bound, rel=1e-6)


@settings(deadline=None)
@given(st.integers(0, 10 ** 6))
def test_truncated_cells_are_bounded_and_hold_a_disc(seed):
    alpha = 0.95
    cfg = perturbed_points(hexagon_config(2), 0.02, seed=seed)
    for cell in truncated_cells(cfg):
        assert cell.perimeter <= 2 * math.pi + 1e-2
        poly = cell.to_shapely()
        site = Point(cell.site)
        assert poly.contains(site)
        assert poly.exterior.distance(site) >= alpha / 2
