# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#

# Meta
__license__ = "AGPLv3"

import logging
import math
from collections import namedtuple

import numpy as np
import shapely
from shapely.geometry import Polygon, box
from shapely.geometry.polygon import orient
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as csgraph_components

from errors import FormatError, PreconditionError
from lattice import (NEIGHBOR_OFFSETS, SQRT3, LatticeConfig, as_points,
                     bond_count, diameter, is_connected, neighbor_counts,
                     pairs_within)

DISC_SEGMENTS = 64

#: Area of the hexagonal lattice cell of circumradius 1/sqrt(3).
HEX_CELL_AREA = SQRT3 / 2.0

VERTEX_TOLERANCE = 1e-9

#: Union grid for truncated cells; adjacent cells share edges up to rounding.
UNION_GRID = 1e-9

# Dual vertex of the cell of the origin between directions k and k+1, in
# axial coordinates times 3.
_CORNERS = tuple((NEIGHBOR_OFFSETS[k][0] + NEIGHBOR_OFFSETS[(k + 1) % 6][0],
                  NEIGHBOR_OFFSETS[k][1] + NEIGHBOR_OFFSETS[(k + 1) % 6][1])
                 for k in range(6))

IdentityCheck = namedtuple("IdentityCheck", ["lhs", "rhs", "equal"])

DiameterCheck = namedtuple("DiameterCheck", ["diam", "pi_times_boundary", "ok"])

SymmetricDifferenceCheck = namedtuple("SymmetricDifferenceCheck", [
    "measured",
    "segments_bound",
    "atoms_bound",
    "ok",
])


def signed_area(xy):
    x, y = xy[:, 0], xy[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def loop_length(xy):
    return float(np.hypot(*(np.roll(xy, -1, axis=0) - xy).T).sum())


def dedup_vertices(xy):
    if len(xy) < 2:
        return xy
    gap = np.hypot(*(np.roll(xy, -1, axis=0) - xy).T)
    return xy[gap > VERTEX_TOLERANCE]


def clip_halfplane(xy, m, n):
    """
    Intersection of the convex polygon ``xy`` with the half plane through
    ``m`` with inward normal ``n``.
    """
    if not len(xy):
        return xy
    d = (xy - m).dot(n)
    nxt = np.roll(xy, -1, axis=0)
    dn = np.roll(d, -1)
    cross = d * dn < 0
    w = np.zeros(len(xy))
    w[cross] = d[cross] / (d[cross] - dn[cross])
    hits = xy + w[:, None] * (nxt - xy)
    # each vertex, then the crossing on its outgoing edge
    candidates = np.stack((xy, hits), axis=1).reshape(-1, 2)
    keep = np.column_stack((d >= 0, cross)).reshape(-1)
    return dedup_vertices(candidates[keep])


def disc_polygon(center, radius=1.0, segments=DISC_SEGMENTS):
    """Regular ``segments``-gon inscribed in the disc, counterclockwise."""
    t = 2.0 * math.pi * np.arange(segments) / segments
    return np.column_stack((center[0] + radius * np.cos(t),
                            center[1] + radius * np.sin(t)))


class ConvexCell(object):
    """
    Convex polygon owned by a point of a configuration.

    :param vertices: counterclockwise (k, 2) array, not closed.
    :param site: the owning point.
    """

    def __init__(self, vertices, site):
        self.vertices = np.asarray(vertices, dtype=float).reshape(-1, 2)
        self.site = np.asarray(site, dtype=float)

    @property
    def area(self):
        return signed_area(self.vertices)

    @property
    def perimeter(self):
        return loop_length(self.vertices)

    def to_shapely(self):
        return Polygon(self.vertices)

    def __repr__(self):
        return "ConvexCell(site=(%g, %g), vertices=%d)" % (
            self.site[0], self.site[1], len(self.vertices))


DualVertex = namedtuple("DualVertex", ["a", "b"])


def sublattice(a, b):
    """A for vertices in (e1+e2)/3 + L, B for (2e2-e1)/3 + L."""
    return "A" if (a % 3, b % 3) == (1, 1) else "B"


def dual_to_points(dual, scale=1.0):
    """Planar points of dual vertices given in axial coordinates times 3."""
    dual = np.asarray(dual, dtype=float).reshape(-1, 2)
    pts = np.column_stack(((dual[:, 0] + 0.5 * dual[:, 1]) / 3.0,
                           SQRT3 / 6.0 * dual[:, 1]))
    return pts * scale


class PolygonSet(object):
    """
    Disjoint union of simple closed polygons. Outer boundaries run
    counterclockwise and holes clockwise.

    Sets built from lattice configurations also keep their loops as integer
    dual-lattice vertices in ``dual`` together with the ``scale`` applied to
    the planar coordinates.
    """

    def __init__(self, loops, orientations=None, dual=None, scale=1.0):
        self.loops = [np.asarray(loop, dtype=float).reshape(-1, 2) for loop in loops]
        self.dual = dual
        self.scale = scale
        areas = [signed_area(loop) if len(loop) >= 3 else 0.0 for loop in self.loops]
        for loop, a in zip(self.loops, areas):
            if len(loop) < 3 or a == 0.0:
                raise FormatError("Geometry: degenerate polygon loop")
        signs = [1 if a > 0 else -1 for a in areas]
        if orientations is not None:
            if list(orientations) != signs:
                raise FormatError(
                    "Geometry: loop orientations do not match their signed areas")
        self.orientations = signs

    def __len__(self):
        return len(self.loops)

    def __repr__(self):
        return "PolygonSet(loops=%d, area=%g)" % (len(self.loops), self.area)

    @property
    def area(self):
        return sum(signed_area(loop) for loop in self.loops)

    @property
    def perimeter(self):
        return sum(loop_length(loop) for loop in self.loops)

    @property
    def edge_count(self):
        return sum(len(loop) for loop in self.loops)

    def dual_vertices(self, i):
        if self.dual is None:
            raise PreconditionError("Geometry: polygon set has no dual-lattice loops")
        return [DualVertex(int(a), int(b)) for a, b in self.dual[i]]

    def scaled(self, factor):
        return PolygonSet([loop * factor for loop in self.loops],
                          self.orientations, self.dual, self.scale * factor)

    def to_shapely(self):
        # loops nest, so the region is the even-odd fill of all of them;
        # an island inside a hole stays filled
        parts = [shapely.make_valid(Polygon(loop)) for loop in self.loops]
        if not parts:
            return shapely.GeometryCollection()
        return shapely.symmetric_difference_all(parts)

    @classmethod
    def from_shapely(cls, geom):
        loops = []
        for part in getattr(geom, "geoms", [geom]):
            if part.geom_type == "MultiPolygon":
                polys = part.geoms
            elif part.geom_type == "Polygon":
                polys = [part]
            else:
                continue
            for poly in polys:
                if poly.is_empty:
                    continue
                poly = orient(poly, 1.0)
                loops.append(np.asarray(poly.exterior.coords)[:-1])
                loops.extend(np.asarray(ring.coords)[:-1] for ring in poly.interiors)
        return cls([dedup_vertices(loop) for loop in loops])

    def to_json(self):
        return {"loops": [loop.tolist() for loop in self.loops],
                "orientations": list(self.orientations)}

    @classmethod
    def from_json(cls, data):
        try:
            return cls(data["loops"], data.get("orientations"))
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise FormatError("Geometry: malformed polygon set: {0}".format(e))


def _check_points(pts):
    if not len(pts):
        raise PreconditionError("Geometry: empty configuration")
    i, j, d = pairs_within(pts, VERTEX_TOLERANCE)
    if len(i):
        raise FormatError("Geometry: duplicate points {0} and {1}".format(i[0], j[0]))


def bounding_box(pts, margin=2.0):
    lo = pts.min(axis=0) - margin
    hi = pts.max(axis=0) + margin
    return box(lo[0], lo[1], hi[0], hi[1])


def voronoi_cells(cfg, margin=2.0):
    """
    Voronoi cells of all points, clipped to the bounding box of the
    configuration grown by ``margin``.
    """
    pts = as_points(cfg)
    _check_points(pts)
    frame = bounding_box(pts, margin)
    if len(pts) == 1:
        return [ConvexCell(np.asarray(orient(frame, 1.0).exterior.coords)[:-1], pts[0])]
    regions = shapely.voronoi_polygons(shapely.multipoints(pts), extend_to=frame)
    regions = shapely.intersection(shapely.get_parts(regions), frame)
    # regions do not come back in input order
    tree = shapely.STRtree(regions)
    owner, region = tree.query(shapely.points(pts), predicate="within")
    by_point = dict(zip(owner.tolist(), region.tolist()))
    cells = []
    for k, site in enumerate(pts):
        poly = orient(regions[by_point[k]], 1.0)
        cells.append(ConvexCell(dedup_vertices(np.asarray(poly.exterior.coords)[:-1]), site))
    return cells


def _truncated_cell(pts, i, others, segments):
    xy = disc_polygon(pts[i], 1.0, segments)
    for j in others:
        xy = clip_halfplane(xy, 0.5 * (pts[i] + pts[j]), pts[i] - pts[j])
    return ConvexCell(xy, pts[i])


def truncated_cells(cfg, segments=DISC_SEGMENTS):
    """
    Voronoi cells cut down to the unit disc around their site. The disc is
    an inscribed regular polygon with ``segments`` sides; only points
    closer than 2 can cut it.
    """
    pts = as_points(cfg)
    _check_points(pts)
    i, j, _ = pairs_within(pts, 2.0)
    near = [[] for _ in range(len(pts))]
    for a, b in zip(i.tolist(), j.tolist()):
        near[a].append(b)
        near[b].append(a)
    return [_truncated_cell(pts, k, near[k], segments) for k in range(len(pts))]


def omega(cfg, segments=DISC_SEGMENTS):
    cells = truncated_cells(cfg, segments)
    geom = shapely.union_all([cell.to_shapely() for cell in cells], grid_size=UNION_GRID)
    result = PolygonSet.from_shapely(geom)
    logging.debug("Geometry: omega of {0} points has {1} loops, area {2:.6f}".format(
        len(cells), len(result), result.area))
    return result


def omega_is_connected(cfg, beta, segments=DISC_SEGMENTS):
    """
    Connectivity of Omega read off the cell graph: points at distance
    <= beta whose truncated cells meet are joined.
    """
    pts = as_points(cfg)
    if len(pts) <= 1:
        return True
    cells = truncated_cells(cfg, segments)
    polys = np.array([cell.to_shapely() for cell in cells], dtype=object)
    i, j, _ = pairs_within(pts, beta)
    meet = shapely.intersects(polys[i], polys[j])
    n = len(pts)
    graph = coo_matrix((np.ones(int(meet.sum())), (i[meet], j[meet])), shape=(n, n))
    count, _ = csgraph_components(graph, directed=False)
    return count == 1


# Lattice cells and their union
#
# Dual vertices are kept as integer axial coordinates times 3, so H_N and its
# de-oscillated version are exact until the final conversion to floats.

def _boundary_edges(cfg):
    starts, ends = [], []
    sites3 = 3 * cfg.sites
    for k, offset in enumerate(NEIGHBOR_OFFSETS):
        broken = ~cfg.contains_sites(cfg.sites + np.array(offset))
        base = sites3[broken]
        starts.append(base + np.array(_CORNERS[k - 1]))
        ends.append(base + np.array(_CORNERS[k]))
    return np.concatenate(starts), np.concatenate(ends)


def _stitch(starts, ends):
    """Chain directed edges into loops; every vertex has one in and one out."""
    succ = dict(zip(map(tuple, starts.tolist()), map(tuple, ends.tolist())))
    if len(succ) != len(starts):
        raise FormatError("Geometry: dual vertex with boundary degree above 2")
    loops = []
    for first in sorted(succ):
        if first not in succ:
            continue
        loop = [first]
        vertex = succ.pop(first)
        while vertex != first:
            loop.append(vertex)
            vertex = succ.pop(vertex)
        loops.append(np.array(loop, dtype=np.int64))
    return loops


def _dual_polygon_set(dual, scale):
    return PolygonSet([dual_to_points(loop, scale) for loop in dual], dual=dual, scale=scale)


def h_set(cfg, rescale_N=None):
    """
    Union of the closed hexagonal cells of all sites, one boundary edge per
    broken bond. With ``rescale_N`` all coordinates are divided by its
    square root.
    """
    if rescale_N is not None and rescale_N < 1:
        raise PreconditionError("Geometry: rescale_N must be positive")
    scale = 1.0 / math.sqrt(rescale_N) if rescale_N else 1.0
    if not len(cfg):
        return PolygonSet([], dual=[], scale=scale)
    starts, ends = _boundary_edges(cfg)
    return _dual_polygon_set(_stitch(starts, ends), scale)


def deoscillate(h):
    """
    Replace every boundary loop v1..vm of ``h`` by the chords [v1, v3],
    [v3, v5], ... through its sublattice A vertices.
    """
    if h.dual is None:
        raise PreconditionError("Geometry: deoscillate needs a set built by h_set")
    chords = []
    for loop in h.dual:
        tags = (loop[:, 0] % 3 == 1) & (loop[:, 1] % 3 == 1)
        if len(loop) % 2 or np.any(tags == np.roll(tags, 1)):
            raise FormatError(
                "Geometry: boundary loop of length {0} does not alternate sublattices".format(
                    len(loop)))
        first = int(np.argmax(tags))
        chords.append(loop[first::2])
    return _dual_polygon_set(chords, h.scale)


def broken_bonds(cfg):
    return 6 * len(cfg) - 2 * bond_count(cfg)


def energy_perimeter_identity_check(cfg):
    """
    Compare E + 6N of the sticky disc energy with 2 sqrt(N) times the
    perimeter of the rescaled de-oscillated set.
    """
    N = len(cfg)
    lhs = broken_bonds(cfg)
    if not N:
        return IdentityCheck(0, 0.0, True)
    rhs = 2.0 * math.sqrt(N) * deoscillate(h_set(cfg, N)).perimeter
    equal = abs(lhs - rhs) <= 1e-9 * max(1, lhs)
    logging.debug("Geometry: identity check N={0}: {1} vs {2}".format(N, lhs, rhs))
    return IdentityCheck(lhs, rhs, equal)


def polygon_area(a):
    return a.area


def perimeter(a):
    return a.perimeter


def symmetric_difference(a, b):
    ga, gb = a.to_shapely(), b.to_shapely()
    return max(0.0, ga.area + gb.area - 2.0 * ga.intersection(gb).area)


def symmetric_difference_bound(cfg):
    """
    |H_N symmetric difference H_N'| in rescaled coordinates against the
    chord bound: every chord trades one triangle of area sqrt(3)/12, so the
    difference equals #segments / (8 N sqrt(3)) with #segments the number
    of boundary segments of H_N. ``atoms_bound`` counts boundary atoms
    instead, each owning at most six segments.
    """
    N = len(cfg)
    if not N:
        raise PreconditionError("Geometry: empty configuration")
    h = h_set(cfg, N)
    measured = symmetric_difference(h, deoscillate(h))
    segments_bound = broken_bonds(cfg) / (8.0 * N * SQRT3)
    boundary = int(np.count_nonzero(neighbor_counts(cfg) < 6))
    atoms_bound = 6.0 * boundary / (8.0 * N * SQRT3)
    ok = measured <= segments_bound * (1.0 + 1e-9) + 1e-12
    return SymmetricDifferenceCheck(measured, segments_bound, atoms_bound, ok)


def volume_excess(i, cfg, segments=DISC_SEGMENTS):
    """
    | 1/|V_trunc(x_i)| - 1/|hexagonal cell| |, zero for lattice atoms with
    all six neighbors.
    """
    pts = as_points(cfg)
    if not 0 <= i < len(pts):
        raise PreconditionError("Geometry: atom index {0} out of range".format(i))
    d = np.hypot(*(pts - pts[i]).T)
    others = np.flatnonzero((d <= 2.0) & (d > 0))
    cell = _truncated_cell(pts, i, others, segments)
    return abs(1.0 / cell.area - 1.0 / HEX_CELL_AREA)


def epsilon_neighbor_counts(cfg, eps):
    if isinstance(cfg, LatticeConfig):
        return neighbor_counts(cfg)
    pts = as_points(cfg)
    counts = np.zeros(len(pts), dtype=np.int64)
    i, j, d = pairs_within(pts, 1.0 + eps)
    near = np.abs(d - 1.0) <= eps
    np.add.at(counts, i[near], 1)
    np.add.at(counts, j[near], 1)
    return counts


def diameter_boundary_bound_check(cfg, eps=0.05, beta=None):
    """
    diam(S) <= pi * #boundary atoms, boundary atoms being those with fewer
    than six neighbors at distance in [1 - eps, 1 + eps].

    :param beta: connectivity range, 1 + eps unless given.
    """
    beta = 1.0 + eps if beta is None else beta
    if not is_connected(cfg, beta):
        raise PreconditionError("Geometry: diameter bound needs a connected configuration")
    diam = diameter(cfg)
    boundary = int(np.count_nonzero(epsilon_neighbor_counts(cfg, eps) < 6))
    bound = math.pi * boundary
    return DiameterCheck(diam, bound, diam <= bound)


def boundary_contributors(cfg, eps=0.05, segments=DISC_SEGMENTS):
    """
    Indices of atoms with six neighbors at scale eps whose truncated cell
    still reaches the boundary of Omega. Empty whenever eps is small
    enough; the result lists the exceptions found at this eps.
    """
    cells = truncated_cells(cfg, segments)
    full = np.flatnonzero(epsilon_neighbor_counts(cfg, eps) == 6)
    if not len(full):
        return []
    outline = shapely.union_all([c.to_shapely() for c in cells], grid_size=UNION_GRID).boundary
    touching = [int(k) for k in full
                if cells[k].to_shapely().boundary.intersection(outline).length > 1e-9]
    if touching:
        logging.info("Geometry: {0} interior atoms reach the boundary at eps={1}".format(
            len(touching), eps))
    return touching
