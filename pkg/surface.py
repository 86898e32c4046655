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
from shapely import affinity
from shapely.geometry import Polygon

from errors import FormatError, PreconditionError
from geometry import (PolygonSet, clip_halfplane, dedup_vertices,
                      signed_area)
from lattice import SQRT3

#: Area of the limit shape, one hexagonal cell per unit of mass.
WULFF_AREA = SQRT3 / 2.0

GAMMA_MIN = 2.0
GAMMA_MAX = 4.0 / SQRT3

UNIT_TOLERANCE = 1e-12

#: Half size of the box the half planes of the Wulff set are clipped from.
CLIP_BOX = 100.0

ShapeMatch = namedtuple("ShapeMatch", ["distance", "rot", "shift"])

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def normal_angle(nu):
    """phi with nu = (-sin phi, cos phi)."""
    nu = np.asarray(nu, dtype=float)
    return np.arctan2(-nu[..., 0], nu[..., 1])


def gamma_of_angle(phi):
    phi = np.mod(phi, math.pi / 3.0)
    return 2.0 * (np.cos(phi) + np.sin(phi) / SQRT3)


def gamma(nu):
    """
    Surface density of the triangular lattice at the unit normal ``nu``,
    2(cos phi + sin phi / sqrt(3)) on the reduced angle phi in [0, pi/3).
    Accepts a single vector or an (n, 2) array.
    """
    nu = np.asarray(nu, dtype=float)
    norm = np.hypot(nu[..., 0], nu[..., 1])
    if np.any(np.abs(norm - 1.0) > UNIT_TOLERANCE):
        raise PreconditionError("Surface: gamma needs unit normals")
    value = gamma_of_angle(normal_angle(nu))
    return float(value) if value.ndim == 0 else value


class SurfaceDensity(object):
    """
    Anisotropic surface density. The default is the closed form of the
    triangular lattice; a table of ``(phi, value)`` pairs over [0, 2 pi)
    gives a periodic piecewise-linear density instead.
    """

    def __init__(self, table=None):
        self.table = None
        if table is not None:
            table = np.array(table, dtype=float).reshape(-1, 2)
            if len(table) < 3 or np.any(np.diff(table[:, 0]) <= 0):
                raise FormatError("Surface: density table needs increasing angles")
            if table[0, 0] < 0 or table[-1, 0] >= 2.0 * math.pi:
                raise FormatError("Surface: density table angles must lie in [0, 2pi)")
            if np.any(table[:, 1] <= 0):
                raise FormatError("Surface: density values must be positive")
            self.table = table

    def at_angle(self, phi):
        if self.table is None:
            return gamma_of_angle(phi)
        return np.interp(np.mod(phi, 2.0 * math.pi), self.table[:, 0],
                         self.table[:, 1], period=2.0 * math.pi)

    def __call__(self, nu):
        return self.at_angle(normal_angle(nu))

    @property
    def facet_angles(self):
        if self.table is None:
            return math.pi / 3.0 * np.arange(6)
        return self.table[:, 0]


class WulffShape(object):
    """
    Convex polygon {x : x . nu <= scale * Gamma(nu)} built from sampled
    normals, counterclockwise.
    """

    def __init__(self, polygon, scale=1.0, target_area=None):
        self.polygon = np.asarray(polygon, dtype=float).reshape(-1, 2)
        self.scale = scale
        self.target_area = target_area

    @property
    def area(self):
        return signed_area(self.polygon)

    def to_polygon_set(self):
        return PolygonSet([self.polygon])

    def to_shapely(self):
        return Polygon(self.polygon)

    def to_json(self):
        data = self.to_polygon_set().to_json()
        data["scale"] = self.scale
        return data

    def __repr__(self):
        return "WulffShape(vertices=%d, scale=%g, area=%g)" % (
            len(self.polygon), self.scale, self.area)


def wulff_set(density=None, samples=6):
    """
    Intersection of the half planes x . nu_j <= Gamma(nu_j) over ``samples``
    equally spaced normals together with the facet normals of the density.
    """
    if samples < 6:
        raise PreconditionError("Surface: wulff_set needs at least 6 samples")
    density = density or SurfaceDensity()
    phi = np.union1d(2.0 * math.pi * np.arange(samples) / samples,
                     density.facet_angles)
    xy = CLIP_BOX * np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
    for angle in phi:
        nu = np.array([-math.sin(angle), math.cos(angle)])
        xy = clip_halfplane(xy, float(density.at_angle(angle)) * nu, -nu)
    logging.debug("Surface: wulff set from {0} normals has {1} vertices".format(
        len(phi), len(xy)))
    return WulffShape(xy)


def _centroid(xy):
    return np.array(Polygon(xy).centroid.coords[0])


def scale_to_area(p, target):
    """
    Homothety about the centroid with factor sqrt(target / area). Works on
    a WulffShape, a PolygonSet or a (k, 2) vertex array.
    """
    if target <= 0:
        raise PreconditionError("Surface: target area must be positive")
    if isinstance(p, WulffShape):
        area = p.area
        if area <= 0:
            raise PreconditionError("Surface: cannot scale a zero-area polygon")
        lam = math.sqrt(target / area)
        c = _centroid(p.polygon)
        return WulffShape(c + lam * (p.polygon - c), p.scale * lam, target)
    if isinstance(p, PolygonSet):
        area = p.area
        if area <= 0:
            raise PreconditionError("Surface: cannot scale a zero-area polygon set")
        lam = math.sqrt(target / area)
        c = np.array(p.to_shapely().centroid.coords[0])
        return PolygonSet([c + lam * (loop - c) for loop in p.loops], p.orientations)
    xy = np.asarray(p, dtype=float).reshape(-1, 2)
    area = signed_area(xy)
    if area == 0:
        raise PreconditionError("Surface: cannot scale a zero-area polygon")
    lam = math.sqrt(target / abs(area))
    c = _centroid(xy)
    return c + lam * (xy - c)


def surface_integral(p, density=None):
    """
    Sum over boundary edges of Gamma(outward unit normal) times edge length.
    """
    density = density or SurfaceDensity()
    loops = p.loops if isinstance(p, PolygonSet) else [np.asarray(p, dtype=float)]
    total = 0.0
    for loop in loops:
        edges = np.roll(loop, -1, axis=0) - loop
        length = np.hypot(edges[:, 0], edges[:, 1])
        if np.any(length == 0):
            raise FormatError("Surface: degenerate edge in polygon loop")
        # interior on the left of every edge
        nu = np.column_stack((edges[:, 1], -edges[:, 0])) / length[:, None]
        total += float(np.dot(density(nu), length))
    return total


def _as_geometry(shape):
    if isinstance(shape, (WulffShape, PolygonSet)):
        return shape.to_shapely()
    if isinstance(shape, shapely.Geometry):
        return shape
    return Polygon(np.asarray(shape, dtype=float))


def shape_distance(a, w, full_turn=False, steps=60):
    """
    min over rotations and translations of |a symmetric difference (R w + s)|.

    Centroids are aligned first; the angle comes from a grid of ``steps``
    angles over [0, pi/3), or [0, 2 pi) with ``full_turn``, refined by
    golden section search, and the shift from a shrinking local grid
    search. The value found is an upper bound of the true minimum.

    :returns: :class:`ShapeMatch` with the distance, angle and shift.
    """
    ga = _as_geometry(a)
    gw = _as_geometry(w)
    if ga.is_empty or gw.is_empty:
        raise PreconditionError("Surface: shape_distance of an empty shape")
    origin = gw.centroid
    base = np.array(ga.centroid.coords[0]) - np.array(origin.coords[0])
    span = 2.0 * math.pi if full_turn else math.pi / 3.0

    def cost(theta, shift):
        moved = affinity.rotate(gw, theta, origin=origin, use_radians=True)
        moved = affinity.translate(moved, shift[0], shift[1])
        return ga.symmetric_difference(moved).area

    grid = span * np.arange(steps) / steps
    values = [cost(t, base) for t in grid]
    theta = float(grid[int(np.argmin(values))])

    def refine_angle(theta, shift):
        lo, hi = theta - span / steps, theta + span / steps
        x1 = hi - _GOLDEN * (hi - lo)
        x2 = lo + _GOLDEN * (hi - lo)
        f1, f2 = cost(x1, shift), cost(x2, shift)
        while hi - lo > 1e-9:
            if f1 <= f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - _GOLDEN * (hi - lo)
                f1 = cost(x1, shift)
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + _GOLDEN * (hi - lo)
                f2 = cost(x2, shift)
        return 0.5 * (lo + hi)

    theta = refine_angle(theta, base)
    shift = base.copy()
    best = cost(theta, shift)
    step = 0.05 * math.sqrt(gw.area)
    directions = np.array([(1, 0), (-1, 0), (0, 1), (0, -1),
                           (1, 1), (1, -1), (-1, 1), (-1, -1)], dtype=float)
    while step > 1e-7:
        trials = [cost(theta, shift + step * d) for d in directions]
        k = int(np.argmin(trials))
        if trials[k] < best:
            best = trials[k]
            shift = shift + step * directions[k]
        else:
            step *= 0.5
    theta = refine_angle(theta, shift)
    best = min(best, cost(theta, shift))
    theta = float(np.mod(theta, span))
    logging.debug("Surface: shape distance {0:.3g} at angle {1:.6f}".format(best, theta))
    return ShapeMatch(best, theta, (float(shift[0]), float(shift[1])))


def snap_to_lattice(points, n):
    """Nearest points of the lattice scaled by 1/n."""
    pts = n * np.asarray(points, dtype=float).reshape(-1, 2)
    b = pts[:, 1] * 2.0 / SQRT3
    a = pts[:, 0] - 0.5 * b
    best = None
    best_dist = None
    for da in (0, 1):
        for db in (0, 1):
            m = np.floor(a) + da
            k = np.floor(b) + db
            cand = np.column_stack((m + 0.5 * k, SQRT3 / 2.0 * k))
            dist = np.hypot(*(cand - pts).T)
            if best is None:
                best, best_dist = cand, dist
            else:
                closer = dist < best_dist
                best[closer] = cand[closer]
                best_dist = np.where(closer, dist, best_dist)
    return best / n


def snap_polygon(p, n):
    """
    Move every corner of ``p`` to the nearest point of (1/n)L, dropping
    corners that collapse onto their predecessor.
    """
    if n < 1:
        raise PreconditionError("Surface: snap_polygon needs n >= 1")
    if isinstance(p, WulffShape):
        return WulffShape(dedup_vertices(snap_to_lattice(p.polygon, n)), p.scale)
    return PolygonSet([dedup_vertices(snap_to_lattice(loop, n)) for loop in p.loops])
