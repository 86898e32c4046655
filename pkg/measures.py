# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#

# Meta
__license__ = "AGPLv3"

import json
import logging
import math

import numpy as np
import shapely
from scipy.spatial import KDTree
from shapely.geometry import Polygon

from errors import FormatError, InputError, PreconditionError
from geometry import h_set, truncated_cells
from lattice import SQRT3, as_points

#: Density of one atom per hexagonal cell of area sqrt(3)/2.
RHO = 2.0 / SQRT3

RASTER_H = 0.002

BL_LEVELS = 4

#: Spacing of the weighted points a density grid is reduced to before the
#: bounded-Lipschitz dictionary is evaluated.
BL_BLOCK = 1.0 / 128.0


class EmpiricalMeasure(object):
    """
    Atoms of weight 1/N at the rescaled points x_i / sqrt(N).
    """

    def __init__(self, points, weights=None):
        self.points = np.asarray(points, dtype=float).reshape(-1, 2)
        self.N = len(self.points)
        if weights is None:
            weights = np.full(self.N, 1.0 / self.N) if self.N else np.empty(0)
        self.weights = np.asarray(weights, dtype=float)

    @property
    def mass(self):
        return float(self.weights.sum())

    @property
    def centroid(self):
        return np.average(self.points, axis=0, weights=self.weights)

    def centered(self):
        return EmpiricalMeasure(self.points - self.centroid, self.weights)

    def support_radius(self, center=None):
        c = self.centroid if center is None else np.asarray(center, dtype=float)
        return float(np.hypot(*(self.points - c).T).max())

    def weighted_points(self):
        return self.points, self.weights

    def __repr__(self):
        return "EmpiricalMeasure(N=%d, mass=%g)" % (self.N, self.mass)


def empirical(cfg):
    pts = as_points(cfg)
    if not len(pts):
        raise PreconditionError("Measures: empirical measure of an empty configuration")
    return EmpiricalMeasure(pts / math.sqrt(len(pts)))


class DensityGrid(object):
    """
    Piecewise constant density on square cells of side ``h``; ``values`` is
    a (rows, columns) array whose cell (r, c) has its lower left corner at
    origin + h * (c, r).
    """

    def __init__(self, origin, h, values):
        self.origin = np.asarray(origin, dtype=float)
        self.h = float(h)
        self.values = np.asarray(values, dtype=float)
        self.values.setflags(write=False)
        if self.h <= 0 or self.values.ndim != 2:
            raise FormatError("Measures: malformed density grid")

    @property
    def dims(self):
        return self.values.shape

    @property
    def mass(self):
        return float(self.values.sum()) * self.h * self.h

    def centers(self):
        rows, cols = self.dims
        xs = self.origin[0] + self.h * (np.arange(cols) + 0.5)
        ys = self.origin[1] + self.h * (np.arange(rows) + 0.5)
        return xs, ys

    def weighted_points(self, block=BL_BLOCK):
        """
        Grid mass gathered into square blocks of side about ``block``, each
        block reported at its mass centroid.
        """
        k = max(1, int(round(block / self.h)))
        rows, cols = self.dims
        pad_r, pad_c = -rows % k, -cols % k
        mass = np.pad(self.values, ((0, pad_r), (0, pad_c))) * self.h * self.h
        xs = self.origin[0] + self.h * (np.arange(cols + pad_c) + 0.5)
        ys = self.origin[1] + self.h * (np.arange(rows + pad_r) + 0.5)
        X, Y = np.meshgrid(xs, ys)
        shape = ((rows + pad_r) // k, k, (cols + pad_c) // k, k)
        total = mass.reshape(shape).sum(axis=(1, 3))
        mx = (mass * X).reshape(shape).sum(axis=(1, 3))
        my = (mass * Y).reshape(shape).sum(axis=(1, 3))
        keep = total > 0
        pts = np.column_stack((mx[keep] / total[keep], my[keep] / total[keep]))
        return pts, total[keep]

    def sample(self, x, y):
        """Values at arbitrary points, zero outside the grid."""
        c = np.floor((np.asarray(x) - self.origin[0]) / self.h).astype(np.int64)
        r = np.floor((np.asarray(y) - self.origin[1]) / self.h).astype(np.int64)
        rows, cols = self.dims
        inside = (r >= 0) & (r < rows) & (c >= 0) & (c < cols)
        out = np.zeros(np.broadcast(c, r).shape)
        out[inside] = self.values[r[inside], c[inside]]
        return out

    def save(self, path, fmt="csv"):
        """
        Row-major values as CSV or little endian float64, plus a JSON
        sidecar ``path + '.json'`` with origin, h and dims.
        """
        try:
            if fmt == "csv":
                np.savetxt(path, self.values, delimiter=",", fmt="%.9g")
            elif fmt == "bin":
                self.values.astype("<f8").tofile(path)
            else:
                raise FormatError("Measures: unknown grid format {0}".format(fmt))
            with open(path + ".json", 'w') as json_file:
                json.dump({"origin": self.origin.tolist(), "h": self.h,
                           "dims": list(self.dims), "format": fmt}, json_file, indent=2)
                json_file.write('\n')
        except (IOError, OSError) as e:
            raise InputError("Measures: could not write grid {0}: {1}".format(path, e))
        logging.debug("Measures: saved {0} grid {1} to {2}".format(fmt, self.dims, path))

    @classmethod
    def load(cls, path):
        try:
            with open(path + ".json", 'r') as json_file:
                meta = json.load(json_file)
            rows, cols = meta["dims"]
            if meta.get("format", "csv") == "bin":
                values = np.fromfile(path, dtype="<f8")
            else:
                values = np.loadtxt(path, delimiter=",", ndmin=2)
            values = values.reshape(rows, cols)
        except (IOError, OSError) as e:
            raise InputError("Measures: could not read grid {0}: {1}".format(path, e))
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError("Measures: malformed grid {0}: {1}".format(path, e))
        return cls(meta["origin"], meta["h"], values)

    def __repr__(self):
        return "DensityGrid(dims=%s, h=%g, mass=%g)" % (self.dims, self.h, self.mass)


def _frame(bounds, h):
    """Grid frame aligned to multiples of h covering ``bounds``."""
    minx, miny, maxx, maxy = bounds
    origin = np.floor(np.array([minx, miny]) / h) * h
    cols = int(math.ceil((maxx - origin[0]) / h)) + 1
    rows = int(math.ceil((maxy - origin[1]) / h)) + 1
    return origin, rows, cols


def rasterize(shapes, densities, h=RASTER_H):
    """
    Sum of density * indicator over the given shapely polygons, sampled at
    cell centres.
    """
    if h <= 0:
        raise PreconditionError("Measures: raster step must be positive")
    shapes = list(shapes)
    if not shapes:
        return DensityGrid((0.0, 0.0), h, np.zeros((1, 1)))
    bounds = np.array([s.bounds for s in shapes])
    origin, rows, cols = _frame((bounds[:, 0].min(), bounds[:, 1].min(),
                                 bounds[:, 2].max(), bounds[:, 3].max()), h)
    values = np.zeros((rows, cols))
    for shape, rho in zip(shapes, densities):
        minx, miny, maxx, maxy = shape.bounds
        c0 = max(0, int(math.floor((minx - origin[0]) / h)))
        c1 = min(cols, int(math.ceil((maxx - origin[0]) / h)) + 1)
        r0 = max(0, int(math.floor((miny - origin[1]) / h)))
        r1 = min(rows, int(math.ceil((maxy - origin[1]) / h)) + 1)
        xs = origin[0] + h * (np.arange(c0, c1) + 0.5)
        ys = origin[1] + h * (np.arange(r0, r1) + 0.5)
        X, Y = np.meshgrid(xs, ys)
        inside = shapely.contains_xy(shape, X, Y)
        values[r0:r1, c0:c1] += np.where(inside, rho, 0.0)
    return DensityGrid(origin, h, values)


def mu_tilde(cfg, h=RASTER_H, segments=64):
    """
    Density 1/|V_trunc(x)| on every truncated cell, cells rescaled by
    1/sqrt(N); total mass one up to the raster error.
    """
    cells = truncated_cells(cfg, segments)
    scale = 1.0 / math.sqrt(len(cells))
    shapes = [Polygon(cell.vertices * scale) for cell in cells]
    grid = rasterize(shapes, [1.0 / cell.area for cell in cells], h)
    logging.debug("Measures: mu_tilde on {0} cells, mass {1:.6f}".format(len(cells), grid.mass))
    return grid


def mu_tilde_tilde(cfg, N=None, h=RASTER_H):
    """rho times the indicator of the rescaled union of lattice cells."""
    N = N or len(cfg)
    if not len(cfg):
        raise PreconditionError("Measures: empty configuration")
    return rasterize([h_set(cfg, N).to_shapely()], [RHO], h)


def _common(a, b):
    if a.h != b.h or not np.allclose(np.round((a.origin - b.origin) / a.h),
                                     (a.origin - b.origin) / a.h, atol=1e-6):
        # resample b at the cell centres of a frame aligned with a
        lo = np.minimum(a.origin, b.origin)
        hi = np.maximum(a.origin + a.h * np.array(a.dims[::-1]),
                        b.origin + b.h * np.array(b.dims[::-1]))
        origin = a.origin - np.ceil((a.origin - lo) / a.h) * a.h
        cols = int(math.ceil((hi[0] - origin[0]) / a.h))
        rows = int(math.ceil((hi[1] - origin[1]) / a.h))
        xs = origin[0] + a.h * (np.arange(cols) + 0.5)
        ys = origin[1] + a.h * (np.arange(rows) + 0.5)
        X, Y = np.meshgrid(xs, ys)
        logging.debug("Measures: resampling grid h={0} onto h={1}".format(b.h, a.h))
        return a.sample(X, Y), b.sample(X, Y)
    h = a.h
    offset_a = np.round(a.origin / h).astype(np.int64)
    offset_b = np.round(b.origin / h).astype(np.int64)
    lo = np.minimum(offset_a, offset_b)
    hi = np.maximum(offset_a + np.array(a.dims[::-1]), offset_b + np.array(b.dims[::-1]))
    rows, cols = int(hi[1] - lo[1]), int(hi[0] - lo[0])
    out = []
    for grid, offset in ((a, offset_a), (b, offset_b)):
        big = np.zeros((rows, cols))
        c0, r0 = offset - lo
        big[r0:r0 + grid.dims[0], c0:c0 + grid.dims[1]] = grid.values
        out.append(big)
    return out[0], out[1]


def l1_distance(a, b):
    va, vb = _common(a, b)
    if not (np.all(np.isfinite(va)) and np.all(np.isfinite(vb))):
        raise PreconditionError("Measures: grids are not comparable")
    return float(np.abs(va - vb).sum()) * a.h * a.h


def _hat_integrals(points, weights, centres, s):
    """Integrals of max(0, s - |x - c|) for every centre c."""
    out = np.zeros(len(centres))
    if not len(points):
        return out
    pairs = KDTree(centres).sparse_distance_matrix(
        KDTree(points), s, output_type="ndarray")
    np.add.at(out, pairs["i"], weights[pairs["j"]] * (s - pairs["v"]))
    return out


def bounded_lipschitz_distance(a, b, levels=BL_LEVELS):
    """
    Largest |int f da - int f db| over a fixed dictionary of test functions
    bounded by 1 and 1-Lipschitz: the constant 1 and hats
    max(0, s - |x - c|) for s = 1, 1/2, ... with centres spaced s/4. This is
    a lower bound of the bounded-Lipschitz distance.
    """
    pa, wa = a.weighted_points()
    pb, wb = b.weighted_points()
    best = abs(float(wa.sum()) - float(wb.sum()))
    both = np.concatenate((pa, pb))
    if not len(both):
        return best
    lo, hi = both.min(axis=0), both.max(axis=0)
    for level in range(levels):
        s = 0.5 ** level
        step = s / 4.0
        xs = np.arange(lo[0] - s, hi[0] + s + step, step)
        ys = np.arange(lo[1] - s, hi[1] + s + step, step)
        X, Y = np.meshgrid(xs, ys)
        centres = np.column_stack((X.ravel(), Y.ravel()))
        diff = _hat_integrals(pa, wa, centres, s) - _hat_integrals(pb, wb, centres, s)
        best = max(best, float(np.abs(diff).max()))
    return best


def mass_in_ball(m, center, R):
    if R <= 0:
        raise PreconditionError("Measures: ball radius must be positive")
    d = np.hypot(*(m.points - np.asarray(center, dtype=float)).T)
    return float(m.weights[d <= R].sum())
