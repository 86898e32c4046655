# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#

# Meta
__license__ = "AGPLv3"

import json
import logging
import math
from collections import namedtuple

import numpy as np
import shapely
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as csgraph_components

from errors import FormatError, InputError, PreconditionError

SQRT3 = math.sqrt(3.0)

#: Basis of the triangular lattice, e1 = (1, 0), e2 = (1/2, sqrt(3)/2).
E1 = np.array([1.0, 0.0])
E2 = np.array([0.5, SQRT3 / 2.0])

#: Axial offsets of the 6 lattice neighbors, counterclockwise from (m+1, n).
NEIGHBOR_OFFSETS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))

#: One offset per unordered bond direction.
BOND_OFFSETS = ((1, 0), (0, 1), (-1, 1))

#: Relative slack applied to distance cutoffs, so that lattice distances
#: computed in floating point still count as exactly 1.
PAIR_TOLERANCE = 1e-9

# Cell offsets visited by the cell grid, each unordered cell pair once
_HALF_SHELL = ((0, 0), (1, -1), (1, 0), (1, 1), (0, 1))

_Site = namedtuple("_Site", ["m", "n"])


class LatticeSite(_Site):
    """
    A site m*e1 + n*e2 of the triangular lattice, stored by its
    integer axial coordinates.
    """
    __slots__ = ()

    def __new__(cls, m, n):
        return super(LatticeSite, cls).__new__(cls, int(m), int(n))

    def to_point(self):
        return site_to_point(self)

    def neighbors(self):
        return lattice_neighbors(self)


def site_to_point(s):
    m, n = s
    return (m + 0.5 * n, SQRT3 / 2.0 * n)


def lattice_neighbors(s):
    m, n = s
    return [LatticeSite(m + dm, n + dn) for dm, dn in NEIGHBOR_OFFSETS]


def embed(sites):
    """Vectorized :func:`site_to_point` over an (N, 2) integer array."""
    sites = np.asarray(sites, dtype=np.int64).reshape(-1, 2)
    return np.column_stack((sites[:, 0] + 0.5 * sites[:, 1],
                            SQRT3 / 2.0 * sites[:, 1]))


class SiteIndex(object):
    """
    Sorted integer keys of a site array, answering membership queries for
    whole arrays of sites at once.

    :param sites: (N, 2) integer array, N >= 1.
    """

    def __init__(self, sites):
        self.m0 = int(sites[:, 0].min()) - 2
        self.n0 = int(sites[:, 1].min()) - 2
        self.width = int(sites[:, 1].max()) - self.n0 + 3
        self.keys = np.sort(self.encode(sites))

    def encode(self, sites):
        return (sites[:, 0] - self.m0) * self.width + (sites[:, 1] - self.n0)

    def contains(self, sites):
        sites = np.asarray(sites, dtype=np.int64).reshape(-1, 2)
        column = sites[:, 1] - self.n0
        in_band = (column >= 0) & (column < self.width)
        keys = self.encode(sites)
        pos = np.clip(np.searchsorted(self.keys, keys), 0, len(self.keys) - 1)
        return in_band & (self.keys[pos] == keys)


class LatticeConfig(object):
    """
    Finite set of triangular-lattice sites, kept as an immutable (N, 2)
    integer array in lexicographic (m, n) order.
    """

    def __init__(self, sites=()):
        if isinstance(sites, (set, frozenset)):
            sites = sorted(sites)
        arr = np.array(sites, dtype=np.int64).reshape(-1, 2)
        arr = arr[np.lexsort((arr[:, 1], arr[:, 0]))]
        if len(arr) > 1 and np.any(np.all(arr[1:] == arr[:-1], axis=1)):
            raise FormatError("Lattice: duplicate sites in configuration")
        arr.setflags(write=False)
        self._sites = arr
        self._index = None

    @property
    def sites(self):
        return self._sites

    @property
    def index(self):
        if self._index is None and len(self._sites):
            self._index = SiteIndex(self._sites)
        return self._index

    def __len__(self):
        return len(self._sites)

    def __iter__(self):
        for m, n in self._sites:
            yield LatticeSite(m, n)

    def __contains__(self, site):
        if not len(self._sites):
            return False
        return bool(self.index.contains([tuple(site)])[0])

    def __eq__(self, other):
        return (isinstance(other, LatticeConfig) and
                np.array_equal(self._sites, other._sites))

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "LatticeConfig(N=%d)" % len(self)

    def contains_sites(self, sites):
        """Boolean mask telling which rows of ``sites`` are occupied."""
        sites = np.asarray(sites, dtype=np.int64).reshape(-1, 2)
        if not len(self._sites):
            return np.zeros(len(sites), dtype=bool)
        return self.index.contains(sites)

    def translated(self, dm, dn):
        return LatticeConfig(self._sites + np.array([dm, dn]))

    def union(self, other):
        return LatticeConfig(np.vstack((self._sites, other.sites)))

    def to_points(self):
        return PointConfig(embed(self._sites))

    def to_json(self):
        return {"sites": self._sites.tolist()}

    @classmethod
    def from_json(cls, data):
        try:
            return cls([(int(m), int(n)) for m, n in data["sites"]])
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(
                "Lattice: malformed lattice configuration: {0}".format(e))


class PointConfig(object):
    """
    Finite list of planar points, in length units where the potential
    well sits at r = 1. Kept as an immutable (N, 2) float array.
    """

    def __init__(self, points=()):
        arr = np.array(points, dtype=float).reshape(-1, 2)
        arr.setflags(write=False)
        self._points = arr

    @property
    def points(self):
        return self._points

    def __len__(self):
        return len(self._points)

    def __repr__(self):
        return "PointConfig(N=%d)" % len(self)

    def transformed(self, angle=0.0, shift=(0.0, 0.0), reflect=False):
        """Rigid motion: optional reflection in the x axis, rotation, shift."""
        pts = np.array(self._points)
        if reflect:
            pts[:, 1] = -pts[:, 1]
        c, s = math.cos(angle), math.sin(angle)
        pts = pts.dot(np.array([[c, s], [-s, c]])) + np.asarray(shift)
        return PointConfig(pts)

    def permuted(self, order):
        return PointConfig(self._points[np.asarray(order)])

    def to_json(self):
        return {"points": self._points.tolist()}

    @classmethod
    def from_json(cls, data):
        try:
            return cls([(float(x), float(y)) for x, y in data["points"]])
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(
                "Lattice: malformed point configuration: {0}".format(e))


def load_configuration(path):
    """
    Read a lattice ({"sites": ...}) or point ({"points": ...}) config file.
    """
    try:
        with open(path, 'r') as json_file:
            data = json.load(json_file)
    except (IOError, OSError) as e:
        raise InputError(
            "Lattice: could not read configuration {0}: {1}".format(path, e))
    except ValueError as e:
        raise FormatError(
            "Lattice: configuration {0} is not valid JSON: {1}".format(path, e))
    if not isinstance(data, dict):
        raise FormatError("Lattice: configuration {0} is not an object".format(path))
    logging.debug("Lattice: loading configuration from {0}".format(path))
    if "sites" in data:
        return LatticeConfig.from_json(data)
    return PointConfig.from_json(data)


def save_configuration(cfg, path):
    try:
        with open(path, 'w') as json_file:
            json.dump(cfg.to_json(), json_file)
            json_file.write('\n')
    except (IOError, OSError) as e:
        raise InputError(
            "Lattice: could not write configuration {0}: {1}".format(path, e))


def as_points(cfg):
    """Planar coordinates of a LatticeConfig, PointConfig or raw array."""
    if isinstance(cfg, LatticeConfig):
        return embed(cfg.sites)
    if isinstance(cfg, PointConfig):
        return cfg.points
    return np.asarray(cfg, dtype=float).reshape(-1, 2)


def neighbor_counts(cfg):
    """Number of occupied lattice neighbors of every site of ``cfg``."""
    counts = np.zeros(len(cfg), dtype=np.int64)
    if not len(cfg):
        return counts
    for offset in NEIGHBOR_OFFSETS:
        counts += cfg.contains_sites(cfg.sites + np.array(offset))
    return counts


def bond_count(cfg):
    if not len(cfg):
        return 0
    return int(sum(np.count_nonzero(cfg.contains_sites(cfg.sites + np.array(o)))
                   for o in BOND_OFFSETS))


def boundary_atoms(cfg):
    return LatticeConfig(cfg.sites[neighbor_counts(cfg) < 6])


def interior_atoms(cfg):
    return LatticeConfig(cfg.sites[neighbor_counts(cfg) == 6])


def pairs_within(points, cutoff):
    """
    All unordered index pairs (i < j in no particular order) at distance
    <= cutoff, found with a uniform cell grid of side ``cutoff``, so the
    cost is linear in N for configurations of bounded density.

    :returns: arrays ``(i, j, d)`` of equal length.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n < 2:
        return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64),
                np.empty(0))
    if cutoff <= 0:
        raise PreconditionError("Lattice: pair cutoff must be positive")
    reach = cutoff * (1.0 + PAIR_TOLERANCE)
    cells = np.floor((pts - pts.min(axis=0)) / reach).astype(np.int64)
    width = int(cells[:, 1].max()) + 3
    keys = cells[:, 0] * width + cells[:, 1] + 1
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    firsts, seconds = [], []
    for dx, dy in _HALF_SHELL:
        target = keys + dx * width + dy
        lo = np.searchsorted(sorted_keys, target, side="left")
        hi = np.searchsorted(sorted_keys, target, side="right")
        counts = hi - lo
        total = int(counts.sum())
        if total == 0:
            continue
        src = np.repeat(np.arange(n), counts)
        starts = np.repeat(lo - (np.cumsum(counts) - counts), counts)
        dst = order[starts + np.arange(total)]
        if (dx, dy) == (0, 0):
            keep = dst > src
            src, dst = src[keep], dst[keep]
        firsts.append(src)
        seconds.append(dst)
    if not firsts:
        return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64),
                np.empty(0))
    i = np.concatenate(firsts)
    j = np.concatenate(seconds)
    d = np.hypot(pts[i, 0] - pts[j, 0], pts[i, 1] - pts[j, 1])
    keep = d <= reach
    return i[keep], j[keep], d[keep]


def _component_labels(pts, beta):
    n = len(pts)
    i, j, _ = pairs_within(pts, beta)
    graph = coo_matrix((np.ones(len(i)), (i, j)), shape=(n, n))
    return csgraph_components(graph, directed=False)


def is_connected(cfg, beta):
    if beta <= 0:
        raise PreconditionError("Lattice: beta must be positive")
    pts = as_points(cfg)
    if len(pts) <= 1:
        return True
    count, _ = _component_labels(pts, beta)
    return count == 1


def connected_components(cfg, beta):
    """
    Components of the graph joining points at distance <= beta, as lists
    of indices ordered by their smallest member.
    """
    if beta <= 0:
        raise PreconditionError("Lattice: beta must be positive")
    pts = as_points(cfg)
    if not len(pts):
        return []
    count, labels = _component_labels(pts, beta)
    parts = [np.flatnonzero(labels == c).tolist() for c in range(count)]
    return sorted(parts, key=lambda part: part[0])


def diameter(cfg):
    pts = as_points(cfg)
    if not len(pts):
        raise PreconditionError("Lattice: diameter of an empty configuration")
    if len(pts) == 1:
        return 0.0
    # the farthest pair sits on the convex hull
    hull = shapely.convex_hull(shapely.multipoints(pts))
    if hull.geom_type == "Polygon":
        corners = np.asarray(hull.exterior.coords)
    else:
        corners = np.asarray(hull.coords)
    deltas = corners[:, None, :] - corners[None, :, :]
    return float(np.sqrt((deltas ** 2).sum(axis=-1)).max())


def perturbed_points(cfg, amplitude, seed=None):
    """
    Embedded configuration with every point moved by at most ``amplitude``
    in a uniformly random direction; deterministic for a given seed.
    """
    rng = np.random.default_rng(seed)
    pts = as_points(cfg)
    angle = rng.uniform(0.0, 2.0 * math.pi, len(pts))
    radius = amplitude * np.sqrt(rng.uniform(0.0, 1.0, len(pts)))
    shift = np.column_stack((radius * np.cos(angle), radius * np.sin(angle)))
    return PointConfig(pts + shift)
