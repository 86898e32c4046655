# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#

# Meta
__license__ = "AGPLv3"

import csv
import json
import logging
import math
from collections import namedtuple

import numpy as np
import shapely
from shapely import affinity

from errors import FormatError, InputError, PreconditionError
from geometry import PolygonSet, h_set
from groundstate import (hexagon_config, hexagon_radius, layer_bound,
                         lower_bound, spiral_config, sticky_energy,
                         upper_bound)
from lattice import SQRT3, LatticeConfig, diameter, embed
from measures import (BL_LEVELS, RASTER_H, bounded_lipschitz_distance,
                      empirical, l1_distance, mu_tilde, mu_tilde_tilde)
from surface import (WULFF_AREA, WulffShape, scale_to_area, shape_distance,
                     snap_polygon, surface_integral, wulff_set)

STUDIES = ("groundstate-scaling", "wulff-distance", "recovery", "mass-conservation",
           "measures")

#: Relative slack on trend checks; rows may wiggle by this much.
TREND_JITTER = 0.1

#: Constant c of the recovery gap check gap <= c (1/n + 1/sqrt(N)).
RECOVERY_C = 20.0

Study = namedtuple("Study", ["header", "rows", "failures"])


def log_spaced(nmin, nmax, points):
    """
    Up to ``points`` distinct integers from nmin to nmax, evenly spaced on a
    log scale, increasing.
    """
    if nmin < 1 or nmax < nmin or points < 1:
        raise PreconditionError(
            "Experiments: bad sweep nmin={0} nmax={1} points={2}".format(nmin, nmax, points))
    if points == 1:
        return [int(nmin)]
    return sorted(set(int(round(n)) for n in np.geomspace(nmin, nmax, points)))


def _decreasing(values, jitter=TREND_JITTER):
    """True if every value stays below (1 + jitter) times the one before."""
    return all(b <= a * (1.0 + jitter) for a, b in zip(values, values[1:]))


def groundstate_scaling(ns):
    rows, failures = [], []
    for N in ns:
        E = sticky_energy(spiral_config(N))
        if not lower_bound(N) <= E <= upper_bound(N):
            failures.append("N={0}: energy {1} outside [{2}, {3:.6f}]".format(
                N, E, lower_bound(N), upper_bound(N)))
        if E > layer_bound(N) + 1e-9:
            failures.append("N={0}: energy {1} above the layer bound {2:.6f}".format(
                N, E, layer_bound(N)))
        rows.append((N, E, (E + 6.0 * N) / math.sqrt(N), upper_bound(N), layer_bound(N)))
    header = ("N", "E", "scaled_excess", "upper_bound", "layer_bound")
    return Study(header, rows, failures)


def limit_shape():
    """The Wulff hexagon scaled to the area of one cell per atom."""
    return scale_to_area(wulff_set(samples=6), WULFF_AREA)


def wulff_distance(ns):
    w = limit_shape()
    rows = []
    for N in ns:
        match = shape_distance(h_set(spiral_config(N), N), w)
        rows.append((N, match.distance, match.rot))
    failures = []
    if not _decreasing([row[1] for row in rows]):
        failures.append("shape distance does not decrease along the sweep")
    return Study(("N", "shape_distance", "rotation"), rows, failures)


def _axial_box(bounds):
    minx, miny, maxx, maxy = bounds
    n0 = int(math.floor(miny * 2.0 / SQRT3)) - 1
    n1 = int(math.ceil(maxy * 2.0 / SQRT3)) + 1
    m0 = int(math.floor(minx - 0.5 * n1)) - 1
    m1 = int(math.ceil(maxx - 0.5 * n0)) + 1
    return m0, m1, n0, n1


def lattice_inside(P, factor):
    """Lattice sites x with x / factor in the closed polygon P."""
    geom = affinity.scale(P.to_shapely(), factor, factor, origin=(0, 0))
    m0, m1, n0, n1 = _axial_box(geom.bounds)
    m, n = np.meshgrid(np.arange(m0, m1 + 1), np.arange(n0, n1 + 1), indexing="ij")
    sites = np.column_stack((m.ravel(), n.ravel()))
    pts = embed(sites)
    keep = shapely.intersects_xy(geom, pts[:, 0], pts[:, 1])
    return LatticeConfig(sites[keep])


def adjust_count(cfg, N):
    """
    Bring ``cfg`` to exactly N sites. Missing sites are added as a
    parallelogram block placed 3 diameters to the right; surplus sites are
    taken off the top rows.
    """
    M = len(cfg)
    if M == N:
        return cfg
    if M > N:
        order = np.lexsort((-cfg.sites[:, 0], -cfg.sites[:, 1]))
        return LatticeConfig(cfg.sites[order[M - N:]])
    k = N - M
    width = int(math.ceil(math.sqrt(k)))
    idx = np.arange(k)
    block = np.column_stack((idx % width, idx // width))
    if not M:
        return LatticeConfig(block)
    # leftmost block point at least 3 diameters plus 2 right of the config
    n_min = int(cfg.sites[:, 1].min())
    max_x = float(embed(cfg.sites)[:, 0].max())
    start = int(math.ceil(max_x + 3.0 * diameter(cfg) + 2.0 - 0.5 * n_min))
    block += np.array([start, n_min])
    return LatticeConfig(np.concatenate((cfg.sites, block)))


def recovery_config(P, N, n):
    """
    L intersected with sqrt(N) P_n, P_n being P with corners snapped to
    (1/n)L, then brought to exactly N sites.

    :returns: (adjusted config, unadjusted config)
    """
    if N < 1:
        raise PreconditionError("Experiments: N must be positive")
    Pn = snap_polygon(P, n)
    raw = lattice_inside(Pn, math.sqrt(N))
    logging.debug("Experiments: recovery n={0} N={1} gives M={2}".format(n, N, len(raw)))
    return adjust_count(raw, N), raw


def _as_polygon_set(P):
    return P.to_polygon_set() if isinstance(P, WulffShape) else P


def recovery(P, ns, n=100):
    P = _as_polygon_set(P)
    integral = surface_integral(P)
    rows = []
    for N in ns:
        cfg, raw = recovery_config(P, N, n)
        M = len(raw)
        E_M = sticky_energy(raw)
        E_N = sticky_energy(cfg)
        excess_M = (E_M + 6.0 * M) / math.sqrt(N)
        excess_N = (E_N + 6.0 * N) / math.sqrt(N)
        rows.append((n, N, M, excess_M, excess_N, integral, abs(excess_M - integral)))
    failures = []
    for row in rows:
        N, gap = row[1], row[-1]
        allowed = RECOVERY_C * (1.0 / n + 1.0 / math.sqrt(N))
        if gap > allowed:
            failures.append("N={0}: recovery gap {1:.6f} over {2:.6f}".format(N, gap, allowed))
    header = ("n", "N", "M", "scaled_excess_M", "scaled_excess_N", "surface_integral", "gap")
    return Study(header, rows, failures)


def mass_conservation(ns):
    rows = []
    for N in ns:
        cfg = spiral_config(N)
        mu = empirical(cfg).centered()
        rows.append((N, mu.support_radius(), diameter(cfg) / math.sqrt(N), mu.mass))
    failures = [
        "N={0}: mass {1} is not 1".format(row[0], row[3])
        for row in rows if abs(row[3] - 1.0) > 1e-9]
    radii = [row[1] for row in rows]
    if radii and max(radii) > 2.0 * min(radii) + 1.0:
        failures.append("support radius does not stabilize")
    return Study(("N", "support_radius", "scaled_diameter", "mass"), rows, failures)


def measures_study(ns, h=RASTER_H, levels=BL_LEVELS):
    """
    Distances between the empirical measure and the two auxiliary densities
    along hexagons, taking for every N the largest hexagon not above it.
    """
    rows = []
    for N in ns:
        cfg = hexagon_config(hexagon_radius(N))
        size = len(cfg)
        smeared = mu_tilde(cfg, h)
        cells = mu_tilde_tilde(cfg, size, h)
        rows.append((size, smeared.mass, cells.mass, l1_distance(smeared, cells),
                     bounded_lipschitz_distance(empirical(cfg), cells, levels)))
    failures = []
    if not _decreasing([row[3] for row in rows]):
        failures.append("L1 distance of the auxiliary densities does not decrease")
    header = ("N", "mass_mu_tilde", "mass_mu_tilde_tilde", "l1", "bounded_lipschitz")
    return Study(header, rows, failures)


def run_study(name, ns, polygon=None, n_scale=100, h=RASTER_H, levels=BL_LEVELS):
    if name == "groundstate-scaling":
        return groundstate_scaling(ns)
    if name == "wulff-distance":
        return wulff_distance(ns)
    if name == "recovery":
        return recovery(polygon if polygon is not None else limit_shape(), ns, n_scale)
    if name == "mass-conservation":
        return mass_conservation(ns)
    if name == "measures":
        return measures_study(ns, h, levels)
    raise PreconditionError("Experiments: unknown study {0}".format(name))


def format_cell(value):
    if isinstance(value, (float, np.floating)):
        return "%.9g" % value
    return str(value)


def write_csv(path, study):
    try:
        with open(path, 'w', newline='') as csv_file:
            writer = csv.writer(csv_file, lineterminator='\n')
            writer.writerow(study.header)
            for row in study.rows:
                writer.writerow([format_cell(v) for v in row])
    except (IOError, OSError) as e:
        raise InputError("Experiments: could not write {0}: {1}".format(path, e))
    logging.info("Experiments: wrote {0} rows to {1}".format(len(study.rows), path))


def load_polygon(path):
    """A polygon file in PolygonSet JSON."""
    try:
        with open(path, 'r') as json_file:
            data = json.load(json_file)
    except (IOError, OSError) as e:
        raise InputError("Experiments: could not read polygon {0}: {1}".format(path, e))
    except ValueError as e:
        raise FormatError("Experiments: {0} is not valid JSON: {1}".format(path, e))
    return PolygonSet.from_json(data)
