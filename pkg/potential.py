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

from errors import FormatError, InputError, PreconditionError
from lattice import (LatticeConfig, as_points, bond_count, neighbor_counts,
                     pairs_within)

STICKY = "sticky"
SOFT = "soft"

INFINITY = math.inf

#: Half width of the window around r = 1 in which the sticky disc
#: potential counts a pair as bonded, for off-lattice inputs.
BOND_WINDOW = 1e-9

DEFAULT_EPS = 0.05

SIN_PI_7 = math.sin(math.pi / 7.0)

#: Largest admissible beta/alpha: 1 / (2 sin(pi/7)) = 1.152382...
H3_THRESHOLD = 1.0 / (2.0 * SIN_PI_7)

#: Neighbor windows [1-eps, 1+eps] need 2(1+eps) sin(pi/7) < 1-eps.
EPS_LIMIT = (1.0 - 2.0 * SIN_PI_7) / (1.0 + 2.0 * SIN_PI_7)

HypothesisReport = namedtuple("HypothesisReport", [
    "h1_ok",
    "h2_ok",
    "h3_ok",
    "beta_over_alpha",
    "threshold",
])

EnergyBreakdown = namedtuple("EnergyBreakdown", [
    "total",
    "local",
    "neighbor_counts",
])


class PairPotential(object):
    """
    Radial pair interaction V with a hard core below ``alpha``, no
    interaction beyond ``beta`` and the well bottom V(1) = -1.

    Soft profiles are continuous piecewise-linear tables of ``(r, V)``
    knots; the table has to start at ``alpha``, end at ``beta`` and carry
    a knot at r = 1. The sticky disc flavor is the special case
    alpha = beta = 1 with a single knot.
    """

    def __init__(self, alpha, beta, knots, flavor=SOFT):
        self.flavor = flavor
        self.alpha = float(alpha)
        self.beta = float(beta)
        try:
            table = np.array(knots, dtype=float).reshape(-1, 2)
        except (TypeError, ValueError) as e:
            raise FormatError("Potential: malformed knot table: {0}".format(e))
        self.radii = table[:, 0]
        self.values = table[:, 1]
        self._check_table()

    @classmethod
    def sticky(cls):
        return cls(1.0, 1.0, [(1.0, -1.0)], flavor=STICKY)

    def _check_table(self):
        if self.flavor not in (STICKY, SOFT):
            raise FormatError(
                "Potential: unknown flavor {0}".format(self.flavor))
        if not len(self.radii):
            raise FormatError("Potential: empty knot table")
        if not np.all(np.isfinite(self.radii)) or not np.all(np.isfinite(self.values)):
            raise FormatError("Potential: knot table has non-finite entries")
        if np.any(np.diff(self.radii) <= 0):
            # a repeated radius is a jump in the profile
            raise FormatError(
                "Potential: knot radii must increase strictly (profile not continuous)")
        if self.radii[0] != self.alpha or self.radii[-1] != self.beta:
            raise FormatError(
                "Potential: knot table must run from alpha={0} to beta={1}".format(
                    self.alpha, self.beta))
        if not np.any(self.radii == 1.0):
            raise FormatError("Potential: knot table has no knot at r=1")
        if self.flavor == STICKY and (self.alpha != 1.0 or self.beta != 1.0):
            raise FormatError("Potential: sticky disc needs alpha=beta=1")

    @property
    def well_value(self):
        return float(self.values[self.radii == 1.0][0])

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.flavor == STICKY:
            return np.where(r < 1.0 - BOND_WINDOW, INFINITY,
                            np.where(r <= 1.0 + BOND_WINDOW, -1.0, 0.0))
        inside = np.interp(r, self.radii, self.values)
        return np.where(r < self.alpha, INFINITY,
                        np.where(r > self.beta, 0.0, inside))

    def __repr__(self):
        return "PairPotential(flavor=%s, alpha=%g, beta=%g)" % (
            self.flavor, self.alpha, self.beta)

    def to_json(self):
        if self.flavor == STICKY:
            return {"flavor": STICKY}
        return {"flavor": SOFT, "alpha": self.alpha, "beta": self.beta,
                "knots": np.column_stack((self.radii, self.values)).tolist()}

    @classmethod
    def from_json(cls, data):
        try:
            flavor = data.get("flavor", SOFT)
            if flavor == STICKY:
                return cls.sticky()
            return cls(data["alpha"], data["beta"], data["knots"], flavor=flavor)
        except (AttributeError, KeyError, TypeError) as e:
            raise FormatError("Potential: malformed potential: {0}".format(e))

    @classmethod
    def load(cls, path):
        try:
            with open(path, 'r') as json_file:
                data = json.load(json_file)
        except (IOError, OSError) as e:
            raise InputError(
                "Potential: could not read {0}: {1}".format(path, e))
        except ValueError as e:
            raise FormatError(
                "Potential: {0} is not valid JSON: {1}".format(path, e))
        logging.debug("Potential: loaded {0} profile from {1}".format(
            data.get("flavor", SOFT) if isinstance(data, dict) else "?", path))
        return cls.from_json(data)


def sticky_disc(r):
    if r < 1.0 - BOND_WINDOW:
        return INFINITY
    if r <= 1.0 + BOND_WINDOW:
        return -1.0
    return 0.0


def validate_hypotheses(V):
    off_well = V.values[V.radii != 1.0]
    h1_ok = V.well_value == -1.0 and bool(np.all(off_well > -1.0))
    h2_ok = 0.0 < V.alpha <= 1.0 <= V.beta
    ratio = V.beta / V.alpha
    # 2 beta sin(pi/7) < alpha: seven points at mutual distance >= alpha
    # never fit in the beta ball, and a regular heptagon fits otherwise
    h3_ok = 2.0 * V.beta * SIN_PI_7 < V.alpha
    report = HypothesisReport(h1_ok, h2_ok, h3_ok, ratio, H3_THRESHOLD)
    logging.debug("Potential: hypotheses for {0}: {1}".format(V, report))
    return report


def check_eps(eps):
    if not 0.0 < eps < 1.0 or not 2.0 * (1.0 + eps) * SIN_PI_7 < 1.0 - eps:
        raise PreconditionError(
            "Potential: neighbor window eps={0} is not admissible (needs eps < {1:.6f})".format(
                eps, EPS_LIMIT))


def energy_breakdown(cfg, V, eps=DEFAULT_EPS):
    """
    Total energy, local energies E_loc and neighbor counts #N(x) of every
    atom. Pairs are found with a cell grid, each unordered pair once and
    credited to both of its atoms.

    :param cfg: LatticeConfig or PointConfig.
    :param V: :class:`PairPotential`.
    :param eps: neighbor window half width.
    """
    check_eps(eps)
    if isinstance(cfg, LatticeConfig) and V.flavor == STICKY:
        counts = neighbor_counts(cfg)
        local = -counts.astype(float)
        return EnergyBreakdown(-2.0 * bond_count(cfg), local, counts)
    pts = as_points(cfg)
    local = np.zeros(len(pts))
    counts = np.zeros(len(pts), dtype=np.int64)
    i, j, d = pairs_within(pts, max(V.beta, 1.0 + eps))
    v = V(d)
    np.add.at(local, i, v)
    np.add.at(local, j, v)
    near = np.abs(d - 1.0) <= eps
    np.add.at(counts, i[near], 1)
    np.add.at(counts, j[near], 1)
    return EnergyBreakdown(float(local.sum()), local, counts)


def energy(cfg, V):
    """
    E = sum over ordered pairs i != j of V(|x_i - x_j|); infinite as soon
    as two points are closer than the hard core.
    """
    if isinstance(cfg, LatticeConfig) and V.flavor == STICKY:
        return -2.0 * bond_count(cfg)
    pts = as_points(cfg)
    _, _, d = pairs_within(pts, V.beta)
    return 2.0 * float(V(d).sum())


def _index_check(i, pts):
    if not 0 <= i < len(pts):
        raise PreconditionError("Potential: atom index {0} out of range".format(i))


def local_energy(i, cfg, V):
    pts = as_points(cfg)
    _index_check(i, pts)
    d = np.hypot(*(np.delete(pts, i, axis=0) - pts[i]).T)
    return float(V(d).sum())


def neighbor_set(i, cfg, eps=DEFAULT_EPS):
    check_eps(eps)
    pts = as_points(cfg)
    _index_check(i, pts)
    d = np.hypot(*(pts - pts[i]).T)
    near = np.flatnonzero((d >= 1.0 - eps) & (d <= 1.0 + eps))
    return set(int(j) for j in near if j != i)


def energy_gap(V, eps=DEFAULT_EPS):
    """
    Delta = min over r outside (1-eps, 1+eps) of V(r), minus min V.
    """
    check_eps(eps)
    if V.flavor == STICKY:
        outside = [0.0]
    else:
        far = (V.radii <= 1.0 - eps) | (V.radii >= 1.0 + eps)
        outside = V.values[far].tolist()
        for r in (1.0 - eps, 1.0 + eps):
            if V.alpha <= r <= V.beta:
                outside.append(float(np.interp(r, V.radii, V.values)))
        # V vanishes beyond beta
        outside.append(0.0)
    gap = min(outside) - float(V.values.min())
    if gap <= 0:
        raise PreconditionError(
            "Potential: profile violates H1, energy gap {0} <= 0".format(gap))
    return gap
