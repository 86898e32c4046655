# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#

# Meta
__license__ = "AGPLv3"

import logging
import math
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from errors import PreconditionError
from lattice import (BOND_OFFSETS, NEIGHBOR_OFFSETS, SQRT3, LatticeConfig,
                     PointConfig, bond_count, embed, is_connected)
from potential import STICKY, energy

#: Largest N the exhaustive oracle accepts unless told otherwise.
ORACLE_CAP = 10

SearchResult = namedtuple("SearchResult", ["config", "energy"])


def centered_count(R):
    """Number of sites 3R^2 + 3R + 1 of the hexagon of radius R."""
    return 3 * R * R + 3 * R + 1


def hexagon_radius(N):
    """Largest R with centered_count(R) <= N."""
    if N < 1:
        raise PreconditionError("GroundState: N must be positive, got {0}".format(N))
    # 12N - 3 >= (6R + 3)^2
    return (math.isqrt(12 * N - 3) - 3) // 6


def hexagon_config(R):
    if R < 0:
        raise PreconditionError("GroundState: hexagon radius must be >= 0")
    span = np.arange(-R, R + 1)
    m, n = np.meshgrid(span, span, indexing="ij")
    keep = np.abs(m + n) <= R
    return LatticeConfig(np.column_stack((m[keep], n[keep])))


def _ring_sites(r, k):
    """
    First k sites of the ring at distance r, walked counterclockwise
    from the corner (0, -r).
    """
    sites = []
    m, n = 0, -r
    for dm, dn in NEIGHBOR_OFFSETS:
        for _ in range(r):
            if len(sites) == k:
                return sites
            m, n = m + dm, n + dn
            sites.append((m, n))
    return sites


def spiral_config(N):
    """
    Hexagon h_R plus a partial layer of k = N - |h_R| atoms on the next
    ring. Apart from the two ends and at most five corners, every layer
    atom has four neighbors.
    """
    R = hexagon_radius(N)
    core = hexagon_config(R)
    k = N - centered_count(R)
    if not k:
        return core
    layer = np.array(_ring_sites(R + 1, k), dtype=np.int64)
    return LatticeConfig(np.concatenate((core.sites, layer)))


def centered_hexagon_energy(N):
    if N < 1:
        raise PreconditionError("GroundState: N must be positive, got {0}".format(N))
    root = math.isqrt(12 * N - 3)
    if root * root != 12 * N - 3:
        raise PreconditionError(
            "GroundState: {0} is not a centered hexagonal number".format(N))
    return -6 * N + 2 * root


def upper_bound(N):
    return -6.0 * N + 4.0 * SQRT3 * math.sqrt(N) + 12.0


def lower_bound(N):
    """Every atom has at most six neighbors, each worth -1."""
    return -6.0 * N


def layer_bound(N):
    """
    Energy bound of the hexagon h_R with a partial layer of k atoms, before
    the square root is relaxed to sqrt(12N).
    """
    R = hexagon_radius(N)
    core = centered_count(R)
    k = N - core
    if k == 0:
        return float(centered_hexagon_energy(N))
    if k == 1:
        return float(centered_hexagon_energy(core) - 4)
    return -6.0 * N + 2.0 * math.sqrt(12 * core - 3) + 12.0


def sticky_energy(cfg):
    return -2 * bond_count(cfg)


def sticky_ground_energy(N):
    """
    -2 * floor(3N - sqrt(12N - 3)), with the floor taken in integer
    arithmetic as 3N - ceil(sqrt(12N - 3)).
    """
    if N < 1:
        raise PreconditionError("GroundState: N must be positive, got {0}".format(N))
    x = 12 * N - 3
    root = math.isqrt(x)
    if root * root < x:
        root += 1
    return -2 * (3 * N - root)


# Exhaustive oracle
#
# Connected site sets are grown one site at a time and kept up to translation
# as frozensets of (m, n) with min m = min n = 0.

def _canonical(cells):
    m0 = min(m for m, _ in cells)
    n0 = min(n for _, n in cells)
    return frozenset((m - m0, n - n0) for m, n in cells)


def _perimeter(cells):
    out = set()
    for m, n in cells:
        for dm, dn in NEIGHBOR_OFFSETS:
            site = (m + dm, n + dn)
            if site not in cells:
                out.add(site)
    return out


def _bonds(cells):
    return sum(1 for m, n in cells for dm, dn in BOND_OFFSETS
               if (m + dm, n + dn) in cells)


def _contacts(site, cells):
    m, n = site
    return sum(1 for dm, dn in NEIGHBOR_OFFSETS if (m + dm, n + dn) in cells)


def _best_extension(parents):
    """Best (bonds, parent, site) over all one-site extensions."""
    best = (-1, None, None)
    for parent in parents:
        base = _bonds(parent)
        for site in sorted(_perimeter(parent)):
            b = base + _contacts(site, parent)
            if b > best[0]:
                best = (b, parent, site)
    return best


def _chunks(items, count):
    size = max(1, -(-len(items) // count))
    return [items[i:i + size] for i in range(0, len(items), size)]


def brute_force_max_bonds(N, cap=ORACLE_CAP, workers=None):
    """
    Maximum bond count over all connected N-site subsets of the lattice,
    together with one maximizer.

    :param cap: hard upper limit on N.
    :param workers: number of processes sharing the last growth step.
    """
    if N < 1:
        raise PreconditionError("Oracle: N must be positive, got {0}".format(N))
    if N > cap:
        raise PreconditionError("Oracle: N={0} is over the cap {1}".format(N, cap))
    level = {frozenset([(0, 0)])}
    if N == 1:
        return 0, LatticeConfig([(0, 0)])
    for size in range(2, N):
        level = {_canonical(parent | {site})
                 for parent in level for site in _perimeter(parent)}
        logging.debug("Oracle: {0} connected sets of size {1}".format(len(level), size))
    parents = sorted(level, key=sorted)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_best_extension, _chunks(parents, workers)))
        best = max(results, key=lambda result: result[0])
    else:
        best = _best_extension(parents)
    bonds, parent, site = best
    logging.info("Oracle: b*({0}) = {1}".format(N, bonds))
    return bonds, LatticeConfig(_canonical(parent | {site}))


# Search

class _Perimeter(object):
    """Empty neighbor sites of a growing set, with O(1) random picks."""

    def __init__(self):
        self.items = []
        self.where = {}

    def add(self, site):
        if site not in self.where:
            self.where[site] = len(self.items)
            self.items.append(site)

    def discard(self, site):
        pos = self.where.pop(site, None)
        if pos is None:
            return
        last = self.items.pop()
        if pos < len(self.items):
            self.items[pos] = last
            self.where[last] = pos


def random_connected_config(N, seed=None):
    """
    Random connected N-site configuration grown from the origin by adding
    uniformly chosen perimeter sites; deterministic for a given seed.
    """
    if N < 1:
        raise PreconditionError("GroundState: N must be positive, got {0}".format(N))
    rng = np.random.default_rng(seed)
    occupied = set()
    perimeter = _Perimeter()
    site = (0, 0)
    for _ in range(N):
        occupied.add(site)
        perimeter.discard(site)
        m, n = site
        for dm, dn in NEIGHBOR_OFFSETS:
            nb = (m + dm, n + dn)
            if nb not in occupied:
                perimeter.add(nb)
        site = perimeter.items[int(rng.integers(len(perimeter.items)))]
    return LatticeConfig(sorted(occupied))


def _jitter_scale(V):
    if V.flavor == STICKY:
        return 0.0
    return max(0.0, min(V.beta - 1.0, 1.0 - V.alpha) / 4.0)


def _state_energy(sites, jitter, V):
    if not jitter.any():
        return energy(LatticeConfig(sites), V)
    return energy(PointConfig(embed(sites) + jitter), V)


def _relocate(sites, rng):
    """Move one boundary atom to an empty perimeter site."""
    cells = set(map(tuple, sites.tolist()))
    boundary = [i for i, (m, n) in enumerate(sites.tolist())
                if _contacts((m, n), cells) < 6]
    i = boundary[int(rng.integers(len(boundary)))]
    removed = tuple(sites[i].tolist())
    cells.discard(removed)
    spots = sorted(site for site in _perimeter(cells) if site != removed)
    if not spots:
        return None
    target = spots[int(rng.integers(len(spots)))]
    moved = sites.copy()
    moved[i] = target
    return i, moved


def stochastic_search(N, V, seed=None, steps=2000, temperature=0.5, start=None):
    """
    Seeded basin hopping over connected lattice sets: relocation moves of
    boundary atoms, plus small off-lattice jitter for soft potentials,
    accepted with the Metropolis rule at ``temperature``.

    :param start: optional LatticeConfig of N sites, else a random animal.
    :returns: :class:`SearchResult` with the best PointConfig seen and its energy.
    """
    if N < 1:
        raise PreconditionError("GroundState: N must be positive, got {0}".format(N))
    if temperature <= 0:
        raise PreconditionError("GroundState: temperature must be positive")
    rng = np.random.default_rng(seed)
    if start is None:
        start = random_connected_config(N, seed=rng.integers(2 ** 32))
    if len(start) != N:
        raise PreconditionError("GroundState: start configuration has the wrong size")
    sites = np.array(start.sites)
    jitter = np.zeros((N, 2))
    scale = _jitter_scale(V)
    current = _state_energy(sites, jitter, V)
    best = (current, sites.copy(), jitter.copy())
    accepted = 0
    for _ in range(steps):
        new_sites, new_jitter = sites, jitter
        if N > 1 and (scale == 0.0 or rng.random() < 0.5):
            move = _relocate(sites, rng)
            if move is None:
                continue
            i, new_sites = move
            if not is_connected(LatticeConfig(new_sites), 1.0):
                continue
            new_jitter = jitter.copy()
            new_jitter[i] = 0.0
        elif scale > 0.0:
            i = int(rng.integers(N))
            new_jitter = jitter.copy()
            new_jitter[i] += rng.uniform(-scale, scale, 2)
            norm = np.hypot(*new_jitter[i])
            if norm > scale:
                new_jitter[i] *= scale / norm
        else:
            continue
        trial = _state_energy(new_sites, new_jitter, V)
        if math.isinf(trial):
            continue
        delta = trial - current
        if delta <= 0 or rng.random() < math.exp(-delta / temperature):
            sites, jitter, current = new_sites, new_jitter, trial
            accepted += 1
            if current < best[0]:
                best = (current, sites.copy(), jitter.copy())
    logging.debug("GroundState: search N={0} accepted {1}/{2} moves, best {3}".format(
        N, accepted, steps, best[0]))
    value, sites, jitter = best
    return SearchResult(PointConfig(embed(sites) + jitter), value)
