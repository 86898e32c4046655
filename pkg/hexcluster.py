#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#
# For license information see LICENSE.txt


# Meta
__version__ = '0.1.0'
__version_info__ = (0, 1, 0)
__license__ = "AGPLv3"

import argparse
import json
import logging
import math
import os
import sys

import numpy as np
from configparser import ConfigParser, NoOptionError, NoSectionError

import experiments
import geometry
import groundstate
import measures
import potential
import render
import surface
from errors import CheckFailed, HexClusterError, InputError, PreconditionError
from lattice import (LatticeConfig, bond_count, is_connected,
                     load_configuration, save_configuration)
from oracle import OracleTable

config_file = os.environ.get("HEXCLUSTER_CONFIG", "hexcluster.ini")


class Configuration(object):
    def __init__(self, filename):
        self.configparser = ConfigParser()
        self.filename = filename
        if filename and os.path.exists(filename):
            self.configparser.read(filename)
        self.log_level = self.get('General', 'log_level', 'INFO')
        self.log_file = self.get('General', 'log_file', '') or None

    def get(self, *args):
        if len(args) == 3:
            try:
                return self.configparser.get(args[0], args[1])
            except (NoOptionError, NoSectionError):
                return args[2]
        if len(args) == 2:
            return self.configparser.get(args[0], args[1])
        else:
            return self.configparser.get('General', args[0])

    def getfloat(self, section, option, default):
        return float(self.get(section, option, default))

    def getint(self, section, option, default):
        return int(self.get(section, option, default))


def setup_logging(config, quiet=False):
    for handler in logging.root.handlers[:]:
        logging.root.removeHandler(handler)
    logging.basicConfig(
        format='%(asctime)s - %(levelname)s - %(message)s',
        filename=config.log_file,
        level='WARNING' if quiet else config.log_level)
    if not os.path.exists(config.filename):
        logging.debug("Core: no {0}, using built-in defaults".format(config.filename))


def _write_json(path, data):
    try:
        with open(path, 'w') as json_file:
            json.dump(data, json_file, indent=2, sort_keys=True)
            json_file.write('\n')
    except (IOError, OSError) as e:
        raise InputError("Core: could not write {0}: {1}".format(path, e))


def _echo(data):
    print(json.dumps(data, indent=2, sort_keys=True))


def _number(value):
    return "inf" if isinstance(value, float) and math.isinf(value) else value


def finish(failures, args):
    """Raise CheckFailed for failed checks unless --no-assert was given."""
    for failure in failures:
        if args.no_assert:
            logging.warning("Core: check failed: {0}".format(failure))
    if failures and not args.no_assert:
        raise CheckFailed("Core: {0} check(s) failed: {1}".format(
            len(failures), "; ".join(failures)))
    return 0


def _potential(args):
    if getattr(args, "potential", None):
        return potential.PairPotential.load(args.potential)
    return potential.PairPotential.sticky()


def cmd_generate(args, config):
    if args.hexagon is not None:
        cfg = groundstate.hexagon_config(args.hexagon)
    elif args.spiral is not None:
        cfg = groundstate.spiral_config(args.spiral)
    elif args.search is not None:
        V = _potential(args)
        result = groundstate.stochastic_search(
            args.search, V, seed=args.seed,
            steps=args.steps or config.getint('Search', 'steps', 2000),
            temperature=config.getfloat('Search', 'temperature', 0.5))
        save_configuration(result.config, args.out)
        _echo({"N": len(result.config), "energy": _number(result.energy)})
        return 0
    else:
        if args.N is None:
            raise PreconditionError("Core: --polygon needs --N")
        P = experiments.load_polygon(args.polygon)
        cfg, raw = experiments.recovery_config(P, args.N, args.n_scale)
        logging.info("Core: polygon gives M={0} sites before adjusting to N={1}".format(
            len(raw), args.N))
    save_configuration(cfg, args.out)
    bonds = bond_count(cfg)
    _echo({"N": len(cfg), "bonds": bonds, "energy": -2 * bonds})
    return 0


def cmd_energy(args, config):
    cfg = load_configuration(args.config)
    V = _potential(args)
    eps = config.getfloat('Geometry', 'eps', potential.DEFAULT_EPS)
    N = len(cfg)
    breakdown = potential.energy_breakdown(cfg, V, eps)
    E = breakdown.total
    histogram = np.bincount(breakdown.neighbor_counts, minlength=7)
    report = {
        "N": N,
        "energy": _number(E),
        "lower_ok": bool(E >= groundstate.lower_bound(N)) if N else True,
        "upper_ok": bool(E <= groundstate.upper_bound(N)) if N else True,
        "neighbor_histogram": dict((str(k), int(c)) for k, c in enumerate(histogram)),
        "hypotheses": potential.validate_hypotheses(V)._asdict(),
    }
    _echo(report)
    failures = []
    if not report["lower_ok"]:
        failures.append("energy {0} below -6N".format(E))
    return finish(failures, args)


def _write_grid(args, config, cfg, segments):
    h = config.getfloat('Measures', 'raster_h', measures.RASTER_H)
    if args.grid_measure == "mu_tilde":
        grid = measures.mu_tilde(cfg, h, segments)
    elif isinstance(cfg, LatticeConfig) and len(cfg):
        grid = measures.mu_tilde_tilde(cfg, h=h)
    else:
        raise PreconditionError("Core: mu_tilde_tilde needs a nonempty lattice configuration")
    grid.save(args.grid, args.grid_format)
    logging.info("Core: wrote {0} grid {1} to {2}".format(args.grid_measure, grid.dims, args.grid))
    return grid


def cmd_geometry(args, config):
    cfg = load_configuration(args.config)
    segments = config.getint('Geometry', 'disc_segments', geometry.DISC_SEGMENTS)
    eps = config.getfloat('Geometry', 'eps', potential.DEFAULT_EPS)
    failures = []
    stats = {"N": len(cfg)}
    layers = []
    if args.emit == "omega":
        shape = geometry.omega(cfg, segments)
        outer = sum(1 for o in shape.orientations if o > 0)
        stats["loops_outer"] = outer
        if is_connected(cfg, 1.0 + eps) and outer != 1:
            failures.append("omega of a connected configuration has {0} outer loops".format(outer))
        layers.append(("cells", geometry.truncated_cells(cfg, segments)))
    else:
        if not isinstance(cfg, LatticeConfig):
            raise PreconditionError("Core: --emit {0} needs a lattice configuration".format(args.emit))
        h = geometry.h_set(cfg, len(cfg) or None)
        hprime = geometry.deoscillate(h)
        check = geometry.energy_perimeter_identity_check(cfg)
        stats["broken_bonds"] = geometry.broken_bonds(cfg)
        stats["identity_residual"] = abs(check.lhs - check.rhs)
        if not check.equal:
            failures.append("energy-perimeter identity off by {0}".format(stats["identity_residual"]))
        if len(cfg):
            sym = geometry.symmetric_difference_bound(cfg)
            stats["sym_diff"] = sym.measured
            stats["sym_diff_bound"] = sym.segments_bound
            if not sym.ok:
                failures.append("symmetric difference {0} over {1}".format(
                    sym.measured, sym.segments_bound))
        shape = h if args.emit == "hn" else hprime
        layers.append(("hn", h))
        if args.emit == "hnprime":
            layers.append(("hnprime", hprime))
    stats["perimeter"] = shape.perimeter
    stats["area"] = shape.area
    if args.out:
        _write_json(args.out, shape.to_json())
    if args.svg:
        if args.emit == "omega":
            layers.append(("omega", shape))
        render.write_svg(args.svg, layers, __version__)
    if args.grid:
        stats["grid_mass"] = _write_grid(args, config, cfg, segments).mass
    if args.stats:
        _write_json(args.stats, stats)
    _echo(stats)
    return finish(failures, args)


def cmd_wulff(args, config):
    if args.area <= 0:
        raise PreconditionError("Core: --area must be positive")
    w = surface.scale_to_area(surface.wulff_set(samples=args.samples), args.area)
    integral = surface.surface_integral(w.polygon)
    if args.out:
        _write_json(args.out, w.to_json())
    if args.svg:
        render.write_svg(args.svg, [("wulff", w)], __version__)
    _echo({"samples": args.samples, "area": w.area, "scale": w.scale,
           "surface_integral": integral})
    return 0


def cmd_converge(args, config):
    ns = experiments.log_spaced(args.nmin, args.nmax, args.points)
    polygon = experiments.load_polygon(args.polygon) if args.polygon else None
    study = experiments.run_study(
        args.study, ns, polygon, args.n_scale,
        h=config.getfloat('Measures', 'raster_h', 0.002),
        levels=config.getint('Measures', 'bl_levels', 4))
    experiments.write_csv(args.csv, study)
    return finish(study.failures, args)


def cmd_oracle(args, config):
    table = OracleTable(config, store=args.store, workers=args.workers)
    values = table.list_values(args.nmax, from_cache=not args.no_cache)
    failures = []
    for N, b in sorted(values.items()):
        if b != bond_count(groundstate.spiral_config(N)):
            failures.append("b*({0})={1} differs from the spiral configuration".format(N, b))
        if -2 * b != groundstate.sticky_ground_energy(N):
            failures.append("b*({0})={1} differs from the closed form".format(N, b))
    _echo(dict((str(N), b) for N, b in sorted(values.items())))
    return finish(failures, args)


parser = argparse.ArgumentParser(
    prog="hexcluster",
    description="Crystallized clusters of the triangular lattice")
parser.add_argument(
    "-q",
    "--quiet",
    action='store_true',
    dest='quiet',
    help="Only log warnings and errors")
parser.add_argument(
    "--seed",
    action="store",
    dest='seed',
    type=int,
    default=None,
    help="Seed for randomized operations")
parser.add_argument(
    "--no-assert",
    action='store_true',
    dest='no_assert',
    help="Report failed checks as warnings and exit 0")
subparsers = parser.add_subparsers(dest="command")
subparsers.required = True

generate = subparsers.add_parser("generate", help="Write a lattice configuration")
group = generate.add_mutually_exclusive_group(required=True)
group.add_argument("--hexagon", type=int, metavar="R", help="Hexagon of radius R")
group.add_argument("--spiral", type=int, metavar="N", help="Hexagon plus partial layer")
group.add_argument("--polygon", metavar="FILE", help="Lattice points of sqrt(N) P")
group.add_argument("--search", type=int, metavar="N", help="Stochastic search with N atoms")
generate.add_argument("--n-scale", type=int, default=100, dest="n_scale",
                      help="Snap polygon corners to the lattice scaled by 1/n")
generate.add_argument("--N", type=int, dest="N", help="Target number of atoms")
generate.add_argument("--potential", metavar="FILE", help="Potential for --search")
generate.add_argument("--steps", type=int, help="Search steps")
generate.add_argument("--out", required=True, metavar="FILE")
generate.set_defaults(func=cmd_generate)

energy_cmd = subparsers.add_parser("energy", help="Energy report of a configuration")
energy_cmd.add_argument("--config", required=True, metavar="FILE")
energy_cmd.add_argument("--potential", metavar="FILE", help="Defaults to the sticky disc")
energy_cmd.set_defaults(func=cmd_energy)

geometry_cmd = subparsers.add_parser("geometry", help="Omega, H_N and H_N' of a configuration")
geometry_cmd.add_argument("--config", required=True, metavar="FILE")
geometry_cmd.add_argument("--emit", choices=("omega", "hn", "hnprime"), default="hnprime")
geometry_cmd.add_argument("--out", metavar="FILE", help="Polygon JSON")
geometry_cmd.add_argument("--svg", metavar="FILE")
geometry_cmd.add_argument("--stats", metavar="FILE")
geometry_cmd.add_argument("--grid", metavar="FILE", help="Density grid of the configuration")
geometry_cmd.add_argument("--grid-format", choices=("csv", "bin"), default="csv", dest="grid_format")
geometry_cmd.add_argument("--grid-measure", choices=("mu_tilde", "mu_tilde_tilde"),
                          default="mu_tilde_tilde", dest="grid_measure")
geometry_cmd.set_defaults(func=cmd_geometry)

wulff = subparsers.add_parser("wulff", help="Wulff shape of the lattice surface density")
wulff.add_argument("--samples", type=int, default=6, metavar="M")
wulff.add_argument("--area", type=float, default=surface.WULFF_AREA, metavar="A")
wulff.add_argument("--out", metavar="FILE")
wulff.add_argument("--svg", metavar="FILE")
wulff.set_defaults(func=cmd_wulff)

converge = subparsers.add_parser("converge", help="Convergence studies as CSV")
converge.add_argument("--study", required=True, choices=experiments.STUDIES)
converge.add_argument("--nmin", type=int, default=10)
converge.add_argument("--nmax", type=int, default=10000)
converge.add_argument("--points", type=int, default=10)
converge.add_argument("--polygon", metavar="FILE", help="Polygon for the recovery study")
converge.add_argument("--n-scale", type=int, default=100, dest="n_scale")
converge.add_argument("--csv", required=True, metavar="FILE")
converge.set_defaults(func=cmd_converge)

oracle_cmd = subparsers.add_parser("oracle", help="Exhaustive maximum bond counts")
oracle_cmd.add_argument("--nmax", type=int, default=10)
oracle_cmd.add_argument("--store", choices=("Json", "Redis"))
oracle_cmd.add_argument("--no-cache", action="store_true", dest="no_cache")
oracle_cmd.add_argument("--workers", type=int, default=None)
oracle_cmd.set_defaults(func=cmd_oracle)


def main(argv=None):
    args = parser.parse_args(argv)
    config = Configuration(config_file)
    setup_logging(config, args.quiet)
    logging.info("Core: hexcluster {0} running {1}".format(__version__, args.command))
    try:
        return args.func(args, config)
    except HexClusterError as e:
        logging.error(str(e))
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
