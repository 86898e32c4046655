# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#

# Meta
__license__ = "AGPLv3"

import logging

import numpy as np
import shapely

from errors import InputError
from geometry import ConvexCell, PolygonSet
from surface import WulffShape

SVG_HEADER = '<?xml version="1.0" encoding="UTF-8"?>\n<!-- hexcluster {0} -->\n'

#: Fill color and opacity of every scene layer.
LAYER_STYLES = {
    "cells": ("#dddddd", 0.3),
    "omega": ("#66aadd", 0.5),
    "hn": ("#dd9944", 0.5),
    "hnprime": ("#aa3333", 0.4),
    "wulff": ("#33aa55", 0.3),
    "sites": ("#222222", 1.0),
}


def to_geometry(item):
    if isinstance(item, (PolygonSet, WulffShape, ConvexCell)):
        return item.to_shapely()
    if isinstance(item, (list, tuple)) and item and isinstance(item[0], ConvexCell):
        return shapely.multipolygons([c.to_shapely() for c in item])
    if isinstance(item, np.ndarray):
        return shapely.multipoints(item)
    return item


def _svg(geom, stroke, color, opacity):
    if geom.geom_type == "GeometryCollection":
        return "".join(_svg(part, stroke, color, opacity) for part in geom.geoms)
    if geom.geom_type in ("LineString", "MultiLineString", "LinearRing"):
        return geom.svg(scale_factor=stroke, stroke_color=color, opacity=opacity)
    return geom.svg(scale_factor=stroke, fill_color=color, opacity=opacity)


def scene(layers, version="dev"):
    """
    SVG document drawing ``layers``, a list of (name, geometry) pairs in
    painting order. Names pick the style from LAYER_STYLES.
    """
    geoms = [(name, to_geometry(item)) for name, item in layers]
    geoms = [(name, g) for name, g in geoms if not g.is_empty]
    if not geoms:
        bounds = (0.0, 0.0, 1.0, 1.0)
    else:
        bounds = shapely.GeometryCollection([g for _, g in geoms]).bounds
    minx, miny, maxx, maxy = bounds
    span = max(maxx - minx, maxy - miny, 1e-9)
    pad = 0.05 * span
    width, height = maxx - minx + 2 * pad, maxy - miny + 2 * pad
    stroke = span / 400.0
    body = []
    for name, g in geoms:
        color, opacity = LAYER_STYLES.get(name, ("#888888", 0.5))
        body.append('<g id="{0}">{1}</g>'.format(name, _svg(g, stroke, color, opacity)))
    # flip y so the picture is not mirrored
    return (SVG_HEADER.format(version) +
            '<svg xmlns="http://www.w3.org/2000/svg" viewBox="{0:.6f} {1:.6f} {2:.6f} {3:.6f}">\n'
            '<g transform="matrix(1,0,0,-1,0,{4:.6f})">\n{5}\n</g>\n</svg>\n').format(
                minx - pad, miny - pad, width, height, 2 * miny + height - 2 * pad,
                "\n".join(body))


def write_svg(path, layers, version="dev"):
    try:
        with open(path, 'w') as svg_file:
            svg_file.write(scene(layers, version))
    except (IOError, OSError) as e:
        raise InputError("Render: could not write {0}: {1}".format(path, e))
    logging.info("Render: wrote {0} layers to {1}".format(len(layers), path))
