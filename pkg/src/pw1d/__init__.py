"""Exact computation in groups of piecewise homographic circle maps."""

from .scalar import INF, ProjPoint, Quad, circular_order, normalize_point, point
from .moebius import Homography, affine
from .piecewise import (CIRC, PROJ, PiecewiseMap, compose, identity, inverse,
                        make, rotation)
from .textio import format_map, parse_map, parse_maps
from .partial import PartialActionSpec, globalize_ball, load_spec
from .regularize import classify_component, conjugator, cut_and_glue, enumerate_group
from . import moebius, partial, piecewise, regularize, sampling, scalar, textio

__version__ = "0.1.0"
