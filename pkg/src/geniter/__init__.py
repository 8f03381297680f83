"""Generalized F- and V-iteration of maps from n-dimensional to
m-dimensional spaces (m <= n), with tooling for fixed points, attractor
classification, bifurcation/trifurcation location, Feigenbaum ratio
estimation, the generalized Sharkovsky ordering, attraction-basin
rasters and escape-time (Julia/Mandelbrot) rasters.
"""

from . import expr
from .analysis import (AttractorReport, ClassifyConfig, FixedPointInfo,
                       OrbitResiduals, RefinedOrbit, classify_attractor,
                       diagonal_fixed_points, refine_orbit, stability_class,
                       stability_partials, verify_orbit_equations)
from .engine import (MAGNITUDE_CAP, IterState, MapSpec, SequenceRecord,
                     iterate, seed_state, step)
from .families import FAMILIES, make_family
from .raster import (BASIN_CONFIG, BasinRaster, EscapeRaster, GridSpec,
                     basin_map, diagonal_ray_labels, escape_raster,
                     label_report)
from .scan import (BracketingError, CriticalValue, FeigenbaumEstimate,
                   PeriodTable, feigenbaum, locate_transition, period_table,
                   probe_seeds, sharkovsky_chain, sharkovsky_compare)

__version__ = "0.1.0"

__all__ = [
    "expr",
    "MapSpec", "SequenceRecord", "IterState", "iterate", "seed_state", "step",
    "MAGNITUDE_CAP",
    "FAMILIES", "make_family",
    "AttractorReport", "ClassifyConfig", "FixedPointInfo", "OrbitResiduals",
    "RefinedOrbit", "classify_attractor", "diagonal_fixed_points",
    "refine_orbit", "stability_class", "stability_partials",
    "verify_orbit_equations",
    "PeriodTable", "CriticalValue", "FeigenbaumEstimate", "BracketingError",
    "period_table", "locate_transition", "feigenbaum", "probe_seeds",
    "sharkovsky_compare", "sharkovsky_chain",
    "GridSpec", "BasinRaster", "EscapeRaster", "BASIN_CONFIG",
    "basin_map", "escape_raster", "label_report", "diagonal_ray_labels",
]
