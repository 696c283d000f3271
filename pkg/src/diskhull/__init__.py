"""Convex, star and topological hulls of planar Brownian motion killed on
the unit circle: exact laws, conformal oracles and Monte Carlo estimators."""

from diskhull.analytic import (
    analytic_constants,
    cdf_M,
    expected_M,
    expected_M_squared,
    expected_perimeter,
    radial_survival,
    sine_integral,
    star_area_exact,
    survival_M,
)
from diskhull.geometry import ConvexPolygon, PolygonalPath, convex_hull, polygon_area, polygon_perimeter
from diskhull.sampling import BoundaryMode, SimulationConfig, sample_bm_until_disk_exit, sample_lattice_walk

__version__ = "0.1.0"
