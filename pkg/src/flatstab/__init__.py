"""Certified k-flat transversal toolkit.

Families of compact convex polytopes in R^d or C^d, tested and searched for
common k-dimensional affine flats ("k-transversals").  The package provides:

- dependency-consistency checkers with machine-checkable certificates,
- a Stiefel-manifold descent engine whose Found answers are re-verified,
- exact rational oracles for small cases (planar line transversals,
  point families), and
- scene generation, serialization, and SVG plotting, wired to a CLI.
"""

from .consistency import (
    PointAssignment,
    check_dependency_consistency,
    scaled_dependency_feasible,
    subfamily_bound,
)
from .convex import min_norm_point, nearest_point_on_flat, polytopes_intersect
from .engines import (
    EngineOpts,
    alternating_flat_fit,
    find_transversal_stiefel,
    hyperplane_transversal_2d_exact,
    point_family_transversal_exact,
    verify_transversal,
)
from .errors import FlatstabError
from .fields import COMPLEX, REAL, ScalarField
from .geometry import AffineFlat, Frame, Polytope
from .scenes import Scene, emit_scene, emit_svg, parse_scene

__version__ = "0.1.0"

__all__ = [
    "AffineFlat",
    "COMPLEX",
    "EngineOpts",
    "FlatstabError",
    "Frame",
    "PointAssignment",
    "Polytope",
    "REAL",
    "ScalarField",
    "Scene",
    "check_dependency_consistency",
    "emit_scene",
    "emit_svg",
    "alternating_flat_fit",
    "find_transversal_stiefel",
    "hyperplane_transversal_2d_exact",
    "min_norm_point",
    "nearest_point_on_flat",
    "parse_scene",
    "point_family_transversal_exact",
    "polytopes_intersect",
    "scaled_dependency_feasible",
    "subfamily_bound",
    "verify_transversal",
    "__version__",
]
