"""Circle recognition, projective rectifiers and complete families of circles."""

from kahler_circles.circles.families import (
    MoebiusMap,
    PlanarFamily,
    SuspensionFamily,
    exterior_ball_curve,
    get_family,
    line_family,
    poincare_family,
    suspend,
    suspension_rectifier,
)
from kahler_circles.circles.fitting import (
    CircleFit,
    circle_from_jet,
    complex_line_defect,
    fit_circle,
    line_residual,
)
from kahler_circles.circles.projective import (
    ProjectiveMap,
    image_of_line,
    jet2_of_map,
    rectifier,
    rectifier_from_christoffel,
)

__all__ = [
    "CircleFit",
    "MoebiusMap",
    "PlanarFamily",
    "ProjectiveMap",
    "SuspensionFamily",
    "circle_from_jet",
    "complex_line_defect",
    "exterior_ball_curve",
    "fit_circle",
    "get_family",
    "image_of_line",
    "jet2_of_map",
    "line_family",
    "line_residual",
    "poincare_family",
    "rectifier",
    "rectifier_from_christoffel",
    "suspend",
    "suspension_rectifier",
]
