"""Quaternion algebra and the identification R^4 = C^2 = H."""

from kahler_circles.core.quaternion import (
    J_MATRIX,
    ComplexFunctional,
    ComplexLinear,
    NotHolomorphic,
    Quaternion,
    QuaternionFunctionals,
    RealLinearMapToH,
    classify_A,
    decompose_A,
    from_complex,
    hamilton,
    holomorphy_defect_quadratic,
    jmul,
    qmul,
    quadratic_holomorphy_defect,
    to_complex,
)

__all__ = [
    "J_MATRIX",
    "ComplexFunctional",
    "ComplexLinear",
    "NotHolomorphic",
    "Quaternion",
    "QuaternionFunctionals",
    "RealLinearMapToH",
    "classify_A",
    "decompose_A",
    "from_complex",
    "hamilton",
    "holomorphy_defect_quadratic",
    "jmul",
    "qmul",
    "quadratic_holomorphy_defect",
    "to_complex",
]
