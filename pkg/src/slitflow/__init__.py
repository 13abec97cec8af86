"""slitflow: exact computational geometry on translation surfaces.

Builders for L-shaped and double-pentagon surfaces, exact straight-line flow,
cylinder decompositions, affine Dehn twists, slit double covers, and the
inductive slit-tree construction of non-uniquely-ergodic direction
certificates.
"""

from .field import (
    FieldError,
    Mat2,
    MixedFieldError,
    QuadExt,
    Rational,
    Vec2,
    qx_is_rational,
    qx_sign,
    similarity_to_horizontal,
    unit_horizontal_frame,
)

__all__ = [
    "FieldError",
    "Mat2",
    "MixedFieldError",
    "QuadExt",
    "Rational",
    "Vec2",
    "qx_is_rational",
    "qx_sign",
    "similarity_to_horizontal",
    "unit_horizontal_frame",
]

__version__ = "0.1.0"
