"""GL(2, K) action on surfaces, parabolic generators, and membership checks.

Veech-group membership is decided through the canonical Delaunay cell
complex: ``M`` stabilizes the surface iff the complexes of ``M . s`` and
``s`` admit a translation isomorphism.  The isomorphism (cell matching) is
returned as the certificate; a failed search is a genuine negative because
the Delaunay complex is intrinsic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cylinders import CylinderDecomposition
from .delaunay import canonical_cells, cell_iso
from .field import Mat2, QuadExt, Vec2, rational_lcm
from .surface import TranslationSurface
from .tracing import BudgetExceeded


class IncommensurableModuli(ValueError):
    """Cylinder moduli of the decomposition admit no common integer multiple."""


def apply(s: TranslationSurface, m: Mat2) -> TranslationSurface:
    """Image surface under the linear action; area scales by det(m) > 0."""
    return s.transform(m)


@dataclass
class AffineCheckResult:
    is_automorphism: bool
    status: str  # "verified" | "mismatch" | "unknown"
    witness: Optional[dict] = None
    detail: str = ""

    def __bool__(self):
        return self.is_automorphism


def verify_membership(
    s: TranslationSurface, m: Mat2, respect_marked: bool = True
) -> AffineCheckResult:
    """Is m the derivative of an affine automorphism of s?

    ``respect_marked`` additionally requires marked points to be permuted.
    """
    if not m.is_special:
        raise ValueError("membership test requires det(m) = 1")
    try:
        cells_image = canonical_cells(s.transform(m), respect_marked)
        cells_base = canonical_cells(s, respect_marked)
    except BudgetExceeded as exc:  # pragma: no cover
        return AffineCheckResult(False, "unknown", detail=str(exc))
    iso = cell_iso(cells_image, cells_base)
    if iso is None:
        return AffineCheckResult(
            False, "mismatch", detail="canonical Delaunay complexes differ"
        )
    return AffineCheckResult(True, "verified", witness=iso)


def parabolic_generator(s: TranslationSurface, dec: CylinderDecomposition) -> Mat2:
    """The parabolic shear fixing the decomposition's direction.

    In the frame where the direction is horizontal the map is
    [[1, alpha], [0, 1]] with alpha the least positive common integer
    multiple of all cylinder moduli; it twists cylinder i exactly
    alpha / modulus_i times.
    """
    if not dec.cylinders:
        raise ValueError("decomposition has no cylinders")
    moduli = [c.modulus for c in dec.cylinders]
    base = moduli[0]
    ratios = []
    for mu in moduli:
        r = mu / base
        if not r.is_rational():
            raise IncommensurableModuli(
                f"moduli ratio {r} is irrational; not a Veech periodic direction"
            )
        ratios.append(r.as_rational())
    alpha = base * QuadExt(rational_lcm(ratios), 0, s.d)
    shear = Mat2.shear(alpha)
    frame = dec.frame
    return frame.inverse() * shear * frame


def twist_counts(dec: CylinderDecomposition, generator_alpha: QuadExt) -> list[int]:
    """How many times the parabolic twists each cylinder (alpha / modulus)."""
    out = []
    for c in dec.cylinders:
        q = generator_alpha / c.modulus
        out.append(int(q.as_rational()))
    return out
