"""Builders for the surfaces the pipeline works on.

Coordinate conventions are documented in README.md:

* ``L(a, b)`` is the polygon ``[0,a] x [0,1] union [0,1] x [0,b]`` with
  opposite sides glued; the single cone point (angle 6*pi) sits at the
  origin's vertex class.

* The double pentagon uses the regular pentagon with vertical symmetry axis
  and horizontal bottom edge of length 1, with the y-axis compressed by
  1/sin(72 deg) so that every coordinate lies in Q(sqrt(5)).  This is an
  affine model of the double regular pentagon; all field-rational structure
  (ratios, moduli, rationality certificates) is unchanged.  The two pentagon
  centers are the marked points P and Q; the segment P -> Q through the
  bottom edge's midpoint is vertical in these coordinates.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

from .field import MixedFieldError, QuadExt, Vec2
from .surface import TranslationSurface

Param = Union[int, Fraction, QuadExt]


def _as_quadext(x: Param, d: int) -> QuadExt:
    if isinstance(x, QuadExt):
        if x.d != d:
            raise MixedFieldError(
                f"parameter over Q(sqrt({x.d})) but surface field is Q(sqrt({d}))"
            )
        return x
    return QuadExt(Fraction(x), 0, d)


def build_square_torus(d: int = 2) -> TranslationSurface:
    """Unit square, opposite sides glued; vertex class marked as node 'O'."""
    v = lambda x, y: Vec2.of(x, y, d)
    square = [v(0, 0), v(1, 0), v(1, 1), v(0, 1)]
    gluings = [((0, 0), (0, 2)), ((0, 1), (0, 3))]
    return TranslationSurface(
        d, [square], gluings, marked_vertices={"O": (0, 0)}
    )


def build_l_shaped(a: Param, b: Param, d: int = 2) -> TranslationSurface:
    """The L-shaped surface with horizontal arm length a and vertical arm height b."""
    if isinstance(a, QuadExt) and isinstance(b, QuadExt) and a.d != b.d:
        raise MixedFieldError(
            f"L-shape parameters over mixed fields Q(sqrt({a.d})), Q(sqrt({b.d}))"
        )
    if isinstance(a, QuadExt):
        d = a.d
    elif isinstance(b, QuadExt):
        d = b.d
    qa, qb = _as_quadext(a, d), _as_quadext(b, d)
    one = QuadExt(1, 0, d)
    if (qa - one).sign() <= 0 or (qb - one).sign() <= 0:
        raise ValueError("L(a, b) requires a > 1 and b > 1")

    zero = QuadExt(0, 0, d)
    pts = [
        Vec2(zero, zero),
        Vec2(one, zero),
        Vec2(qa, zero),
        Vec2(qa, one),
        Vec2(one, one),
        Vec2(one, qb),
        Vec2(zero, qb),
        Vec2(zero, one),
    ]
    # Edges: 0 bottom-left, 1 bottom-right, 2 right, 3 arm top, 4 inner right,
    # 5 top, 6 left-upper, 7 left-lower.
    gluings = [
        ((0, 0), (0, 5)),  # [0,1] x {0}  <->  [0,1] x {b}
        ((0, 1), (0, 3)),  # [1,a] x {0}  <->  [1,a] x {1}
        ((0, 2), (0, 7)),  # {a} x [0,1]  <->  {0} x [0,1]
        ((0, 4), (0, 6)),  # {1} x [1,b]  <->  {0} x [1,b]
    ]
    return TranslationSurface(d, [pts], gluings)


def is_veech_l_shaped(a: Param, b: Param, d: int = 2) -> bool:
    """McMullen's criterion: L(a, b) is Veech iff a, b are both rational or
    a = x + z*sqrt(d), b = y + z*sqrt(d) with x, y, z rational, z != 0, x + y = 1.
    """
    if isinstance(a, QuadExt) and isinstance(b, QuadExt) and a.d != b.d:
        raise MixedFieldError(
            f"cannot compare parameters over Q(sqrt({a.d})) and Q(sqrt({b.d}))"
        )
    if isinstance(a, QuadExt):
        d = a.d
    elif isinstance(b, QuadExt):
        d = b.d
    qa, qb = _as_quadext(a, d), _as_quadext(b, d)
    if qa.is_rational() and qb.is_rational():
        return True
    if qa.b != qb.b:
        return False
    return qa.a + qb.a == 1


_PENTAGON_CACHE: dict[str, TranslationSurface] = {}


def build_double_pentagon() -> TranslationSurface:
    """Two regular pentagons with opposite sides glued, in Q(sqrt(5)) coordinates.

    Edge vectors of the upper pentagon (squashed model, bottom edge length 1):

        e0 = (1, 0)
        e1 = ((sqrt5 - 1)/4, 1)
        e2 = (-(1 + sqrt5)/4, (sqrt5 - 1)/2)
        e3 = (-(1 + sqrt5)/4, -(sqrt5 - 1)/2)
        e4 = ((sqrt5 - 1)/4, -1)

    The lower pentagon is the point reflection through the bottom edge's
    midpoint (1/2, 0); edge k of the upper glues to edge k of the lower.
    """
    if "dp" in _PENTAGON_CACHE:
        return _PENTAGON_CACHE["dp"]
    d = 5
    q = lambda a, b=0: QuadExt(Fraction(a), Fraction(b), d)
    zero, one = q(0), q(1)
    phi = q(Fraction(1, 2), Fraction(1, 2))
    upper = [
        Vec2(zero, zero),
        Vec2(one, zero),
        Vec2(q(Fraction(3, 4), Fraction(1, 4)), one),
        Vec2(q(Fraction(1, 2)), phi),
        Vec2(q(Fraction(1, 4), Fraction(-1, 4)), one),
    ]
    # Lower pentagon: (1, 0) - v for each upper vertex, same index order.
    shift = Vec2(one, zero)
    lower = [shift - v for v in upper]
    gluings = [((0, k), (1, k)) for k in range(5)]
    yc = q(Fraction(1, 2), Fraction(1, 10))  # (5 + sqrt5)/10: center height
    center_p = Vec2(q(Fraction(1, 2)), yc)
    center_q = shift - center_p
    s = TranslationSurface(
        d,
        [upper, lower],
        gluings,
        marked_points={"P": (0, center_p), "Q": (1, center_q)},
    )
    _PENTAGON_CACHE["dp"] = s
    return s


def golden_l() -> TranslationSurface:
    """L(phi, phi) with phi the golden ratio: the canonical non-arithmetic
    Veech surface in H(2) over Q(sqrt(5))."""
    phi = QuadExt(Fraction(1, 2), Fraction(1, 2), 5)
    return build_l_shaped(phi, phi)
