"""Exact arithmetic over Q and Q(sqrt(d)), with 2-vectors and 2x2 matrices.

Every geometric predicate in this package reduces to sign computations on
elements ``a + b*sqrt(d)`` with ``a, b`` rational and ``d`` a fixed squarefree
integer per surface.  Floating point never participates in a decision; it is
exported only as a human-readable shadow.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction

RationalLike = Union[int, Fraction]


class MixedFieldError(ValueError):
    """Raised when two elements over different sqrt(d) fields are combined."""


class FieldError(ValueError):
    """Invalid field constant or malformed element."""


def _is_squarefree(n: int) -> bool:
    if n % 4 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 2
    return True


def check_field_constant(d: int) -> int:
    if not isinstance(d, int) or d < 2:
        raise FieldError(f"field constant must be an integer >= 2, got {d!r}")
    if not _is_squarefree(d):
        raise FieldError(f"field constant must be squarefree, got {d}")
    return d


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


def _sqrt_enclosure(d: int, k: int) -> tuple[Fraction, Fraction]:
    # sqrt(d) in [lo, hi] with hi - lo = 2^-k, via integer sqrt.
    scale = 1 << k
    r = math.isqrt(d * scale * scale)
    return Fraction(r, scale), Fraction(r + 1, scale)


class QuadExt:
    """An element a + b*sqrt(d) of the real quadratic field Q(sqrt(d)).

    Immutable.  ``d`` is shared per surface; mixing distinct ``d`` is a hard
    error rather than a silent coercion.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: RationalLike, b: RationalLike = 0, d: int = 2):
        object.__setattr__(self, "a", _as_fraction(a))
        object.__setattr__(self, "b", _as_fraction(b))
        object.__setattr__(self, "d", d)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("QuadExt is immutable")

    # -- construction helpers ------------------------------------------------

    @classmethod
    def rational(cls, x: RationalLike, d: int) -> "QuadExt":
        return cls(_as_fraction(x), 0, d)

    @classmethod
    def from_strings(cls, parts: Iterable[str], d: int) -> "QuadExt":
        """Parse the canonical encoding ["p/q", "r/s"] meaning p/q + (r/s)*sqrt(d)."""
        items = list(parts)
        if len(items) == 1:
            items.append("0")
        if len(items) != 2:
            raise FieldError(f"expected one or two rational strings, got {items!r}")
        return cls(Fraction(items[0]), Fraction(items[1]), d)

    def to_strings(self) -> list[str]:
        return [str(self.a), str(self.b)]

    # -- coercion ------------------------------------------------------------

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise MixedFieldError(
                    f"cannot combine Q(sqrt({self.d})) with Q(sqrt({other.d}))"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(_as_fraction(other), 0, self.d)
        return NotImplemented

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(o.a - self.a, o.b - self.b, self.d)

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm a^2 - d*b^2 (a rational)."""
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero field element")
        num = self * o.conjugate()
        return QuadExt(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "QuadExt":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        result = QuadExt(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- decidable order -----------------------------------------------------

    def sign(self) -> int:
        """Exact sign, decided by integer comparison of a^2 against d*b^2."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        aa = self.a * self.a
        dbb = self.b * self.b * self.d
        if aa > dbb:
            return sa
        if aa < dbb:
            return sb
        # a^2 = d b^2 with b != 0 would make sqrt(d) rational.
        raise FieldError(f"non-squarefree field constant detected: d={self.d}")

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def as_rational(self) -> Fraction:
        if self.b != 0:
            raise FieldError(f"{self} is irrational")
        return self.a

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except MixedFieldError:
            raise
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    # -- floor and float shadow ----------------------------------------------

    def floor(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        k = 8
        while True:
            lo, hi = _sqrt_enclosure(self.d, k)
            if self.b > 0:
                vlo, vhi = self.a + self.b * lo, self.a + self.b * hi
            else:
                vlo, vhi = self.a + self.b * hi, self.a + self.b * lo
            flo, fhi = math.floor(vlo), math.floor(vhi)
            if flo == fhi:
                return flo
            k *= 2
            if k > 1 << 20:  # pragma: no cover
                raise FieldError("floor enclosure failed to converge")

    def __float__(self) -> float:
        if self.b == 0:
            return float(self.a)
        # Scale through a 60-bit rational enclosure; exactness is irrelevant here.
        lo, _ = _sqrt_enclosure(self.d, 60)
        v = self.a + self.b * lo
        return v.numerator / v.denominator

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.d})"


def qx_sign(v: QuadExt) -> int:
    return v.sign()


def qx_is_rational(v: QuadExt) -> bool:
    return v.is_rational()


class Vec2:
    """Exact 2-vector over a fixed Q(sqrt(d))."""

    __slots__ = ("x", "y")

    def __init__(self, x: QuadExt, y: QuadExt):
        if x.d != y.d:
            raise MixedFieldError("vector components over different fields")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("Vec2 is immutable")

    @property
    def d(self) -> int:
        return self.x.d

    @classmethod
    def of(cls, x, y, d: int) -> "Vec2":
        qx = x if isinstance(x, QuadExt) else QuadExt(_as_fraction(x), 0, d)
        qy = y if isinstance(y, QuadExt) else QuadExt(_as_fraction(y), 0, d)
        return cls(qx, qy)

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def __mul__(self, s) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def dot(self, other: "Vec2") -> QuadExt:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> QuadExt:
        return self.x * other.y - self.y * other.x

    def norm2(self) -> QuadExt:
        return self.dot(self)

    def perp(self) -> "Vec2":
        """Counterclockwise quarter turn."""
        return Vec2(-self.y, self.x)

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.y.is_zero()

    def is_parallel(self, other: "Vec2") -> bool:
        return self.cross(other).is_zero()

    def __eq__(self, other):
        if not isinstance(other, Vec2):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def key(self) -> tuple:
        """Hashable exact key (for dict/set use and deterministic sorting)."""
        return (self.x.a, self.x.b, self.y.a, self.y.b)

    def __float__(self):  # pragma: no cover
        raise TypeError("use float_tuple()")

    def float_tuple(self) -> tuple[float, float]:
        return (float(self.x), float(self.y))

    def __repr__(self):
        return f"Vec2({self.x}, {self.y})"


class Mat2:
    """Exact 2x2 matrix [[a, b], [c, e]] over Q(sqrt(d)), determinant cached."""

    __slots__ = ("a", "b", "c", "e", "_det")

    def __init__(self, a: QuadExt, b: QuadExt, c: QuadExt, e: QuadExt):
        for m in (b, c, e):
            if m.d != a.d:
                raise MixedFieldError("matrix entries over different fields")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "_det", a * e - b * c)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("Mat2 is immutable")

    @property
    def d(self) -> int:
        return self.a.d

    @property
    def det(self) -> QuadExt:
        return self._det

    @property
    def is_special(self) -> bool:
        return self._det == QuadExt(1, 0, self.d)

    @classmethod
    def of(cls, rows, d: int) -> "Mat2":
        (a, b), (c, e) = rows
        conv = lambda v: v if isinstance(v, QuadExt) else QuadExt(_as_fraction(v), 0, d)
        return cls(conv(a), conv(b), conv(c), conv(e))

    @classmethod
    def identity(cls, d: int) -> "Mat2":
        one, zero = QuadExt(1, 0, d), QuadExt(0, 0, d)
        return cls(one, zero, zero, one)

    @classmethod
    def shear(cls, alpha: QuadExt) -> "Mat2":
        d = alpha.d
        one, zero = QuadExt(1, 0, d), QuadExt(0, 0, d)
        return cls(one, alpha, zero, one)

    def __mul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.e,
                self.c * other.a + self.e * other.c,
                self.c * other.b + self.e * other.e,
            )
        if isinstance(other, Vec2):
            return Vec2(
                self.a * other.x + self.b * other.y,
                self.c * other.x + self.e * other.y,
            )
        return NotImplemented

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.e)

    def inverse(self) -> "Mat2":
        det = self._det
        if det.is_zero():
            raise ZeroDivisionError("singular matrix")
        return Mat2(self.e / det, -self.b / det, -self.c / det, self.a / det)

    def __pow__(self, n: int) -> "Mat2":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = Mat2.identity(self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return (
            self.a == other.a
            and self.b == other.b
            and self.c == other.c
            and self.e == other.e
        )

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.e))

    def entries(self) -> tuple[QuadExt, QuadExt, QuadExt, QuadExt]:
        return (self.a, self.b, self.c, self.e)

    def __repr__(self):
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.e}]])"


def similarity_to_horizontal(v: Vec2) -> Mat2:
    """The field similarity M = [[x, y], [-y, x]] sending v = (x, y) to (x^2+y^2, 0).

    det M = x^2 + y^2 > 0, so orientation is preserved; lengths scale by |v|.
    """
    if v.is_zero():
        raise ValueError("cannot normalize the zero vector")
    return Mat2(v.x, v.y, -v.y, v.x)


def unit_horizontal_frame(v: Vec2) -> Mat2:
    """The field similarity sending v exactly to (1, 0); det = 1/|v|^2."""
    m = similarity_to_horizontal(v)
    n2 = v.norm2()
    return Mat2(m.a / n2, m.b / n2, m.c / n2, m.e / n2)


def rational_lcm(values: Iterable[Fraction]) -> Fraction:
    """Least positive rational x with x / v a positive integer for every v.

    The intersection of the cyclic groups vZ inside Q.
    """
    vals = [abs(_as_fraction(v)) for v in values]
    if not vals or any(v == 0 for v in vals):
        raise ValueError("rational_lcm needs nonzero values")
    num = vals[0].numerator
    den = vals[0].denominator
    for v in vals[1:]:
        num = num * v.numerator // math.gcd(num, v.numerator)
        den = math.gcd(den, v.denominator)
    return Fraction(num, den)
