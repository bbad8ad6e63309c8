"""Exact arithmetic in a real quadratic field Q(sqrt d) and its complexification.

Every real period value is a :class:`QuadExt` ``q0 + q1*sqrt(d)`` with
rational ``q0, q1``.  Signs and comparisons are decided exactly, without
floating point.  Complex periods are pairs of such values
(:class:`ComplexExact`).

The field parameter ``d`` is fixed per session.  It defaults to 2, can be
overridden by the ``ISOFLAT_D`` environment variable, by
:func:`set_default_d`, or temporarily with the :func:`field` context manager.
"""

from __future__ import annotations

import contextlib
import math
import os
import warnings
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational

__all__ = [
    "QuadExt",
    "ComplexExact",
    "FieldMismatch",
    "default_d",
    "set_default_d",
    "field",
    "is_squarefree",
    "parse_rational",
    "format_rational",
    "sign",
    "is_rational",
    "floor_frac",
    "cross",
    "dot",
]


class FieldMismatch(ValueError):
    """Raised when values from two different quadratic fields are combined."""


def is_squarefree(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def _check_d(d: int) -> int:
    d = int(d)
    if not is_squarefree(d):
        raise ValueError(f"field parameter d={d} must be a square-free integer >= 2")
    return d


def _env_d() -> int:
    raw = os.environ.get("ISOFLAT_D")
    if raw is None:
        return 2
    try:
        return _check_d(raw)
    except ValueError:
        # the CLI reports this as an input error; library users get the default
        warnings.warn(f"ignoring ISOFLAT_D={raw!r}: not a square-free integer >= 2", stacklevel=2)
        return 2


_DEFAULT_D = _env_d()


def default_d() -> int:
    return _DEFAULT_D


def set_default_d(d: int) -> None:
    global _DEFAULT_D
    _DEFAULT_D = _check_d(d)


@contextlib.contextmanager
def field(d: int):
    """Temporarily switch the session field parameter."""
    global _DEFAULT_D
    old = _DEFAULT_D
    _DEFAULT_D = _check_d(d)
    try:
        yield _DEFAULT_D
    finally:
        _DEFAULT_D = old


def parse_rational(s) -> Fraction:
    """Parse ``"a/b"``, ``"-a/b"``, ``"a"`` or an int into a reduced Fraction."""
    if isinstance(s, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise TypeError(f"cannot read a rational from {s!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _sign_of(q0: Fraction, q1: Fraction, d: int) -> int:
    # sign(q0 + q1*sqrt(d)) by comparing q0^2 with d*q1^2
    s0 = (q0 > 0) - (q0 < 0)
    s1 = (q1 > 0) - (q1 < 0)
    if s1 == 0:
        return s0
    if s0 == 0 or s0 == s1:
        return s1
    lhs = q0 * q0
    rhs = d * q1 * q1
    if lhs > rhs:
        return s0
    if lhs < rhs:
        return s1
    return 0  # unreachable for square-free d, kept for safety


class QuadExt:
    """An element ``q0 + q1*sqrt(d)`` of Q(sqrt d).  Immutable."""

    __slots__ = ("q0", "q1", "d")

    def __init__(self, q0=0, q1=0, d: int | None = None):
        object.__setattr__(self, "q0", parse_rational(q0))
        object.__setattr__(self, "q1", parse_rational(q1))
        object.__setattr__(self, "d", _DEFAULT_D if d is None else int(d))

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def sqrt_d(cls, d: int | None = None) -> "QuadExt":
        return cls(0, 1, d)

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise FieldMismatch(f"d={self.d} vs d={other.d}")
            return other
        if isinstance(other, (int, Fraction, Rational)) and not isinstance(other, bool):
            return QuadExt(Fraction(other), 0, self.d)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.q0 + o.q0, self.q1 + o.q1, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.q0, -self.q1, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.q0 - o.q0, self.q1 - o.q1, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(
            self.q0 * o.q0 + self.d * self.q1 * o.q1,
            self.q0 * o.q1 + self.q1 * o.q0,
            self.d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        """Galois conjugate ``q0 - q1*sqrt(d)``."""
        return QuadExt(self.q0, -self.q1, self.d)

    def norm(self) -> Fraction:
        return self.q0 * self.q0 - self.d * self.q1 * self.q1

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt d)")
        return QuadExt(self.q0 / n, -self.q1 / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadExt(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- order ------------------------------------------------------------
    def sign(self) -> int:
        return _sign_of(self.q0, self.q1, self.d)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.q0 == o.q0 and self.q1 == o.q1

    def __hash__(self):
        if self.q1 == 0:
            return hash(self.q0)
        return hash((self.q0, self.q1, self.d))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() >= 0

    def __bool__(self):
        return bool(self.q0) or bool(self.q1)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def is_rational(self) -> bool:
        return self.q1 == 0

    def floor(self) -> int:
        # bracket q1*sqrt(d) between consecutive multiples of 1/den, then fix up
        n, m = self.q1.numerator, self.q1.denominator
        s = math.isqrt(n * n * self.d)
        approx = self.q0 + Fraction(s if n >= 0 else -s, m)
        k = math.floor(approx)
        while self < k:
            k -= 1
        while self >= k + 1:
            k += 1
        return k

    def floor_frac(self) -> tuple[int, "QuadExt"]:
        k = self.floor()
        return k, self - k

    # -- display ----------------------------------------------------------
    def to_decimal(self, digits: int = 20) -> Decimal:
        """Decimal approximation, for display only."""
        with localcontext() as ctx:
            ctx.prec = digits + 10
            val = Decimal(self.q0.numerator) / Decimal(self.q0.denominator)
            if self.q1:
                val += Decimal(self.q1.numerator) / Decimal(self.q1.denominator) * Decimal(self.d).sqrt()
            ctx.prec = digits
            return +val

    def __float__(self):
        return float(self.to_decimal(20))

    def __repr__(self):
        return f"QuadExt({self.q0}, {self.q1}, d={self.d})"

    def __str__(self):
        if self.q1 == 0:
            return str(self.q0)
        root = f"sqrt({self.d})"
        t1 = root if self.q1 == 1 else f"-{root}" if self.q1 == -1 else f"{self.q1}*{root}"
        if self.q0 == 0:
            return t1
        if t1.startswith("-"):
            return f"{self.q0} - {t1[1:]}"
        return f"{self.q0} + {t1}"

    def to_json(self) -> dict:
        return {"q0": format_rational(self.q0), "q1": format_rational(self.q1)}

    @classmethod
    def from_json(cls, obj, d: int | None = None) -> "QuadExt":
        return cls(parse_rational(obj["q0"]), parse_rational(obj["q1"]), d)


def sign(x: QuadExt) -> int:
    return x.sign()


def is_rational(x: QuadExt) -> bool:
    return x.is_rational()


def floor_frac(x: QuadExt) -> tuple[int, QuadExt]:
    """Return ``(k, r)`` with ``x = k + r``, ``k`` integer, ``0 <= r < 1``."""
    return x.floor_frac()


def _as_quad(x, d: int) -> QuadExt:
    if isinstance(x, QuadExt):
        if x.d != d:
            raise FieldMismatch(f"d={d} vs d={x.d}")
        return x
    return QuadExt(x, 0, d)


class ComplexExact:
    """``re + i*im`` with both parts in Q(sqrt d).  Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0, d: int | None = None):
        if d is None:
            d = re.d if isinstance(re, QuadExt) else im.d if isinstance(im, QuadExt) else _DEFAULT_D
        object.__setattr__(self, "re", _as_quad(re, d))
        object.__setattr__(self, "im", _as_quad(im, d))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexExact is immutable")

    @property
    def d(self) -> int:
        return self.re.d

    @classmethod
    def i(cls, d: int | None = None) -> "ComplexExact":
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, ComplexExact):
            if other.d != self.d:
                raise FieldMismatch(f"d={self.d} vs d={other.d}")
            return other
        if isinstance(other, QuadExt) or (isinstance(other, (int, Fraction)) and not isinstance(other, bool)):
            return ComplexExact(_as_quad(other, self.d), 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexExact(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexExact(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexExact(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexExact(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "ComplexExact":
        return ComplexExact(self.re, -self.im)

    def abs2(self) -> QuadExt:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "ComplexExact":
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("inverse of complex zero")
        return ComplexExact(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Coordinates in Q^4 w.r.t. the Q-basis 1, sqrt d, i, i*sqrt d."""
        return (self.re.q0, self.re.q1, self.im.q0, self.im.q1)

    @classmethod
    def from_coords(cls, c, d: int | None = None) -> "ComplexExact":
        d = _DEFAULT_D if d is None else d
        return cls(QuadExt(c[0], c[1], d), QuadExt(c[2], c[3], d), d)

    def __repr__(self):
        return f"ComplexExact({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"i*({self.im})"
        return f"({self.re}) + i*({self.im})"

    def to_json(self) -> list[str]:
        return [format_rational(q) for q in self.coords()]

    @classmethod
    def from_json(cls, obj, d: int | None = None) -> "ComplexExact":
        if len(obj) != 4:
            raise ValueError(f"complex value needs 4 rational entries, got {obj!r}")
        return cls.from_coords([parse_rational(x) for x in obj], d)


def cross(z: ComplexExact, w: ComplexExact) -> QuadExt:
    """Signed area ``Re z * Im w - Im z * Re w``; zero iff z, w are R-collinear."""
    return z.re * w.im - z.im * w.re


def dot(z: ComplexExact, w: ComplexExact) -> QuadExt:
    return z.re * w.re + z.im * w.im
