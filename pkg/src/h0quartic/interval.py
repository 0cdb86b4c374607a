"""Outward-rounded interval arithmetic on binary64.

Every operation widens its floating result by one ulp per side (two for
libm transcendentals, a relative 1e-14 for ``erfc``), so the exact real
result of the same operation on any points of the operands lies inside.
Operands may be mixed with ``int``, ``float`` and ``Fraction``; floats are
taken as exact, ints and fractions are enclosed if they do not round
exactly.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

_INF = math.inf


def _down(x: float, n: int = 1) -> float:
    for _ in range(n):
        if x == -_INF:
            return x
        x = math.nextafter(x, -_INF)
    return x


def _up(x: float, n: int = 1) -> float:
    for _ in range(n):
        if x == _INF:
            return x
        x = math.nextafter(x, _INF)
    return x


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        lo_f, hi_f = _lower(lo), _upper(hi)
        if not lo_f <= hi_f:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo_f
        self.hi = hi_f

    @classmethod
    def _raw(cls, lo: float, hi: float) -> "Interval":
        obj = cls.__new__(cls)
        obj.lo = lo
        obj.hi = hi
        return obj

    @classmethod
    def from_decimal(cls, text: str) -> "Interval":
        """Tight enclosure of a decimal literal such as ``"0.8722"``."""
        return cls(Fraction(text))

    @staticmethod
    def hull(*items) -> "Interval":
        ivs = [_coerce(i) for i in items]
        return Interval._raw(min(i.lo for i in ivs), max(i.hi for i in ivs))

    # -- inspection ---------------------------------------------------
    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, Rational) and not isinstance(x, int):
            return Fraction(self.lo) <= x <= Fraction(self.hi)
        return self.lo <= x <= self.hi

    def split(self) -> tuple["Interval", "Interval"]:
        m = self.mid
        return Interval._raw(self.lo, m), Interval._raw(m, self.hi)

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    # -- arithmetic ---------------------------------------------------
    def __neg__(self) -> "Interval":
        return Interval._raw(-self.hi, -self.lo)

    def __pos__(self) -> "Interval":
        return self

    def __add__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval._raw(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval._raw(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other) -> "Interval":
        return _coerce(other) - self

    def __mul__(self, other) -> "Interval":
        o = _coerce(other)
        p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        p = [0.0 if math.isnan(v) else v for v in p]
        return Interval._raw(_down(min(p)), _up(max(p)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        o = _coerce(other)
        if o.lo <= 0.0 <= o.hi:
            from .errors import DomainError

            raise DomainError(f"division by interval containing zero: {o!r}")
        q = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi]
        return Interval._raw(_down(min(q)), _up(max(q)))

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other) / self

    def __pow__(self, n: int) -> "Interval":
        if not isinstance(n, int) or n < 0:
            raise TypeError("only non-negative integer powers are supported")
        if n == 0:
            return Interval._raw(1.0, 1.0)
        if n % 2 == 0:
            base = self.abs()
        else:
            base = self
        result = base
        for _ in range(n - 1):
            result = result * base
        if n % 2 == 0 and result.lo < 0.0:
            result = Interval._raw(0.0, result.hi)
        return result

    def abs(self) -> "Interval":
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return Interval._raw(0.0, max(-self.lo, self.hi))

    def sqr(self) -> "Interval":
        return self ** 2

    # -- elementary functions -----------------------------------------
    def exp(self) -> "Interval":
        lo = _down(math.exp(self.lo), 2) if self.lo > -745.0 else 0.0
        try:
            hi = _up(math.exp(self.hi), 2)
        except OverflowError:
            hi = _INF
        return Interval._raw(max(lo, 0.0), hi)

    def log(self) -> "Interval":
        if self.lo <= 0.0:
            from .errors import DomainError

            raise DomainError(f"log of non-positive interval {self!r}")
        return Interval._raw(_down(math.log(self.lo), 2), _up(math.log(self.hi), 2))

    def sqrt(self) -> "Interval":
        if self.lo < 0.0:
            from .errors import DomainError

            raise DomainError(f"sqrt of negative interval {self!r}")
        return Interval._raw(_down(math.sqrt(self.lo)), _up(math.sqrt(self.hi)))

    def erfc(self) -> "Interval":
        # erfc is decreasing; glibc is accurate to a few ulps, 1e-14 covers it.
        hi = math.erfc(self.lo)
        lo = math.erfc(self.hi)
        return Interval._raw(max(0.0, _down(lo * (1.0 - 1e-14))), _up(hi * (1.0 + 1e-14)))

    # -- certain comparisons ------------------------------------------
    def certainly_lt(self, other) -> bool:
        return self.hi < _coerce(other).lo

    def certainly_le(self, other) -> bool:
        return self.hi <= _coerce(other).lo

    def certainly_gt(self, other) -> bool:
        return self.lo > _coerce(other).hi

    def certainly_ge(self, other) -> bool:
        return self.lo >= _coerce(other).hi


def _lower(x) -> float:
    if isinstance(x, Interval):
        return x.lo
    if isinstance(x, float):
        return x
    f = float(x)
    if isinstance(x, Rational) and Fraction(f) != x:
        return _down(f) if Fraction(f) > x else f
    return f


def _upper(x) -> float:
    if isinstance(x, Interval):
        return x.hi
    if isinstance(x, float):
        return x
    f = float(x)
    if isinstance(x, Rational) and Fraction(f) != x:
        return _up(f) if Fraction(f) < x else f
    return f


def _coerce(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval(x)


def iv(x, y=None) -> Interval:
    """Shorthand constructor."""
    return Interval(x, y)


def exp(x) -> Interval:
    return _coerce(x).exp()


def log(x) -> Interval:
    return _coerce(x).log()


def sqrt(x) -> Interval:
    return _coerce(x).sqrt()


PI = Interval._raw(math.pi, _up(math.pi))
SQRT2 = sqrt(2)
SQRT3 = sqrt(3)
