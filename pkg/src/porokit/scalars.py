"""Scalar values for exact set geometry.

Two modes are supported and never mixed inside one computation:

- ``exact``: arbitrary-precision rationals (``fractions.Fraction``), always
  normalized to lowest terms with positive denominator.
- ``log``: a nonnegative quantity stored as its base-2 logarithm, held as a
  high-precision ``mpmath.mpf``.  Needed for magnitudes like ``2**(-2**40)``
  whose exact rational form would not fit in memory.  The exact zero is the
  marker ``log2 == -inf``.

Comparisons within a mode are exact (for ``log`` values, exact on the stored
logarithms).  Mixing a ``Fraction`` with a ``LogScalar`` raises ``TypeError``;
plain ``int`` constants (0, 1, 2, ...) are mode-neutral and accepted by both.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

EXACT = "exact"
LOG = "log"

# Precision of the stored logarithms.  160 bits keeps relative errors around
# 2**-150 through the add/sub rounding below, far inside every tolerance used
# by the analysis layers.
LOG_PRECISION_BITS = 160

if mpmath.mp.prec < LOG_PRECISION_BITS:
    mpmath.mp.prec = LOG_PRECISION_BITS

_NEG_INF = mpmath.mpf("-inf")


class LogScalar:
    """A nonnegative value represented by its base-2 logarithm."""

    __slots__ = ("log2",)

    def __init__(self, log2):
        self.log2 = mpmath.mpf(log2)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(_NEG_INF)

    @classmethod
    def from_int(cls, n: int) -> "LogScalar":
        if n < 0:
            raise ValueError("log-domain scalars are nonnegative")
        if n == 0:
            return cls.zero()
        return cls(mpmath.log(n, 2))

    @classmethod
    def from_fraction(cls, q: Fraction) -> "LogScalar":
        if q < 0:
            raise ValueError("log-domain scalars are nonnegative")
        if q == 0:
            return cls.zero()
        return cls(mpmath.log(q.numerator, 2) - mpmath.log(q.denominator, 2))

    @classmethod
    def pow2(cls, exponent) -> "LogScalar":
        """2**exponent with the exponent stored exactly."""
        return cls(mpmath.mpf(exponent))

    # -- predicates --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.log2 == _NEG_INF

    def __bool__(self) -> bool:
        return not self.is_zero

    def __float__(self) -> float:
        if self.is_zero:
            return 0.0
        return float(mpmath.power(2, self.log2))

    def __repr__(self) -> str:
        if self.is_zero:
            return "LogScalar(0)"
        return f"LogScalar(2**{mpmath.nstr(self.log2, 12)})"

    def __hash__(self):
        return hash(("LogScalar", str(self.log2)))

    # -- coercion ----------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, LogScalar):
            return other
        if isinstance(other, int):
            return LogScalar.from_int(other)
        if isinstance(other, (Fraction, float)):
            raise TypeError(
                "cannot mix log-domain scalars with %r; convert explicitly"
                % type(other).__name__
            )
        return NotImplemented

    # -- arithmetic --------------------------------------------------------

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return LogScalar.zero()
        return LogScalar(self.log2 + other.log2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("log-domain division by zero")
        if self.is_zero:
            return LogScalar.zero()
        return LogScalar(self.log2 - other.log2)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        hi, lo = (self.log2, other.log2) if self.log2 >= other.log2 else (other.log2, self.log2)
        return LogScalar(hi + mpmath.log(1 + mpmath.power(2, lo - hi), 2))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            return self
        if self.log2 < other.log2:
            raise ValueError("log-domain subtraction would be negative")
        if self.log2 == other.log2:
            return LogScalar.zero()
        return LogScalar(self.log2 + mpmath.log(1 - mpmath.power(2, other.log2 - self.log2), 2))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    # -- comparisons -------------------------------------------------------

    def _cmp_key(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError("cannot compare log-domain scalar with incompatible type")
        return other

    def __eq__(self, other):
        if isinstance(other, (Fraction, float)):
            return NotImplemented
        try:
            other = self._cmp_key(other)
        except TypeError:
            return NotImplemented
        return self.log2 == other.log2

    def __lt__(self, other):
        return self.log2 < self._cmp_key(other).log2

    def __le__(self, other):
        return self.log2 <= self._cmp_key(other).log2

    def __gt__(self, other):
        return self.log2 > self._cmp_key(other).log2

    def __ge__(self, other):
        return self.log2 >= self._cmp_key(other).log2

    def __abs__(self):
        return self


# -- mode helpers -----------------------------------------------------------


def zero(mode: str):
    return Fraction(0) if mode == EXACT else LogScalar.zero()


def one(mode: str):
    return Fraction(1) if mode == EXACT else LogScalar.from_int(1)


def pow2(exponent: int, mode: str):
    """2**exponent as a scalar of the requested mode."""
    if mode == EXACT:
        if exponent >= 0:
            return Fraction(1 << exponent)
        return Fraction(1, 1 << (-exponent))
    return LogScalar.pow2(exponent)


def coerce(value, mode: str):
    """Convert ``value`` (int, Fraction, str, float, LogScalar) into ``mode``."""
    if isinstance(value, LogScalar):
        if mode == LOG:
            return value
        raise TypeError("cannot convert log-domain scalar to exact mode")
    if isinstance(value, str):
        value = parse_rational(value)
    if isinstance(value, float):
        value = Fraction(value)
    if isinstance(value, int):
        value = Fraction(value)
    if not isinstance(value, Fraction):
        raise TypeError(f"cannot coerce {value!r} to a scalar")
    if mode == EXACT:
        return value
    return LogScalar.from_fraction(value)


def mode_of(value) -> str:
    return LOG if isinstance(value, LogScalar) else EXACT


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" (also accepts "2^-8" style powers of two)."""
    text = text.strip()
    if "^" in text:
        base, _, exp = text.partition("^")
        if base.strip() != "2":
            raise ValueError(f"only powers of 2 supported in caret syntax: {text!r}")
        e = int(exp.strip().lstrip("(").rstrip(")"))
        return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << (-e))
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def scalar_to_str(value) -> str:
    """Serialize a scalar: rationals as "p/q", log-domain as "log2:<decimal>"."""
    if isinstance(value, LogScalar):
        if value.is_zero:
            return "0"
        return "log2:" + mpmath.nstr(value.log2, 24)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    raise TypeError(f"not a scalar: {value!r}")


def as_float(value) -> float:
    """Best-effort float view (tiny magnitudes underflow to 0.0)."""
    if isinstance(value, LogScalar):
        return float(value)
    if isinstance(value, Fraction):
        try:
            return float(value)
        except OverflowError:
            # Denominator wordlengths beyond float range; magnitude ~ 0.
            return 0.0 if abs(value.numerator).bit_length() < value.denominator.bit_length() else float("inf")
    return float(value)
