"""Scalar arithmetic of the max-plus semiring.

The carrier is the real line extended with a bottom element: addition
``oplus`` is max, multiplication ``odot`` is ordinary +, the additive
identity is bottom (spelled ``-inf`` in file formats) and the
multiplicative identity is 0.  Addition is idempotent, x (+) x = x, and
every finite element has a multiplicative inverse (its negation), which
makes the structure a semifield.

Bottom is a tagged case, not an IEEE ``-inf`` payload, so that arithmetic
on finite values can never silently manufacture infinities.  Conversion to
and from raw floats is confined to :meth:`MaxPlusValue.from_float` and
:meth:`MaxPlusValue.as_float`, meant for serialization boundaries only.
"""

import math
from collections.abc import Iterable

__all__ = ["MaxPlusValue", "BOTTOM", "ONE", "oplus", "odot", "big_oplus"]


class MaxPlusValue:
    """A max-plus scalar: a finite IEEE double, or the bottom element."""

    __slots__ = ("_value",)

    def __init__(self, value: float | None = None):
        if value is None:
            self._value: float | None = None
            return
        v = float(value)
        if not math.isfinite(v):
            raise ValueError(
                f"finite value required, got {v!r} (use from_float to admit -inf)"
            )
        self._value = v

    @property
    def is_bottom(self) -> bool:
        return self._value is None

    @property
    def value(self) -> float:
        """The finite payload; raises on bottom."""
        if self._value is None:
            raise ValueError("bottom carries no finite value")
        return self._value

    @classmethod
    def from_float(cls, raw: float) -> "MaxPlusValue":
        """Boundary conversion: -inf becomes bottom, finite stays finite."""
        raw = float(raw)
        if raw == -math.inf:
            return BOTTOM
        return cls(raw)

    def as_float(self) -> float:
        """Boundary conversion: bottom becomes IEEE -inf."""
        return -math.inf if self._value is None else self._value

    def __eq__(self, other) -> bool:
        if not isinstance(other, MaxPlusValue):
            return NotImplemented
        return self._value == other._value or (self.is_bottom and other.is_bottom)

    def __hash__(self) -> int:
        return hash(self._value)

    def __repr__(self) -> str:
        if self._value is None:
            return "MaxPlusValue(bottom)"
        return f"MaxPlusValue({self._value!r})"


#: Additive identity (the semiring zero).
BOTTOM = MaxPlusValue()

#: Multiplicative identity (the semiring unit).
ONE = MaxPlusValue(0.0)


def oplus(a: MaxPlusValue, b: MaxPlusValue) -> MaxPlusValue:
    """Max-plus addition: the maximum, with bottom as least element."""
    if a.is_bottom:
        return b
    if b.is_bottom:
        return a
    return a if a._value >= b._value else b


def odot(a: MaxPlusValue, b: MaxPlusValue) -> MaxPlusValue:
    """Max-plus multiplication: ordinary +, with bottom absorbing.

    Raises OverflowError if the sum of two finite payloads leaves the
    finite range, rather than returning an infinity.
    """
    if a.is_bottom or b.is_bottom:
        return BOTTOM
    s = a._value + b._value
    if not math.isfinite(s):
        raise OverflowError(f"max-plus product overflowed: {a!r} (x) {b!r}")
    return MaxPlusValue(s)


def big_oplus(xs: Iterable[MaxPlusValue]) -> MaxPlusValue:
    """Fold of oplus; the empty fold is bottom."""
    acc = BOTTOM
    for x in xs:
        acc = oplus(acc, x)
    return acc
