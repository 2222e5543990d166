"""Exact half-integers (spins, magnetic quantum numbers, orbital labels)."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

_FRAC = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")


@dataclass(frozen=True, order=True)
class HalfInt:
    """A number ``v`` with ``2v`` integral, stored as ``twice = 2v``."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int) or isinstance(self.twice, bool):
            raise TypeError(f"twice must be an int, got {self.twice!r}")

    @classmethod
    def coerce(cls, value) -> "HalfInt":
        """Accept a HalfInt, int, Fraction, float (exact halves only) or string."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a half-integer")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, (Fraction, float)):
            t = 2 * Fraction(value)
            if t.denominator != 1:
                raise ValueError(f"{value!r} is not a multiple of 1/2")
            return cls(int(t))
        raise TypeError(f"cannot interpret {value!r} as a half-integer")

    @classmethod
    def parse(cls, text: str) -> "HalfInt":
        """Parse ``"3/2"``, ``"-1/2"``, ``"2"``, ``".5"`` or ``"1.5"`` exactly."""
        m = _FRAC.match(text)
        if m:
            num, den = int(m.group(1)), int(m.group(2))
            if den == 0:
                raise ValueError(f"zero denominator in {text!r}")
            t = Fraction(2 * num, den)
        else:
            try:
                t = 2 * Fraction(text.strip())
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"cannot parse {text!r} as a half-integer") from None
        if t.denominator != 1:
            raise ValueError(f"{text!r} is not a multiple of 1/2")
        return cls(int(t))

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def floor(self) -> int:
        """Mathematical floor, so floor(-1/2) == -1."""
        return self.twice // 2

    def __float__(self) -> float:
        return self.twice / 2

    def __int__(self) -> int:
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __add__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return HalfInt(self.twice + other.twice)

    __radd__ = __add__

    def __sub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return HalfInt(self.twice - other.twice)

    def __rsub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return HalfInt(other.twice - self.twice)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.twice))

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"

    def to_json(self) -> dict:
        return {"twice": self.twice}

    @classmethod
    def from_json(cls, obj: dict) -> "HalfInt":
        return cls(int(obj["twice"]))


def _maybe(value):
    if isinstance(value, HalfInt):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return HalfInt(2 * value)
    return None


def half(twice: int) -> HalfInt:
    """Shorthand: ``half(3)`` is 3/2."""
    return HalfInt(twice)


def ladder(top: HalfInt, bottom: HalfInt | None = None) -> list[HalfInt]:
    """``top, top-1, ...`` down to ``bottom`` (default ``-top``), inclusive."""
    if bottom is None:
        bottom = -top
    return [HalfInt(t) for t in range(top.twice, bottom.twice - 1, -2)]
