"""Signed-digit slope coefficients with an implicit +1 integer bit.

The text form follows the coefficient tables: ``"1,-3,6"`` means
``1 + 2**-1 - 2**-3 + 2**-6``. Strict CSD canonicality (no adjacent nonzero
digits) is not enforced, since the published slopes themselves violate it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class CoefficientError(ValueError):
    pass


class EmptyNeighborhood(LookupError):
    """No coefficient lies within the requested radius; callers may widen it."""


@dataclass(frozen=True, order=True)
class SignedDigitCoefficient:
    width_m: int
    # (position, sign) pairs sorted by position; position p weighs 2**-p
    digits: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.width_m < 2:
            raise CoefficientError(f"width_m must be >= 2, got {self.width_m}")
        seen = set()
        for p, s in self.digits:
            if s not in (-1, 1):
                raise CoefficientError(f"digit sign must be +1 or -1, got {s}")
            if not 1 <= p <= self.width_m - 1:
                raise CoefficientError(f"digit position {p} outside [1, {self.width_m - 1}]")
            if p in seen:
                raise CoefficientError(f"duplicate digit position {p}")
            seen.add(p)
        object.__setattr__(self, "digits", tuple(sorted(self.digits)))

    @property
    def value(self) -> Fraction:
        return real_value(self)

    @property
    def nonzero(self) -> int:
        return nonzero_count(self)

    def digit(self, position: int) -> int:
        for p, s in self.digits:
            if p == position:
                return s
        return 0

    def digit_vector(self) -> tuple[int, ...]:
        """Digits at fractional positions 1..m-1 (0 where absent)."""
        vec = [0] * (self.width_m - 1)
        for p, s in self.digits:
            vec[p - 1] = s
        return tuple(vec)

    def with_width(self, width_m: int) -> SignedDigitCoefficient:
        return SignedDigitCoefficient(width_m, self.digits)

    def __str__(self) -> str:
        return format_coefficient(self)


def parse_coefficient(text: str, width_m: int) -> SignedDigitCoefficient:
    """Parse the table notation, e.g. ``"1, -3, 6"`` or ``"(1, -3)"``."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    body = body.replace("−", "-")
    digits = []
    if body.strip():
        for tok in body.split(","):
            tok = tok.strip()
            try:
                k = int(tok)
            except ValueError:
                raise CoefficientError(f"bad digit {tok!r} in {text!r}") from None
            if k == 0:
                raise CoefficientError(f"digit position 0 is the implicit integer bit, in {text!r}")
            digits.append((abs(k), 1 if k > 0 else -1))
    positions = [p for p, _ in digits]
    if len(set(positions)) != len(positions):
        raise CoefficientError(f"duplicate digit position in {text!r}")
    return SignedDigitCoefficient(width_m, tuple(digits))


def format_coefficient(c: SignedDigitCoefficient) -> str:
    return ",".join(str(p * s) for p, s in c.digits)


def real_value(c: SignedDigitCoefficient) -> Fraction:
    return 1 + sum((Fraction(s, 1 << p) for p, s in c.digits), Fraction(0))


def nonzero_count(c: SignedDigitCoefficient) -> int:
    # the implicit integer bit is a term of the adder tree too
    return 1 + len(c.digits)


@lru_cache(maxsize=32)
def _all_coefficients(width_m: int, max_nonzero: int) -> tuple[tuple[Fraction, SignedDigitCoefficient], ...]:
    by_value: dict[Fraction, SignedDigitCoefficient] = {}
    positions = range(1, width_m)
    for k in range(max_nonzero):
        for pos in itertools.combinations(positions, k):
            for signs in itertools.product((1, -1), repeat=k):
                c = SignedDigitCoefficient(width_m, tuple(zip(pos, signs)))
                v = real_value(c)
                old = by_value.get(v)
                if old is None or (len(c.digits), c.digits) < (len(old.digits), old.digits):
                    by_value[v] = c
    return tuple(sorted(by_value.items()))


def enumerate_near(center: float, width_m: int, max_nonzero: int, radius: float) -> list[SignedDigitCoefficient]:
    """All coefficients within ``radius`` of ``center`` using at most
    ``max_nonzero`` terms, one per distinct value, nearest first.

    Raises EmptyNeighborhood when nothing qualifies.
    """
    if max_nonzero < 1:
        raise ValueError("max_nonzero must be >= 1")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    c0 = Fraction(center)
    r = Fraction(radius)
    hits = [(abs(v - c0), len(c.digits), v, c) for v, c in _all_coefficients(width_m, max_nonzero) if abs(v - c0) <= r]
    if not hits:
        raise EmptyNeighborhood(f"no {width_m}-bit coefficient with <= {max_nonzero} terms within {radius} of {center}")
    hits.sort(key=lambda t: t[:3])
    return [h[3] for h in hits]


@dataclass(frozen=True)
class OffsetCode:
    """Offset b in units of 2**-m inside the modular m-bit datapath."""

    width_m: int
    value: int

    def __post_init__(self):
        if not 0 <= self.value < (1 << self.width_m):
            raise CoefficientError(f"offset {self.value} outside [0, 2**{self.width_m})")
