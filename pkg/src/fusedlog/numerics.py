"""10-bit fixed-point domain, reference functions and rounding conventions.

Inputs are codes ``i`` in [0, 1023] standing for ``x = i / 1024``; outputs are
codes in the same range standing for ``f(x)`` in units of one LSB (2**-10).
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import lru_cache

import mpmath

INPUT_BITS = 10
N_CODES = 1 << INPUT_BITS
LSB = 1.0 / N_CODES

# Working precision for reference evaluation; far more than needed to decide
# the rounding of f(i/1024) * 1024 on this grid.
_WORKING_BITS = 96


class Mode(str, enum.Enum):
    LOG = "log"
    ANTILOG = "antilog"

    @classmethod
    def parse(cls, text: str | Mode) -> Mode:
        if isinstance(text, Mode):
            return text
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown converter mode {text!r}; expected 'log' or 'antilog'") from None


def check_code(i: int) -> int:
    if not isinstance(i, (int,)) or isinstance(i, bool):
        raise TypeError(f"input code must be an int, got {type(i).__name__}")
    if not 0 <= i < N_CODES:
        raise ValueError(f"input code {i} outside [0, {N_CODES - 1}]")
    return i


def round_half_away(v) -> int:
    """Round to nearest integer, ties away from zero.

    Accepts ints, floats, Fractions and mpmath numbers.
    """
    if isinstance(v, Fraction):
        n = abs(v)
        q = math.floor(n + Fraction(1, 2))
        return q if v >= 0 else -q
    if isinstance(v, (int, float)):
        q = math.floor(abs(v) + 0.5)
        return q if v >= 0 else -q
    q = int(mpmath.floor(abs(v) + mpmath.mpf(1) / 2))
    return q if v >= 0 else -q


def exact_value(mode: Mode | str, i: int):
    """f(i / 1024) as an mpmath float at extended precision."""
    mode = Mode.parse(mode)
    with mpmath.workprec(_WORKING_BITS):
        x = mpmath.mpf(i) / N_CODES
        if mode is Mode.LOG:
            return mpmath.log(1 + x) / mpmath.log(2)
        return mpmath.power(2, x) - 1


@lru_cache(maxsize=None)
def _table(mode: Mode) -> tuple[int, ...]:
    out = []
    with mpmath.workprec(_WORKING_BITS):
        for i in range(N_CODES):
            v = round_half_away(exact_value(mode, i) * N_CODES)
            assert 0 <= v < N_CODES, (mode, i, v)
            out.append(v)
    return tuple(out)


@lru_cache(maxsize=None)
def _exact_table(mode: Mode) -> tuple[float, ...]:
    return tuple(float(exact_value(mode, i)) for i in range(N_CODES))


def reference_value(mode: Mode | str, i: int) -> int:
    """RN[f(i/1024) * 1024] with ties away from zero."""
    return _table(Mode.parse(mode))[check_code(i)]


def reference_table(mode: Mode | str) -> tuple[int, ...]:
    """All 1024 rounded reference outputs, indexed by input code."""
    return _table(Mode.parse(mode))


def exact_table(mode: Mode | str) -> tuple[float, ...]:
    """Unrounded f(i/1024) for all codes, correctly rounded to double."""
    return _exact_table(Mode.parse(mode))


def first_derivative(mode: Mode | str, x: float) -> float:
    mode = Mode.parse(mode)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    if mode is Mode.LOG:
        return 1.0 / (math.log(2.0) * (1.0 + x))
    return math.log(2.0) * 2.0**x
