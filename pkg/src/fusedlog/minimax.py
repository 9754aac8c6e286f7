"""Exact minimax line fit over a segment's rounded reference points.

The points are integers ``(i, y_i)`` with ``y_i = RN[f(i/1024) * 1024]`` (the
rounded values, not f itself), so the fit is solved exactly in rational
arithmetic: the optimal slope minimises the vertical width of the point set,
and that width is a convex piecewise-linear function of the slope whose
breakpoints are the edge slopes of the upper and lower convex hulls.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from fusedlog.numerics import N_CODES, Mode, reference_table, round_half_away


@dataclass(frozen=True, order=True)
class Segment:
    lo: int
    hi: int  # inclusive
    mode: Mode = Mode.LOG

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        if not 0 <= self.lo <= self.hi < N_CODES:
            raise ValueError(f"bad segment [{self.lo}, {self.hi}]")

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, i: int) -> bool:
        return self.lo <= i <= self.hi

    def points(self) -> list[tuple[int, int]]:
        ref = reference_table(self.mode)
        return [(i, ref[i]) for i in range(self.lo, self.hi + 1)]


@dataclass(frozen=True)
class RealFit:
    """Real-valued line ``a_star * x + b_star`` over x in [0, 1).

    ``slope`` and ``intercept_lsb`` hold the exact rational solution in grid
    units (LSB per code, LSB at code 0); ``mqd_lsb`` is the exact half-width.
    """

    slope: Fraction
    intercept_lsb: Fraction
    mqd: Fraction
    degenerate: bool = False

    @property
    def a_star(self) -> float:
        return float(self.slope)

    @property
    def b_star(self) -> float:
        return float(self.intercept_lsb) / N_CODES

    @property
    def mqd_lsb(self) -> float:
        return float(self.mqd)

    def residuals(self, points) -> list[Fraction]:
        return [self.slope * x + self.intercept_lsb - y for x, y in points]


def _hull(points, upper: bool):
    out: list[tuple[int, int]] = []
    for p in points:
        while len(out) >= 2:
            (x1, y1), (x2, y2) = out[-2], out[-1]
            cross = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
            if (cross >= 0) if upper else (cross <= 0):
                out.pop()
            else:
                break
        out.append(p)
    return out


def _width(points, slope: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    # scaling residuals by the slope denominator keeps integer data integral
    p, q = slope.numerator, slope.denominator
    lo = hi = None
    for x, y in points:
        r = y * q - p * x
        if lo is None or r < lo:
            lo = r
        if hi is None or r > hi:
            hi = r
    return Fraction(hi - lo, q), Fraction(lo, q), Fraction(hi, q)


def minimax_line(points) -> RealFit:
    """Minimax line through rational points (any order, distinct x).

    The width is convex in the slope with derivative x_min - x_max != 0
    between breakpoints, so the optimum is a single hull-edge slope.
    """
    pts = sorted(points)
    if not pts:
        raise ValueError("no points to fit")
    if len(pts) == 1:
        return RealFit(Fraction(0), Fraction(pts[0][1]), Fraction(0), degenerate=True)
    slopes = set()
    for h in (_hull(pts, True), _hull(pts, False)):
        for (x1, y1), (x2, y2) in zip(h, h[1:]):
            slopes.add(Fraction(y2 - y1, x2 - x1))
    _, slope = min((_width(pts, s)[0], s) for s in slopes)
    w, lo, hi = _width(pts, slope)
    return RealFit(slope, (lo + hi) / 2, w / 2)


@lru_cache(maxsize=65536)
def fit_segment(seg: Segment) -> RealFit:
    """Minimax fit of ``seg``'s rounded reference points."""
    return minimax_line(seg.points())


def mhe_bound(fit: RealFit) -> int:
    return round_half_away(fit.mqd)


def extremal_signs(points, fit: RealFit) -> list[tuple[int, int]]:
    """(x, sign) of the points whose residual reaches +-mqd, ordered by x."""
    out = []
    for (x, _), r in sorted(zip(points, fit.residuals(points))):
        if fit.mqd and abs(r) == fit.mqd:
            out.append((x, 1 if r > 0 else -1))
    return out


def has_equioscillation(points, fit: RealFit) -> bool:
    """True if three extremal points alternate in sign, or the fit is exact."""
    if fit.mqd == 0:
        return True
    alternations = 1
    last = None
    for _, s in extremal_signs(points, fit):
        if last is not None and s != last:
            alternations += 1
        last = s
    return alternations >= 3
