"""Recursive-bisection and MQD-flattened segmentation of the input domain."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

from fusedlog.minimax import Segment, fit_segment
from fusedlog.numerics import N_CODES, Mode

log = logging.getLogger(__name__)

SUB_SEGMENT = 16
N_SUB = N_CODES // SUB_SEGMENT  # 64


class Scheme(str, enum.Enum):
    RECURSIVE = "recursive"
    FLATTENED = "flattened"
    PUBLISHED = "published"


@dataclass(frozen=True)
class SegmentPlan:
    mode: Mode
    segments: tuple[Segment, ...]
    scheme: Scheme
    per_segment_mqd: tuple[float, ...]
    # "converged", or why the flattening loop stopped early
    status: str = "converged"
    iterations: int = 0
    history: tuple[float, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        check_tiling(self.segments)

    @property
    def boundaries(self) -> list[int]:
        return [s.lo for s in self.segments]

    @property
    def mqd_range(self) -> float:
        return max(self.per_segment_mqd) - min(self.per_segment_mqd)

    @property
    def flagged(self) -> bool:
        return self.status != "converged"


def check_tiling(segments) -> None:
    if not segments:
        raise ValueError("empty segment list")
    expected = 0
    for s in segments:
        if s.lo != expected:
            raise ValueError(f"segments do not tile [0, {N_CODES - 1}]: gap or overlap at {expected}")
        expected = s.hi + 1
    if expected != N_CODES:
        raise ValueError(f"segments end at {expected - 1}, not {N_CODES - 1}")


def plan_from_bounds(mode: Mode, lows, scheme: Scheme = Scheme.PUBLISHED, **kw) -> SegmentPlan:
    """Plan from segment start codes, e.g. ``[0, 64, 128, ...]``."""
    mode = Mode.parse(mode)
    edges = list(lows) + [N_CODES]
    segs = tuple(Segment(a, b - 1, mode) for a, b in zip(edges, edges[1:]))
    return SegmentPlan(mode, segs, scheme, tuple(fit_segment(s).mqd_lsb for s in segs), **kw)


def recursive_segmentation(mode: Mode | str, split_threshold_lsb: float = 1.5) -> SegmentPlan:
    mode = Mode.parse(mode)
    if not split_threshold_lsb > 0:
        raise ValueError("split threshold must be positive")
    half = N_CODES // 2
    stack = [Segment(half, N_CODES - 1, mode), Segment(0, half - 1, mode)]
    done = []
    while stack:
        seg = stack.pop()
        if fit_segment(seg).mqd_lsb > split_threshold_lsb:
            # two points always fit exactly, so a splittable segment has >= 3
            assert len(seg) > 2, seg
            mid = (seg.lo + seg.hi + 1) // 2
            stack.append(Segment(mid, seg.hi, mode))
            stack.append(Segment(seg.lo, mid - 1, mode))
        else:
            done.append(seg)
    return plan_from_bounds(mode, [s.lo for s in done], Scheme.RECURSIVE)


def _region_mqds(mode: Mode, regions) -> list[float]:
    out, lo = [], 0
    for r in regions:
        hi = lo + r * SUB_SEGMENT
        out.append(fit_segment(Segment(lo, hi - 1, mode)).mqd_lsb)
        lo = hi
    return out


def _initial_regions(s: int) -> list[int]:
    base, extra = divmod(N_SUB, s)
    return [base + (1 if k < extra else 0) for k in range(s)]


def mqd_flattened_segmentation(
    mode: Mode | str, s: int = 8, threshold: float = 0.25, max_iters: int = 1000
) -> SegmentPlan:
    """Move one 16-code sub-segment per step from the worst-fitting region to
    the best-fitting one until the MQD spread is at most ``threshold``.

    Regions are contiguous, so a move shifts every boundary in between. If a
    region-size vector repeats, no further move is possible, or ``max_iters``
    runs out, the plan with the smallest spread seen so far is returned with a
    non-"converged" status.
    """
    mode = Mode.parse(mode)
    if not 2 <= s <= N_SUB:
        raise ValueError(f"segment count {s} outside [2, {N_SUB}]")
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    regions = _initial_regions(s)
    seen: set[tuple[int, ...]] = set()
    best: tuple[float, list[int]] | None = None
    history = []
    status = "max_iters"
    it = 0
    for it in range(max_iters + 1):
        mqd = _region_mqds(mode, regions)
        spread = max(mqd) - min(mqd)
        history.append(spread)
        if best is None or spread < best[0]:
            best = (spread, list(regions))
        if spread <= threshold:
            status = "converged"
            break
        if it == max_iters:
            break
        key = tuple(regions)
        if key in seen:
            status = "oscillation"
            break
        seen.add(key)
        k_max = mqd.index(max(mqd))
        k_min = mqd.index(min(mqd))
        if regions[k_max] <= 1:
            status = "saturated"
            break
        regions[k_max] -= 1
        regions[k_min] += 1
    chosen = regions if status == "converged" else best[1]
    if status != "converged":
        log.info("flattening stopped (%s) after %d steps; best spread %.4f", status, it, best[0])
    lows, lo = [], 0
    for r in chosen:
        lows.append(lo)
        lo += r * SUB_SEGMENT
    return plan_from_bounds(mode, lows, Scheme.FLATTENED, status=status, iterations=it, history=tuple(history))
