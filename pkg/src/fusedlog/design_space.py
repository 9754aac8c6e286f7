"""Latency-Area-Precision candidate space and the two selection searches."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field

import numpy as np

from fusedlog.hw_model import ConverterDesign, Datapath, datapath_sum, output_stage, shift_operator_count
from fusedlog.minimax import Segment, fit_segment
from fusedlog.numerics import INPUT_BITS, Mode, reference_table
from fusedlog.segmentation import SegmentPlan
from fusedlog.signed_digit import EmptyNeighborhood, OffsetCode, SignedDigitCoefficient, enumerate_near, format_coefficient

log = logging.getLogger(__name__)

DEFAULT_RADIUS = 2.0**-4
DEFAULT_MAX_NONZERO = 4
DEFAULT_SEARCH_CAP = 10**6


class InfeasibleSpace(RuntimeError):
    pass


@dataclass(frozen=True)
class Candidate:
    segment_index: int
    coeff: SignedDigitCoefficient
    offset: OffsetCode
    error: int
    mhe: int
    latency: int
    adders: int
    feasible: bool

    @property
    def csa(self) -> int:
        return self.coeff.nonzero - 1


@dataclass(frozen=True)
class CandidateSpace:
    mode: Mode
    width_m: int
    plan: SegmentPlan
    rows: tuple[tuple[Candidate, ...], ...]
    datapath: Datapath = Datapath()
    settings: dict = field(default_factory=dict, compare=False)

    def feasible_rows(self) -> list[list[Candidate]]:
        rows = [[c for c in row if c.feasible] for row in self.rows]
        for k, row in enumerate(rows):
            if not row:
                seg = self.plan.segments[k]
                raise InfeasibleSpace(
                    f"segment {k} [{seg.lo}, {seg.hi}] has no candidate with |error| <= 1 at m={self.width_m}"
                )
        return rows


def _scan(seg: Segment, coeff: SignedDigitCoefficient, width_m: int, offsets: np.ndarray, datapath: Datapath):
    codes = np.arange(seg.lo, seg.hi + 1)
    ref = np.asarray(reference_table(seg.mode)[seg.lo : seg.hi + 1])
    base = datapath_sum(coeff, 0, codes, width_m)
    mask = (1 << width_m) - 1
    sums = (base[None, :] + offsets[:, None]) & mask
    err = output_stage(sums, codes[None, :], width_m, datapath) - ref[None, :]
    mhe = np.max(np.abs(err), axis=1)
    n_plus = np.count_nonzero(err == 1, axis=1)
    n_minus = np.count_nonzero(err == -1, axis=1)
    return mhe, n_plus + n_minus + np.abs(n_plus - n_minus)


def _choose(offsets, mhe, obj, width_m):
    feasible = mhe <= 1
    if np.any(feasible):
        # lowest objective; ties go to the smallest offset code
        key = np.where(feasible, obj, np.iinfo(np.int64).max)
        j = int(np.lexsort((offsets, key))[0])
        return OffsetCode(width_m, int(offsets[j])), int(obj[j]), int(mhe[j]), True
    j = int(np.lexsort((offsets, obj, mhe))[0])
    return OffsetCode(width_m, int(offsets[j])), int(obj[j]), int(mhe[j]), False


def best_offset(
    seg: Segment,
    coeff: SignedDigitCoefficient,
    width_m: int,
    datapath: Datapath = Datapath(),
    exhaustive: bool = False,
) -> tuple[OffsetCode, int, bool]:
    """Offset minimising the error objective among offsets with |error| <= 1.

    The scanned window is the exact interval of offsets that keep every
    unsaturated output within one LSB, padded by one output LSB on both sides
    for saturation effects; with ``exhaustive`` all 2**m offsets are scanned.
    If nothing is feasible the offset with the smallest MHE is returned.
    """
    off, err, _, ok = _best_offset(seg, coeff, width_m, datapath, exhaustive)
    return off, err, ok


def _best_offset(seg, coeff, width_m, datapath=Datapath(), exhaustive=False):
    size = 1 << width_m
    if exhaustive or width_m <= INPUT_BITS:
        offsets = np.arange(size, dtype=np.int64)
        return _choose(offsets, *_scan(seg, coeff, width_m, offsets, datapath), width_m)
    shift = width_m - INPUT_BITS
    unit = 1 << shift
    codes = np.arange(seg.lo, seg.hi + 1, dtype=np.int64)
    ref = np.asarray(reference_table(seg.mode)[seg.lo : seg.hi + 1], dtype=np.int64)
    # unwrapped value of the sum without offset: each complemented term is -(t+1)
    X = codes << shift
    base = X.copy()
    for p, s in coeff.digits:
        base += (X >> p) if s > 0 else -((X >> p) + 1)
    if datapath.rounding == "nearest":
        base += unit >> 1
    lo = int(np.max((ref - 1) * unit - base))
    hi = int(np.min((ref + 2) * unit - 1 - base))
    if lo > hi:
        # infeasible: search around the offset centring the residual band
        mid = (int(np.max(ref * unit - base)) + int(np.min((ref + 1) * unit - base))) // 2
        lo, hi = mid - 3 * unit, mid + 3 * unit
    offsets = np.unique(np.arange(lo - unit, hi + unit + 1, dtype=np.int64) % size)
    return _choose(offsets, *_scan(seg, coeff, width_m, offsets, datapath), width_m)


def _row(k, seg, width_m, radius, max_nonzero, datapath):
    fit = fit_segment(seg)
    try:
        coeffs = enumerate_near(fit.a_star, width_m, max_nonzero, radius)
    except EmptyNeighborhood:
        return []
    out = []
    for c in coeffs:
        off, err, mhe, ok = _best_offset(seg, c, width_m, datapath)
        out.append(Candidate(k, c, off, err, mhe, c.nonzero - 1 + width_m, c.nonzero * width_m, ok))
    # stable sort keeps nearest-to-a* first among equals
    out.sort(key=lambda c: (not c.feasible, c.error, c.adders))
    return out


def build_space(
    plan: SegmentPlan,
    width_m: int,
    radius: float = DEFAULT_RADIUS,
    max_nonzero: int = DEFAULT_MAX_NONZERO,
    datapath: Datapath = Datapath(),
) -> CandidateSpace:
    """Quantised candidates for every segment of ``plan``.

    A row with no feasible candidate is rebuilt once at twice the radius;
    infeasible candidates stay in the rows, flagged.
    """
    rows = []
    for k, seg in enumerate(plan.segments):
        row = _row(k, seg, width_m, radius, max_nonzero, datapath)
        if not any(c.feasible for c in row):
            log.info("segment %d: widening neighbourhood to %g", k, 2 * radius)
            row = _row(k, seg, width_m, 2 * radius, max_nonzero, datapath)
        if not row:
            raise InfeasibleSpace(f"segment {k} [{seg.lo}, {seg.hi}]: no coefficient within {2 * radius} of a*")
        rows.append(tuple(row))
    settings = {"radius": radius, "max_nonzero": max_nonzero, "width_m": width_m}
    return CandidateSpace(plan.mode, width_m, plan, tuple(rows), datapath, settings)


@dataclass(frozen=True)
class SpaceSummary:
    min_error_total: int
    min_latency: int
    min_adders: int
    min_csa: int


def space_summary(space: CandidateSpace) -> SpaceSummary:
    rows = space.feasible_rows()
    return SpaceSummary(
        min_error_total=sum(min(c.error for c in row) for row in rows),
        min_latency=max(min(c.latency for c in row) for row in rows),
        min_adders=max(min(c.adders for c in row) for row in rows),
        min_csa=max(min(c.csa for c in row) for row in rows),
    )


def space_csv(space: CandidateSpace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["segment", "lo", "hi", "a", "b", "error", "mhe", "latency", "adders", "feasible"])
    for k, row in enumerate(space.rows):
        seg = space.plan.segments[k]
        for c in row:
            w.writerow([k, seg.lo, seg.hi, format_coefficient(c.coeff), c.offset.value, c.error, c.mhe,
                        c.latency, c.adders, int(c.feasible)])
    return buf.getvalue()


@dataclass
class Selection:
    picks: list[Candidate]
    shifts: int
    exact: bool
    nodes: int


def min_shift_selection(
    rows, width_m: int, cap: int = DEFAULT_SEARCH_CAP, error_budget: int | None = None
) -> Selection:
    """One candidate per row minimising (shift operators, total error).

    With ``error_budget`` only selections whose total error stays within it
    are admitted; the budget must be at least the sum of the row minima.

    Depth-first branch and bound over rows. The per-position digit spread of
    a partial selection can only grow, so it bounds the shift count; the sum
    of the remaining rows' minimum errors bounds the error. Candidates with
    identical digits are collapsed to the lowest-error one. Past ``cap``
    expanded nodes the best selection so far is returned with ``exact=False``.
    """
    reduced = []
    for row in rows:
        by_digits: dict = {}
        for c in row:
            if c.coeff.digits not in by_digits or c.error < by_digits[c.coeff.digits].error:
                by_digits[c.coeff.digits] = c
        reduced.append(list(by_digits.values()))
    order = sorted(range(len(reduced)), key=lambda k: (len(reduced[k]), k))
    rows_o = [reduced[k] for k in order]
    vecs = [[np.array(c.coeff.digit_vector(), dtype=np.int8) for c in row] for row in rows_o]
    tail_err = [0] * (len(rows_o) + 1)
    for i in range(len(rows_o) - 1, -1, -1):
        tail_err[i] = tail_err[i + 1] + min(c.error for c in rows_o[i])
    if error_budget is not None and error_budget < tail_err[0]:
        raise InfeasibleSpace(f"error budget {error_budget} below the minimum {tail_err[0]}")

    best: list = [None, None, None]  # shifts, error, picks
    nodes = 0
    path: list[int] = []

    def dfs(i, lo, hi, err):
        nonlocal nodes
        nodes += 1
        if i == len(rows_o):
            best[:] = [int(np.sum(hi - lo)), err, list(path)]
            return True
        options = []
        for j, v in enumerate(vecs[i]):
            nlo, nhi = np.minimum(lo, v), np.maximum(hi, v)
            options.append((int(np.sum(nhi - nlo)), rows_o[i][j].error, j, nlo, nhi))
        options.sort(key=lambda t: t[:3])
        for bound, e, j, nlo, nhi in options:
            if error_budget is not None and err + e + tail_err[i + 1] > error_budget:
                continue
            if best[0] is not None and (bound, err + e + tail_err[i + 1]) >= (best[0], best[1]):
                if bound >= best[0]:
                    break
                continue
            if nodes > cap and best[0] is not None:
                return False
            path.append(j)
            ok = dfs(i + 1, nlo, nhi, err + e)
            path.pop()
            if not ok:
                return False
        return True

    # start from an empty spread: lo above hi so the first pick sets both
    exact = dfs(0, np.ones(width_m - 1, dtype=np.int8), -np.ones(width_m - 1, dtype=np.int8), 0)
    picks: list = [None] * len(order)
    for i, j in enumerate(best[2]):
        picks[order[i]] = rows_o[i][j]
    shifts = shift_operator_count([c.coeff for c in picks], width_m)
    assert shifts == best[0], (shifts, best[0])
    return Selection(picks, shifts, exact, nodes)


def _adder_prune(rows):
    bound = max(min(c.adders for c in row) for row in rows)
    return [[c for c in row if c.adders <= bound] for row in rows], bound


def _design(space: CandidateSpace, sel: Selection, search: str, cap: int, extra=None) -> ConverterDesign:
    meta = dict(space.settings)
    meta.update(
        search=search,
        search_cap=cap,
        search_exact=sel.exact,
        search_nodes=sel.nodes,
        error_total=sum(c.error for c in sel.picks),
    )
    meta.update(extra or {})
    return ConverterDesign(
        space.mode,
        space.width_m,
        space.plan.segments,
        tuple((c.coeff, c.offset) for c in sel.picks),
        space.plan.scheme,
        space.datapath,
        meta,
    )


def search_min_error(space: CandidateSpace, cap: int = DEFAULT_SEARCH_CAP) -> ConverterDesign:
    rows = space.feasible_rows()
    # keep each row's minimum-error candidates
    rows = [[c for c in row if c.error == min(x.error for x in row)] for row in rows]
    # drop candidates needing more adders than the bound over survivors
    rows, _ = _adder_prune(rows)
    # fewest right-shift operators
    sel = min_shift_selection(rows, space.width_m, cap)
    return _design(space, sel, "min-error", cap)


def search_min_hardware(
    space: CandidateSpace, error_budget: int | None = None, cap: int = DEFAULT_SEARCH_CAP
) -> ConverterDesign:
    """Fewest adders, then fewest shift operators, within an error budget.

    The budget is enforced inside the branch and bound, so the result is the
    fewest-shift selection among those meeting it.
    """
    rows, bound = _adder_prune(space.feasible_rows())
    floor = sum(min(c.error for c in row) for row in rows)
    if error_budget is not None and error_budget < floor:
        raise InfeasibleSpace(
            f"error budget {error_budget} below the minimum {floor} reachable at {bound} adders "
            f"(space minimum {space_summary(space).min_error_total})"
        )
    sel = min_shift_selection(rows, space.width_m, cap, error_budget)
    return _design(space, sel, "min-hardware", cap, {"error_budget": error_budget})
