import itertools

import numpy as np
import pytest

from fusedlog.designio import published_design
from fusedlog.design_space import (
    Candidate,
    CandidateSpace,
    InfeasibleSpace,
    _row,
    best_offset,
    build_space,
    min_shift_selection,
    search_min_error,
    search_min_hardware,
    space_csv,
    space_summary,
)
from fusedlog.evaluation import evaluate_design
from fusedlog.hw_model import Datapath, shift_operator_count
from fusedlog.minimax import Segment
from fusedlog.segmentation import plan_from_bounds
from fusedlog.signed_digit import OffsetCode, SignedDigitCoefficient, parse_coefficient, real_value


@pytest.fixture(scope="module")
def log_table1_space():
    d = published_design("log", "recursive")
    return build_space(plan_from_bounds("log", [s.lo for s in d.segments]), 14)


def test_best_offset_table1_first_segment():
    off, err, ok = best_offset(Segment(0, 63, "log"), parse_coefficient("1,-3,6", 14), 14)
    assert ok and off.value == 20


def test_best_offset_two_point_exact():
    # f(0)=0, f(1)=1 under antilog rounding; slope 1 hits both points exactly
    seg = Segment(0, 1, "antilog")
    off, err, ok = best_offset(seg, SignedDigitCoefficient(12), 12)
    assert ok and err == 0


@pytest.mark.parametrize(
    "mode, lo, hi, a, m",
    [("log", 0, 63, "1,-3,6", 11), ("antilog", 0, 127, "-2,-5", 11), ("log", 896, 1023, "-2,-8", 12),
     ("antilog", 896, 1023, "2,4", 12), ("antilog", 300, 340, "-3", 10), ("log", 500, 600, "-3,5,7", 12)],
)
def test_windowed_offset_equals_exhaustive(mode, lo, hi, a, m):
    seg = Segment(lo, hi, mode)
    c = parse_coefficient(a, m)
    assert best_offset(seg, c, m) == best_offset(seg, c, m, exhaustive=True)


def test_space_contains_published_row(log_table1_space):
    row = log_table1_space.rows[0]
    hits = [c for c in row if str(c.coeff) == "1,-3,6"]
    assert hits and hits[0].offset.value == 20 and hits[0].feasible


def test_space_radius_zero_unrepresentable_slope():
    plan = plan_from_bounds("log", [0, 512])
    with pytest.raises(InfeasibleSpace, match=r"segment 0 \[0, 511\]"):
        build_space(plan, 14, radius=0.0)


def test_space_radius_zero_exact_slope():
    # antilog codes 0 and 1 round to 0 and 1, so a* = 1 exactly
    row = _row(0, Segment(0, 1, "antilog"), 12, 0.0, 4, Datapath())
    assert len(row) == 1 and real_value(row[0].coeff) == 1 and row[0].error == 0


def test_space_deterministic(log_table1_space):
    d = published_design("log", "recursive")
    again = build_space(plan_from_bounds("log", [s.lo for s in d.segments]), 14)
    assert space_csv(again) == space_csv(log_table1_space)


def _cand(k, digits, error, m=8):
    c = SignedDigitCoefficient(m, digits)
    return Candidate(k, c, OffsetCode(m, 0), error, 1, c.nonzero - 1 + m, c.nonzero * m, True)


def hand_space():
    m = 8
    plan = plan_from_bounds("log", [0, 512])
    rows = (
        (_cand(0, ((2, 1),), 4), _cand(0, ((3, -1),), 6), _cand(0, ((2, 1), (5, 1)), 4)),
        (_cand(1, ((2, -1),), 10), _cand(1, (), 12), _cand(1, ((2, 1), (4, -1)), 10)),
    )
    return CandidateSpace(plan.mode, m, plan, rows)


def test_summary_hand_oracle():
    s = space_summary(hand_space())
    assert s.min_error_total == 4 + 10
    assert s.min_latency == max(1 + 8, 0 + 8)
    assert s.min_adders == max(2 * 8, 1 * 8)
    assert s.min_csa == 1


def test_summary_single_candidate_rows():
    space = hand_space()
    single = CandidateSpace(space.mode, space.width_m, space.plan, tuple(r[:1] for r in space.rows))
    s = space_summary(single)
    assert s.min_error_total == 14 and s.min_csa == 1 and s.min_adders == 16


def random_rows(rng, n_rows, n_cands, m=10):
    rows = []
    for k in range(n_rows):
        row = []
        for _ in range(n_cands):
            npos = rng.integers(0, 3)
            pos = sorted(rng.choice(np.arange(1, m), size=npos, replace=False).tolist())
            digits = tuple((p, int(rng.choice([-1, 1]))) for p in pos)
            row.append(_cand(k, digits, int(rng.integers(0, 5)), m))
        rows.append(row)
    return rows


@pytest.mark.parametrize("seed", range(15))
def test_min_shift_selection_is_exact(seed):
    rng = np.random.default_rng(seed)
    m = 10
    rows = random_rows(rng, 3 + seed % 3, 2 + seed % 4, m)
    sel = min_shift_selection(rows, m)
    brute = min(
        (shift_operator_count([c.coeff for c in combo], m), sum(c.error for c in combo))
        for combo in itertools.product(*rows)
    )
    assert sel.exact
    assert (sel.shifts, sum(c.error for c in sel.picks)) == brute


def test_min_shift_selection_cap_reports_inexact():
    rng = np.random.default_rng(99)
    rows = random_rows(rng, 8, 6)
    sel = min_shift_selection(rows, 10, cap=3)
    assert not sel.exact
    assert sel.shifts == shift_operator_count([c.coeff for c in sel.picks], 10)


def test_min_error_search(log_table1_space):
    d = search_min_error(log_table1_space)
    rep = evaluate_design(d)
    assert rep.mhe <= 1 and set(rep.histogram) <= {-1, 0, 1}
    assert d.metadata["error_total"] == space_summary(log_table1_space).min_error_total


def test_min_hw_budget_equal_to_floor(log_table1_space):
    floor = space_summary(log_table1_space).min_error_total
    d = search_min_hardware(log_table1_space, error_budget=floor)
    assert d.metadata["error_total"] == search_min_error(log_table1_space).metadata["error_total"]


def test_min_hw_unbounded_and_local_optimality(log_table1_space):
    d = search_min_hardware(log_table1_space)
    m = d.width_m
    shifts = shift_operator_count(d.slopes, m)
    bound = max(min(c.adders for c in row if c.feasible) for row in log_table1_space.rows)
    assert max(a.nonzero * m for a in d.slopes) <= bound
    for k, row in enumerate(log_table1_space.rows):
        for c in row:
            if c.feasible and c.adders <= bound:
                alt = list(d.slopes)
                alt[k] = c.coeff
                assert shift_operator_count(alt, m) >= shifts
    assert evaluate_design(d).mhe <= 1


def test_min_hw_budget_unreachable(log_table1_space):
    with pytest.raises(InfeasibleSpace, match="minimum"):
        search_min_hardware(log_table1_space, error_budget=0)


def test_min_hw_budget_between(log_table1_space):
    free = search_min_hardware(log_table1_space)
    floor = space_summary(log_table1_space).min_error_total
    budget = (free.metadata["error_total"] + floor) // 2
    d = search_min_hardware(log_table1_space, error_budget=budget)
    assert d.metadata["error_total"] <= budget
    assert shift_operator_count(d.slopes, 14) >= shift_operator_count(free.slopes, 14)


def test_space_csv_columns(log_table1_space):
    lines = space_csv(log_table1_space).splitlines()
    assert lines[0] == "segment,lo,hi,a,b,error,mhe,latency,adders,feasible"
    assert len(lines) == 1 + sum(len(r) for r in log_table1_space.rows)
