from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusedlog.designio import published_design
from fusedlog.evaluation import (
    compare_reports,
    error_interval,
    evaluate_design,
    fine_histogram_csv,
    objective,
    report_from_outputs,
    stats_csv,
    trace_csv,
    welford,
)
from fusedlog.hw_model import ConverterDesign
from fusedlog.minimax import Segment
from fusedlog.numerics import exact_table, reference_table
from fusedlog.signed_digit import OffsetCode, SignedDigitCoefficient

GOLDEN = Path(__file__).parent / "golden"


def identity_design(mode="log", m=14):
    seg = (Segment(0, 1023, mode),)
    return ConverterDesign(mode, m, seg, ((SignedDigitCoefficient(m), OffsetCode(m, 0)),))


@pytest.mark.parametrize("mode", ["log", "antilog"])
def test_identity_outputs_and_errors(mode):
    rep = evaluate_design(identity_design(mode))
    assert rep.outputs == tuple(range(1024))
    assert rep.per_input_error == tuple(i - r for i, r in enumerate(reference_table(mode)))


@pytest.mark.parametrize("mode", ["log", "antilog"])
def test_reference_outputs_have_zero_error(mode):
    rep = report_from_outputs(reference_table(mode), mode)
    assert rep.mhe == 0 and rep.objective == 0 and rep.histogram == {0: 1024}
    assert max(abs(e) for e in rep.real_error) <= 0.5 / 1024


def test_report_invariants(published):
    rep = evaluate_design(published)
    assert sum(rep.histogram.values()) == 1024
    assert rep.n_plus == rep.histogram.get(1, 0) and rep.n_minus == rep.histogram.get(-1, 0)
    assert rep.objective == objective(rep.per_input_error)
    assert rep.objective == rep.n_plus + rep.n_minus + abs(rep.n_plus - rep.n_minus)
    assert rep.mhe == max(abs(e) for e in rep.per_input_error)


def test_error_interval_contains_truth(published):
    rep = evaluate_design(published)
    f = exact_table(published.mode)
    for x in range(0, 1024, 7):
        lo, hi = error_interval(published, x, rep.mhe)
        assert lo <= f[x] <= hi


def test_error_interval_half_width():
    d = identity_design()
    lo, hi = error_interval(d, 5, mhe=0)
    assert hi - lo == pytest.approx(1 / 1024) and (lo + hi) / 2 == pytest.approx(5 / 1024)
    with pytest.raises(ValueError):
        error_interval(d, 1024)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e-2, 1e-2, allow_nan=False), min_size=1, max_size=300))
def test_welford_matches_two_pass(values):
    mean, std = welford(values)
    assert mean == pytest.approx(np.mean(values), abs=1e-12)
    assert std == pytest.approx(np.std(values), abs=1e-12)


def test_welford_matches_report(published):
    rep = evaluate_design(published)
    mean, std = welford(rep.real_error)
    assert mean == pytest.approx(rep.mean, abs=1e-12) and std == pytest.approx(rep.std, abs=1e-12)


def test_compare_self_is_zero():
    rep = evaluate_design(published_design("log", "recursive"))
    lines = compare_reports(rep, rep).splitlines()
    assert lines[0] == "metric,a,b,delta"
    assert all(float(line.rsplit(",", 1)[1]) == 0 for line in lines[1:])
    assert len(lines) == 1 + 6 + len(rep.histogram)


def test_compare_recursive_vs_flattened_log():
    a = evaluate_design(published_design("log", "recursive"))
    b = evaluate_design(published_design("log", "flattened"))
    assert abs(a.mean) < abs(b.mean) and a.std < b.std
    rows = dict(line.split(",", 1) for line in compare_reports(a, b).splitlines()[1:])
    assert rows["n_plus"] == f"{a.n_plus},{b.n_plus},{b.n_plus - a.n_plus}"


@pytest.mark.parametrize("name", ["table1_log", "table1_antilog", "table2_log", "table2_antilog"])
def test_golden_trace(name):
    mode = "log" if name.endswith("_log") else "antilog"
    scheme = "recursive" if name.startswith("table1") else "flattened"
    got = trace_csv(evaluate_design(published_design(mode, scheme)))
    assert got == (GOLDEN / f"{name}_trace.csv").read_text()


def test_csv_shapes(published):
    rep = evaluate_design(published)
    trace = trace_csv(rep)
    assert trace.count("\n") == 1025 and "\r" not in trace
    fine = fine_histogram_csv(rep).splitlines()
    assert fine[0] == "error_bin_lo,count" and sum(int(r.split(",")[1]) for r in fine[1:]) == 1024
    stats = dict(r.split(",") for r in stats_csv(rep).splitlines()[1:])
    assert int(stats["mhe"]) == rep.mhe and float(stats["std"]) == rep.std
