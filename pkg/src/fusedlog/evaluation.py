"""Full-domain error statistics for a converter design."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from fusedlog.hw_model import ConverterDesign, evaluate_all
from fusedlog.numerics import N_CODES, check_code, exact_table, reference_table


@dataclass(frozen=True)
class ErrorReport:
    per_input_error: tuple[int, ...]  # signed, in LSB, against RN[f(x)]
    outputs: tuple[int, ...]
    real_error: tuple[float, ...]  # output/1024 - f(x)
    mhe: int
    n_plus: int
    n_minus: int
    objective: int
    mean_abs_error_real: float
    std_abs_error_real: float
    histogram: dict[int, int]

    @property
    def mean(self) -> float:
        return self.mean_abs_error_real

    @property
    def std(self) -> float:
        return self.std_abs_error_real


def objective(errors) -> int:
    """N(+1) + N(-1) + |N(+1) - N(-1)|: few +-1 errors, balanced in sign."""
    errors = np.asarray(errors)
    n_plus = int(np.count_nonzero(errors == 1))
    n_minus = int(np.count_nonzero(errors == -1))
    return n_plus + n_minus + abs(n_plus - n_minus)


def report_from_outputs(outputs, mode) -> ErrorReport:
    out = np.asarray(outputs, dtype=np.int64)
    ref = np.asarray(reference_table(mode), dtype=np.int64)
    err = out - ref
    # output/1024 and f(x) are both near 1, so the difference is exact enough
    # in double: outputs are dyadic and f is correctly rounded
    real = out / N_CODES - np.asarray(exact_table(mode))
    n_plus = int(np.count_nonzero(err == 1))
    n_minus = int(np.count_nonzero(err == -1))
    return ErrorReport(
        per_input_error=tuple(int(e) for e in err),
        outputs=tuple(int(o) for o in out),
        real_error=tuple(float(r) for r in real),
        mhe=int(np.max(np.abs(err))),
        n_plus=n_plus,
        n_minus=n_minus,
        objective=n_plus + n_minus + abs(n_plus - n_minus),
        mean_abs_error_real=float(np.mean(real)),
        std_abs_error_real=float(np.std(real)),
        histogram=dict(sorted(Counter(int(e) for e in err).items())),
    )


def evaluate_design(design: ConverterDesign) -> ErrorReport:
    return report_from_outputs(evaluate_all(design), design.mode)


def error_interval(design: ConverterDesign, x: int, mhe: int | None = None) -> tuple[float, float]:
    """Interval guaranteed to contain f(x/1024): output +- (MHE + 1/2) LSB."""
    check_code(x)
    if mhe is None:
        mhe = evaluate_design(design).mhe
    hw = int(evaluate_all(design, [x])[0])
    half = (mhe + 0.5) / N_CODES
    return hw / N_CODES - half, hw / N_CODES + half


def welford(values) -> tuple[float, float]:
    """Single-pass mean and population standard deviation."""
    n = 0
    mean = 0.0
    m2 = 0.0
    for v in values:
        n += 1
        d = v - mean
        mean += d / n
        m2 += d * (v - mean)
    return mean, math.sqrt(m2 / n)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def trace_csv(report: ErrorReport) -> str:
    rows = ((i, o, e) for i, (o, e) in enumerate(zip(report.outputs, report.per_input_error)))
    return _csv(rows, ["x", "output", "error_lsb"])


def histogram_csv(report: ErrorReport) -> str:
    return _csv(sorted(report.histogram.items()), ["error_lsb", "count"])


def fine_histogram_csv(report: ErrorReport, bins_per_lsb: int = 1) -> str:
    """Histogram of the real-valued error, bins aligned at zero.

    Default bin width is one LSB (1/1024 of the unit interval); the column
    holds each bin's lower edge in units of the unit interval.
    """
    width = 1.0 / (N_CODES * bins_per_lsb)
    counts = Counter(math.floor(e / width) for e in report.real_error)
    return _csv(((_fmt(k * width), c) for k, c in sorted(counts.items())), ["error_bin_lo", "count"])


def stats_rows(report: ErrorReport) -> list[tuple[str, object]]:
    return [
        ("mhe", report.mhe),
        ("n_plus", report.n_plus),
        ("n_minus", report.n_minus),
        ("objective", report.objective),
        ("mean", report.mean),
        ("std", report.std),
    ]


def stats_csv(report: ErrorReport) -> str:
    return _csv(((k, _fmt(v)) for k, v in stats_rows(report)), ["metric", "value"])


def compare_reports(a: ErrorReport, b: ErrorReport) -> str:
    """Side-by-side CSV of the summary metrics and histogram counts."""
    rows = [(k, _fmt(va), _fmt(vb), _fmt(vb - va)) for (k, va), (_, vb) in zip(stats_rows(a), stats_rows(b))]
    for e in sorted(set(a.histogram) | set(b.histogram)):
        ca, cb = a.histogram.get(e, 0), b.histogram.get(e, 0)
        rows.append((f"hist[{e}]", ca, cb, cb - ca))
    return _csv(rows, ["metric", "a", "b", "delta"])
