"""End-to-end flows: segment, build the candidate space, search, sweep."""

from __future__ import annotations

from dataclasses import replace

from fusedlog.config import RunConfig
from fusedlog.design_space import (
    InfeasibleSpace,
    build_space,
    search_min_error,
    search_min_hardware,
    space_summary,
)
from fusedlog.hw_model import ConverterDesign
from fusedlog.numerics import Mode
from fusedlog.segmentation import Scheme, SegmentPlan, mqd_flattened_segmentation, recursive_segmentation


def make_plan(mode: Mode | str, scheme: Scheme | str, config: RunConfig) -> SegmentPlan:
    if Scheme(scheme) is Scheme.RECURSIVE:
        return recursive_segmentation(mode, config.split_threshold_lsb)
    if Scheme(scheme) is Scheme.FLATTENED:
        return mqd_flattened_segmentation(mode, config.segments, config.flatten_threshold, config.max_iters)
    raise ValueError(f"cannot generate a plan for scheme {scheme!r}")


def design(mode: Mode | str, scheme: Scheme | str, config: RunConfig = RunConfig(), plan: SegmentPlan | None = None):
    """Run the full flow; returns (design, plan, space)."""
    scheme = Scheme(scheme)
    plan = plan or make_plan(mode, scheme, config)
    m = config.width_for(scheme)
    space = build_space(plan, m, config.radius, config.max_nonzero, config.datapath)
    if config.search == "min-error":
        d = search_min_error(space, config.search_cap)
    else:
        d = search_min_hardware(space, config.error_budget, config.search_cap)
    meta = dict(d.metadata)
    meta["config"] = config.as_dict()
    meta["plan_status"] = plan.status
    meta["plan_mqd_lsb"] = [round(q, 6) for q in plan.per_segment_mqd]
    return replace(d, metadata=meta), plan, space


def sweep(mode: Mode | str, scheme: Scheme | str, m_values, config: RunConfig = RunConfig()) -> list[dict]:
    """Space summary per datapath width; infeasible widths report None."""
    plan = make_plan(mode, scheme, config)
    rows = []
    for m in m_values:
        space = build_space(plan, m, config.radius, config.max_nonzero, config.datapath)
        try:
            s = space_summary(space)
            rows.append(dict(m=m, min_error_total=s.min_error_total, min_csa=s.min_csa,
                             min_adders=s.min_adders, min_latency=s.min_latency, feasible=True))
        except InfeasibleSpace:
            rows.append(dict(m=m, min_error_total=None, min_csa=None, min_adders=None,
                             min_latency=None, feasible=False))
    return rows


def design_table(d: ConverterDesign) -> str:
    """Coefficient table in the published layout."""
    lines = [f"{'10-bit x':>12}  {'a':<14} {d.width_m}-bit b"]
    for seg, (a, b) in zip(d.segments, d.coeffs):
        lines.append(f"{seg.lo:>5} ~ {seg.hi:<4}  {str(a).replace(',', ', '):<14} {b.value}")
    return "\n".join(lines)
