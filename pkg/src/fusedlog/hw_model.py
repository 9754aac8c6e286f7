"""Bit-exact shift-and-add datapath and its closed-form cost model.

Datapath for input code ``x`` with slope digits ``d_p`` and offset ``b``
(everything in an m-bit modular unsigned domain, units of 2**-m)::

    X   = x << (m - 10)
    sum = X + sum_{d_p=+1} (X >> p) + sum_{d_p=-1} ~(X >> p) + b   (mod 2**m)

Negative terms are bitwise complements with no +1 carry-in; the missing
ones are absorbed into ``b``. The top 10 bits of the sum form the output.

An m-bit sum cannot tell a value just below 0 from one just below 1, which
matters only at the two ends of the domain (Antilog near x=0, Log near x=1).
With ``overflow="saturate"`` the sum is read as the representative within
half a unit of the aligned input ``X`` (both functions stay within 0.09 of
the identity on [0, 1)) and the output is clamped to [0, 1023]. With
``overflow="wrap"`` the raw top bits are returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from fusedlog.minimax import Segment
from fusedlog.numerics import INPUT_BITS, N_CODES, Mode, check_code
from fusedlog.segmentation import Scheme, check_tiling
from fusedlog.signed_digit import OffsetCode, SignedDigitCoefficient

MIN_WIDTH, MAX_WIDTH = 8, 24
ROUNDINGS = ("truncate", "nearest")
OVERFLOWS = ("saturate", "wrap")


@dataclass(frozen=True)
class Datapath:
    rounding: str = "truncate"
    overflow: str = "saturate"

    def __post_init__(self):
        if self.rounding not in ROUNDINGS:
            raise ValueError(f"rounding must be one of {ROUNDINGS}")
        if self.overflow not in OVERFLOWS:
            raise ValueError(f"overflow must be one of {OVERFLOWS}")


@dataclass(frozen=True)
class ConverterDesign:
    mode: Mode
    width_m: int
    segments: tuple[Segment, ...]
    coeffs: tuple[tuple[SignedDigitCoefficient, OffsetCode], ...]
    scheme: Scheme = Scheme.PUBLISHED
    datapath: Datapath = Datapath()
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not MIN_WIDTH <= self.width_m <= MAX_WIDTH:
            raise ValueError(f"width_m={self.width_m} outside [{MIN_WIDTH}, {MAX_WIDTH}]")
        check_tiling(self.segments)
        if len(self.coeffs) != len(self.segments):
            raise ValueError(f"{len(self.segments)} segments but {len(self.coeffs)} coefficient pairs")
        for a, b in self.coeffs:
            if a.width_m != self.width_m or b.width_m != self.width_m:
                raise ValueError("coefficient width differs from the design width")
        object.__setattr__(self, "_lows", np.array([s.lo for s in self.segments]))

    @property
    def slopes(self) -> list[SignedDigitCoefficient]:
        return [a for a, _ in self.coeffs]

    def segment_index(self, x) -> np.ndarray | int:
        """Segment index encoder: a boundary-table lookup."""
        idx = np.searchsorted(self._lows, x, side="right") - 1
        return int(idx) if np.ndim(idx) == 0 else idx


@dataclass(frozen=True)
class FusedDesign:
    """One adder tree and multiplexer shared by two coefficient sets, each
    addressed by its own segment index encoder."""

    log_design: ConverterDesign
    antilog_design: ConverterDesign

    def __post_init__(self):
        if self.log_design.width_m != self.antilog_design.width_m:
            raise ValueError(
                f"width mismatch: {self.log_design.width_m} vs {self.antilog_design.width_m}"
            )
        if self.log_design.datapath != self.antilog_design.datapath:
            raise ValueError("fused halves must share one datapath convention")

    @property
    def width_m(self) -> int:
        return self.log_design.width_m

    def half(self, mode: Mode | str) -> ConverterDesign:
        return self.log_design if Mode.parse(mode) is Mode.LOG else self.antilog_design


@dataclass(frozen=True)
class CostReport:
    latency_fa: int
    adder_area_fa: int
    shift_ops: int
    segments: int = 0

    @property
    def area_proxy(self) -> int:
        return self.adder_area_fa + self.shift_ops


@dataclass(frozen=True)
class FusedCost:
    fused: CostReport
    log_only: CostReport
    antilog_only: CostReport
    area_overhead_ratio: float
    latency_overhead_ratio: float


def align_input(codes, width_m: int) -> np.ndarray:
    """Input code as an m-bit fraction (truncated when m < 10)."""
    codes = np.asarray(codes, dtype=np.int64)
    shift = width_m - INPUT_BITS
    return codes << shift if shift >= 0 else codes >> -shift


def datapath_sum(coeff: SignedDigitCoefficient, offset: int, codes, width_m: int, negation: str = "ones") -> np.ndarray:
    """Modular m-bit sum for an array of input codes."""
    mask = (1 << width_m) - 1
    X = align_input(codes, width_m)
    total = X + offset
    for p, s in coeff.digits:
        shifted = X >> p
        if s > 0:
            total = total + shifted
        elif negation == "ones":
            total = total + (mask - shifted)
        elif negation == "twos":
            total = total + ((mask - shifted + 1) & mask)
        else:
            raise ValueError(f"unknown negation {negation!r}")
    return total & mask


def output_stage(sums, codes, width_m: int, datapath: Datapath = Datapath()) -> np.ndarray:
    shift = width_m - INPUT_BITS
    mask = (1 << width_m) - 1
    sums = np.asarray(sums, dtype=np.int64)
    carry = 1 << (shift - 1) if datapath.rounding == "nearest" and shift > 0 else 0
    if datapath.overflow == "wrap":
        v = (sums + carry) & mask
    else:
        X = align_input(codes, width_m)
        half = 1 << (width_m - 1)
        v = X + ((sums - X + half) & mask) - half + carry
    v = v >> shift if shift >= 0 else v << -shift
    if datapath.overflow == "wrap":
        return v
    return np.clip(v, 0, N_CODES - 1)


def evaluate_all(design: ConverterDesign, codes=None, negation: str = "ones") -> np.ndarray:
    """Datapath outputs for ``codes`` (default: the whole domain)."""
    codes = np.arange(N_CODES) if codes is None else np.asarray(codes, dtype=np.int64)
    idx = design.segment_index(codes)
    out = np.empty(codes.shape, dtype=np.int64)
    for k, (a, b) in enumerate(design.coeffs):
        sel = idx == k
        if not np.any(sel):
            continue
        s = datapath_sum(a, b.value, codes[sel], design.width_m, negation)
        out[sel] = output_stage(s, codes[sel], design.width_m, design.datapath)
    return out


def evaluate(design: ConverterDesign, x: int, negation: str = "ones") -> int:
    check_code(x)
    return int(evaluate_all(design, [x], negation)[0])


def evaluate_fused(fused: FusedDesign, mode: Mode | str, x) -> np.ndarray | int:
    """Run the shared datapath with the coefficient table of ``mode``.

    The multiplexer sees the concatenated coefficient list; the active
    encoder maps an input to an index into that list.
    """
    mode = Mode.parse(mode)
    table = list(fused.log_design.coeffs) + list(fused.antilog_design.coeffs)
    base = 0 if mode is Mode.LOG else len(fused.log_design.coeffs)
    design = fused.half(mode)
    scalar = np.ndim(x) == 0
    codes = np.atleast_1d(np.asarray(x, dtype=np.int64))
    sel = base + design.segment_index(codes)
    out = np.empty(codes.shape, dtype=np.int64)
    for k in np.unique(sel):
        a, b = table[k]
        m = sel == k
        s = datapath_sum(a, b.value, codes[m], fused.width_m)
        out[m] = output_stage(s, codes[m], fused.width_m, design.datapath)
    return int(out[0]) if scalar else out


def _max_terms(coeffs) -> int:
    coeffs = list(coeffs)
    if not coeffs:
        raise ValueError("empty coefficient set")
    return max(c.nonzero for c in coeffs)


def adder_tree_latency(coeffs, width_m: int) -> int:
    """CSA levels plus an m-bit ripple CPA, in one-bit full-adder delays."""
    return (_max_terms(coeffs) - 1) + width_m


def adder_tree_area(coeffs, width_m: int) -> int:
    return _max_terms(coeffs) * width_m


def shift_operator_count(coeffs, width_m: int) -> int:
    """Right-shift operators in the multiplexer block.

    Per fractional position, the spread of digit values used across segments.
    """
    coeffs = list(coeffs)
    if not coeffs:
        return 0
    total = 0
    for i in range(1, width_m):
        col = [c.digit(i) for c in coeffs]
        total += max(col) - min(col)
    return total


def cost_report(design: ConverterDesign) -> CostReport:
    a = design.slopes
    m = design.width_m
    return CostReport(adder_tree_latency(a, m), adder_tree_area(a, m), shift_operator_count(a, m), len(a))


def fused_cost(fused: FusedDesign) -> FusedCost:
    m = fused.width_m
    la, aa = fused.log_design.slopes, fused.antilog_design.slopes
    both = la + aa
    log_only = cost_report(fused.log_design)
    anti_only = cost_report(fused.antilog_design)
    # encoders are never shared; segment count is their only cost figure
    joint = CostReport(
        adder_tree_latency(both, m),
        adder_tree_area(both, m),
        shift_operator_count(both, m),
        len(la) + len(aa),
    )
    return FusedCost(
        fused=joint,
        log_only=log_only,
        antilog_only=anti_only,
        area_overhead_ratio=(joint.area_proxy - log_only.area_proxy) / log_only.area_proxy,
        latency_overhead_ratio=(joint.latency_fa - log_only.latency_fa) / log_only.latency_fa,
    )
