"""Design-space exploration and bit-exact simulation of fused
piecewise-linear log2(1+x) / 2^x - 1 converters on a shift-and-add datapath."""

from fusedlog.numerics import LSB, Mode, first_derivative, reference_table, reference_value
from fusedlog.signed_digit import SignedDigitCoefficient, enumerate_near, parse_coefficient
from fusedlog.minimax import RealFit, Segment, fit_segment, mhe_bound
from fusedlog.segmentation import SegmentPlan, mqd_flattened_segmentation, recursive_segmentation
from fusedlog.hw_model import ConverterDesign, Datapath, FusedDesign, evaluate, evaluate_all
from fusedlog.evaluation import ErrorReport, evaluate_design

__all__ = [
    "LSB",
    "Mode",
    "first_derivative",
    "reference_table",
    "reference_value",
    "SignedDigitCoefficient",
    "enumerate_near",
    "parse_coefficient",
    "RealFit",
    "Segment",
    "fit_segment",
    "mhe_bound",
    "SegmentPlan",
    "mqd_flattened_segmentation",
    "recursive_segmentation",
    "ConverterDesign",
    "Datapath",
    "FusedDesign",
    "evaluate",
    "evaluate_all",
    "ErrorReport",
    "evaluate_design",
]

__version__ = "0.1.0"
