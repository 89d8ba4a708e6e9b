"""(Strict) p-negative type of finite metric and semi-metric spaces."""

__version__ = "0.1.0"

from .bounds import Interval, ZetaReport, construct_extremal, strictness_report, zeta
from .errors import ConvergenceFailure, NegTypeError
from .metric_core import (
    Mode,
    PowerMatrix,
    SemiMetricSpace,
    build_space,
    power_matrix,
    rescale_to_unit_min,
    scaled_diameter,
)
from .negative_type import (
    UNBOUNDED,
    MaxTypeResult,
    ProjectedSpectrum,
    Unbounded,
    Verdict,
    ViolatingVector,
    check_negative_type,
    check_strict_negative_type,
    max_negative_type,
    qform,
)
from .oracle import ProbeResult, euclidean_space, grid_min_gap, random_qform_probe
from .simplex_gap import (
    GapBreakdown,
    GapMethod,
    GapResult,
    LoadVector,
    Simplex,
    closed_form_zero_gap_simplex,
    gap_value,
    is_extreme_simplex,
    min_gap_over_loads,
    negative_type_gap,
    zero_gap,
)
from .trees import WeightedTree, tree_metric, tree_one_gap
