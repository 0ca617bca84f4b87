import logging

from .config import CurveConfig, GridConfig, IntegratorSettings, QuadratureSettings, WellSettings
from .conservative import (PeriodCurve, Sample, monotonicity_verdict, period_conservative, period_curve_conservative,
                           potential, turning_points, well_range)
from .criteria import ClassificationReport, CriterionVerdict, classify
from .errors import PeriodLabError
from .expr import evaluate, parse, tokenize, to_source
from .jets import Jet, derivatives_at, eval_jet
from .lienard import (period_curve_lienard, period_lienard, rayleigh_to_lienard, return_map, sabatini_C, sigma,
                      vector_field)
from .registry import BUILTINS, get_builtin
from .report import ReportDocument, build_report
from .system import SystemSpec, validate_system

logging.getLogger(__name__).addHandler(logging.NullHandler())
