from .errors import ColemanError, InsufficientLayers, NormFailure, TraceNotZero
from .layers import CyclotomicLayer, t_to_x, x_to_t
from .norm_system import ColemanSeries, NormSystem, check_norms, coleman_series, cyclotomic_family
from .measure import ColemanMeasure, MeasurePlan, MeasureSeries, coleman_measure, measure_to_series
from .flat import col_vs_flat_check, coleman_flat, corestriction
from .presentation import ExactnessReport, ModuleInvariants, ModulePresentation, PresentedMap, short_exact
from .intermediate import IntermediateModules, SigmaAction, four_term_sequence, intermediate_modules
from .testcase import CONVENTION, capstone, coleman_image, testcase_sequences

__all__ = [
    "ColemanError",
    "InsufficientLayers",
    "NormFailure",
    "TraceNotZero",
    "CyclotomicLayer",
    "t_to_x",
    "x_to_t",
    "ColemanSeries",
    "NormSystem",
    "check_norms",
    "coleman_series",
    "cyclotomic_family",
    "ColemanMeasure",
    "MeasurePlan",
    "MeasureSeries",
    "coleman_measure",
    "measure_to_series",
    "col_vs_flat_check",
    "coleman_flat",
    "corestriction",
    "ExactnessReport",
    "ModuleInvariants",
    "ModulePresentation",
    "PresentedMap",
    "short_exact",
    "IntermediateModules",
    "SigmaAction",
    "four_term_sequence",
    "intermediate_modules",
    "CONVENTION",
    "capstone",
    "coleman_image",
    "testcase_sequences",
]
