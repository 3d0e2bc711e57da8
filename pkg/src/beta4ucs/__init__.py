"""Fuzzy learning classifier system with four-parameter beta membership
functions, plus rectangular and triangular baseline representations."""

from .beta_math import Beta4Params, beta_function, beta4_pdf, kurtosis, membership, mode
from .data import Dataset, Normalizer, fit_transform, load_csv, split
from .engine import Beta4UCS, EngineConfig, is_more_general
from .experiment import ExperimentConfig, ModelSnapshot, export_rules, run_experiment
from .metrics import EvalReport, accuracy, confusion_matrix, kurtosis_landscape, macro_f1
from .problems import ProblemSpec, generate, parse_problem
from .rules import Rule, TriangleSet, make_rule, matching_degree

__all__ = [
    "Beta4Params", "Beta4UCS", "Dataset", "EngineConfig", "EvalReport",
    "ExperimentConfig", "ModelSnapshot", "Normalizer", "ProblemSpec", "Rule",
    "TriangleSet", "accuracy", "beta_function", "beta4_pdf", "confusion_matrix",
    "export_rules", "fit_transform", "generate", "is_more_general", "kurtosis",
    "kurtosis_landscape", "load_csv", "macro_f1", "make_rule", "matching_degree",
    "membership", "mode", "parse_problem", "run_experiment", "split",
]

__version__ = "0.1.0"
