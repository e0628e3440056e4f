"""Exact conformal blocks, blowup relations and Painleve III(D8) tau functions."""
from .exact import ExactScalar, parse_scalar, render
from .series import ExponentKeyedSum, GradedSeries, hirota
from .virasoro import VirasoroModule, block_series
from .nsr import NSRModule
from .blowup import EmbeddingParams
from .kiev import c_ratio, tau_series
from .report import Report

__version__ = "0.1.0"

__all__ = [
    "ExactScalar",
    "parse_scalar",
    "render",
    "ExponentKeyedSum",
    "GradedSeries",
    "hirota",
    "VirasoroModule",
    "block_series",
    "NSRModule",
    "EmbeddingParams",
    "c_ratio",
    "tau_series",
    "Report",
]
