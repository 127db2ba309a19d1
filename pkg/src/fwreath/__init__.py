"""Exact computations in Thompson's group F and the wreath product
constructions built inside it."""

from .exactnum import Dyadic, Interval, IntervalSet, parse_exact, render_exact
from .plmap import PLMap, commutator, conjugate, interpolate, is_in_F, support
from .prewreath import GenSet, PreWreathStructure, verify_axioms
from .report import FAIL, PASS, UNRESOLVED, Report

__version__ = "0.1.0"

__all__ = [
    "Dyadic",
    "Interval",
    "IntervalSet",
    "parse_exact",
    "render_exact",
    "PLMap",
    "commutator",
    "conjugate",
    "interpolate",
    "is_in_F",
    "support",
    "GenSet",
    "PreWreathStructure",
    "verify_axioms",
    "Report",
    "PASS",
    "FAIL",
    "UNRESOLVED",
]
