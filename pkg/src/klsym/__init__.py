"""Symmetric-power L-functions of Kloosterman sheaves over small finite fields, computed exactly."""

from __future__ import annotations

from .errors import BudgetExceeded, IntegralityError, NotDivisibleError, ReconstructionError
from .pipeline import Analysis, EngineRegistry, analyze, prime_power
from .polys import IntPoly, RatFunc

__all__ = [
    "Analysis",
    "BudgetExceeded",
    "EngineRegistry",
    "IntPoly",
    "IntegralityError",
    "NotDivisibleError",
    "RatFunc",
    "ReconstructionError",
    "analyze",
    "prime_power",
]

__version__ = "0.1.0"
