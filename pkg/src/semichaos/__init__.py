"""Numerical toolkit for semigroup chaos questions on Dunkl spaces."""

from .errors import DomainError, EnvelopeError, ParameterError, PoleError, SemichaosError, UnsupportedError
from .dunkl import MultiplicitySetup
from .spaces import GridFunction, WeightedSpaceSpec, default_grid
from .heat import SemigroupParams, apply_Tt, apply_Ttc, dunkl_heat_kernel
from .chaos import ChaosWitness, ComplexFrequency, Verdict, chaos_verdict
from .verify import CheckResult, run_suite

__version__ = "0.1.0"

__all__ = [
    "SemichaosError", "ParameterError", "DomainError", "PoleError", "UnsupportedError", "EnvelopeError",
    "MultiplicitySetup", "WeightedSpaceSpec", "GridFunction", "default_grid",
    "SemigroupParams", "apply_Tt", "apply_Ttc", "dunkl_heat_kernel",
    "ChaosWitness", "ComplexFrequency", "Verdict", "chaos_verdict",
    "CheckResult", "run_suite",
]
