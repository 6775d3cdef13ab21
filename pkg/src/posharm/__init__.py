"""Boundary growth of positive harmonic functions: numerics and verification suites.

Submodules: ``specfun`` (Gamma-type constants), ``measures`` (boundary
measures on R^(n-1)), ``halfspace`` (Poisson extension and normal traces),
``mellin`` (multiplicative convolution and the trace kernel), ``ball``
(unit-ball counterparts) and ``harness`` (verification suites and CLI).
"""
from .specfun import kappa_n, log_gamma, tauberian_constant
from .measures import BoundaryMeasure, RadialProfile, atom_measure, lebesgue_measure, patch_measure, power_law_measure
from .halfspace import extend, normal_trace_convolution, normal_trace_direct
from .reports import ConvergenceReport

__version__ = "0.1.0"

__all__ = [
    "kappa_n",
    "log_gamma",
    "tauberian_constant",
    "BoundaryMeasure",
    "RadialProfile",
    "atom_measure",
    "lebesgue_measure",
    "patch_measure",
    "power_law_measure",
    "extend",
    "normal_trace_convolution",
    "normal_trace_direct",
    "ConvergenceReport",
]
