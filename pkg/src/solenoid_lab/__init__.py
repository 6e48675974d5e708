"""Periodic orbits, zeta functions and entropy of one-dimensional solenoids.

A solenoid system is the automorphism (or endomorphism) dual to x -> r*x on
a subgroup of the rationals.  The submodules cover exact arithmetic
(:mod:`arith`), subgroups of Q (:mod:`baer`), orbit counting
(:mod:`orbits`), zeta functions (:mod:`zeta`), Mahler measure
(:mod:`mahler`), matrix conjugacy (:mod:`conjugacy`) and Dirichlet and
Mertens asymptotics (:mod:`dirichlet`).
"""
from .arith import PrimeSet, padic_valuation, valuation_of_power_difference
from .baer import (
    CharacteristicSequence,
    SolenoidSystem,
    localization_system,
    s_integer_system,
    validate_system,
)
from .errors import (
    CapabilityError,
    ConstructionError,
    DomainError,
    InconsistencyError,
    InvariantViolation,
    ReconstructionError,
    SolenoidLabError,
    ValidationError,
)
from .orbits import fixed_points, mertens_sum, orbit_counts

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "CharacteristicSequence",
    "ConstructionError",
    "DomainError",
    "InconsistencyError",
    "InvariantViolation",
    "PrimeSet",
    "ReconstructionError",
    "SolenoidLabError",
    "SolenoidSystem",
    "ValidationError",
    "fixed_points",
    "localization_system",
    "mertens_sum",
    "orbit_counts",
    "padic_valuation",
    "s_integer_system",
    "validate_system",
    "valuation_of_power_difference",
]
