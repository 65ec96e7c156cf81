"""Quasi-Hermitian benchmark toolkit: spectra, metrics, Dyson maps and
evolution across the Hermitian / quasi-Hermitian interface."""

from ._core import *  # noqa: F401,F403
from ._core import (
    DegenerateObstruction,
    DimensionError,
    DomainError,
    Error,
    InputError,
    NotPositiveDefinite,
    NumericalError,
    PositivityLost,
    ProfileDomainError,
    RegionError,
    SingularMap,
    StepTooLarge,
)

__version__ = "0.1.0"
