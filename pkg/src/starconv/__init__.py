"""Convolution operators on normalized analytic functions, as truncated power series.

The package carries:

* :mod:`starconv.series` -- truncated complex power-series arithmetic;
* :mod:`starconv.operators` -- the multiplier operators ``L`` / ``l``, the
  Bernardi transform, extremal functions and dominant constructions;
* :mod:`starconv.checks` -- sampled verification of real-part inequalities on
  grids inside the unit disk;
* :mod:`starconv.catalog` -- closed-form example functions;
* :mod:`starconv.cli` -- the ``starconv`` command line.
"""

from starconv.errors import (
    BadDominantInput,
    DenominatorVanishes,
    DivisionByZeroSeries,
    NonunitConstantTerm,
    NonzeroConstantTerm,
    NotNormalized,
    PowerBranchError,
    SeriesError,
    SpecError,
    UnknownExample,
)
from starconv.series import PowerSeries
from starconv.operators import BernardiSpec, OperatorSpec
from starconv.checks import CaratheodoryFunction, CheckReport, GridSpec

__all__ = [
    "BadDominantInput",
    "BernardiSpec",
    "CaratheodoryFunction",
    "CheckReport",
    "DenominatorVanishes",
    "DivisionByZeroSeries",
    "GridSpec",
    "NonunitConstantTerm",
    "NonzeroConstantTerm",
    "NotNormalized",
    "OperatorSpec",
    "PowerBranchError",
    "PowerSeries",
    "SeriesError",
    "SpecError",
    "UnknownExample",
]

__version__ = "0.1.0"
