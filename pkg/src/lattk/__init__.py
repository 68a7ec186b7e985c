"""Exact-arithmetic toolkit for integral lattices, discriminant forms and
twisted Mukai lattices of K3 surfaces."""

from .errors import (
    AdmissibilityError,
    CapacityError,
    DegenerateLatticeError,
    DimensionError,
    LatticeError,
    UnknownCheckError,
)
from .linalg import IntMat, RatMat, SnfDecomposition, determinant, saturated_kernel, snf, solve_integral
from .lattice import Embedding, Lattice, RationalFunctional

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "CapacityError",
    "DegenerateLatticeError",
    "DimensionError",
    "Embedding",
    "IntMat",
    "Lattice",
    "LatticeError",
    "RatMat",
    "RationalFunctional",
    "SnfDecomposition",
    "UnknownCheckError",
    "determinant",
    "saturated_kernel",
    "snf",
    "solve_integral",
]
