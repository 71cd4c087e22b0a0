"""Exact finite-field computations for V-foliations on unitary and Hilbert
modular Shimura varieties in characteristic p."""

from .cmtype import CMTypeDatum, DatumError, Embedding, OrbitDatum, Pair
from .gfpn import FieldElement, FiniteField, Matrix, build_field

__version__ = "0.1.0"

__all__ = [
    "CMTypeDatum",
    "DatumError",
    "Embedding",
    "OrbitDatum",
    "Pair",
    "FieldElement",
    "FiniteField",
    "Matrix",
    "build_field",
]
