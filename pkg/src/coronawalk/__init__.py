"""Continuous-time quantum walks on neighborhood corona graphs."""

__version__ = "0.1.0"

from .graphs import Graph, build_family, neighborhood_corona, regularity_degree
from .quadratics import (
    PeriodicityForm,
    PeriodicityKind,
    QuadraticNumber,
    classify_periodicity_form,
    is_quadratic_integer,
    square_free_decompose,
)

__all__ = [
    "Graph",
    "build_family",
    "neighborhood_corona",
    "regularity_degree",
    "QuadraticNumber",
    "PeriodicityForm",
    "PeriodicityKind",
    "classify_periodicity_form",
    "is_quadratic_integer",
    "square_free_decompose",
    "__version__",
]
