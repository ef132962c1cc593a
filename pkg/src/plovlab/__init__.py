"""Exact polynomial log-volume growth for automorphism actions on intersection models."""

from .exact import DimensionError, PreconditionError, QPoly, RatMatrix, Rational
from .filtration import (
    QuasiNefSeq,
    canonical_sequence,
    filtration_spaces,
    vanishing_diagnostics,
    verify_quasi_nef,
)
from .growth import GrowthReport, InfinitePlov, hilbert_sequence, plov
from .models import (
    AutoAction,
    IntersectionModel,
    ModelError,
    build_fujiki,
    build_product,
    build_torus,
    jordan_torus,
    torus_positivity,
    validate,
)
from .spectral import NotQuasiUnipotentError, certify_quasi_unipotent, unipotent_reduction
from .verdict import BoundReport, bound_report

__version__ = "0.1.0"

__all__ = [
    "AutoAction",
    "BoundReport",
    "DimensionError",
    "GrowthReport",
    "InfinitePlov",
    "IntersectionModel",
    "ModelError",
    "NotQuasiUnipotentError",
    "PreconditionError",
    "QPoly",
    "QuasiNefSeq",
    "RatMatrix",
    "Rational",
    "bound_report",
    "build_fujiki",
    "build_product",
    "build_torus",
    "canonical_sequence",
    "certify_quasi_unipotent",
    "filtration_spaces",
    "hilbert_sequence",
    "jordan_torus",
    "plov",
    "torus_positivity",
    "unipotent_reduction",
    "validate",
    "vanishing_diagnostics",
    "verify_quasi_nef",
]
