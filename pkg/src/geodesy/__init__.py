"""Geodesic elements and geodesic bases of Lie algebras given by structure constants."""

from .algebra import InnerProduct, LieAlgebra
from .constructions import ConstructionResult, Undetermined, auto_construct
from .geodesic import (
    BasisCertificate,
    ObstructionCertificate,
    defect,
    is_geodesic,
    obstruction_certificate,
    sample_geodesics,
    verify_basis,
)

__all__ = [
    "BasisCertificate",
    "ConstructionResult",
    "InnerProduct",
    "LieAlgebra",
    "ObstructionCertificate",
    "Undetermined",
    "auto_construct",
    "defect",
    "is_geodesic",
    "obstruction_certificate",
    "sample_geodesics",
    "verify_basis",
]
