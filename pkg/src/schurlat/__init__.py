"""Exact Schur-function evaluation on periodic variables, dimer models on
square-hexagon lattices, and their limit shapes."""

from .partitions import Partition
from .schur import VariableSpec, schur_branching, schur_coset, schur_coset_general, schur_determinant

__all__ = [
    "Partition",
    "VariableSpec",
    "schur_branching",
    "schur_coset",
    "schur_coset_general",
    "schur_determinant",
]
__version__ = "0.1.0"
