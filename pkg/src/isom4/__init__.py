"""Exact isometric-automorphism groups of left-invariant metrics on 4D unimodular Lie groups."""

from .catalog import GroupName, aut_family, algebra
from .exact import RationalMatrix
from .groupid import closure, identify, isom_descriptor, order_profile
from .lie import LieAlgebra
from .metrics import metric_matrix, phi, phi_inverse, pullback_metric
from .stabilizer import stabilizer

__all__ = [
    "GroupName",
    "LieAlgebra",
    "RationalMatrix",
    "algebra",
    "aut_family",
    "closure",
    "identify",
    "isom_descriptor",
    "metric_matrix",
    "order_profile",
    "phi",
    "phi_inverse",
    "pullback_metric",
    "stabilizer",
]

__version__ = "0.1.0"
