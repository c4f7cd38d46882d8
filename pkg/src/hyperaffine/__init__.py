"""Hyperaffine and affine algebraic theories over finite rings.

Submodules: ``rings`` (finite rings), ``theory`` (H_B, A_R and their axiom
suites), ``nba`` (n-dimensional Boolean algebras), ``models`` (finite
actions, stalks and the vector-space variant), ``ite`` (if-then-else
normalization) and ``cli``.
"""

from .diagram import BACKEND
from .errors import HyperaffineError
from .report import Check, Report
from .rings import FiniteRing, boolean_view, format_ring, make_powerset_boolean, make_zmod, parse_ring_spec
from .theory import (Flavor, Operation, Theory, affine_theory, compose, full_theory, hyperaffine_theory,
                     make_theory, ring_on_binary, verify_theory)

__all__ = [
    "BACKEND", "HyperaffineError", "Check", "Report", "FiniteRing", "boolean_view", "format_ring",
    "make_powerset_boolean", "make_zmod", "parse_ring_spec", "Flavor", "Operation", "Theory",
    "affine_theory", "compose", "full_theory", "hyperaffine_theory", "make_theory", "ring_on_binary",
    "verify_theory",
]
