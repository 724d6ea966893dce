"""Exact computations with polynomial invariants of Lie algebra actions."""

from .catalog import catalog_get, catalog_names, transposition_check
from .fields import VectorField, apply_field, commutator, field_from_matrix, rep_fields
from .lie import (LieAlgebra, Representation, adjoint_rep, coadjoint_rep, make_lie_algebra,
                  takiff)
from .poly import Polynomial, Ring, monomial_basis, taylor_coefficients
from .section import nilpotent_flow, section_invariants, shift_matrix
from .solver import (Verdict, characteristic_verdict, invariant_space, jacobian_rank,
                     linear_stabilizer, module_membership)
from .takiff import derived_invariants, verify_takiff_corollary

__version__ = "0.1.0"
