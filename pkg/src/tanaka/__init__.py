"""Exact computations with stratified Lie algebras.

Derivations, Tanaka prolongations, modifications ``s = {X + σX}`` of a
splitting ``p = g ⊕ q`` and explicit contact maps, all in exact rational
(or Gaussian rational) arithmetic.
"""
from .algebra import (GradedLieAlgebra, LieAlgebraError, Violation, abelian, check_axioms, free_nilpotent,
                      heisenberg, is_nilpotent, is_solvable, is_stratified, killing_form, nilpotency_step,
                      random_stratified, stratification_step)
from .contact import (NoIntersection, MatrixModel, bch, integrate_development, left_translation_differential,
                      psi_to_G, twisted_velocity, ul_coset_project)
from .io import DescriptionError, load_description, parse_description, serialize_description
from .linalg import Subspace
from .modification import (Modification, ModificationError, classify_3d, closure_equations,
                           is_modification_subalgebra, modified_brackets, parse_sigma, semidirect_R,
                           solve_closure, ultra_rigid_criterion)
from .poly import MultiPoly, parse_poly
from .prolongation import (DerivationSpace, ProlongedAlgebra, aut_pg_algebra, derivation_algebra,
                           diagonal_derivations, dilation, largest_ideal_in, semidirect, tanaka_prolong)
from .scalars import GaussianRational, I

__version__ = "0.1.0"

__all__ = [
    "GradedLieAlgebra", "LieAlgebraError", "Violation", "abelian", "check_axioms", "free_nilpotent",
    "heisenberg", "is_nilpotent", "is_solvable", "is_stratified", "killing_form", "nilpotency_step",
    "random_stratified", "stratification_step",
    "NoIntersection", "MatrixModel", "bch", "integrate_development", "left_translation_differential",
    "psi_to_G", "twisted_velocity", "ul_coset_project",
    "DescriptionError", "load_description", "parse_description", "serialize_description",
    "Subspace",
    "Modification", "ModificationError", "classify_3d", "closure_equations", "is_modification_subalgebra",
    "modified_brackets", "parse_sigma", "semidirect_R", "solve_closure", "ultra_rigid_criterion",
    "MultiPoly", "parse_poly",
    "DerivationSpace", "ProlongedAlgebra", "aut_pg_algebra", "derivation_algebra", "diagonal_derivations",
    "dilation", "largest_ideal_in", "semidirect", "tanaka_prolong",
    "GaussianRational", "I",
]
