"""Exact computations on nilpotent Lie algebras with complex and hypercomplex structures."""

from .algebra import (LieAlgebra, bracket, change_basis, derived_algebra, is_ideal, is_nilpotent,
                      is_rational_subalgebra, is_subalgebra, lower_central_series, quotient, subalgebra,
                      validate)
from .double import Connection, certify_connection, double, literal_bracket_defects, nabla_plus
from .errors import (CertificationError, HsolveError, InputError, InternalError, NotAnIdealError,
                     NotASubalgebraError, NotHSolvableError, NotIntegrableError, NotNilpotentError,
                     ParseError, PreconditionError, PropertyViolation, TypeMismatchError)
from .exterior import CEComplex, Multivector, betti_numbers, pairing, wedge, weil_operator
from .fileformat import AlgebraFile, parse, serialize
from .linalg import Subspace
from .positivity import (bivector_kernel, compatible_structures, confine_to_subspace, degenerate_directions,
                         exceptional_directions, is_transversal_kahler, positivity_test, quotient_bivector)
from .structures import (HypercomplexStructure, LinearOperator, SphereDirection, h_filtration, i_filtration,
                         induced_structure, is_abelian_structure, is_h_solvable, is_integrable,
                         standard_quaternionic)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
