"""Exact symbolic engine for operators commuting with a central operator."""

from .coeffring import Coefficient, GaussianRational, I, ONE, ZERO
from .errors import ClosureError, DimensionMismatch, ExprParseError, SymctrError
from .exprio import parse_operator, parse_scalar, print_operator
from .liealg import (
    AbstractAlgebra,
    AbstractElement,
    FracPowerResult,
    StructureConstants,
    abstract_inverse,
    abstract_product,
    check_subalgebra_closed,
    express_in_basis,
    frac_power,
    jordan_lie_split,
    nilpotency_degree,
    structure_constants,
    truncated_nilpotent_algebra,
)
from .opalg import (
    DiffOperator,
    OperatorBasis,
    OperatorWord,
    anticommutator,
    check_hermitian_projection,
    commutator,
    compose,
    lie_reduce,
    parity_split,
    power_normal_words,
    symmetrize,
    word_value,
)
from .solver import (
    AnsatzSpec,
    CentralizerBasis,
    LinearSystem,
    build_ansatz,
    commutator_system,
    count_formula,
    default_spec,
    grow_check,
    nullspace,
    solve_centralizer,
    span_membership,
)

__version__ = "0.1.0"

__all__ = [
    "AbstractAlgebra",
    "AbstractElement",
    "AnsatzSpec",
    "CentralizerBasis",
    "ClosureError",
    "Coefficient",
    "DiffOperator",
    "DimensionMismatch",
    "ExprParseError",
    "FracPowerResult",
    "GaussianRational",
    "I",
    "LinearSystem",
    "ONE",
    "OperatorBasis",
    "OperatorWord",
    "StructureConstants",
    "SymctrError",
    "ZERO",
    "abstract_inverse",
    "abstract_product",
    "anticommutator",
    "build_ansatz",
    "check_hermitian_projection",
    "check_subalgebra_closed",
    "commutator",
    "commutator_system",
    "compose",
    "count_formula",
    "default_spec",
    "express_in_basis",
    "frac_power",
    "grow_check",
    "jordan_lie_split",
    "lie_reduce",
    "nilpotency_degree",
    "nullspace",
    "parity_split",
    "parse_operator",
    "parse_scalar",
    "power_normal_words",
    "print_operator",
    "solve_centralizer",
    "span_membership",
    "structure_constants",
    "symmetrize",
    "truncated_nilpotent_algebra",
    "word_value",
]
