"""Ansatz-driven centralizer computation.

Builds the complete order-n operator with one unknown scalar per
(derivative index, coefficient monomial) pair, imposes exact vanishing of
the commutator with a central operator, and extracts the canonical
nullspace basis.  Everything is exact; every returned operator is
re-verified to commute before it leaves this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import linalg
from .coeffring import Coefficient, GaussianRational, ONE, ZERO, term_sort_key
from .opalg import DiffOperator, OperatorBasis, commutator, deriv_sort_key
from .errors import DimensionMismatch


@dataclass(frozen=True)
class AnsatzSpec:
    """Finite support for the unknown operator.

    ``laurent_min`` gives the most negative exponent admitted per variable
    (0 = ordinary polynomials, -1 admits a single inverse power).
    ``exp_args`` lists admitted exponential linear forms as per-variable
    Gaussian-rational vectors; the zero form (no exponential) is always
    included.  ``max_degree`` bounds the signed total degree and each
    individual exponent.
    """

    order: int
    dim: int
    max_degree: int
    laurent_min: tuple = None
    exp_args: tuple = ()

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if self.dim < 1:
            raise ValueError("need at least one variable")
        lm = self.laurent_min
        lm = (0,) * self.dim if lm is None else tuple(int(v) for v in lm)
        if len(lm) != self.dim:
            raise DimensionMismatch("laurent_min length does not match dim")
        if any(v > 0 for v in lm):
            raise ValueError("laurent_min entries must be <= 0")
        object.__setattr__(self, "laurent_min", lm)
        cleaned = []
        for arg in self.exp_args:
            arg = tuple(
                l if isinstance(l, GaussianRational) else GaussianRational(l)
                for l in arg
            )
            if len(arg) != self.dim:
                raise DimensionMismatch("exp_args entry length does not match dim")
            if all(l.is_zero for l in arg) or arg in cleaned:
                continue
            cleaned.append(arg)
        object.__setattr__(self, "exp_args", tuple(cleaned))

    def grown(self) -> "AnsatzSpec":
        """Same support with the degree bound and Laurent depth incremented."""
        return AnsatzSpec(
            self.order,
            self.dim,
            self.max_degree + 1,
            tuple(v - 1 for v in self.laurent_min),
            self.exp_args,
        )


def default_spec(order: int, dim: int, time_index: Optional[int] = None) -> AnsatzSpec:
    """Default bounds: total degree ``order + 1``, one inverse power of the
    time-like variable when one is designated."""
    laurent = [0] * dim
    if time_index is not None:
        laurent[time_index] = -1
    return AnsatzSpec(order, dim, order + 1, tuple(laurent))


def _deriv_indices(order: int, dim: int):
    out = [()]
    for _ in range(dim):
        out = [t + (k,) for t in out for k in range(order + 1)]
    return sorted((t for t in out if sum(t) <= order), key=deriv_sort_key)


def _monomials(spec: AnsatzSpec):
    ranges = [range(spec.laurent_min[v], spec.max_degree + 1) for v in range(spec.dim)]
    out = [()]
    for r in ranges:
        out = [t + (k,) for t in out for k in r]
    zero_arg = (ZERO,) * spec.dim
    keys = []
    for powers in out:
        if sum(powers) > spec.max_degree:
            continue
        for arg in (zero_arg,) + spec.exp_args:
            keys.append((powers, arg))
    return sorted(keys, key=lambda key: term_sort_key(*key))


@dataclass(frozen=True)
class AnsatzTemplate:
    """The unknown operator as a formal sum of labelled one-term operators.

    ``elements[k]`` is ``(label, op)`` where ``label`` is the
    (derivative index, coefficient monomial) pair owning the k-th unknown.
    """

    spec: AnsatzSpec
    elements: tuple

    @property
    def unknowns(self):
        return [label for label, _ in self.elements]

    def instantiate(self, coords: Sequence[GaussianRational]) -> DiffOperator:
        if len(coords) != len(self.elements):
            raise ValueError("coordinate count does not match unknowns")
        total = DiffOperator.zero(self.spec.dim)
        for value, (_, op) in zip(coords, self.elements):
            if not value.is_zero:
                total = total + op.scale(value)
        return total


def _template_elements(spec: AnsatzSpec):
    elements = []
    for alpha in _deriv_indices(spec.order, spec.dim):
        for powers, arg in _monomials(spec):
            coeff = Coefficient.monomial(spec.dim, powers, ONE, arg)
            op = DiffOperator.single(spec.dim, alpha, coeff)
            elements.append((((alpha), (powers, arg)), op))
    return tuple(elements)


def build_ansatz(spec: AnsatzSpec) -> AnsatzTemplate:
    """One unknown scalar per (derivative index, coefficient monomial) pair."""
    elements = _template_elements(spec)
    if not elements:
        raise ValueError("ansatz has empty support")
    return AnsatzTemplate(spec, elements)


@dataclass(frozen=True)
class LinearSystem:
    """Exact vanishing conditions for the commutator of the ansatz.

    Row ``r`` states that component ``row_labels[r]`` of the commutator is
    zero; entry ``(r, c)`` is the contribution of unknown ``col_labels[c]``.
    """

    rows: tuple
    row_labels: tuple
    col_labels: tuple
    central: DiffOperator
    template: AnsatzTemplate

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.col_labels)

    def rank(self) -> int:
        return linalg.matrix_rank(self.rows, self.ncols)

    def summary(self) -> dict:
        rank = self.rank()
        return {
            "rows": self.nrows,
            "columns": self.ncols,
            "rank": rank,
            "nullity": self.ncols - rank,
        }


def commutator_system(central: DiffOperator, spec: AnsatzSpec) -> LinearSystem:
    """Assemble the exact linear system ``[central, ansatz] = 0``.

    The bracket is bilinear and the central operator fixed, so each
    component of the commutator is linear in the unknowns.  A central
    operator with exponential coefficients combined with a Laurent ansatz
    is rejected.
    """
    if central.dim != spec.dim:
        raise DimensionMismatch("central operator dim does not match spec")
    has_exp = any(
        any(not l.is_zero for l in exp_args)
        for _, coeff in central.terms()
        for (_, exp_args), _ in coeff.terms()
    )
    if has_exp and any(v < 0 for v in spec.laurent_min):
        raise ValueError(
            "central operator with exponential coefficients cannot be combined "
            "with a Laurent ansatz"
        )
    elements = _template_elements(spec)
    template = AnsatzTemplate(spec, elements)
    row_index: dict = {}
    columns = []
    for _, op in elements:
        bracket = commutator(central, op)
        col = {}
        for key, scalar in bracket.components().items():
            r = row_index.setdefault(key, len(row_index))
            col[r] = scalar
        columns.append(col)
    nrows = len(row_index)
    rows = [dict() for _ in range(nrows)]
    for c, col in enumerate(columns):
        for r, scalar in col.items():
            rows[r][c] = scalar
    row_labels = [None] * nrows
    for key, r in row_index.items():
        row_labels[r] = key
    return LinearSystem(
        rows=tuple(rows),
        row_labels=tuple(row_labels),
        col_labels=tuple(label for label, _ in elements),
        central=central,
        template=template,
    )


@dataclass(frozen=True)
class CentralizerBasis:
    """Canonical basis of operators commuting exactly with the central one.

    ``canonical`` records that the coordinate matrix is in reduced echelon
    form under the fixed unknown order, so identical inputs give
    bit-identical bases.
    """

    operators: tuple
    order: int
    canonical: bool = True
    coordinates: tuple = field(default=(), repr=False)

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def __getitem__(self, k):
        return self.operators[k]

    def as_operator_basis(self) -> OperatorBasis:
        return OperatorBasis(self.operators)


def nullspace(system: LinearSystem) -> CentralizerBasis:
    """Exact nullspace basis in reduced-echelon form.

    Every returned operator is re-verified post hoc to commute with the
    central operator; an empty basis is a valid result.
    """
    vectors = linalg.nullspace(system.rows, system.ncols)
    ops = []
    for vec in vectors:
        op = system.template.instantiate(vec)
        residual = commutator(system.central, op)
        if not residual.is_zero:
            raise ArithmeticError(
                "internal error: nullspace operator fails recommutation"
            )
        ops.append(op)
    return CentralizerBasis(
        operators=tuple(ops),
        order=system.template.spec.order,
        canonical=True,
        coordinates=tuple(tuple(vec) for vec in vectors),
    )


def solve_centralizer(central: DiffOperator, spec: AnsatzSpec) -> CentralizerBasis:
    return nullspace(commutator_system(central, spec))


def grow_check(central: DiffOperator, spec: AnsatzSpec):
    """Re-solve with incremented bounds; flags truncation artifacts.

    Returns ``(basis, grown_dimension)`` so callers can compare the
    nullspace dimension across the two supports.
    """
    basis = solve_centralizer(central, spec)
    grown = solve_centralizer(central, spec.grown())
    return basis, len(grown)


def span_membership(ops: Sequence[DiffOperator], candidate: DiffOperator) -> Optional[list]:
    """Exact scalar coordinates of ``candidate`` over ``ops``, or ``None``.

    Decided by solving the exact matching system over all
    (derivative index, coefficient monomial) components.
    """
    ops = list(ops)
    if not ops:
        return None if not candidate.is_zero else []
    dim = ops[0].dim
    if candidate.dim != dim:
        raise DimensionMismatch("candidate dim does not match basis")
    row_index: dict = {}
    columns = []
    for op in ops:
        col = {}
        for key, scalar in op.components().items():
            r = row_index.setdefault(key, len(row_index))
            col[r] = scalar
        columns.append(col)
    rhs_col = {}
    for key, scalar in candidate.components().items():
        r = row_index.setdefault(key, len(row_index))
        rhs_col[r] = scalar
    nrows = len(row_index)
    matrix = [[ZERO] * len(ops) for _ in range(nrows)]
    rhs = [ZERO] * nrows
    for c, col in enumerate(columns):
        for r, scalar in col.items():
            matrix[r][c] = scalar
    for r, scalar in rhs_col.items():
        rhs[r] = scalar
    solution = linalg.solve(matrix, rhs)
    if solution is None:
        return None
    return solution


def count_formula(basis_size: int, order: int) -> int:
    """Number of order-``order`` basis operators over ``basis_size``
    first-order generators (unit included): ``C(order + N - 1, N - 1)``.

    Equals the number of multisets of size at most ``order`` drawn from the
    ``N - 1`` non-identity generators, identity factors being absorbed.
    """
    if basis_size < 1:
        raise ValueError("basis size must be positive")
    if order < 0:
        raise ValueError("order must be non-negative")
    return math.comb(order + basis_size - 1, basis_size - 1)
