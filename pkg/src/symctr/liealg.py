"""Structure constants, abstract coefficient algebras and fractional powers.

``structure_constants`` extracts the closed bracket table of an operator
basis (or reports the offending pair).  ``AbstractAlgebra`` carries a full
(non-antisymmetrized) multiplication table over Gaussian rationals, with
the Jordan/Lie split, products, inverses, nilpotency degree and the
nilpotent-truncated fractional power built on top of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .coeffring import GaussianRational, ONE, ZERO
from .errors import ClosureError, DimensionMismatch
from .opalg import DiffOperator, OperatorBasis, commutator
from .solver import span_membership


def _as_gr(value) -> GaussianRational:
    return value if isinstance(value, GaussianRational) else GaussianRational(value)


def _freeze_table(table) -> tuple:
    return tuple(
        tuple(tuple(_as_gr(v) for v in row) for row in plane) for plane in table
    )


@dataclass(frozen=True)
class StructureConstants:
    """Bracket coordinates ``[D_i, D_j] = sum_k table[i][j][k] D_k``.

    The table is antisymmetric and satisfies the Jacobi identity in
    coordinates (validated on construction).  ``unit`` marks the identity
    member, whose brackets all vanish and whose word factors are absorbed
    by normal-form reduction.
    """

    table: tuple
    unit: Optional[int] = None

    def __post_init__(self):
        table = _freeze_table(self.table)
        object.__setattr__(self, "table", table)
        n = len(table)
        if any(len(plane) != n or any(len(row) != n for row in plane) for plane in table):
            raise ValueError("structure constant table must be N x N x N")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if table[i][j][k] != -table[j][i][k]:
                        raise ValueError("bracket table is not antisymmetric")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        total = ZERO
                        for m in range(n):
                            total = total + (
                                table[i][j][m] * table[m][k][l]
                                + table[j][k][m] * table[m][i][l]
                                + table[k][i][m] * table[m][j][l]
                            )
                        if not total.is_zero:
                            raise ValueError("bracket table violates the Jacobi identity")
        if self.unit is not None and not 0 <= self.unit < n:
            raise ValueError("unit index out of range")

    @property
    def size(self) -> int:
        return len(self.table)

    def bracket_coords(self, i: int, j: int) -> tuple:
        return self.table[i][j]


def structure_constants(basis: OperatorBasis) -> StructureConstants:
    """Extract the full bracket table of a Lie-closed operator basis.

    Closure is checked, not assumed: a bracket outside the span raises
    ``ClosureError`` carrying the offending pair and residual.
    """
    n = len(basis)
    table = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            bracket = commutator(basis[i], basis[j])
            coords = span_membership(basis.ops, bracket)
            if coords is None:
                raise ClosureError(i, j, bracket)
            for k, c in enumerate(coords):
                table[i][j][k] = c
                table[j][i][k] = -c
    return StructureConstants(table=table, unit=basis.unit_index)


def check_subalgebra_closed(basis: OperatorBasis, subset: Sequence[int]):
    """True iff every pairwise bracket within ``subset`` stays in its span.

    Returns ``(closed, witness)`` where a failing witness is the violating
    index pair together with the bracket that escaped the span.
    """
    subset = sorted(set(subset))
    for k in subset:
        if not 0 <= k < len(basis):
            raise ValueError(f"subset index {k} out of range")
    members = [basis[k] for k in subset]
    for a in range(len(subset)):
        for b in range(a + 1, len(subset)):
            bracket = commutator(members[a], members[b])
            if span_membership(members, bracket) is None:
                return False, (subset[a], subset[b], bracket)
    return True, None


def express_in_basis(target: DiffOperator, basis: OperatorBasis) -> Optional[tuple]:
    """Exact scalar coordinates of ``target`` over ``basis``, or ``None``."""
    coords = span_membership(basis.ops, target)
    return None if coords is None else tuple(coords)


# ---------------------------------------------------------------------------
# Abstract structure-constant algebras
# ---------------------------------------------------------------------------


class AbstractAlgebra:
    """A finite-dimensional algebra given by its full product table.

    ``mult[i][j][k]`` is the coordinate of ``e_k`` in ``e_i e_j``.  When
    ``unit`` is set, the unit row and column are validated; when
    ``associative=True``, associativity is checked on all basis triples.
    """

    __slots__ = ("size", "mult", "unit", "associative")

    def __init__(self, mult, unit: Optional[int] = None, associative: bool = False):
        table = _freeze_table(mult)
        n = len(table)
        if any(len(plane) != n or any(len(row) != n for row in plane) for plane in table):
            raise ValueError("multiplication table must be N x N x N")
        object.__setattr__(self, "size", n)
        object.__setattr__(self, "mult", table)
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "associative", bool(associative))
        if unit is not None:
            if not 0 <= unit < n:
                raise ValueError("unit index out of range")
            for j in range(n):
                for k in range(n):
                    want = ONE if j == k else ZERO
                    if table[unit][j][k] != want or table[j][unit][k] != want:
                        raise ValueError("declared unit does not act as the unit")
        if associative:
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        left = self.product(
                            self.basis_element(i), self.basis_element(j)
                        )
                        left = self.product(left, self.basis_element(k))
                        right = self.product(
                            self.basis_element(j), self.basis_element(k)
                        )
                        right = self.product(self.basis_element(i), right)
                        if left != right:
                            raise ValueError(
                                f"table is not associative at triple ({i},{j},{k})"
                            )

    def __setattr__(self, name, value):
        raise AttributeError("AbstractAlgebra is immutable")

    def element(self, coords) -> "AbstractElement":
        return AbstractElement(self, tuple(_as_gr(c) for c in coords))

    def basis_element(self, k: int) -> "AbstractElement":
        return self.element([ONE if i == k else ZERO for i in range(self.size)])

    def zero(self) -> "AbstractElement":
        return self.element([ZERO] * self.size)

    def unit_element(self) -> "AbstractElement":
        if self.unit is None:
            raise ValueError("algebra has no unit")
        return self.basis_element(self.unit)

    def product(self, a: "AbstractElement", b: "AbstractElement") -> "AbstractElement":
        if a.algebra is not self or b.algebra is not self:
            raise ValueError("elements belong to a different algebra")
        coords = [ZERO] * self.size
        for i, ai in enumerate(a.coords):
            if ai.is_zero:
                continue
            for j, bj in enumerate(b.coords):
                if bj.is_zero:
                    continue
                factor = ai * bj
                for k, c in enumerate(self.mult[i][j]):
                    if not c.is_zero:
                        coords[k] = coords[k] + factor * c
        return self.element(coords)


@dataclass(frozen=True)
class AbstractElement:
    """A coordinate vector over an ``AbstractAlgebra`` basis."""

    algebra: AbstractAlgebra
    coords: tuple

    def __add__(self, other):
        if not isinstance(other, AbstractElement) or other.algebra is not self.algebra:
            return NotImplemented
        return self.algebra.element(
            [a + b for a, b in zip(self.coords, other.coords)]
        )

    def __sub__(self, other):
        if not isinstance(other, AbstractElement) or other.algebra is not self.algebra:
            return NotImplemented
        return self.algebra.element(
            [a - b for a, b in zip(self.coords, other.coords)]
        )

    def __neg__(self):
        return self.algebra.element([-a for a in self.coords])

    def scale(self, scalar) -> "AbstractElement":
        scalar = _as_gr(scalar)
        return self.algebra.element([a * scalar for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, AbstractElement):
            return self.algebra.product(self, other)
        if isinstance(other, (GaussianRational, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (GaussianRational, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, AbstractElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash((id(self.algebra), self.coords))


def abstract_product(alg: AbstractAlgebra, *elements: AbstractElement) -> AbstractElement:
    """Left-associated fold of the multiplication table.

    For associative algebras the association order is immaterial.
    """
    if not elements:
        return alg.unit_element()
    out = elements[0]
    for e in elements[1:]:
        out = alg.product(out, e)
    return out


def jordan_lie_split(alg: AbstractAlgebra):
    """Symmetric and antisymmetric halves of the product table.

    ``plus[i][j][k] = c_ij + c_ji`` and ``minus[i][j][k] = c_ij - c_ji``,
    so plus + minus = 2 * mult.
    """
    n = alg.size
    plus = [
        [
            [alg.mult[i][j][k] + alg.mult[j][i][k] for k in range(n)]
            for j in range(n)
        ]
        for i in range(n)
    ]
    minus = [
        [
            [alg.mult[i][j][k] - alg.mult[j][i][k] for k in range(n)]
            for j in range(n)
        ]
        for i in range(n)
    ]
    return _freeze_table(plus), _freeze_table(minus)


def abstract_inverse(alg: AbstractAlgebra, x) -> Optional[AbstractElement]:
    """Two-sided inverse of ``x`` (an element or basis index), if any.

    Solves the exact linear system ``a . M = unit`` with ``M`` the
    right-multiplication matrix of ``x``, then verifies both sides.
    """
    if alg.unit is None:
        raise ValueError("inverses need a unital algebra")
    if isinstance(x, int):
        x = alg.basis_element(x)
    n = alg.size
    # (a x)_k = sum_j a_j c^k_{j,i} x_i  -> matrix[k][j]
    matrix = [[ZERO] * n for _ in range(n)]
    for j in range(n):
        for i, xi in enumerate(x.coords):
            if xi.is_zero:
                continue
            for k in range(n):
                matrix[k][j] = matrix[k][j] + alg.mult[j][i][k] * xi
    rhs = [ONE if k == alg.unit else ZERO for k in range(n)]
    solution = linalg.solve(matrix, rhs)
    if solution is None:
        return None
    candidate = alg.element(solution)
    unit = alg.unit_element()
    if alg.product(candidate, x) != unit or alg.product(x, candidate) != unit:
        return None
    return candidate


def nilpotency_degree(alg: AbstractAlgebra, g: AbstractElement, cap: int) -> Optional[int]:
    """Least ``K <= cap`` with ``g^K = 0``, or ``None``."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    power = g
    for k in range(1, cap + 1):
        if power.is_zero:
            return k
        power = alg.product(power, g)
    return None


def rational_binomial(q: Fraction, k: int) -> Fraction:
    """Generalized binomial ``binom(q, k)`` in exact rational arithmetic."""
    out = Fraction(1)
    for j in range(k):
        out *= q - j
        out /= j + 1
    return out


@dataclass(frozen=True)
class FracPowerResult:
    """Truncated fractional power ``tau^(p/m) * sum_k coeff_k G^k``.

    ``tau_exponent`` is kept formal (the scalar field has no roots);
    ``g_coefficients`` has one exact rational entry per power of the
    nilpotent part, ``K`` entries in total.
    """

    tau_exponent: Fraction
    g_coefficients: tuple
    nilpotent_degree: int
    tau: GaussianRational
    nilpotent_part: AbstractElement

    def reconstruct(self) -> AbstractElement:
        """``sum_k coeff_k G^k`` without the formal ``tau`` prefactor."""
        alg = self.nilpotent_part.algebra
        total = alg.zero()
        power = alg.unit_element()
        for k, c in enumerate(self.g_coefficients):
            if k > 0:
                power = alg.product(power, self.nilpotent_part)
            total = total + power.scale(GaussianRational(c))
        return total


def frac_power(
    alg: AbstractAlgebra,
    element: AbstractElement,
    p: int,
    m: int,
    cap: int,
) -> FracPowerResult:
    """Binomial-series fractional power truncated by nilpotency.

    ``element`` must decompose as ``tau * unit + G`` with ``G`` nilpotent of
    degree at most ``cap``; the returned coefficients are
    ``binom(p/m, k)`` for ``k = 0 .. K-1``.
    """
    if m < 1:
        raise ValueError("denominator m must be a positive integer")
    if alg.unit is None:
        raise ValueError("fractional powers need a unital algebra")
    tau = element.coords[alg.unit]
    g = element - alg.unit_element().scale(tau)
    degree = nilpotency_degree(alg, g, cap)
    if degree is None:
        raise ValueError(f"non-unit part is not nilpotent within degree {cap}")
    q = Fraction(p, m)
    coeffs = tuple(rational_binomial(q, k) for k in range(degree))
    return FracPowerResult(
        tau_exponent=q,
        g_coefficients=coeffs,
        nilpotent_degree=degree,
        tau=tau,
        nilpotent_part=g,
    )


def truncated_nilpotent_algebra(degree: int) -> AbstractAlgebra:
    """The unital algebra of one nilpotent generator ``g`` with ``g^K = 0``.

    Basis ``(1, g, g^2, ..., g^(K-1))``; associative and commutative.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    n = degree
    mult = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i + j < n:
                mult[i][j][i + j] = ONE
    return AbstractAlgebra(mult, unit=0, associative=True)
