"""Noncommutative algebra of linear differential operators.

A ``DiffOperator`` maps derivative multi-indices to ring coefficients; the
zero multi-index with coefficient 1 is the identity operator.  Composition
expands by the Leibniz rule, so commutators, anticommutators, powers and
cyclic symmetrized products are all exact.  ``OperatorWord`` represents a
formal product of basis elements; ``lie_reduce`` rewrites word sums to the
canonical non-decreasing order using a closed table of bracket coordinates.

Everything here is pure and operates on immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .coeffring import Coefficient, GaussianRational, I, ONE, ZERO
from .errors import DimensionMismatch

_scalar_types = (GaussianRational, int, Fraction)


def deriv_sort_key(alpha: tuple) -> tuple:
    """Graded-lexicographic order on derivative multi-indices."""
    return (sum(alpha), alpha)


class DiffOperator:
    """A finite sum ``sum_a f_a(x) d^a`` of derivative terms.

    ``terms`` maps each multi-index ``a`` (tuple of non-negative ints, one
    entry per variable) to a nonzero ``Coefficient``.  ``op * op`` is
    composition, ``op ** n`` the n-fold composition, ``+``/``-`` the linear
    structure; scalars multiply from either side.
    """

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Mapping | Iterable | None = None):
        clean: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for alpha, coeff in items:
                alpha = tuple(int(a) for a in alpha)
                if len(alpha) != dim:
                    raise DimensionMismatch("multi-index length does not match dim")
                if any(a < 0 for a in alpha):
                    raise ValueError("derivative multi-indices are non-negative")
                if coeff.dim != dim:
                    raise DimensionMismatch("coefficient dim does not match operator")
                if coeff.is_zero:
                    continue
                acc = clean.get(alpha)
                total = coeff if acc is None else acc + coeff
                if total.is_zero:
                    clean.pop(alpha, None)
                else:
                    clean[alpha] = total
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("DiffOperator is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "DiffOperator":
        return cls(dim)

    @classmethod
    def identity(cls, dim: int) -> "DiffOperator":
        return cls(dim, {(0,) * dim: Coefficient.one(dim)})

    @classmethod
    def single(cls, dim: int, alpha: Sequence[int], coeff: Coefficient | None = None) -> "DiffOperator":
        coeff = coeff if coeff is not None else Coefficient.one(dim)
        return cls(dim, {tuple(alpha): coeff})

    @classmethod
    def derivative(cls, dim: int, v: int, order: int = 1) -> "DiffOperator":
        alpha = tuple(order if k == v else 0 for k in range(dim))
        return cls.single(dim, alpha)

    # -- linear structure -------------------------------------------------

    def _check(self, other: "DiffOperator"):
        if self.dim != other.dim:
            raise DimensionMismatch(
                f"operators over {self.dim} and {other.dim} variables"
            )

    def __add__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        self._check(other)
        merged = dict(self._terms)
        for alpha, coeff in other._terms.items():
            acc = merged.get(alpha)
            total = coeff if acc is None else acc + coeff
            if total.is_zero:
                merged.pop(alpha, None)
            else:
                merged[alpha] = total
        return DiffOperator(self.dim, merged)

    def __sub__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return DiffOperator(self.dim, {a: -c for a, c in self._terms.items()})

    def scale(self, scalar) -> "DiffOperator":
        if isinstance(scalar, _scalar_types):
            scalar = scalar if isinstance(scalar, GaussianRational) else GaussianRational(scalar)
            if scalar.is_zero:
                return DiffOperator(self.dim)
            return DiffOperator(
                self.dim, {a: c * scalar for a, c in self._terms.items()}
            )
        if isinstance(scalar, Coefficient):
            return DiffOperator(
                self.dim, {a: scalar * c for a, c in self._terms.items()}
            )
        raise TypeError(f"cannot scale by {type(scalar).__name__}")

    def __mul__(self, other):
        if isinstance(other, DiffOperator):
            return compose(self, other)
        if isinstance(other, _scalar_types):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, _scalar_types):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "DiffOperator":
        if not isinstance(n, int) or n < 1:
            raise ValueError("operator powers need a positive integer exponent")
        out = self
        for _ in range(n - 1):
            out = compose(out, self)
        return out

    # -- structure --------------------------------------------------------

    @property
    def order(self) -> int:
        """Differential order; -1 for the zero operator."""
        if not self._terms:
            return -1
        return max(sum(a) for a in self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self):
        """Terms as ``(alpha, coefficient)`` in graded-lex order."""
        return sorted(self._terms.items(), key=lambda kv: deriv_sort_key(kv[0]))

    def coefficient(self, alpha: Sequence[int]) -> Coefficient:
        return self._terms.get(tuple(alpha), Coefficient.zero(self.dim))

    def conjugate(self) -> "DiffOperator":
        """Coefficient-wise complex conjugation; derivative indices unchanged.

        This is the formal conjugate, not the integration-by-parts adjoint.
        """
        return DiffOperator(self.dim, {a: c.conjugate() for a, c in self._terms.items()})

    def apply(self, func: Coefficient) -> Coefficient:
        """Apply the operator to a ring element: ``sum_a f_a * d^a(func)``."""
        if func.dim != self.dim:
            raise DimensionMismatch("function dim does not match operator")
        total = Coefficient.zero(self.dim)
        for alpha, coeff in self._terms.items():
            g = func
            for v, k in enumerate(alpha):
                for _ in range(k):
                    g = g.diff(v)
            total = total + coeff * g
        return total

    def components(self):
        """Flat view ``((alpha, (powers, exp_args)) -> scalar)``, canonical order."""
        out = {}
        for alpha, coeff in self._terms.items():
            for key, scalar in coeff.terms():
                out[(alpha, key)] = scalar
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, frozenset((a, c) for a, c in self._terms.items())))

    def __repr__(self):
        body = "; ".join(f"d^{a}: {c!r}" for a, c in self.terms())
        return f"DiffOperator({self.dim}: {body or '0'})"


def _binom_multi(alpha: tuple, gamma: tuple) -> int:
    out = 1
    for a, g in zip(alpha, gamma):
        out *= math.comb(a, g)
    return out


def _sub_indices(alpha: tuple):
    """All gamma <= alpha componentwise."""
    if not alpha:
        yield ()
        return
    head, rest = alpha[0], alpha[1:]
    for tail in _sub_indices(rest):
        for g in range(head + 1):
            yield (g,) + tail


def compose(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """Operator composition by Leibniz expansion.

    ``(f d^a)(g d^b) = sum_{c<=a} binom(a,c) f d^c(g) d^(a-c+b)``.
    """
    a._check(b)
    dim = a.dim
    out: dict = {}
    for alpha, fa in a._terms.items():
        for beta, gb in b._terms.items():
            for gamma in _sub_indices(alpha):
                g = gb
                for v, k in enumerate(gamma):
                    for _ in range(k):
                        g = g.diff(v)
                if g.is_zero:
                    continue
                coeff = fa * g * _binom_multi(alpha, gamma)
                index = tuple(x - y + z for x, y, z in zip(alpha, gamma, beta))
                acc = out.get(index)
                total = coeff if acc is None else acc + coeff
                if total.is_zero:
                    out.pop(index, None)
                else:
                    out[index] = total
    return DiffOperator(dim, out)


def commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """``a*b - b*a``; antisymmetric and bilinear."""
    return compose(a, b) - compose(b, a)


def anticommutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """``a*b + b*a``; symmetric."""
    return compose(a, b) + compose(b, a)


# ---------------------------------------------------------------------------
# Hermitian projection check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HermitianProjectionReport:
    """Outcome of testing ``a * conjugate(a)`` against the real projection.

    ``condition_holds`` is the termwise cross-condition
    ``Re(F_i) Im(F_j) == Im(F_i) Re(F_j)`` over all index pairs;
    ``residuals`` lists the failing pairs with their exact defect, plus the
    componentwise mismatch against ``target`` when one was supplied.
    """

    condition_holds: bool
    product: DiffOperator
    residuals: tuple


def check_hermitian_projection(a: DiffOperator, target: DiffOperator | None = None) -> HermitianProjectionReport:
    if a.order > 1:
        raise ValueError("hermitian projection check requires order <= 1")
    half = GaussianRational(Fraction(1, 2))
    halfi = GaussianRational(0, Fraction(1, 2))
    parts = {}
    for alpha, coeff in a.terms():
        conj = coeff.conjugate()
        real = (coeff + conj) * half
        imag = (coeff - conj) * halfi * GaussianRational(-1)
        parts[alpha] = (real, imag)
    residuals = []
    indices = sorted(parts, key=deriv_sort_key)
    for ai in indices:
        for aj in indices:
            ri, ci = parts[ai]
            rj, cj = parts[aj]
            defect = ri * cj - ci * rj
            if not defect.is_zero:
                residuals.append(("cross", ai, aj, defect))
    product = compose(a, a.conjugate())
    if target is not None:
        diff = product - target
        for alpha, coeff in diff.terms():
            residuals.append(("target", alpha, None, coeff))
    holds = not any(kind == "cross" for kind, *_ in residuals)
    return HermitianProjectionReport(holds, product, tuple(residuals))


# ---------------------------------------------------------------------------
# Operator bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorBasis:
    """An ordered tuple of operators over a common variable tuple.

    ``parity`` optionally tags each member +1 (symmetric part) or -1
    (antisymmetric part) for ``parity_split``.
    """

    ops: tuple
    parity: Optional[tuple] = None

    def __post_init__(self):
        ops = tuple(self.ops)
        object.__setattr__(self, "ops", ops)
        if not ops:
            raise ValueError("empty basis")
        dim = ops[0].dim
        if any(op.dim != dim for op in ops):
            raise DimensionMismatch("basis members over different variable tuples")
        if self.parity is not None:
            parity = tuple(self.parity)
            if len(parity) != len(ops) or any(p not in (1, -1) for p in parity):
                raise ValueError("parity must assign +1 or -1 per basis member")
            object.__setattr__(self, "parity", parity)

    @property
    def dim(self) -> int:
        return self.ops[0].dim

    @property
    def unit_index(self) -> Optional[int]:
        """Index of the exact identity operator, if present."""
        ident = DiffOperator.identity(self.dim)
        for k, op in enumerate(self.ops):
            if op == ident:
                return k
        return None

    def __len__(self):
        return len(self.ops)

    def __getitem__(self, k):
        return self.ops[k]

    def __iter__(self):
        return iter(self.ops)


def parity_split(a: DiffOperator, basis: OperatorBasis):
    """Split ``a`` along the +/- tagging supplied with the basis.

    Requires ``a`` to have exact scalar coordinates over the basis; returns
    ``(plus, minus)`` with ``plus + minus == a``.
    """
    if basis.parity is None:
        raise ValueError("basis carries no +/- decomposition")
    from .solver import span_membership  # local import avoids a cycle

    coords = span_membership(basis.ops, a)
    if coords is None:
        raise ValueError("operator is not in the span of the basis")
    plus = DiffOperator.zero(a.dim)
    minus = DiffOperator.zero(a.dim)
    for c, op, p in zip(coords, basis.ops, basis.parity):
        if c.is_zero:
            continue
        if p == 1:
            plus = plus + op.scale(c)
        else:
            minus = minus + op.scale(c)
    return plus, minus


def parity_involution(a: DiffOperator, basis: OperatorBasis) -> DiffOperator:
    """``plus - minus``; applying it twice gives back ``a``."""
    plus, minus = parity_split(a, basis)
    return plus - minus


def symmetrize(basis: OperatorBasis, indices: Sequence[int]) -> DiffOperator:
    """Cyclic average ``(1/n) sum_k D_{i_{1+k}} ... D_{i_{n+k}}``.

    The result commutes with any operator that every basis member commutes
    with, since it is a sum of products of basis members.
    """
    indices = list(indices)
    n = len(indices)
    if n == 0:
        raise ValueError("need at least one index")
    for k in indices:
        if not 0 <= k < len(basis):
            raise ValueError(f"basis index {k} out of range")
    total = DiffOperator.zero(basis.dim)
    for shift in range(n):
        rotated = indices[shift:] + indices[:shift]
        prod = basis[rotated[0]]
        for k in rotated[1:]:
            prod = compose(prod, basis[k])
        total = total + prod
    return total.scale(GaussianRational(Fraction(1, n)))


# ---------------------------------------------------------------------------
# Operator words and Lie reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorWord:
    """A scalar multiple of a formal product of basis elements.

    ``factors`` indexes into an operator basis; the empty word is the
    identity.
    """

    scalar: GaussianRational
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not isinstance(self.scalar, GaussianRational):
            object.__setattr__(self, "scalar", GaussianRational(self.scalar))


def word_value(words: Iterable[OperatorWord], basis: OperatorBasis) -> DiffOperator:
    """Evaluate a word sum through actual operator composition."""
    total = DiffOperator.zero(basis.dim)
    for word in words:
        prod = DiffOperator.identity(basis.dim)
        for k in word.factors:
            prod = compose(prod, basis[k])
        total = total + prod.scale(word.scalar)
    return total


def lie_reduce(words: Iterable[OperatorWord], constants) -> list:
    """Rewrite a word sum to the canonical non-decreasing normal form.

    Out-of-order adjacent pairs ``D_j D_i`` (j > i) are replaced by
    ``D_i D_j - sum_k C^k_ij D_k`` using the closed bracket table
    ``constants.table[i][j][k]``; identity factors (``constants.unit``)
    are absorbed.  Equal normal words are combined and zero words dropped.
    The rewriting terminates and, because the table satisfies the Jacobi
    identity, the normal form is unique.
    """
    table = constants.table
    unit = constants.unit
    size = len(table)
    reduced: dict = {}
    stack = [(w.scalar, tuple(w.factors)) for w in words]
    while stack:
        scalar, factors = stack.pop()
        if scalar.is_zero:
            continue
        if any(not 0 <= f < size for f in factors):
            raise ValueError("word factor outside the basis")
        pos = next(
            (p for p in range(len(factors) - 1) if factors[p] > factors[p + 1]),
            None,
        )
        if pos is None:
            if unit is not None:
                factors = tuple(f for f in factors if f != unit)
            acc = reduced.get(factors)
            total = scalar if acc is None else acc + scalar
            if total.is_zero:
                reduced.pop(factors, None)
            else:
                reduced[factors] = total
            continue
        j, i = factors[pos], factors[pos + 1]
        stack.append((scalar, factors[:pos] + (i, j) + factors[pos + 2 :]))
        for k, c in enumerate(table[i][j]):
            if not c.is_zero:
                stack.append((-(scalar * c), factors[:pos] + (k,) + factors[pos + 2 :]))
    out = [OperatorWord(s, f) for f, s in reduced.items()]
    out.sort(key=lambda w: (len(w.factors), w.factors))
    return out


def power_normal_words(constants, n: int) -> list:
    """Distinct normal-form words reachable from all degree-``n`` products.

    Expands every length-``n`` factor sequence over the basis, reduces each
    one, and returns the sorted union of the resulting normal words.
    """
    if n < 0:
        raise ValueError("power must be non-negative")
    size = len(constants.table)
    support = set()
    sequences = [()]
    for _ in range(n):
        sequences = [seq + (k,) for seq in sequences for k in range(size)]
    for seq in sequences:
        for word in lie_reduce([OperatorWord(ONE, seq)], constants):
            support.add(word.factors)
    return sorted(support, key=lambda f: (len(f), f))
