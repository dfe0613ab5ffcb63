"""Exact scalar and coefficient-ring arithmetic.

Scalars are Gaussian rationals: complex numbers whose real and imaginary
parts are arbitrary-precision rationals.  Coefficients are finite sums of
terms ``q * x^a * exp(l . x)`` over a fixed number of variables, where the
monomial exponent vector ``a`` is signed (negative powers allowed) and the
exponential argument ``l`` is a per-variable vector of Gaussian rationals.
The ring is closed under addition, multiplication and partial
differentiation; no rounding ever occurs, so equality of canonical forms is
syntactic and decidable.

All values are immutable after construction and every operation is pure.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch

_FractionLike = (int, Fraction)


class GaussianRational:
    """A complex scalar ``re + im*i`` with exact rational components.

    Components are stored as ``fractions.Fraction`` values, hence always in
    lowest terms with positive denominator.  Instances are immutable and
    hashable.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (ONE / self) ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- predicates and protocol -----------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def sort_key(self):
        return (self.re, self.im)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(self.re, self.im)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = "i" if abs(self.im) == 1 else f"{abs(self.im)}*i"
        if not self.re:
            return im if self.im > 0 else f"-{im}"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re} {sign} {im}"


def _coerce(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, _FractionLike):
        return GaussianRational(value)
    return NotImplemented


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def term_sort_key(powers: tuple, exp_args: tuple):
    """Canonical total order on coefficient terms.

    Lexicographic on the exponential argument, then graded lexicographic on
    the monomial exponents in variable declaration order.
    """
    return (
        tuple(l.sort_key() for l in exp_args),
        sum(powers),
        powers,
    )


class Coefficient:
    """A finite sum of terms ``q * x^a * exp(l . x)`` in ``dim`` variables.

    Internally a mapping ``(powers, exp_args) -> scalar`` with no zero
    scalars, so two coefficients are equal exactly when their canonical
    forms coincide.
    """

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Mapping | Iterable | None = None):
        if dim < 1:
            raise ValueError("need at least one variable")
        clean: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for (powers, exp_args), scalar in items:
                powers = tuple(int(p) for p in powers)
                exp_args = tuple(
                    l if isinstance(l, GaussianRational) else GaussianRational(l)
                    for l in exp_args
                )
                if len(powers) != dim or len(exp_args) != dim:
                    raise DimensionMismatch("term length does not match dim")
                if not isinstance(scalar, GaussianRational):
                    scalar = GaussianRational(scalar)
                key = (powers, exp_args)
                acc = clean.get(key)
                scalar = scalar if acc is None else acc + scalar
                if scalar.is_zero:
                    clean.pop(key, None)
                else:
                    clean[key] = scalar
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Coefficient is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Coefficient":
        return cls(dim)

    @classmethod
    def scalar(cls, dim: int, value) -> "Coefficient":
        zero = (0,) * dim
        return cls(dim, {(zero, (ZERO,) * dim): value})

    @classmethod
    def one(cls, dim: int) -> "Coefficient":
        return cls.scalar(dim, ONE)

    @classmethod
    def monomial(cls, dim: int, powers: Sequence[int], scalar=ONE, exp=None) -> "Coefficient":
        exp = tuple(exp) if exp is not None else (ZERO,) * dim
        return cls(dim, {(tuple(powers), exp): scalar})

    @classmethod
    def variable(cls, dim: int, v: int) -> "Coefficient":
        powers = tuple(1 if k == v else 0 for k in range(dim))
        return cls.monomial(dim, powers)

    # -- ring operations --------------------------------------------------

    def _check(self, other: "Coefficient"):
        if self.dim != other.dim:
            raise DimensionMismatch(
                f"coefficients over {self.dim} and {other.dim} variables"
            )

    def __add__(self, other):
        if not isinstance(other, Coefficient):
            return NotImplemented
        self._check(other)
        merged = dict(self._terms)
        for key, scalar in other._terms.items():
            acc = merged.get(key)
            total = scalar if acc is None else acc + scalar
            if total.is_zero:
                merged.pop(key, None)
            else:
                merged[key] = total
        return Coefficient(self.dim, merged)

    def __sub__(self, other):
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Coefficient(
            self.dim, {key: -scalar for key, scalar in self._terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (GaussianRational,) + _FractionLike):
            other = _coerce(other)
            if other.is_zero:
                return Coefficient(self.dim)
            return Coefficient(
                self.dim, {key: scalar * other for key, scalar in self._terms.items()}
            )
        if not isinstance(other, Coefficient):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for (pa, ea), qa in self._terms.items():
            for (pb, eb), qb in other._terms.items():
                powers = tuple(x + y for x, y in zip(pa, pb))
                exp_args = tuple(x + y for x, y in zip(ea, eb))
                key = (powers, exp_args)
                scalar = qa * qb
                acc = out.get(key)
                total = scalar if acc is None else acc + scalar
                if total.is_zero:
                    out.pop(key, None)
                else:
                    out[key] = total
        return Coefficient(self.dim, out)

    def __rmul__(self, other):
        if isinstance(other, (GaussianRational,) + _FractionLike):
            return self * other
        return NotImplemented

    def diff(self, v: int) -> "Coefficient":
        """Exact partial derivative with respect to variable ``v``.

        ``d(x^k exp(l x)) = (k x^(k-1) + l x^k) exp(l x)`` per variable;
        negative powers differentiate by the same power rule.
        """
        if not 0 <= v < self.dim:
            raise ValueError(f"variable index {v} out of range")
        out: dict = {}

        def acc(key, scalar):
            prev = out.get(key)
            total = scalar if prev is None else prev + scalar
            if total.is_zero:
                out.pop(key, None)
            else:
                out[key] = total

        for (powers, exp_args), scalar in self._terms.items():
            k = powers[v]
            if k != 0:
                lowered = powers[:v] + (k - 1,) + powers[v + 1 :]
                acc((lowered, exp_args), scalar * k)
            lam = exp_args[v]
            if not lam.is_zero:
                acc((powers, exp_args), scalar * lam)
        return Coefficient(self.dim, out)

    def conjugate(self) -> "Coefficient":
        """Complex conjugation of scalars and of exponential arguments."""
        return Coefficient(
            self.dim,
            {
                (powers, tuple(l.conjugate() for l in exp_args)): scalar.conjugate()
                for (powers, exp_args), scalar in self._terms.items()
            },
        )

    # -- queries ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_polynomial(self) -> bool:
        """True when no term carries an exponential factor."""
        return all(
            all(l.is_zero for l in exp_args) for (_, exp_args) in self._terms
        )

    def terms(self):
        """Terms as ``((powers, exp_args), scalar)`` in canonical order."""
        return sorted(self._terms.items(), key=lambda kv: term_sort_key(*kv[0]))

    def constant_part(self) -> GaussianRational:
        zero = ((0,) * self.dim, (ZERO,) * self.dim)
        return self._terms.get(zero, ZERO)

    def eval_at(self, point: Sequence[complex]) -> complex:
        """Floating-point sampling evaluation; used only for test oracles."""
        total = 0j
        for (powers, exp_args), scalar in self._terms.items():
            value = complex(scalar)
            for x, p in zip(point, powers):
                value *= x**p
            arg = sum(complex(l) * x for l, x in zip(exp_args, point))
            total += value * cmath.exp(arg)
        return total

    def __eq__(self, other):
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, frozenset(self._terms.items())))

    def __repr__(self):
        body = ", ".join(
            f"{scalar} * x^{powers}"
            + ("" if all(l.is_zero for l in exp) else f" * exp{exp}")
            for (powers, exp), scalar in self.terms()
        )
        return f"Coefficient({self.dim}: {body or '0'})"
