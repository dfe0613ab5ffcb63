"""Shared random generators and algebra fixtures for the test suite."""

from fractions import Fraction

import pytest

from symctr.coeffring import Coefficient, GaussianRational, ONE, ZERO
from symctr.liealg import AbstractAlgebra
from symctr.opalg import DiffOperator


def random_scalar(rng, zero_ok=True):
    while True:
        value = GaussianRational(
            Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3))),
            Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2))),
        )
        if zero_ok or not value.is_zero:
            return value


def random_exp_arg(rng, dim):
    return tuple(
        GaussianRational(rng.randint(-1, 1), rng.randint(-1, 1)) for _ in range(dim)
    )


def random_coefficient(rng, dim=2, max_terms=3, allow_exp=True, allow_laurent=True):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        powers = tuple(
            rng.randint(-1 if allow_laurent else 0, 2) for _ in range(dim)
        )
        if allow_exp and rng.random() < 0.3:
            exp = random_exp_arg(rng, dim)
        else:
            exp = (ZERO,) * dim
        terms[(powers, exp)] = random_scalar(rng)
    return Coefficient(dim, terms)


def random_operator(rng, dim=2, max_order=2, max_terms=3, **coeff_kw):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        while True:
            alpha = tuple(rng.randint(0, max_order) for _ in range(dim))
            if sum(alpha) <= max_order:
                break
        coeff = random_coefficient(rng, dim=dim, **coeff_kw)
        if not coeff.is_zero:
            terms[alpha] = coeff
    return DiffOperator(dim, terms)


def quaternion_algebra() -> AbstractAlgebra:
    """Quaternions ordered (i, j, k, 1): associative, noncommutative, unital."""
    n = 4
    unit = 3
    mult = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    minus_one = [ZERO, ZERO, ZERO, GaussianRational(-1)]

    def put(i, j, coords):
        mult[i][j] = list(coords)

    for k in range(n):
        mult[unit][k][k] = ONE
        mult[k][unit][k] = ONE
    mult[unit][unit] = [ZERO, ZERO, ZERO, ONE]
    put(0, 0, minus_one)
    put(1, 1, minus_one)
    put(2, 2, minus_one)
    put(0, 1, [ZERO, ZERO, ONE, ZERO])       # ij = k
    put(1, 0, [ZERO, ZERO, -ONE, ZERO])
    put(1, 2, [ONE, ZERO, ZERO, ZERO])        # jk = i
    put(2, 1, [-ONE, ZERO, ZERO, ZERO])
    put(2, 0, [ZERO, ONE, ZERO, ZERO])        # ki = j
    put(0, 2, [ZERO, -ONE, ZERO, ZERO])
    return AbstractAlgebra(mult, unit=unit, associative=True)


@pytest.fixture(scope="session")
def quaternions():
    return quaternion_algebra()
