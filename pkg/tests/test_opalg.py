"""Operator composition, brackets, words and reduction."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from symctr.coeffring import Coefficient, GaussianRational, I, ONE, ZERO
from symctr.errors import DimensionMismatch
from symctr.liealg import structure_constants
from symctr.models import model_schrodinger1d
from symctr.opalg import (
    DiffOperator,
    OperatorBasis,
    OperatorWord,
    anticommutator,
    check_hermitian_projection,
    commutator,
    compose,
    lie_reduce,
    parity_involution,
    parity_split,
    power_normal_words,
    symmetrize,
    word_value,
)

from conftest import quaternion_algebra, random_coefficient, random_operator

DIM = 2
X = Coefficient.variable(DIM, 0)
T = Coefficient.variable(DIM, 1)
DX = DiffOperator.derivative(DIM, 0)
DT = DiffOperator.derivative(DIM, 1)
IDENT = DiffOperator.identity(DIM)

MODEL = model_schrodinger1d()
H = MODEL.central
BOOST, SPACE, TIME, UNIT = MODEL.generators.ops


def operators():
    return st.integers(min_value=0, max_value=10**9).map(
        lambda seed: random_operator(random.Random(seed))
    )


class TestCompose:
    def test_leibniz_base_case(self):
        x_mult = DiffOperator(DIM, {(0, 0): X})
        assert compose(DX, x_mult) == DiffOperator(
            DIM, {(1, 0): X, (0, 0): Coefficient.one(DIM)}
        )

    def test_momentum_squared(self):
        p = DX.scale(-I)
        assert compose(p, p) == DiffOperator(DIM, {(2, 0): Coefficient.scalar(DIM, -1)})

    def test_boost_times_momentum(self):
        expected = DiffOperator(DIM, {(2, 0): T * (-2), (1, 0): X * (-I)})
        assert compose(BOOST, SPACE) == expected

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            compose(DX, DiffOperator.derivative(3, 0))

    def test_order_bound(self):
        a = compose(BOOST, compose(SPACE, TIME))
        assert a.order <= BOOST.order + SPACE.order + TIME.order


class TestBrackets:
    def test_central_annihilates_boost(self):
        assert commutator(H, BOOST).is_zero

    def test_boost_momentum_bracket_is_identity(self):
        assert commutator(BOOST, SPACE) == IDENT.scale(I)

    def test_self_bracket_vanishes(self):
        assert commutator(BOOST, BOOST).is_zero

    def test_anticommutator_position_momentum(self):
        x_mult = DiffOperator(DIM, {(0, 0): X})
        assert anticommutator(DX, x_mult) == DiffOperator(
            DIM, {(1, 0): X * 2, (0, 0): Coefficient.one(DIM)}
        )

    def test_anticommutator_square(self):
        assert anticommutator(BOOST, BOOST) == compose(BOOST, BOOST).scale(2)

    def test_anticommutator_mixed_translations(self):
        assert anticommutator(SPACE, TIME) == DiffOperator(
            DIM, {(1, 1): Coefficient.scalar(DIM, 2)}
        )


class TestConjugate:
    def test_momentum(self):
        assert SPACE.conjugate() == DX.scale(I)

    def test_real_coefficients_fixed(self):
        op = DiffOperator(DIM, {(0, 1): X})
        assert op.conjugate() == op

    def test_boost(self):
        expected = DiffOperator(DIM, {(1, 0): T * GaussianRational(0, 2), (0, 0): X})
        assert BOOST.conjugate() == expected

    def test_involution_random(self):
        rng = random.Random(7)
        for _ in range(50):
            op = random_operator(rng)
            assert op.conjugate().conjugate() == op


class TestHermitianProjection:
    def test_real_first_order(self):
        report = check_hermitian_projection(DX)
        assert report.condition_holds
        assert report.product == DiffOperator(DIM, {(2, 0): Coefficient.one(DIM)})

    def test_purely_imaginary_coefficient(self):
        report = check_hermitian_projection(DX.scale(I))
        assert report.condition_holds
        assert report.product == DiffOperator(DIM, {(2, 0): Coefficient.one(DIM)})

    def test_mixed_real_imaginary_fails(self):
        op = DiffOperator(DIM, {(1, 0): X, (0, 1): T * I})
        report = check_hermitian_projection(op)
        assert not report.condition_holds
        kinds = {entry[0] for entry in report.residuals}
        assert kinds == {"cross"}

    def test_target_comparison(self):
        report = check_hermitian_projection(DX, target=DiffOperator(DIM, {(2, 0): Coefficient.one(DIM)}))
        assert not any(
            not value.is_zero
            for kind, _, _, value in report.residuals
            if kind == "target"
        )

    def test_order_two_rejected(self):
        with pytest.raises(ValueError):
            check_hermitian_projection(H)


class TestPowers:
    def test_square_of_derivative(self):
        assert DX**2 == DiffOperator(DIM, {(2, 0): Coefficient.one(DIM)})

    def test_boost_square_exact_expansion(self):
        expected = DiffOperator(
            DIM,
            {
                (2, 0): Coefficient.monomial(DIM, (0, 2), GaussianRational(-4)),
                (1, 0): Coefficient.monomial(DIM, (1, 1), GaussianRational(0, -4)),
                (0, 0): Coefficient.monomial(DIM, (2, 0))
                + Coefficient.monomial(DIM, (0, 1), GaussianRational(0, -2)),
            },
        )
        assert BOOST**2 == expected

    def test_central_commutes_with_cube(self):
        assert commutator(H, BOOST**3).is_zero

    def test_invalid_exponent(self):
        with pytest.raises(ValueError):
            BOOST**0


class TestApplyOracle:
    def test_composition_agrees_with_application(self):
        rng = random.Random(11)
        for _ in range(50):
            a = random_operator(rng)
            b = random_operator(rng)
            func = random_coefficient(rng)
            assert compose(a, b).apply(func) == a.apply(b.apply(func))


class TestParitySplit:
    def test_round_trip_and_involution(self):
        basis = OperatorBasis(MODEL.generators.ops, parity=(1, -1, 1, -1))
        a = BOOST.scale(GaussianRational(2)) + TIME.scale(I) + UNIT.scale(GaussianRational(3))
        plus, minus = parity_split(a, basis)
        assert plus + minus == a
        assert parity_involution(parity_involution(a, basis), basis) == a

    def test_purely_symmetric_coordinates(self):
        basis = OperatorBasis(MODEL.generators.ops, parity=(1, -1, 1, -1))
        a = BOOST + TIME.scale(GaussianRational(5))
        plus, minus = parity_split(a, basis)
        assert plus == a and minus.is_zero

    def test_not_in_span(self):
        basis = OperatorBasis(MODEL.generators.ops, parity=(1, 1, 1, 1))
        outside = DiffOperator(DIM, {(1, 0): X * X})
        with pytest.raises(ValueError):
            parity_split(outside, basis)

    def test_missing_parity(self):
        with pytest.raises(ValueError):
            parity_split(BOOST, MODEL.generators)


class TestSymmetrize:
    def test_single_index(self):
        assert symmetrize(MODEL.generators, [1]) == SPACE

    def test_pair_matches_half_anticommutator(self):
        result = symmetrize(MODEL.generators, [1, 2])
        assert result == anticommutator(SPACE, TIME).scale(GaussianRational(Fraction(1, 2)))
        assert result == DiffOperator(DIM, {(1, 1): Coefficient.one(DIM)})

    def test_triple_cyclic_formula(self):
        result = symmetrize(MODEL.generators, [0, 1, 2])
        third = GaussianRational(Fraction(1, 3))
        expected = (
            compose(BOOST, compose(SPACE, TIME))
            + compose(TIME, compose(BOOST, SPACE))
            + compose(SPACE, compose(TIME, BOOST))
        ).scale(third)
        assert result == expected

    def test_commutes_with_central(self):
        for indices in ([0, 1], [0, 1, 2], [2, 2, 0, 1]):
            assert commutator(H, symmetrize(MODEL.generators, indices)).is_zero

    def test_invalid_index(self):
        with pytest.raises(ValueError):
            symmetrize(MODEL.generators, [9])


class TestLieReduce:
    def setup_method(self):
        self.constants = structure_constants(MODEL.generators)

    def test_swap_with_identity_correction(self):
        reduced = lie_reduce([OperatorWord(ONE, (1, 0))], self.constants)
        assert reduced == [
            OperatorWord(-I, ()),
            OperatorWord(ONE, (0, 1)),
        ]

    def test_ordered_word_unchanged(self):
        reduced = lie_reduce([OperatorWord(ONE, (0, 2))], self.constants)
        assert reduced == [OperatorWord(ONE, (0, 2))]

    def test_square_has_ten_normal_words(self):
        assert len(power_normal_words(self.constants, 2)) == 10

    def test_value_preserved_on_random_words(self):
        rng = random.Random(23)
        for _ in range(60):
            words = [
                OperatorWord(
                    GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3)),
                    tuple(rng.randrange(4) for _ in range(rng.randint(0, 4))),
                )
                for _ in range(rng.randint(1, 3))
            ]
            reduced = lie_reduce(words, self.constants)
            assert word_value(words, MODEL.generators) == word_value(
                reduced, MODEL.generators
            )
            for word in reduced:
                assert list(word.factors) == sorted(word.factors)
                assert self.constants.unit not in word.factors

    def test_power_counts(self):
        assert len(power_normal_words(self.constants, 3)) == 20
        assert len(power_normal_words(self.constants, 4)) == 35


class TestAbstractCoefficientExpansion:
    """Second-power expansion with formal algebra-valued coefficients.

    The coefficient of every normal word must match the hand-derived
    combination of abstract products, and the ten-word structure survives
    symmetrization of the products.
    """

    def expand(self, product):
        quat = quaternion_algebra()
        constants = structure_constants(MODEL.generators)
        coords = {}
        for a in range(4):
            for b in range(4):
                e_ab = product(quat, quat.basis_element(a), quat.basis_element(b))
                for word in lie_reduce([OperatorWord(ONE, (a, b))], constants):
                    acc = coords.get(word.factors, quat.zero())
                    coords[word.factors] = acc + e_ab.scale(word.scalar)
        support = set(coords)
        return quat, support, {k: v for k, v in coords.items() if not v.is_zero}

    @staticmethod
    def plain(quat, a, b):
        return quat.product(a, b)

    @staticmethod
    def symmetrized(quat, a, b):
        return (quat.product(a, b) + quat.product(b, a)).scale(
            GaussianRational(Fraction(1, 2))
        )

    def expected(self, quat, product):
        e = [quat.basis_element(k) for k in range(4)]
        two_i = GaussianRational(0, 2)
        coords = {
            (): product(quat, e[3], e[3]) + product(quat, e[1], e[0]).scale(-I),
            (0,): product(quat, e[0], e[3]) + product(quat, e[3], e[0]),
            (1,): product(quat, e[1], e[3])
            + product(quat, e[3], e[1])
            + product(quat, e[2], e[0]).scale(two_i),
            (2,): product(quat, e[2], e[3]) + product(quat, e[3], e[2]),
            (0, 0): product(quat, e[0], e[0]),
            (1, 1): product(quat, e[1], e[1]),
            (2, 2): product(quat, e[2], e[2]),
            (0, 1): product(quat, e[0], e[1]) + product(quat, e[1], e[0]),
            (0, 2): product(quat, e[0], e[2]) + product(quat, e[2], e[0]),
            (1, 2): product(quat, e[1], e[2]) + product(quat, e[2], e[1]),
        }
        return {k: v for k, v in coords.items() if not v.is_zero}

    def test_coordinate_lists_match(self):
        quat, support, engine = self.expand(self.plain)
        assert engine == self.expected(quat, self.plain)
        assert len(support) == 10

    def test_symmetric_part_coordinates_match(self):
        quat, support, engine = self.expand(self.symmetrized)
        assert engine == self.expected(quat, self.symmetrized)
        assert len(support) == 10


class TestAlgebraProperties:
    @settings(max_examples=60, deadline=None)
    @given(operators(), operators(), operators())
    def test_composition_associativity(self, a, b, c):
        assert compose(compose(a, b), c) == compose(a, compose(b, c))

    @settings(max_examples=40, deadline=None)
    @given(operators(), operators(), operators())
    def test_jacobi_identity(self, a, b, c):
        total = (
            commutator(a, commutator(b, c))
            + commutator(b, commutator(c, a))
            + commutator(c, commutator(a, b))
        )
        assert total.is_zero

    @settings(max_examples=60, deadline=None)
    @given(operators(), operators())
    def test_bracket_antisymmetry(self, a, b):
        assert commutator(a, b) == -commutator(b, a)

    def test_first_order_basis_closure(self):
        constants = structure_constants(MODEL.generators)
        for i in range(4):
            for j in range(4):
                recombined = DiffOperator.zero(DIM)
                for k, c in enumerate(constants.table[i][j]):
                    recombined = recombined + MODEL.generators[k].scale(c)
                assert recombined == commutator(
                    MODEL.generators[i], MODEL.generators[j]
                )
