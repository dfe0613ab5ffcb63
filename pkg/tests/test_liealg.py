"""Structure constants, abstract algebras and fractional powers."""

from fractions import Fraction

import pytest

from symctr.coeffring import Coefficient, GaussianRational, I, ONE, ZERO
from symctr.errors import ClosureError
from symctr.liealg import (
    AbstractAlgebra,
    abstract_inverse,
    abstract_product,
    check_subalgebra_closed,
    express_in_basis,
    frac_power,
    jordan_lie_split,
    nilpotency_degree,
    rational_binomial,
    structure_constants,
    truncated_nilpotent_algebra,
)
from symctr.models import model_schrodinger1d, reference_basis
from symctr.opalg import DiffOperator, OperatorBasis, commutator

MODEL = model_schrodinger1d()
BOOST, SPACE, TIME, UNIT = MODEL.generators.ops
DIM = 2


def reference_operator_basis(order=2) -> OperatorBasis:
    return OperatorBasis(tuple(op for _, op in reference_basis(order)))


class TestExpressInBasis:
    def test_bracket_coordinates(self):
        bracket = commutator(BOOST, TIME)
        coords = express_in_basis(bracket, MODEL.generators)
        assert coords == (ZERO, GaussianRational(0, -2), ZERO, ZERO)

    def test_basis_member_is_unit_vector(self):
        coords = express_in_basis(SPACE, MODEL.generators)
        assert coords == (ZERO, ONE, ZERO, ZERO)

    def test_absent_for_quadratic_coefficient(self):
        x = Coefficient.variable(DIM, 0)
        outside = DiffOperator(DIM, {(1, 0): x * x})
        assert express_in_basis(outside, MODEL.generators) is None


class TestStructureConstants:
    def test_first_order_table_values(self):
        constants = structure_constants(MODEL.generators)
        assert constants.table[0][1][3] == I
        assert constants.table[0][2][1] == GaussianRational(0, -2)
        assert constants.unit == 3

    def test_diagonal_vanishes(self):
        constants = structure_constants(MODEL.generators)
        for i in range(4):
            assert all(c.is_zero for c in constants.table[i][i])

    def test_brackets_reproduced(self):
        constants = structure_constants(MODEL.generators)
        for i in range(4):
            for j in range(4):
                rebuilt = DiffOperator.zero(DIM)
                for k, c in enumerate(constants.table[i][j]):
                    rebuilt = rebuilt + MODEL.generators[k].scale(c)
                assert rebuilt == commutator(MODEL.generators[i], MODEL.generators[j])

    def test_reference_second_order_set_not_closed(self):
        with pytest.raises(ClosureError) as err:
            structure_constants(reference_operator_basis())
        i, j = err.value.pair
        assert not err.value.residual.is_zero
        assert err.value.residual.order > 0

    def test_invalid_table_rejected(self):
        from symctr.liealg import StructureConstants

        bad = [[[ONE]]]
        with pytest.raises(ValueError):
            StructureConstants(table=bad)


class TestSubalgebraClosure:
    """Verdicts computed on the published second-order table.

    Subset labels are the published 1-based entry numbers.  The engine
    finds (a) and the analogous singleton closed, and finds a concrete
    escaping bracket for the subsets built on the defective entry.
    """

    def subset(self, labels):
        return [k - 1 for k in labels]

    def test_first_published_subset_closed(self):
        closed, witness = check_subalgebra_closed(
            reference_operator_basis(), self.subset([1, 4, 5, 6, 8, 9, 10])
        )
        assert closed and witness is None

    def test_second_published_subset_not_closed(self):
        closed, witness = check_subalgebra_closed(
            reference_operator_basis(), self.subset([2, 4, 5, 6, 8, 10])
        )
        assert not closed
        i, j, residual = witness
        assert (i + 1, j + 1) == (2, 4)
        assert not residual.is_zero

    def test_third_published_subset_closed(self):
        closed, _ = check_subalgebra_closed(
            reference_operator_basis(), self.subset([3, 4, 5, 6, 8, 10])
        )
        assert closed

    def test_fourth_published_subset_not_closed(self):
        closed, witness = check_subalgebra_closed(
            reference_operator_basis(), self.subset([7, 4, 5, 6, 8, 10])
        )
        assert not closed
        assert (witness[0] + 1, witness[1] + 1) == (4, 7)

    def test_singleton_identity_closed(self):
        closed, _ = check_subalgebra_closed(reference_operator_basis(), [5])
        assert closed

    def test_invalid_subset_index(self):
        with pytest.raises(ValueError):
            check_subalgebra_closed(reference_operator_basis(), [99])


class TestJordanLieSplit:
    def test_commutative_table_has_zero_minus(self, quaternions):
        commutative = truncated_nilpotent_algebra(3)
        plus, minus = jordan_lie_split(commutative)
        assert all(
            v.is_zero for plane in minus for row in plane for v in row
        )

    def test_anticommutative_table_has_zero_plus(self):
        n = 3
        mult = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        mult[0][1][2] = ONE
        mult[1][0][2] = -ONE
        alg = AbstractAlgebra(mult)
        plus, _ = jordan_lie_split(alg)
        assert all(v.is_zero for plane in plus for row in plane for v in row)

    def test_split_recombines(self, quaternions):
        plus, minus = jordan_lie_split(quaternions)
        n = quaternions.size
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    assert (
                        plus[i][j][k] + minus[i][j][k]
                        == quaternions.mult[i][j][k] * 2
                    )

    def test_clifford_style_plus_entries(self):
        from symctr.models import gamma_shadow_algebra

        alg = gamma_shadow_algebra((1, 1), GaussianRational(-1))
        plus, _ = jordan_lie_split(alg)
        for a in range(2):
            for b in range(2):
                want = GaussianRational(-2) if a == b else ZERO
                assert plus[a][b][alg.unit] == want


class TestAbstractProduct:
    def test_unit_acts_trivially(self, quaternions):
        a = quaternions.element([ONE, GaussianRational(2), ZERO, GaussianRational(0, 1)])
        assert abstract_product(quaternions, quaternions.unit_element(), a) == a

    def test_table_readout(self, quaternions):
        ij = abstract_product(
            quaternions, quaternions.basis_element(0), quaternions.basis_element(1)
        )
        assert ij == quaternions.basis_element(2)

    def test_associativity_of_triple_products(self, quaternions):
        e = [quaternions.basis_element(k) for k in range(4)]
        left = abstract_product(quaternions, abstract_product(quaternions, e[0], e[1]), e[2])
        right = abstract_product(quaternions, e[0], abstract_product(quaternions, e[1], e[2]))
        assert left == right

    def test_algebra_mismatch(self, quaternions):
        other = truncated_nilpotent_algebra(2)
        with pytest.raises(ValueError):
            abstract_product(quaternions, quaternions.basis_element(0), other.basis_element(0))


class TestAbstractInverse:
    def test_unit_inverse_is_unit(self, quaternions):
        assert abstract_inverse(quaternions, 3) == quaternions.unit_element()

    def test_nilpotent_has_no_inverse(self):
        alg = truncated_nilpotent_algebra(2)
        assert abstract_inverse(alg, 1) is None

    def test_geometric_series_inverse(self):
        alg = truncated_nilpotent_algebra(2)
        one_plus_n = alg.element([ONE, ONE])
        inv = abstract_inverse(alg, one_plus_n)
        assert inv == alg.element([ONE, -ONE])

    def test_two_sided(self, quaternions):
        x = quaternions.element([ONE, GaussianRational(2), GaussianRational(-1), ONE])
        inv = abstract_inverse(quaternions, x)
        assert inv is not None
        unit = quaternions.unit_element()
        assert quaternions.product(inv, x) == unit
        assert quaternions.product(x, inv) == unit


class TestNilpotency:
    def test_zero_element_degree_one(self):
        alg = truncated_nilpotent_algebra(3)
        assert nilpotency_degree(alg, alg.zero(), 5) == 1

    def test_single_nilpotent_generator(self):
        alg = truncated_nilpotent_algebra(2)
        assert nilpotency_degree(alg, alg.basis_element(1), 5) == 2

    def test_invertible_element_is_not_nilpotent(self, quaternions):
        assert nilpotency_degree(quaternions, quaternions.unit_element(), 6) is None

    def test_cap_validation(self):
        alg = truncated_nilpotent_algebra(2)
        with pytest.raises(ValueError):
            nilpotency_degree(alg, alg.zero(), 0)


class TestFracPower:
    def test_half_power_coefficients(self):
        alg = truncated_nilpotent_algebra(2)
        result = frac_power(alg, alg.element([ONE, ONE]), 1, 2, 2)
        assert result.g_coefficients == (Fraction(1), Fraction(1, 2))
        assert result.tau_exponent == Fraction(1, 2)
        assert result.nilpotent_degree == 2

    def test_three_halves_coefficients(self):
        alg = truncated_nilpotent_algebra(3)
        result = frac_power(alg, alg.element([ONE, ONE, ZERO]), 3, 2, 3)
        assert result.g_coefficients == (
            Fraction(1),
            Fraction(3, 2),
            Fraction(3, 8),
        )

    def test_integer_power_collapses(self):
        alg = truncated_nilpotent_algebra(4)
        result = frac_power(alg, alg.element([ONE, ONE, ZERO, ZERO]), 1, 1, 4)
        assert result.g_coefficients == (
            Fraction(1),
            Fraction(1),
            Fraction(0),
            Fraction(0),
        )

    def test_half_power_squares_back(self):
        alg = truncated_nilpotent_algebra(2)
        element = alg.element([ONE, ONE])
        result = frac_power(alg, element, 1, 2, 2)
        root = result.reconstruct()
        assert alg.product(root, root) == element

    def test_reduces_to_integer_power_semantics(self):
        alg = truncated_nilpotent_algebra(4)
        element = alg.element([ONE, ONE, ZERO, ZERO])
        result = frac_power(alg, element, 2, 1, 4)
        rebuilt = result.reconstruct()
        assert rebuilt == alg.product(element, element)

    def test_non_nilpotent_rejected(self, quaternions):
        with pytest.raises(ValueError):
            frac_power(quaternions, quaternions.basis_element(0), 1, 2, 4)

    def test_zero_denominator_rejected(self):
        alg = truncated_nilpotent_algebra(2)
        with pytest.raises(ValueError):
            frac_power(alg, alg.element([ONE, ONE]), 1, 0, 2)

    def test_binomials(self):
        assert rational_binomial(Fraction(1, 2), 1) == Fraction(1, 2)
        assert rational_binomial(Fraction(3, 2), 2) == Fraction(3, 8)
        assert rational_binomial(Fraction(5), 2) == Fraction(10)
