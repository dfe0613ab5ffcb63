"""Ansatz assembly, exact nullspaces and the counting law."""

from itertools import combinations_with_replacement

import pytest

from symctr.coeffring import Coefficient, GaussianRational, I, ONE
from symctr.models import model_schrodinger1d
from symctr.opalg import DiffOperator, commutator
from symctr.solver import (
    AnsatzSpec,
    build_ansatz,
    commutator_system,
    count_formula,
    default_spec,
    grow_check,
    nullspace,
    solve_centralizer,
    span_membership,
)

MODEL = model_schrodinger1d()
H = MODEL.central
DIM = 2


def box_1p1() -> DiffOperator:
    # variables (t, x)
    return DiffOperator(
        2,
        {(2, 0): Coefficient.one(2), (0, 2): Coefficient.scalar(2, -1)},
    )


class TestBuildAnsatz:
    def test_first_order_degree_one_unknown_count(self):
        template = build_ansatz(AnsatzSpec(1, 2, 1))
        assert len(template.unknowns) == 9  # 3 derivative indices x 3 monomials

    def test_laurent_admits_inverse_time(self):
        template = build_ansatz(default_spec(2, 2, time_index=1))
        monomials = {key[1][0] for key in template.unknowns}
        assert any(powers == (0, -1) for powers in monomials)

    def test_order_zero(self):
        template = build_ansatz(AnsatzSpec(0, 2, 0))
        assert all(alpha == (0, 0) for alpha, _ in template.unknowns)

    def test_empty_support_rejected(self):
        with pytest.raises(ValueError):
            build_ansatz(AnsatzSpec(0, 2, -1))

    def test_exponential_support(self):
        spec = AnsatzSpec(0, 2, 0, exp_args=((GaussianRational(2), GaussianRational(0)),))
        template = build_ansatz(spec)
        assert len(template.unknowns) == 2  # plain constant and the exp monomial


class TestCommutatorSystem:
    def test_first_order_nullity_four(self):
        system = commutator_system(H, default_spec(1, DIM, time_index=1))
        assert system.summary()["nullity"] == 4

    def test_degenerate_spec_gives_empty_system(self):
        system = commutator_system(H, AnsatzSpec(0, 2, -1))
        assert system.ncols == 0 and system.nrows == 0
        assert len(nullspace(system)) == 0

    def test_box_1p1_oracle(self):
        """Brute-force oracle: the four known generators commute and span."""
        box = box_1p1()
        t = Coefficient.variable(2, 0)
        x = Coefficient.variable(2, 1)
        oracle = [
            DiffOperator.derivative(2, 0),
            DiffOperator.derivative(2, 1),
            DiffOperator(2, {(0, 1): t, (1, 0): x}),  # t dx + x dt
            DiffOperator.identity(2),
        ]
        for op in oracle:
            assert commutator(box, op).is_zero
        basis = solve_centralizer(box, default_spec(1, 2, time_index=0))
        assert len(basis) == 4
        for op in oracle:
            assert span_membership(list(basis), op) is not None

    def test_exponential_central_with_laurent_rejected(self):
        exp_coeff = Coefficient.monomial(2, (0, 0), ONE, (GaussianRational(1), GaussianRational(0)))
        central = DiffOperator(2, {(1, 0): exp_coeff})
        with pytest.raises(ValueError):
            commutator_system(central, default_spec(1, 2, time_index=1))
        # polynomial ansatz with the same central operator is accepted
        commutator_system(central, AnsatzSpec(1, 2, 2))


class TestNullspace:
    def test_orders_two_and_three_dimensions(self):
        assert len(solve_centralizer(H, MODEL.ansatz_spec(2))) == 10
        assert len(solve_centralizer(H, MODEL.ansatz_spec(3))) == 20

    def test_zero_matrix_leaves_all_unknowns_free(self):
        ident = DiffOperator.identity(2)
        system = commutator_system(ident, AnsatzSpec(1, 2, 1))
        assert system.nrows == 0
        basis = nullspace(system)
        assert len(basis) == len(system.col_labels)

    def test_every_member_recommutes(self):
        basis = solve_centralizer(H, MODEL.ansatz_spec(2))
        for op in basis:
            assert commutator(H, op).is_zero

    def test_determinism(self):
        a = solve_centralizer(H, MODEL.ansatz_spec(2))
        b = solve_centralizer(H, MODEL.ansatz_spec(2))
        assert tuple(a) == tuple(b)
        assert a.coordinates == b.coordinates

    def test_nesting(self):
        lower = solve_centralizer(H, MODEL.ansatz_spec(1))
        upper = solve_centralizer(H, MODEL.ansatz_spec(2))
        for op in lower:
            assert span_membership(list(upper), op) is not None

    def test_grow_check_stable(self):
        basis, grown_dim = grow_check(H, MODEL.ansatz_spec(1))
        assert len(basis) == 4 and grown_dim == 4


class TestSpanMembership:
    def test_boost_in_second_order_basis(self):
        basis = solve_centralizer(H, MODEL.ansatz_spec(2))
        coords = span_membership(list(basis), MODEL.generators[0])
        assert coords is not None
        rebuilt = DiffOperator.zero(DIM)
        for c, op in zip(coords, basis):
            rebuilt = rebuilt + op.scale(c)
        assert rebuilt == MODEL.generators[0]

    def test_order_excess_rejected(self):
        basis = solve_centralizer(H, MODEL.ansatz_spec(2))
        cubic = DiffOperator.derivative(DIM, 0, 3)
        assert span_membership(list(basis), cubic) is None

    def test_first_order_generators_in_computed_basis(self):
        basis = solve_centralizer(H, MODEL.ansatz_spec(1))
        for op in MODEL.generators:
            assert span_membership(list(basis), op) is not None

    def test_empty_basis(self):
        assert span_membership([], DiffOperator.zero(DIM)) == []
        assert span_membership([], DiffOperator.identity(DIM)) is None


class TestCountFormula:
    def test_reported_values(self):
        assert count_formula(4, 2) == 10
        assert count_formula(4, 4) == 35
        assert count_formula(8, 2) == 36

    def test_order_one_matches_basis_size(self):
        for n in range(1, 9):
            assert count_formula(n, 1) == n

    def test_multiset_enumeration_oracle(self):
        for basis_size in range(1, 7):
            for order in range(0, 7):
                direct = sum(
                    len(list(combinations_with_replacement(range(basis_size - 1), k)))
                    for k in range(order + 1)
                )
                assert count_formula(basis_size, order) == direct

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            count_formula(0, 1)
        with pytest.raises(ValueError):
            count_formula(4, -1)
