import itertools
import math
import random
from fractions import Fraction

import pytest

from extconv import scalars
from extconv.errors import DomainError
from extconv.exterior import KForm, scalar_product, wedge, wedge_power
from extconv.projection import (minor_power_map, project,
                                pullback_support, right_inverse,
                                wedge_power_from_minors)
from extconv.shapespace import MinorTable, ShapeMatrix, adjugate, table_inner, tensor

from oracles import rand_exact


def rand_int_matrix(n, k, rng, lo=-5, hi=5):
    return ShapeMatrix(n, k, [[rng.randint(lo, hi) for _ in range(n)]
                              for _ in range(math.comb(n, k - 1))])


def rand_exact_form(n, k, rng):
    return KForm(n, k, [rand_exact(rng) for _ in range(math.comb(n, k))])


def project_by_wedge_sum(X):
    """Oracle: the wedge-sum definition Σ_i (column i as a form) ∧ e^i."""
    n, k = X.n, X.k
    total = KForm.zero(n, k, X.backend)
    for i in range(1, n + 1):
        column = KForm(n, k - 1, [row[i - 1] for row in X.entries], X.backend)
        total = total + wedge(column, KForm.basis(n, (i,), X.backend))
    return total


class TestProject:
    def test_identity_matrix_projects_to_zero(self):
        X = ShapeMatrix(2, 2, [[1, 0], [0, 1]])
        assert project(X).is_zero()

    def test_antisymmetrization_example(self):
        X = ShapeMatrix(2, 2, [[0, 5], [3, 0]])
        assert project(X) == KForm.basis(2, (1, 2)).scale(2)

    def test_k2_matches_skew_part(self):
        rng = random.Random(0)
        n = 5
        M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        out = project(ShapeMatrix(n, 2, M))
        for i, j in itertools.combinations(range(1, n + 1), 2):
            assert out.coefficient((i, j)) == M[i - 1][j - 1] - M[j - 1][i - 1]

    def test_tensor_projects_to_wedge(self):
        rng = random.Random(1)
        for n in range(2, 7):
            for k in range(2, n + 1):
                a = rand_exact_form(n, k - 1, rng)
                b = rand_exact_form(n, 1, rng)
                assert project(tensor(a, b)) == wedge(a, b)

    def test_agrees_with_wedge_sum_definition(self):
        rng = random.Random(2)
        for n in range(2, 8):
            for k in range(2, n + 1):
                X = rand_int_matrix(n, k, rng)
                assert project(X) == project_by_wedge_sum(X)

    def test_linearity(self):
        rng = random.Random(3)
        X, Y = rand_int_matrix(5, 3, rng), rand_int_matrix(5, 3, rng)
        assert project(X + Y) == project(X) + project(Y)
        assert project(X.scale(7)) == project(X).scale(7)


class TestRightInverse:
    def test_basis_slot(self):
        X = right_inverse(KForm.basis(3, (1, 2)))
        assert X.entry((1,), 2) == 1
        assert sum(1 for row in X.entries for v in row if v != 0) == 1

    def test_zero(self):
        assert all(v == 0 for row in right_inverse(KForm.zero(4, 2)).entries for v in row)

    def test_section_everywhere(self):
        rng = random.Random(4)
        for n in range(2, 7):
            for k in range(2, n + 1):
                x = rand_exact_form(n, k, rng)
                assert project(right_inverse(x)) == x

    def test_float_backend_is_exact_section(self):
        rng = random.Random(5)
        coeffs = [rng.uniform(-2, 2) for _ in range(math.comb(5, 2))]
        x = KForm(5, 2, coeffs, scalars.FLOAT)
        assert project(right_inverse(x)).coeffs == x.coeffs


class TestWedgePowerFromMinors:
    @pytest.mark.parametrize("n,k,s", [(4, 2, 2), (6, 2, 2), (6, 2, 3), (8, 4, 2)])
    def test_matches_direct_wedge_power(self, n, k, s):
        rng = random.Random(6)
        for _ in range(5):
            X = rand_int_matrix(n, k, rng)
            assert wedge_power_from_minors(X, s) == wedge_power(project(X), s)

    def test_fraction_entries(self):
        rng = random.Random(7)
        X = ShapeMatrix(4, 2, [[rand_exact(rng) for _ in range(4)] for _ in range(4)])
        assert wedge_power_from_minors(X, 2) == wedge_power(project(X), 2)

    def test_odd_degree_shortcut(self):
        rng = random.Random(8)
        X = rand_int_matrix(6, 3, rng)
        out = wedge_power_from_minors(X, 2)
        assert out.is_zero() and out.k == 6

    def test_power_beyond_dimension_shortcut(self):
        rng = random.Random(9)
        X = rand_int_matrix(4, 2, rng)
        out = wedge_power_from_minors(X, 3)
        assert out.is_zero() and out.k == 6
        assert wedge_power(project(X), 3).is_zero()

    def test_order_out_of_range(self):
        rng = random.Random(10)
        X = rand_int_matrix(4, 2, rng)
        with pytest.raises(DomainError):
            wedge_power_from_minors(X, 1)
        with pytest.raises(DomainError):
            wedge_power_from_minors(X, 5)

    def test_fault_hook_breaks_equality(self):
        rng = random.Random(11)
        X = rand_int_matrix(4, 2, rng)
        assert wedge_power_from_minors(X, 2, _flip_one_sign=True) \
            != wedge_power(project(X), 2)


class TestMinorPowerMap:
    def test_order_zero_identity(self):
        out = minor_power_map(4, 2, 0).apply(scalar=Fraction(5))
        assert out == KForm(4, 0, [5])

    def test_order_one_is_projection(self):
        rng = random.Random(12)
        for n, k in [(4, 2), (5, 3), (6, 4)]:
            pm = minor_power_map(n, k, 1)
            X = rand_int_matrix(n, k, rng)
            assert pm.apply(adjugate(X, 1)) == project(X)

    def test_odd_degree_zero_map(self):
        pm = minor_power_map(6, 3, 2)
        assert all(v == 0 for row in pm.entries for v in row)
        rng = random.Random(13)
        X = rand_int_matrix(6, 3, rng)
        assert pm.apply(adjugate(X, 2)).is_zero()

    def test_known_entry_value(self):
        # target {1,2,3,4}, cells at rows {rank({3}),rank({4})} x cols {0,1}: 2!·(−1)
        pm = minor_power_map(4, 2, 2)
        row_sets = list(itertools.combinations(range(4), 2))
        col_sets = list(itertools.combinations(range(4), 2))
        cell = row_sets.index((2, 3)) * len(col_sets) + col_sets.index((0, 1))
        assert pm.entries[0][cell] == -2

    def test_defining_condition_on_adjugates(self):
        rng = random.Random(14)
        for n, k, s in [(4, 2, 2), (6, 2, 2), (6, 2, 3), (8, 4, 2)]:
            pm = minor_power_map(n, k, s)
            X = rand_int_matrix(n, k, rng)
            assert pm.apply(adjugate(X, s)) == wedge_power(project(X), s)

    def test_beyond_ratio_zero_map(self):
        pm = minor_power_map(4, 2, 3)
        assert pm.shape[0] == 0  # no degree-6 forms on R^4
        rng = random.Random(15)
        X = rand_int_matrix(4, 2, rng)
        assert pm.apply(adjugate(X, 3)).is_zero()

    def test_space_mismatch_rejected(self):
        rng = random.Random(16)
        pm = minor_power_map(4, 2, 2)
        with pytest.raises(DomainError):
            pm.apply(adjugate(rand_int_matrix(4, 2, rng), 1))


def rand_minor_table(n, k, s, rng):
    rows = list(itertools.combinations(range(math.comb(n, k - 1)), s))
    cols = list(itertools.combinations(range(n), s))
    return MinorTable(n, k, s, [[rand_exact(rng) for _ in cols] for _ in rows])


class TestPullbackSupport:
    def test_zero_forms_give_zero_tables(self):
        tables = pullback_support([KForm.zero(4, 2), KForm.zero(4, 4)])
        assert all(v == 0 for t in tables for row in t.values for v in row)

    def test_known_entries_n2(self):
        # D_1 = e^{12} on R^2: pairing with project(Y) = Y[{1},2]·1 + Y[{2},1]·(−1)
        (d1,) = pullback_support([KForm.basis(2, (1, 2))])
        assert d1.value((0,), (1,)) == 1
        assert d1.value((1,), (0,)) == -1
        assert d1.value((0,), (0,)) == 0
        rng = random.Random(17)
        Y = rand_int_matrix(2, 2, rng)
        assert table_inner(d1, adjugate(Y, 1)) \
            == scalar_product(KForm.basis(2, (1, 2)), project(Y))

    def test_adjoint_identity_on_arbitrary_tables(self):
        rng = random.Random(18)
        for _ in range(10):
            D1 = rand_exact_form(4, 2, rng)
            D2 = rand_exact_form(4, 4, rng)
            d1, d2 = pullback_support([D1, D2])
            for s, D, d in [(1, D1, d1), (2, D2, d2)]:
                M = rand_minor_table(4, 2, s, rng)
                pm = minor_power_map(4, 2, s)
                assert table_inner(d, M) == scalar_product(D, pm.apply(M))

    def test_pairing_on_adjugates(self):
        rng = random.Random(19)
        D1, D2 = rand_exact_form(4, 2, rng), rand_exact_form(4, 4, rng)
        d1, d2 = pullback_support([D1, D2])
        for _ in range(5):
            Y = rand_int_matrix(4, 2, rng)
            xi = project(Y)
            assert table_inner(d1, adjugate(Y, 1)) == scalar_product(D1, xi)
            assert table_inner(d2, adjugate(Y, 2)) == scalar_product(D2, wedge_power(xi, 2))

    def test_degree_mismatch_rejected(self):
        with pytest.raises(DomainError):
            pullback_support([KForm.zero(4, 2)])  # needs both s=1 and s=2 on R^4
        with pytest.raises(DomainError):
            pullback_support([KForm.zero(4, 2), KForm.zero(4, 3)])
