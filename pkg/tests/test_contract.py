"""Contraction primitives: dot, traces, binary contraction, mode products."""

import numpy as np
import pytest

from tensorspec.contract import (
    contract,
    contract_all,
    contract_all_but,
    dot,
    mode_product,
    multi_mode_product,
    trace_pair,
)
from tensorspec.tensor import (
    DenseTensor,
    fiber,
    frobenius_inner,
    kronecker,
    outer,
    unit_tensor,
    vectorize,
)


def golden_222():
    arr = np.empty((2, 2, 2))
    arr[:, :, 0] = 1.0
    arr[:, :, 1] = 2.0
    return DenseTensor(arr)


def rng(seed=0):
    return np.random.default_rng(seed)


class TestDot:
    def test_golden(self):
        assert dot([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]) == 32.0

    def test_coordinate_extraction(self):
        u = rng(0).normal(size=4)
        e2 = unit_tensor([4], (2,))
        assert dot(u, e2) == u[1]

    def test_zero(self):
        assert dot([1.0, 2.0], [0.0, 0.0]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            dot([1.0], [1.0, 2.0])


class TestTracePair:
    def test_matrix_trace(self):
        assert trace_pair(DenseTensor([[1.0, 2.0], [3.0, 4.0]]), 1, 2) == 5.0

    def test_outer_trace_is_dot(self):
        r = rng(1)
        x, y = r.normal(size=3), r.normal(size=3)
        assert trace_pair(outer(x, y), 1, 2) == pytest.approx(np.dot(x, y), abs=1e-12)

    def test_trace23_of_outer_is_matmul(self):
        r = rng(2)
        x, y = r.normal(size=(2, 3)), r.normal(size=(3, 4))
        got = trace_pair(outer(x, y), 2, 3)
        assert np.max(np.abs(got.to_array() - x @ y)) <= 1e-12

    def test_trace_equals_eigenvalue_sum(self):
        # A = P diag(lam) P^-1 with well-conditioned random P
        r = rng(3)
        for _ in range(100):
            n = int(r.integers(2, 6))
            q, _ = np.linalg.qr(r.normal(size=(n, n)))
            p = q + 0.1 * r.normal(size=(n, n))
            lam = r.normal(size=n)
            a = p @ np.diag(lam) @ np.linalg.inv(p)
            assert trace_pair(DenseTensor(a), 1, 2) == pytest.approx(lam.sum(), abs=1e-9)

    def test_errors(self):
        t = golden_222()
        with pytest.raises(ValueError):
            trace_pair(t, 1, 1)
        with pytest.raises(IndexError):
            trace_pair(t, 1, 4)
        with pytest.raises(ValueError):
            trace_pair(DenseTensor(np.ones((2, 3))), 1, 2)

    def test_higher_order_linear(self):
        r = rng(4)
        a = DenseTensor(r.normal(size=(2, 3, 3, 2)))
        b = DenseTensor(r.normal(size=(2, 3, 3, 2)))
        lhs = trace_pair(a + b, 2, 3)
        rhs = trace_pair(a, 2, 3) + trace_pair(b, 2, 3)
        assert lhs.allclose(rhs, tol=1e-12)


class TestContract:
    def test_matrix_multiplication(self):
        r = rng(5)
        x, y = r.normal(size=(2, 3)), r.normal(size=(3, 2))
        got = contract(DenseTensor(x), 2, DenseTensor(y), 1)
        assert np.max(np.abs(got.to_array() - x @ y)) <= 1e-12

    def test_column_row_identity(self):
        # XY equals the sum of outer products of X's columns with Y's rows
        r = rng(6)
        x, y = r.normal(size=(3, 4)), r.normal(size=(4, 2))
        acc = DenseTensor.zeros([3, 2])
        for m in range(4):
            acc = acc + outer(x[:, m], y[m, :])
        got = contract(DenseTensor(x), 2, DenseTensor(y), 1)
        assert got.allclose(acc, tol=1e-12)

    def test_unit_vector_slices(self):
        t = golden_222()
        got = contract(t, 3, unit_tensor([2], (2,)), 1)
        assert np.array_equal(got.to_array(), 2.0 * np.ones((2, 2)))

    def test_vector_vector_is_scalar(self):
        assert contract(DenseTensor([1.0, 2.0]), 1, DenseTensor([3.0, 4.0]), 1) == 11.0

    def test_bilinear_and_decomposition_independent(self):
        r = rng(7)
        a1 = DenseTensor(r.normal(size=(2, 3)))
        a2 = DenseTensor(r.normal(size=(2, 3)))
        b = DenseTensor(r.normal(size=(3, 2)))
        lhs = contract(a1 + a2, 2, b, 1)
        rhs = contract(a1, 2, b, 1) + contract(a2, 2, b, 1)
        assert lhs.allclose(rhs, tol=1e-12)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            contract(DenseTensor(np.ones((2, 3))), 2, DenseTensor(np.ones((2, 2))), 1)
        with pytest.raises(IndexError):
            contract(DenseTensor(np.ones((2, 3))), 3, DenseTensor(np.ones((3, 2))), 1)


class TestModeProduct:
    def test_matrix_left_right(self):
        r = rng(8)
        m = r.normal(size=(3, 4))
        l1 = r.normal(size=(2, 3))
        l2 = r.normal(size=(5, 4))
        assert np.max(np.abs(mode_product(DenseTensor(m), 1, l1).to_array() - l1 @ m)) <= 1e-12
        assert np.max(np.abs(mode_product(DenseTensor(m), 2, l2).to_array() - m @ l2.T)) <= 1e-12

    def test_identity(self):
        t = golden_222()
        assert mode_product(t, 2, np.eye(2)) == t

    def test_fiber_action(self):
        # every mode-o fiber gets L applied to it
        r = rng(9)
        t = DenseTensor(r.normal(size=(2, 3, 2)))
        L = r.normal(size=(4, 3))
        got = mode_product(t, 2, L)
        assert got.dims == (2, 4, 2)
        for m1 in range(1, 3):
            for m3 in range(1, 3):
                want = L @ fiber(t, 2, (m1, m3)).to_array()
                assert np.max(np.abs(fiber(got, 2, (m1, m3)).to_array() - want)) <= 1e-12

    def test_commutation_distinct_modes(self):
        r = rng(10)
        for _ in range(20):
            t = DenseTensor(r.normal(size=(2, 3, 2)))
            a = r.normal(size=(4, 2))
            b = r.normal(size=(2, 3))
            lhs = mode_product(mode_product(t, 1, a), 2, b)
            rhs = mode_product(mode_product(t, 2, b), 1, a)
            assert lhs.allclose(rhs, tol=1e-12)

    def test_functoriality_through_one_mode(self):
        r = rng(11)
        for _ in range(20):
            t = DenseTensor(r.normal(size=(3, 2, 2)))
            a = r.normal(size=(4, 5))
            b = r.normal(size=(5, 3))
            lhs = mode_product(t, 1, a @ b)
            rhs = mode_product(mode_product(t, 1, b), 1, a)
            assert lhs.allclose(rhs, tol=1e-12)

    def test_width_mismatch(self):
        with pytest.raises(ValueError):
            mode_product(golden_222(), 1, np.ones((2, 3)))


class TestMultiModeProduct:
    def test_identity_factors(self):
        t = golden_222()
        assert multi_mode_product(t, [np.eye(2)] * 3) == t

    def test_order_invariance(self):
        r = rng(12)
        g = DenseTensor(r.normal(size=(2, 3, 2)))
        ls = [r.normal(size=(3, 2)), r.normal(size=(2, 3)), r.normal(size=(4, 2))]
        direct = multi_mode_product(g, ls)
        swapped = mode_product(mode_product(mode_product(g, 3, ls[2]), 2, ls[1]), 1, ls[0])
        assert direct.allclose(swapped, tol=1e-12)

    def test_kronecker_vec_identity(self):
        # vec_colex((o L_o)(G)) = (L_O x ... x L_1) vec_colex(G)
        r = rng(13)
        for _ in range(20):
            g = DenseTensor(r.normal(size=(2, 3, 2)))
            ls = [r.normal(size=(3, 2)), r.normal(size=(2, 3)), r.normal(size=(3, 2))]
            lhs = vectorize(multi_mode_product(g, ls), "colex")
            chain = np.kron(ls[2], np.kron(ls[1], ls[0]))
            rhs = chain @ vectorize(g, "colex")
            assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_wrong_count(self):
        with pytest.raises(ValueError):
            multi_mode_product(golden_222(), [np.eye(2)] * 2)


class TestContractAll:
    def test_alias(self):
        r = rng(14)
        a = DenseTensor(r.normal(size=(2, 3)))
        b = DenseTensor(r.normal(size=(2, 3)))
        assert contract_all(a, b) == frobenius_inner(a, b)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            contract_all(DenseTensor([1.0]), DenseTensor([1.0, 2.0]))


class TestContractAllBut:
    def test_golden_mode3(self):
        # expansion oracle: ((x1+x2)^2, 2 (x1+x2)^2) at x = (1,1)
        t = golden_222()
        got = contract_all_but(t, 3, [np.array([1.0, 1.0]), np.array([1.0, 1.0])])
        assert np.array_equal(got.to_array(), [4.0, 8.0])

    def test_golden_mode1(self):
        # expansion oracle: (x1+x2)(x1+2 x2) = 2 * 3 for both components
        t = golden_222()
        got = contract_all_but(t, 1, [np.array([1.0, 1.0]), np.array([1.0, 1.0])])
        assert np.array_equal(got.to_array(), [6.0, 6.0])

    def test_unit_vectors_give_fiber(self):
        t = DenseTensor(rng(15).normal(size=(2, 3, 2)))
        got = contract_all_but(t, 2, [unit_tensor([2], (2,)), unit_tensor([2], (1,))])
        assert got.allclose(fiber(t, 2, (2, 1)), tol=0.0)

    def test_multilinear(self):
        r = rng(16)
        t = DenseTensor(r.normal(size=(2, 3, 2)))
        x = r.normal(size=3)
        y1, y2 = r.normal(size=2), r.normal(size=2)
        a, b = 0.3, -2.0
        lhs = contract_all_but(t, 1, [x, a * y1 + b * y2]).to_array()
        rhs = a * contract_all_but(t, 1, [x, y1]).to_array() + b * contract_all_but(t, 1, [x, y2]).to_array()
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_length_checks(self):
        t = golden_222()
        with pytest.raises(ValueError):
            contract_all_but(t, 1, [np.ones(2)])
        with pytest.raises(ValueError):
            contract_all_but(t, 1, [np.ones(3), np.ones(2)])
        with pytest.raises(IndexError):
            contract_all_but(t, 5, [np.ones(2), np.ones(2)])


class TestKroneckerChainProperty:
    def test_matrix_case_reduces_to_kron_vec(self):
        # classical vec(AXB^T) = (B x A) vec(X) with colex vectorization
        r = rng(17)
        x = DenseTensor(r.normal(size=(3, 4)))
        a = r.normal(size=(2, 3))
        b = r.normal(size=(5, 4))
        lhs = vectorize(multi_mode_product(x, [a, b]), "colex")
        rhs = kronecker(b, a).to_array() @ vectorize(x, "colex")
        assert np.max(np.abs(lhs - rhs)) <= 1e-12
