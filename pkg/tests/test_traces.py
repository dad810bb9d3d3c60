"""Trace functionals, diagonal surrogates, determinant, Schatten quantities."""

import math

import numpy as np
import pytest

from tracelab import (
    BasisFrame,
    DimensionMismatchError,
    DomainError,
    HermitianMatrix,
    MultivariateFunction,
    SingularMatrixError,
    TraceFunctional,
    diagonal_surrogate,
    joint_diagonalize,
    kf_determinant,
    random_commuting_tuple,
    random_hermitian,
    random_unitary,
    schatten_norm,
    schatten_quasi_power,
    surrogate_supremum_probe,
    trace,
    trace_of_function,
)

SEED = 777


def herm(rows):
    return HermitianMatrix(np.array(rows, dtype=complex))


def exp_f(arity=1, lo=-5.0, hi=5.0):
    return MultivariateFunction(
        arity, ((lo, hi),) * arity, lambda *c: np.exp(np.sum(np.broadcast_arrays(*c), axis=0)), "exp-sum"
    )


class TestTraceFunctional:
    def test_standard_identity(self):
        assert trace(TraceFunctional("standard", 3), HermitianMatrix.identity(3)) == 3.0

    def test_normalized_identity(self):
        assert trace(TraceFunctional("normalized", 3), HermitianMatrix.identity(3)) == 1.0

    def test_zero_diagonal(self):
        assert trace(TraceFunctional("standard", 2), herm([[0, 1], [1, 0]])) == 0.0

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            trace(TraceFunctional("standard", 3), HermitianMatrix.identity(2))

    def test_bad_kind(self):
        with pytest.raises(DomainError):
            TraceFunctional("other", 2)

    def test_cyclicity_on_products(self):
        tf = TraceFunctional("standard", 4)
        for i in range(30):
            x = random_hermitian(4, (-2, 2), SEED + i)
            y = random_hermitian(4, (-2, 2), SEED + 100 + i)
            xy = x.entries @ y.entries
            yx = y.entries @ x.entries
            scale = max(1.0, abs(tf.value(xy)))
            assert abs(tf.value(xy) - tf.value(yx)) <= 1e-10 * scale


class TestBasisFrame:
    def test_standard(self):
        np.testing.assert_allclose(BasisFrame.standard(3).vectors, np.eye(3))

    def test_rejects_non_orthonormal(self):
        with pytest.raises(DomainError):
            BasisFrame(np.array([[1.0, 1.0], [0.0, 1.0]]))


class TestTraceOfFunction:
    def test_exp_diagonal(self):
        t = joint_diagonalize([HermitianMatrix.diagonal([0.0, 1.0])])
        got = trace_of_function(TraceFunctional("standard", 2), exp_f(), t)
        assert got == pytest.approx(1.0 + math.e, abs=1e-12)

    def test_linearity(self):
        t = random_commuting_tuple(4, 2, [(-1, 1), (-1, 1)], SEED)
        f = MultivariateFunction(2, ((-1, 1), (-1, 1)), lambda a, b: a + b, "sum")
        tf = TraceFunctional("standard", 4)
        got = trace_of_function(tf, f, t)
        assert got == pytest.approx(tf.value(t.members[0]) + tf.value(t.members[1]), abs=1e-10)

    def test_exp_offdiagonal_oracle(self):
        # oracle: eigenvalues of [[0,1],[1,0]] are -1 and 1
        t = joint_diagonalize([herm([[0, 1], [1, 0]])])
        got = trace_of_function(TraceFunctional("standard", 2), exp_f(), t)
        assert got == pytest.approx(math.e + math.exp(-1), abs=1e-12)
        assert got == pytest.approx(3.086161270, abs=1e-9)

    def test_two_routes_agree_seeded(self):
        f = MultivariateFunction(
            2, ((-2, 2), (-2, 2)), lambda a, b: np.exp(a) + (a + b) ** 2, "mixed"
        )
        for i in range(50):
            dim = 2 + i % 7
            t = random_commuting_tuple(dim, 2, [(-2, 2), (-2, 2)], SEED + i)
            for kind in ("standard", "normalized"):
                tf = TraceFunctional(kind, dim)
                via_rows = float(
                    np.sum(f.evaluate_rows(t.joint_eigenvalues)) * tf.weight
                )
                got = trace_of_function(tf, f, t)
                assert got == pytest.approx(via_rows, rel=1e-9, abs=1e-9)


class TestDiagonalSurrogate:
    def test_joint_basis_equality(self):
        for i in range(30):
            dim = 2 + i % 6
            t = random_commuting_tuple(dim, 2, [(-1, 1), (-1, 1)], SEED + i)
            f = MultivariateFunction(
                2, ((-1, 1), (-1, 1)), lambda a, b: np.exp(a + b), "exp-sum"
            )
            tf = TraceFunctional("standard", dim)
            s = diagonal_surrogate(tf, f, t, BasisFrame(t.joint_basis))
            total = trace_of_function(tf, f, t)
            assert s == pytest.approx(total, rel=1e-9, abs=1e-9)

    def test_standard_basis_under_sums(self):
        # direct 2x2 arithmetic: the compressions of [[0,1],[1,0]] in the
        # standard basis are (0, 0), so the surrogate is e^0 + e^0 = 2
        t = joint_diagonalize([herm([[0, 1], [1, 0]])])
        tf = TraceFunctional("standard", 2)
        s = diagonal_surrogate(tf, exp_f(), t, BasisFrame.standard(2))
        assert s == pytest.approx(2.0, abs=1e-12)
        assert s <= trace_of_function(tf, exp_f(), t)

    def test_linear_function_any_basis(self):
        t = random_commuting_tuple(4, 2, [(-1, 1), (0, 2)], SEED)
        f = MultivariateFunction(2, ((-1, 1), (0, 2)), lambda a, b: 2 * a - b, "affine")
        tf = TraceFunctional("normalized", 4)
        total = trace_of_function(tf, f, t)
        for j in range(10):
            frame = BasisFrame(random_unitary(4, SEED + j))
            assert diagonal_surrogate(tf, f, t, frame) == pytest.approx(total, abs=1e-10)

    def test_jensen_inequality_seeded(self):
        for i in range(60):
            dim = 2 + i % 9
            k = 1 + i % 3
            t = random_commuting_tuple(dim, k, [(-1, 1)] * k, SEED + i)
            f = exp_f(k)
            kind = "standard" if i % 2 == 0 else "normalized"
            tf = TraceFunctional(kind, dim)
            total = trace_of_function(tf, f, t)
            frame = BasisFrame(random_unitary(dim, SEED + 1000 + i))
            s = diagonal_surrogate(tf, f, t, frame)
            assert s <= total + max(1e-9, 1e-8 * abs(total))


class TestSurrogateSupremum:
    def test_matches_trace_for_convex(self):
        t = random_commuting_tuple(5, 2, [(-1, 1), (-1, 1)], SEED)
        f = exp_f(2)
        tf = TraceFunctional("standard", 5)
        total = trace_of_function(tf, f, t)
        sup = surrogate_supremum_probe(tf, f, t, 16, SEED)
        assert sup == pytest.approx(total, rel=1e-9, abs=1e-9)

    def test_zero_basis_count_disallowed(self):
        t = random_commuting_tuple(3, 1, [(-1, 1)], SEED)
        with pytest.raises(DomainError):
            surrogate_supremum_probe(TraceFunctional("standard", 3), exp_f(), t, 0, SEED)

    def test_diagonal_tuple_single_frame_exact(self):
        t = joint_diagonalize([HermitianMatrix.diagonal([0.0, 1.0])])
        tf = TraceFunctional("standard", 2)
        sup = surrogate_supremum_probe(tf, exp_f(), t, 1, 12345)
        assert sup == pytest.approx(1.0 + math.e, abs=1e-12)

    def test_concave_reversal(self):
        # 2x2 oracle: x = [[0,1],[1,0]], f = -x^2: trace route gives -2,
        # while the standard basis compressions give f(0)+f(0) = 0 > -2
        t = joint_diagonalize([herm([[0, 1], [1, 0]])])
        f = MultivariateFunction(1, ((-2, 2),), lambda a: -(a**2), "neg-square")
        tf = TraceFunctional("standard", 2)
        total = trace_of_function(tf, f, t)
        assert total == pytest.approx(-2.0, abs=1e-12)
        s = diagonal_surrogate(tf, f, t, BasisFrame.standard(2))
        assert s == pytest.approx(0.0, abs=1e-12)
        assert s > total
        sup = surrogate_supremum_probe(tf, f, t, 8, SEED)
        assert sup > total


class TestKfDeterminant:
    def test_reference_value(self):
        tf = TraceFunctional("normalized", 2)
        assert kf_determinant(tf, HermitianMatrix.diagonal([1.0, 4.0])) == pytest.approx(2.0, abs=1e-12)

    def test_identity(self):
        assert kf_determinant(TraceFunctional("normalized", 3), HermitianMatrix.identity(3)) == pytest.approx(1.0)

    def test_det_power_oracle_seeded(self):
        # oracle: det(|x|)^(1/n) computed with numpy's determinant
        for i in range(30):
            dim = 2 + i % 5
            x = random_hermitian(dim, (0.2, 3.0), SEED + i)
            tf = TraceFunctional("normalized", dim)
            oracle = abs(np.linalg.det(x.entries)) ** (1.0 / dim)
            assert kf_determinant(tf, x) == pytest.approx(oracle, rel=1e-10)

    def test_multiplicative_seeded(self):
        # oracle: the determinant is multiplicative
        for i in range(30):
            dim = 2 + i % 4
            tf = TraceFunctional("normalized", dim)
            x = random_hermitian(dim, (0.2, 2.0), SEED + i)
            y = random_hermitian(dim, (0.2, 2.0), SEED + 500 + i)
            got = kf_determinant(tf, x.entries @ y.entries)
            expected = kf_determinant(tf, x) * kf_determinant(tf, y)
            assert got == pytest.approx(expected, rel=1e-8)

    def test_homogeneous_seeded(self):
        x = random_hermitian(4, (0.3, 2.0), SEED)
        tf = TraceFunctional("normalized", 4)
        for lam in (0.25, 1.7, 3.0):
            assert kf_determinant(tf, lam * x) == pytest.approx(lam * kf_determinant(tf, x), rel=1e-8)

    def test_rejects_singular(self):
        with pytest.raises(SingularMatrixError):
            kf_determinant(TraceFunctional("normalized", 2), HermitianMatrix.diagonal([1.0, 0.0]))

    def test_midpoint_concavity_seeded(self):
        for i in range(60):
            dim = 2 + i % 6
            tf = TraceFunctional("normalized", dim)
            x = random_hermitian(dim, (0.1, 2.0), SEED + i)
            y = random_hermitian(dim, (0.1, 2.0), SEED + 300 + i)
            mid = kf_determinant(tf, 0.5 * (x + y))
            avg = 0.5 * kf_determinant(tf, x) + 0.5 * kf_determinant(tf, y)
            assert mid >= avg - max(1e-9, 1e-8 * abs(avg))


class TestSchatten:
    def test_p_one_is_trace(self):
        x = random_hermitian(3, (0.0, 2.0), SEED)
        tf = TraceFunctional("standard", 3)
        assert schatten_quasi_power(tf, x, 1.0) == pytest.approx(tf.value(x), abs=1e-12)

    def test_scalar_reference(self):
        tf = TraceFunctional("standard", 2)
        assert schatten_quasi_power(tf, HermitianMatrix.identity(2), 2.0) == pytest.approx(4.0, abs=1e-12)

    def test_superadditive_seeded(self):
        # oracle: eigenvalue computation on both sides
        tf_cache = {}
        for i in range(50):
            dim = 2 + i % 6
            tf = tf_cache.setdefault(dim, TraceFunctional("standard", dim))
            x = random_hermitian(dim, (0.0, 2.0), SEED + i)
            y = random_hermitian(dim, (0.0, 2.0), SEED + 900 + i)
            for p in (1.5, 2.0, 4.0):
                s = schatten_quasi_power
                assert s(tf, x + y, p) >= s(tf, x, p) + s(tf, y, p) - 1e-9

    def test_norm_triangle_seeded(self):
        tf = TraceFunctional("standard", 5)
        for i in range(30):
            x = random_hermitian(5, (-2, 2), SEED + i)
            y = random_hermitian(5, (-2, 2), SEED + 50 + i)
            for p in (1.0, 2.0, 4.0):
                lhs = schatten_norm(tf, x + y, p)
                rhs = schatten_norm(tf, x, p) + schatten_norm(tf, y, p)
                assert lhs <= rhs + 1e-9

    def test_rejects_negative_spectrum(self):
        with pytest.raises(DomainError):
            schatten_quasi_power(TraceFunctional("standard", 2), HermitianMatrix.diagonal([1.0, -1.0]), 2.0)

    def test_rejects_bad_p(self):
        with pytest.raises(DomainError):
            schatten_quasi_power(TraceFunctional("standard", 2), HermitianMatrix.identity(2), 0.0)
