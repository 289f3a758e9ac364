import numpy as np
import pytest

from roweis.exceptions import ConfigError, NumericalError
from roweis.linalg import (
    EigPair,
    RegPolicy,
    centering_matrix,
    generalized_eig,
    incomplete_svd,
    psd_factor,
    symmetric_eig,
)
from roweis.scatter import ClassPartition, between_scatter, total_scatter, within_scatter

from conftest import align_columns, random_psd


class TestCenteringMatrix:
    def test_two_points(self):
        np.testing.assert_allclose(centering_matrix(2), [[0.5, -0.5], [-0.5, 0.5]])

    def test_single_point(self):
        np.testing.assert_allclose(centering_matrix(1), [[0.0]])

    def test_idempotent(self):
        h = centering_matrix(5)
        np.testing.assert_allclose(h @ h, h, atol=1e-14)

    def test_row_sums_zero(self):
        h = centering_matrix(7)
        np.testing.assert_allclose(h.sum(axis=1), 0.0, atol=1e-14)

    def test_invalid_dimension(self):
        with pytest.raises(ConfigError):
            centering_matrix(0)


class TestSymmetricEig:
    def test_diagonal(self):
        pair = symmetric_eig(np.diag([4.0, 1.0]))
        np.testing.assert_allclose(pair.values, [4.0, 1.0])
        np.testing.assert_allclose(np.abs(pair.vectors), np.eye(2), atol=1e-14)

    def test_zero_matrix(self):
        pair = symmetric_eig(np.zeros((2, 2)))
        np.testing.assert_allclose(pair.values, [0.0, 0.0])

    def test_round_trip(self, rng):
        a = rng.standard_normal((5, 5))
        a = 0.5 * (a + a.T)
        pair = symmetric_eig(a)
        rebuilt = (pair.vectors * pair.values) @ pair.vectors.T
        assert np.linalg.norm(rebuilt - a, "fro") <= 1e-8 * np.linalg.norm(a, "fro")

    def test_values_non_increasing(self, rng):
        pair = symmetric_eig(random_psd(rng, 8))
        assert np.all(np.diff(pair.values) <= 1e-12)

    def test_sign_convention(self, rng):
        pair = symmetric_eig(random_psd(rng, 6))
        for j in range(6):
            column = pair.vectors[:, j]
            assert column[np.argmax(np.abs(column))] > 0

    def test_rejects_asymmetric(self):
        with pytest.raises(ConfigError):
            symmetric_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestGeneralizedEig:
    def test_identity_constraint_reduces_to_plain(self, rng):
        a = random_psd(rng, 5)
        plain = symmetric_eig(a)
        general = generalized_eig(a, np.eye(5))
        np.testing.assert_allclose(general.values, plain.values, atol=1e-8)
        np.testing.assert_allclose(
            align_columns(plain.vectors, general.vectors), plain.vectors, atol=1e-8
        )

    def test_diagonal_case(self):
        pair = generalized_eig(np.diag([4.0, 1.0]), np.eye(2))
        np.testing.assert_allclose(pair.values, [4.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(pair.vectors, np.eye(2), atol=1e-12)

    def test_one_by_one_hand_solve(self):
        # A u = lambda B u with A=2, B=4: lambda = 0.5; B-normalized u = 0.5.
        pair = generalized_eig(np.array([[2.0]]), np.array([[4.0]]))
        np.testing.assert_allclose(pair.values, [0.5], atol=1e-12)
        np.testing.assert_allclose(pair.vectors, [[0.5]], atol=1e-12)

    def test_fisher_toy_matches_direction_sweep(self):
        # Two separable classes in the plane; the leading generalized
        # direction of (total, within) must maximize the between/within
        # trace ratio over a 1-degree sweep of unit directions.
        rng = np.random.default_rng(3)
        c0 = np.array([[0.0], [0.0]]) + 0.3 * rng.standard_normal((2, 30))
        c1 = np.array([[4.0], [1.0]]) + 0.3 * rng.standard_normal((2, 30))
        x = np.hstack([c0, c1])
        labels = np.array([0] * 30 + [1] * 30)
        part = ClassPartition.from_labels(labels)
        s_t, s_w, s_b = total_scatter(x), within_scatter(x, part), between_scatter(x, part)

        def criterion(u):
            return float(u @ s_b @ u) / float(u @ s_w @ u)

        angles = np.deg2rad(np.arange(0.0, 180.0, 1.0))
        sweep = max(criterion(np.array([np.cos(t), np.sin(t)])) for t in angles)
        lead = generalized_eig(s_t, s_w).vectors[:, 0]
        lead = lead / np.linalg.norm(lead)
        assert criterion(lead) >= sweep * (1.0 - 1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(ConfigError):
            generalized_eig(np.eye(3), np.eye(2))

    def test_indefinite_constraint_rejected(self):
        with pytest.raises(NumericalError):
            generalized_eig(np.eye(2), np.diag([1.0, -1.0]))

    def test_residual_and_b_orthonormality_random_pairs(self):
        rng = np.random.default_rng(99)
        for trial in range(100):
            m = int(rng.integers(2, 31))
            a = random_psd(rng, m)
            # Mix in singular constraints to exercise the shift schedule.
            rank = m if trial % 3 else max(1, m - 2)
            b = random_psd(rng, m, rank=rank)
            pair = generalized_eig(a, b)
            b_eff = b + pair.shift * np.eye(m)
            residual = np.linalg.norm(a @ pair.vectors - b_eff @ pair.vectors @ np.diag(pair.values), "fro")
            assert residual <= 1e-8 * np.linalg.norm(a, "fro")
            gram = pair.vectors.T @ b_eff @ pair.vectors
            assert np.linalg.norm(gram - np.eye(m), "fro") <= 1e-8 * m

    def test_zero_constraint_falls_back_to_absolute_shift(self):
        pair = generalized_eig(np.eye(3), np.zeros((3, 3)))
        assert pair.shift > 0
        b_eff = pair.shift * np.eye(3)
        residual = np.linalg.norm(np.eye(3) @ pair.vectors - b_eff @ pair.vectors @ np.diag(pair.values))
        assert residual <= 1e-8 * np.sqrt(3)

    def test_shift_zero_for_well_conditioned(self, rng):
        pair = generalized_eig(random_psd(rng, 4), random_psd(rng, 4) + np.eye(4))
        assert pair.shift == 0.0


class TestPsdFactor:
    def test_identity(self):
        delta = psd_factor(np.eye(3))
        np.testing.assert_allclose(delta.T @ delta, np.eye(3), atol=1e-12)

    def test_rank_deficient_round_trip(self):
        s = np.diag([4.0, 0.0])
        delta = psd_factor(s)
        np.testing.assert_allclose(delta.T @ delta, s, atol=1e-12)

    def test_zero_matrix(self):
        np.testing.assert_allclose(psd_factor(np.zeros((2, 2))), np.zeros((2, 2)))

    def test_random_round_trips_up_to_dim_50(self):
        rng = np.random.default_rng(7)
        for m in (2, 5, 17, 50):
            s = random_psd(rng, m, rank=max(1, m - 1))
            delta = psd_factor(s)
            err = np.linalg.norm(delta.T @ delta - s, "fro")
            assert err <= 1e-8 * np.linalg.norm(s, "fro")

    def test_rejects_indefinite(self):
        with pytest.raises(NumericalError):
            psd_factor(np.diag([1.0, -1.0]))


class TestIncompleteSvd:
    def test_identity(self):
        fac = incomplete_svd(np.eye(3), 3)
        np.testing.assert_allclose(fac.singular, [1.0, 1.0, 1.0])

    def test_rank_one(self, rng):
        a = rng.standard_normal(4)
        b = rng.standard_normal(6)
        fac = incomplete_svd(np.outer(a, b), 1)
        np.testing.assert_allclose(fac.singular, [np.linalg.norm(a) * np.linalg.norm(b)], rtol=1e-12)

    def test_round_trip(self, rng):
        w = rng.standard_normal((4, 6))
        fac = incomplete_svd(w, 4)
        rebuilt = fac.left @ np.diag(fac.singular) @ fac.right.T
        assert np.linalg.norm(rebuilt - w, "fro") <= 1e-8 * np.linalg.norm(w, "fro")

    def test_orthonormal_factors(self, rng):
        fac = incomplete_svd(rng.standard_normal((5, 7)), 3)
        np.testing.assert_allclose(fac.left.T @ fac.left, np.eye(3), atol=1e-8)
        np.testing.assert_allclose(fac.right.T @ fac.right, np.eye(3), atol=1e-8)

    def test_k_out_of_range(self):
        with pytest.raises(ConfigError):
            incomplete_svd(np.eye(3), 4)
        with pytest.raises(ConfigError):
            incomplete_svd(np.eye(3), 0)


class TestRegPolicy:
    def test_unit_uses_mean_diagonal(self):
        assert RegPolicy().unit(np.diag([2.0, 4.0])) == 3.0

    def test_unit_falls_back_on_zero_trace(self):
        assert RegPolicy().unit(np.zeros((3, 3))) == 1.0

    def test_eigpair_defaults(self):
        pair = EigPair(vectors=np.eye(2), values=np.array([1.0, 0.0]))
        assert pair.shift == 0.0
