import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgsp.errors import AssumptionError, ValidationError
from dgsp.graph import ShiftKind, shift_operator, undirected_cycle
from dgsp.perturb import (
    continuity_experiment,
    filter_distance,
    filter_operator_matrix,
    pm_poly,
    transform_distance,
    transform_operator_matrix,
)
from dgsp.spectrum import build_basis, forward

from conftest import random_invertible, random_real_normal, random_unit_direction


def nondegenerate_shift(rng, n):
    """Random invertible matrix with simple spectra in both polar factors."""
    from dgsp.linalg import eig_hermitian, eig_unitary, is_non_derogatory, polar_decompose

    while True:
        s = random_invertible(rng, n, min_sigma=1e-3)
        pf = polar_decompose(s)
        lam1 = eig_unitary(pf.u).values
        lam2 = eig_hermitian(pf.p).values.real
        if is_non_derogatory(lam1, 1e-4) and is_non_derogatory(lam2, 1e-4):
            return s


class TestPmPoly:
    def test_example(self):
        assert pm_poly(3, 0.1, 1.0) == pytest.approx(1.1**3 - 1.0)

    def test_zero_x(self):
        for m in (1, 2, 5):
            assert pm_poly(m, 0.0, 3.7) == 0.0

    def test_degree_one(self):
        assert pm_poly(1, 2.5, 9.0) == pytest.approx(2.5)

    def test_bad_degree(self):
        with pytest.raises(ValidationError):
            pm_poly(0, 1.0, 1.0)

    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(min_value=1, max_value=6),
        st.floats(min_value=0.0, max_value=10.0),
        st.floats(min_value=0.0, max_value=10.0),
        st.floats(min_value=0.0, max_value=5.0),
    )
    def test_nonnegative_and_monotone_in_x(self, m, x, y, dx):
        assert pm_poly(m, x, y) >= 0.0
        assert pm_poly(m, x + dx, y) >= pm_poly(m, x, y)


class TestProductPerturbationBound:
    def test_bound_over_random_factor_sequences(self):
        # Products of m factors with norms <= y, each perturbed by at most
        # x in operator norm, move by at most (x + y)^m - y^m.
        rng = np.random.default_rng(0)
        for _ in range(30):
            m = int(rng.integers(1, 6))
            n = int(rng.integers(2, 6))
            factors, pert = [], []
            x = float(rng.uniform(0.01, 0.5))
            y = float(rng.uniform(0.5, 2.0))
            for _ in range(m):
                f = rng.standard_normal((n, n))
                f *= rng.uniform(0.2, 1.0) * y / np.linalg.norm(f, 2)
                d = rng.standard_normal((n, n))
                d *= rng.uniform(0.1, 1.0) * x / np.linalg.norm(d, 2)
                factors.append(f)
                pert.append(f + d)
            prod, prod2 = np.eye(n), np.eye(n)
            for f, f2 in zip(factors, pert):
                prod = prod @ f
                prod2 = prod2 @ f2
            assert np.linalg.norm(prod2 - prod, 2) <= pm_poly(m, x, y) + 1e-9


class TestTransformOperator:
    def test_scalar_case_identity(self):
        t = transform_operator_matrix(np.array([[2.0]]))
        np.testing.assert_allclose(t, [[1.0]], atol=1e-12)

    def test_symmetric_aligned_rows_diagonal(self):
        s = shift_operator(undirected_cycle(6), ShiftKind.laplacian())
        t = transform_operator_matrix(s, align=True)
        n = 6
        mask = np.zeros((n * n,), dtype=bool)
        mask[np.arange(n) * n + np.arange(n)] = True
        assert np.max(np.abs(t[~mask, :])) <= 1e-9

    def test_matches_forward_on_random_signals(self):
        rng = np.random.default_rng(1)
        s = random_invertible(rng, 10)
        t = transform_operator_matrix(s)
        basis = build_basis(s, align=False)
        for _ in range(50):
            f = rng.standard_normal(10)
            np.testing.assert_allclose(t @ f, forward(basis, f).ravel(), atol=1e-12)


class TestDistances:
    def test_zero_distance_to_self(self):
        rng = np.random.default_rng(2)
        s = random_invertible(rng, 8)
        assert transform_distance(s, s) == 0.0
        assert filter_distance(s, s, 2) == 0.0

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        s = nondegenerate_shift(rng, 8)
        s2 = s + 1e-3 * random_unit_direction(rng, 8)
        assert transform_distance(s, s2) == pytest.approx(transform_distance(s2, s), rel=1e-12)

    def test_triangle_inequality_sampled(self):
        rng = np.random.default_rng(4)
        s = nondegenerate_shift(rng, 6)
        for _ in range(5):
            a = s + 1e-3 * random_unit_direction(rng, 6)
            b = s + 1e-3 * random_unit_direction(rng, 6)
            dab = transform_distance(a, b)
            das = transform_distance(a, s)
            dsb = transform_distance(s, b)
            assert dab <= das + dsb + 1e-9

    def test_filter_k1_equals_shift_matrix(self):
        rng = np.random.default_rng(5)
        s = random_invertible(rng, 9)
        np.testing.assert_allclose(filter_operator_matrix(s, 1), s, atol=1e-9)

    def test_filter_distance_k1_equals_matrix_distance(self):
        rng = np.random.default_rng(6)
        s = nondegenerate_shift(rng, 8)
        s2 = s + 0.01 * random_unit_direction(rng, 8)
        d = filter_distance(s, s2, 1)
        assert d == pytest.approx(np.linalg.norm(s - s2, 2), abs=1e-8)

    def test_filter_matches_matrix_power_on_normal(self):
        rng = np.random.default_rng(7)
        s = random_real_normal(rng, 7)
        for k in (1, 2, 3):
            target = np.linalg.matrix_power(s, k)
            got = filter_operator_matrix(s, k)
            assert np.max(np.abs(got - target)) <= 1e-8 * max(1.0, np.linalg.norm(target, 2))


class TestContinuityExperiment:
    scales = (1e-1, 1e-2, 1e-3, 1e-4)

    def test_zero_direction_rejected(self):
        rng = np.random.default_rng(8)
        s = nondegenerate_shift(rng, 6)
        with pytest.raises(ValidationError):
            continuity_experiment(s, np.zeros((6, 6)), self.scales, ks=[1])

    def test_empty_scales_rejected(self):
        rng = np.random.default_rng(9)
        s = nondegenerate_shift(rng, 6)
        with pytest.raises(ValidationError):
            continuity_experiment(s, random_unit_direction(rng, 6), [], ks=[1])

    def test_derogatory_rejected(self):
        # The undirected cycle Laplacian has repeated eigenvalues in both
        # polar factors.
        s = shift_operator(undirected_cycle(8), ShiftKind.laplacian())
        with pytest.raises(AssumptionError):
            continuity_experiment(s, random_unit_direction(np.random.default_rng(0), 8),
                                  self.scales, ks=[1])

    def test_slope_and_bounds(self):
        rng = np.random.default_rng(10)
        s = nondegenerate_shift(rng, 12)
        delta = random_unit_direction(rng, 12)
        rep = continuity_experiment(s, delta, self.scales, ks=[1, 2])
        assert rep.fitted_slope >= 0.9
        assert np.all(np.diff(rep.scales) < 0)
        assert np.all(rep.transform_distances >= 0)
        valid = rep.valid_mask
        assert np.all(rep.bound_transform[valid] >= rep.transform_distances[valid] - 1e-12)
        for k in rep.filter_ks:
            assert np.all(rep.bound_filters[k][valid] >= rep.filter_distances[k][valid] - 1e-12)

    def test_fitted_c_transfers_to_fresh_direction(self):
        from dgsp.perturb import pm_poly as bound

        rng = np.random.default_rng(11)
        s = nondegenerate_shift(rng, 10)
        c_hat = 3.0 * max(
            continuity_experiment(s, random_unit_direction(rng, 10), self.scales, ks=[1]).fitted_c
            for _ in range(6)
        )
        fresh = random_unit_direction(rng, 10)
        for t in self.scales:
            d = transform_distance(s, s + t * fresh)
            assert d <= bound(3, c_hat * t, 1.0)
