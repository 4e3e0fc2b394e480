import dataclasses

import numpy as np
import pytest

from dgsp.errors import DimensionError, PreconditionError, UndefinedMetricError
from dgsp.graph import ShiftKind, adjacency_matrix, directed_cycle, shift_operator, undirected_cycle
from dgsp.spectrum import (
    align_bases,
    alignment_distance,
    build_basis,
    coupling,
    diagonal_energy_fraction,
    forward,
    forward_matrix_form,
    gft_classical,
    inverse,
)

from conftest import random_invertible


def oracle_coupling(v1, v2):
    """Entrywise inner products <v1_j, v2_i>, computed one at a time."""
    n = v1.shape[0]
    p = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            p[i, j] = np.vdot(v1[:, j], v2[:, i])
    return p


def oracle_forward(v1, v2, f):
    """Composition of the two projection expansions, entry by entry."""
    n = v1.shape[0]
    a = np.empty((n, n), dtype=complex)
    for i in range(n):
        fhat_i = np.vdot(v2[:, i], f)
        for j in range(n):
            a[i, j] = fhat_i * np.vdot(v1[:, j], v2[:, i])
    return a


def check_basis_invariants(basis, s):
    n = basis.n
    assert np.max(np.abs(basis.v1.conj().T @ basis.v1 - np.eye(n))) <= 1e-10
    assert np.max(np.abs(basis.v2.conj().T @ basis.v2 - np.eye(n))) <= 1e-10
    assert np.max(np.abs(np.abs(basis.lambda1) - 1.0)) <= 1e-10
    assert np.min(basis.lambda2) >= -1e-10
    from dgsp.linalg import polar_decompose

    pf = polar_decompose(s)
    scale_u = max(1.0, np.linalg.norm(pf.u, 2))
    scale_p = max(1.0, np.linalg.norm(pf.p, 2))
    assert np.max(np.abs(pf.u @ basis.v1 - basis.v1 * basis.lambda1)) <= 1e-8 * scale_u
    assert np.max(np.abs(pf.p @ basis.v2 - basis.v2 * basis.lambda2)) <= 1e-8 * scale_p


class TestBuildBasis:
    def test_symmetric_reduces_to_single_basis(self):
        # Symmetric shift: the orthogonal factor is +/-1 on each sign
        # subspace, a fully degenerate eigenproblem; alignment must merge
        # the two bases.
        s = shift_operator(undirected_cycle(8), ShiftKind.laplacian())
        basis = build_basis(s, align=True)
        assert alignment_distance(basis) <= 1e-8
        check_basis_invariants(basis, s)

    def test_directed_cycle_scaling_factor_degenerate(self):
        s = adjacency_matrix(directed_cycle(8))
        basis = build_basis(s, align=True)
        assert alignment_distance(basis) <= 1e-8
        np.testing.assert_allclose(basis.lambda2, np.ones(8), atol=1e-10)

    def test_shear_invariants(self):
        s = np.array([[1.0, 1.0], [0.0, 1.0]])
        basis = build_basis(s, align=True)
        check_basis_invariants(basis, s)
        assert not basis.singular

    def test_singular_flagged(self):
        s = np.zeros((3, 3))
        s[0, 1] = 1.0
        assert build_basis(s).singular


class TestAlignBases:
    def test_normal_shift_small_distance(self):
        # Cases where eigenvalue orderings co-locate the coupled
        # eigenspaces: definite-sign symmetric, orthogonal, and scaled
        # orthogonal shifts.
        rng = np.random.default_rng(2)
        m = rng.standard_normal((6, 6))
        spd = m @ m.T + 6 * np.eye(6)
        q, _ = np.linalg.qr(rng.standard_normal((7, 7)))
        for s in (spd, -spd, q, 1.7 * q, shift_operator(undirected_cycle(9), ShiftKind.laplacian())):
            basis = build_basis(s, align=True)
            assert alignment_distance(basis) <= 1e-8

    def test_simple_spectra_only_phases_change(self):
        rng = np.random.default_rng(3)
        s = random_invertible(rng, 7)
        plain = build_basis(s, align=False)
        aligned = align_bases(plain)
        for j in range(7):
            overlap = abs(np.vdot(plain.v1[:, j], aligned.v1[:, j]))
            assert overlap == pytest.approx(1.0, abs=1e-9)
            overlap2 = abs(np.vdot(plain.v2[:, j], aligned.v2[:, j]))
            assert overlap2 == pytest.approx(1.0, abs=1e-9)

    def test_directed_cycle_coupling_concentrates(self):
        basis = build_basis(adjacency_matrix(directed_cycle(50)), align=True)
        p = coupling(basis)
        off = p - np.diag(np.diag(p))
        assert np.linalg.norm(off) <= 1e-8

    def test_alignment_never_increases_frobenius_distance(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            s = random_invertible(rng, 6)
            plain = build_basis(s, align=False)
            aligned = align_bases(plain)
            before = np.linalg.norm(plain.v1 - plain.v2)
            after = np.linalg.norm(aligned.v1 - aligned.v2)
            assert after <= before + 1e-10


class TestCoupling:
    def test_equal_bases_identity(self):
        basis = build_basis(np.eye(5) * 2.0, align=True)
        np.testing.assert_allclose(coupling(basis), np.eye(5), atol=1e-10)

    def test_row_norms_unit(self):
        rng = np.random.default_rng(5)
        basis = build_basis(random_invertible(rng, 9), align=True)
        rows = np.linalg.norm(coupling(basis), axis=1)
        np.testing.assert_allclose(rows, np.ones(9), atol=1e-10)

    def test_matches_bruteforce(self):
        basis = build_basis(np.array([[1.0, 1.0], [0.0, 1.0]]), align=False)
        np.testing.assert_allclose(
            coupling(basis), oracle_coupling(basis.v1, basis.v2), atol=1e-13
        )


class TestForward:
    def test_scalar_graph(self):
        basis = build_basis(np.array([[2.0]]))
        np.testing.assert_allclose(forward(basis, [3.5]), [[3.5]], atol=1e-12)

    def test_symmetric_diagonal_equals_classical(self):
        s = shift_operator(undirected_cycle(10), ShiftKind.laplacian())
        basis = build_basis(s, align=True)
        rng = np.random.default_rng(6)
        f = rng.standard_normal(10)
        a = forward(basis, f)
        off = a - np.diag(np.diag(a))
        assert np.linalg.norm(off) <= 1e-10 * np.linalg.norm(f)
        fhat = gft_classical(basis.v2, f)
        np.testing.assert_allclose(np.abs(np.diag(a)), np.abs(fhat), atol=1e-10)

    def test_shear_matches_oracle_and_parseval(self):
        basis = build_basis(np.array([[1.0, 1.0], [0.0, 1.0]]), align=False)
        f = np.array([1.0, 0.0])
        a = forward(basis, f)
        np.testing.assert_allclose(a, oracle_forward(basis.v1, basis.v2, f), atol=1e-13)
        assert np.linalg.norm(a) == pytest.approx(1.0, abs=1e-10)

    def test_length_mismatch(self):
        basis = build_basis(np.eye(3))
        with pytest.raises(DimensionError):
            forward(basis, [1.0, 2.0])


class TestForwardMatrixForm:
    def test_equals_forward_many_seeds(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            s = random_invertible(rng, 20)
            basis = build_basis(s, align=False)
            f = rng.standard_normal(20)
            d = np.max(np.abs(forward(basis, f) - forward_matrix_form(basis, f)))
            assert d <= 1e-12

    def test_zero_signal(self):
        basis = build_basis(np.eye(4))
        np.testing.assert_array_equal(forward_matrix_form(basis, np.zeros(4)), np.zeros((4, 4)))


class TestInverse:
    def test_zero(self):
        basis = build_basis(np.eye(4))
        np.testing.assert_array_equal(inverse(basis, np.zeros((4, 4))), np.zeros(4))

    def test_roundtrip_random(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            n = int(rng.integers(2, 51))
            s = random_invertible(rng, n)
            basis = build_basis(s, align=True)
            f = rng.standard_normal(n)
            rec = inverse(basis, forward(basis, f))
            assert np.linalg.norm(rec - f) <= 1e-10 * max(1.0, np.linalg.norm(f))

    def test_diagonal_spectrum_classical_synthesis(self):
        s = shift_operator(undirected_cycle(6), ShiftKind.laplacian())
        basis = build_basis(s, align=True)
        coef = np.arange(1.0, 7.0)
        rec = inverse(basis, np.diag(coef).astype(complex))
        np.testing.assert_allclose(rec, basis.v1 @ coef, atol=1e-12)

    def test_shape_mismatch(self):
        basis = build_basis(np.eye(3))
        with pytest.raises(DimensionError):
            inverse(basis, np.zeros((2, 2)))


class TestGftClassical:
    def test_identity_basis(self):
        f = np.array([1.0, 2.0, 3.0])
        np.testing.assert_allclose(gft_classical(np.eye(3), f), f)

    def test_basis_column_gives_unit_vector(self):
        rng = np.random.default_rng(9)
        q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
        np.testing.assert_allclose(gft_classical(q, q[:, 2]), np.eye(5)[2], atol=1e-12)

    def test_smooth_signal_concentrates_low(self):
        # Conventional-sign cycle Laplacian is PSD: its low-index
        # eigenvectors are the smooth ones, so a slowly varying signal
        # keeps most energy there.
        s = shift_operator(undirected_cycle(24), ShiftKind.laplacian(sign="conventional"))
        w, v = np.linalg.eigh(s)
        f = np.cos(2 * np.pi * np.arange(24) / 24)
        fhat = gft_classical(v, f)
        energy = np.abs(fhat) ** 2
        assert energy[:4].sum() >= 0.99 * energy.sum()

    def test_non_unitary_rejected(self):
        with pytest.raises(PreconditionError):
            gft_classical(np.ones((3, 3)), np.zeros(3))


class TestDiagonalEnergyFraction:
    def test_diagonal_matrix(self):
        assert diagonal_energy_fraction(np.diag([1.0, 2.0])) == pytest.approx(1.0)

    def test_zero_diagonal(self):
        a = np.array([[0.0, 1.0], [2.0, 0.0]])
        assert diagonal_energy_fraction(a) == 0.0

    def test_bandlimited_on_undirected_cycle(self):
        from dgsp.experiments import bandlimited_signal

        s = shift_operator(undirected_cycle(50), ShiftKind.laplacian())
        basis = build_basis(s, align=True)
        f = bandlimited_signal(s, modes=5)
        frac = diagonal_energy_fraction(forward(basis, f))
        assert frac == pytest.approx(1.0, abs=1e-10)

    def test_zero_matrix_undefined(self):
        with pytest.raises(UndefinedMetricError):
            diagonal_energy_fraction(np.zeros((3, 3)))


class TestProperties:
    def test_parseval(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            n = int(rng.integers(2, 51))
            s = random_invertible(rng, n)
            basis = build_basis(s, align=True)
            f = rng.standard_normal(n)
            gap = abs(np.linalg.norm(forward(basis, f)) - np.linalg.norm(f))
            assert gap <= 1e-10 * max(1.0, np.linalg.norm(f))

    def test_v2_phase_invariance(self):
        rng = np.random.default_rng(11)
        s = random_invertible(rng, 12)
        basis = build_basis(s, align=False)
        f = rng.standard_normal(12)
        a = forward(basis, f)
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 12))
        twisted = dataclasses.replace(basis, v2=basis.v2 * phases)
        a2 = forward(twisted, f)
        assert np.max(np.abs(a2 - a)) <= 1e-12

    def test_v1_phase_covariance(self):
        rng = np.random.default_rng(12)
        s = random_invertible(rng, 12)
        basis = build_basis(s, align=False)
        f = rng.standard_normal(12)
        a = forward(basis, f)
        theta = rng.uniform(0, 2 * np.pi, 12)
        twisted = dataclasses.replace(basis, v1=basis.v1 * np.exp(1j * theta))
        a2 = forward(twisted, f)
        np.testing.assert_allclose(a2, a * np.exp(-1j * theta)[None, :], atol=1e-12)
        assert np.max(np.abs(np.abs(a2) - np.abs(a))) <= 1e-12
        rec_gap = np.abs(inverse(twisted, a2) - inverse(basis, a))
        assert np.max(rec_gap) <= 1e-12
