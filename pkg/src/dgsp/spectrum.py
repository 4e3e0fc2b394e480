"""Joint two-factor spectral transform for arbitrary shift operators.

The shift operator S is factored into an orthogonal part U and a symmetric
positive semidefinite part P. Each factor has a unitary eigenbasis, and a
length-n signal is expanded against both at once, giving an n x n complex
coefficient matrix indexed by (scaling mode i, rotation mode j). Unlike a
plain eigenvector projection, this works for non-diagonalizable S, is
exactly invertible, and preserves the signal norm. When S is symmetric the
coefficients collapse onto the diagonal and reduce to the classical graph
Fourier transform.

Coefficient convention: ``a[i, j] = <v2_i, f> * <v1_j, v2_i>`` where v2_i
are the eigenvectors of P (ascending eigenvalue) and v1_j those of U
(ascending phase).
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .errors import DimensionError, PreconditionError, UndefinedMetricError

__all__ = [
    "SpectralBasis",
    "build_basis",
    "align_bases",
    "alignment_distance",
    "coupling",
    "forward",
    "forward_matrix_form",
    "inverse",
    "gft_classical",
    "diagonal_energy_fraction",
]

# Eigenvalues closer than this (relative to the spectral diameter, floored
# at unit scale) are treated as one degenerate block during alignment.
DEGENERACY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """The two eigenbases of the polar factors of a shift operator.

    Attributes
    ----------
    v1, lambda1 : eigenvectors / unit-modulus eigenvalues of the orthogonal
        factor, phase-ascending.
    v2, lambda2 : eigenvectors / nonnegative eigenvalues of the symmetric
        factor, ascending.
    aligned : whether degenerate-block alignment has been applied.
    singular : warning flag; the shift operator was numerically singular,
        so the orthogonal factor (hence the basis) is a canonical choice
        rather than uniquely determined.
    """

    v1: np.ndarray
    lambda1: np.ndarray
    v2: np.ndarray
    lambda2: np.ndarray
    aligned: bool = False
    singular: bool = False

    @property
    def n(self) -> int:
        return self.lambda1.shape[0]


def build_basis(s: np.ndarray, align: bool = True) -> SpectralBasis:
    """Polar-decompose ``s`` and eigendecompose both factors.

    With ``align=True`` (default) the degenerate-block alignment of
    :func:`align_bases` is applied, which makes the basis reduce to a
    single classical eigenbasis whenever ``s`` is symmetric or orthogonal.
    """
    pf = linalg.polar_decompose(s)
    eu = linalg.eig_unitary(pf.u)
    ep = linalg.eig_hermitian(pf.p)
    basis = SpectralBasis(
        v1=eu.vectors,
        lambda1=eu.values,
        v2=ep.vectors,
        lambda2=ep.values.real,
        aligned=False,
        singular=pf.nonunique,
    )
    return align_bases(basis) if align else basis


def _gap_groups(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Chain consecutive sorted values with gap <= tol into index groups."""
    n = values.shape[0]
    groups: list[np.ndarray] = []
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[stop - 1] <= tol:
            stop += 1
        groups.append(np.arange(start, stop))
        start = stop
    return groups


def _phase_groups(phases: np.ndarray, tol: float) -> list[np.ndarray]:
    """Like :func:`_gap_groups` but circular: the wrap gap across +/-pi
    can merge the first and last groups."""
    groups = _gap_groups(phases, tol)
    if len(groups) > 1 and (phases[0] + 2 * np.pi) - phases[-1] <= tol:
        merged = np.concatenate([groups[-1], groups[0]])
        groups = [merged] + groups[1:-1]
    return groups


def _procrustes_block(block: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Rotate an orthonormal column block within its span to best match
    ``target`` (in Frobenius norm). Returns the rotated block."""
    m = block.conj().T @ target
    u, _, vh = np.linalg.svd(m)
    return block @ (u @ vh)


def align_bases(basis: SpectralBasis) -> SpectralBasis:
    """Resolve eigenbasis ambiguity by matching the two bases column-wise.

    Within every repeated-eigenvalue block (phases of ``lambda1`` grouped
    with gap tolerance 1e-8, values of ``lambda2`` with 1e-8 relative to
    the spectral diameter) the block's columns are replaced by an equally
    valid orthonormal basis of the same eigenspace, rotated to best match
    the same-index columns of the other basis. Size-1 blocks only pick up
    a phase. When one factor is fully degenerate (identity-like orthogonal
    factor, or a scalar symmetric factor) this copies the other basis
    outright, so the coupling becomes the identity.
    """
    v1 = np.array(basis.v1)
    v2 = np.array(basis.v2)

    phases = np.angle(basis.lambda1)
    phases = np.where(phases < -np.pi + 1e-12, phases + 2 * np.pi, phases)
    groups_u = _phase_groups(phases, DEGENERACY_TOL)

    lam2 = np.asarray(basis.lambda2, dtype=float)
    span = float(lam2[-1] - lam2[0]) if lam2.size else 0.0
    groups_p = _gap_groups(lam2, DEGENERACY_TOL * max(span, 1.0))

    for idx in groups_u:
        v1[:, idx] = _procrustes_block(v1[:, idx], v2[:, idx])
    for idx in groups_p:
        v2[:, idx] = _procrustes_block(v2[:, idx], v1[:, idx])

    return replace(basis, v1=v1, v2=v2, aligned=True)


def alignment_distance(basis: SpectralBasis) -> float:
    """Operator-norm distance between the two eigenvector matrices."""
    return linalg.operator_norm(basis.v1 - basis.v2)


def coupling(basis: SpectralBasis) -> np.ndarray:
    """Inner products between the two bases: entry (i, j) = <v1_j, v2_i>.

    Each row expands one scaling-mode eigenvector against all rotation
    modes, so every row has unit Euclidean norm.
    """
    return (basis.v1.conj().T @ basis.v2).T


def _as_signal(basis: SpectralBasis, f) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.shape != (basis.n,):
        raise DimensionError(f"signal has shape {f.shape}, expected ({basis.n},)")
    return f


def forward(basis: SpectralBasis, f) -> np.ndarray:
    """Transform a signal into its n x n joint spectral coefficients.

    ``a[i, j] = fhat_i * p_ij`` where ``fhat = v2^H f`` and ``p`` is the
    coupling matrix. Satisfies Parseval: the Frobenius norm of the result
    equals the Euclidean norm of ``f``.
    """
    f = _as_signal(basis, f)
    fhat = basis.v2.conj().T @ f
    return fhat[:, None] * coupling(basis)


def forward_matrix_form(basis: SpectralBasis, f) -> np.ndarray:
    """Same transform computed as the matrix product
    ``v1^H v2 diag(v2^H f)``, transposed into the (i, j) layout."""
    f = _as_signal(basis, f)
    m = basis.v1.conj().T @ basis.v2 @ np.diag(basis.v2.conj().T @ f)
    return m.T


def inverse(basis: SpectralBasis, a) -> np.ndarray:
    """Reconstruct a (complex) signal from spectral coefficients.

    Sums each column of ``a`` and expands against the rotation-mode basis:
    ``sum_j (sum_i a[i, j]) v1_j``. Exactly inverts :func:`forward`.
    """
    a = np.asarray(a, dtype=complex)
    n = basis.n
    if a.shape != (n, n):
        raise DimensionError(f"coefficients have shape {a.shape}, expected ({n}, {n})")
    return basis.v1 @ a.sum(axis=0)


def gft_classical(v: np.ndarray, f, tol: float = 1e-8) -> np.ndarray:
    """Classical graph Fourier transform ``v^H f`` against one unitary basis."""
    v = np.asarray(v)
    n = v.shape[0]
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise DimensionError(f"basis must be square, got shape {v.shape}")
    dev = float(np.max(np.abs(v.conj().T @ v - np.eye(n)))) if n else 0.0
    if dev > tol:
        raise PreconditionError(f"basis is not unitary: deviation {dev:.3e} exceeds {tol:.3e}")
    f = np.asarray(f, dtype=complex)
    if f.shape != (n,):
        raise DimensionError(f"signal has shape {f.shape}, expected ({n},)")
    return v.conj().T @ f


def diagonal_energy_fraction(a) -> float:
    """Share of spectral energy sitting on the diagonal entries (i, i).

    Equals 1 exactly when the transform has collapsed to a classical one.
    Undefined (raises) for an all-zero coefficient matrix.
    """
    a = np.asarray(a, dtype=complex)
    total = float(np.sum(np.abs(a) ** 2))
    if total == 0.0:
        raise UndefinedMetricError("diagonal energy fraction is undefined for a zero spectrum")
    diag = float(np.sum(np.abs(np.diag(a)) ** 2))
    return diag / total
