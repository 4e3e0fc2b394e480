"""Dense numerical linear algebra used by the spectral transform.

Everything here is desk scale (n <= 200) and dense. LAPACK, through
numpy, does the heavy lifting; this module pins down the conventions the
rest of the package relies on: factor shapes, eigenvalue ordering, and
deterministic eigenvector phases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, PreconditionError

__all__ = [
    "SvdFactors",
    "PolarFactors",
    "EigenPairs",
    "HERMITIAN",
    "UNITARY",
    "NORMAL",
    "svd",
    "polar_decompose",
    "eig_hermitian",
    "eig_unitary",
    "eig_normal",
    "operator_norm",
    "frobenius_norm",
    "is_non_derogatory",
]

HERMITIAN = "hermitian"
UNITARY = "unitary"
NORMAL = "normal"

# Default tolerances; every public function accepts an override.
DEFAULT_HERMITIAN_TOL = 1e-10
DEFAULT_UNITARY_TOL = 1e-8
# Below this ratio of smallest to largest singular value the orthogonal
# polar factor is no longer determined by the input.
SINGULAR_RATIO = 1e-10

_PHASE_TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """Factors of S = v @ diag(sigma) @ w.T with orthogonal v, w."""

    v: np.ndarray
    sigma: np.ndarray
    w: np.ndarray


@dataclass(frozen=True, eq=False)
class PolarFactors:
    """Factors of S = u @ p with u orthogonal and p symmetric PSD.

    ``nonunique`` is set when the smallest singular value of S is so small
    (relative to the largest) that u is not determined by S alone; the
    returned u is then the canonical choice derived from the SVD.
    """

    u: np.ndarray
    p: np.ndarray
    nonunique: bool


@dataclass(frozen=True, eq=False)
class EigenPairs:
    """Unitary eigenvector matrix and eigenvalues of a normal matrix.

    ``kind`` records which ordering convention applies: Hermitian inputs
    are ordered by ascending (real) eigenvalue, unitary inputs by ascending
    principal phase in (-pi, pi], generic normal inputs by phase then
    modulus. Equal keys fall back to the original column index.
    """

    vectors: np.ndarray
    values: np.ndarray
    kind: str

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _require_square(m: np.ndarray, name: str = "matrix") -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PreconditionError(f"{name} must be square, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise PreconditionError(f"{name} must have finite entries")


# Fixed reference vectors used to pin the free per-column phase of
# eigenvectors. A generic direction keeps the convention continuous under
# small input perturbations (unlike e.g. "largest component real").
_PHASE_SEED = 1185
_phase_refs: dict[int, np.ndarray] = {}


def _phase_reference(n: int) -> np.ndarray:
    w = _phase_refs.get(n)
    if w is None:
        rng = np.random.default_rng(_PHASE_SEED + n)
        w = rng.standard_normal(n)
        w /= np.linalg.norm(w)
        _phase_refs[n] = w
    return w


def _canonicalize_phases(vectors: np.ndarray) -> np.ndarray:
    out = np.array(vectors, dtype=complex)
    w = _phase_reference(out.shape[0])
    for j in range(out.shape[1]):
        z = w @ out[:, j]
        if abs(z) < 1e-12:
            # Reference direction is (nearly) orthogonal to this column;
            # fall back to the largest component.
            z = out[int(np.argmax(np.abs(out[:, j]))), j]
        out[:, j] *= np.conj(z) / abs(z)
    return out


def svd(s: np.ndarray) -> SvdFactors:
    """Singular value decomposition S = V diag(sigma) W^T.

    Parameters
    ----------
    s : (n, n) real array

    Returns
    -------
    SvdFactors
        ``v`` and ``w`` orthogonal, ``sigma`` nonnegative descending.

    Raises
    ------
    NumericalError
        If the underlying iteration fails to converge.
    """
    s = np.asarray(s, dtype=float)
    _require_square(s)
    try:
        v, sigma, wt = np.linalg.svd(s)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    return SvdFactors(v=v, sigma=sigma, w=wt.T)


def polar_decompose(s: np.ndarray) -> PolarFactors:
    """Polar decomposition S = U P via the SVD.

    U = V W^T and P = W diag(sigma) W^T, which is the unique decomposition
    whenever S is invertible. For (numerically) singular S the same formula
    is used and ``nonunique`` is flagged.
    """
    f = svd(s)
    u = f.v @ f.w.T
    p = (f.w * f.sigma) @ f.w.T
    p = 0.5 * (p + p.T)
    smax = float(f.sigma[0]) if f.sigma.size else 0.0
    smin = float(f.sigma[-1]) if f.sigma.size else 0.0
    return PolarFactors(u=u, p=p, nonunique=bool(smin <= SINGULAR_RATIO * smax))


def eig_hermitian(p: np.ndarray, tol: float = DEFAULT_HERMITIAN_TOL) -> EigenPairs:
    """Eigendecomposition of a (real symmetric or complex Hermitian) matrix.

    Eigenvalues are returned ascending; eigenvector phases are fixed by the
    module's deterministic convention.

    Raises
    ------
    PreconditionError
        If the input deviates from Hermitian by more than ``tol`` (max norm).
    """
    p = np.asarray(p)
    _require_square(p)
    asym = float(np.max(np.abs(p - p.conj().T))) if p.size else 0.0
    if asym > tol:
        raise PreconditionError(
            f"matrix is not Hermitian: max asymmetry {asym:.3e} exceeds {tol:.3e}"
        )
    values, vectors = np.linalg.eigh(0.5 * (p + p.conj().T))
    return EigenPairs(
        vectors=_canonicalize_phases(vectors),
        values=values.astype(complex),
        kind=HERMITIAN,
    )


def _normal_eig_core(m: np.ndarray, cluster_tol: float = 1e-10):
    """Eigenpairs of a normal matrix, unordered.

    Splits m into the commuting Hermitian pair h = (m + m^H)/2 and
    k = (m - m^H)/(2i), diagonalizes h, then re-diagonalizes k inside each
    eigenvalue cluster of h. This resolves rotation blocks (conjugate
    eigenvalue pairs of orthogonal matrices) without a Schur step and keeps
    residuals at machine scale even for repeated eigenvalues.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    h = 0.5 * (m + m.conj().T)
    k = (m - m.conj().T) / 2j
    hvals, q = np.linalg.eigh(h)
    q = q.astype(complex)

    scale = max(1.0, float(np.max(np.abs(hvals))) if n else 0.0)
    tol = cluster_tol * scale
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and hvals[stop] - hvals[stop - 1] <= tol:
            stop += 1
        if stop - start > 1:
            block = q[:, start:stop]
            b = block.conj().T @ k @ block
            _, r = np.linalg.eigh(0.5 * (b + b.conj().T))
            q[:, start:stop] = block @ r
        start = stop

    q = _canonicalize_phases(q)
    values = np.array([np.vdot(q[:, j], m @ q[:, j]) for j in range(n)])
    return values, q


def _phase_keys(values: np.ndarray) -> np.ndarray:
    phases = np.angle(values)
    # Principal range (-pi, pi] with -pi folded onto +pi.
    return np.where(phases < -np.pi + _PHASE_TIE_TOL, phases + 2 * np.pi, phases)


def eig_unitary(u: np.ndarray, tol: float = DEFAULT_UNITARY_TOL) -> EigenPairs:
    """Eigendecomposition of a real orthogonal or complex unitary matrix.

    Eigenvalues lie on the unit circle and are ordered by ascending
    principal phase in (-pi, pi]; ties (within 1e-12) keep the original
    column order.

    Raises
    ------
    PreconditionError
        If ``u^H u`` deviates from the identity by more than ``tol``.
    """
    u = np.asarray(u, dtype=complex)
    _require_square(u)
    n = u.shape[0]
    dev = float(np.max(np.abs(u.conj().T @ u - np.eye(n)))) if n else 0.0
    if dev > tol:
        raise PreconditionError(
            f"matrix is not unitary: max deviation {dev:.3e} exceeds {tol:.3e}"
        )
    values, vectors = _normal_eig_core(u)
    keys = np.round(_phase_keys(values) / _PHASE_TIE_TOL)
    order = np.lexsort((np.arange(n), keys))
    return EigenPairs(vectors=vectors[:, order], values=values[order], kind=UNITARY)


def eig_normal(m: np.ndarray, normality_tol: float = 1e-8) -> EigenPairs:
    """Eigendecomposition of a general normal matrix.

    Ordered by ascending principal phase, then modulus, then original
    column index.

    Raises
    ------
    PreconditionError
        If ``m^H m`` and ``m m^H`` differ by more than
        ``normality_tol * ||m||^2`` in max norm.
    """
    m = np.asarray(m, dtype=complex)
    _require_square(m)
    n = m.shape[0]
    nrm = operator_norm(m)
    dev = float(np.max(np.abs(m.conj().T @ m - m @ m.conj().T))) if n else 0.0
    if dev > normality_tol * max(nrm**2, 1e-300):
        raise PreconditionError(
            f"matrix is not normal: commutator deviation {dev:.3e}"
        )
    values, vectors = _normal_eig_core(m)
    phase_keys = np.round(_phase_keys(values) / _PHASE_TIE_TOL)
    mod_keys = np.round(np.abs(values) / (_PHASE_TIE_TOL * max(nrm, 1.0)))
    order = np.lexsort((np.arange(n), mod_keys, phase_keys))
    return EigenPairs(vectors=vectors[:, order], values=values[order], kind=NORMAL)


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value of a (possibly rectangular, complex) matrix."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def frobenius_norm(m: np.ndarray) -> float:
    """Square root of the sum of squared entry magnitudes."""
    return float(np.linalg.norm(np.asarray(m)))


def is_non_derogatory(values, tol: float) -> bool:
    """True iff all pairwise distances between the values exceed ``tol``."""
    vals = np.asarray(values, dtype=complex)
    n = vals.shape[0]
    if n < 2:
        return True
    dist = np.abs(vals[:, None] - vals[None, :])
    dist[np.diag_indices(n)] = np.inf
    return bool(np.min(dist) > tol)
