"""Spectral transform against a chain of k normal factors.

A shift operator can be written as a product of normal matrices in more
than one way; the two-factor transform in :mod:`dgsp.spectrum` is the
special case of the polar factor pair. Here a signal is expanded against
the eigenbasis of every factor at once, giving a k-dimensional tensor of
coefficients (n entries per axis, axis ``j1`` indexing the first factor's
modes). The tensor grows as n^k, so transforms are capped at k = 3.

The inverse defined here (sum all entries against the first factor's
basis) is a round-trip-consistent extension of the two-factor inverse; no
norm identity is claimed beyond k = 2.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import linalg, spectrum
from .errors import DimensionError, PreconditionError, TractabilityError, ValidationError

__all__ = [
    "FactorChain",
    "from_polar",
    "from_reverse_polar",
    "from_factors",
    "multi_forward",
    "multi_inverse",
    "multi_align",
    "chain_alignment_objective",
]

MAX_TENSOR_FACTORS = 3


@dataclass(frozen=True, eq=False)
class FactorChain:
    """Ordered normal factors of a shift operator with their eigensystems."""

    factors: tuple[np.ndarray, ...]
    bases: tuple[np.ndarray, ...]
    values: tuple[np.ndarray, ...]
    shift: np.ndarray

    @property
    def k(self) -> int:
        return len(self.factors)

    @property
    def n(self) -> int:
        return self.shift.shape[0]


def from_polar(s: np.ndarray, align: bool = False) -> FactorChain:
    """Chain (orthogonal factor, symmetric factor) of the polar split of s."""
    pf = linalg.polar_decompose(s)
    basis = spectrum.build_basis(s, align=align)
    return FactorChain(
        factors=(pf.u, pf.p),
        bases=(basis.v1, basis.v2),
        values=(basis.lambda1, basis.lambda2.astype(complex)),
        shift=np.asarray(s, dtype=float),
    )


def from_reverse_polar(s: np.ndarray, align: bool = False) -> FactorChain:
    """Chain (symmetric factor, orthogonal factor) with s = p' u, p' = u p u^T."""
    pf = linalg.polar_decompose(s)
    p2 = pf.u @ pf.p @ pf.u.T
    p2 = 0.5 * (p2 + p2.T)
    eh = linalg.eig_hermitian(p2)
    eu = linalg.eig_unitary(pf.u)
    chain = FactorChain(
        factors=(p2, pf.u),
        bases=(eh.vectors, eu.vectors),
        values=(eh.values, eu.values),
        shift=np.asarray(s, dtype=float),
    )
    return multi_align(chain) if align else chain


def from_factors(factors, shift=None, normality_tol: float = 1e-8,
                 product_tol: float = 1e-9) -> FactorChain:
    """Validate a user-supplied list of normal factors and eigendecompose it.

    Every factor must be normal within ``normality_tol`` (relative to its
    squared norm) and the product must reproduce ``shift`` within
    ``product_tol`` (Frobenius, relative); ``shift`` defaults to the
    product itself.
    """
    mats = tuple(np.asarray(m, dtype=complex) for m in factors)
    if len(mats) < 2:
        raise ValidationError(f"a factor chain needs at least 2 factors, got {len(mats)}")
    n = mats[0].shape[0]
    for m in mats:
        if m.shape != (n, n):
            raise DimensionError(f"factor has shape {m.shape}, expected ({n}, {n})")
    eigs = [linalg.eig_normal(m, normality_tol=normality_tol) for m in mats]
    product = mats[0]
    for m in mats[1:]:
        product = product @ m
    if shift is None:
        shift = product
    else:
        shift = np.asarray(shift, dtype=complex)
        err = linalg.frobenius_norm(product - shift)
        lim = product_tol * max(1.0, linalg.frobenius_norm(shift))
        if err > lim:
            raise PreconditionError(
                f"factor product deviates from the declared shift by {err:.3e} (limit {lim:.3e})"
            )
    return FactorChain(
        factors=mats,
        bases=tuple(e.vectors for e in eigs),
        values=tuple(e.values for e in eigs),
        shift=shift,
    )


def multi_forward(chain: FactorChain, f) -> np.ndarray:
    """Expand a signal against every factor basis jointly.

    Entry (j1, ..., jk) is the product of the successive basis couplings
    ``<v_{i,j_i}, v_{i+1,j_{i+1}}>`` times the last-factor projection
    ``<v_{k,j_k}, f>``. For the polar chain this equals the two-factor
    transform with axes (j1, j2) = (rotation mode, scaling mode).
    """
    if chain.k > MAX_TENSOR_FACTORS:
        raise TractabilityError(
            f"tensor transforms support at most {MAX_TENSOR_FACTORS} factors, got {chain.k}"
        )
    f = np.asarray(f, dtype=complex)
    if f.shape != (chain.n,):
        raise DimensionError(f"signal has shape {f.shape}, expected ({chain.n},)")
    couplings = [
        chain.bases[i].conj().T @ chain.bases[i + 1] for i in range(chain.k - 1)
    ]
    last = chain.bases[-1].conj().T @ f
    if chain.k == 2:
        return np.einsum("ab,b->ab", couplings[0], last)
    return np.einsum("ab,bc,c->abc", couplings[0], couplings[1], last)


def multi_inverse(chain: FactorChain, t) -> np.ndarray:
    """Reconstruct the signal: sum the tensor over all trailing axes and
    expand against the first factor's basis."""
    t = np.asarray(t, dtype=complex)
    n = chain.n
    if t.shape != (n,) * chain.k:
        raise DimensionError(f"tensor has shape {t.shape}, expected {(n,) * chain.k}")
    sums = t.sum(axis=tuple(range(1, chain.k)))
    return chain.bases[0] @ sums


def _value_groups(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Degenerate blocks among eigenvalues in their stored order, with a
    circular merge so conjugate phases across the +/-pi cut group together."""
    vals = np.asarray(values, dtype=complex)
    n = vals.shape[0]
    groups: list[np.ndarray] = []
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and abs(vals[stop] - vals[stop - 1]) <= tol:
            stop += 1
        groups.append(np.arange(start, stop))
        start = stop
    if len(groups) > 1 and abs(vals[0] - vals[-1]) <= tol:
        groups = [np.concatenate([groups[-1], groups[0]])] + groups[1:-1]
    return groups


def multi_align(chain: FactorChain) -> FactorChain:
    """Sequentially rotate each basis toward its predecessor.

    For i = 2..k, the degenerate blocks of factor i are re-chosen (within
    their eigenspaces, same Procrustes step as the two-factor alignment)
    to match the same-index columns of the already-aligned factor i-1.
    A chain of simultaneously diagonalizable factors with matching
    eigenvalue orders ends up with identical bases.
    """
    bases = [np.array(b) for b in chain.bases]
    for i in range(1, chain.k):
        scale = max(1.0, float(np.max(np.abs(chain.values[i]))))
        groups = _value_groups(chain.values[i], spectrum.DEGENERACY_TOL * scale)
        for idx in groups:
            bases[i][:, idx] = spectrum._procrustes_block(
                bases[i][:, idx], bases[i - 1][:, idx]
            )
    return replace(chain, bases=tuple(bases))


def chain_alignment_objective(chain: FactorChain) -> float:
    """Sum of operator-norm distances between consecutive bases."""
    return sum(
        linalg.operator_norm(chain.bases[i] - chain.bases[i + 1])
        for i in range(chain.k - 1)
    )
