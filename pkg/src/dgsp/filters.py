"""Convolution filters acting entrywise on the joint spectral domain.

A kernel is an n x n complex array with the same (scaling mode i, rotation
mode j) indexing as the spectral coefficients. Convolution multiplies the
transformed signal entrywise by the kernel and inverts. The shift kernel
``h[i, j] = lambda2_i * lambda1_j`` reproduces the action of the shift
operator itself; applying a scalar function to it gives the usual family
of spectral filters (low pass, band pass, ...).
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError, FilterEvaluationError, ValidationError
from .spectrum import SpectralBasis, forward, inverse

__all__ = [
    "hadamard",
    "kernel_power",
    "convolve",
    "shift_kernel",
    "scalar_filter",
    "bandpass_mask",
    "denoise",
    "rmse",
]


def hadamard(a, b) -> np.ndarray:
    """Entrywise product of two equally shaped arrays."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a * b


def kernel_power(h, k: int) -> np.ndarray:
    """Entrywise k-th power of a kernel.

    k = 0 is allowed as a documented extension and returns the all-ones
    (identity) kernel.
    """
    if not isinstance(k, int) or k < 0:
        raise ValidationError(f"kernel power must be a nonnegative integer, got {k!r}")
    h = np.asarray(h, dtype=complex)
    if k == 0:
        return np.ones_like(h)
    return h**k


def convolve(basis: SpectralBasis, h, f) -> np.ndarray:
    """Filter a signal: transform, multiply entrywise by ``h``, invert.

    The result is complex; callers wanting a real signal take the real
    part explicitly.
    """
    h = np.asarray(h, dtype=complex)
    n = basis.n
    if h.shape != (n, n):
        raise DimensionError(f"kernel has shape {h.shape}, expected ({n}, {n})")
    return inverse(basis, hadamard(forward(basis, f), h))


def shift_kernel(basis: SpectralBasis) -> np.ndarray:
    """Kernel whose convolution equals applying the shift operator once.

    Entry (i, j) is ``lambda2_i * lambda1_j``: modulus from the scaling
    spectrum, phase from the rotation spectrum.
    """
    return np.outer(basis.lambda2.astype(complex), basis.lambda1)


def scalar_filter(basis: SpectralBasis, func) -> np.ndarray:
    """Kernel with entries ``func(lambda2_i * lambda1_j)``.

    ``func`` must be defined (and finite) on every shift-kernel entry;
    a failing entry raises :class:`FilterEvaluationError` naming it.
    """
    base = shift_kernel(basis)
    out = np.empty_like(base)
    n = basis.n
    for i in range(n):
        for j in range(n):
            try:
                val = complex(func(base[i, j]))
            except FilterEvaluationError:
                raise
            except Exception as exc:
                raise FilterEvaluationError(
                    f"filter function failed at entry ({i}, {j}) "
                    f"for value {base[i, j]:.6g}: {exc}"
                ) from exc
            if not (np.isfinite(val.real) and np.isfinite(val.imag)):
                raise FilterEvaluationError(
                    f"filter function returned a non-finite value at entry ({i}, {j})"
                )
            out[i, j] = val
    return out


def bandpass_mask(basis: SpectralBasis, keep) -> np.ndarray:
    """0/1 kernel from a predicate over (i, j, lambda2_i, lambda1_j)."""
    n = basis.n
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if keep(i, j, basis.lambda2[i], basis.lambda1[j]):
                out[i, j] = 1.0
    return out


def denoise(basis: SpectralBasis, noisy, c: float) -> np.ndarray:
    """Low-pass the signal with the kernel ``1 / (1 + c * h)``.

    ``h`` is the shift kernel; larger ``c`` attenuates high-magnitude
    spectral entries harder. Returns the real part of the filtered signal.

    Raises
    ------
    FilterEvaluationError
        If ``|1 + c * h|`` comes within 1e-8 of zero anywhere; retry with
        a smaller ``c``.
    """
    if c < 0:
        raise ValidationError(f"filter strength c must be nonnegative, got {c}")
    denom = 1.0 + c * shift_kernel(basis)
    worst = float(np.min(np.abs(denom)))
    if worst < 1e-8:
        raise FilterEvaluationError(
            f"1 + c*h is within {worst:.3e} of a pole; use a smaller c than {c}"
        )
    return convolve(basis, 1.0 / denom, noisy).real


def rmse(recovered, truth) -> float:
    """Root-mean-squared error between Re(recovered) and the true signal."""
    recovered = np.asarray(recovered)
    truth = np.asarray(truth, dtype=float)
    if recovered.shape != truth.shape:
        raise DimensionError(f"length mismatch: {recovered.shape} vs {truth.shape}")
    n = truth.shape[0]
    return float(np.linalg.norm(recovered.real - truth) / np.sqrt(n))
