"""Shared helpers for the test suite."""
import numpy as np


def random_invertible(rng, n, min_sigma=1e-6):
    """Uniform [-1, 1] entries, resampled until comfortably invertible."""
    while True:
        s = rng.uniform(-1.0, 1.0, (n, n))
        if np.linalg.svd(s, compute_uv=False)[-1] >= min_sigma:
            return s


def random_real_normal(rng, n):
    """Random real normal matrix: orthogonal conjugate of a block-diagonal
    mix of scalars and scaled 2x2 rotations."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    blocks = np.zeros((n, n))
    i = 0
    while i < n:
        if i + 1 < n and rng.random() < 0.5:
            r = rng.uniform(0.3, 1.5)
            theta = rng.uniform(0.2, np.pi - 0.2)
            c, s = r * np.cos(theta), r * np.sin(theta)
            blocks[i : i + 2, i : i + 2] = [[c, -s], [s, c]]
            i += 2
        else:
            blocks[i, i] = rng.uniform(0.3, 1.5) * rng.choice([-1.0, 1.0])
            i += 1
    return q @ blocks @ q.T


def random_unit_direction(rng, n):
    d = rng.standard_normal((n, n))
    return d / np.linalg.norm(d)
