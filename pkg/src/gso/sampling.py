"""Seeded random instances: Haar passives, symplectics, states and channels.

Every function takes a ``numpy.random.Generator`` so that all randomness in
a run flows through one seeded source.
"""

import numpy as np

from .phasespace import direct_sum, realify, rotation_single_mode, symplectic_form

DEFAULT_SEED = 20070322


def default_rng(seed=None):
    return np.random.default_rng(DEFAULT_SEED if seed is None else seed)


def haar_unitary(rng, n, size=None):
    """Haar-distributed ``n x n`` unitaries (a stack of them if ``size`` is given).

    QR of a complex Ginibre matrix with the phases of ``diag(R)`` divided out.
    """
    shape = (n, n) if size is None else (size, n, n)
    Z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=-2, axis2=-1)
    return Q * (d / np.abs(d))[..., None, :]


def random_passive(rng, n_modes, size=None):
    """Haar-random element(s) of the passive group K(2N)."""
    return realify(haar_unitary(rng, n_modes, size))


def random_unit_vector(rng, dim):
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_symplectic(rng, n_modes, max_r=1.0):
    """Random symplectic matrix ``K1 @ D @ K2`` with single-mode squeezers in ``D``."""
    r = rng.uniform(-max_r, max_r, n_modes)
    D = np.diag(np.exp(np.column_stack([r, -r]).ravel()))
    return random_passive(rng, n_modes) @ D @ random_passive(rng, n_modes)


def random_state(rng, n_modes, max_r=1.0, max_thermal=1.0):
    """Random valid covariance matrix ``S.T @ diag(nu) @ S``, symplectic eigenvalues ``nu >= 1``."""
    S = random_symplectic(rng, n_modes, max_r)
    nu = 1 + rng.uniform(0, max_thermal, n_modes)
    g = S.T @ np.diag(np.repeat(nu, 2)) @ S
    return (g + g.T) / 2


def single_mode_state(s, m, theta=0.0):
    """Single-mode covariance matrix with eigenvalues ``s``, ``m`` rotated by ``theta``."""
    R = rotation_single_mode(theta)
    return R.T @ np.diag([s, m]) @ R


def state_with_squeezing(rng, n_modes, s, spread=2.0):
    """Random valid covariance matrix whose squeezing is exactly ``s`` (``0 < s``).

    Mode 1 carries eigenvalues ``(s, m)`` with ``m >= max(s, 1/s)``; the other
    modes are less squeezed; a Haar passive then mixes everything.
    """
    blocks = []
    for j in range(n_modes):
        lo = s if j == 0 else max(s, 1.0) * (1 + rng.uniform(0.05, 0.5))
        m = max(lo, 1.0 / lo) * (1 + rng.uniform(0, spread))
        blocks.append(np.diag([lo, m]))
    K = random_passive(rng, n_modes)
    g = K.T @ direct_sum(*blocks) @ K
    return (g + g.T) / 2


def random_channel_xy(rng, n_modes, x_scale=0.7, noise=0.3):
    """Random completely positive ``(X, Y)`` pair.

    ``X`` has Gaussian entries scaled by ``x_scale / sqrt(2N)``. ``Y`` is the
    smallest isotropic noise making the channel CP, plus a random PSD excess
    of size ``noise`` and a small margin.
    """
    d = 2 * n_modes
    X = rng.standard_normal((d, d)) * x_scale / np.sqrt(d)
    sigma = symplectic_form(n_modes)
    # X^T i sigma X + Y - i sigma >= 0 holds for Y >= ||X^T sigma X - sigma|| I
    base = np.linalg.norm(X.T @ sigma @ X - sigma, 2)
    G = rng.standard_normal((d, d)) * np.sqrt(noise / d)
    Y = (base + 1e-3) * np.eye(d) + G @ G.T
    return X, (Y + Y.T) / 2


def random_pure_bipartite_cm(rng, n_modes, max_r=1.0):
    """Random pure ``2N``-mode covariance matrix ``S.T @ S``."""
    S = random_symplectic(rng, 2 * n_modes, max_r)
    g = S.T @ S
    return (g + g.T) / 2


__all__ = [
    "DEFAULT_SEED",
    "default_rng",
    "haar_unitary",
    "random_passive",
    "random_unit_vector",
    "random_symplectic",
    "random_state",
    "single_mode_state",
    "state_with_squeezing",
    "random_channel_xy",
    "random_pure_bipartite_cm",
]
