"""Affine noisy Gaussian channels ``gamma -> X.T @ gamma @ X + Y``.

The optimisation results here all rest on one fact: with a free passive
operation in front, the best output squeezing of a single channel use only
depends on the input squeezing ``s`` and equals ``lambda_min(s X.T X + Y)``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import (
    DegenerateContraction,
    DimensionError,
    NoFiniteFixedPoint,
    SingularNoise,
)
from .phasespace import (
    EPS_PSD,
    _n_modes,
    apply_passive,
    min_eigvec,
    passive_mapping,
    squeezing,
    symmetrize,
    symplectic_form,
)
from .sampling import default_rng, random_passive


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """Channel ``gamma -> X.T @ gamma @ X + Y`` on ``N`` modes.

    ``Y`` is symmetrized on construction; complete positivity is not enforced
    here (see :func:`is_valid_channel`) so that invalid inputs can still be
    diagnosed.
    """

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        Y = np.array(self.Y, dtype=float)
        if X.shape != Y.shape:
            raise DimensionError(f"X {X.shape} and Y {Y.shape} differ in shape")
        _n_modes(X)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", symmetrize(Y))

    @property
    def n_modes(self):
        return self.X.shape[0] // 2

    def __call__(self, gamma):
        return apply(self, gamma)


def identity_channel(n_modes=1):
    d = 2 * n_modes
    return GaussianChannel(np.eye(d), np.zeros((d, d)))


def loss_channel(eta, n_modes=1):
    """Attenuation to vacuum with transmissivity ``eta``."""
    d = 2 * n_modes
    return GaussianChannel(np.sqrt(eta) * np.eye(d), (1 - eta) * np.eye(d))


def squeezer_channel(r, y):
    """Single-mode noisy squeezer ``X = diag(e^-r, e^r)``, ``Y = y I``."""
    return GaussianChannel(np.diag([np.exp(-r), np.exp(r)]), y * np.eye(2))


def is_valid_channel(X, Y, tol=EPS_PSD):
    """Complete positivity test ``X.T i sigma X + Y - i sigma >= 0``.

    Returns:
        tuple[bool, dict]: validity and a diagnostic with the smallest
        eigenvalue of the Hermitian CP matrix.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != Y.shape:
        raise DimensionError(f"X {X.shape} and Y {Y.shape} differ in shape")
    n = _n_modes(X)
    sigma = symplectic_form(n)
    scale = max(1.0, np.linalg.norm(Y, 2), np.linalg.norm(X, 2) ** 2)
    asym = float(np.abs(Y - Y.T).max())
    cp = 1j * (X.T @ sigma @ X - sigma) + (Y + Y.T) / 2
    lam = float(np.linalg.eigvalsh(cp)[0])
    ok = bool(asym <= tol * scale and lam >= -tol * scale)
    diag = {"min_eigenvalue": lam, "asymmetry": asym}
    if asym > tol * scale:
        diag["reason"] = "Y is not symmetric"
    elif not ok:
        diag["reason"] = "not completely positive"
    return ok, diag


def apply(ch, gamma):
    """Send a covariance matrix through the channel."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != ch.X.shape:
        raise DimensionError(f"state {gamma.shape} does not fit channel {ch.X.shape}")
    out = ch.X.T @ gamma @ ch.X + ch.Y
    return (out + out.T) / 2


def kernel_output(ch, s):
    """Channel output ``s X.T X + Y`` for the (generally unphysical) input ``s I``."""
    out = s * ch.X.T @ ch.X + ch.Y
    return (out + out.T) / 2


def f_opt(ch, s):
    """Best output squeezing reachable from input squeezing ``s`` in one use.

    Equal to ``lambda_min(s X.T X + Y)``; concave and nondecreasing in ``s``.
    """
    if s < 0:
        raise ValueError(f"squeezing must be nonnegative, got {s}")
    return float(np.linalg.eigvalsh(kernel_output(ch, s))[0])


def optimal_passive(ch, gamma):
    """Passive operation that makes one channel use reach :func:`f_opt`.

    The input is split as ``s I + N`` with ``N >= 0`` singular. Rotating so that
    ``X`` maps the most squeezed output direction of ``s I`` onto the null
    vector of ``N`` removes every noise contribution from that direction.

    Returns:
        tuple: ``(K, gamma_out, s_out)`` with ``gamma_out = apply(ch, K.T gamma K)``.
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != ch.X.shape:
        raise DimensionError(f"state {gamma.shape} does not fit channel {ch.X.shape}")
    s, nu = min_eigvec(gamma)
    K = optimal_passive_from(ch, s, nu)
    out = apply(ch, apply_passive(gamma, K))
    return K, out, squeezing(out)


def optimal_passive_from(ch, s, nu):
    """Optimal passive operation given only the input squeezing ``s`` and its direction ``nu``."""
    _, phi = min_eigvec(kernel_output(ch, s))
    x = ch.X @ phi
    norm = np.linalg.norm(x)
    if norm <= 1e-14 * max(1.0, np.linalg.norm(ch.X, 2)):
        # the optimal direction is insensitive to the input
        return np.eye(len(phi))
    return passive_mapping(x / norm, nu)


def fixed_point(ch, tol=EPS_PSD):
    """Asymptotic squeezing ``s_inf`` of optimally iterated channel use.

    Solves ``f_opt(s) = s`` as ``s_inf = -1 / lambda_min(Y^-1/2 (X.T X - 1) Y^-1/2)``.

    Raises:
        NoFiniteFixedPoint: if ``X.T X - 1`` is positive semidefinite.
        SingularNoise: if ``Y`` is singular to within ``tol``.
    """
    X, Y = ch.X, ch.Y
    d = X.shape[0]
    G = X.T @ X - np.eye(d)
    G = (G + G.T) / 2
    if np.linalg.eigvalsh(G)[0] >= -tol * max(1.0, np.linalg.norm(G, 2)):
        raise NoFiniteFixedPoint("X^T X - 1 has no negative direction: f(s) >= s for all s")
    w, V = np.linalg.eigh(Y)
    if w[0] <= tol * max(1.0, w[-1]):
        raise SingularNoise(f"noise matrix is singular (smallest eigenvalue {w[0]:.3e})")
    inv_root = (V / np.sqrt(w)) @ V.T
    M = inv_root @ G @ inv_root
    mu = np.linalg.eigvalsh((M + M.T) / 2)[0]
    return float(-1.0 / mu)


class RingSolution(NamedTuple):
    """Fixed passive operation for a ring cavity and its convergence data."""

    K: np.ndarray
    alpha: float
    s_inf: float
    psi: np.ndarray


def ring_solution(ch, tol=EPS_PSD):
    """Solve for the single passive operation that reaches ``s_inf`` when repeated.

    ``psi`` is the most squeezed direction of ``s_inf X.T X + Y``; ``K`` maps
    ``X psi`` back onto ``psi`` so the optimal point is preserved, and every
    pass shrinks the excess along ``psi`` by ``alpha = <psi|X.T X|psi>``.

    Raises:
        DegenerateContraction: if ``<psi|Y|psi> <= tol`` (``alpha = 1``). The
            exception carries ``K``, ``alpha`` and ``s_inf``.
    """
    s_inf = fixed_point(ch, tol)
    _, psi = min_eigvec(kernel_output(ch, s_inf))
    x = ch.X @ psi
    alpha = float(x @ x)
    norm = np.sqrt(alpha)
    if norm <= 1e-14 * max(1.0, np.linalg.norm(ch.X, 2)):
        K = np.eye(len(psi))
    else:
        K = passive_mapping(x / norm, psi)
    noise = float(psi @ ch.Y @ psi)
    if noise <= tol * max(1.0, s_inf):
        raise DegenerateContraction(
            f"no noise along the optimal direction (<psi|Y|psi> = {noise:.3e}); alpha = 1",
            K=K,
            alpha=alpha,
            s_inf=s_inf,
            psi=psi,
        )
    return RingSolution(K, alpha, s_inf, psi)


def ring_passive(ch, tol=EPS_PSD):
    """Fixed ring-cavity passive operation and contraction factor ``(K, alpha)``."""
    sol = ring_solution(ch, tol)
    return sol.K, sol.alpha


def compose(ch2, ch1):
    """Channel for ``ch1`` followed by ``ch2``."""
    if ch1.X.shape != ch2.X.shape:
        raise DimensionError("channels act on different numbers of modes")
    X = ch1.X @ ch2.X
    Y = ch2.X.T @ ch1.Y @ ch2.X + ch2.Y
    return GaussianChannel(X, (Y + Y.T) / 2)


def _min_squeezing_over(ch, gamma, Ks):
    G = np.swapaxes(Ks, -1, -2) @ gamma @ Ks
    out = ch.X.T @ G @ ch.X + ch.Y
    return float(np.linalg.eigvalsh(out)[:, 0].min())


def brute_force_single(ch, gamma, budget, rng=None, chunk=10_000, workers=None):
    """Sampled minimum of the output squeezing over passive operations.

    For one mode the passive group is a circle and ``budget`` equally spaced
    angles are scanned. For more modes ``budget`` Haar-random passives are
    drawn from ``rng``. The result approaches :func:`f_opt` from above.

    Args:
        workers (int): evaluate chunks in a thread pool; the minimum does not
            depend on it.
    """
    gamma = np.asarray(gamma, dtype=float)
    n = ch.n_modes
    if n == 1:
        theta = 2 * np.pi * np.arange(budget) / budget
        c, s = np.cos(theta), np.sin(theta)
        all_K = np.stack([np.stack([c, s], -1), np.stack([-s, c], -1)], -2)
        batches = [all_K[i : i + chunk] for i in range(0, budget, chunk)]
    else:
        rng = default_rng() if rng is None else rng
        sizes = [min(chunk, budget - i) for i in range(0, budget, chunk)]
        batches = [random_passive(rng, n, size) for size in sizes]

    def work(Ks):
        return _min_squeezing_over(ch, gamma, Ks)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return min(pool.map(work, batches))
    return min(work(Ks) for Ks in batches)

