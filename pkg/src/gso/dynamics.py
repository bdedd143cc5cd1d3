"""Channels generated by a quadratic Hamiltonian with photon loss to vacuum.

The covariance matrix obeys ``d gamma/dt = A gamma + gamma A.T + N`` with
``A = 2 sigma H - nu 1`` and ``N = 2 nu 1``, where the Hamiltonian is
``(Q, P) H (Q, P).T``. Integrating for a time ``t`` gives an affine channel.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channel import GaussianChannel
from .phasespace import _n_modes, symmetrize, symplectic_form

DEFAULT_QUAD_STEPS = 512
_GAUSS_NODES = 8


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """Quadratic Hamiltonian matrix ``H`` and loss rate ``nu``."""

    H: np.ndarray
    nu: float

    def __post_init__(self):
        H = np.array(self.H, dtype=float)
        _n_modes(H)
        if self.nu < 0:
            raise ValueError(f"loss rate must be nonnegative, got {self.nu}")
        object.__setattr__(self, "H", symmetrize(H))
        object.__setattr__(self, "nu", float(self.nu))

    @property
    def n_modes(self):
        return self.H.shape[0] // 2


def example_model(nu=0.1):
    """One mode with Hamiltonian ``3/4 a^dag a - 1/4 a^dag a^dag + h.c.``.

    Expanding ``a = (Q + iP)/sqrt(2)`` gives ``Q^2/2 + P^2`` up to a constant,
    i.e. ``H = diag(1/2, 1)``.
    """
    return LindbladModel(np.diag([0.5, 1.0]), nu)


def matrix_exponential(M):
    """Matrix exponential (scaling and squaring with a Pade approximant)."""
    return scipy.linalg.expm(np.asarray(M, dtype=float))


def drift_and_diffusion(model):
    """Drift ``A = 2 sigma H - nu 1`` and diffusion ``N = 2 nu 1``."""
    d = model.H.shape[0]
    sigma = symplectic_form(model.n_modes)
    A = 2 * sigma @ model.H - model.nu * np.eye(d)
    N = 2 * model.nu * np.eye(d)
    return A, N


def channel_at_time(model, t, quad_steps=DEFAULT_QUAD_STEPS):
    """Affine channel produced by running the master equation for time ``t``.

    ``X = exp(-nu t) exp(-2 H sigma t)`` and
    ``Y = 2 nu int_0^t exp(-2 nu u) E(u) E(u).T du`` with ``E(u) = exp(2 sigma H u)``.
    The integral uses composite Gauss-Legendre quadrature on ``quad_steps``
    equal panels. Since ``E(k h + c) = E(h)^k E(c)``, one panel's worth of
    exponentials is enough; the other panels follow by propagation.
    """
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if quad_steps < 1:
        raise ValueError("quad_steps must be at least 1")
    d = model.H.shape[0]
    sigma = symplectic_form(model.n_modes)
    nu = model.nu
    X = math.exp(-nu * t) * matrix_exponential(-2 * model.H @ sigma * t)
    if t == 0 or nu == 0:
        return GaussianChannel(X, np.zeros((d, d)))

    gen = 2 * sigma @ model.H
    h = t / quad_steps
    x, w = np.polynomial.legendre.leggauss(_GAUSS_NODES)
    c = h * (x + 1) / 2
    panel = np.zeros((d, d))
    for cj, wj in zip(c, w * h / 2):
        E = matrix_exponential(gen * cj)
        panel += wj * math.exp(-2 * nu * cj) * E @ E.T

    step = matrix_exponential(gen * h)
    decay = math.exp(-2 * nu * h)
    P = np.eye(d)
    weight = 1.0
    acc = np.zeros((d, d))
    for _ in range(quad_steps):
        acc += weight * P @ panel @ P.T
        P = step @ P
        weight *= decay
    Y = 2 * nu * acc
    return GaussianChannel(X, (Y + Y.T) / 2)


def ode_oracle(model, gamma0, t, dt=None):
    """Integrate ``d gamma/dt = A gamma + gamma A.T + N`` with classical RK4.

    Independent of :func:`channel_at_time`; used to check it. The default
    step is ``t / 4096``.
    """
    gamma = np.array(gamma0, dtype=float)
    if t == 0:
        return gamma
    if dt is None:
        dt = t / 4096
    if dt <= 0:
        raise ValueError("dt must be positive")
    steps = max(1, math.ceil(t / dt - 1e-9))
    dt = t / steps
    A, N = drift_and_diffusion(model)

    def rhs(g):
        return A @ g + g @ A.T + N

    for _ in range(steps):
        k1 = rhs(gamma)
        k2 = rhs(gamma + dt / 2 * k1)
        k3 = rhs(gamma + dt / 2 * k2)
        k4 = rhs(gamma + dt * k3)
        gamma = gamma + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return (gamma + gamma.T) / 2
