"""General Gaussian operations ``gamma -> A - C (B + gamma)^-1 C.T``.

Such an operation is described by a ``2N``-mode covariance matrix ``Gamma``
of output and input modes. ``A``, ``B`` and ``C`` are the blocks of its
partial transpose, the transpose being taken on the input block by negating
its momentum quadratures. Measurements followed by conditional operations fit
in this form, and so do the affine channels of :mod:`gso.channel` in a limit.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, SingularDenominator
from .phasespace import (
    EPS_PSD,
    _n_modes,
    apply_passive,
    min_eigvec,
    passive_mapping,
    squeezing,
    symplectic_form,
)


@dataclass(frozen=True, eq=False)
class GeneralGaussianChannel:
    """Blocks ``A`` (output), ``B`` (input) and ``C`` (coupling) of the partially transposed ``Gamma``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        mats = [np.array(getattr(self, k), dtype=float) for k in "ABC"]
        shapes = {m.shape for m in mats}
        if len(shapes) != 1:
            raise DimensionError(f"A, B, C have different shapes {[m.shape for m in mats]}")
        _n_modes(mats[0])
        for k, m in zip("ABC", mats):
            object.__setattr__(self, k, m)

    @property
    def n_modes(self):
        return self.A.shape[0] // 2

    @classmethod
    def from_bipartite_cm(cls, Gamma):
        """Build the operation from a valid ``2N``-mode covariance matrix (output modes first)."""
        Gamma = np.asarray(Gamma, dtype=float)
        d = _n_modes(Gamma)
        if d % 2:
            raise DimensionError("Gamma must describe an even number of modes")
        L = partial_transpose_sign(d // 2)
        Gt = L @ Gamma @ L
        h = d
        return cls(Gt[:h, :h], Gt[h:, h:], Gt[:h, h:])

    def gamma_tilde(self):
        return np.block([[self.A, self.C], [self.C.T, self.B]])


def partial_transpose_sign(n_modes):
    """Diagonal ``Lambda`` on ``2N`` modes negating the momenta of the last ``N`` modes."""
    signs = np.ones(4 * n_modes)
    signs[2 * n_modes + 1 :: 2] = -1
    return np.diag(signs)


def is_valid_general(ch, tol=EPS_PSD):
    """Check that ``A``, ``B`` are symmetric and ``Lambda Gamma~ Lambda`` is a valid CM.

    Returns:
        tuple[bool, dict]: validity and a diagnostic with the smallest
        eigenvalue of ``Lambda Gamma~ Lambda + i Sigma``.
    """
    A, B, C = ch.A, ch.B, ch.C
    if not (A.shape == B.shape == C.shape):
        raise DimensionError("A, B, C have different shapes")
    n = ch.n_modes
    Gt = np.block([[A, C], [C.T, B]])
    scale = max(1.0, np.linalg.norm(Gt, 2))
    asym = float(max(np.abs(A - A.T).max(), np.abs(B - B.T).max()))
    diag = {"asymmetry": asym}
    if asym > tol * scale:
        diag["reason"] = "A or B is not symmetric"
        diag["min_eigenvalue"] = None
        return False, diag
    L = partial_transpose_sign(n)
    Gamma = L @ ((Gt + Gt.T) / 2) @ L
    lam = float(np.linalg.eigvalsh(Gamma + 1j * symplectic_form(2 * n))[0])
    diag["min_eigenvalue"] = lam
    ok = bool(lam >= -tol * scale)
    if not ok:
        diag["reason"] = "Gamma violates the uncertainty relation"
    return ok, diag


def _denominator(ch, gamma, tol):
    D = ch.B + gamma
    D = (D + D.T) / 2
    lam = np.linalg.eigvalsh(D)[0]
    if lam <= tol * max(1.0, np.linalg.norm(D, 2)):
        raise SingularDenominator(f"B + gamma is singular (smallest eigenvalue {lam:.3e})")
    return D


def apply_general(ch, gamma, tol=EPS_PSD):
    """Output covariance matrix ``A - C (B + gamma)^-1 C.T``."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != ch.A.shape:
        raise DimensionError(f"state {gamma.shape} does not fit operation {ch.A.shape}")
    D = _denominator(ch, gamma, tol)
    out = ch.A - ch.C @ np.linalg.solve(D, ch.C.T)
    return (out + out.T) / 2


def f_opt_general(ch, s, tol=EPS_PSD):
    """Optimal output squeezing from input squeezing ``s``: ``lambda_min(E(s I))``."""
    if s < 0:
        raise ValueError(f"squeezing must be nonnegative, got {s}")
    d = ch.A.shape[0]
    return squeezing(apply_general(ch, s * np.eye(d), tol))


def optimal_passive_general(ch, gamma, tol=EPS_PSD):
    """Passive ``K`` in front of a general operation reaching :func:`f_opt_general`.

    With ``psi`` the most squeezed direction of ``E(s I)``, ``chi = C.T psi`` and
    ``P = B + s I``, the noise ``gamma - s I`` stops contributing once ``K``
    maps ``P^-1 chi`` onto its null vector. ``K`` acts as ``K.T gamma K``,
    the same convention as the affine channels.

    Returns:
        tuple: ``(K, s_out)``. If ``C.T psi`` vanishes every ``K`` is optimal
        and the identity is returned.
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != ch.A.shape:
        raise DimensionError(f"state {gamma.shape} does not fit operation {ch.A.shape}")
    d = gamma.shape[0]
    s, nu = min_eigvec(gamma)
    _, psi = min_eigvec(apply_general(ch, s * np.eye(d), tol))
    chi = ch.C.T @ psi
    if np.linalg.norm(chi) <= tol * max(1.0, np.linalg.norm(ch.C, 2)):
        K = np.eye(d)
    else:
        w = np.linalg.solve(_denominator(ch, s * np.eye(d), tol), chi)
        K = passive_mapping(w / np.linalg.norm(w), nu)
    return K, squeezing(apply_general(ch, apply_passive(gamma, K), tol))
