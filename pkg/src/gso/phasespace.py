"""Phase-space linear algebra for N bosonic modes.

All matrices use the interleaved quadrature ordering (Q1, P1, ..., QN, PN).
Covariance matrices follow the convention in which the vacuum is the
identity, and passive operations act as ``gamma -> K.T @ gamma @ K``.
"""

import numpy as np
from scipy.linalg import block_diag

from .exceptions import DimensionError

#: Tolerance for covariance-matrix and channel positivity checks (relative).
EPS_PSD = 1e-9
#: Tolerance for orthogonality / symplecticity of passive operations.
EPS_ORTH = 1e-10


def _n_modes(M):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionError(f"expected a square even-dimensional matrix, got shape {M.shape}")
    return M.shape[0] // 2


def symmetrize(M, tol=EPS_PSD):
    """Return ``(M + M.T) / 2``, refusing matrices that are far from symmetric.

    The asymmetry ``max|M - M.T|`` may be at most ``tol * max(1, ||M||)``.
    """
    M = np.asarray(M, dtype=float)
    scale = max(1.0, np.abs(M).max(initial=0.0))
    asym = np.abs(M - M.T).max(initial=0.0)
    if asym > tol * scale:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    return (M + M.T) / 2


def symplectic_form(n_modes):
    """Symplectic form for ``n_modes`` modes in interleaved ordering.

    Args:
        n_modes (int): number of modes, at least one.

    Returns:
        array: block-diagonal ``2N x 2N`` matrix with blocks ``[[0, 1], [-1, 0]]``.
    """
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}")
    return np.kron(np.eye(int(n_modes)), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def min_eigvec(M):
    """Smallest eigenvalue of a real symmetric matrix and a unit eigenvector.

    The eigenvector is taken from ``numpy.linalg.eigh`` and its sign is fixed
    so that the component of largest magnitude is positive (first such index
    on ties). This makes passive operations built from it reproducible even
    when the smallest eigenvalue is degenerate.
    """
    M = np.asarray(M, dtype=float)
    w, V = np.linalg.eigh((M + M.T) / 2)
    return float(w[0]), canonical_sign(V[:, 0])


def canonical_sign(v):
    """Flip ``v`` so that its component of largest magnitude is positive."""
    k = np.argmax(np.abs(v))
    return -v if v[k] < 0 else v


def is_degenerate_min(M, rel_gap=1e-9):
    """True if the two smallest eigenvalues of ``M`` coincide to ``rel_gap * ||M||``."""
    w = np.linalg.eigvalsh(M)
    if len(w) < 2:
        return False
    return bool(w[1] - w[0] < rel_gap * max(np.linalg.norm(M, 2), 1e-300))


def squeezing(gamma):
    """Squeezing of a covariance matrix: its smallest eigenvalue.

    A state is squeezed iff the result is below 1 (the vacuum value).
    """
    return float(np.linalg.eigvalsh(np.asarray(gamma, dtype=float))[0])


def is_valid_cm(gamma, tol=EPS_PSD):
    """Check the uncertainty relation ``gamma + i sigma >= 0``.

    Args:
        gamma (array): candidate ``2N x 2N`` covariance matrix.
        tol (float): tolerance relative to ``max(1, ||gamma||)``.

    Returns:
        tuple[bool, dict]: validity and a diagnostic holding the smallest
        eigenvalue of ``gamma + i sigma`` and the asymmetry of ``gamma``.
    """
    gamma = np.asarray(gamma, dtype=float)
    n = _n_modes(gamma)
    scale = max(1.0, np.linalg.norm(gamma, 2))
    asym = float(np.abs(gamma - gamma.T).max())
    sym = (gamma + gamma.T) / 2
    lam = float(np.linalg.eigvalsh(sym + 1j * symplectic_form(n))[0])
    ok = bool(asym <= tol * scale and lam >= -tol * scale)
    diag = {"min_eigenvalue": lam, "asymmetry": asym}
    if asym > tol * scale:
        diag["reason"] = "not symmetric"
    elif not ok:
        diag["reason"] = "violates gamma + i sigma >= 0"
    return ok, diag


def is_passive(K, tol=EPS_ORTH):
    """True if ``K`` is orthogonal and symplectic to within ``tol``."""
    K = np.asarray(K, dtype=float)
    n = _n_modes(K)
    sigma = symplectic_form(n)
    eye = np.eye(2 * n)
    return bool(
        np.abs(K.T @ K - eye).max() <= tol and np.abs(K.T @ sigma @ K - sigma).max() <= tol
    )


def apply_passive(gamma, K):
    """Transform a covariance matrix by a passive operation: ``K.T @ gamma @ K``."""
    gamma = np.asarray(gamma, dtype=float)
    K = np.asarray(K, dtype=float)
    if gamma.shape != K.shape:
        raise DimensionError(f"state {gamma.shape} and passive operation {K.shape} differ")
    out = K.T @ gamma @ K
    return (out + out.T) / 2


def realify(U):
    """Real ``2N x 2N`` representation of a complex ``N x N`` matrix.

    Each entry ``a + ib`` becomes the block ``[[a, -b], [b, a]]``, matching the
    identification ``c_j = Q_j + i P_j``. Works on stacks of matrices.
    """
    U = np.asarray(U, dtype=complex)
    n = U.shape[-1]
    K = np.empty(U.shape[:-2] + (2 * n, 2 * n))
    K[..., 0::2, 0::2] = U.real
    K[..., 0::2, 1::2] = -U.imag
    K[..., 1::2, 0::2] = U.imag
    K[..., 1::2, 1::2] = U.real
    return K


def complexify(u):
    """Map a real vector ``(Q1, P1, ...)`` to the complex vector ``Q_j + i P_j``."""
    u = np.asarray(u, dtype=float)
    return u[0::2] + 1j * u[1::2]


def _unitary_with_first_column(a):
    # Complex Householder reflector H with H a = -alpha e1, so -alpha H e1 = a.
    n = len(a)
    alpha = a[0] / abs(a[0]) if abs(a[0]) > 0 else 1.0
    w = a.copy()
    w[0] += alpha
    H = np.eye(n, dtype=complex) - 2 * np.outer(w, w.conj()) / np.vdot(w, w).real
    return -alpha * H


def passive_mapping(u, v, tol=1e-9):
    """Passive operation ``K`` with ``K @ u = v`` for unit vectors ``u, v``.

    The vectors are viewed as complex N-vectors, a unitary taking one to the
    other is assembled from two Householder reflections, and the result is
    realified. Orthogonal symplectic matrices are exactly the realified
    unitaries, so ``K`` is passive by construction.

    Raises:
        ValueError: if ``u`` or ``v`` is not normalized to within ``tol``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1 or len(u) % 2:
        raise DimensionError(f"vectors of shapes {u.shape} and {v.shape} are incompatible")
    for name, x in (("u", u), ("v", v)):
        if abs(np.linalg.norm(x) - 1) > tol:
            raise ValueError(f"{name} is not a unit vector (norm {np.linalg.norm(x)!r})")
    a = complexify(u / np.linalg.norm(u))
    b = complexify(v / np.linalg.norm(v))
    U = _unitary_with_first_column(b) @ _unitary_with_first_column(a).conj().T
    return realify(U)


def rotation_single_mode(theta):
    """Single-mode phase rotation ``[[cos t, sin t], [-sin t, cos t]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def angle_of(K):
    """Inverse of :func:`rotation_single_mode`, returning an angle in ``[0, 2 pi)``."""
    K = np.asarray(K, dtype=float)
    if K.shape != (2, 2):
        raise DimensionError("angle_of is only defined for single-mode operations")
    return float(np.mod(np.arctan2(K[0, 1], K[0, 0]), 2 * np.pi))


def symplectic_eigenvalues(gamma):
    """Symplectic eigenvalues of a positive definite ``2N x 2N`` matrix, ascending.

    These are the moduli of the eigenvalues of ``i sigma gamma``, which come in
    ``+-`` pairs; one representative per pair is returned.
    """
    gamma = np.asarray(gamma, dtype=float)
    n = _n_modes(gamma)
    gamma = (gamma + gamma.T) / 2
    if np.linalg.eigvalsh(gamma)[0] <= 0:
        raise ValueError("symplectic eigenvalues need a positive definite matrix")
    # i sigma gamma is similar to the Hermitian gamma^1/2 (i sigma) gamma^1/2
    w, V = np.linalg.eigh(gamma)
    root = (V * np.sqrt(w)) @ V.T
    nu = np.linalg.eigvalsh(root @ (1j * symplectic_form(n)) @ root)
    return np.sort(np.abs(nu))[::2]


def direct_sum(*blocks):
    """Block-diagonal matrix from single- or multi-mode blocks."""
    return block_diag(*blocks)
