"""Two-mode entanglement from squeezed inputs, measured by logarithmic negativity.

Logarithms are natural throughout; divide by ``ln 2`` for ebits.
"""

import math
from typing import NamedTuple

import numpy as np

from .channel import fixed_point
from .exceptions import DimensionError, InvalidState
from .phasespace import (
    apply_passive,
    direct_sum,
    is_valid_cm,
    min_eigvec,
    passive_mapping,
    symplectic_eigenvalues,
)
from .protocols import iterate_optimal

_PT_SIGNS = np.array([1.0, 1.0, 1.0, -1.0])


def beam_splitter_50_50():
    """Balanced beam splitter on two modes, ``[[I, I], [-I, I]] / sqrt(2)`` in 2x2 blocks."""
    eye = np.eye(2)
    return np.block([[eye, eye], [-eye, eye]]) / np.sqrt(2)


def partial_transpose(gamma):
    """Partial transpose of a two-mode CM: flip the sign of mode 2's momentum."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (4, 4):
        raise DimensionError(f"expected a two-mode (4x4) covariance matrix, got {gamma.shape}")
    return gamma * np.outer(_PT_SIGNS, _PT_SIGNS)


def log_negativity(gamma, check=True, gamma_inv=None):
    """Logarithmic negativity ``sum max(0, -ln nu)`` over PT symplectic eigenvalues.

    Args:
        gamma: two-mode covariance matrix.
        check: validate ``gamma`` first.
        gamma_inv: optional accurately known inverse of ``gamma``. The
            eigenvalues below 1 are then taken as reciprocals of the large
            symplectic eigenvalues of its partial transpose, which keeps them
            accurate when ``gamma`` is strongly anti-squeezed.
    """
    gamma = np.asarray(gamma, dtype=float)
    if check:
        ok, diag = is_valid_cm(gamma)
        if not ok:
            raise InvalidState(f"not a valid covariance matrix: {diag}")
    if gamma_inv is not None:
        # partial transposition commutes with inversion
        nu_inv = symplectic_eigenvalues(partial_transpose(gamma_inv))
        return float(np.sum(np.maximum(0.0, np.log(nu_inv))))
    nu = symplectic_eigenvalues(partial_transpose(gamma))
    return float(np.sum(np.maximum(0.0, -np.log(nu))))


def _align(gamma, axis):
    # rotate so the most squeezed direction lies along Q (axis 0) or P (axis 1)
    _, v = min_eigvec(gamma)
    e = np.zeros(2)
    e[axis] = 1.0
    return apply_passive(gamma, passive_mapping(e, v))


def entangle_canonical(gamma1, gamma2):
    """Entangle two single-mode states on a balanced beam splitter.

    Mode 1 is rotated to be squeezed in Q, mode 2 to be squeezed in P, and the
    pair is mixed. For two inputs with equal squeezing ``s < 1`` the result
    has logarithmic negativity ``-ln s`` whatever their other properties.
    """
    g1 = np.asarray(gamma1, dtype=float)
    g2 = np.asarray(gamma2, dtype=float)
    if g1.shape != (2, 2) or g2.shape != (2, 2):
        raise DimensionError("entangle_canonical expects two single-mode covariance matrices")
    pair = direct_sum(_align(g1, 0), _align(g2, 1))
    return apply_passive(pair, beam_splitter_50_50())


class CanonicalEntanglement(NamedTuple):
    gamma: np.ndarray
    log_negativity: float
    equal_squeezing: bool


def _spectrum(state):
    state = np.asarray(state, dtype=float)
    if state.shape == (2,):
        return np.sort(state)
    if state.shape != (2, 2):
        raise DimensionError(f"expected a single-mode CM or its two eigenvalues, got {state.shape}")
    return np.linalg.eigvalsh(state)


def canonical_entanglement(state1, state2, rtol=1e-9):
    """Run the beam-splitter protocol and report the log-negativity it reaches.

    Each input is a single-mode CM or the pair ``(s, m)`` of its eigenvalues;
    the protocol's rotations make the orientation irrelevant. Eigenvalues
    known to high relative accuracy (see :meth:`gso.protocols.Step.eigenvalues`)
    give an accurate result even for strongly anti-squeezed inputs.
    ``equal_squeezing`` is False when the inputs differ in squeezing by more
    than ``rtol``; the value is then only what this protocol achieves, with
    no claim that it is the best possible.
    """
    (s1, m1), (s2, m2) = _spectrum(state1), _spectrum(state2)
    if min(s1, s2) <= 0:
        raise InvalidState("covariance matrices must be positive definite")
    B = beam_splitter_50_50()
    out = apply_passive(np.diag([s1, m1, m2, s2]), B)
    inv = apply_passive(np.diag([1 / s1, 1 / m1, 1 / m2, 1 / s2]), B)
    equal = bool(abs(s1 - s2) <= rtol * max(1.0, abs(s1), abs(s2)))
    return CanonicalEntanglement(out, log_negativity(out, gamma_inv=inv), equal)


def entanglement_bound(ch, steps=None, log_base=math.e):
    """Largest two-mode log-negativity obtainable with the channel and passive optics.

    This is ``-log(s_opt)``, where ``s_opt`` is the asymptotic optimum
    :func:`gso.channel.fixed_point` or, if ``steps`` is given, the optimal
    squeezing after that many passes starting from the vacuum. It is clipped
    at zero when the channel cannot squeeze at all.
    """
    return -math.log(min(optimal_squeezing(ch, steps), 1.0)) / math.log(log_base)


def optimal_squeezing(ch, steps=None):
    """Asymptotic (``steps=None``) or ``steps``-pass optimal squeezing from vacuum."""
    if steps is None:
        return fixed_point(ch)
    d = ch.X.shape[0]
    return iterate_optimal(ch, np.eye(d), steps).final.s
