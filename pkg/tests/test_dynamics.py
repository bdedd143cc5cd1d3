import numpy as np
import pytest

from gso.channel import apply, compose, is_valid_channel
from gso.dynamics import (
    LindbladModel,
    channel_at_time,
    drift_and_diffusion,
    example_model,
    matrix_exponential,
    ode_oracle,
)
from gso.phasespace import rotation_single_mode, symplectic_form
from gso.sampling import random_state


def fock_operators(dim):
    a = np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)
    ad = a.conj().T
    Q = (a + ad) / np.sqrt(2)
    P = (a - ad) / (1j * np.sqrt(2))
    return a, ad, Q, P


def test_example_hamiltonian_matrix_from_fock_space():
    """Expand 3/4 a^dag a - 1/4 a^dag a^dag + h.c. in truncated Fock space and
    fit it to h11 Q^2 + h12 (QP + PQ) + h22 P^2 + c."""
    dim, keep = 40, 30
    a, ad, Q, P = fock_operators(dim)
    term = 0.75 * ad @ a - 0.25 * ad @ ad
    ham = term + term.conj().T
    basis = [Q @ Q, Q @ P + P @ Q, P @ P, np.eye(dim)]
    lhs = np.stack([b[:keep, :keep].ravel() for b in basis], axis=1)
    coef, res, *_ = np.linalg.lstsq(lhs, ham[:keep, :keep].ravel(), rcond=None)
    coef = coef.real
    assert np.abs(lhs @ coef - ham[:keep, :keep].ravel()).max() < 1e-10
    H = np.array([[coef[0], coef[1]], [coef[1], coef[2]]])
    assert np.allclose(H, np.diag([0.5, 1.0]), atol=1e-12)
    assert np.allclose(example_model().H, H, atol=1e-12)


def test_drift_and_diffusion_examples():
    A, N = drift_and_diffusion(LindbladModel(np.zeros((2, 2)), 0.1))
    assert np.allclose(A, -0.1 * np.eye(2))
    assert np.allclose(N, 0.2 * np.eye(2))
    H = np.array([[0.3, 0.1], [0.1, 0.7]])
    A, N = drift_and_diffusion(LindbladModel(H, 0.0))
    assert np.allclose(A, 2 * symplectic_form(1) @ H)
    assert np.array_equal(N, np.zeros((2, 2)))
    A, N = drift_and_diffusion(example_model())
    assert np.allclose(A, [[-0.1, 2.0], [-1.0, -0.1]])
    assert np.allclose(N, 0.2 * np.eye(2))


def test_model_rejects_negative_loss():
    with pytest.raises(ValueError):
        LindbladModel(np.eye(2), -0.1)


def test_channel_at_zero_time():
    ch = channel_at_time(example_model(), 0.0)
    assert np.array_equal(ch.X, np.eye(2))
    assert np.array_equal(ch.Y, np.zeros((2, 2)))


@pytest.mark.parametrize("t", [0.1, 1.0, 3.7])
def test_pure_loss_closed_form(t):
    nu = 0.1
    ch = channel_at_time(LindbladModel(np.zeros((2, 2)), nu), t)
    # 2 nu int_0^t exp(-2 nu u) du = 1 - exp(-2 nu t)
    assert np.allclose(ch.X, np.exp(-nu * t) * np.eye(2), atol=1e-15)
    assert np.abs(ch.Y - (1 - np.exp(-2 * nu * t)) * np.eye(2)).max() <= 1e-10


def test_channel_vs_ode_oracle(rng):
    model = example_model()
    for t in (0.1, 0.5, 1.0, 2.0):
        ch = channel_at_time(model, t, 2048)
        for _ in range(5):
            g0 = random_state(rng, 1)
            assert np.abs(apply(ch, g0) - ode_oracle(model, g0, t)).max() <= 1e-6


def test_two_mode_channel_vs_ode_oracle(rng):
    A = rng.standard_normal((4, 4))
    model = LindbladModel(0.3 * (A + A.T), 0.2)
    ch = channel_at_time(model, 1.3)
    g0 = random_state(rng, 2)
    assert np.abs(apply(ch, g0) - ode_oracle(model, g0, 1.3)).max() <= 1e-8


def test_ode_oracle_trivial_cases(rng):
    model = LindbladModel(np.zeros((2, 2)), 0.1)
    g0 = random_state(rng, 1)
    assert np.array_equal(ode_oracle(example_model(), g0, 0.0), g0)
    for t in (0.5, 2.0):
        assert np.allclose(ode_oracle(model, np.eye(2), t), np.eye(2), atol=1e-14)


def test_ode_oracle_fourth_order():
    model = example_model()
    g0 = np.diag([0.5, 2.0])
    t = 1.0
    exact = apply(channel_at_time(model, t, 2048), g0)
    errs = [np.abs(ode_oracle(model, g0, t, dt=t / k) - exact).max() for k in (16, 32, 64)]
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    for r in ratios:
        assert 13 < r < 19


def test_matrix_exponential_basics():
    assert np.array_equal(matrix_exponential(np.zeros((3, 3))), np.eye(3))
    theta = 0.83
    assert np.allclose(
        matrix_exponential(symplectic_form(1) * theta), rotation_single_mode(theta), atol=1e-15
    )


def test_matrix_exponential_vs_eigendecomposition(rng):
    for d in (2, 4, 6):
        for _ in range(30):
            M = rng.standard_normal((d, d))
            w, V = np.linalg.eig(M)
            expected = (V * np.exp(w)) @ np.linalg.inv(V)
            got = matrix_exponential(M)
            assert np.abs(got - expected.real).max() <= 1e-9 * max(1, np.abs(expected).max())


def test_matrix_exponential_inverse_for_generators(rng):
    for d in (2, 4, 6):
        sigma = symplectic_form(d // 2)
        for _ in range(100):
            A = rng.standard_normal((d, d))
            G = 2 * sigma @ (A @ A.T) - rng.uniform(0, 1) * np.eye(d)
            G *= rng.uniform(0, 10) / np.linalg.norm(G, 2)
            err = matrix_exponential(G) @ matrix_exponential(-G) - np.eye(d)
            assert np.abs(err).max() <= 1e-10


def test_matrix_exponential_inverse_generic(rng):
    # generic matrices: rounding error scales with the conditioning of exp(M)
    for d in (2, 4, 6):
        for _ in range(100):
            M = rng.standard_normal((d, d))
            M *= rng.uniform(0, 10) / np.linalg.norm(M, 2)
            E, Ei = matrix_exponential(M), matrix_exponential(-M)
            bound = 2e-12 * np.linalg.norm(E, 2) * np.linalg.norm(Ei, 2)
            assert np.abs(E @ Ei - np.eye(d)).max() <= bound


@pytest.mark.parametrize("t1,t2", [(0.3, 0.9), (1.1, 0.7), (0.05, 2.5)])
def test_semigroup(t1, t2):
    m = example_model()
    a, b = channel_at_time(m, t1), channel_at_time(m, t2)
    c = compose(b, a)
    total = channel_at_time(m, t1 + t2)
    assert np.abs(c.X - total.X).max() <= 1e-9
    assert np.abs(c.Y - total.Y).max() <= 1e-7


def test_channels_completely_positive():
    m = example_model()
    for t in np.linspace(0.01, 5, 40):
        ch = channel_at_time(m, t)
        ok, diag = is_valid_channel(ch.X, ch.Y)
        assert ok
        assert diag["min_eigenvalue"] >= -1e-9


def test_unitary_limit(rng):
    A = rng.standard_normal((4, 4))
    model = LindbladModel(A + A.T, 0.0)
    sigma = symplectic_form(2)
    for t in (0.2, 1.0):
        ch = channel_at_time(model, t)
        assert np.abs(ch.X.T @ sigma @ ch.X - sigma).max() <= 1e-9
        assert np.array_equal(ch.Y, np.zeros((4, 4)))


def test_quad_steps_convergence():
    m = example_model()
    coarse = channel_at_time(m, 2.0, quad_steps=8)
    fine = channel_at_time(m, 2.0, quad_steps=1024)
    assert np.abs(coarse.Y - fine.Y).max() <= 1e-10


def test_invalid_arguments():
    with pytest.raises(ValueError):
        channel_at_time(example_model(), -1.0)
    with pytest.raises(ValueError):
        channel_at_time(example_model(), 1.0, quad_steps=0)
    with pytest.raises(ValueError):
        ode_oracle(example_model(), np.eye(2), 1.0, dt=-0.1)
