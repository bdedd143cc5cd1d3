import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gso.exceptions import DimensionError
from gso.phasespace import (
    angle_of,
    apply_passive,
    is_passive,
    is_valid_cm,
    min_eigvec,
    passive_mapping,
    rotation_single_mode,
    squeezing,
    symmetrize,
    symplectic_eigenvalues,
    symplectic_form,
)
from gso.sampling import (
    default_rng,
    random_passive,
    random_state,
    random_symplectic,
    random_unit_vector,
)


def test_symplectic_form_one_mode():
    assert np.array_equal(symplectic_form(1), [[0, 1], [-1, 0]])


def test_symplectic_form_two_modes():
    s1 = symplectic_form(1)
    expected = np.block([[s1, np.zeros((2, 2))], [np.zeros((2, 2)), s1]])
    assert np.array_equal(symplectic_form(2), expected)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_symplectic_form_identities(n):
    s = symplectic_form(n)
    assert np.array_equal(s.T, -s)
    assert np.array_equal(s @ s, -np.eye(2 * n))
    assert np.array_equal(s.T @ s, np.eye(2 * n))


@pytest.mark.parametrize("n", [0, -1, 1.5])
def test_symplectic_form_rejects_bad_n(n):
    with pytest.raises(ValueError):
        symplectic_form(n)


def test_squeezing_examples(rng):
    assert squeezing(np.eye(4)) == pytest.approx(1.0)
    assert squeezing(np.diag([0.5, 2.0])) == pytest.approx(0.5)
    R = rotation_single_mode(rng.uniform(0, 2 * np.pi))
    assert squeezing(R.T @ np.diag([0.3, 4.0]) @ R) == pytest.approx(0.3, abs=1e-14)


def test_min_eigvec_diagonal():
    lam, v = min_eigvec(np.diag([2.0, 5.0]))
    assert lam == 2.0
    assert np.array_equal(v, [1.0, 0.0])


def test_min_eigvec_degenerate_is_deterministic():
    lam, v = min_eigvec(np.eye(2))
    assert lam == 1.0
    assert np.array_equal(v, [1.0, 0.0])
    lam2, v2 = min_eigvec(np.eye(2))
    assert np.array_equal(v, v2)


def test_min_eigvec_sign_convention(rng):
    for _ in range(20):
        A = rng.standard_normal((5, 5))
        _, v = min_eigvec(A + A.T)
        assert v[np.argmax(np.abs(v))] > 0


def test_min_eigvec_against_general_eigensolver(rng):
    for _ in range(50):
        A = rng.standard_normal((6, 6))
        M = A + A.T
        lam, v = min_eigvec(M)
        # independent route: nonsymmetric solver
        w = np.linalg.eigvals(M).real
        assert lam == pytest.approx(w.min(), abs=1e-12)
        assert np.linalg.norm(M @ v - lam * v) <= 1e-12 * max(1, np.abs(M).max()) * 10
        assert np.linalg.norm(v) == pytest.approx(1.0)


def test_is_valid_cm_examples():
    ok, diag = is_valid_cm(np.eye(2))
    assert ok
    # vacuum saturates the bound: spectrum of I + i sigma is {0, 2}
    assert diag["min_eigenvalue"] == pytest.approx(0.0, abs=1e-15)
    ok, diag = is_valid_cm(np.diag([0.5, 0.5]))
    assert not ok
    assert diag["min_eigenvalue"] == pytest.approx(-0.5)
    assert is_valid_cm(np.diag([0.5, 2.0]))[0]


def test_is_valid_cm_rejects_asymmetric():
    ok, diag = is_valid_cm(np.array([[1.0, 0.1], [0.0, 1.0]]))
    assert not ok
    assert diag["reason"] == "not symmetric"


def test_is_valid_cm_dimension():
    with pytest.raises(DimensionError):
        is_valid_cm(np.eye(3))


def test_symmetrize():
    M = np.array([[1.0, 2.0 + 1e-12], [2.0, 3.0]])
    assert np.array_equal(symmetrize(M), symmetrize(M).T)
    with pytest.raises(ValueError):
        symmetrize(np.array([[1.0, 2.0], [0.0, 3.0]]))


def test_apply_passive_examples():
    g = np.diag([0.4, 2.5])
    assert np.allclose(apply_passive(g, np.eye(2)), g)
    s = 0.3
    out = apply_passive(np.diag([s, 1 / s]), rotation_single_mode(np.pi / 2))
    assert np.allclose(out, np.diag([1 / s, s]), atol=1e-15)


def test_apply_passive_preserves_spectrum(rng):
    for n in (1, 2, 3):
        for _ in range(20):
            g = random_state(rng, n)
            K = random_passive(rng, n)
            out = apply_passive(g, K)
            assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(g), atol=1e-12)
            assert abs(squeezing(out) - squeezing(g)) <= 1e-10


def test_apply_passive_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply_passive(np.eye(2), np.eye(4))


def test_passive_mapping_identity_case(rng):
    u = random_unit_vector(rng, 4)
    K = passive_mapping(u, u)
    assert np.allclose(K @ u, u, atol=1e-14)
    assert np.allclose(K, np.eye(4), atol=1e-14)


def test_passive_mapping_quarter_turn():
    K = passive_mapping(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert np.allclose(K @ [1, 0], [0, 1])
    assert np.allclose(K, rotation_single_mode(-np.pi / 2), atol=1e-15)
    assert is_passive(K)


def test_passive_mapping_three_modes(rng):
    u, v = random_unit_vector(rng, 6), random_unit_vector(rng, 6)
    K = passive_mapping(u, v)
    assert np.linalg.norm(K @ u - v) <= 1e-10
    assert is_passive(K)


def test_passive_mapping_many_pairs():
    rng = default_rng(7)
    for n in (1, 2, 3, 4):
        for _ in range(250):
            u, v = random_unit_vector(rng, 2 * n), random_unit_vector(rng, 2 * n)
            K = passive_mapping(u, v)
            assert np.linalg.norm(K @ u - v) <= 1e-10
            assert is_passive(K, 1e-10)
            assert np.linalg.det(K) == pytest.approx(1.0, abs=1e-10)


def test_passive_mapping_rejects_non_unit():
    with pytest.raises(ValueError):
        passive_mapping(np.array([2.0, 0.0]), np.array([1.0, 0.0]))


def test_passive_mapping_handles_zero_leading_entry():
    u = np.array([0.0, 0.0, 1.0, 0.0])
    v = np.array([0.0, 0.0, 0.0, -1.0])
    K = passive_mapping(u, v)
    assert np.allclose(K @ u, v, atol=1e-14)
    assert is_passive(K)


@settings(max_examples=200, deadline=None)
@given(
    n=st.integers(1, 4),
    seed=st.integers(0, 2**32 - 1),
)
def test_passive_mapping_property(n, seed):
    rng = np.random.default_rng(seed)
    u, v = random_unit_vector(rng, 2 * n), random_unit_vector(rng, 2 * n)
    K = passive_mapping(u, v)
    assert np.linalg.norm(K @ u - v) <= 1e-10
    assert is_passive(K, 1e-10)


def test_rotation_examples():
    assert np.array_equal(rotation_single_mode(0.0), np.eye(2))
    s, m = 0.4, 3.0
    out = apply_passive(np.diag([s, m]), rotation_single_mode(np.pi / 2))
    assert np.allclose(out, np.diag([m, s]), atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(theta=st.floats(0, 2 * np.pi, exclude_max=True))
def test_angle_round_trip(theta):
    got = angle_of(rotation_single_mode(theta))
    diff = (got - theta + np.pi) % (2 * np.pi) - np.pi
    assert abs(diff) <= 1e-12


def test_angle_of_specific():
    assert angle_of(rotation_single_mode(1.234)) == pytest.approx(1.234, abs=1e-12)


def test_angle_of_rejects_multimode():
    with pytest.raises(DimensionError):
        angle_of(np.eye(4))


def test_symplectic_eigenvalues_examples():
    assert np.allclose(symplectic_eigenvalues(np.eye(6)), [1, 1, 1])
    assert np.allclose(symplectic_eigenvalues(np.diag([0.2, 5.0])), [1.0])
    assert np.allclose(symplectic_eigenvalues(2 * np.eye(4)), [2, 2])


def test_symplectic_eigenvalues_rejects_indefinite():
    with pytest.raises(ValueError):
        symplectic_eigenvalues(np.diag([1.0, -1.0]))


def test_symplectic_eigenvalues_match_williamson(rng):
    # gamma = S^T diag(nu, nu) S has symplectic spectrum nu by construction
    for n in (1, 2, 3):
        S = random_symplectic(rng, n)
        nu = np.sort(1 + rng.uniform(0, 3, n))
        g = S.T @ np.diag(np.repeat(nu, 2)) @ S
        assert np.allclose(symplectic_eigenvalues(g), nu, rtol=1e-9)


def test_symplectic_eigenvalues_invariant_under_symplectics(rng):
    for n in (1, 2, 3):
        for _ in range(20):
            g = random_state(rng, n)
            S = random_symplectic(rng, n, max_r=0.7)
            sigma = symplectic_form(n)
            assert np.allclose(S.T @ sigma @ S, sigma, atol=1e-10)
            assert np.allclose(
                symplectic_eigenvalues(S.T @ g @ S), symplectic_eigenvalues(g), rtol=1e-9
            )
            K = random_passive(rng, n)
            assert np.allclose(
                symplectic_eigenvalues(apply_passive(g, K)), symplectic_eigenvalues(g), rtol=1e-10
            )


def test_validity_characterizations_agree(rng):
    tol = 1e-9
    for n in (1, 2):
        for _ in range(200):
            S = random_symplectic(rng, n)
            nu = rng.uniform(0.5, 1.5, n)
            g = S.T @ np.diag(np.repeat(nu, 2)) @ S
            g = (g + g.T) / 2
            by_cm = is_valid_cm(g, tol)[0]
            # skip near-boundary draws where the two tolerances legitimately differ
            if abs(nu.min() - 1) < 1e-6:
                continue
            assert by_cm == (symplectic_eigenvalues(g).min() >= 1 - tol)


def test_random_passive_is_passive(rng):
    Ks = random_passive(rng, 3, size=50)
    for K in Ks:
        assert is_passive(K)
        assert np.linalg.det(K) == pytest.approx(1.0, abs=1e-10)
