import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equalab.linalg import (
    NotPositiveDefinite,
    OpCounter,
    check_hermitian,
    eigh,
    hermitian_transpose,
    integrate_fixed,
    inv_sqrt_pd,
    solve_hermitian_pd,
)


def random_pd(rng, n):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return m @ m.conj().T + np.eye(n)


def test_hermitian_transpose_scalar():
    assert hermitian_transpose(np.array([[2 + 3j]]))[0, 0] == 2 - 3j


def test_hermitian_transpose_identity():
    np.testing.assert_array_equal(hermitian_transpose(np.eye(3)), np.eye(3))


def test_hermitian_transpose_involution():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    back = hermitian_transpose(hermitian_transpose(a))
    for i in range(3):
        for j in range(2):
            assert back[i, j] == a[i, j]


def test_solve_identity():
    b = np.array([1, 1j, -1, -1j])
    np.testing.assert_allclose(solve_hermitian_pd(np.eye(4), b), b)


def test_solve_diagonal():
    x = solve_hermitian_pd(np.diag([2.0, 4.0]), np.array([2.0, 4.0]))
    np.testing.assert_allclose(x, [1.0, 1.0])


@pytest.mark.parametrize("n", [2, 5, 16, 32])
def test_solve_residual(n):
    rng = np.random.default_rng(n)
    a = random_pd(rng, n)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = solve_hermitian_pd(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-10 * np.linalg.norm(b)


def test_solve_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        solve_hermitian_pd(np.diag([1.0, -1.0]), np.ones(2))


def test_solve_counts_ops():
    counter = OpCounter()
    solve_hermitian_pd(np.eye(3), np.ones(3), counter=counter)
    assert counter.as_tuple() == (9 + 9, 9 + 9)


def test_inv_sqrt_identity():
    np.testing.assert_allclose(inv_sqrt_pd(np.eye(3)), np.eye(3), atol=1e-12)


def test_inv_sqrt_diagonal():
    np.testing.assert_allclose(
        inv_sqrt_pd(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]), atol=1e-12
    )


def test_inv_sqrt_defining_identity():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a = random_pd(rng, 6)
        psi = inv_sqrt_pd(a)
        assert np.linalg.norm(psi @ a @ psi - np.eye(6)) <= 1e-9
        # result is itself Hermitian PD
        w, _ = eigh(psi)
        assert w[0] > 0


def test_inv_sqrt_rejects_near_singular():
    with pytest.raises(NotPositiveDefinite):
        inv_sqrt_pd(np.diag([1.0, 1e-16]))


def test_eigh_diagonal():
    w, u = eigh(np.diag([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(w, [1, 2, 3])
    np.testing.assert_allclose(np.abs(u), np.eye(3), atol=1e-12)


def test_eigh_known_symmetric():
    w, _ = eigh(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(w, [-1, 1], atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_eigh_reconstruction(seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    a = m + m.conj().T
    w, u = eigh(a)
    assert np.linalg.norm(u @ np.diag(w) @ u.conj().T - a) <= 1e-9 * np.linalg.norm(a)
    assert np.linalg.norm(u.conj().T @ u - np.eye(8)) <= 1e-9


def test_check_hermitian_rejects_rectangular():
    with pytest.raises(ValueError):
        check_hermitian(np.ones((2, 3)))


def test_integrate_constant():
    assert abs(integrate_fixed(lambda t: np.ones_like(t), 0, np.pi / 2, 8)
               - np.pi / 2) < 1e-14


def test_integrate_sine():
    assert abs(integrate_fixed(np.sin, 0, np.pi, 32) - 2.0) < 1e-12


def test_integrate_craig_identity():
    # (1/pi) * int_0^{pi/2} exp(-x^2/(2 sin^2 t)) dt == Q(x), via erfc
    from scipy.special import erfc

    x = np.sqrt(10.0)
    val = integrate_fixed(lambda t: np.exp(-x**2 / (2 * np.sin(t) ** 2)),
                          0, np.pi / 2, 64) / np.pi
    q = 0.5 * erfc(x / np.sqrt(2))
    assert abs(val - q) < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_solve_matches_direct_inverse(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    a = random_pd(rng, n)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    np.testing.assert_allclose(
        solve_hermitian_pd(a, b), np.linalg.inv(a) @ b, rtol=1e-8, atol=1e-10
    )


def test_integrate_rejects_bad_interval():
    with pytest.raises(ValueError):
        integrate_fixed(np.sin, 1.0, 1.0)
