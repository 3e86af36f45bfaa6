import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from directent.errors import ConvergenceError, InvalidStateError
from directent.qcore import hermitian_eigensystem, psd_factor, psd_sqrt


def test_diagonal():
    w, v = hermitian_eigensystem(np.diag([4.0, 2.0, 3.0, 1.0]))
    np.testing.assert_allclose(w, [1, 2, 3, 4], atol=1e-15)


def test_sigma_x():
    w, _ = hermitian_eigensystem(np.array([[0, 1], [1, 0]]))
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)


def test_sigma_y_complex_entries():
    w, v = hermitian_eigensystem(np.array([[0, -1j], [1j, 0]]))
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, [[0, -1j], [1j, 0]], atol=1e-14)


def test_degenerate_spectrum():
    m = np.eye(4) - np.kron(np.eye(2), np.ones((2, 2))) / 2
    w, v = hermitian_eigensystem(m)
    np.testing.assert_allclose(w, [0, 0, 1, 1], atol=1e-14)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(4), atol=1e-13)


@st.composite
def hermitian_matrices(draw):
    n = draw(st.integers(1, 8))
    seed = draw(st.integers(0, 2**32 - 1))
    scale = draw(st.sampled_from([1e-3, 1.0, 10.0, 1e3]))
    g = np.random.default_rng(seed)
    a = (g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))) * scale
    return (a + a.conj().T) / 2


@settings(max_examples=200, deadline=None)
@given(hermitian_matrices())
def test_reconstruction(h):
    w, v = hermitian_eigensystem(h)
    scale = max(1.0, np.linalg.norm(h))
    assert np.all(np.diff(w) >= 0)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) <= 1e-10 * scale
    assert np.max(np.abs(v.conj().T @ v - np.eye(len(w)))) <= 1e-12
    np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-10 * scale)


def test_rejects_non_hermitian():
    with pytest.raises(ValueError, match="not Hermitian"):
        hermitian_eigensystem(np.array([[0, 1], [0, 0]]))


def test_sweep_budget_exhausted():
    g = np.random.default_rng(3)
    a = g.standard_normal((5, 5))
    with pytest.raises(ConvergenceError):
        hermitian_eigensystem(a + a.T, max_sweeps=1)


def test_psd_sqrt_squares_back(rng):
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    m = g @ g.conj().T
    s = psd_sqrt(m)
    np.testing.assert_allclose(s @ s, m, atol=1e-12)


def test_psd_clamps_tiny_negative_and_rejects_large():
    m = np.diag([0.5, 0.5, -1e-12, 0.0])
    np.testing.assert_allclose(psd_sqrt(m), np.diag([np.sqrt(0.5)] * 2 + [0, 0]), atol=1e-15)
    assert psd_factor(m).shape == (4, 2)
    with pytest.raises(InvalidStateError):
        psd_sqrt(np.diag([1.0, -1e-6]))
