"""Small dense Hermitian linear algebra on complex128 numpy arrays."""

from __future__ import annotations

import numpy as np

from .. import _backend
from .._config import TOL
from ..errors import ConvergenceError, InvalidStateError


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def is_hermitian(m, tol: float = TOL.hermiticity) -> bool:
    return hermiticity_error(as_matrix(m)) <= tol


def allclose(a, b, tol: float = TOL.equality) -> bool:
    """Entrywise absolute comparison."""
    a, b = np.asarray(a), np.asarray(b)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= tol))


def hermitian_eigensystem(
    m,
    tol: float = TOL.jacobi_tol,
    max_sweeps: int = TOL.jacobi_max_sweeps,
) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Returns eigenvalues in ascending order and the matching eigenvectors as
    columns, so that ``V @ diag(w) @ V.conj().T`` reconstructs ``m``.

    Raises
    ------
    ValueError
        If ``m`` is not Hermitian within the configured tolerance.
    ConvergenceError
        If the off-diagonal norm is still above ``tol`` (relative to
        ``max(1, ||m||_F)``) after ``max_sweeps`` sweeps.
    """
    a = as_matrix(m)
    if hermiticity_error(a) > TOL.hermiticity:
        raise ValueError("hermitian_eigensystem: input is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    w, v, sweeps, converged = _backend.jacobi_hermitian(a, float(tol), int(max_sweeps))
    if not converged:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])


def eigvalsh(m) -> np.ndarray:
    return hermitian_eigensystem(m)[0]


def psd_factor(m, slack: float = TOL.psd_slack, floor: float = TOL.rank_floor) -> np.ndarray:
    """Return ``W`` with ``m = W @ W^H`` restricted to the support of ``m``.

    Eigenvalues in ``[-slack, floor]`` are treated as zero; anything more
    negative than ``-slack`` is rejected.
    """
    w, v = hermitian_eigensystem(m)
    if w.size and w[0] < -slack:
        raise InvalidStateError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    keep = w > floor
    return v[:, keep] * np.sqrt(w[keep])


def psd_sqrt(m, slack: float = TOL.psd_slack) -> np.ndarray:
    """Matrix square root of a PSD matrix; small negative eigenvalues clamp to 0."""
    w, v = hermitian_eigensystem(m)
    if w.size and w[0] < -slack:
        raise InvalidStateError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
