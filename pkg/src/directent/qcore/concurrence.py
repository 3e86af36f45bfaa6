"""Wootters concurrence for two qubits."""

from __future__ import annotations

import numpy as np

from .linalg import hermitian_eigensystem, psd_factor
from .states import DensityMatrix, Ket

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
YY = np.kron(SIGMA_Y, SIGMA_Y)


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """rho~ = (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)."""
    return YY @ rho.conj() @ YY


def wootters_lambdas(rho: DensityMatrix | Ket) -> np.ndarray:
    """Decreasing square roots of the eigenvalues of sqrt(rho) rho~ sqrt(rho).

    The product is formed in the eigenbasis of ``rho``: with rho = W W^H on
    its support, W^H rho~ W = T^H T for the symmetric matrix T = W^T YY W, so
    the lambdas are the singular values of T. This keeps pure and low-rank
    states free of square-root noise from numerically zero eigenvalues.
    """
    if isinstance(rho, Ket):
        if rho.dim != 4:
            raise ValueError("concurrence is defined here for two qubits only")
        w = rho.amplitudes.reshape(4, 1)
    else:
        if rho.dim != 4:
            raise ValueError("concurrence is defined here for two qubits only")
        w = psd_factor(rho.matrix)
    t = w.T @ YY @ w
    mu = hermitian_eigensystem(t.conj().T @ t)[0] if t.size else np.zeros(0)
    lam = np.sqrt(np.clip(mu, 0.0, None))[::-1]
    return np.concatenate([lam, np.zeros(4 - lam.size)])


def concurrence(rho: DensityMatrix | Ket) -> float:
    """max(0, l1 - l2 - l3 - l4), clipped to [0, 1]."""
    lam = wootters_lambdas(rho)
    return float(min(1.0, max(0.0, lam[0] - lam[1:].sum())))


def pure_concurrence(psi: Ket) -> float:
    """|<psi| sigma_y (x) sigma_y |psi*>|."""
    a = psi.amplitudes
    return float(abs(np.vdot(a, YY @ a.conj())))
