from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical slack used across the package."""

    hermiticity: float = 1e-10
    equality: float = 1e-12
    psd_slack: float = 1e-10
    # eigenvalues of a density matrix below this are treated as exact zeros
    rank_floor: float = 1e-14
    probability_drift: float = 1e-9
    jacobi_tol: float = 1e-12
    jacobi_max_sweeps: int = 100


TOL = Tolerances()
