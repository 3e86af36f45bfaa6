"""Permutation-symmetrized direct measurement of two-qubit entanglement.

Subpackages
-----------
qcore
    Kets, density matrices, the collective observables and concurrence.
protocol
    Multi-copy ensemble models and the Monte Carlo measurement simulator.
estimator
    Certified concurrence lower bound and state-assignment error bound.
cli
    ``directent`` command line.
"""

from ._backend import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
