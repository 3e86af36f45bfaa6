"""Quantum primitives for a handful of qubits."""

from .concurrence import concurrence, pure_concurrence, spin_flip, wootters_lambdas
from .linalg import allclose, eigvalsh, hermitian_eigensystem, is_hermitian, psd_factor, psd_sqrt
from .observables import (
    COPY_MAJOR,
    LAB_MAJOR,
    Observable,
    born_probabilities,
    build_observable,
    exchange_projectors,
    expectation,
    sample_outcome,
    sample_outcomes,
)
from .serialize import matrix_from_json, matrix_to_json
from .states import (
    DensityMatrix,
    Ket,
    as_density,
    basis_ket,
    counterexample_state,
    local_unitary_conjugate,
    maximally_mixed,
    partial_trace,
    random_mixed,
    random_pure,
    random_state,
    random_unitary,
    reorder_registers,
    schmidt,
    singlet,
    tensor,
    werner,
)

__all__ = [
    "COPY_MAJOR", "LAB_MAJOR", "DensityMatrix", "Ket", "Observable",
    "allclose", "as_density", "basis_ket", "born_probabilities", "build_observable",
    "concurrence", "counterexample_state", "eigvalsh", "exchange_projectors",
    "expectation", "hermitian_eigensystem", "is_hermitian", "local_unitary_conjugate",
    "matrix_from_json", "matrix_to_json", "maximally_mixed", "partial_trace",
    "psd_factor", "psd_sqrt", "pure_concurrence", "random_mixed", "random_pure",
    "random_state", "random_unitary", "reorder_registers", "sample_outcome",
    "sample_outcomes", "schmidt", "singlet", "spin_flip", "tensor", "werner",
    "wootters_lambdas",
]
