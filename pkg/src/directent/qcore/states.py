"""Kets and density matrices over labeled qubit registers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .._config import TOL
from ..errors import InvalidStateError
from .linalg import as_matrix, eigvalsh, hermiticity_error

Labels = tuple[str, ...]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


def _check_labels(labels: Sequence[str], dim: int) -> Labels:
    labels = tuple(str(x) for x in labels)
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate register labels: {labels}")
    if dim != 2 ** len(labels):
        raise ValueError(f"dimension {dim} does not match {len(labels)} qubit labels")
    return labels


@dataclass(frozen=True, eq=False)
class Ket:
    """Unit vector with one label per qubit, most significant qubit first."""

    amplitudes: np.ndarray
    labels: Labels

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        object.__setattr__(self, "labels", _check_labels(self.labels, amp.size))
        norm2 = float(np.vdot(amp, amp).real)
        if abs(norm2 - 1.0) > TOL.equality:
            raise InvalidStateError(f"ket has squared norm {norm2!r}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(amp))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def projector(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix._trusted(np.outer(a, a.conj()), self.labels)

    def __repr__(self) -> str:
        return f"Ket(labels={list(self.labels)}, amplitudes={np.round(self.amplitudes, 6).tolist()})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Trace-one positive semidefinite operator over labeled qubits.

    Construction validates Hermiticity, unit trace and positivity. Results of
    operations that preserve those properties skip the eigenvalue check.
    """

    matrix: np.ndarray
    labels: Labels

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "labels", _check_labels(self.labels, m.shape[0]))
        herr = hermiticity_error(m)
        if herr > TOL.hermiticity:
            raise InvalidStateError(f"density matrix not Hermitian (error {herr:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TOL.equality:
            raise InvalidStateError(f"density matrix trace is {tr!r}, expected 1")
        if getattr(self, "_skip_psd", False) is False:
            wmin = float(eigvalsh(m)[0])
            if wmin < -TOL.psd_slack:
                raise InvalidStateError(f"density matrix has eigenvalue {wmin:.3e} < 0")
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def _trusted(cls, matrix: np.ndarray, labels: Sequence[str]) -> "DensityMatrix":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_skip_psd", True)
        object.__setattr__(obj, "matrix", matrix)
        object.__setattr__(obj, "labels", tuple(labels))
        cls.__post_init__(obj)
        return obj

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def relabel(self, labels: Sequence[str]) -> "DensityMatrix":
        return DensityMatrix._trusted(self.matrix, labels)

    def min_eigenvalue(self) -> float:
        return float(eigvalsh(self.matrix)[0])

    def __repr__(self) -> str:
        return f"DensityMatrix(labels={list(self.labels)}, dim={self.dim})"


State = Union[Ket, DensityMatrix]


def as_density(x: State) -> DensityMatrix:
    return x.projector() if isinstance(x, Ket) else x


# --- structural operations -------------------------------------------------


def tensor(a, b):
    """Kronecker product of two kets, two density matrices or two raw matrices.

    Register labels are concatenated with the left operand's labels first.
    """
    if isinstance(a, Ket) and isinstance(b, Ket):
        return Ket(np.kron(a.amplitudes, b.amplitudes), a.labels + b.labels)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix._trusted(np.kron(a.matrix, b.matrix), a.labels + b.labels)
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray) and a.ndim == b.ndim == 2:
        return np.kron(a, b)
    raise TypeError(
        f"tensor needs two operands of the same kind, got {type(a).__name__} and {type(b).__name__}"
    )


def _label_permutation(old: Labels, new: Sequence[str]) -> list[int]:
    new = tuple(new)
    if len(new) != len(old) or set(new) != set(old):
        raise ValueError(f"new order {list(new)} is not a permutation of {list(old)}")
    return [old.index(x) for x in new]


def permute_qubits(m: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Move qubit ``perm[k]`` of a vector or square operator to position ``k``."""
    n = len(perm)
    if m.ndim == 1:
        return m.reshape([2] * n).transpose(perm).reshape(-1)
    axes = list(perm) + [n + p for p in perm]
    d = 2**n
    return m.reshape([2] * (2 * n)).transpose(axes).reshape(d, d)


def reorder_registers(x: State, new_order: Sequence[str]) -> State:
    perm = _label_permutation(x.labels, new_order)
    if isinstance(x, Ket):
        return Ket(permute_qubits(x.amplitudes, perm), tuple(new_order))
    return DensityMatrix._trusted(np.ascontiguousarray(permute_qubits(x.matrix, perm)), tuple(new_order))


def partial_trace(rho: State, keep: Sequence[str]) -> DensityMatrix:
    """Trace out every register not in ``keep``.

    The kept registers retain their original relative order.
    """
    rho = as_density(rho)
    keep = [x for x in rho.labels if x in set(keep)]
    if not keep:
        raise ValueError("partial_trace: keep set is empty or matches no register")
    traced = [x for x in rho.labels if x not in keep]
    m = permute_qubits(rho.matrix, _label_permutation(rho.labels, keep + traced))
    dk, dt = 2 ** len(keep), 2 ** len(traced)
    reduced = np.einsum("ajbj->ab", m.reshape(dk, dt, dk, dt))
    return DensityMatrix._trusted(reduced, keep)


# --- named states ---------------------------------------------------------


def basis_ket(bits: str, labels: Sequence[str]) -> Ket:
    amp = np.zeros(2 ** len(bits), dtype=np.complex128)
    amp[int(bits, 2)] = 1.0
    return Ket(amp, labels)


def singlet(labels: Sequence[str] = ("A1", "B1")) -> Ket:
    """(|01> - |10>)/sqrt(2)."""
    return Ket(np.array([0, 1, -1, 0]) / math.sqrt(2), labels)


def maximally_mixed(labels: Sequence[str]) -> DensityMatrix:
    d = 2 ** len(labels)
    return DensityMatrix._trusted(np.eye(d, dtype=np.complex128) / d, labels)


def werner(p: float, labels: Sequence[str] = ("A1", "B1")) -> DensityMatrix:
    """p * singlet projector + (1 - p) * I/4."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Werner weight p={p} outside [0, 1]")
    m = p * singlet(labels).projector().matrix + (1 - p) * np.eye(4) / 4
    return DensityMatrix._trusted(m, labels)


def schmidt(theta: float, labels: Sequence[str] = ("A1", "B1")) -> Ket:
    """cos(theta)|00> + sin(theta)|11>, concurrence sin(2 theta)."""
    if not 0.0 <= theta <= math.pi / 4 + 1e-15:
        raise ValueError(f"Schmidt angle {theta} outside [0, pi/4]")
    return Ket(np.array([math.cos(theta), 0, 0, math.sin(theta)]), labels)


def counterexample_state() -> Ket:
    """Singlet between Alice's two qubits times singlet between Bob's.

    Returned in copy-major order [A1, B1, A2, B2]. No entanglement crosses
    the A|B cut, yet both collective observables take their top value.
    """
    lab_major = tensor(singlet(("A1", "A2")), singlet(("B1", "B2")))
    return reorder_registers(lab_major, ("A1", "B1", "A2", "B2"))


# --- random fixtures ------------------------------------------------------


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar unitary from the QR of a Ginibre matrix with phase correction."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_pure(rng: np.random.Generator, labels: Sequence[str] = ("A1", "B1")) -> Ket:
    d = 2 ** len(labels)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return Ket(v / np.linalg.norm(v), labels)


def random_mixed(rng: np.random.Generator, rank: int, labels: Sequence[str] = ("A1", "B1")) -> DensityMatrix:
    d = 2 ** len(labels)
    if not 1 <= rank <= d:
        raise ValueError(f"rank {rank} outside [1, {d}]")
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix._trusted(m / np.trace(m).real, labels)


def random_state(rng: np.random.Generator, kind: str, *, p: float | None = None,
                 theta: float | None = None, k: int | None = None,
                 labels: Sequence[str] = ("A1", "B1")) -> State:
    """Fixture generator.

    ``kind`` is one of ``pure_haar``, ``mixed_rank_k`` (needs ``k``),
    ``werner`` (needs ``p``) or ``schmidt`` (needs ``theta``). The last two
    are deterministic and ignore ``rng``.
    """
    if kind == "pure_haar":
        return random_pure(rng, labels)
    if kind == "mixed_rank_k":
        if k is None or not 1 <= k <= 4:
            raise ValueError(f"mixed_rank_k needs k in 1..4, got {k}")
        return random_mixed(rng, k, labels)
    if kind == "werner":
        if p is None:
            raise ValueError("werner needs p")
        return werner(p, labels)
    if kind == "schmidt":
        if theta is None:
            raise ValueError("schmidt needs theta")
        return schmidt(theta, labels)
    raise ValueError(f"unknown state kind {kind!r}")


def local_unitary_conjugate(rho: DensityMatrix, ua: np.ndarray, ub: np.ndarray) -> DensityMatrix:
    u = np.kron(ua, ub)
    m = u @ rho.matrix @ u.conj().T
    return DensityMatrix._trusted(0.5 * (m + m.conj().T), rho.labels)
