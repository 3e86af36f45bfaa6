"""Exchange projectors, the collective observables V1/V2, and Born sampling."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import _backend
from .._config import TOL
from ..errors import NumericalIntegrityError
from .states import DensityMatrix, Ket, Labels, _frozen, as_density, permute_qubits

COPY_MAJOR: Labels = ("A1", "B1", "A2", "B2")
LAB_MAJOR: Labels = ("A1", "A2", "B1", "B2")

_SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]],
    dtype=np.complex128,
)


def exchange_projectors() -> tuple[np.ndarray, np.ndarray]:
    """(P_minus, P_plus) = ((I - SWAP)/2, (I + SWAP)/2) on two qubits."""
    eye = np.eye(4, dtype=np.complex128)
    return _frozen((eye - _SWAP) / 2), _frozen((eye + _SWAP) / 2)


@dataclass(frozen=True, eq=False)
class Observable:
    label: str
    matrix: np.ndarray
    spectrum: tuple[tuple[float, np.ndarray], ...]
    labels: Labels = COPY_MAJOR

    @property
    def outcomes(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.spectrum)

    def projector(self, outcome: float) -> np.ndarray:
        for v, p in self.spectrum:
            if v == outcome:
                return p
        raise KeyError(outcome)


def _to_copy_major(m: np.ndarray) -> np.ndarray:
    perm = [LAB_MAJOR.index(x) for x in COPY_MAJOR]
    return np.ascontiguousarray(permute_qubits(m, perm))


@lru_cache(maxsize=None)
def build_observable(label: str) -> Observable:
    """V1 = 4(P^A_- - P^A_+) (x) P^B_-,  V2 = 4 P^A_- (x) (P^B_- - P^B_+).

    Assembled on lab-major registers [A1, A2, B1, B2] and returned on the
    copy-major order [A1, B1, A2, B2]. Spectral projectors for the outcomes
    -4, 0 and +4 are stored alongside.
    """
    key = label.upper()
    pm, pp = exchange_projectors()
    eye = np.eye(4, dtype=np.complex128)
    if key == "V1":
        parts = {4.0: np.kron(pm, pm), -4.0: np.kron(pp, pm), 0.0: np.kron(eye, pp)}
    elif key == "V2":
        parts = {4.0: np.kron(pm, pm), -4.0: np.kron(pm, pp), 0.0: np.kron(pp, eye)}
    else:
        raise ValueError(f"unknown observable {label!r}; expected V1 or V2")
    spectrum = tuple((v, _frozen(_to_copy_major(parts[v]))) for v in sorted(parts))
    matrix = sum(v * p for v, p in spectrum)
    return Observable(key, _frozen(matrix), spectrum)


def _check_registers(obs: Observable, rho: DensityMatrix) -> None:
    if rho.dim != obs.matrix.shape[0]:
        raise ValueError(f"dimension mismatch: state {rho.dim}, observable {obs.matrix.shape[0]}")
    # registers match by lab role (A/B) and position; copy indices may differ
    roles = tuple(x[:1] for x in rho.labels)
    if roles != tuple(x[:1] for x in obs.labels):
        raise ValueError(f"register roles {list(rho.labels)} do not match {list(obs.labels)}")


def expectation(obs: Observable, rho: DensityMatrix | Ket) -> float:
    """Tr(rho V) as a real number."""
    rho = as_density(rho)
    _check_registers(obs, rho)
    val = complex(np.trace(rho.matrix @ obs.matrix))
    if abs(val.imag) > 1e-10:
        raise NumericalIntegrityError(f"expectation has imaginary part {val.imag:.3e}")
    return val.real


def born_probabilities(obs: Observable, rho: DensityMatrix | Ket) -> np.ndarray:
    """Outcome probabilities in the order of ``obs.outcomes``.

    Drift up to the configured slack is clamped and renormalized; anything
    larger raises :class:`NumericalIntegrityError`.
    """
    rho = as_density(rho)
    _check_registers(obs, rho)
    probs = np.array([np.trace(p @ rho.matrix).real for _, p in obs.spectrum])
    drift = TOL.probability_drift
    if probs.min() < -drift or probs.max() > 1 + drift or abs(probs.sum() - 1) > drift:
        raise NumericalIntegrityError(f"Born probabilities drifted: {probs.tolist()}")
    probs = np.clip(probs, 0.0, 1.0)
    return probs / probs.sum()


def _cdf(probs: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    return np.ascontiguousarray(cdf)


def sample_outcomes(obs: Observable, rho: DensityMatrix | Ket, rng: np.random.Generator,
                    size: int) -> np.ndarray:
    """Draw ``size`` measurement outcomes by inverse CDF."""
    probs = born_probabilities(obs, rho)
    idx = _backend.inverse_cdf(_cdf(probs), rng.random(size))
    return np.asarray(obs.outcomes)[idx]


def sample_outcome(obs: Observable, rho: DensityMatrix | Ket, rng: np.random.Generator) -> float:
    return float(sample_outcomes(obs, rho, rng, 1)[0])
