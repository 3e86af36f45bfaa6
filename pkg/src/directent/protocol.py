"""Multi-copy ensemble models and the permuted-pair measurement simulator.

Copies are indexed from 0. A pair ``(i, j)`` is reported on registers
``[A_i, B_i, A_j, B_j]``. The joint N-copy state is never built; every
supported model gives each ordered pair a reduced state in closed form.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import _backend
from .qcore import (
    DensityMatrix,
    born_probabilities,
    build_observable,
    counterexample_state,
    expectation,
    maximally_mixed,
    reorder_registers,
    tensor,
)

log = logging.getLogger(__name__)

OUTCOMES = (-4.0, 0.0, 4.0)
CHUNK = 8192

# ordered pair classes
GOOD_GOOD, GOOD_BAD, BAD_GOOD, PARTNERS, BAD_BAD = range(5)
CLASS_NAMES = ("good-good", "good-bad", "bad-good", "partners", "bad-bad")


# --- models ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IID:
    """N independent copies of the same two-qubit state."""

    rho0: DensityMatrix
    N: int

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("need at least 2 copies")
        if self.rho0.dim != 4:
            raise ValueError("rho0 must be a two-qubit state")

    @property
    def n_good(self) -> int:
        return self.N

    @property
    def r_bad(self) -> int:
        return 0


@dataclass(frozen=True)
class CounterexampleBlocks:
    """M disjoint blocks, each two copies in the adversarial 4-qubit state."""

    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("need at least one block")

    @property
    def N(self) -> int:
        return 2 * self.M

    @property
    def n_good(self) -> int:
        return 0

    @property
    def r_bad(self) -> int:
        return self.N


@dataclass(frozen=True, eq=False)
class MixedGoodBad:
    """``n_good`` copies of rho0 followed by ``r_bad`` copies in adversarial blocks.

    Good copies occupy indices ``0 .. n_good-1``; bad copies pair up as
    ``(n_good + 2b, n_good + 2b + 1)``.
    """

    rho0: DensityMatrix
    n_good: int
    r_bad: int

    def __post_init__(self):
        if self.r_bad < 0 or self.r_bad % 2:
            raise ValueError(f"r_bad must be even and non-negative, got {self.r_bad}")
        if self.n_good < 0 or self.N < 2:
            raise ValueError("need n_good >= 0 and at least 2 copies in total")
        if self.rho0.dim != 4:
            raise ValueError("rho0 must be a two-qubit state")

    @property
    def N(self) -> int:
        return self.n_good + self.r_bad


EnsembleModel = Union[IID, CounterexampleBlocks, MixedGoodBad]


def pair_class(model: EnsembleModel, i, j):
    """Ordered-pair class codes; works elementwise on integer arrays."""
    i, j = np.asarray(i), np.asarray(j)
    g = model.n_good
    bad_i, bad_j = i >= g, j >= g
    same_block = bad_i & bad_j & ((i - g) // 2 == (j - g) // 2)
    return np.select(
        [~bad_i & ~bad_j, ~bad_i & bad_j, bad_i & ~bad_j, same_block],
        [GOOD_GOOD, GOOD_BAD, BAD_GOOD, PARTNERS],
        default=BAD_BAD,
    )


def pair_reduced_state(model: EnsembleModel, i: int, j: int) -> DensityMatrix:
    """Exact two-copy reduced state of copies ``i`` and ``j``."""
    N = model.N
    if i == j:
        raise ValueError("pair_reduced_state needs two distinct copies")
    if not (0 <= i < N and 0 <= j < N):
        raise IndexError(f"copy index out of range for N={N}: ({i}, {j})")
    labels_i, labels_j = (f"A{i}", f"B{i}"), (f"A{j}", f"B{j}")
    cls = int(pair_class(model, i, j))
    if cls == PARTNERS:
        lo, hi = min(i, j), max(i, j)
        psi = counterexample_state().projector().relabel((f"A{lo}", f"B{lo}", f"A{hi}", f"B{hi}"))
        return reorder_registers(psi, labels_i + labels_j)

    def single(k, labels):
        if k < model.n_good:
            return model.rho0.relabel(labels)
        # one copy of a block: the other copy traced out leaves I/4
        return maximally_mixed(labels)

    return tensor(single(i, labels_i), single(j, labels_j))


def class_counts(model: EnsembleModel) -> dict[int, int]:
    """Number of ordered pairs ``(i, j), i != j`` in each class."""
    g, r = model.n_good, model.r_bad
    counts = {
        GOOD_GOOD: g * (g - 1),
        GOOD_BAD: g * r,
        BAD_GOOD: r * g,
        PARTNERS: r,
        BAD_BAD: r * (r - 2) if r else 0,
    }
    return {k: v for k, v in counts.items() if v}


def _representative(model: EnsembleModel, cls: int) -> tuple[int, int]:
    g = model.n_good
    return {
        GOOD_GOOD: (0, 1),
        GOOD_BAD: (0, g),
        BAD_GOOD: (g, 0),
        PARTNERS: (g, g + 1),
        BAD_BAD: (g, g + 2),
    }[cls]


def class_states(model: EnsembleModel) -> dict[int, DensityMatrix]:
    return {c: pair_reduced_state(model, *_representative(model, c)) for c in class_counts(model)}


def analytic_mean(model: EnsembleModel, observable_label: str = "V1") -> float:
    """Exact mean of V over a uniformly random ordered pair of distinct copies."""
    obs = build_observable(observable_label)
    N = model.N
    total = 0.0
    for cls, count in class_counts(model).items():
        state = pair_reduced_state(model, *_representative(model, cls))
        total += count * expectation(obs, state)
    return total / (N * (N - 1))


# --- permutations ----------------------------------------------------------


def random_permutation(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform permutation of ``range(n)`` by Fisher-Yates.

    Consumes ``n - 1`` uniforms, the same stream the batched simulator uses
    for one run.
    """
    if n < 1:
        raise ValueError("n must be positive")
    u = rng.random(n - 1)
    perm = np.arange(n)
    for i in range(n - 1, 0, -1):
        j = min(int(u[i - 1] * (i + 1)), i)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


# --- simulation ------------------------------------------------------------


@dataclass(frozen=True)
class ProtocolConfig:
    observable_label: str = "V1"
    runs: int = 100_000
    pairing: str = "single_pair_per_run"
    seed: int = 0
    shards: int = 1

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.pairing not in ("single_pair_per_run", "disjoint_matching"):
            raise ValueError(f"unknown pairing {self.pairing!r}")
        if self.shards < 1:
            raise ValueError("shards must be at least 1")
        if self.observable_label.upper() not in ("V1", "V2"):
            raise ValueError(f"unknown observable {self.observable_label!r}")


@dataclass
class MeasurementSummary:
    V_m: float
    outcome_counts: dict[float, int]
    std_error: float
    total_pairs_measured: int
    # False when matched pairs within a run share an adversarial block, so
    # their outcomes are correlated and std_error understates the spread
    independent_pairs: bool = True
    class_counts: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_counts(cls, counts: dict[float, int], **extra) -> "MeasurementSummary":
        counts = {float(v): int(counts.get(v, 0)) for v in OUTCOMES}
        n = sum(counts.values())
        if n == 0:
            return cls(float("nan"), counts, math.inf, 0, **extra)
        mean = sum(v * c for v, c in counts.items()) / n
        if n < 2:
            return cls(mean, counts, math.inf, n, **extra)
        var = sum(c * (v - mean) ** 2 for v, c in counts.items()) / n
        return cls(mean, counts, math.sqrt(var / n), n, **extra)

    def to_dict(self) -> dict:
        return {
            "V_m": self.V_m,
            "std_error": self.std_error if math.isfinite(self.std_error) else None,
            "total_pairs_measured": self.total_pairs_measured,
            "outcome_counts": {f"{v:g}": c for v, c in self.outcome_counts.items()},
            "independent_pairs": self.independent_pairs,
            "class_counts": dict(self.class_counts),
        }


def _class_cdfs(model: EnsembleModel, label: str) -> dict[int, np.ndarray]:
    obs = build_observable(label)
    out = {}
    for cls, state in class_states(model).items():
        cdf = np.cumsum(born_probabilities(obs, state))
        cdf[-1] = 1.0
        out[cls] = np.ascontiguousarray(cdf)
    return out


def _crosses_blocks(model: EnsembleModel, pairs: np.ndarray) -> bool:
    """True if some matched pair holds a bad copy whose block partner sits in another pair."""
    if model.r_bad == 0 or pairs.shape[1] < 2:
        return False
    cls = pair_class(model, pairs[..., 0], pairs[..., 1])
    return bool(np.any((cls == GOOD_BAD) | (cls == BAD_GOOD) | (cls == BAD_BAD)))


def _run_shard(model: EnsembleModel, cfg: ProtocolConfig, runs: int, seed: int):
    rng = np.random.default_rng(seed)
    cdfs = _class_cdfs(model, cfg.observable_label)
    N = model.N
    n_pairs = 1 if cfg.pairing == "single_pair_per_run" else N // 2
    counts = np.zeros(len(OUTCOMES), dtype=np.int64)
    per_class = np.zeros(len(CLASS_NAMES), dtype=np.int64)
    crossed = False
    done = 0
    while done < runs:
        m = min(CHUNK, runs - done)
        uniforms = rng.random((m, N - 1)) if N > 1 else np.zeros((m, 0))
        pairs = _backend.permuted_pairs(N, np.ascontiguousarray(uniforms), n_pairs)
        if n_pairs > 1 and not crossed:
            crossed = _crosses_blocks(model, pairs)
        cls = pair_class(model, pairs[..., 0], pairs[..., 1]).reshape(-1)
        for c in sorted(cdfs):
            k = int(np.count_nonzero(cls == c))
            if not k:
                continue
            per_class[c] += k
            idx = _backend.inverse_cdf(cdfs[c], rng.random(k))
            counts += np.bincount(idx, minlength=len(OUTCOMES))
        done += m
    return counts, per_class, crossed


def _shard_sizes(runs: int, shards: int) -> list[int]:
    base, extra = divmod(runs, shards)
    return [base + (w < extra) for w in range(shards)]


def run_protocol(model: EnsembleModel, cfg: ProtocolConfig) -> MeasurementSummary:
    """Monte Carlo estimate of V_m.

    Every run draws a fresh uniform permutation of all N copies and measures
    either the first two permuted copies or all consecutive permuted pairs.
    Shard ``w`` uses the generator seeded with ``seed ^ w``; shard results
    are merged by summing counts.
    """
    if cfg.pairing == "disjoint_matching" and model.N < 2:
        raise ValueError("disjoint_matching needs N >= 2")
    sizes = [s for s in _shard_sizes(cfg.runs, cfg.shards)]
    jobs = [(model, cfg, s, cfg.seed ^ w) for w, s in enumerate(sizes) if s]
    if len(jobs) == 1:
        results = [_run_shard(*jobs[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(jobs)) as ex:
            results = list(ex.map(lambda a: _run_shard(*a), jobs))
    counts = sum(r[0] for r in results)
    per_class = sum(r[1] for r in results)
    crossed = any(r[2] for r in results)
    if crossed:
        log.warning(
            "disjoint_matching on a model with adversarial blocks: pairs within a run are "
            "sampled from exact marginals but their joint correlations are not reproduced"
        )
    return MeasurementSummary.from_counts(
        dict(zip(OUTCOMES, counts.tolist())),
        independent_pairs=not crossed,
        class_counts={CLASS_NAMES[c]: int(k) for c, k in enumerate(per_class) if k},
    )


def run_uniform_pairs(model: EnsembleModel, cfg: ProtocolConfig) -> MeasurementSummary:
    """Reference sampler: one uniformly random unordered pair per run, no permutation.

    Exists to check that permuting and taking the first two copies is
    distributionally the same as drawing a pair directly.
    """
    rng = np.random.default_rng(cfg.seed)
    obs = build_observable(cfg.observable_label)
    states = class_states(model)
    counts = dict.fromkeys(OUTCOMES, 0)
    probs_by_class = {c: born_probabilities(obs, s) for c, s in states.items()}
    for _ in range(cfg.runs):
        i, j = rng.choice(model.N, size=2, replace=False)
        p = probs_by_class[int(pair_class(model, i, j))]
        counts[OUTCOMES[rng.choice(3, p=p)]] += 1
    return MeasurementSummary.from_counts(counts)


# --- configuration ---------------------------------------------------------


def state_from_spec(spec) -> DensityMatrix:
    """Named state (``singlet``, ``werner:p``, ``schmidt:theta``, ``mixed``) or [re, im] matrix."""
    from .qcore import matrix_from_json, schmidt, singlet, werner

    if isinstance(spec, str):
        name, _, arg = spec.partition(":")
        name = name.strip().lower()
        if name == "singlet" and not arg:
            return singlet().projector()
        if name in ("mixed", "maximally_mixed") and not arg:
            return maximally_mixed(("A1", "B1"))
        if name == "werner" and arg:
            return werner(float(arg))
        if name == "schmidt" and arg:
            return schmidt(float(arg)).projector()
        raise ValueError(f"unknown named state {spec!r}")
    return DensityMatrix(matrix_from_json(spec), ("A1", "B1"))


def model_from_config(cfg: dict) -> EnsembleModel:
    """Build a model from the ``model`` block of a simulate config."""
    kind = cfg.get("kind")
    if kind == "iid":
        return IID(state_from_spec(cfg["rho0"]), int(cfg["N"]))
    if kind == "counterexample":
        N = int(cfg["N"])
        if N % 2:
            raise ValueError(f"counterexample model needs even N, got {N}")
        return CounterexampleBlocks(N // 2)
    if kind == "mixed":
        N, r = int(cfg["N"]), int(cfg.get("r_bad", 0))
        return MixedGoodBad(state_from_spec(cfg["rho0"]), N - r, r)
    raise ValueError(f"unknown model kind {kind!r}")
