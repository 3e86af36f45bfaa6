"""Bound-validity suite: C(rho1) C(rho2) >= Tr((rho1 (x) rho2) V) on product inputs.

The bound holds for independent copies and must fail on the adversarial
four-qubit state, where the two-copy marginals are unentangled but V = 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qcore import (
    DensityMatrix,
    build_observable,
    concurrence,
    counterexample_state,
    expectation,
    local_unitary_conjugate,
    matrix_to_json,
    partial_trace,
    random_mixed,
    random_pure,
    random_unitary,
    schmidt,
    tensor,
    werner,
)

BOUND_SLACK = 1e-9
KINDS = ("pure_haar", "mixed_rank_k", "werner", "schmidt")


def random_two_qubit_state(rng: np.random.Generator, labels=("A1", "B1")) -> DensityMatrix:
    """Draw from a mixture of fixture families, locally rotated where they are not already Haar."""
    kind = KINDS[rng.integers(len(KINDS))]
    if kind == "pure_haar":
        return random_pure(rng, labels).projector()
    if kind == "mixed_rank_k":
        return random_mixed(rng, int(rng.integers(1, 5)), labels)
    if kind == "werner":
        rho = werner(float(rng.random()), labels)
    else:
        rho = schmidt(float(rng.random() * math.pi / 4), labels).projector()
    return local_unitary_conjugate(rho, random_unitary(rng, 2), random_unitary(rng, 2))


@dataclass
class BoundViolation:
    observable: str
    lhs: float
    rhs: float
    rho1: list
    rho2: list


@dataclass
class BoundCheckReport:
    samples: int
    seed: int
    violations: list[BoundViolation] = field(default_factory=list)
    max_gap: float = -math.inf
    counterexample_lhs: float = math.nan
    counterexample_rhs: dict[str, float] = field(default_factory=dict)

    @property
    def product_phase_passed(self) -> bool:
        return not self.violations

    @property
    def counterexample_violates(self) -> bool:
        return all(v - self.counterexample_lhs > BOUND_SLACK for v in self.counterexample_rhs.values())

    @property
    def passed(self) -> bool:
        return self.product_phase_passed and self.counterexample_violates

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "product_phase": {
                "passed": self.product_phase_passed,
                "violations": [v.__dict__ for v in self.violations],
                "max_rhs_minus_lhs": self.max_gap,
            },
            "counterexample_phase": {
                "violates_bound": self.counterexample_violates,
                "lhs": self.counterexample_lhs,
                "rhs": self.counterexample_rhs,
            },
            "passed": self.passed,
        }


def check_product_bound(samples: int, seed: int = 0, *, identical_fraction: float = 0.25) -> BoundCheckReport:
    """Run both phases.

    A fraction of draws uses two identical copies, where pure inputs make
    the bound tight.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    obs = {k: build_observable(k) for k in ("V1", "V2")}
    report = BoundCheckReport(samples, seed)
    for _ in range(samples):
        rho1 = random_two_qubit_state(rng, ("A1", "B1"))
        if rng.random() < identical_fraction:
            rho2 = rho1.relabel(("A2", "B2"))
        else:
            rho2 = random_two_qubit_state(rng, ("A2", "B2"))
        lhs = concurrence(rho1) * concurrence(rho2)
        pair = tensor(rho1, rho2)
        for name, o in obs.items():
            rhs = expectation(o, pair)
            report.max_gap = max(report.max_gap, rhs - lhs)
            if rhs - lhs > BOUND_SLACK:
                report.violations.append(
                    BoundViolation(name, lhs, rhs, matrix_to_json(rho1.matrix), matrix_to_json(rho2.matrix))
                )

    psi = counterexample_state()
    c1 = concurrence(partial_trace(psi, ["A1", "B1"]))
    c2 = concurrence(partial_trace(psi, ["A2", "B2"]))
    report.counterexample_lhs = c1 * c2
    report.counterexample_rhs = {name: expectation(o, psi.projector()) for name, o in obs.items()}
    return report
