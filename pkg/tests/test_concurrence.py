import math

import numpy as np
import pytest

from directent.errors import InvalidStateError
from directent.qcore import (
    DensityMatrix,
    basis_ket,
    concurrence,
    counterexample_state,
    local_unitary_conjugate,
    maximally_mixed,
    partial_trace,
    pure_concurrence,
    random_mixed,
    random_pure,
    random_unitary,
    schmidt,
    singlet,
    werner,
)


def test_singlet():
    assert concurrence(singlet()) == pytest.approx(1.0, abs=1e-12)
    assert concurrence(singlet().projector()) == pytest.approx(1.0, abs=1e-12)


def test_product_state():
    assert concurrence(basis_ket("00", ["A1", "B1"]).projector()) == 0.0
    assert concurrence(maximally_mixed(("A1", "B1"))) == 0.0


@pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
def test_werner_closed_form(p, oracle):
    c = concurrence(werner(p))
    assert abs(c - max(0.0, (3 * p - 1) / 2)) <= 1e-9
    if 0 < p < 1:
        assert abs(c - oracle.wootters(werner(p).matrix)) <= 1e-9


def test_werner_half():
    assert concurrence(werner(0.5)) == pytest.approx(0.25, abs=1e-12)


def test_schmidt_family(oracle):
    assert concurrence(schmidt(math.pi / 4).projector()) == pytest.approx(1.0, abs=1e-12)
    assert concurrence(schmidt(0.0).projector()) == pytest.approx(0.0, abs=1e-12)
    c = concurrence(schmidt(math.pi / 8).projector())
    assert c == pytest.approx(math.sin(math.pi / 4), abs=1e-12)
    # the general-eigensolver route carries sqrt noise on rank-1 input
    assert c == pytest.approx(oracle.wootters(schmidt(math.pi / 8).projector().matrix), abs=1e-6)


def test_counterexample_marginals_unentangled():
    psi = counterexample_state()
    for keep in (["A1", "B1"], ["A2", "B2"]):
        assert concurrence(partial_trace(psi, keep)) <= 1e-12


def test_matches_general_eigensolver_on_full_rank(rng, oracle):
    for _ in range(200):
        rho = random_mixed(rng, 4)
        assert abs(concurrence(rho) - oracle.wootters(rho.matrix)) <= 1e-9


def test_local_unitary_invariance(rng):
    for i in range(500):
        rho = random_mixed(rng, 1 + i % 4) if i % 5 else random_pure(rng).projector()
        moved = local_unitary_conjugate(rho, random_unitary(rng, 2), random_unitary(rng, 2))
        assert abs(concurrence(moved) - concurrence(rho)) <= 1e-9


def test_pure_state_formula(rng):
    for _ in range(500):
        psi = random_pure(rng)
        assert abs(concurrence(psi.projector()) - pure_concurrence(psi)) <= 1e-9
        assert abs(concurrence(psi) - pure_concurrence(psi)) <= 1e-12


def test_range(rng):
    vals = [concurrence(random_mixed(rng, int(rng.integers(1, 5)))) for _ in range(200)]
    assert min(vals) >= 0.0 and max(vals) <= 1.0


def test_two_qubits_only():
    with pytest.raises(ValueError):
        concurrence(counterexample_state())


def test_rejects_non_psd():
    bad = object.__new__(DensityMatrix)
    object.__setattr__(bad, "matrix", np.diag([0.6, 0.6, -0.2, 0.0]).astype(complex))
    object.__setattr__(bad, "labels", ("A1", "B1"))
    with pytest.raises(InvalidStateError):
        concurrence(bad)
