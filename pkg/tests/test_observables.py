import numpy as np
import pytest
from scipy import stats

from directent.errors import NumericalIntegrityError
from directent.qcore import (
    COPY_MAJOR,
    DensityMatrix,
    born_probabilities,
    build_observable,
    counterexample_state,
    exchange_projectors,
    expectation,
    maximally_mixed,
    random_mixed,
    sample_outcome,
    sample_outcomes,
    schmidt,
    singlet,
    tensor,
)

EYE16 = np.eye(16)


def test_exchange_projector_algebra():
    pm, pp = exchange_projectors()
    assert np.max(np.abs(pm + pp - np.eye(4))) <= 1e-12
    assert np.max(np.abs(pm @ pm - pm)) <= 1e-12
    assert np.max(np.abs(pp @ pp - pp)) <= 1e-12
    assert np.max(np.abs(pm @ pp)) <= 1e-12
    assert np.linalg.matrix_rank(pm) == 1
    assert np.isclose(np.trace(pp).real, 3)


def test_singlet_is_antisymmetric():
    pm, pp = exchange_projectors()
    s = singlet().amplitudes
    np.testing.assert_allclose(pm @ s, s, atol=1e-15)
    np.testing.assert_allclose(pp @ s, 0, atol=1e-15)


@pytest.mark.parametrize("label", ["V1", "V2"])
def test_observable_spectrum(label):
    obs = build_observable(label)
    m = obs.matrix
    assert np.max(np.abs(m - m.conj().T)) <= 1e-12
    assert obs.outcomes == (-4.0, 0.0, 4.0)
    np.testing.assert_allclose(np.linalg.eigvalsh(m)[[0, -1]], [-4, 4], atol=1e-12)
    assert set(np.round(np.linalg.eigvalsh(m), 9)) <= {-4.0, 0.0, 4.0}
    projs = [p for _, p in obs.spectrum]
    assert np.max(np.abs(sum(projs) - EYE16)) <= 1e-12
    for i, p in enumerate(projs):
        assert np.max(np.abs(p @ p - p)) <= 1e-12
        for q in projs[i + 1:]:
            assert np.max(np.abs(p @ q)) <= 1e-12
    assert np.max(np.abs(sum(v * p for v, p in obs.spectrum) - m)) <= 1e-12


def test_v1_projector_ranks():
    obs = build_observable("V1")
    ranks = {v: int(round(np.trace(p).real)) for v, p in obs.spectrum}
    assert ranks == {4.0: 1, -4.0: 3, 0.0: 12}


def test_v1_and_v2_related_by_lab_exchange():
    # swapping the roles of A and B in each copy maps V1 onto V2
    v1 = build_observable("V1").matrix.reshape([2] * 8)
    v1_swapped = v1.transpose(1, 0, 3, 2, 5, 4, 7, 6).reshape(16, 16)
    np.testing.assert_allclose(v1_swapped, build_observable("V2").matrix, atol=1e-15)


def test_unknown_observable():
    with pytest.raises(ValueError):
        build_observable("V3")


def test_counterexample_expectations():
    psi = counterexample_state()
    for label in ("V1", "V2"):
        assert abs(expectation(build_observable(label), psi) - 4) <= 1e-12


def test_maximally_mixed_pair():
    for label in ("V1", "V2"):
        assert abs(expectation(build_observable(label), maximally_mixed(COPY_MAJOR)) + 0.5) <= 1e-12


def test_two_singlets_value_matches_swap_identity(oracle):
    s = singlet().projector()
    pair = tensor(s, s.relabel(("A2", "B2")))
    assert abs(oracle.swap_v1(s.matrix) - 1.0) <= 1e-12
    assert abs(expectation(build_observable("V1"), pair) - 1.0) <= 1e-12


def test_swap_identity_on_random_states(rng, oracle):
    obs = build_observable("V1")
    for _ in range(50):
        rho = random_mixed(rng, int(rng.integers(1, 5)))
        pair = tensor(rho, rho.relabel(("A2", "B2")))
        assert abs(expectation(obs, pair) - oracle.swap_v1(rho.matrix)) <= 1e-12


def test_expectation_register_mismatch():
    obs = build_observable("V1")
    wrong = maximally_mixed(("A1", "A2", "B1", "B2"))
    with pytest.raises(ValueError, match="roles"):
        expectation(obs, wrong)
    with pytest.raises(ValueError, match="dimension"):
        expectation(obs, maximally_mixed(("A1", "B1")))


def test_expectation_accepts_other_copy_indices():
    pair = maximally_mixed(("A3", "B3", "A7", "B7"))
    assert abs(expectation(build_observable("V2"), pair) + 0.5) <= 1e-12


def test_born_probabilities_maximally_mixed():
    p = born_probabilities(build_observable("V1"), maximally_mixed(COPY_MAJOR))
    # outcome order -4, 0, +4; projector ranks 3, 12, 1 over 16
    np.testing.assert_allclose(p, [3 / 16, 12 / 16, 1 / 16], atol=1e-15)


def test_counterexample_always_plus_four(rng):
    draws = sample_outcomes(build_observable("V1"), counterexample_state(), rng, 1000)
    assert np.all(draws == 4.0)
    assert sample_outcome(build_observable("V2"), counterexample_state(), rng) == 4.0


def test_sampling_mean_maximally_mixed(rng):
    draws = sample_outcomes(build_observable("V1"), maximally_mixed(COPY_MAJOR), rng, 100_000)
    se = draws.std() / np.sqrt(draws.size)
    assert abs(draws.mean() + 0.5) <= 3 * se


@pytest.mark.parametrize("seed", range(5))
def test_sampling_chi_square(seed):
    g = np.random.default_rng(seed)
    rho = tensor(schmidt(0.3).projector(), random_mixed(g, 2, ("A2", "B2")))
    obs = build_observable("V2")
    p = born_probabilities(obs, rho)
    draws = sample_outcomes(obs, rho, g, 100_000)
    counts = [(draws == v).sum() for v in obs.outcomes]
    keep = p > 0
    assert stats.chisquare(np.array(counts)[keep], 100_000 * p[keep]).pvalue > 1e-4


def test_sampling_is_deterministic_given_seed():
    obs, rho = build_observable("V1"), maximally_mixed(COPY_MAJOR)
    a = sample_outcomes(obs, rho, np.random.default_rng(9), 100)
    b = sample_outcomes(obs, rho, np.random.default_rng(9), 100)
    assert np.array_equal(a, b)


def test_probability_drift_guard():
    # trace 1 within tolerance but badly non-positive along the +4 projector
    obs = build_observable("V1")
    bad = object.__new__(DensityMatrix)
    m = np.eye(16) / 16 - 0.1 * obs.projector(4.0) + 0.1 * obs.projector(-4.0) / 3
    object.__setattr__(bad, "matrix", m)
    object.__setattr__(bad, "labels", COPY_MAJOR)
    with pytest.raises(NumericalIntegrityError):
        born_probabilities(obs, bad)


def test_tiny_drift_is_renormalized():
    obs = build_observable("V1")
    fuzzy = object.__new__(DensityMatrix)
    m = np.eye(16) / 16 * (1 + 5e-10)
    object.__setattr__(fuzzy, "matrix", m)
    object.__setattr__(fuzzy, "labels", COPY_MAJOR)
    p = born_probabilities(obs, fuzzy)
    assert p.sum() == pytest.approx(1.0, abs=1e-15)
