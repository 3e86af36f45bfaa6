"""Shared fixtures and independent oracles.

The oracles here use numpy's LAPACK-backed routines and closed forms, never
the package's own Jacobi or concurrence code, so they can check it.
"""

import numpy as np
import pytest

SY = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SY, SY)


def wootters_oracle(rho: np.ndarray) -> float:
    """Concurrence from the non-Hermitian product rho @ rho~ (general eigensolver)."""
    rho_t = YY @ rho.conj() @ YY
    ev = np.linalg.eigvals(rho @ rho_t)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0, None)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def swap_identity_v1(rho: np.ndarray) -> float:
    """<V1> on rho (x) rho from -2 Tr(rho_A^2) + 2 Tr(rho^2).

    V1 = -2 SWAP_A + 2 SWAP_A SWAP_B, and Tr(SWAP (X (x) X)) = Tr(X^2).
    """
    rho_a = np.einsum("ajbj->ab", rho.reshape(2, 2, 2, 2))
    return float(-2 * np.trace(rho_a @ rho_a).real + 2 * np.trace(rho @ rho).real)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def oracle():
    return type("Oracle", (), {"wootters": staticmethod(wootters_oracle),
                               "swap_v1": staticmethod(swap_identity_v1)})


# --- acceptance reporting: one line per criterion --------------------------

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        elapsed = dict(item.user_properties).get("elapsed", rep.duration)
        _criteria.append((mark.args[0], mark.args[1], rep.outcome, elapsed))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, elapsed in sorted(_criteria):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] AC{number}: {title} ({elapsed:.2f} s)")
