"""Certified concurrence lower bound and state-assignment error bound.

Given N generated copies, K discarded, n = N - K retained and r of those
allowed to be arbitrarily correlated ("bad"), a measured mean V_m of the
collective observable yields

    P_bb  = r(r-1) / n(n-1)                 both picked copies bad
    P_n   = (n-r)(n-r-1) / n(n-1)           both picked copies good
    V_b   = (5 - r/2)/(r-1) for 2 <= r <= 10, else 0
    C_min = clamp((V_m - P_bb V_b) / P_n, 0, 1)       bounds C0**2
    C_bar = ((n-r)/n) sqrt(C_min)
    E     = 3 K**4 exp(-K(r+1)/N)
"""

from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class ProtocolParams:
    N: int
    K: int
    r: int

    def __post_init__(self):
        N, K, r = self.N, self.K, self.r
        if N < 4:
            raise ValueError(f"N={N}: need N >= 4")
        if not 1 <= K <= N - 2:
            raise ValueError(f"K={K}: need 1 <= K <= N-2 = {N - 2}")
        if not 0 <= r <= N - K - 2:
            raise ValueError(f"r={r}: need 0 <= r <= n-2 = {N - K - 2}")

    @property
    def n(self) -> int:
        return self.N - self.K


@dataclass(frozen=True)
class ExponentChoice:
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name}={v} outside (0, 1]")


@dataclass(frozen=True)
class EstimateReport:
    params: ProtocolParams
    V_m: float
    P_bb: float
    P_n: float
    V_b: float
    C_min: float
    C_bar: float
    E: float
    literal: bool = False

    @property
    def log10_E(self) -> float:
        return log10_error_bound(self.params)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = {"N": self.params.N, "K": self.params.K, "n": self.params.n, "r": self.params.r}
        d["log10_E"] = self.log10_E
        return d


@dataclass(frozen=True)
class SweepPoint:
    N: int
    alpha: float
    beta: float
    K: int
    r: int
    C_bar: float
    E: float
    log10_E: float


@dataclass(frozen=True)
class ScatterPoint:
    N: int
    K: int
    r: int
    C_bar: float
    E: float
    log10_E: float


def log10_error_bound(params: ProtocolParams) -> float:
    """Exact base-10 logarithm of the error bound, free of underflow."""
    K, r, N = params.K, params.r, params.N
    return (math.log(3.0) + 4 * math.log(K) - K * (r + 1) / N) / math.log(10)


def error_bound(params: ProtocolParams) -> float:
    """3 K^4 exp(-K (r + 1) / N). An upper bound, not a probability: may exceed 1.

    Values below the smallest normal double are returned as that double,
    which is still a valid upper bound; use :func:`log10_error_bound` for
    the exact magnitude.
    """
    K, r, N = params.K, params.r, params.N
    return max(3.0 * K**4 * math.exp(-K * (r + 1) / N), sys.float_info.min)


def bad_pair_value(r: int) -> float:
    """Worst-case mean of V on two bad copies.

    r in {0, 1} gives 0: no bad pair can be drawn, so the value never enters.
    """
    if r < 0:
        raise ValueError(f"r={r} must be non-negative")
    if 2 <= r <= 10:
        return (5 - r / 2) / (r - 1)
    return 0.0


def pair_probabilities(n: int, r: int) -> tuple[float, float]:
    """(P_bb, P_n) for drawing two distinct copies out of n with r bad."""
    if n < 2 or not 0 <= r <= n:
        raise ValueError(f"need n >= 2 and 0 <= r <= n, got n={n}, r={r}")
    denom = n * (n - 1)
    return r * (r - 1) / denom, (n - r) * (n - r - 1) / denom


def concurrence_lower_bound(V_m: float, params: ProtocolParams, *, literal: bool = False) -> EstimateReport:
    """Turn a measured mean into a certified bound on the average concurrence.

    With ``literal=True`` the average-concurrence step multiplies C_min
    itself instead of its square root; that variant does not approach
    sqrt(V_m) for large N and is kept only for comparison.
    """
    if not -4.0 <= V_m <= 4.0:
        raise ValueError(f"V_m={V_m} outside [-4, 4]")
    n, r = params.n, params.r
    P_bb, P_n = pair_probabilities(n, r)
    V_b = bad_pair_value(r)
    C_min = min(max((V_m - P_bb * V_b) / P_n, 0.0), 1.0)
    good_fraction = (n - r) / n
    C_bar = good_fraction * (C_min if literal else math.sqrt(C_min))
    return EstimateReport(params, V_m, P_bb, P_n, V_b, C_min, C_bar, error_bound(params), literal)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def params_from_exponents(N: int, choice: ExponentChoice) -> ProtocolParams:
    """K = round(N^beta), r = round((N-K)^alpha), both clamped into range."""
    if N < 4:
        raise ValueError(f"N={N}: need N >= 4")
    K = min(max(_round_half_up(N**choice.beta), 1), N - 2)
    n = N - K
    r = min(max(_round_half_up(n**choice.alpha), 0), n - 2)
    return ProtocolParams(N, K, r)


def sweep_fig1(choices: Sequence[ExponentChoice], V_m: float, N_grid: Iterable[int]) -> dict[ExponentChoice, list[SweepPoint]]:
    """E and C_bar along N for each exponent choice."""
    grid = list(N_grid)
    out: dict[ExponentChoice, list[SweepPoint]] = {}
    for choice in choices:
        rows = []
        for N in grid:
            p = params_from_exponents(N, choice)
            rep = concurrence_lower_bound(V_m, p)
            rows.append(SweepPoint(N, choice.alpha, choice.beta, p.K, p.r, rep.C_bar, rep.E, log10_error_bound(p)))
        out[choice] = rows
    return out


def scatter_all(N: int, V_m: float, K_range: range | None = None) -> list[ScatterPoint]:
    """One point per valid (K, r): 1 <= K <= N-2, 0 <= r <= N-K-2.

    ``K_range`` restricts the scan so callers can split it across workers;
    concatenating the pieces in any order gives the same set of points.
    """
    if N < 4:
        raise ValueError(f"N={N}: need N >= 4")
    ks = range(1, N - 1) if K_range is None else K_range
    pts = []
    for K in ks:
        for r in range(0, N - K - 1):
            p = ProtocolParams(N, K, r)
            rep = concurrence_lower_bound(V_m, p)
            pts.append(ScatterPoint(N, K, r, rep.C_bar, rep.E, log10_error_bound(p)))
    return pts


@dataclass(frozen=True)
class FrontierResult:
    best: ScatterPoint | None
    frontier: list[ScatterPoint]

    @property
    def feasible(self) -> bool:
        return self.best is not None


def _rank_key(p: ScatterPoint):
    return (-p.C_bar, p.E, p.r, p.K)


def pareto_frontier(points: Sequence[ScatterPoint], E_max: float = math.inf) -> FrontierResult:
    """Best feasible point and the non-dominated set among points with E <= E_max.

    The best point maximizes C_bar, then prefers smaller E, smaller r, smaller K.
    The frontier is sorted by decreasing C_bar (and so decreasing E).
    """
    if not points:
        raise ValueError("pareto_frontier needs at least one point")
    feasible = sorted((p for p in points if p.E <= E_max), key=_rank_key)
    if not feasible:
        return FrontierResult(None, [])
    frontier: list[ScatterPoint] = []
    best_E = math.inf
    for p in feasible:
        # sorted by C_bar desc then E asc: a point survives iff its E beats all higher-C_bar ones
        if p.E < best_E and (not frontier or p.C_bar < frontier[-1].C_bar):
            frontier.append(p)
            best_E = p.E
    return FrontierResult(feasible[0], frontier)
