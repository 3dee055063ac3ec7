"""Shifted-exponential straggler model and expected finish times.

A worker with task length s finishes at time T with
Pr(T <= t) = 1 - exp(-mu (t/s - 1)) for t >= s: a deterministic offset
proportional to the task length plus an exponential tail with straggling
parameter mu (smaller mu = heavier straggling).

Expected recovery times are computed three ways, which must agree:
exact closed forms using harmonic numbers (the k-th order statistic of P
unit exponentials has mean H_P - H_{P-K}; the commonly quoted
log(P/(P-K)) is its large-P approximation), numeric integration of
E[T] = int (1 - F(t)) dt for the mixed-group cases, and Monte Carlo.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .params import CodeParams
from .strategies import TaskPlan, finish_times

DEFAULT_MU = 5.0
_MC_CHUNK = 1 << 16  # fixed chunk size keeps reductions thread-count independent


@dataclass(frozen=True)
class DelayModel:
    """Straggling parameter of the shifted-exponential service law."""

    mu: float = DEFAULT_MU

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")


@dataclass(frozen=True)
class SimulationReport:
    strategy_id: str
    analytic_expected: float | None
    mc_mean: float
    mc_stderr: float
    trials: int
    seed: int


@lru_cache(maxsize=None)
def harmonic(n: int) -> float:
    """Exact harmonic number H_n = sum_{i<=n} 1/i, H_0 = 0."""
    if n < 0:
        raise ValueError(f"harmonic number needs n >= 0, got {n}")
    return float(np.sum(1.0 / np.arange(1, n + 1))) if n else 0.0


def sample_time(s: float, model: DelayModel, u) -> np.ndarray | float:
    """Inverse-CDF sample(s): t = s (1 - ln(1-u)/mu) for uniform u."""
    return s * (1.0 - np.log1p(-np.asarray(u, dtype=float)) / model.mu)


def expected_kth_order(P: int, K: int, s: float, model: DelayModel) -> float:
    """Mean of the K-th order statistic of P iid length-s task times."""
    if not 1 <= K <= P:
        raise ValueError(f"need 1 <= K <= P, got K={K}, P={P}")
    return s * (1.0 + (harmonic(P) - harmonic(P - K)) / model.mu)


def expected_time_short_dot(params: CodeParams, model: DelayModel) -> float:
    """Closed form: K-th order statistic of P tasks of length s."""
    return expected_kth_order(params.P, params.K, params.s, model)


def expected_time_mds(params: CodeParams, model: DelayModel) -> float:
    """Closed form: M-th order statistic of P full-length tasks."""
    return expected_kth_order(params.P, params.M, float(params.N), model)


def uncoded_closed_form(P: int, M: int, N: float, model: DelayModel) -> float:
    """(MN/P)(1 + H_P/mu); exact when M divides P, else the smooth
    continuation used as the integer-effect baseline."""
    return (M * N / P) * (1.0 + harmonic(P) / model.mu)


def repetition_closed_form(P: int, M: int, N: float, model: DelayModel) -> float:
    """N(1 + M H_M/(P mu)): max of M minima, exact when M divides P."""
    return N * (1.0 + M * harmonic(M) / (P * model.mu))


@dataclass(frozen=True)
class CdfFactor:
    """One group factor (1 - exp(-mu*rate*(t/shift - 1)))^count, t >= shift."""

    count: int
    shift: float
    rate: float = 1.0


def _mixed_group_factors(P: int, M: int, N: float, per_worker: bool) -> list[CdfFactor]:
    c1, c2 = -(-P // M), P // M
    m1 = P - M * c2
    m2 = M - m1
    if per_worker:  # uncoded: every worker is its own exponential
        return [CdfFactor(m1 * c1, N / c1), CdfFactor(m2 * c2, N / c2)]
    # repetition: min over a row's replicas scales the rate
    return [CdfFactor(m1, N, float(c1)), CdfFactor(m2, N, float(c2))]


def expected_time_uncoded(params: CodeParams, model: DelayModel) -> float:
    """Wait-for-all expectation; closed form when M | P, else the
    two-group integral with integer effects."""
    P, M, N = params.P, params.M, float(params.N)
    if P % M == 0:
        return uncoded_closed_form(P, M, N, model)
    return expected_time_numeric(_mixed_group_factors(P, M, N, per_worker=True), model)


def expected_time_repetition(params: CodeParams, model: DelayModel) -> float:
    """Row-repetition expectation; closed form when M | P, else the
    two-group integral with integer effects."""
    P, M, N = params.P, params.M, float(params.N)
    if P % M == 0:
        return repetition_closed_form(P, M, N, model)
    return expected_time_numeric(_mixed_group_factors(P, M, N, per_worker=False), model)


def expected_time_numeric(factors, model: DelayModel, rel_tol: float = 1e-6) -> float:
    """E[T] = integral of the survival function 1 - prod of group CDFs.

    The integrand is 1 on [0, max shift]; beyond a cap where the
    union-bound tail drops below 1e-12 of the offset, the remaining mass
    is added analytically.
    """
    factors = list(factors)
    if not factors:
        raise ValueError("need at least one CDF factor")
    for f in factors:
        if f.count < 0 or f.shift <= 0 or f.rate <= 0:
            raise ValueError(f"invalid factor {f}")
    factors = [f for f in factors if f.count > 0]
    mu = model.mu
    t0 = max(f.shift for f in factors)

    def survival(t: float) -> float:
        acc = 1.0
        for f in factors:
            acc *= (1.0 - math.exp(-mu * f.rate * (t / f.shift - 1.0))) ** f.count
        return 1.0 - acc

    def tail_bound(t: float) -> float:
        # 1 - prod(1-q_g)^{c_g} <= sum c_g q_g, integrated analytically
        return sum(
            f.count * f.shift / (mu * f.rate) * math.exp(-mu * f.rate * (t / f.shift - 1.0))
            for f in factors
        )

    t_cap = t0
    tol = 1e-13 * t0
    for f in factors:
        sh = f.shift
        arg = f.count * sh / (mu * f.rate * (tol / len(factors)))
        t_cap = max(t_cap, sh * (1.0 + math.log(max(arg, 1.0)) / (mu * f.rate)))
    value, _ = quad(
        survival, t0, t_cap, epsabs=rel_tol * t0 * 1e-3, epsrel=rel_tol * 1e-2, limit=500
    )
    return t0 + value + tail_bound(t_cap)


def optimize_k(P: int, M: int, N: float, model: DelayModel) -> tuple[int, float]:
    """Exhaustive minimizer of the short-dot expectation over K in M..P.

    K = P is the wait-for-all case (H_{P-K} = H_0 = 0 handles it without
    the log-form singularity).  Ties resolve to the smallest K.
    """
    if not 1 <= M <= P:
        raise ValueError(f"need 1 <= M <= P, got M={M}, P={P}")
    ks = np.arange(M, P + 1)
    h = np.array([harmonic(P) - harmonic(P - k) for k in ks])
    s = (N / P) * (P - ks + M)
    expect = s * (1.0 + h / model.mu)
    i = int(np.argmin(expect))  # argmin returns the first (smallest K) tie
    return int(ks[i]), float(expect[i])


# --- Monte Carlo -----------------------------------------------------------
#
# Uniform draws come from a counter-based SplitMix64 stream: draw number
# d of the run is fmix64(key + (d+1)*GOLDEN).  Trial t consumes draws
# t*P..(t+1)*P-1, so the sample for (trial, worker) is a pure function of
# (seed, trial, worker) and results cannot depend on chunking or thread
# count.

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _uniform_stream(seed: int, start: int, count: int) -> np.ndarray:
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    z ^= z >> np.uint64(31)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def simulation_threads() -> int:
    """Thread cap for Monte Carlo, from SHORTDOT_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("SHORTDOT_THREADS", "1")))
    except ValueError:
        return 1


def monte_carlo(
    plan: TaskPlan,
    model: DelayModel,
    trials: int,
    seed: int,
    analytic_expected: float | None = None,
) -> SimulationReport:
    """Mean and standard error of the plan's finish time over trials.

    Bitwise deterministic for a fixed seed regardless of thread count:
    chunk boundaries are fixed, each chunk's partial sums are computed
    independently, and chunks are reduced in index order.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    P = plan.P
    lengths = plan.task_lengths
    mu = model.mu

    bounds = [(a, min(a + _MC_CHUNK, trials)) for a in range(0, trials, _MC_CHUNK)]

    def run_chunk(bound: tuple[int, int]) -> tuple[float, float]:
        a, b = bound
        u = _uniform_stream(seed, a * P, (b - a) * P).reshape(b - a, P)
        t = lengths[None, :] * (1.0 - np.log1p(-u) / mu)
        ft = finish_times(plan, t)
        return float(np.sum(ft)), float(np.sum(ft * ft))

    n_threads = simulation_threads()
    if n_threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            partials = list(pool.map(run_chunk, bounds))
    else:
        partials = [run_chunk(b) for b in bounds]

    total = 0.0
    total_sq = 0.0
    for psum, psq in partials:  # fixed reduction order
        total += psum
        total_sq += psq
    mean = total / trials
    if trials > 1:
        var = max(0.0, (total_sq - trials * mean * mean) / (trials - 1))
        stderr = math.sqrt(var / trials)
    else:
        stderr = 0.0
    return SimulationReport(
        strategy_id=plan.strategy_id,
        analytic_expected=analytic_expected,
        mc_mean=mean,
        mc_stderr=stderr,
        trials=trials,
        seed=seed,
    )


# --- Theorem-4 scaling regime ----------------------------------------------


@dataclass(frozen=True)
class RegimeRow:
    """Scaled expected times (E[T]/N) at M ~ P/ln P, K = P - M/2."""

    P: int
    M: int
    K: int
    short_dot: float
    mds: float
    uncoded: float
    repetition: float

    @property
    def ratio(self) -> float:
        """min(competitors) / short-dot: the speed-up factor."""
        return min(self.mds, self.uncoded, self.repetition) / self.short_dot


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def theorem4_regime(P_values, model: DelayModel) -> list[RegimeRow]:
    """Closed-form scaled times at M = round(P/ln P), K = P - round(M/2).

    Rounding is half-up (recorded per row via the M and K fields).  The
    competitors' scaled times stay bounded away from 0 while short-dot's
    decays, so the ratio diverges with P.
    """
    rows = []
    for P in P_values:
        P = int(P)
        if P < 2:
            raise ValueError("theorem-4 regime needs P >= 2")
        M = max(1, _round_half_up(P / math.log(P)))
        K = P - _round_half_up(M / 2)
        mu = model.mu
        sd = ((P - K + M) / P) * (1.0 + (harmonic(P) - harmonic(P - K)) / mu)
        mds = 1.0 + (harmonic(P) - harmonic(P - M)) / mu
        unc = uncoded_closed_form(P, M, 1.0, model)
        rep = repetition_closed_form(P, M, 1.0, model)
        rows.append(
            RegimeRow(P=P, M=M, K=K, short_dot=sd, mds=mds, uncoded=unc, repetition=rep)
        )
    return rows
