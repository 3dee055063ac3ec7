"""Task plans for the competing parallelization strategies.

Every strategy is reduced to the same latency-relevant description: how
long each worker's dot product is, and which subsets of finished workers
allow recovery.  That is all the straggler model needs; no actual
encode/decode is performed here for the baselines.

Recovery rules:
    all            wait for every worker
    kth_overall(k) any k workers suffice
    one_per_group  one worker per recovery group (repetition)
    k_per_group(k) k workers per group (per-group MDS blocks)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import CodeParams

STRATEGY_NAMES = ("uncoded", "repetition", "mds", "short-mds", "short-dot")


@dataclass(frozen=True)
class RecoveryRule:
    kind: str  # "all" | "kth_overall" | "one_per_group" | "k_per_group"
    k: int | None = None


@dataclass(frozen=True)
class IntegerSplit:
    """m1 rows get ceil(P/M) workers each, m2 rows get floor(P/M)."""

    m1: int
    m2: int


@dataclass(frozen=True)
class TaskPlan:
    """Per-worker task lengths plus the recovery rule.

    task_lengths[i] is the dot-product length of worker i+1 (float: the
    latency model is continuous in length).  groups partitions workers
    1..P into recovery groups for the group-based rules, None otherwise.
    """

    strategy_id: str
    task_lengths: np.ndarray
    groups: tuple[frozenset[int], ...] | None
    recovery_rule: RecoveryRule

    @property
    def P(self) -> int:
        return self.task_lengths.size

    @property
    def worst_case_threshold(self) -> int:
        """Smallest K such that every K-subset of workers can recover."""
        rule = self.recovery_rule
        if rule.kind == "all":
            return self.P
        if rule.kind == "kth_overall":
            return rule.k
        sizes = [len(g) for g in self.groups]
        if rule.kind == "one_per_group":
            return self.P - min(sizes) + 1
        if rule.kind == "k_per_group":
            return self.P - min(sizes) + rule.k
        raise ValueError(f"unknown rule {rule.kind!r}")

    def same_plan(self, other: "TaskPlan") -> bool:
        """Field-by-field equality ignoring the strategy label."""
        return (
            np.array_equal(self.task_lengths, other.task_lengths)
            and self.groups == other.groups
            and self.recovery_rule == other.recovery_rule
        )


def split_m1_m2(P: int, M: int) -> IntegerSplit:
    """Unique nonnegative solution of m1+m2 = M, m1*ceil(P/M)+m2*floor(P/M) = P.

    When M divides P both column counts coincide; by convention all M
    rows are counted in m1 so one code path covers both cases.
    """
    if not 1 <= M <= P:
        raise ValueError(f"need 1 <= M <= P, got M={M}, P={P}")
    if P % M == 0:
        return IntegerSplit(m1=M, m2=0)
    m1 = P - M * (P // M)
    return IntegerSplit(m1=m1, m2=M - m1)


def _round_robin_groups(P: int, n_groups: int) -> tuple[frozenset[int], ...]:
    """Workers 1..P dealt to groups cyclically; sizes floor/ceil(P/n)."""
    groups = [[] for _ in range(n_groups)]
    for w in range(1, P + 1):
        groups[(w - 1) % n_groups].append(w)
    return tuple(frozenset(g) for g in groups)


def plan_uncoded(params: CodeParams) -> TaskPlan:
    """Divide each row among its workers, wait for all P.

    With the integer split, m1 rows span ceil(P/M) workers (task length
    N/ceil(P/M)) and m2 rows span floor(P/M) workers.
    """
    P, M, N = params.P, params.M, params.N
    split = split_m1_m2(P, M)
    c1, c2 = -(-P // M), P // M
    lengths = np.empty(P)
    n1 = split.m1 * c1
    lengths[:n1] = N / c1
    lengths[n1:] = N / c2
    groups = []
    w = 1
    for count, c in ((split.m1, c1), (split.m2, c2)):
        for _ in range(count):
            groups.append(frozenset(range(w, w + c)))
            w += c
    return TaskPlan(
        strategy_id="uncoded",
        task_lengths=lengths,
        groups=tuple(groups),
        recovery_rule=RecoveryRule("all"),
    )


def plan_repetition_block(params: CodeParams, s: int) -> TaskPlan:
    """Split each row into ceil(N/s) blocks and replicate over P workers.

    One finished worker per (row, block) group suffices.  With s = N this
    is plain row repetition (each full row repeated ~P/M times).
    """
    P, M, N = params.P, params.M, params.N
    if not 1 <= s <= N:
        raise ValueError(f"target length s={s} outside 1..{N}")
    blocks = -(-N // s)
    n_groups = M * blocks
    if n_groups > P:
        raise ValueError(
            f"{n_groups} (row, block) groups exceed P={P} workers; some block "
            "would never be computed"
        )
    block_len = [s] * (blocks - 1) + [N - s * (blocks - 1)]
    groups = _round_robin_groups(P, n_groups)
    lengths = np.empty(P)
    for g, members in enumerate(groups):
        lengths[np.asarray(sorted(members)) - 1] = block_len[g % blocks]
    return TaskPlan(
        strategy_id="repetition",
        task_lengths=lengths,
        groups=groups,
        recovery_rule=RecoveryRule("one_per_group"),
    )


def plan_mds(params: CodeParams) -> TaskPlan:
    """(P, M) MDS code over full-length rows: any M workers suffice."""
    return TaskPlan(
        strategy_id="mds",
        task_lengths=np.full(params.P, float(params.N)),
        groups=None,
        recovery_rule=RecoveryRule("kth_overall", params.M),
    )


def plan_short_mds(params: CodeParams, s: int) -> TaskPlan:
    """Block-partitioned MDS: ceil(N/s) column blocks, each coded with a
    (group size, M) MDS code over its own worker group.

    Every group needs at least M finished workers, so the group size
    floor(P/ceil(N/s)) must be >= M.
    """
    P, M, N = params.P, params.M, params.N
    if not 1 <= s <= N:
        raise ValueError(f"target length s={s} outside 1..{N}")
    n_groups = -(-N // s)
    if P // n_groups < M:
        raise ValueError(
            f"group size {P // n_groups} < M={M}: not enough workers per block"
        )
    block_len = [s] * (n_groups - 1) + [N - s * (n_groups - 1)]
    groups = _round_robin_groups(P, n_groups)
    lengths = np.empty(P)
    for g, members in enumerate(groups):
        lengths[np.asarray(sorted(members)) - 1] = block_len[g]
    return TaskPlan(
        strategy_id="short-mds",
        task_lengths=lengths,
        groups=groups,
        recovery_rule=RecoveryRule("k_per_group", M),
    )


def plan_short_dot(params: CodeParams) -> TaskPlan:
    """Sparse joint code: P tasks of length s, any K workers suffice."""
    return TaskPlan(
        strategy_id="short-dot",
        task_lengths=np.full(params.P, float(params.s)),
        groups=None,
        recovery_rule=RecoveryRule("kth_overall", params.K),
    )


def plan_by_name(name: str, params: CodeParams, s: int | None = None) -> TaskPlan:
    """Build a plan from its strategy name string."""
    if name == "uncoded":
        return plan_uncoded(params)
    if name == "repetition":
        return plan_repetition_block(params, params.N if s is None else s)
    if name == "mds":
        return plan_mds(params)
    if name == "short-mds":
        return plan_short_mds(params, params.s if s is None else s)
    if name == "short-dot":
        return plan_short_dot(params)
    raise ValueError(f"unknown strategy {name!r}; choose from {STRATEGY_NAMES}")


def _check_groups(plan: TaskPlan) -> None:
    if plan.groups is None:
        raise ValueError(f"rule {plan.recovery_rule.kind!r} requires groups")
    seen = sorted(w for g in plan.groups for w in g)
    if seen != list(range(1, plan.P + 1)):
        raise ValueError("groups must partition workers 1..P")


def finish_times(plan: TaskPlan, times: np.ndarray) -> np.ndarray:
    """Recovery time for each row of a (trials, P) matrix of worker times."""
    times = np.atleast_2d(np.asarray(times, dtype=float))
    if times.shape[1] != plan.P:
        raise ValueError(f"times must have {plan.P} columns")
    rule = plan.recovery_rule
    if rule.kind == "all":
        return times.max(axis=1)
    if rule.kind == "kth_overall":
        return np.partition(times, rule.k - 1, axis=1)[:, rule.k - 1]
    _check_groups(plan)
    per_group = []
    for members in plan.groups:
        cols = np.asarray(sorted(members)) - 1
        sub = times[:, cols]
        if rule.kind == "one_per_group":
            per_group.append(sub.min(axis=1))
        elif rule.kind == "k_per_group":
            if rule.k > cols.size:
                raise ValueError(f"group of size {cols.size} cannot supply k={rule.k}")
            per_group.append(np.partition(sub, rule.k - 1, axis=1)[:, rule.k - 1])
        else:
            raise ValueError(f"unknown rule {rule.kind!r}")
    return np.max(np.stack(per_group, axis=1), axis=1)


def finish_time(plan: TaskPlan, times) -> float:
    """Completion time of the whole computation given per-worker times."""
    return float(finish_times(plan, np.asarray(times, dtype=float)[None, :])[0])


def recoverable(plan: TaskPlan, responders) -> bool:
    """Whether the given set of finished workers permits recovery."""
    resp = set(int(r) for r in responders)
    if not resp <= set(range(1, plan.P + 1)):
        raise ValueError("responders must be worker indices in 1..P")
    rule = plan.recovery_rule
    if rule.kind == "all":
        return len(resp) == plan.P
    if rule.kind == "kth_overall":
        return len(resp) >= rule.k
    _check_groups(plan)
    if rule.kind == "one_per_group":
        return all(g & resp for g in plan.groups)
    if rule.kind == "k_per_group":
        return all(len(g & resp) >= rule.k for g in plan.groups)
    raise ValueError(f"unknown rule {rule.kind!r}")
