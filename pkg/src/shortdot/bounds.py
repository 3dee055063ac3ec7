"""Fundamental sparsity lower bounds and achievability checks.

For any P x N matrix F whose every K rows span the rows of an M x N
matrix A with no all-zero column, the average row sparsity obeys
s_bar >= (N/P)(P-K+1); for M > 1 the tighter bound
s_bar > (N/P)(P-K+M) - (M^2/P) C(P, K-M+1) holds for some A.  The gap to
the constructive budget (N/P)(P-K+M) does not depend on N, so the
construction is near-optimal for large N.  Binomials are kept in exact
integer/rational arithmetic until the final float conversion.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coding import EncodedTransform

ASYMPTOTIC_RATIO = 0.01  # proxy threshold for M^2 C(P,K-M+1) = o(N)


@dataclass(frozen=True)
class BoundReport:
    basic_bound: float
    tight_bound: float
    achieved_avg_sparsity: float
    achieved_max_sparsity: int
    lambda_cap: int
    asymptotic_condition_met: bool
    gap_ratio: float
    hypothesis_ok: bool


def basic_lower_bound(N: int, P: int, K: int) -> float:
    """(N/P)(P-K+1): no scheme can assign shorter average tasks."""
    return (N / P) * (P - K + 1)


def lambda_cap(P: int, K: int, M: int) -> int:
    """Strict upper bound M*C(P, K-M+1) on the number of columns with
    more than K-M zeros (exact integer)."""
    return M * math.comb(P, K - M + 1)


def tight_bound_gap(P: int, K: int, M: int) -> Fraction:
    """Exact gap (M^2/P) C(P, K-M+1) between the budget and the tight
    bound; independent of N."""
    return Fraction(M * M * math.comb(P, K - M + 1), P)


def tight_lower_bound_exact(N: int, P: int, K: int, M: int) -> Fraction:
    if M <= 1:
        raise ValueError("tight bound requires M > 1; use basic_lower_bound for M = 1")
    return Fraction(N * (P - K + M), P) - tight_bound_gap(P, K, M)


def tight_lower_bound(N: int, P: int, K: int, M: int) -> float:
    """Float value of the M > 1 bound; may be negative (vacuous) for
    small N."""
    return float(tight_lower_bound_exact(N, P, K, M))


def check_achievability(code: EncodedTransform) -> BoundReport:
    """Measure a constructed code against the lower bounds.

    Sparsity counts entries with magnitude above the code's zero
    tolerance.  Padded (all-zero) columns are excluded, matching the
    bounds' no-all-zero-column hypothesis; if an unpadded column of F is
    entirely zero the hypothesis fails, a warning is issued and the
    bound assertions are skipped (hypothesis_ok=False in the report).
    """
    p = code.params
    P, K, M = p.P, p.K, p.M
    F = code.F[:, : p.N_raw]
    nonzero = np.abs(F) > code.zero_tolerance
    hypothesis_ok = bool(np.all(nonzero.any(axis=0)))
    if not hypothesis_ok:
        warnings.warn(
            "encoded matrix has an all-zero unpadded column; sparsity bounds "
            "assume every column is nontrivial, assertions skipped",
            stacklevel=2,
        )
    row_counts = nonzero.sum(axis=1)
    achieved_avg = float(row_counts.mean())
    achieved_max = int(row_counts.max())

    N_eff = p.N_raw
    basic = basic_lower_bound(N_eff, P, K)
    tight = float(tight_lower_bound(N_eff, P, K, M)) if M > 1 else basic
    budget = p.s
    if hypothesis_ok:
        if basic > budget:
            raise ValueError(
                f"basic bound {basic} exceeds the sparsity budget {budget}: "
                "invalid code"
            )
        if achieved_max > budget:
            raise ValueError(
                f"measured max row sparsity {achieved_max} exceeds budget {budget}"
            )
        # the lower bound applies to ANY matrix whose every-K-rows span
        # the encoded rows, this one included (tolerance-based counting
        # can only undercount entries smaller than zero_tolerance)
        if achieved_avg < basic - 1e-9:
            raise ValueError(
                f"measured average sparsity {achieved_avg} sits below the lower "
                f"bound {basic}: inconsistent code or sub-tolerance entries"
            )
    gap_ratio = M * M * math.comb(P, K - M + 1) / N_eff
    return BoundReport(
        basic_bound=basic,
        tight_bound=tight,
        achieved_avg_sparsity=achieved_avg,
        achieved_max_sparsity=achieved_max,
        lambda_cap=lambda_cap(P, K, M),
        asymptotic_condition_met=gap_ratio < ASYMPTOTIC_RATIO,
        gap_ratio=gap_ratio,
        hypothesis_ok=hypothesis_ok,
    )
