"""Sparse any-K-of-P encoding of a matrix-vector product.

To compute A @ x (A is M x N) on P workers, the M rows of A are encoded
into P rows of a sparse matrix F = B @ A_tilde, where A_tilde appends
K - M carefully chosen rows to A and B is a P x K generator.  Each
worker computes one short dot product <f_i, x> restricted to the support
of f_i (at most s = (N/P)*(P-K+M) coordinates), and the outputs of any K
workers recover A @ x exactly.

The enforced sparsity pattern is cyclic: column j of F is zero at the
K - M rows U(j) = ({j-1, ..., j+K-M-2} mod P) + 1, a P x P unit block
tiled N/P times, which gives every row exactly s allowed-nonzero
positions.  The appended entries z(j) are the unique solution of
B^U(j)[A_j; z] = 0.

Indices in public interfaces (rows/workers, columns/supports) are
1-based; matrices are plain numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ConditioningError, DecodingError
from .generator import COND_LIMIT, GeneratorMatrix, guarded_solve
from .params import CodeParams, validate_params
from .polynomials import horner, newton_monomial

# encode snaps pattern positions to exact zero; anything above
# ZERO_TOL_FACTOR * max|A| there beforehand means the solve went bad.
ZERO_TOL_FACTOR = 1e-9
# decode rejects solutions whose residual exceeds this times ||v||.
DECODE_RESIDUAL_RTOL = 1e-8
# decode_with_errors: a re-encoded output "matches" a received one
# within 1e-6 * (1 + |output|).
ERROR_MATCH_RTOL = 1e-6


def zero_support(j: int, params: CodeParams) -> frozenset[int]:
    """The K-M (1-based) row indices forced to zero in column j of F.

    Cyclic window starting at j-1: ({(j-1)+t : t < K-M} mod P) + 1.
    """
    if not 1 <= j <= params.N:
        raise ValueError(f"column index {j} outside 1..{params.N}")
    return frozenset(int(r) + 1 for r in _zero_rows0(j - 1, params.P, params.K - params.M))


def _zero_rows0(j0: int, P: int, width: int) -> np.ndarray:
    return np.arange(j0, j0 + width) % P


def zero_mask(params: CodeParams) -> np.ndarray:
    """Boolean (P, N) mask, True where the pattern forces F to zero."""
    P, KM = params.P, params.K - params.M
    block = np.zeros((P, P), dtype=bool)
    for j0 in range(P):
        block[_zero_rows0(j0, P, KM), j0] = True
    return np.tile(block, params.N // P)


def supports_from_pattern(params: CodeParams) -> tuple[tuple[int, ...], ...]:
    """Per-row allowed-nonzero column indices (1-based), each of size s."""
    allowed = ~zero_mask(params)
    return tuple(tuple(int(j) + 1 for j in np.flatnonzero(row)) for row in allowed)


@dataclass(frozen=True)
class SparsityPattern:
    """Cyclic zero pattern of the encoded matrix for a parameter tuple."""

    params: CodeParams

    def zero_rows(self, j: int) -> frozenset[int]:
        return zero_support(j, self.params)

    def mask(self) -> np.ndarray:
        return zero_mask(self.params)

    def supports(self) -> tuple[tuple[int, ...], ...]:
        return supports_from_pattern(self.params)


@dataclass(frozen=True)
class EncodedTransform:
    """The encoded matrix F plus everything needed to task workers.

    F is P x N with pattern positions exactly zero; supports[i] lists the
    1-based allowed-nonzero columns of row i+1 (pattern-derived, size s,
    reported even if the corresponding entries happen to vanish).
    """

    F: np.ndarray
    supports: tuple[tuple[int, ...], ...]
    generator: GeneratorMatrix
    params: CodeParams
    zero_tolerance: float

    def worker_tasks(self) -> tuple["WorkerTask", ...]:
        return tuple(
            WorkerTask(
                index=i + 1,
                support=sup,
                coefficients=self.F[i, np.asarray(sup) - 1].copy(),
            )
            for i, sup in enumerate(self.supports)
        )


@dataclass(frozen=True)
class WorkerTask:
    """Row index, support S_i and the row's coefficients on S_i."""

    index: int
    support: tuple[int, ...]
    coefficients: np.ndarray


@dataclass(frozen=True)
class WorkerOutput:
    """One worker's result: the scalar <f_i^{S_i}, x^{S_i}>."""

    index: int
    value: float


def solve_appended(A_col, U, gen: GeneratorMatrix, cond_limit: float | None = None) -> np.ndarray:
    """Appended entries z with B^U @ [A_col; z] = 0 for one column.

    U is the set of K-M (1-based) rows to zero; returns the (K-M,)
    vector z = -(B^U_{cols M+1:K})^{-1} B^U_{cols 1:M} A_col.
    """
    A_col = np.asarray(A_col, dtype=float)
    M = A_col.size
    K = gen.K
    rows = np.asarray(sorted(U), dtype=int) - 1
    if rows.size != K - M:
        raise ValueError(f"|U| = {rows.size}, expected K - M = {K - M}")
    if K == M:
        return np.zeros(0)
    BU = gen.entries[rows]
    return -guarded_solve(BU[:, M:], BU[:, :M] @ A_col, cond_limit)


def encode(
    A,
    gen: GeneratorMatrix,
    params: CodeParams,
    method: str = "solve",
    cond_limit: float | None = None,
) -> EncodedTransform:
    """Encode an M x N_raw matrix A into the sparse P x N transform F.

    method "solve" uses dense linear solves; "poly" uses the polynomial
    evaluation/interpolation path (Vandermonde generators only).  Both
    produce the same transform up to floating-point differences.
    """
    A = np.asarray(A, dtype=float)
    P, K, M, N = params.P, params.K, params.M, params.N
    if A.shape != (M, params.N_raw):
        raise ValueError(f"A shape {A.shape} != (M, N_raw) = ({M}, {params.N_raw})")
    if gen.entries.shape != (P, K):
        raise ValueError(f"generator shape {gen.entries.shape} != ({P}, {K})")
    if method not in ("solve", "poly"):
        raise ValueError(f"unknown encode method {method!r}")
    if method == "poly" and gen.kind != "vandermonde":
        raise ValueError("poly method requires a Vandermonde generator")

    Apad = np.zeros((M, N))
    Apad[:, : params.N_raw] = A
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    ztol = ZERO_TOL_FACTOR * scale

    B = gen.entries
    F = np.empty((P, N))
    if K == M:
        F[:] = B @ Apad
    else:
        # Only P distinct zero patterns exist (columns j and j+P share
        # one), so solve each pattern once for all its columns.
        for r in range(P):
            cols = np.arange(r, N, P)
            rows = _zero_rows0(r, P, K - M)
            Acols = Apad[:, cols]
            if method == "solve":
                BU = B[rows]
                Z = -guarded_solve(BU[:, M:], BU[:, :M] @ Acols, cond_limit)
                Fcols = B @ np.vstack([Acols, Z])
            else:
                Fcols = _encode_poly_group(Acols, gen, rows, cond_limit)
            pattern_resid = float(np.max(np.abs(Fcols[rows]))) if cols.size else 0.0
            if pattern_resid > ztol:
                raise ConditioningError(
                    f"pattern residual {pattern_resid:.3e} exceeds zero tolerance "
                    f"{ztol:.3e}; generator too ill-conditioned for these parameters"
                )
            Fcols[rows] = 0.0
            F[:, cols] = Fcols

    return EncodedTransform(
        F=F,
        supports=supports_from_pattern(params),
        generator=gen,
        params=params,
        zero_tolerance=ztol,
    )


def _encode_poly_group(Acols: np.ndarray, gen: GeneratorMatrix, rows: np.ndarray, cond_limit):
    """Polynomial-path encoding of all columns sharing one zero pattern.

    B^U_{1:M} A_j is the degree-(K-1) polynomial with coefficients
    [A_j; 0] evaluated at the pattern's nodes; solving for z is the
    interpolation of a degree-(K-M-1) polynomial through those nodes.
    """
    M = Acols.shape[0]
    K = gen.K
    nodes_u = gen.nodes[rows]
    # Same rejection gate as the dense path, on the same submatrix.
    limit = COND_LIMIT if cond_limit is None else cond_limit
    c = np.linalg.cond(gen.entries[rows][:, M:])
    if not np.isfinite(c) or c > limit:
        raise ConditioningError(
            f"solve rejected: estimated condition {c:.3e} exceeds limit {limit:.1e}"
        )
    coeffs = np.vstack([Acols, np.zeros((K - M, Acols.shape[1]))])
    vals = -horner(coeffs, nodes_u)  # (K-M, ncols)
    Z = newton_monomial(nodes_u, vals)
    return horner(np.vstack([Acols, Z]), gen.nodes)


def pad_input(x, params: CodeParams) -> np.ndarray:
    """Accept x of length N_raw or N; zero-pad to length N."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size == params.N:
        return x
    if x.size == params.N_raw:
        out = np.zeros(params.N)
        out[: params.N_raw] = x
        return out
    raise ValueError(f"x has length {x.size}, expected {params.N_raw} or {params.N}")


def worker_dot(task: WorkerTask, x_slice) -> WorkerOutput:
    """One worker's short dot product over its support."""
    x_slice = np.asarray(x_slice, dtype=float).ravel()
    if x_slice.size != len(task.support):
        raise ValueError(
            f"x slice length {x_slice.size} != support size {len(task.support)}"
        )
    return WorkerOutput(index=task.index, value=float(task.coefficients @ x_slice))


def run_workers(code: EncodedTransform, x) -> list[WorkerOutput]:
    """Simulate all P workers on input x (length N_raw or N)."""
    xp = pad_input(x, code.params)
    return [
        worker_dot(task, xp[np.asarray(task.support) - 1])
        for task in code.worker_tasks()
    ]


def _collect(outputs) -> tuple[np.ndarray, np.ndarray]:
    idx, vals = [], []
    for out in outputs:
        if isinstance(out, WorkerOutput):
            idx.append(out.index)
            vals.append(out.value)
        else:
            i, v = out
            idx.append(int(i))
            vals.append(float(v))
    return np.asarray(idx, dtype=int), np.asarray(vals, dtype=float)


def decode(
    outputs,
    gen: GeneratorMatrix,
    params: CodeParams,
    method: str = "solve",
    cond_limit: float | None = None,
) -> np.ndarray:
    """Recover A @ x from exactly K worker outputs with distinct indices.

    Solves B^V w = v and returns the first M entries of w; the solve is
    rejected (ConditioningError) if the condition gate trips or the
    residual ||B^V w - v|| exceeds 1e-8 ||v||.
    """
    idx, v = _collect(outputs)
    w = _decode_full(idx, v, gen, params, method, cond_limit)
    return w[: params.M]


def _decode_full(idx, v, gen, params, method="solve", cond_limit=None) -> np.ndarray:
    K = params.K
    if idx.size != K:
        raise ValueError(f"need exactly K={K} outputs, got {idx.size}")
    if np.unique(idx).size != K:
        raise ValueError("worker indices must be distinct")
    if idx.min() < 1 or idx.max() > params.P:
        raise ValueError(f"worker indices must lie in 1..{params.P}")
    if method not in ("solve", "poly"):
        raise ValueError(f"unknown decode method {method!r}")
    BV = gen.entries[idx - 1]
    if method == "solve":
        w = guarded_solve(BV, v, cond_limit)
    else:
        if gen.kind != "vandermonde":
            raise ValueError("poly method requires a Vandermonde generator")
        limit = COND_LIMIT if cond_limit is None else cond_limit
        c = np.linalg.cond(BV)
        if not np.isfinite(c) or c > limit:
            raise ConditioningError(
                f"solve rejected: estimated condition {c:.3e} exceeds limit {limit:.1e}"
            )
        w = newton_monomial(gen.nodes[idx - 1], v[:, None])[:, 0]
    residual = np.linalg.norm(BV @ w - v)
    if residual > DECODE_RESIDUAL_RTOL * np.linalg.norm(v):
        raise ConditioningError(
            f"decode residual {residual:.3e} exceeds "
            f"{DECODE_RESIDUAL_RTOL:.0e} * ||v||"
        )
    return w


def decode_with_errors(
    outputs,
    e_max: int,
    gen: GeneratorMatrix,
    params: CodeParams,
    cond_limit: float | None = None,
) -> np.ndarray:
    """Recover A @ x from all P outputs when up to e_max are garbage.

    A code that tolerates P-K erasures corrects floor((P-K)/2) errors:
    K-subsets are tried in lexicographic index order, and the first
    decode whose re-encoding matches at least P - e_max of the received
    outputs (within 1e-6 * (1 + |output|)) wins.
    """
    P, K = params.P, params.K
    radius = (P - K) // 2
    if not 0 <= e_max <= radius:
        raise ValueError(f"e_max={e_max} outside correctable radius 0..{radius}")
    idx, v = _collect(outputs)
    if idx.size != P or np.unique(idx).size != P:
        raise ValueError(f"need outputs from all {P} workers exactly once")
    order = np.argsort(idx)
    idx, v = idx[order], v[order]
    need = P - e_max
    for subset in combinations(range(P), K):
        sel = np.asarray(subset, dtype=int)
        try:
            w = _decode_full(idx[sel], v[sel], gen, params, "solve", cond_limit)
        except ConditioningError:
            continue
        predicted = gen.entries @ w
        matches = int(np.sum(np.abs(predicted - v) <= ERROR_MATCH_RTOL * (1.0 + np.abs(v))))
        if matches >= need:
            return w[: params.M]
    raise DecodingError(
        f"no K-subset decode consistent with >= {need} of {P} outputs; "
        "too many corrupted outputs or tolerance too tight"
    )


def encode_chunked(
    A,
    gen: GeneratorMatrix,
    chunk_M: int,
    method: str = "solve",
    cond_limit: float | None = None,
) -> list[EncodedTransform]:
    """Encode a matrix with more rows than K by horizontal chunking.

    Rows are split into ceil(M/chunk_M) chunks of at most chunk_M rows;
    each chunk is encoded independently with the shared generator.
    Decoding each chunk and stacking the results reproduces A @ x.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.size == 0:
        raise ValueError("A must be a nonempty 2-D matrix")
    P, K = gen.P, gen.K
    if not 1 <= chunk_M <= min(K, P):
        raise ValueError(f"chunk_M={chunk_M} must lie in 1..min(K, P)={min(K, P)}")
    M_total, N_raw = A.shape
    chunks = []
    for start in range(0, M_total, chunk_M):
        rows = A[start : start + chunk_M]
        cp = validate_params(P, K, rows.shape[0], N_raw)
        chunks.append(encode(rows, gen, cp, method=method, cond_limit=cond_limit))
    return chunks
