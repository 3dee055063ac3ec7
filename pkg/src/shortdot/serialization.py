"""On-disk formats: CSV matrices and encoded-transform directories.

Matrices are row-major CSV, no header, 64-bit decimal text.  An encoded
transform is a directory of
    params.txt    key=value lines: P, K, M, N, N_raw, kind, seed/nodes
    F.csv         the P x N encoded matrix
    supports.txt  one line per row: space-separated 1-based column indices
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .coding import EncodedTransform
from .generator import build_generator
from .params import CodeParams

_FMT = "%.17g"  # round-trips float64 exactly


def save_matrix(path, mat) -> None:
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    np.savetxt(path, mat, fmt=_FMT, delimiter=",")


def load_matrix(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


def save_transform(code: EncodedTransform, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    p, gen = code.params, code.generator
    lines = [
        f"P={p.P}",
        f"K={p.K}",
        f"M={p.M}",
        f"N={p.N}",
        f"N_raw={p.N_raw}",
        f"kind={gen.kind}",
    ]
    if gen.kind == "vandermonde":
        lines.append("nodes=" + ",".join(_FMT % h for h in gen.nodes))
    else:
        lines.append(f"seed={gen.seed}")
    lines.append(f"zero_tolerance={_FMT % code.zero_tolerance}")
    (out / "params.txt").write_text("\n".join(lines) + "\n")
    save_matrix(out / "F.csv", code.F)
    with open(out / "supports.txt", "w") as fh:
        for sup in code.supports:
            fh.write(" ".join(str(j) for j in sup) + "\n")
    return out


def load_transform(in_dir) -> EncodedTransform:
    src = Path(in_dir)
    kv = {}
    for line in (src / "params.txt").read_text().splitlines():
        line = line.strip()
        if line and "=" in line:
            key, _, value = line.partition("=")
            kv[key.strip()] = value.strip()
    params = CodeParams(
        P=int(kv["P"]), K=int(kv["K"]), M=int(kv["M"]),
        N=int(kv["N"]), N_raw=int(kv["N_raw"]),
    )
    kind = kv["kind"]
    if kind == "vandermonde":
        nodes = np.array([float(tok) for tok in kv["nodes"].split(",")])
        gen = build_generator(params, kind="vandermonde", nodes=nodes)
    elif kind == "gaussian":
        gen = build_generator(params, kind="gaussian", seed=int(kv["seed"]))
    else:
        raise ValueError(f"unknown generator kind {kind!r} in {src}")
    F = load_matrix(src / "F.csv")
    if F.shape != (params.P, params.N):
        raise ValueError(f"F.csv shape {F.shape} != ({params.P}, {params.N})")
    supports = []
    for line in (src / "supports.txt").read_text().splitlines():
        supports.append(tuple(int(tok) for tok in line.split()))
    if len(supports) != params.P:
        raise ValueError(f"supports.txt has {len(supports)} lines, expected {params.P}")
    ztol = float(kv.get("zero_tolerance", 1e-9 * np.max(np.abs(F), initial=0.0)))
    return EncodedTransform(
        F=F, supports=tuple(supports), generator=gen, params=params, zero_tolerance=ztol
    )
