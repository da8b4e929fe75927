"""Vectorized F_q kernels for exhaustive enumeration.

Matrices are enumerated in lexicographic order of their row-major entry
tuples, so index 0 is the zero matrix and the last entry varies fastest.
"""

from __future__ import annotations

import numpy as np

from .finite_field import FieldCtx


def index_digits(q: int, length: int, start: int, stop: int) -> np.ndarray:
    """Base-q digits (most significant first) of every index in [start, stop)."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, length), dtype=np.int64)
    for pos in range(length - 1, -1, -1):
        out[:, pos] = idx % q
        idx //= q
    return out


def all_matrices(q: int, rows: int, cols: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    if stop is None:
        stop = q ** (rows * cols)
    if rows * cols == 0:
        return np.zeros((stop - start, rows, cols), dtype=np.int64)
    return index_digits(q, rows * cols, start, stop).reshape(-1, rows, cols)


def matmul(ctx: FieldCtx, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Batched product over F_q; leading dimensions broadcast."""
    if ctx.is_prime:
        return np.matmul(A, B) % ctx.q
    add, mul = ctx.tables()
    shape = np.broadcast_shapes(A.shape[:-2], B.shape[:-2]) + (A.shape[-2], B.shape[-1])
    out = np.zeros(shape, dtype=np.int64)
    for k in range(A.shape[-1]):
        term = mul[A[..., :, k][..., :, None], B[..., k, :][..., None, :]]
        out = add[out, term]
    return out


def matvec(ctx: FieldCtx, M: np.ndarray, v: np.ndarray) -> np.ndarray:
    return matmul(ctx, M, v[..., :, None])[..., 0]


def matpow(ctx: FieldCtx, M: np.ndarray, e: int) -> np.ndarray:
    s = M.shape[-1]
    result = np.broadcast_to(np.eye(s, dtype=np.int64), M.shape).copy()
    base = M
    while e:
        if e & 1:
            result = matmul(ctx, result, base)
        e >>= 1
        if e:
            base = matmul(ctx, base, base)
    return result


def is_nilpotent(ctx: FieldCtx, M: np.ndarray) -> np.ndarray:
    """Boolean mask over the batch: M^s == 0 for s x s matrices."""
    s = M.shape[-1]
    if s == 0:
        return np.ones(M.shape[:-2], dtype=bool)
    return ~matpow(ctx, M, s).reshape(*M.shape[:-2], -1).any(axis=-1)


def orbit_lengths(ctx: FieldCtx, T: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """dim T[v] for a nilpotent batch T (..., s, s) and vectors vs (..., s).

    Counts the steps before the orbit first hits zero; capped at s.
    """
    s = T.shape[-1]
    lengths = np.zeros(np.broadcast_shapes(T.shape[:-2], vs.shape[:-1]), dtype=np.int64)
    x = vs
    for _ in range(s):
        nonzero = x.any(axis=-1)
        if not nonzero.any():
            break
        lengths += nonzero
        x = matvec(ctx, T, x)
    return lengths
