"""Dense linear algebra over the prime field F_p.

Matrices are ``int64`` numpy arrays with entries in ``[0, p)``.  All
routines copy their inputs; nothing is modified in place.
"""

from __future__ import annotations

import numpy as np

from ._kernels import float_dtype, matmul_kernel, panel_kernel, rref_kernel

# matrices with both sides at least this large go through the blocked path
BLOCKED_MIN = 160
PANEL = 64


def as_mod(A, p: int) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(A, dtype=np.int64) % p)


def rref(A, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form and pivot columns."""
    R = as_mod(A, p).copy()
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    if R.size == 0:
        return R, np.zeros(0, dtype=np.int64)
    piv = rref_kernel(R, p)
    return R[: len(piv)], piv


def _fmod(x: np.ndarray, p: int) -> np.ndarray:
    """x mod p for integer-valued floats; much faster than np.mod on floats."""
    r = x - np.floor(x / p) * p
    r[r < 0] += p
    r[r >= p] -= p
    return r


def _echelon_blocked(A: np.ndarray, p: int, dt, reduce_above: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Reduced echelon form by column panels with exact float GEMM updates.

    Pivot columns inside a panel come from an incremental row basis, so they
    need not be the leftmost ones; the returned rows are the identity on the
    returned pivot columns and span the row space of A.  Pivot rows are
    swapped to the top so every update works on contiguous slices, and
    reduction mod p of the trailing matrix is deferred while an entry bound
    keeps the floats exact.  With ``reduce_above`` off, rows above a panel
    are left alone: the pivot count (rank) is still right, the rows are not.
    """
    m, n = A.shape
    W = np.ascontiguousarray(np.asarray(A) % p, dtype=dt)
    limit = 2**24 if dt == np.float32 else 2**53
    step = PANEL * (p - 1) * (p - 1)
    growth = p
    r = 0
    pcols: list[np.ndarray] = []
    for j0 in range(0, n, PANEL):
        if r == m:
            break
        j1 = min(n, j0 + PANEL)
        P = _fmod(W[r:, j0:j1], p).astype(np.int64)
        pc, pr = panel_kernel(P, p)
        k = pc.size
        if k == 0:
            continue
        pcA = pc + j0
        src = pr + r
        # swap the chosen rows into r..r+k-1; src is increasing with src[t] >= r+t
        for t, s_ in enumerate(src):
            if s_ != r + t:
                W[[r + t, s_]] = W[[s_, r + t]]
        inv = inverse(_fmod(W[r : r + k][:, pcA], p).astype(np.int64), p).astype(dt)
        piv = _fmod(inv @ _fmod(W[r : r + k, j0:], p), p)
        if growth + step >= limit:
            W[:, j0:] = _fmod(W[:, j0:], p)
            growth = p
        if r and reduce_above:
            F = _fmod(W[:r][:, pcA], p)
            W[:r, j0:] -= F @ piv
        if r + k < m:
            F = _fmod(W[r + k :][:, pcA], p)
            W[r + k :, j0:] -= F @ piv
        growth += step
        W[r : r + k, j0:] = piv
        r += k
        pcols.append(pcA)
    if not pcols:
        return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64)
    cols = np.concatenate(pcols)
    order = np.argsort(cols, kind="stable")
    return _fmod(W[:r][order], p).astype(np.int64), cols[order]


def _echelon_chunked(A: np.ndarray, p: int, dt) -> tuple[np.ndarray, np.ndarray]:
    """Row-chunked driver: stop as soon as the rank reaches the column count."""
    m, n = A.shape
    chunk = max(n + n // 8, BLOCKED_MIN)
    R, piv = _echelon_blocked(A[:chunk], p, dt)
    start = chunk
    while start < m and len(piv) < n:
        C = A[start : start + chunk] % p
        start += chunk
        if len(piv):
            C = (C - matmul(C[:, piv], R, p)) % p
        C = C[C.any(axis=1)]
        if C.shape[0] == 0:
            continue
        R2, piv2 = _echelon_blocked(C, p, dt) if min(C.shape) >= BLOCKED_MIN else rref(C, p)
        if len(piv2) == 0:
            continue
        if len(piv):
            R = (R - matmul(R[:, piv2], R2, p)) % p
        R = np.vstack([R, R2])
        piv = np.concatenate([piv, piv2])
        order = np.argsort(piv, kind="stable")
        R, piv = R[order], piv[order]
    return R, piv


def echelon(A, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows spanning the row space, equal to the identity on the pivot columns.

    Same contract as :func:`rref` except that pivots are not guaranteed to be
    leftmost for large inputs.  Use it where only the row space, rank or
    kernel matter.
    """
    A = np.asarray(A, dtype=np.int64)
    if A.ndim == 2 and min(A.shape) >= BLOCKED_MIN:
        dt = float_dtype(p, PANEL)
        if dt is not None:
            return _echelon_chunked(A, p, dt)
    return rref(A, p)


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(echelon(A, p)[1])


def matmul(A, B, p: int) -> np.ndarray:
    A = as_mod(A, p)
    B = as_mod(B, p)
    k = A.shape[1]
    if k == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    dt = float_dtype(p, k)
    if dt is not None and A.shape[0] * B.shape[1] * k > 50_000:
        return _fmod(A.astype(dt) @ B.astype(dt), p).astype(np.int64)
    return matmul_kernel(A, B, p)


def nullspace(A, p: int) -> np.ndarray:
    """Basis of the right kernel ``{v : A v = 0}``, one vector per row."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0 or n == 0:
        return np.eye(n, dtype=np.int64)
    if min(A.shape) >= BLOCKED_MIN and A.shape[0] >= n:
        dt = float_dtype(p, PANEL)
        if dt is not None:
            # Row order does not change the kernel.  A fixed shuffle breaks up
            # the block structure so that a few more than n rows usually have
            # full column rank, which a forward-only pass detects cheaply.
            A = A[np.random.default_rng(0x5eed).permutation(A.shape[0])]
            probe = A[: n + 64]
            if probe.shape[0] < A.shape[0] and len(_echelon_blocked(probe, p, dt, reduce_above=False)[1]) == n:
                return np.zeros((0, n), dtype=np.int64)
    R, piv = echelon(A, p)
    free = np.setdiff1d(np.arange(n), piv)
    K = np.zeros((len(free), n), dtype=np.int64)
    K[np.arange(len(free)), free] = 1
    K[:, piv] = (-R[:, free].T) % p
    return K


def left_nullspace(A, p: int) -> np.ndarray:
    """Basis of ``{w : w A = 0}``, one vector per row."""
    return nullspace(np.asarray(A).T, p)


def row_basis(A, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.shape[0] == 0:
        return A.reshape(0, A.shape[1]) if A.ndim == 2 else A
    return rref(A, p)[0]


def solve(A, b, p: int):
    """One solution ``x`` of ``A x = b`` (columns of ``b`` solved jointly), or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    m, n = A.shape
    if m == 0:
        x = np.zeros((n, b.shape[1]), dtype=np.int64)
        return x[:, 0] if vec else x
    R, piv = rref(np.hstack([A, b]), p)
    if len(piv) and piv[-1] >= n:
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    x[piv] = R[:, n:]
    return x[:, 0] if vec else x


def in_span(rows, v, p: int) -> bool:
    """Whether ``v`` lies in the row space of ``rows``."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(v))
    if not np.any(np.asarray(v) % p):
        return True
    if rows.shape[0] == 0:
        return False
    return rank(np.vstack([rows, v]), p) == rank(rows, p)


def complement_basis(sub, n: int, p: int) -> np.ndarray:
    """Standard unit vectors completing the row space of ``sub`` to k^n."""
    sub = np.asarray(sub, dtype=np.int64).reshape(-1, n)
    piv = rref(sub, p)[1] if sub.shape[0] else np.zeros(0, dtype=np.int64)
    free = np.setdiff1d(np.arange(n), piv)
    E = np.zeros((len(free), n), dtype=np.int64)
    E[np.arange(len(free)), free] = 1
    return E


def inverse(A, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if len(piv) < n or piv[n - 1] >= n:
        raise ZeroDivisionError("matrix is singular mod p")
    return R[:, n:]
