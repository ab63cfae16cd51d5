"""Hot loops for exact linear algebra over F_p.

Every kernel has a numba implementation and a pure-numpy twin with the
same signature.  The numpy path is used when numba is unavailable or when
``FROBFORGE_NO_NUMBA`` is set to a non-empty value other than ``0``.
Both paths operate on ``int64`` arrays holding residues in ``[0, p)``.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("FROBFORGE_NO_NUMBA", "") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError("numba disabled by FROBFORGE_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag in CI
    HAVE_NUMBA = False


# -- pure numpy -------------------------------------------------------------


def _inv_mod(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def rref_numpy(A: np.ndarray, p: int) -> np.ndarray:
    """Reduce ``A`` in place to reduced row echelon form; return pivot columns."""
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = _inv_mod(A[r, c], p)
        if inv != 1:
            A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            A[rows] = (A[rows] - np.outer(col[rows], A[r])) % p
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


def panel_basis_numpy(P: np.ndarray, p: int):
    """Pivot columns and spanning row indices of the row space of ``P``.

    Rows are scanned in order and kept when independent of those already
    kept; scanning stops once the panel has full column rank.
    """
    m, b = P.shape
    basis = np.zeros((b, b), dtype=np.int64)
    pivc = []
    rows = []
    for i in range(m):
        v = P[i] % p
        if not v.any():
            continue
        for t, c in enumerate(pivc):
            if v[c]:
                v = (v - v[c] * basis[t]) % p
        nz = np.flatnonzero(v)
        if nz.size == 0:
            continue
        j = nz[0]
        v = (v * _inv_mod(v[j], p)) % p
        for t in range(len(pivc)):
            if basis[t, j]:
                basis[t] = (basis[t] - basis[t, j] * v) % p
        basis[len(pivc)] = v
        pivc.append(j)
        rows.append(i)
        if len(pivc) == b:
            break
    return np.asarray(pivc, dtype=np.int64), np.asarray(rows, dtype=np.int64)


def matmul_numpy(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    # chunk the contraction so partial sums stay below 2**63
    k = A.shape[1]
    step = max(1, (2**62) // max(1, (p - 1) * (p - 1)))
    if step >= k:
        return (A @ B) % p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(0, k, step):
        out = (out + (A[:, s : s + step] @ B[s : s + step]) % p) % p
    return out


# -- numba --------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _inv_mod_nb(a, p):
        result = 1
        base = a % p
        e = p - 2
        while e > 0:
            if e & 1:
                result = (result * base) % p
            base = (base * base) % p
            e >>= 1
        return result

    @njit(cache=True, nogil=True)
    def rref_numba(A, p):
        m, n = A.shape
        pivots = np.empty(min(m, n), dtype=np.int64)
        npiv = 0
        r = 0
        for c in range(n):
            if r == m:
                break
            k = -1
            for i in range(r, m):
                if A[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(n):
                    t = A[r, j]
                    A[r, j] = A[k, j]
                    A[k, j] = t
            inv = _inv_mod_nb(A[r, c], p)
            if inv != 1:
                for j in range(c, n):
                    A[r, j] = (A[r, j] * inv) % p
            for i in range(m):
                if i == r:
                    continue
                f = A[i, c]
                if f == 0:
                    continue
                g = p - f
                for j in range(c, n):
                    a = A[r, j]
                    if a != 0:
                        A[i, j] = (A[i, j] + g * a) % p
            pivots[npiv] = c
            npiv += 1
            r += 1
        return pivots[:npiv].copy()

    @njit(cache=True, nogil=True)
    def matmul_numba(A, B, p):
        m, k = A.shape
        n = B.shape[1]
        out = np.zeros((m, n), dtype=np.int64)
        for i in range(m):
            for t in range(k):
                a = A[i, t]
                if a == 0:
                    continue
                for j in range(n):
                    b = B[t, j]
                    if b != 0:
                        out[i, j] = (out[i, j] + a * b) % p
        return out

    @njit(cache=True, nogil=True)
    def panel_basis_numba(P, p):
        m, b = P.shape
        basis = np.zeros((b, b), dtype=np.int64)
        pivc = np.empty(b, dtype=np.int64)
        rows = np.empty(b, dtype=np.int64)
        v = np.empty(b, dtype=np.int64)
        k = 0
        for i in range(m):
            nonzero = False
            for j in range(b):
                v[j] = P[i, j] % p
                if v[j] != 0:
                    nonzero = True
            if not nonzero:
                continue
            for t in range(k):
                f = v[pivc[t]]
                if f != 0:
                    g = p - f
                    for j in range(b):
                        if basis[t, j] != 0:
                            v[j] = (v[j] + g * basis[t, j]) % p
            j0 = -1
            for j in range(b):
                if v[j] != 0:
                    j0 = j
                    break
            if j0 < 0:
                continue
            inv = _inv_mod_nb(v[j0], p)
            for j in range(b):
                v[j] = (v[j] * inv) % p
            for t in range(k):
                f = basis[t, j0]
                if f != 0:
                    g = p - f
                    for j in range(b):
                        basis[t, j] = (basis[t, j] + g * v[j]) % p
            for j in range(b):
                basis[k, j] = v[j]
            pivc[k] = j0
            rows[k] = i
            k += 1
            if k == b:
                break
        return pivc[:k].copy(), rows[:k].copy()

    rref_kernel = rref_numba
    matmul_kernel = matmul_numba
    panel_kernel = panel_basis_numba
else:
    rref_kernel = rref_numpy
    matmul_kernel = matmul_numpy
    panel_kernel = panel_basis_numpy


def float_dtype(p: int, k: int):
    """A float type in which k-term sums of residue products are exact, or None."""
    bound = k * (p - 1) * (p - 1) + p
    if bound < 2**24:
        return np.float32
    if bound < 2**53:
        return np.float64
    return None


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
