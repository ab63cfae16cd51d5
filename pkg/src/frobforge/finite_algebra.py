"""Finite-dimensional algebras of block-diagonal matrices over F_p.

An element is stored flat: the row-major entries of each square block,
concatenated.  The algebra keeps its basis in reduced echelon form, so the
coordinates of a member v are simply v[pivots].

Primitive idempotents are found by Fitting splitting: an element whose
minimal polynomial has two coprime factors yields CRT idempotents that are
polynomials in it.  A corner eAe is accepted as local when eAe/J is a
commutative algebra whose Frobenius-fixed part is one-dimensional, i.e. a
field.  The radical J comes from the trace-form chain of Cohen, Ivanyos
and Wales, which is exact over prime fields.
"""

from __future__ import annotations

import hashlib
from functools import cached_property

import numpy as np
from sympy import Poly, symbols

from . import linalg

_t = symbols("t")


class NotSplit(RuntimeError):
    pass


class FiniteAlgebra:
    def __init__(self, sizes: list[int], basis, p: int):
        self.sizes = [int(n) for n in sizes]
        self.p = p
        offs = [0]
        for n in self.sizes:
            offs.append(offs[-1] + n * n)
        self.offsets = offs
        L = offs[-1]
        B = np.asarray(basis, dtype=np.int64).reshape(-1, L)
        if B.shape[0]:
            B, piv = linalg.rref(B, p)
        else:
            piv = np.zeros(0, dtype=np.int64)
        self.basis = B
        self.pivots = piv

    @classmethod
    def from_blocks(cls, sizes, elements, p: int) -> "FiniteAlgebra":
        flat = [np.concatenate([np.asarray(b, dtype=np.int64).ravel() for b in el]) if el else np.zeros(0, dtype=np.int64) for el in elements]
        L = sum(n * n for n in sizes)
        return cls(sizes, np.array(flat, dtype=np.int64).reshape(-1, L), p)

    def __repr__(self):
        return f"FiniteAlgebra(dim={self.dim}, p={self.p}, blocks={self.sizes})"

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def length(self) -> int:
        return self.offsets[-1]

    # flat <-> blocks ------------------------------------------------------------
    def blocks(self, v) -> list[np.ndarray]:
        v = np.asarray(v, dtype=np.int64)
        return [v[self.offsets[k] : self.offsets[k + 1]].reshape(n, n) for k, n in enumerate(self.sizes)]

    def flatten(self, blocks) -> np.ndarray:
        if not blocks:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([np.asarray(b, dtype=np.int64).ravel() for b in blocks]) % self.p

    def one(self) -> np.ndarray:
        return self.flatten([np.eye(n, dtype=np.int64) for n in self.sizes])

    def zero(self) -> np.ndarray:
        return np.zeros(self.length, dtype=np.int64)

    def mul(self, u, v) -> np.ndarray:
        return self.flatten([linalg.matmul(a, b, self.p) for a, b in zip(self.blocks(u), self.blocks(v))])

    def power(self, a, k: int, one=None) -> np.ndarray:
        out = self.one() if one is None else one
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return out

    def coords(self, v) -> np.ndarray:
        return np.asarray(v, dtype=np.int64)[self.pivots] % self.p

    def element(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=np.int64)
        if c.size == 0:
            return self.zero()
        return linalg.matmul(c[None, :], self.basis, self.p)[0]

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64) % self.p
        return np.array_equal(self.element(self.coords(v)), v)

    def trace(self, v) -> int:
        return int(sum(int(np.trace(b)) for b in self.blocks(v)) % self.p)

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """T[i, j] = coordinates of b_i b_j."""
        d = self.dim
        T = np.zeros((d, d, d), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                T[i, j] = self.coords(self.mul(self.basis[i], self.basis[j]))
        return T

    def is_closed(self) -> bool:
        return all(self.contains(self.mul(a, b)) for a in self.basis for b in self.basis)

    def content_seed(self) -> int:
        h = hashlib.sha256(np.ascontiguousarray(self.basis).tobytes())
        h.update(repr((self.sizes, self.p)).encode())
        return int.from_bytes(h.digest()[:8], "little")

    # corners -------------------------------------------------------------------
    def corner(self, e) -> np.ndarray:
        """Basis rows (flat, reduced) of eAe."""
        rows = [self.mul(self.mul(e, b), e) for b in self.basis]
        if not rows:
            return np.zeros((0, self.length), dtype=np.int64)
        return linalg.row_basis(np.array(rows), self.p)

    def restricted_rows(self, e, rows) -> tuple[list[int], np.ndarray]:
        """Block sizes and flat matrices of the given elements of eAe acting on the image of e.

        Restriction to the image of e is injective on eAe.
        """
        p = self.p
        sel = []
        for b in self.blocks(e):
            if b.shape[0] == 0:
                sel.append(None)
                continue
            R, piv = linalg.rref(b.T, p)  # rows of R span the column space of b
            sel.append((R.T, piv))
        sizes = [0 if s is None else len(s[1]) for s in sel]
        flats = []
        for v in rows:
            out = []
            for blk, s in zip(self.blocks(v), sel):
                if s is not None:
                    U, piv = s
                    out.append(linalg.matmul(blk, U, p)[piv].ravel())
            flats.append(np.concatenate(out) if out else np.zeros(0, dtype=np.int64))
        L = sum(n * n for n in sizes)
        return sizes, np.array(flats, dtype=np.int64).reshape(len(flats), L)

    def restrict(self, e, rows) -> "FiniteAlgebra":
        """The span of ``rows`` (inside eAe) as an algebra on the image of e, with identity e."""
        sizes, flats = self.restricted_rows(e, rows)
        return FiniteAlgebra(sizes, flats, self.p)

    @staticmethod
    def direct_sum(algebras: list["FiniteAlgebra"]) -> "FiniteAlgebra":
        p = algebras[0].p
        sizes = [n for A in algebras for n in A.sizes]
        L = sum(n * n for n in sizes)
        rows = []
        start = 0
        for A in algebras:
            for b in A.basis:
                v = np.zeros(L, dtype=np.int64)
                v[start : start + A.length] = b
                rows.append(v)
            start += A.length
        return FiniteAlgebra(sizes, np.array(rows, dtype=np.int64).reshape(-1, L), p)


# -- minimal polynomials and Fitting idempotents ----------------------------------


def minimal_polynomial(A: FiniteAlgebra, a, one=None) -> list[int]:
    """Coefficients (constant term first, monic) of the minimal polynomial of a."""
    p = A.p
    one = A.one() if one is None else one
    powers = [one]
    coords = [A.coords(one)]
    while True:
        nxt = A.mul(powers[-1], a)
        c = A.coords(nxt)
        x = linalg.solve(np.array(coords).T, c, p)
        if x is not None:
            return [int(-v) % p for v in x] + [1]
        powers.append(nxt)
        coords.append(c)


def evaluate(A: FiniteAlgebra, coeffs: list[int], a, one) -> np.ndarray:
    """sum_k coeffs[k] a^k with a^0 = one (Horner)."""
    p = A.p
    out = A.zero()
    for c in reversed(coeffs):
        out = (A.mul(out, a) + c * one) % p
    return out


def _poly(coeffs: list[int], p: int) -> Poly:
    return Poly(list(reversed(coeffs)), _t, modulus=p)


def _coeffs(f: Poly, p: int) -> list[int]:
    return [int(c) % p for c in reversed(f.all_coeffs())]


def fitting_idempotents(A: FiniteAlgebra, a, one) -> list[np.ndarray] | None:
    """CRT idempotents from the primary factors of the minimal polynomial of a.

    Returns None when the minimal polynomial is a power of one irreducible.
    The idempotents are polynomials in a, sum to ``one`` and are orthogonal.
    """
    p = A.p
    mp = minimal_polynomial(A, a, one)
    _, factors = _poly(mp, p).factor_list()
    if len(factors) < 2:
        return None
    prim = [f**k for f, k in factors]
    # deterministic order: by coefficient vector
    prim.sort(key=lambda f: _coeffs(f, p))
    out = []
    for i, fi in enumerate(prim):
        rest = Poly(1, _t, modulus=p)
        for j, fj in enumerate(prim):
            if j != i:
                rest = rest * fj
        s, _, g = rest.gcdex(fi)
        u = (s * rest).rem(_poly(mp, p))
        out.append(evaluate(A, _coeffs(u, p), a, one))
    return out


# -- radical -----------------------------------------------------------------------


def _scaled_trace(A: FiniteAlgebra, v, i: int) -> int:
    """(Tr(v~^{p^i}) mod p^{i+1}) / p^i for the standard integer lift v~ of v."""
    p = A.p
    mod = p ** (i + 1)
    k = p**i
    total = 0
    for b in A.blocks(v):
        n = b.shape[0]
        if n == 0:
            continue
        exact = n * (mod - 1) ** 2 < 2**53
        M = b.astype(np.float64) if exact else b.astype(object)
        out = None
        e = k
        while e:
            if e & 1:
                out = M.copy() if out is None else _mulmod(out, M, mod, exact)
            e >>= 1
            if e:
                M = _mulmod(M, M, mod, exact)
        total += int(sum(int(x) for x in np.diagonal(out)))
    total %= mod
    if total % k:
        raise ArithmeticError("trace chain lost divisibility; radical computation is invalid")
    return (total // k) % p


def _mulmod(X, Y, mod, exact):
    Z = X @ Y
    if exact:
        return Z - np.floor(Z / mod) * mod
    return Z % mod


def radical(A: FiniteAlgebra) -> np.ndarray:
    """Basis rows (flat) of the Jacobson radical of A.

    I_{-1} = A and I_i = {a in I_{i-1} : g_i(ab) = 0 for all b in A} with
    g_i the scaled trace above; the chain stops at i = floor(log_p N), N the
    matrix size.  Requires A to be unital in its block representation.
    """
    p = A.p
    N = sum(A.sizes)
    cur = A.basis.copy()
    i = 0
    while cur.shape[0] and p**i <= N:
        if i == 0:
            # Tr(ab) for all pairs in one product
            Bt = np.array([np.concatenate([blk.T.ravel() for blk in A.blocks(b)]) for b in A.basis])
            G = linalg.matmul(Bt, cur.T, p)
        else:
            G = np.zeros((A.dim, cur.shape[0]), dtype=np.int64)
            for r, b in enumerate(A.basis):
                for c, a in enumerate(cur):
                    G[r, c] = _scaled_trace(A, A.mul(a, b), i)
        K = linalg.nullspace(G, p)
        cur = linalg.row_basis(linalg.matmul(K, cur, p), p) if K.shape[0] else np.zeros((0, A.length), dtype=np.int64)
        i += 1
    return cur


# -- locality certificate ------------------------------------------------------------


def local_certificate(A: FiniteAlgebra) -> dict:
    """Decide whether the unital algebra A is local.

    Returns a dict with the radical dimension, whether A/J is commutative,
    the dimension of the Frobenius-fixed subalgebra of A/J (when
    commutative), and ``local``.  When A/J is commutative but not a field,
    ``splitter`` holds an element of A whose image in A/J is a non-scalar
    Frobenius-fixed element.
    """
    p = A.p
    J = radical(A)
    d = A.dim
    Jc = np.array([A.coords(j) for j in J], dtype=np.int64).reshape(-1, d)
    if Jc.shape[0]:
        RJ, pj = linalg.rref(Jc, p)
    else:
        RJ, pj = np.zeros((0, d), dtype=np.int64), np.zeros(0, dtype=np.int64)
    free = np.setdiff1d(np.arange(d), pj)
    out = {"dim": d, "radical_dim": int(Jc.shape[0]), "commutative": True, "fixed_dim": None, "local": False, "splitter": None}

    def mod_j(x):
        x = np.asarray(x, dtype=np.int64) % p
        if len(pj):
            x = (x - linalg.matmul(x[pj][None, :], RJ, p)[0]) % p
        return x

    comp = []
    for f in free:
        c = np.zeros(d, dtype=np.int64)
        c[f] = 1
        comp.append(A.element(c))
    for i in range(len(comp)):
        for j in range(i + 1, len(comp)):
            ab = A.coords(A.mul(comp[i], comp[j]))
            ba = A.coords(A.mul(comp[j], comp[i]))
            if np.any(mod_j(ab - ba)):
                out["commutative"] = False
                return out
    one = A.one()
    # Frobenius x -> x^p - x on A/J, in the basis comp
    F = np.zeros((len(comp), len(comp)), dtype=np.int64)
    for k, b in enumerate(comp):
        y = mod_j(A.coords(A.power(b, p, one)) - A.coords(b))
        F[:, k] = y[free]
    fixed = linalg.nullspace(F, p)
    out["fixed_dim"] = int(fixed.shape[0])
    out["local"] = fixed.shape[0] == 1
    if fixed.shape[0] > 1:
        one_q = mod_j(A.coords(one))[free]
        for v in fixed:
            if linalg.rank(np.vstack([one_q, v]), p) == 2:
                out["splitter"] = A.element(np.bincount(free, weights=v, minlength=d).astype(np.int64) % p)
                break
    return out


# -- driver --------------------------------------------------------------------------


def _split_once(A: FiniteAlgebra, e, rng, tries: int, certificates: list):
    p = A.p
    C = A.corner(e)
    if C.shape[0] <= 1:
        certificates.append({"dim": int(C.shape[0]), "radical_dim": 0, "commutative": True, "fixed_dim": 1, "local": True})
        return None

    def rand_elt():
        c = rng.integers(0, p, size=C.shape[0])
        return linalg.matmul(c[None, :], C, p)[0]

    for _ in range(min(tries, 8)):
        pieces = fitting_idempotents(A, rand_elt(), e)
        if pieces:
            return pieces
    sizes, raw = A.restricted_rows(e, C)
    Ce = FiniteAlgebra(sizes, raw, p)
    cert = local_certificate(Ce)
    if cert["local"]:
        certificates.append({k: v for k, v in cert.items() if k != "splitter"})
        return None
    if cert["splitter"] is not None:
        c = linalg.solve(raw.T, cert["splitter"], p)
        a = linalg.matmul(c[None, :], C, p)[0]
        pieces = fitting_idempotents(A, a, e)
        if pieces:
            return pieces
    for _ in range(tries):
        pieces = fitting_idempotents(A, rand_elt(), e)
        if pieces:
            return pieces
    raise NotSplit("corner algebra is not local but no splitting element was found")


def split_idempotents(A: FiniteAlgebra, seed: int | None = None, tries: int = 200, with_certificates: bool = False):
    """A complete set of orthogonal primitive idempotents of A.

    Deterministic: the random elements come from a generator seeded by the
    content hash of A unless ``seed`` is given.
    """
    rng = np.random.default_rng(A.content_seed() if seed is None else seed)
    stack = [A.one()]
    out = []
    certs: list = []
    while stack:
        e = stack.pop()
        pieces = _split_once(A, e, rng, tries, certs)
        if pieces is None:
            out.append(e)
        else:
            stack.extend(reversed(pieces))
    check_idempotents(A, out)
    return (out, certs) if with_certificates else out


def check_idempotents(A: FiniteAlgebra, es) -> None:
    """Raise unless the e_i are orthogonal idempotents in A summing to 1."""
    p = A.p
    total = A.zero()
    for i, e in enumerate(es):
        if not A.contains(e):
            raise AssertionError(f"idempotent {i} is not in the algebra")
        total = (total + e) % p
        for j, f in enumerate(es):
            prod = A.mul(e, f)
            want = e if i == j else A.zero()
            if not np.array_equal(prod % p, want % p):
                raise AssertionError(f"idempotent certificate fails at ({i}, {j})")
    if not np.array_equal(total, A.one()):
        raise AssertionError("idempotents do not sum to 1")
