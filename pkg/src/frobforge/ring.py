"""Weighted-graded quotient rings S/I over F_p.

The monomial order is weighted degree first, then reverse lexicographic
with variables in declaration order (x_0 > x_1 > ...).  Gröbner bases are
reduced and monic, so normal forms are canonical.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Sequence

import numpy as np

from .polynomial import (
    InhomogeneousError,
    Monomial,
    Polynomial,
    add_into,
    mono_add,
    mono_divides,
    mono_lcm,
    mono_sub,
    wdeg,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def order_key(m: Monomial, weights: Sequence[int]):
    return (wdeg(m, weights), tuple(-e for e in reversed(m)))


def _lead(f: dict, weights) -> Monomial:
    return max(f, key=lambda m: order_key(m, weights))


def _monic(f: dict, p: int, weights) -> dict:
    lm = _lead(f, weights)
    inv = pow(f[lm], p - 2, p)
    return {m: (c * inv) % p for m, c in f.items()}


def _reduce_full(f: dict, basis: list[dict], leads: list, p: int, weights) -> dict:
    """Full normal form of ``f`` by a list of monic polynomials."""
    f = dict(f)
    rem: dict = {}
    while f:
        m = _lead(f, weights)
        c = f[m]
        for g, lm in zip(basis, leads):
            if mono_divides(lm, m):
                t = mono_sub(m, lm)
                for gm, gc in g.items():
                    mm = mono_add(t, gm)
                    v = (f.get(mm, 0) - c * gc) % p
                    if v:
                        f[mm] = v
                    else:
                        f.pop(mm, None)
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def groebner(generators: Sequence[Polynomial], weights: Sequence[int]) -> list[Polynomial]:
    """Reduced Gröbner basis of homogeneous generators.

    Buchberger's algorithm; pairs are processed by the weighted degree of
    their lcm (the sugar of a homogeneous pair), ties broken by the order.
    The output is sorted by leading monomial, largest first.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return []
    p, n = gens[0].p, gens[0].nvars
    for g in gens:
        if not g.is_homogeneous(weights):
            raise InhomogeneousError(f"generator {g!r} is not homogeneous for weights {tuple(weights)}")
    basis = [_monic(g.terms, p, weights) for g in gens]
    basis.sort(key=lambda f: order_key(_lead(f, weights), weights))
    leads = [_lead(f, weights) for f in basis]

    pairs = []
    for i in range(len(basis)):
        for j in range(i):
            pairs.append((i, j))

    def pair_key(ij):
        l = mono_lcm(leads[ij[0]], leads[ij[1]])
        return (order_key(l, weights), ij)

    while pairs:
        pairs.sort(key=pair_key, reverse=True)
        i, j = pairs.pop()
        li, lj = leads[i], leads[j]
        l = mono_lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leads: criterion 1
        s: dict = {}
        add_into(s, {mono_add(mono_sub(l, li), m): c for m, c in basis[i].items()}, p)
        add_into(s, {mono_add(mono_sub(l, lj), m): c for m, c in basis[j].items()}, p, -1)
        r = _reduce_full(s, basis, leads, p, weights)
        if r:
            r = _monic(r, p, weights)
            basis.append(r)
            leads.append(_lead(r, weights))
            k = len(basis) - 1
            pairs.extend((k, t) for t in range(k))

    # minimalize, then inter-reduce
    keep = []
    for i, li in enumerate(leads):
        if any(mono_divides(lj, li) and (lj != li or j < i) for j, lj in enumerate(leads) if j != i):
            continue
        keep.append(i)
    basis = [basis[i] for i in keep]
    leads = [leads[i] for i in keep]
    reduced = []
    for i, f in enumerate(basis):
        others = [g for j, g in enumerate(basis) if j != i]
        olead = [l for j, l in enumerate(leads) if j != i]
        tail = {m: c for m, c in f.items() if m != leads[i]}
        red = _reduce_full(tail, others, olead, p, weights)
        red[leads[i]] = 1
        reduced.append(red)
    reduced.sort(key=lambda f: order_key(_lead(f, weights), weights), reverse=True)
    return [Polynomial(f, p, n) for f in reduced]


class GradedRing:
    """R = F_p[x_1..x_n]/I with positive integer weights on the variables."""

    def __init__(
        self,
        p: int,
        variables: Sequence[str],
        weights: Sequence[int] | None = None,
        ideal: Sequence[Polynomial] = (),
        label: str = "",
    ):
        if not is_prime(p):
            raise ValueError("p must be prime")
        self.p = p
        self.variables = tuple(variables)
        self.n = len(self.variables)
        self.weights = tuple(weights) if weights is not None else (1,) * self.n
        if len(self.weights) != self.n:
            raise ValueError("one weight per variable required")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive (R_0 = k)")
        for g in ideal:
            if g.p != p or g.nvars != self.n:
                raise ValueError("variable-count or prime mismatch in ideal generator")
        self.ideal = tuple(g for g in ideal if not g.is_zero())
        self.label = label
        self.gb = groebner(self.ideal, self.weights)
        self._gb_data = []
        for g in self.gb:
            lm = _lead(g.terms, self.weights)
            tail = {m: (-c) % p for m, c in g.terms.items() if m != lm}
            self._gb_data.append((lm, tail))
        self._nf_cache: dict = {}
        self._basis_cache: dict = {}
        self._index_cache: dict = {}
        self._mono_cache: dict = {}
        self._nfvec_cache: dict = {}
        self._mult_cache: dict = {}

    # basic API ------------------------------------------------------------
    def __repr__(self):
        return f"GradedRing(p={self.p}, vars={self.variables}, weights={self.weights}, ideal={[g.to_str(self.variables) for g in self.ideal]})"

    def poly(self, terms) -> Polynomial:
        return Polynomial(terms, self.p, self.n)

    def var(self, i: int) -> Polynomial:
        return Polynomial.variable(i, self.p, self.n)

    def one(self) -> Polynomial:
        return Polynomial.constant(1, self.p, self.n)

    def degree(self, f: Polynomial) -> int | None:
        return f.homogeneous_degree(self.weights)

    def key(self, m: Monomial):
        return order_key(m, self.weights)

    def leading_monomials(self) -> list[Monomial]:
        return [lm for lm, _ in self._gb_data]

    def _reducer(self, m: Monomial):
        for lm, tail in self._gb_data:
            if mono_divides(lm, m):
                return lm, tail
        return None

    # normal forms -----------------------------------------------------------
    def nf_monomial(self, m: Monomial) -> dict:
        """Normal form of a monomial as a dict (shared, do not mutate)."""
        cache = self._nf_cache
        hit = cache.get(m)
        if hit is not None:
            return hit
        p = self.p
        stack = [m]
        while stack:
            top = stack[-1]
            if top in cache:
                stack.pop()
                continue
            red = self._reducer(top)
            if red is None:
                cache[top] = {top: 1}
                stack.pop()
                continue
            lm, tail = red
            t = mono_sub(top, lm)
            kids = [mono_add(t, mm) for mm in tail]
            missing = [k for k in kids if k not in cache]
            if missing:
                stack.extend(missing)
                continue
            acc: dict = {}
            for k, c in zip(kids, tail.values()):
                add_into(acc, cache[k], p, c)
            cache[top] = acc
            stack.pop()
        return cache[m]

    def reduce(self, f: Polynomial) -> Polynomial:
        """Unique normal form of ``f`` modulo the Gröbner basis."""
        if f.nvars != self.n:
            raise ValueError(f"variable-count mismatch: {f.nvars} vs {self.n}")
        if f.p != self.p:
            raise ValueError("prime mismatch")
        acc: dict = {}
        for m, c in f.terms.items():
            add_into(acc, self.nf_monomial(m), self.p, c)
        return Polynomial(acc, self.p, self.n)

    def reduce_dict(self, f: dict) -> dict:
        acc: dict = {}
        for m, c in f.items():
            add_into(acc, self.nf_monomial(m), self.p, c)
        return acc

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    # graded pieces ----------------------------------------------------------
    def monomials_of_degree(self, d: int) -> list[Monomial]:
        """All monomials of weighted degree d, largest first in the order."""
        if d < 0:
            return []
        hit = self._mono_cache.get(d)
        if hit is not None:
            return hit
        w = self.weights
        out = []

        def rec(i, left, acc):
            if i == self.n - 1:
                if left % w[i] == 0:
                    out.append(tuple(acc + [left // w[i]]))
                return
            for e in range(left // w[i], -1, -1):
                rec(i + 1, left - e * w[i], acc + [e])

        if self.n:
            rec(0, d, [])
        elif d == 0:
            out.append(())
        out.sort(key=self.key, reverse=True)
        self._mono_cache[d] = out
        return out

    def degree_basis(self, d: int) -> list[Monomial]:
        """Standard monomials of weighted degree d (a k-basis of R_d)."""
        if d < 0:
            return []
        hit = self._basis_cache.get(d)
        if hit is None:
            leads = self.leading_monomials()
            hit = [m for m in self.monomials_of_degree(d) if not any(mono_divides(l, m) for l in leads)]
            self._basis_cache[d] = hit
            self._index_cache[d] = {m: i for i, m in enumerate(hit)}
        return hit

    def hilbert(self, d: int) -> int:
        return len(self.degree_basis(d))

    def basis_index(self, d: int) -> dict:
        self.degree_basis(d)
        return self._index_cache.get(d, {})

    def nf_vector_sparse(self, m: Monomial) -> tuple[int, list[tuple[int, int]]]:
        """(degree, [(basis index, coeff)]) for the normal form of monomial m."""
        hit = self._nfvec_cache.get(m)
        if hit is None:
            d = wdeg(m, self.weights)
            idx = self.basis_index(d)
            hit = (d, [(idx[mm], c) for mm, c in self.nf_monomial(m).items()])
            self._nfvec_cache[m] = hit
        return hit

    def to_vector(self, f: Polynomial | dict, d: int) -> np.ndarray:
        """Coordinates of homogeneous f (degree d) in the basis of R_d."""
        terms = f.terms if isinstance(f, Polynomial) else f
        v = np.zeros(self.hilbert(d), dtype=np.int64)
        for m, c in terms.items():
            dm, entries = self.nf_vector_sparse(m)
            if dm != d:
                raise InhomogeneousError(f"term of degree {dm} in a degree-{d} element")
            for i, cc in entries:
                v[i] = (v[i] + c * cc) % self.p
        return v

    def from_vector(self, v, d: int) -> Polynomial:
        basis = self.degree_basis(d)
        return Polynomial({basis[i]: int(c) for i, c in enumerate(v) if c % self.p}, self.p, self.n)

    def mult_coo(self, f: Polynomial | dict, s: int, q: int = 1):
        """Sparse form (rows, cols, vals, shape) of :meth:`mult_matrix`, cached."""
        terms = f.terms if isinstance(f, Polynomial) else f
        if not terms:
            raise ValueError("mult_matrix needs a nonzero homogeneous polynomial")
        key = (tuple(sorted(terms.items())), s, q)
        hit = self._mult_cache.get(key)
        if hit is not None:
            return hit
        degs = {wdeg(m, self.weights) for m in terms}
        if len(degs) != 1:
            raise InhomogeneousError("mult_matrix requires a homogeneous polynomial")
        t = s + q * degs.pop()
        src = self.degree_basis(s)
        acc: dict = {}
        p = self.p
        for j, mu in enumerate(src):
            for nu, c in terms.items():
                mm = tuple(a + q * b for a, b in zip(mu, nu))
                for i, cc in self.nf_vector_sparse(mm)[1]:
                    acc[(i, j)] = (acc.get((i, j), 0) + c * cc) % p
        items = [(i, j, v) for (i, j), v in acc.items() if v]
        arr = np.array(items, dtype=np.int64).reshape(-1, 3)
        hit = (arr[:, 0], arr[:, 1], arr[:, 2], (self.hilbert(t), len(src)))
        if len(self._mult_cache) > 200_000:
            self._mult_cache.clear()
        self._mult_cache[key] = hit
        return hit

    def mult_matrix(self, f: Polynomial | dict, s: int, q: int = 1) -> np.ndarray:
        """Matrix of r -> f^[q] * r from R_s to R_{s + q deg f}.

        ``f^[q]`` is f with exponents scaled by q (its q-th power over F_p).
        Column j is the image of the j-th basis monomial of R_s.
        """
        rows, cols, vals, shape = self.mult_coo(f, s, q)
        M = np.zeros(shape, dtype=np.int64)
        M[rows, cols] = vals
        return M

    def frob_action_matrix(self, u: Polynomial | dict, s: int, q: int) -> np.ndarray:
        """Matrix of r -> r^q * u from R_s to R_{q s + deg u}."""
        terms = u.terms if isinstance(u, Polynomial) else u
        degs = {wdeg(m, self.weights) for m in terms}
        if len(degs) != 1:
            raise InhomogeneousError("frob_action_matrix requires a nonzero homogeneous element")
        src = self.degree_basis(s)
        t = q * s + degs.pop()
        M = np.zeros((self.hilbert(t), len(src)), dtype=np.int64)
        p = self.p
        for j, mu in enumerate(src):
            for nu, c in terms.items():
                mm = tuple(q * a + b for a, b in zip(mu, nu))
                for i, cc in self.nf_vector_sparse(mm)[1]:
                    M[i, j] = (M[i, j] + c * cc) % p
        return M

    # invariants -------------------------------------------------------------
    @cached_property
    def dimension(self) -> int:
        """Krull dimension, from the initial ideal (max independent variable set)."""
        leads = self.leading_monomials()
        for size in range(self.n, -1, -1):
            for U in itertools.combinations(range(self.n), size):
                Us = set(U)
                if not any(all(i in Us for i, e in enumerate(l) if e) for l in leads):
                    return size
        return 0

    def is_complete_intersection(self) -> bool:
        return self.n - self.dimension == len(self.ideal)

    def a_invariant(self) -> int:
        """sum(deg g_j) - sum(w_i) for a complete intersection."""
        if not self.is_complete_intersection():
            raise ValueError("a_invariant is only computed for complete intersections")
        return sum(self.degree(g) for g in self.ideal) - sum(self.weights)

    def is_hypersurface(self) -> bool:
        return len(self.ideal) == 1

    def is_polynomial_ring(self) -> bool:
        return not self.ideal


def reduce(f: Polynomial, ring: GradedRing) -> Polynomial:
    return ring.reduce(f)


def degree_basis(ring: GradedRing, d: int) -> list[Monomial]:
    return ring.degree_basis(d)


def a_invariant(ring: GradedRing) -> int:
    return ring.a_invariant()
