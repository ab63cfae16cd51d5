"""Frobenius pushforwards F_*^e R, Fedder's criterion and splitting numbers.

F_*^e R is graded by (1/q)Z: the element r in R_d sits in degree d/q.  Grades
are stored as integer numerators over the denominator q.  As an R-module it
splits by residue class, F_*^e R = (+)_c M_c with M_c = (+)_{d = c mod q} R_d,
and every computation below works one class at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .errors import BudgetExceeded
from .polynomial import Monomial, Polynomial, add_into, dict_mul, mono_add, wdeg
from .gradedmod import GradedModule
from .presentation import HomSolution
from .ring import GradedRing

DEFAULT_GENERATOR_BUDGET = 2**14


def digit_split(f: Polynomial, e: int) -> dict[Monomial, Polynomial]:
    """Cofactors c_a with f = sum_a c_a^q x^a over digit monomials a (a_i < q)."""
    if e < 1:
        raise ValueError("e must be positive")
    q = f.p**e
    out: dict = {}
    for m, c in f.terms.items():
        a = tuple(x % q for x in m)
        quo = tuple(x // q for x in m)
        out.setdefault(a, {})[quo] = c
    return {a: Polynomial(t, f.p, f.nvars) for a, t in out.items()}


def _digit_split_dict(terms: dict, q: int) -> dict:
    out: dict = {}
    for m, c in terms.items():
        a = tuple(x % q for x in m)
        out.setdefault(a, {})[tuple(x // q for x in m)] = c
    return out


def digit_monomials(n: int, q: int) -> list[Monomial]:
    grids = np.indices((q,) * n).reshape(n, -1).T if n else np.zeros((1, 0), dtype=int)
    return [tuple(int(x) for x in row) for row in grids]


@dataclass
class SplittingRecord:
    e: int
    a_e: int
    ratio: Fraction

    def as_dict(self) -> dict:
        return {"e": self.e, "a_e": self.a_e, "ratio": str(self.ratio)}


class FrobeniusClass(GradedModule):
    """Minimal presentation over R of the residue-class summand M_c of F_*^e R.

    Generators are digit monomials u_i = x^{a_i} with R-degree g_i = |a_i|_w
    (scaled degree g_i/q).  A relation column of R-degree r reads
    sum_i A_i^q u_i = 0 in R_r, with A_i in R of degree (r - g_i)/q.  The
    degree-D piece of M_c is R_D itself.
    """

    def __init__(self, ring: GradedRing, q: int, c: int, gens: list[Monomial], columns: list[dict], col_degrees: list[int]):
        self.ring = ring
        self.q = q
        self.den = q
        self.c = c
        self.gens = gens
        self.gen_degrees = [wdeg(a, ring.weights) for a in gens]
        self.columns = columns
        self.col_degrees = col_degrees
        self.gen_polys = [ring.nf_monomial(a) for a in gens]

    def dim(self, D: int) -> int:
        return self.ring.hilbert(D) if D >= 0 else 0

    def act(self, f, s: int, D: int) -> np.ndarray:
        return self.ring.mult_matrix(f, D, self.q)

    def act_sparse(self, f, s: int, D: int):
        return self.ring.mult_coo(f, D, self.q)

    def gen_vector(self, i: int) -> np.ndarray:
        return self.ring.to_vector(self.gen_polys[i], self.gen_degrees[i])

    def image_block(self, v: np.ndarray, D: int, s: int) -> np.ndarray:
        return self.ring.frob_action_matrix(self.ring.from_vector(v, D), s, self.q)

    def operators(self, d: int) -> HomSolution:
        """R-linear maps M_c -> F_*R of scaled degree d/q, by images of the u_i."""
        return self.morphisms(d)


@dataclass
class FrobeniusModule:
    """F_*^e R presented over S on the q^n digit monomials.

    ``columns[j]`` maps digit index -> cofactor in S; column j has scaled
    degree ``column_shifts[j] / q`` and each digit a has shift |a|_w / q.
    """

    ring: GradedRing
    e: int
    q: int
    digits: list[Monomial]
    shifts: list[int]
    columns: list[dict[int, Polynomial]]
    column_shifts: list[int]
    _classes: dict = field(default_factory=dict, repr=False)

    @property
    def denominator(self) -> int:
        return self.q

    @property
    def ngens(self) -> int:
        return len(self.digits)

    def generator_degrees(self) -> list[Fraction]:
        return [Fraction(s, self.q) for s in self.shifts]

    def cokernel_dim(self, d: int) -> int:
        """dim_k of the degree-(d/q) piece of the cokernel over S (no use of R)."""
        R, q, p = self.ring, self.q, self.ring.p
        # polynomial-ring bases: monomials of S in each degree
        offs = {}
        total = 0
        for i, s in enumerate(self.shifts):
            if (d - s) >= 0 and (d - s) % q == 0:
                mons = R.monomials_of_degree((d - s) // q)
                offs[i] = (total, {m: k for k, m in enumerate(mons)})
                total += len(mons)
        if total == 0:
            return 0
        images = []
        for j, col in enumerate(self.columns):
            t = d - self.column_shifts[j]
            if t < 0 or t % q:
                continue
            for mu in R.monomials_of_degree(t // q):
                v = np.zeros(total, dtype=np.int64)
                for i, f in col.items():
                    base, index = offs[i]
                    for m, c in f.terms.items():
                        k = index[mono_add(m, mu)]
                        v[base + k] = (v[base + k] + c) % p
                images.append(v)
        if not images:
            return total
        return total - linalg.rank(np.array(images), p)

    def class_module(self, c: int) -> FrobeniusClass:
        hit = self._classes.get(c)
        if hit is None:
            hit = _prune_class(self, c)
            self._classes[c] = hit
        return hit

    def classes(self) -> list[FrobeniusClass]:
        return [self.class_module(c) for c in range(self.q)]


def check_budget(ring: GradedRing, e: int, budget: int = DEFAULT_GENERATOR_BUDGET):
    if e < 1:
        raise ValueError("e must be positive")
    count = ring.p ** (e * ring.n)
    if count > budget:
        raise BudgetExceeded(f"F_*^{e} R needs {count} digit generators (budget {budget})")


def pushforward(ring: GradedRing, e: int, budget: int = DEFAULT_GENERATOR_BUDGET) -> FrobeniusModule:
    """Digit presentation of F_*^e R: free on x^a, modulo digit expansions of x^b g_j."""
    check_budget(ring, e, budget)
    q = ring.p**e
    digits = digit_monomials(ring.n, q)
    index = {a: i for i, a in enumerate(digits)}
    shifts = [wdeg(a, ring.weights) for a in digits]
    columns, col_shifts = [], []
    for b in digits:
        for g in ring.ideal:
            h = {mono_add(b, m): c for m, c in g.terms.items()}
            split = _digit_split_dict(h, q)
            columns.append({index[a]: Polynomial(t, ring.p, ring.n) for a, t in split.items()})
            col_shifts.append(wdeg(b, ring.weights) + ring.degree(g))
    return FrobeniusModule(ring, e, q, digits, shifts, columns, col_shifts)


def cached_pushforward(ring: GradedRing, e: int, budget: int = DEFAULT_GENERATOR_BUDGET) -> FrobeniusModule:
    """:func:`pushforward`, memoised on the ring so pruned classes are shared."""
    check_budget(ring, e, budget)
    cache = ring.__dict__.setdefault("_push_cache", {})
    M = cache.get(e)
    if M is None:
        M = pushforward(ring, e, budget)
        cache[e] = M
    return M


def _prune_class(M: FrobeniusModule, c: int) -> FrobeniusClass:
    """Restrict the digit presentation to class c and cancel unit entries."""
    R, q, p = M.ring, M.q, M.ring.p
    rows = [i for i, s in enumerate(M.shifts) if s % q == c]
    rowdeg = {i: M.shifts[i] for i in rows}
    cols = []
    coldeg = []
    for j, col in enumerate(M.columns):
        if M.column_shifts[j] % q != c:
            continue
        red = {}
        for i, f in col.items():
            r = R.reduce_dict(f.terms)
            if r:
                red[i] = r
        if red:
            cols.append(red)
            coldeg.append(M.column_shifts[j])
    alive = set(rows)
    while True:
        pick = None
        for j, col in enumerate(cols):
            for i in sorted(col):
                if rowdeg[i] == coldeg[j]:
                    pick = (j, i)
                    break
            if pick:
                break
        if pick is None:
            break
        j, i = pick
        pivot_col = cols[j]
        lam_inv = pow(pivot_col[i][(0,) * R.n], p - 2, p)
        new_cols, new_deg = [], []
        for jj, col in enumerate(cols):
            if jj == j:
                continue
            a = col.get(i)
            if a is not None:
                col = dict(col)
                factor = {m: (v * lam_inv) % p for m, v in a.items()}
                for k, b in pivot_col.items():
                    if k == i:
                        continue
                    prod = R.reduce_dict(dict_mul(factor, b, p))
                    cur = dict(col.get(k, {}))
                    add_into(cur, prod, p, -1)
                    if cur:
                        col[k] = cur
                    else:
                        col.pop(k, None)
                del col[i]
            if col:
                new_cols.append(col)
                new_deg.append(coldeg[jj])
        cols, coldeg = new_cols, new_deg
        alive.discard(i)
    keep = sorted(alive, key=lambda i: (rowdeg[i], i))
    renum = {old: new for new, old in enumerate(keep)}
    cols = [{renum[i]: f for i, f in col.items()} for col in cols]
    return FrobeniusClass(R, q, c, [M.digits[i] for i in keep], cols, coldeg)


def fedder_is_fpure(ring: GradedRing) -> bool:
    """Fedder's criterion for a hypersurface: f^(p-1) has a monomial with all exponents < p."""
    if not ring.is_hypersurface():
        raise ValueError("Fedder's criterion is implemented for hypersurfaces only")
    f = ring.ideal[0]
    p = ring.p
    return any(all(x < p for x in m) for m in (f ** (p - 1)).terms)


def free_rank(ring: GradedRing, e: int, budget: int = DEFAULT_GENERATOR_BUDGET, M: FrobeniusModule | None = None) -> SplittingRecord:
    """a_e: rank of the evaluation pairing Hom_R(F_*^e R, R) x F_*^e R -> k."""
    if M is None:
        M = cached_pushforward(ring, e, budget)
    a = sum(C.free_rank() for C in M.classes())
    return SplittingRecord(e, a, Fraction(a, M.q**ring.dimension))


def f_signature_estimate(ring: GradedRing, e_max: int, budget: int = DEFAULT_GENERATOR_BUDGET) -> list[SplittingRecord]:
    for e in range(1, e_max + 1):
        check_budget(ring, e, budget)
    return [free_rank(ring, e, budget) for e in range(1, e_max + 1)]
