"""Differential operators on R as q-linear endomorphisms.

A level-e operator of degree d is an R^q-linear map delta: R -> R with
delta(R_m) in R_{m+d}, q = p^e.  Equivalently it is an R-linear map
F_*^e R -> F_*^e R, so it splits over the residue classes M_c of the
pushforward; on each class it is determined by the images of the class
generators (a subset of the digit monomials).  The operator space in a
given (e, d) is the direct sum of the per-class solution spaces.

Localized elements r/x^n are acted on through a common denominator:
delta(r/x^n) = delta(r x^{q-n}) / x^q for n <= q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg
from .frobenius import DEFAULT_GENERATOR_BUDGET, FrobeniusModule, cached_pushforward, check_budget, digit_monomials
from .parallel import pmap
from .polynomial import InhomogeneousError, Monomial, Polynomial, add_into, wdeg
from .ring import GradedRing


class PLinearOperator:
    """A degree-d, p^e-linear endomorphism of R.

    ``parts[c]`` lists the images of the generators of class c (vectors in
    R_{g_i + d}, or None for zero); classes missing from ``parts`` act by 0.
    """

    def __init__(self, module: FrobeniusModule, d: int, parts: dict):
        self.module = module
        self.ring = module.ring
        self.e = module.e
        self.q = module.q
        self.degree = d
        self.parts = parts
        self._mats: dict = {}

    def __repr__(self):
        return f"PLinearOperator(e={self.e}, degree={self.degree}, classes={sorted(self.parts)})"

    @classmethod
    def from_function(cls, module: FrobeniusModule, d: int, fn: Callable[[Polynomial], Polynomial]) -> "PLinearOperator":
        """Operator whose generator images are fn(u_i); no linearity check is made."""
        R = module.ring
        parts = {}
        for C in module.classes():
            imgs = []
            for i, g in enumerate(C.gen_degrees):
                out = R.reduce(fn(R.poly({C.gens[i]: 1})))
                imgs.append(R.to_vector(out, g + d) if not out.is_zero() else None)
            if any(v is not None for v in imgs):
                parts[C.c] = imgs
        return cls(module, d, parts)

    def is_well_defined(self) -> bool:
        """Whether the generator images respect every relation of their class."""
        R, p = self.ring, self.ring.p
        for c, imgs in self.parts.items():
            C = self.module.class_module(c)
            for col, r in zip(C.columns, C.col_degrees):
                if R.hilbert(r + self.degree) == 0:
                    continue
                acc = np.zeros(R.hilbert(r + self.degree), dtype=np.int64)
                for i, f in col.items():
                    if imgs[i] is None:
                        continue
                    s = (r - C.gen_degrees[i]) // self.q
                    acc += linalg.matmul(C.act(f, s, C.gen_degrees[i] + self.degree), imgs[i][:, None], p)[:, 0]
                if np.any(acc % p):
                    return False
        return True

    def matrix(self, D: int) -> np.ndarray:
        """Matrix of the operator from R_D to R_{D+d} in the standard monomial bases."""
        hit = self._mats.get(D)
        if hit is None:
            R = self.ring
            imgs = self.parts.get(D % self.q)
            if imgs is None or R.hilbert(D) == 0:
                hit = np.zeros((R.hilbert(D + self.degree), R.hilbert(D)), dtype=np.int64)
            else:
                hit = self.module.class_module(D % self.q).morphism_on(imgs, D, self.degree)
            self._mats[D] = hit
        return hit

    def apply(self, f) -> Polynomial:
        """delta(f) in normal form; f may be inhomogeneous and need not be reduced."""
        R = self.ring
        terms = f.terms if isinstance(f, Polynomial) else f
        red = R.reduce_dict(terms)
        by_deg: dict = {}
        for m, c in red.items():
            by_deg.setdefault(wdeg(m, R.weights), {})[m] = c
        out: dict = {}
        for D, part in sorted(by_deg.items()):
            if R.hilbert(D + self.degree) == 0:
                continue
            v = self.matrix(D) @ R.to_vector(part, D) % R.p
            add_into(out, R.from_vector(v, D + self.degree).terms, R.p)
        return R.poly(out)

    __call__ = apply

    def image(self, a: Monomial) -> Polynomial:
        """delta(x^a) for a digit monomial a."""
        if any(x >= self.q for x in a):
            raise ValueError(f"{a} is not a digit monomial for q = {self.q}")
        return self.apply({tuple(a): 1})

    def digit_images(self) -> dict:
        """The full map x^a -> delta(x^a) over all q^n digit monomials."""
        return {a: self.image(a) for a in digit_monomials(self.ring.n, self.q)}


@dataclass
class OperatorSpace:
    ring: GradedRing
    e: int
    degree: int
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)


def _class_basis(M: FrobeniusModule, c: int, d: int) -> list[PLinearOperator]:
    C = M.class_module(c)
    H = C.operators(d)
    out = []
    for row in range(H.dim):
        imgs = [H.image(row, i) if H.degrees[i] is not None else None for i in range(C.ngens)]
        out.append(PLinearOperator(M, d, {c: imgs}))
    return out


def operator_space(ring: GradedRing, e: int, d: int, budget: int = DEFAULT_GENERATOR_BUDGET) -> OperatorSpace:
    """Basis of the level-e, degree-d differential operators on R."""
    M = cached_pushforward(ring, e, budget)
    basis = [op for part in pmap(lambda c: _class_basis(M, c, d), range(M.q)) for op in part]
    return OperatorSpace(ring, e, d, basis)


def operator_dim(ring: GradedRing, e: int, d: int, budget: int = DEFAULT_GENERATOR_BUDGET) -> int:
    M = cached_pushforward(ring, e, budget)
    return sum(pmap(lambda c: M.class_module(c).operators(d).dim, range(M.q)))


@dataclass
class NegativeDegreeScan:
    """Outcome of a bounded search for negative-degree operators.

    ``cells[(e, d)] = (dim, how)`` with ``how`` in {"computed", "inferred"};
    inferred cells carry dim 0 and follow from a computed absence (see
    :func:`min_negative_degree`).
    """

    e_max: int
    d_min: int
    witness: tuple | None
    cells: dict

    def bounds(self) -> str:
        return f"(e_max={self.e_max}, d_min={self.d_min})"

    def summary(self) -> str:
        if self.witness is None:
            return f"none up to {self.bounds()}"
        e, d = self.witness
        return f"degree {d} at level e={e}"


def negative_degree_scan(
    ring: GradedRing,
    e_max: int,
    d_min: int,
    domain: bool = False,
    budget: int = DEFAULT_GENERATOR_BUDGET,
) -> NegativeDegreeScan:
    """Scan d = -1, -2, ..., d_min for the first degree carrying an operator.

    Two facts keep the scan small.  Level-e operators are level-(e+1)
    operators, so absence at e_max settles every lower level.  When the
    caller asserts that R is a domain, multiplying a degree-d operator by a
    nonzero s in R_k gives a nonzero operator of degree d + k; hence absence
    at degree d' rules out every d < d' with R_{d'-d} != 0.
    """
    if e_max < 1:
        raise ValueError("e_max must be positive")
    if d_min > -1:
        raise ValueError("d_min must be negative")
    for e in range(1, e_max + 1):
        check_budget(ring, e, budget)
    cells: dict = {}
    absent: list[int] = []  # degrees computed empty at level e_max
    for d in range(-1, d_min - 1, -1):
        if domain and any(ring.hilbert(dp - d) for dp in absent):
            for e in range(1, e_max + 1):
                cells[(e, d)] = (0, "inferred")
            continue
        top = operator_dim(ring, e_max, d, budget)
        cells[(e_max, d)] = (top, "computed")
        if top == 0:
            absent.append(d)
            for e in range(1, e_max):
                cells[(e, d)] = (0, "inferred")
            continue
        for e in range(1, e_max):
            n = operator_dim(ring, e, d, budget)
            cells[(e, d)] = (n, "computed")
            if n:
                return NegativeDegreeScan(e_max, d_min, (e, d), cells)
        return NegativeDegreeScan(e_max, d_min, (e_max, d), cells)
    return NegativeDegreeScan(e_max, d_min, None, cells)


def min_negative_degree(ring: GradedRing, e_max: int, d_min: int, domain: bool = False, budget: int = DEFAULT_GENERATOR_BUDGET):
    """(e, d) for the largest d < 0 carrying an operator at the smallest level e, or None."""
    return negative_degree_scan(ring, e_max, d_min, domain, budget).witness


@dataclass(frozen=True)
class LocalizedElement:
    """numerator / base^n in R[1/base]; the numerator is kept in normal form."""

    numerator: Polynomial
    n: int
    base: Polynomial
    ring: GradedRing = field(compare=False, repr=False)

    @classmethod
    def make(cls, ring: GradedRing, r, x: Polynomial, n: int) -> "LocalizedElement":
        if n < 0:
            raise ValueError("denominator exponent must be nonnegative")
        r = r if isinstance(r, Polynomial) else ring.poly(r)
        return cls(ring.reduce(r), n, ring.reduce(x), ring)

    @property
    def degree(self):
        """deg(numerator) - n deg(base); None for zero."""
        if self.numerator.is_zero():
            return None
        dr = self.ring.degree(self.numerator)
        if dr is None:
            raise InhomogeneousError("numerator is not homogeneous")
        return dr - self.n * self.ring.degree(self.base)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def equals(self, other: "LocalizedElement") -> bool:
        """r/x^n == s/x^m, decided as r x^m == s x^n (x a nonzerodivisor)."""
        R = self.ring
        lhs = R.reduce(self.numerator * self.base ** other.n)
        rhs = R.reduce(other.numerator * other.base ** self.n)
        return lhs == rhs


def act_localized(delta: PLinearOperator, u: LocalizedElement) -> LocalizedElement:
    """delta(r / x^n) = delta(r x^{q-n}) / x^q, for n <= q."""
    q = delta.q
    if u.n > q:
        raise ValueError(f"denominator exponent {u.n} exceeds q = {q}; raise the level e")
    R = delta.ring
    num = delta.apply(u.numerator * u.base ** (q - u.n))
    return LocalizedElement(num, q, u.base, R)


def localization_generation(ring: GradedRing, x: Polynomial, e: int, t: int, budget: int = DEFAULT_GENERATOR_BUDGET) -> bool:
    """Whether 1/x^t lies in the span of delta(1/x) over level-e operators delta.

    Only operators of degree -(t-1) deg x can reach the degree of 1/x^t, and
    delta(1/x) = delta(x^{q-1})/x^q only sees the residue class of
    x^{q-1}, so one class and one degree decide the question.  Membership
    is tested on numerators over the common denominator x^q.
    """
    q = ring.p**e
    if t < 1:
        raise ValueError("t must be positive")
    if t > q:
        raise ValueError(f"t = {t} exceeds q = {q}; raise the level e")
    x = ring.reduce(x)
    dx = ring.degree(x)
    if x.is_zero() or dx is None or dx <= 0:
        raise ValueError("x must be a nonzero homogeneous element of positive degree")
    M = cached_pushforward(ring, e, budget)
    d0 = -(t - 1) * dx
    src = ring.reduce(x ** (q - 1))
    D = (q - 1) * dx
    tgt_deg = D + d0
    target = ring.to_vector(ring.reduce(x ** (q - t)), tgt_deg)
    if not np.any(target):
        return True
    ops = _class_basis(M, D % q, d0)
    if not ops:
        return False
    v = ring.to_vector(src, D)
    rows = np.array([op.matrix(D) @ v % ring.p for op in ops])
    return linalg.in_span(rows, target, ring.p)
