"""Graded Krull-Schmidt decompositions of F_*^e R and fingerprints of summands.

The degree-0 endomorphisms of a graded module M are stored as a matrix
algebra acting on the pieces M_D in the generator degrees D (that action
is faithful, since those pieces contain the generators).  Primitive
idempotents of this algebra cut M into indecomposable graded summands.
Each summand N = eps(M) is fingerprinted by shift-normalized invariants:

* minimal generator degrees, from rank(eps) on M_D / (mM)_D,
* the Hilbert function along D_min + den*k, k = 0..bound,
* whether N is free, read off the evaluation pairing with Hom_R(M, R).

Fingerprints do not decide isomorphism; equal fingerprints are treated
as one class.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .finite_algebra import FiniteAlgebra, split_idempotents
from .frobenius import DEFAULT_GENERATOR_BUDGET, FrobeniusModule, cached_pushforward, pushforward
from .parallel import pmap
from .gradedmod import GradedModule, PresentedModule
from .presentation import ModulePresentation
from .ring import GradedRing


class BoundTooSmall(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SummandFingerprint:
    gen_degrees: tuple
    hilbert: tuple
    is_free: bool

    def as_dict(self) -> dict:
        return {
            "gen_degrees": [str(g) for g in self.gen_degrees],
            "hilbert": list(self.hilbert),
            "is_free": self.is_free,
        }

    @property
    def rank_hint(self) -> int:
        return len(self.gen_degrees)


def default_degree_bound(ring: GradedRing) -> int:
    """2(a + sum w) for complete intersections, never below n * max(w).

    The floor keeps every generator of F_*^e R (scaled degrees in
    [0, n max w)) inside the window, which the plain formula misses for
    polynomial rings.
    """
    base = 2 * (ring.a_invariant() + sum(ring.weights)) if ring.is_complete_intersection() else 0
    return max(base, ring.n * max(ring.weights, default=1))


def _as_module(M) -> GradedModule:
    if isinstance(M, ModulePresentation):
        return PresentedModule(M)
    return M


@dataclass
class EndAlgebra:
    """Degree-0 endomorphisms of a graded module as a block matrix algebra."""

    module: GradedModule
    degrees: list
    algebra: FiniteAlgebra

    def images(self, eps) -> list:
        """Generator images of the endomorphism with flat matrix eps."""
        G = self.module
        blocks = dict(zip(self.degrees, self.algebra.blocks(eps)))
        return [blocks[g] @ G.gen_vector(i) % G.ring.p for i, g in enumerate(G.gen_degrees)]

    def on_degree(self, eps, D: int) -> np.ndarray:
        if D in self.degrees:
            return self.algebra.blocks(eps)[self.degrees.index(D)]
        return self.module.morphism_on(self.images(eps), D, 0)


def graded_end(M, bound: int | None = None) -> EndAlgebra | list:
    """End^0 of a graded module (or of every class of a FrobeniusModule)."""
    if isinstance(M, FrobeniusModule):
        return [graded_end(C, bound) for C in M.classes()]
    G = _as_module(M)
    degs = G.distinct_degrees()
    if bound is not None and degs and Fraction(degs[-1] - degs[0], G.den) > bound:
        raise BoundTooSmall(
            f"generator degrees span {Fraction(degs[-1] - degs[0], G.den)} > degree bound {bound}"
        )
    H = G.morphisms(0)
    sizes = [G.dim(D) for D in degs]
    flats = []
    for row in range(H.dim):
        imgs = [H.image(row, i) for i in range(G.ngens)]
        flats.append(np.concatenate([G.morphism_on(imgs, D, 0).ravel() for D in degs]))
    L = sum(n * n for n in sizes)
    A = FiniteAlgebra(sizes, np.array(flats, dtype=np.int64).reshape(len(flats), L), G.ring.p)
    if A.dim != H.dim:
        raise RuntimeError("endomorphisms are not determined by the generator degrees")
    return EndAlgebra(G, degs, A)


def _generator_coordinates(E: EndAlgebra, eps, D: int):
    """Indices of the degree-D generators and the coordinates of eps(e_i) modulo (mM)_D."""
    G = E.module
    p = G.ring.p
    idx = [i for i, g in enumerate(G.gen_degrees) if g == D]
    gv = np.array([G.gen_vector(i) for i in idx])
    m = G.minimal_part(D)
    basis = np.vstack([gv, m]) if m.shape[0] else gv
    blk = E.algebra.blocks(eps)[E.degrees.index(D)]
    X = linalg.solve(basis.T, linalg.matmul(blk, gv.T, p), p)
    if X is None:
        raise RuntimeError("generator image escapes M_D")
    return idx, X[: len(idx)]


def summand_generators(E: EndAlgebra, eps) -> dict:
    """Minimal generators of eps(M): degree -> generator indices i whose eps(e_i) are used."""
    p = E.module.ring.p
    out = {}
    for D in E.degrees:
        idx, Lam = _generator_coordinates(E, eps, D)
        if not np.any(Lam):
            continue
        piv = linalg.rref(Lam, p)[1]
        out[D] = [idx[k] for k in piv]
    return out


def summand_dim(E: EndAlgebra, eps, D: int, gens: dict | None = None) -> int:
    """dim_k of eps(M)_D, as the rank of the span of R * eps(e_i) over minimal generators."""
    G = E.module
    R = G.ring
    if gens is None:
        gens = summand_generators(E, eps)
    imgs = E.images(eps)
    cols = []
    for i in (i for lst in gens.values() for i in lst):
        s = G._steps(D, G.gen_degrees[i])
        if s >= 0 and R.hilbert(s) and G.dim(D):
            cols.append(G.image_block(imgs[i], G.gen_degrees[i], s))
    if not cols:
        return 0
    return linalg.rank(np.hstack(cols), R.p)


def fingerprint(E: EndAlgebra, eps, bound: int) -> SummandFingerprint:
    G = E.module
    gens = summand_generators(E, eps)
    if not gens:
        raise ValueError("zero idempotent has no fingerprint")
    Dmin = min(gens)
    degs = tuple(sorted(Fraction(D - Dmin, G.den) for D, lst in gens.items() for _ in lst))
    if degs[-1] > bound:
        raise BoundTooSmall(f"summand generators span {degs[-1]} > degree bound {bound}")
    whole = np.array_equal(eps % G.ring.p, E.algebra.one())
    hilb = tuple(
        G.dim(Dmin + G.den * k) if whole else summand_dim(E, eps, Dmin + G.den * k, gens)
        for k in range(bound + 1)
    )
    return SummandFingerprint(degs, hilb, _is_free(E, eps, gens))


def _is_free(E: EndAlgebra, eps, gens: dict) -> bool:
    """Whether eps(M) pairs nontrivially with Hom_R(M, R) modulo m."""
    G = E.module
    p = G.ring.p
    for D in gens:
        Phi = G.pairing_functionals(D)
        if Phi.shape[0] == 0:
            continue
        _, Lam = _generator_coordinates(E, eps, D)
        if np.any(linalg.matmul(Phi, Lam, p)):
            return True
    return False


@dataclass
class Decomposition:
    summands: list  # SummandFingerprint, canonical order
    bound: int
    pieces: list = field(default_factory=list)  # (EndAlgebra, idempotent) per summand

    def classes(self) -> Counter:
        return Counter(self.summands)

    @property
    def free_count(self) -> int:
        return sum(1 for s in self.summands if s.is_free)


def decompose_module(M, bound: int, keep: bool = False) -> Decomposition:
    E = graded_end(M, bound)
    es = split_idempotents(E.algebra)
    tagged = [(fingerprint(E, e, bound), e) for e in es]
    tagged.sort(key=lambda t: t[0])
    return Decomposition([t[0] for t in tagged], bound, [(E, t[1]) for t in tagged] if keep else [])


def decompose(M, bound: int | None = None, keep: bool = False) -> Decomposition:
    """Indecomposable graded summands of F_*^e R (or of any presented module)."""
    if isinstance(M, FrobeniusModule):
        if bound is None:
            bound = default_degree_bound(M.ring)
        parts = pmap(lambda C: decompose_module(C, bound, keep), M.classes())
        out = sorted((s for P in parts for s in P.summands))
        pieces = [pc for P in parts for pc in P.pieces]
        return Decomposition(out, bound, pieces)
    G = _as_module(M)
    if bound is None:
        bound = default_degree_bound(G.ring)
    return decompose_module(G, bound, keep)


@dataclass
class WitnessTable:
    bound: int
    rows: list  # (e, summand count, distinct this e, cumulative distinct)
    classes: dict  # e -> Counter of fingerprints

    def cumulative(self) -> dict:
        return {e: c for e, _, _, c in self.rows}


def ffrt_witness(ring: GradedRing, e_max: int, bound: int | None = None, budget: int = DEFAULT_GENERATOR_BUDGET) -> WitnessTable:
    """Cumulative number of distinct summand fingerprints for e = 1..e_max."""
    if bound is None:
        bound = default_degree_bound(ring)
    seen: set = set()
    rows, classes = [], {}
    for e in range(1, e_max + 1):
        M = cached_pushforward(ring, e, budget)
        dec = decompose(M, bound)
        cnt = Counter(dec.summands)
        seen |= set(cnt)
        rows.append((e, len(dec.summands), len(cnt), len(seen)))
        classes[e] = cnt
    return WitnessTable(bound, rows, classes)


__all__ = [
    "BoundTooSmall",
    "Decomposition",
    "EndAlgebra",
    "SummandFingerprint",
    "WitnessTable",
    "decompose",
    "default_degree_bound",
    "ffrt_witness",
    "fingerprint",
    "graded_end",
    "pushforward",
]
