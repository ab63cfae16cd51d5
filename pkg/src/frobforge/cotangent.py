"""Kähler differentials, their symmetric powers, and graded duals into R.

Omega_R is presented by generators dx_i of degree w_i (twist -w_i) and one
relation column per ideal generator g_j, with entries dg_j/dx_i.  Sym^m of
a presented module M = coker(A) is generated by the degree-m monomials in
the generators of M, modulo (column of A) * (degree m-1 monomial).

The duals computed here are Hom_R(Sym^m Omega_R, R), never Sym^m of the
dual; in characteristic p the two differ.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .polynomial import Polynomial
from .presentation import ModulePresentation, graded_hom_dim
from .parallel import pmap
from .ring import GradedRing

CAVEAT = (
    "Numbers are graded pieces of Hom_R(Sym^m Omega_R, R), computed from the "
    "module presentation.  They stand in for sections of the dual of Sym^m of "
    "the extended cotangent sheaf twisted by O(j); the identification with "
    "sheaf sections is only asserted for normal rings of dimension >= 2, and "
    "vanishing for the intrinsic cotangent sheaf transfers to the extended one."
)


def kaehler_presentation(ring: GradedRing) -> ModulePresentation:
    """Omega_{R/k}: free on dx_i modulo the Jacobian columns of the ideal generators."""
    cols = []
    for g in ring.ideal:
        cols.append({i: ring.reduce(g.partial(i)) for i in range(ring.n)})
    return ModulePresentation(
        ring,
        gen_twists=[-w for w in ring.weights],
        rel_twists=[-ring.degree(g) for g in ring.ideal],
        columns=cols,
    )


def _multisets(k: int, m: int) -> list[tuple]:
    """Exponent vectors of length k summing to m, lexicographically descending."""
    out = [tuple(c.count(i) for i in range(k)) for c in itertools.combinations_with_replacement(range(k), m)]
    return sorted(set(out), reverse=True)


def sym_power(P: ModulePresentation, m: int) -> ModulePresentation:
    """Standard presentation of Sym^m(coker P)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    R = P.ring
    k = P.ngens
    gens = _multisets(k, m)
    index = {a: i for i, a in enumerate(gens)}
    twists = [sum(a[i] * P.gen_twists[i] for i in range(k)) for a in gens]
    cols, rtw = [], []
    if m >= 1:
        for mu in _multisets(k, m - 1):
            shift = sum(mu[i] * P.gen_twists[i] for i in range(k))
            for j, col in enumerate(P.columns):
                new = {}
                for i, f in col.items():
                    a = list(mu)
                    a[i] += 1
                    new[index[tuple(a)]] = f
                if new:
                    cols.append(new)
                    rtw.append(P.rel_twists[j] + shift)
    return ModulePresentation(R, twists, rtw, cols)


def euler_map(ring: GradedRing) -> list[Polynomial]:
    """Images dx_i -> w_i x_i of the Euler derivation, a degree-0 map Omega_R -> R."""
    return [ring.reduce(ring.var(i) * w) for i, w in enumerate(ring.weights)]


@dataclass
class SectionReport:
    m_max: int
    window: list[int]
    table: dict = field(default_factory=dict)  # (m, j) -> dim
    caveat: str = CAVEAT
    sheaf_language: bool = True

    @property
    def nonzero(self) -> list[tuple]:
        return sorted((k for k, v in self.table.items() if v), key=lambda mj: (mj[0], -mj[1]))

    @property
    def all_zero(self) -> bool:
        return not self.nonzero

    def bounds(self) -> str:
        return f"(m_max={self.m_max}, j in [{min(self.window)}, {max(self.window)}])"

    def verdict(self) -> str:
        if self.all_zero:
            return f"all-zero up to {self.bounds()}"
        cells = ", ".join(f"(m={m}, j={j}): {self.table[(m, j)]}" for m, j in self.nonzero)
        return f"nonzero cells up to {self.bounds()}: {cells}"


def section_report(ring: GradedRing, m_max: int, window=None) -> SectionReport:
    """Tabulate dim Hom_R(Sym^m Omega_R, R)_j for 1 <= m <= m_max and j in the window."""
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    if window is None:
        window = list(range(-1, -max(ring.weights) - 1, -1))
    window = sorted(set(int(j) for j in window), reverse=True)
    if any(j >= 0 for j in window):
        raise ValueError("the window holds negative degrees only")
    Omega = kaehler_presentation(ring)
    rep = SectionReport(m_max, window, sheaf_language=ring.dimension >= 2)
    cells = [(m, j) for m in range(1, m_max + 1) for j in window]
    powers = {m: sym_power(Omega, m) for m in range(1, m_max + 1)}
    for cell, dim in zip(cells, pmap(lambda mj: graded_hom_dim(powers[mj[0]], mj[1]), cells)):
        rep.table[cell] = dim
    return rep
