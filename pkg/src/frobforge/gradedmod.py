"""Finitely presented graded modules described one degree at a time.

A :class:`GradedModule` has generators e_i in degree ``gen_degrees[i]`` and
relation columns sum_i A_ic e_i = 0 in degree ``col_degrees[c]``.  Degrees
are integer numerators over ``den``: an element f of R_s moves degree D to
D + den*s.  Subclasses say how the degree-D piece is coordinatised (``dim``,
``act``, ``gen_vector``); everything else (lifts, Hom into R, graded
endomorphisms, pairing functionals) is shared.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .polynomial import Polynomial
from .presentation import HomSolution, ModulePresentation, solve_block_system, solve_hom
from .ring import GradedRing


def _terms(f):
    return f.terms if isinstance(f, Polynomial) else f


class GradedModule:
    ring: GradedRing
    den: int
    gen_degrees: list[int]
    columns: list[dict]
    col_degrees: list[int]

    # coordinatisation, provided by subclasses ---------------------------------
    def dim(self, D: int) -> int:
        raise NotImplementedError

    def act(self, f, s: int, D: int) -> np.ndarray:
        """Matrix of multiplication by f in R_s, from degree D to D + den*s."""
        raise NotImplementedError

    def gen_vector(self, i: int) -> np.ndarray:
        raise NotImplementedError

    def act_sparse(self, f, s: int, D: int):
        """Same as :meth:`act`; subclasses may return a (rows, cols, vals, shape) triplet."""
        return self.act(f, s, D)

    def image_block(self, v: np.ndarray, D: int, s: int) -> np.ndarray:
        """Columns mu * v for mu running over the monomial basis of R_s (v in degree D)."""
        R = self.ring
        cols = [self.act({mu: 1}, s, D) @ v for mu in R.degree_basis(s)]
        if not cols:
            return np.zeros((self.dim(D + self.den * s), 0), dtype=np.int64)
        return np.stack(cols, axis=1) % R.p

    # shared structure ------------------------------------------------------------
    @property
    def ngens(self) -> int:
        return len(self.gen_degrees)

    def distinct_degrees(self) -> list[int]:
        return sorted(set(self.gen_degrees))

    def _steps(self, D: int, g: int) -> int:
        if D < g or (D - g) % self.den:
            return -1
        return (D - g) // self.den

    def extension_matrix(self, images: list, D: int, d: int = 0) -> np.ndarray:
        """Matrix of (r_i) -> sum_i r_i * images[i], from the lift source at D into degree D+d.

        ``images[i]`` is a vector in degree gen_degrees[i] + d (None for zero).
        """
        R = self.ring
        tgt = self.dim(D + d)
        blocks = []
        for i, g in enumerate(self.gen_degrees):
            s = self._steps(D, g)
            n = R.hilbert(s) if s >= 0 else 0
            if n == 0:
                continue
            v = images[i]
            if v is None or tgt == 0 or not np.any(v):
                blocks.append(np.zeros((tgt, n), dtype=np.int64))
            else:
                blocks.append(self.image_block(np.asarray(v), g + d, s))
        if not blocks:
            return np.zeros((tgt, 0), dtype=np.int64)
        return np.hstack(blocks) % R.p

    def lift_matrix(self, D: int) -> np.ndarray:
        """Surjection (+)_i R_{(D-g_i)/den} -> M_D sending (r_i) to sum r_i e_i."""
        cache = self.__dict__.setdefault("_lift_cache", {})
        hit = cache.get(D)
        if hit is None:
            hit = self.extension_matrix([self.gen_vector(i) for i in range(self.ngens)], D)
            cache[D] = hit
        return hit

    def section(self, D: int) -> np.ndarray:
        """A right inverse of lift_matrix(D)."""
        cache = self.__dict__.setdefault("_section_cache", {})
        hit = cache.get(D)
        if hit is None:
            L = self.lift_matrix(D)
            n = L.shape[0]
            hit = linalg.solve(L, np.eye(n, dtype=np.int64), self.ring.p) if n else np.zeros((L.shape[1], 0), dtype=np.int64)
            if hit is None:
                raise RuntimeError(f"generators fail to span degree {D}; presentation is broken")
            cache[D] = hit
        return hit

    def morphism_on(self, images: list, D: int, d: int = 0) -> np.ndarray:
        """Matrix on degree D of the degree-d map determined by generator images."""
        if self.dim(D) == 0:
            return np.zeros((self.dim(D + d), 0), dtype=np.int64)
        return linalg.matmul(self.extension_matrix(images, D, d), self.section(D), self.ring.p)

    def hom_to_ring(self, D: int) -> HomSolution:
        """Hom_R(M, R) in degree -D/den: images of e_i lie in R_{(g_i - D)/den}."""
        unknown = [self._steps(g, D) for g in self.gen_degrees]
        coldeg = [self._steps(r, D) for r in self.col_degrees]
        return solve_hom(self.ring, unknown, self.columns, coldeg)

    def morphisms(self, d: int) -> HomSolution:
        """Degree-d R-linear maps out of M (into the ambient of ``act``), by generator images."""
        R = self.ring
        dims = [self.dim(g + d) for g in self.gen_degrees]
        row_dims = [self.dim(r + d) for r in self.col_degrees]
        blocks = {}
        for c, col in enumerate(self.columns):
            if not row_dims[c]:
                continue
            for i, f in col.items():
                if not dims[i]:
                    continue
                s = self._steps(self.col_degrees[c], self.gen_degrees[i])
                blocks[(c, i)] = self.act_sparse(_terms(f), s, self.gen_degrees[i] + d)
        basis = solve_block_system(dims, row_dims, blocks, R.p)
        offsets = [0]
        for n in dims:
            offsets.append(offsets[-1] + n)
        degrees = [g + d if n else None for g, n in zip(self.gen_degrees, dims)]
        return HomSolution(R, degrees, offsets, basis)

    def minimal_part(self, D: int) -> np.ndarray:
        """Rows spanning (m M)_D, the part of M_D reached from lower generators."""
        R = self.ring
        rows = []
        for i, g in enumerate(self.gen_degrees):
            s = self._steps(D, g)
            if s > 0 and R.hilbert(s):
                rows.append(self.image_block(self.gen_vector(i), g, s).T)
        if not rows:
            return np.zeros((0, self.dim(D)), dtype=np.int64)
        return linalg.row_basis(np.vstack(rows), R.p)

    def pairing_functionals(self, D: int) -> np.ndarray:
        """Rows: restrictions of Hom_R(M, R)_{-D/den} to the degree-D generators."""
        idx = [i for i, g in enumerate(self.gen_degrees) if g == D]
        if not idx:
            return np.zeros((0, 0), dtype=np.int64)
        H = self.hom_to_ring(D)
        if H.dim == 0:
            return np.zeros((0, len(idx)), dtype=np.int64)
        cols = [H.offsets[i] for i in idx]
        return linalg.row_basis(H.basis[:, cols], self.ring.p)

    def free_rank(self) -> int:
        """Rank of the evaluation pairing Hom_R(M, R) x M -> k."""
        return sum(self.pairing_functionals(D).shape[0] for D in self.distinct_degrees())


class PresentedModule(GradedModule):
    """Cokernel of a :class:`ModulePresentation`, coordinatised by complements.

    The degree-D piece is F_D / Im_D with F the free module on the
    generators; a vector lists coordinates on the free monomials outside the
    pivots of Im_D.
    """

    def __init__(self, P: ModulePresentation):
        self.presentation = P
        self.ring = P.ring
        self.den = 1
        self.gen_degrees = P.gen_degrees()
        self.columns = [{i: f.terms for i, f in col.items()} for col in P.columns]
        self.col_degrees = P.rel_degrees()
        self._quot: dict = {}

    def _free_offsets(self, D: int) -> list[int]:
        offs = [0]
        for g in self.gen_degrees:
            offs.append(offs[-1] + (self.ring.hilbert(D - g) if D >= g else 0))
        return offs

    def _quotient(self, D: int):
        hit = self._quot.get(D)
        if hit is not None:
            return hit
        R, p = self.ring, self.ring.p
        offs = self._free_offsets(D)
        total = offs[-1]
        rows = []
        for c, col in enumerate(self.columns):
            s = D - self.col_degrees[c]
            if s < 0 or not R.hilbert(s) or total == 0:
                continue
            block = np.zeros((total, R.hilbert(s)), dtype=np.int64)
            for i, f in col.items():
                block[offs[i] : offs[i + 1]] += R.mult_matrix(f, s)
            rows.append(block.T % p)
        if rows and total:
            Rr, piv = linalg.rref(np.vstack(rows), p)
        else:
            Rr, piv = np.zeros((0, total), dtype=np.int64), np.zeros(0, dtype=np.int64)
        free = np.setdiff1d(np.arange(total), piv)
        # projection F_D -> coordinates on free positions, killing Im_D
        pi = np.zeros((len(free), total), dtype=np.int64)
        pi[np.arange(len(free)), free] = 1
        if len(piv):
            pi[:, piv] = (-Rr[:, free].T) % p
        sigma = np.zeros((total, len(free)), dtype=np.int64)
        sigma[free, np.arange(len(free))] = 1
        hit = (offs, pi, sigma)
        self._quot[D] = hit
        return hit

    def dim(self, D: int) -> int:
        return self._quotient(D)[1].shape[0]

    def act(self, f, s: int, D: int) -> np.ndarray:
        R = self.ring
        f = _terms(f)
        offs, _, sigma = self._quotient(D)
        offs2, pi2, _ = self._quotient(D + s)
        big = np.zeros((offs2[-1], offs[-1]), dtype=np.int64)
        for i, g in enumerate(self.gen_degrees):
            if D < g or offs[i + 1] == offs[i]:
                continue
            big[offs2[i] : offs2[i + 1], offs[i] : offs[i + 1]] = R.mult_matrix(f, D - g)
        return linalg.matmul(linalg.matmul(pi2, big, R.p), sigma, R.p)

    def gen_vector(self, i: int) -> np.ndarray:
        g = self.gen_degrees[i]
        offs, pi, _ = self._quotient(g)
        v = np.zeros(offs[-1], dtype=np.int64)
        v[offs[i]] = 1
        return pi @ v % self.ring.p
