"""Graded module presentations over a GradedRing and degreewise Hom solving.

A presentation has free generators e_i in degree ``-gen_twists[i]`` and
relation columns in degree ``-rel_twists[j]``; entry (i, j) is a
homogeneous element of R of degree ``gen_twists[i] - rel_twists[j]``.
Generator twists follow the R(-w) convention, so dx_i has twist -w_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from . import linalg
from .errors import BudgetExceeded, max_unknowns
from .polynomial import InhomogeneousError, Polynomial
from .ring import GradedRing


@dataclass
class ModulePresentation:
    ring: GradedRing
    gen_twists: list[int]
    rel_twists: list[int]
    columns: list[dict[int, Polynomial]] = field(default_factory=list)

    def __post_init__(self):
        R = self.ring
        if len(self.columns) != len(self.rel_twists):
            raise ValueError("one twist per relation column required")
        cleaned = []
        for j, col in enumerate(self.columns):
            out = {}
            for i, f in col.items():
                f = R.reduce(f)
                if f.is_zero():
                    continue
                want = self.gen_twists[i] - self.rel_twists[j]
                got = R.degree(f)
                if got != want:
                    raise InhomogeneousError(
                        f"entry ({i},{j}) has degree {got}, twists force {want}"
                    )
                out[i] = f
            cleaned.append(out)
        self.columns = cleaned

    @property
    def ngens(self) -> int:
        return len(self.gen_twists)

    @property
    def nrels(self) -> int:
        return len(self.rel_twists)

    def gen_degrees(self) -> list[int]:
        return [-t for t in self.gen_twists]

    def rel_degrees(self) -> list[int]:
        return [-t for t in self.rel_twists]

    def entry(self, i: int, j: int) -> Polynomial:
        f = self.columns[j].get(i)
        return f if f is not None else Polynomial({}, self.ring.p, self.ring.n)

    def matrix(self) -> list[list[Polynomial]]:
        return [[self.entry(i, j) for j in range(self.nrels)] for i in range(self.ngens)]


@dataclass
class HomSolution:
    """Basis of a degreewise Hom space.

    ``degrees[i]`` is the degree of the image of generator i (None when the
    graded piece is empty); ``offsets`` slice each basis row into per-
    generator coordinate vectors in the monomial basis of R_{degrees[i]}.
    """

    ring: GradedRing
    degrees: list
    offsets: list[int]
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def image(self, row: int, i: int) -> np.ndarray:
        return self.basis[row, self.offsets[i] : self.offsets[i + 1]]

    def image_poly(self, row: int, i: int) -> Polynomial:
        d = self.degrees[i]
        if d is None:
            return Polynomial({}, self.ring.p, self.ring.n)
        return self.ring.from_vector(self.image(row, i), d)


def solve_block_system(unknown_dims: list[int], row_dims: list[int], blocks: dict, p: int) -> np.ndarray:
    """Nullspace of a block matrix, one basis vector per row.

    ``blocks[(r, i)]`` is the (row_dims[r] x unknown_dims[i]) block, dense or
    as a (rows, cols, vals, shape) triplet.  The
    system is split into connected components of its nonzero pattern
    before elimination, so hidden multigradings cost nothing extra.
    """
    offs = np.concatenate([[0], np.cumsum(unknown_dims)]).astype(np.int64)
    roffs = np.concatenate([[0], np.cumsum(row_dims)]).astype(np.int64)
    N, Mrows = int(offs[-1]), int(roffs[-1])
    if N > max_unknowns():
        raise BudgetExceeded(f"linear system has {N} unknowns (budget {max_unknowns()})")
    if N == 0:
        return np.zeros((0, 0), dtype=np.int64)
    rr, cc, vv = [], [], []
    for (r, i), B in blocks.items():
        if isinstance(B, tuple):
            br, bc, bv, _ = B
            keep = (bv % p) != 0
            br, bc, bv = br[keep], bc[keep], bv[keep] % p
        else:
            B = np.asarray(B, dtype=np.int64) % p
            br, bc = np.nonzero(B)
            bv = B[br, bc]
        if br.size:
            rr.append(br + roffs[r])
            cc.append(bc + offs[i])
            vv.append(bv)
    if not rr:
        return np.eye(N, dtype=np.int64)
    rows = np.concatenate(rr)
    cols = np.concatenate(cc)
    vals = np.concatenate(vv)
    # bipartite graph: unknowns 0..N-1, equations N..N+Mrows-1
    G = sparse.coo_matrix((np.ones(rows.size), (cols, rows + N)), shape=(N + Mrows, N + Mrows))
    ncomp, label = csgraph.connected_components(G, directed=False)
    ulab = label[:N]
    rlab = label[N:]
    out = []
    order = np.argsort(ulab, kind="stable")
    bounds = np.searchsorted(ulab[order], np.arange(ncomp + 1))
    entry_lab = ulab[cols]
    eorder = np.argsort(entry_lab, kind="stable")
    ebounds = np.searchsorted(entry_lab[eorder], np.arange(ncomp + 1))
    for comp in range(ncomp):
        ucols = order[bounds[comp] : bounds[comp + 1]]
        if ucols.size == 0:
            continue
        sel = eorder[ebounds[comp] : ebounds[comp + 1]]
        if sel.size == 0:
            K = np.eye(ucols.size, dtype=np.int64)
        else:
            rsel = np.flatnonzero(rlab == comp)
            rpos = np.full(Mrows, -1, dtype=np.int64)
            rpos[rsel] = np.arange(rsel.size)
            cpos = np.full(N, -1, dtype=np.int64)
            cpos[ucols] = np.arange(ucols.size)
            A = np.zeros((rsel.size, ucols.size), dtype=np.int64)
            np.add.at(A, (rpos[rows[sel]], cpos[cols[sel]]), vals[sel])
            K = linalg.nullspace(A % p, p)
        if K.shape[0]:
            full = np.zeros((K.shape[0], N), dtype=np.int64)
            full[:, ucols] = K
            out.append(full)
    if not out:
        return np.zeros((0, N), dtype=np.int64)
    basis = np.vstack(out)
    # canonical order independent of component labelling
    return linalg.row_basis(basis, p) if basis.shape[0] < 2000 else basis


def solve_hom(
    ring: GradedRing,
    unknown_degrees: list[int],
    columns: list[dict],
    column_degrees: list[int],
    q: int = 1,
) -> HomSolution:
    """Solve sum_i A_ic^[q] * phi_i = 0 in R_{column_degrees[c]} for all c.

    Unknown phi_i ranges over R_{unknown_degrees[i]} (empty when negative).
    ``A^[q]`` is the entry with exponents scaled by q; q = 1 is plain
    multiplication.
    """
    dims = [ring.hilbert(d) if d is not None and d >= 0 else 0 for d in unknown_degrees]
    degrees = [d if dims[i] else None for i, d in enumerate(unknown_degrees)]
    offsets = [0]
    for n in dims:
        offsets.append(offsets[-1] + n)
    row_dims = [ring.hilbert(cd) if cd >= 0 else 0 for cd in column_degrees]
    if offsets[-1] > max_unknowns():
        raise BudgetExceeded(f"degreewise Hom system has {offsets[-1]} unknowns (budget {max_unknowns()})")
    blocks = {}
    for c, col in enumerate(columns):
        if not row_dims[c]:
            continue
        for i, f in col.items():
            if not dims[i]:
                continue
            terms = f.terms if isinstance(f, Polynomial) else f
            if not terms:
                continue
            M = ring.mult_coo(terms, unknown_degrees[i], q)
            if M[3][0] != row_dims[c]:
                raise InhomogeneousError("column degree inconsistent with entry degree")
            blocks[(c, i)] = M
    basis = solve_block_system(dims, row_dims, blocks, ring.p)
    return HomSolution(ring, degrees, offsets, basis)


def graded_hom_dim(P: ModulePresentation, j: int) -> int:
    """dim_k Hom_R(coker P, R)_j."""
    return hom_to_ring(P, j).dim


def hom_to_ring(P: ModulePresentation, j: int) -> HomSolution:
    unknown = [g + j for g in P.gen_degrees()]
    coldeg = [r + j for r in P.rel_degrees()]
    return solve_hom(P.ring, unknown, P.columns, coldeg)


def hilbert_of_cokernel(P: ModulePresentation, d: int) -> int:
    """dim_k (coker P)_d, from the presentation alone."""
    R = P.ring
    gdeg = P.gen_degrees()
    offs = [0]
    for g in gdeg:
        offs.append(offs[-1] + R.hilbert(d - g))
    total = offs[-1]
    if total == 0:
        return 0
    images = []
    for j, col in enumerate(P.columns):
        s = d - P.rel_degrees()[j]
        if s < 0 or R.hilbert(s) == 0:
            continue
        block = np.zeros((total, R.hilbert(s)), dtype=np.int64)
        for i, f in col.items():
            block[offs[i] : offs[i + 1]] += R.mult_matrix(f, s)
        images.append(block % R.p)
    if not images:
        return total
    return total - linalg.rank(np.hstack(images), R.p)
