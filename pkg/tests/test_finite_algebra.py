import itertools

import numpy as np
import pytest

from frobforge.finite_algebra import (
    FiniteAlgebra,
    check_idempotents,
    local_certificate,
    minimal_polynomial,
    radical,
    split_idempotents,
)


def matrix_units(n):
    out = []
    for i, j in itertools.product(range(n), repeat=2):
        E = np.zeros((n, n), dtype=np.int64)
        E[i, j] = 1
        out.append(E)
    return out


def full_matrices(n, p):
    return FiniteAlgebra.from_blocks([n], [[E] for E in matrix_units(n)], p)


def upper_triangular(n, p):
    return FiniteAlgebra.from_blocks([n], [[E] for E in matrix_units(n) if np.argmax(E) // n <= np.argmax(E) % n], p)


def group_algebra(gens_perm, order, p):
    """Regular representation of an abelian group given by generating permutations."""
    mats = []
    n = order
    elems = {tuple(range(n))}
    frontier = [tuple(range(n))]
    while frontier:
        g = frontier.pop()
        for s in gens_perm:
            h = tuple(s[i] for i in g)
            if h not in elems:
                elems.add(h)
                frontier.append(h)
    for g in sorted(elems):
        P = np.zeros((n, n), dtype=np.int64)
        for i, j in enumerate(g):
            P[j, i] = 1
        mats.append([P])
    return FiniteAlgebra.from_blocks([n], mats, p)


def cyclic(n, p):
    return group_algebra([tuple((i + 1) % n for i in range(n))], n, p)


def klein(p):
    # C2 x C2 acting regularly on 4 points
    return group_algebra([(1, 0, 3, 2), (2, 3, 0, 1)], 4, p)


def f4_in_m2():
    C = np.array([[0, 1], [1, 1]])
    return FiniteAlgebra.from_blocks([2], [[np.eye(2, dtype=np.int64)], [C]], 2)


def k_times_m2(p):
    els = [[np.ones((1, 1), dtype=np.int64), np.zeros((2, 2), dtype=np.int64)]]
    els += [[np.zeros((1, 1), dtype=np.int64), E] for E in matrix_units(2)]
    return FiniteAlgebra.from_blocks([1, 2], els, p)


# expected (dim, radical dim, number of primitive idempotents), from the structure theory
# of each algebra: e.g. F_p[C_n] is F_p[t]/(t^n - 1), split by the factorisation of t^n - 1
CASES = [
    ("upper3_F2", lambda: upper_triangular(3, 2), 6, 3, 3),
    ("M2_F3", lambda: full_matrices(2, 3), 4, 0, 2),
    ("M3_F2", lambda: full_matrices(3, 2), 9, 0, 3),
    ("F3[C3]", lambda: cyclic(3, 3), 3, 2, 1),
    ("F5[C5]", lambda: cyclic(5, 5), 5, 4, 1),
    ("F2[C4]", lambda: cyclic(4, 2), 4, 3, 1),
    ("F3[C4]", lambda: cyclic(4, 3), 4, 0, 3),
    ("F5[C4]", lambda: cyclic(4, 5), 4, 0, 4),
    ("F2[C2xC2]", lambda: klein(2), 4, 3, 1),
    ("F4_in_M2F2", f4_in_m2, 2, 0, 1),
    ("k_x_M2_F3", lambda: k_times_m2(3), 5, 0, 3),
]


@pytest.mark.parametrize("name,make,dim,rad,nidem", CASES, ids=[c[0] for c in CASES])
def test_structure(name, make, dim, rad, nidem):
    A = make()
    assert A.is_closed()
    assert A.dim == dim
    J = radical(A)
    assert len(J) == rad
    es, certs = split_idempotents(A, with_certificates=True)
    assert len(es) == nidem
    check_idempotents(A, es)
    assert all(c["local"] for c in certs)


@pytest.mark.parametrize("name,make,dim,rad,nidem", CASES, ids=[c[0] for c in CASES])
def test_corners_are_local(name, make, dim, rad, nidem):
    A = make()
    for e in split_idempotents(A):
        sizes, raw = A.restricted_rows(e, A.corner(e))
        cert = local_certificate(FiniteAlgebra(sizes, raw, A.p))
        assert cert["local"]


def test_radical_is_nilpotent_ideal():
    A = upper_triangular(3, 5)
    J = radical(A)
    for a in J:
        assert A.contains(a)
        assert not np.any(A.power(a, 3) % 5)
        for b in A.basis:
            assert A.contains(A.mul(a, b)) and A.contains(A.mul(b, a))


def test_splitting_is_seed_independent_in_count():
    A = cyclic(4, 5)
    for seed in range(5):
        assert len(split_idempotents(A, seed=seed)) == 4


def test_deterministic_output():
    A = full_matrices(2, 3)
    e1 = split_idempotents(A)
    e2 = split_idempotents(A)
    assert all(np.array_equal(a, b) for a, b in zip(e1, e2))


def test_minimal_polynomial_of_generator():
    A = cyclic(3, 2)
    g = A.basis[0]
    for b in A.basis:
        if not np.array_equal(b, A.one()):
            g = b
            break
    mp = minimal_polynomial(A, g)
    assert len(mp) - 1 == 3  # t^3 - 1 is the minimal polynomial of a generator


def test_certificate_failure_detected():
    A = full_matrices(2, 3)
    with pytest.raises(AssertionError):
        check_idempotents(A, [A.one(), A.one()])


def test_direct_sum():
    B = FiniteAlgebra.direct_sum([cyclic(3, 2), full_matrices(2, 2)])
    assert B.dim == 7
    assert len(split_idempotents(B)) == 2 + 2
