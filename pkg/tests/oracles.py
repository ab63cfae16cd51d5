"""Independent reference computations used by the tests.

Nothing here goes through the package's linear algebra, Groebner bases or
module code: ranks are plain Python Gaussian elimination mod p, ideal
membership in a hypersurface is written out as f * h with h unknown.
"""

from __future__ import annotations

import itertools
from math import factorial


def rank_mod_p(rows, p: int) -> int:
    M = [[x % p for x in r] for r in rows]
    if not M:
        return 0
    ncol = len(M[0])
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return r


def monomials(n: int, weights, d: int) -> list[tuple]:
    if d < 0:
        return []
    if n == 0:
        return [()] if d == 0 else []
    out = []
    w = weights[0]
    for k in range(d // w + 1):
        for rest in monomials(n - 1, weights[1:], d - k * w):
            out.append((k,) + rest)
    return out


def wdeg(m, weights) -> int:
    return sum(a * w for a, w in zip(m, weights))


def multinomial_power(terms: dict, k: int, p: int) -> dict:
    """(sum c_i x^{m_i})^k expanded by the multinomial theorem, coefficients mod p."""
    items = list(terms.items())
    out: dict = {}
    for ks in itertools.product(range(k + 1), repeat=len(items)):
        if sum(ks) != k:
            continue
        coef = factorial(k)
        for j in ks:
            coef //= factorial(j)
        mono = [0] * len(items[0][0])
        for (m, c), j in zip(items, ks):
            coef *= c**j
            for i, a in enumerate(m):
                mono[i] += a * j
        key = tuple(mono)
        out[key] = (out.get(key, 0) + coef) % p
    return {m: c for m, c in out.items() if c}


def fedder_oracle(f_terms: dict, p: int) -> bool:
    fp = multinomial_power(f_terms, p - 1, p)
    return any(all(a < p for a in m) for m in fp)


def hypersurface_a_e(f_terms: dict, n: int, p: int, e: int) -> int:
    """a_e(S/f) = rank of multiplication by f^(q-1) on S / m^[q] (digit monomials)."""
    q = p**e
    F = multinomial_power(f_terms, q - 1, p) if f_terms else {(0,) * n: 1}
    digits = list(itertools.product(range(q), repeat=n))
    index = {a: i for i, a in enumerate(digits)}
    rows = []
    for a in digits:
        row = [0] * len(digits)
        for m, c in F.items():
            b = tuple(x + y for x, y in zip(a, m))
            if all(x < q for x in b):
                row[index[b]] = (row[index[b]] + c) % p
        rows.append(row)
    return rank_mod_p(rows, p)


def operator_dim_oracle(n: int, weights, f_terms: dict | None, p: int, e: int, d: int) -> int:
    """dim of degree-d level-e operators on S/(f), by the defining linear system on S.

    Unknowns: coefficients of delta(x^a) in S_{|a|+d} for digit monomials a,
    plus multipliers h_{a} with delta(x^a f) = f h_a.  The answer is the
    nullity minus the operators with every delta(x^a) in (f).
    """
    q = p**e
    digits = list(itertools.product(range(q), repeat=n))
    unknown = {}
    for a in digits:
        for m in monomials(n, weights, wdeg(a, weights) + d):
            unknown[(a, m)] = len(unknown)
    if not f_terms:
        return len(unknown)
    df = wdeg(next(iter(f_terms)), weights)
    hidx = {}
    for a in digits:
        for m in monomials(n, weights, wdeg(a, weights) + d):
            hidx[(a, m)] = len(unknown) + len(hidx)
    N = len(unknown) + len(hidx)
    # rows indexed by (a, output monomial)
    eqs: dict = {}
    for a in digits:
        # delta(x^a f) = sum_c c * (x^{quo})^q * delta(x^{rem})
        for m, c in f_terms.items():
            u = tuple(x + y for x, y in zip(a, m))
            rem = tuple(x % q for x in u)
            quo = tuple(x // q for x in u)
            for mm in monomials(n, weights, wdeg(rem, weights) + d):
                out = tuple(x + q * y for x, y in zip(mm, quo))
                row = eqs.setdefault((a, out), {})
                k = unknown[(rem, mm)]
                row[k] = (row.get(k, 0) + c) % p
        # minus f * h_a, h_a in S_{|a| + d}
        for hm in monomials(n, weights, wdeg(a, weights) + d):
            for m, c in f_terms.items():
                out = tuple(x + y for x, y in zip(hm, m))
                row = eqs.setdefault((a, out), {})
                k = hidx[(a, hm)]
                row[k] = (row.get(k, 0) - c) % p
    rows = [[r.get(k, 0) for k in range(N)] for r in eqs.values()]
    nullity = N - rank_mod_p(rows, p)
    trivial = sum(len(monomials(n, weights, wdeg(a, weights) + d - df)) for a in digits)
    return nullity - trivial
