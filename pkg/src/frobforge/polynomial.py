"""Sparse multivariate polynomials over F_p.

A polynomial is a map from exponent tuples to residues.  Zero coefficients
are never stored.  Polynomials know their prime and variable count but not
a grading; weighted degrees are computed against a weight vector supplied
by the caller (usually a :class:`~frobforge.ring.GradedRing`).
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[int, ...]


class InhomogeneousError(ValueError):
    pass


def mono_add(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def wdeg(m: Monomial, weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(m, weights))


def add_into(acc: dict, other: Mapping, p: int, scale: int = 1) -> dict:
    """acc += scale * other (mod p), dropping zeros.  Mutates ``acc``."""
    for m, c in other.items():
        v = (acc.get(m, 0) + scale * c) % p
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)
    return acc


def dict_mul(f: Mapping, g: Mapping, p: int) -> dict:
    out: dict = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = mono_add(m1, m2)
            v = (out.get(m, 0) + c1 * c2) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


class Polynomial:
    """Immutable sparse polynomial with coefficients in F_p."""

    __slots__ = ("terms", "p", "nvars")

    def __init__(self, terms: Mapping[Monomial, int], p: int, nvars: int):
        clean = {}
        for m, c in terms.items():
            m = tuple(int(e) for e in m)
            if len(m) != nvars:
                raise ValueError(f"monomial {m} has {len(m)} exponents, expected {nvars}")
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in {m}")
            c = int(c) % p
            if c:
                clean[m] = (clean.get(m, 0) + c) % p
                if not clean[m]:
                    del clean[m]
        self.terms = clean
        self.p = p
        self.nvars = nvars

    # construction ---------------------------------------------------------
    @classmethod
    def constant(cls, c: int, p: int, nvars: int) -> "Polynomial":
        return cls({(0,) * nvars: c}, p, nvars)

    @classmethod
    def monomial(cls, exps: Iterable[int], p: int, coeff: int = 1) -> "Polynomial":
        exps = tuple(exps)
        return cls({exps: coeff}, p, len(exps))

    @classmethod
    def variable(cls, i: int, p: int, nvars: int) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, p, nvars)

    def _wrap(self, terms: dict) -> "Polynomial":
        out = Polynomial.__new__(Polynomial)
        out.terms = terms
        out.p = self.p
        out.nvars = self.nvars
        return out

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.p != self.p or other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, int):
            return Polynomial.constant(other, self.p, self.nvars)
        return NotImplemented

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(add_into(dict(self.terms), other.terms, self.p))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({m: (-c) % self.p for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(add_into(dict(self.terms), other.terms, self.p, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.p
            if not c:
                return self._wrap({})
            return self._wrap({m: (v * c) % self.p for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(dict_mul(self.terms, other.terms, self.p))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self.p, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other, self.p, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.p == other.p and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # structure ------------------------------------------------------------
    def homogeneous_degree(self, weights: Sequence[int]) -> int | None:
        """Weighted degree if every term shares it; None otherwise (and for 0)."""
        degs = {wdeg(m, weights) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self, weights: Sequence[int]) -> bool:
        return len({wdeg(m, weights) for m in self.terms}) <= 1

    def frobenius(self, q: int) -> "Polynomial":
        """The q-th power, using that coefficients in F_p are Frobenius-fixed."""
        return self._wrap({tuple(q * e for e in m): c for m, c in self.terms.items()})

    def partial(self, i: int) -> "Polynomial":
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                v = (c * m[i]) % self.p
                if v:
                    mm = list(m)
                    mm[i] -= 1
                    out[tuple(mm)] = v
        return self._wrap(out)

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def to_str(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts)

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return f"Polynomial({self.to_str(names)!r}, p={self.p})"
