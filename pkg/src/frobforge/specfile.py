"""Ring-spec documents: a flat key/value format describing a graded ring.

Grammar (entries separated by ``;`` or newlines, ``#`` starts a comment)::

    p=5
    vars=x,y
    weights=2,3          # optional, defaults to all 1
    ideal=y^2-x^3        # comma-separated generators, may be empty
    label=cusp           # optional

Polynomials use integer coefficients, ``^`` for exponents, optional ``*``
between factors and ``+``/``-`` between terms.  Juxtaposed variable names
(``xy``) are split when every piece is a declared variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .polynomial import Polynomial
from .ring import GradedRing, is_prime

KEYS = ("p", "vars", "weights", "ideal", "label")


class SpecError(ValueError):
    """Malformed ring spec, with a 1-based line/column position."""

    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + msg)


@dataclass(frozen=True)
class RingSpec:
    p: int
    variables: tuple
    weights: tuple
    ideal: tuple  # generator strings as written
    label: str = ""

    def to_ring(self) -> GradedRing:
        polys = [parse_polynomial(g, self.variables, self.p) for g in self.ideal]
        R = GradedRing(self.p, self.variables, self.weights, polys, label=self.label)
        return R

    def text(self) -> str:
        return print_ring_spec(self)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _split_entries(text: str):
    """Yield (key, value, line, col_of_value) for each entry."""
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        for chunk in line.split(";"):
            start = pos
            pos += len(chunk) + 1
            if not chunk.strip():
                continue
            if "=" not in chunk:
                col = start + len(chunk) - len(chunk.lstrip()) + 1
                raise SpecError(f"expected key=value, got {chunk.strip()!r}", ln, col)
            key, value = chunk.split("=", 1)
            kcol = start + len(key) - len(key.lstrip()) + 1
            vcol = start + len(key) + 2 + (len(value) - len(value.lstrip()))
            yield key.strip(), value.strip(), ln, kcol, vcol


def parse_ring_spec(text: str) -> RingSpec:
    seen: dict = {}
    for key, value, ln, kcol, vcol in _split_entries(text):
        if key not in KEYS:
            raise SpecError(f"unknown key {key!r} (expected one of {', '.join(KEYS)})", ln, kcol)
        if key in seen:
            raise SpecError(f"duplicate key {key!r}", ln, kcol)
        seen[key] = (value, ln, vcol)
    for key in ("p", "vars"):
        if key not in seen:
            raise SpecError(f"missing required key {key!r}")
    value, ln, col = seen["p"]
    if not re.fullmatch(r"\d+", value):
        raise SpecError(f"p must be a positive integer, got {value!r}", ln, col)
    p = int(value)
    if not is_prime(p):
        raise SpecError("p must be prime", ln, col)
    value, ln, col = seen["vars"]
    names = tuple(v.strip() for v in value.split(","))
    for v in names:
        if not _IDENT.fullmatch(v):
            raise SpecError(f"bad variable name {v!r}", ln, col)
    if len(set(names)) != len(names):
        raise SpecError("repeated variable name", ln, col)
    if "weights" in seen:
        value, ln, col = seen["weights"]
        try:
            weights = tuple(int(w) for w in value.split(","))
        except ValueError:
            raise SpecError(f"weights must be integers, got {value!r}", ln, col) from None
        if len(weights) != len(names):
            raise SpecError(f"{len(weights)} weights for {len(names)} variables", ln, col)
        if any(w <= 0 for w in weights):
            raise SpecError("weights must be positive", ln, col)
    else:
        weights = (1,) * len(names)
    ideal: tuple = ()
    if "ideal" in seen:
        value, ln, col = seen["ideal"]
        gens = []
        offset = 0
        for g in value.split(","):
            gcol = col + offset + (len(g) - len(g.lstrip()))
            offset += len(g) + 1
            g = g.strip()
            if not g:
                if value.strip():
                    raise SpecError("empty ideal generator", ln, gcol)
                continue
            try:
                f = parse_polynomial(g, names, p)
            except SpecError as err:
                raise SpecError(err.msg, ln, gcol + max(err.col - 1, 0)) from None
            if not f.is_zero() and f.homogeneous_degree(weights) is None:
                raise SpecError(f"generator {g!r} is not homogeneous for weights {weights}", ln, gcol)
            gens.append(g)
        ideal = tuple(gens)
    label = seen["label"][0] if "label" in seen else ""
    return RingSpec(p, names, weights, ideal, label)


def print_ring_spec(spec: RingSpec) -> str:
    lines = [
        f"p={spec.p}",
        f"vars={','.join(spec.variables)}",
        f"weights={','.join(str(w) for w in spec.weights)}",
        f"ideal={','.join(spec.ideal)}",
    ]
    if spec.label:
        lines.append(f"label={spec.label}")
    return "\n".join(lines) + "\n"


def spec_from_ring(ring: GradedRing) -> RingSpec:
    return RingSpec(ring.p, ring.variables, ring.weights, tuple(g.to_str(ring.variables) for g in ring.ideal), ring.label)


# -- polynomial parser -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\^)|(\*)|([+-]))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise SpecError(f"unexpected character {text[col - 1]!r}", 1, col)
        kind = next(i for i in range(1, 6) if m.group(i) is not None)
        col = m.start(kind) + 1
        out.append((kind, m.group(kind), col))
        pos = m.end()
    return out


def _split_ident(word: str, names: tuple, col: int) -> list[str]:
    if word in names:
        return [word]
    # greedy longest-match split into declared names
    out, i = [], 0
    while i < len(word):
        for j in range(len(word), i, -1):
            if word[i:j] in names:
                out.append(word[i:j])
                i = j
                break
        else:
            raise SpecError(f"unknown variable {word!r}", 1, col)
    return out


def parse_polynomial(text: str, names, p: int) -> Polynomial:
    """Parse an integer-coefficient polynomial in the given variables, reducing mod p."""
    names = tuple(names)
    index = {v: i for i, v in enumerate(names)}
    n = len(names)
    toks = _tokens(text)
    if not toks:
        raise SpecError("empty polynomial", 1, 1)
    terms: dict = {}
    i = 0

    def expect_int(k):
        if k >= len(toks) or toks[k][0] != 1:
            col = toks[k][2] if k < len(toks) else len(text) + 1
            raise SpecError("expected an integer exponent", 1, col)
        return int(toks[k][1])

    first = True
    while i < len(toks):
        sign = 1
        if toks[i][0] == 5:
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise SpecError("expected '+' or '-' between terms", 1, toks[i][2])
        first = False
        coeff = 1
        exps = [0] * n
        seen_factor = False
        while i < len(toks) and toks[i][0] != 5:
            kind, val, col = toks[i]
            if kind == 4:
                if not seen_factor:
                    raise SpecError("'*' without a left factor", 1, col)
                i += 1
                if i >= len(toks) or toks[i][0] not in (1, 2):
                    raise SpecError("expected a factor after '*'", 1, toks[i][2] if i < len(toks) else len(text) + 1)
                continue
            if kind == 1:
                coeff *= int(val)
                i += 1
                if i < len(toks) and toks[i][0] == 3:
                    coeff = coeff // int(val) * int(val) ** expect_int(i + 1)
                    i += 2
            elif kind == 2:
                parts = _split_ident(val, names, col)
                i += 1
                e = 1
                if i < len(toks) and toks[i][0] == 3:
                    e = expect_int(i + 1)
                    i += 2
                for k, v in enumerate(parts):
                    exps[index[v]] += e if k == len(parts) - 1 else 1
            elif kind == 3:
                raise SpecError("'^' without a base", 1, col)
            seen_factor = True
        if not seen_factor:
            col = toks[i][2] if i < len(toks) else len(text) + 1
            raise SpecError("expected a term", 1, col)
        m = tuple(exps)
        terms[m] = (terms.get(m, 0) + sign * coeff) % p
    return Polynomial(terms, p, n)
