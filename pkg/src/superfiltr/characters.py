"""Formal characters as Laurent polynomials in m+n variables.

A :class:`Character` is a sparse map from exponent vectors to nonzero integer
coefficients.  The even-block characters ch H^0_ev(lambda) are products of two
Schur functions computed by Gelfand-Tsetlin branching; induced characters
multiply in the odd factor prod (1 + x_j / x_i) over the odd positive roots.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .weights import BlockShape, Weight, is_dominant, positive_roots, steinberg_weight


class NotFiltrationCharacter(ValueError):
    """A dominance-maximal monomial of the remainder is not dominant."""

    def __init__(self, weight, partial):
        super().__init__(f"maximal monomial {weight} is not dominant")
        self.weight = weight
        self.partial = partial


class IterationCapExceeded(RuntimeError):
    def __init__(self, cap, partial):
        super().__init__(f"elimination did not terminate within {cap} steps")
        self.cap = cap
        self.partial = partial


_DENSE_THRESHOLD = 2000
_SAFE_COEF = 1 << 24


def _product_numpy(left: dict, right: dict) -> dict:
    """All-pairs product with aggregation in numpy; falls back to Python ints
    when coefficients could overflow int64."""
    ea = np.array(list(left), dtype=np.int64)
    eb = np.array(list(right), dtype=np.int64)
    ca = list(left.values())
    cb = list(right.values())
    if max(map(abs, ca)) >= _SAFE_COEF or max(map(abs, cb)) >= _SAFE_COEF:
        out: dict = defaultdict(int)
        for (a, x), (b, y) in product(left.items(), right.items()):
            out[tuple(u + v for u, v in zip(a, b))] += x * y
        return _clean(out)
    lo = ea.min(axis=0) + eb.min(axis=0)
    span = ea.max(axis=0) + eb.max(axis=0) - lo + 1
    if float(np.prod(span.astype(float))) >= 2**62:
        exps = (ea[:, None, :] + eb[None, :, :]).reshape(-1, ea.shape[1])
        keys, inverse = np.unique(exps, axis=0, return_inverse=True)
        decode = list(map(tuple, keys.tolist()))
    else:
        # mixed-radix encoding of shifted exponent vectors into one int64 key
        radix = np.concatenate(([1], np.cumprod(span[:-1]))).astype(np.int64)
        ka = (ea - ea.min(axis=0)) @ radix
        kb = (eb - eb.min(axis=0)) @ radix
        flat = (ka[:, None] + kb[None, :]).ravel()
        keys, inverse = np.unique(flat, return_inverse=True)
        digits = (keys[:, None] // radix[None, :]) % span[None, :] + lo[None, :]
        decode = list(map(tuple, digits.tolist()))
    coefs = (np.array(ca, dtype=np.int64)[:, None] * np.array(cb, dtype=np.int64)[None, :]).ravel()
    sums = np.zeros(len(keys), dtype=np.int64)
    np.add.at(sums, inverse.ravel(), coefs)
    return {e: c for e, c in zip(decode, sums.tolist()) if c}


def _clean(terms):
    return {k: v for k, v in terms.items() if v != 0}


@dataclass(frozen=True, eq=False)
class Character:
    shape: BlockShape
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exp, c in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.shape.size:
                raise ValueError(f"exponent {exp} has wrong length for {self.shape}")
            if c:
                clean[exp] = clean.get(exp, 0) + int(c)
        object.__setattr__(self, "terms", _clean(clean))

    @classmethod
    def _trusted(cls, shape: BlockShape, terms: dict) -> "Character":
        # terms already have int tuple keys of the right length and nonzero ints
        obj = object.__new__(cls)
        object.__setattr__(obj, "shape", shape)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def one(cls, shape: BlockShape) -> "Character":
        return cls(shape, {(0,) * shape.size: 1})

    @classmethod
    def monomial(cls, w: Weight, coef: int = 1) -> "Character":
        return cls(w.shape, {w.entries: coef})

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    def __hash__(self):
        return hash((self.shape, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "Character") -> "Character":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Character(self.shape, out)

    def __neg__(self) -> "Character":
        return Character(self.shape, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def __rmul__(self, c: int) -> "Character":
        return Character(self.shape, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        if len(self.terms) * len(other.terms) >= _DENSE_THRESHOLD:
            return Character._trusted(self.shape, _product_numpy(self.terms, other.terms))
        out: dict = defaultdict(int)
        for (a, ca), (b, cb) in product(self.terms.items(), other.terms.items()):
            out[tuple(x + y for x, y in zip(a, b))] += ca * cb
        return Character(self.shape, out)

    def coefficient(self, w) -> int:
        key = w.entries if isinstance(w, Weight) else tuple(w)
        return self.terms.get(key, 0)

    def support(self) -> list[Weight]:
        return [self.shape.weight(e) for e in sorted(self.terms)]

    def leading(self) -> Weight:
        """Lexicographically largest exponent; always dominance-maximal."""
        return self.shape.weight(max(self.terms))

    def permute(self, perm) -> "Character":
        return Character(self.shape, {tuple(e[perm[i]] for i in range(len(e))): c for e, c in self.terms.items()})

    def __repr__(self):
        return f"Character({self.to_string()})"

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                f"x{i + 1}" + (f"^{e}" if e != 1 else "") for i, e in enumerate(exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "shape": [self.shape.m, self.shape.n],
            "terms": [{"exp": list(e), "coef": c} for e, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, data, p: int = 3) -> "Character":
        if isinstance(data, str):
            data = json.loads(data)
        m, n = data["shape"]
        shape = BlockShape(int(m), int(n), int(data.get("p", p)))
        return cls(shape, {tuple(t["exp"]): int(t["coef"]) for t in data["terms"]})


@lru_cache(maxsize=None)
def schur(parts: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Schur polynomial of a weakly decreasing integer vector (negative entries
    allowed), as {exponent: coefficient}, by branching to one fewer variable."""
    k = len(parts)
    if k == 0:
        return {(): 1}
    if k == 1:
        return {parts: 1}
    out: dict = defaultdict(int)
    # mu interlaces parts: parts[i] >= mu[i] >= parts[i+1]
    ranges = [range(parts[i + 1], parts[i] + 1) for i in range(k - 1)]
    total = sum(parts)
    for mu in product(*ranges):
        last = total - sum(mu)
        for exp, c in schur(tuple(mu)).items():
            out[exp + (last,)] += c
    return dict(out)


@lru_cache(maxsize=4096)
def ch_ev(lam: Weight) -> Character:
    """ch H^0_ev(lambda): product of the GL_m and GL_n Weyl characters."""
    if not is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    top, bottom = schur(lam.even), schur(lam.odd)
    terms = {a + b: ca * cb for (a, ca), (b, cb) in product(top.items(), bottom.items())}
    return Character(lam.shape, terms)


@lru_cache(maxsize=None)
def odd_factor(shape: BlockShape) -> Character:
    """prod over positive odd roots eps_i - eps_j of (1 + e^{-alpha})."""
    result = Character.one(shape)
    for alpha in positive_roots(shape)[1]:
        exp = [0] * shape.size
        exp[alpha.i] = -1
        exp[alpha.j] = 1
        result = result * Character(shape, {(0,) * shape.size: 1, tuple(exp): 1})
    return result


@lru_cache(maxsize=4096)
def ch_induced(lam: Weight) -> Character:
    """Character shared by H^0(lambda) and V(lambda)."""
    return odd_factor(lam.shape) * ch_ev(lam)


def twist(ch: Character, r: int) -> Character:
    q = ch.shape.p**r
    return Character._trusted(ch.shape, {tuple(q * e for e in exp): c for exp, c in ch.terms.items()})


def dim_of(ch: Character) -> int:
    return sum(ch.terms.values())


def verify_translation_identity(shape: BlockShape, r: int, s: int, t: int, lam: Weight) -> bool:
    pi = steinberg_weight(shape, r, s, t)
    lhs = ch_induced(pi) * twist(ch_ev(lam), r)
    rhs = ch_induced(pi + lam.scale(shape.p**r))
    return lhs == rhs


def decompose_good(ch: Character, basis: str = "induced") -> dict[Weight, int]:
    """Triangular expansion of ``ch`` in the induced (or even) basis.

    Peels off the dominance-maximal monomial at each step.  Multiplicities may
    come out negative, which rules out a good filtration.
    """
    if basis not in ("induced", "even"):
        raise ValueError(f"unknown basis {basis!r}")
    make = ch_induced if basis == "induced" else ch_ev
    cap = 4 * max(len(ch.terms), 1) * 2 ** (ch.shape.m * ch.shape.n)
    remainder = ch
    mult: dict[Weight, int] = {}
    steps = 0
    while remainder:
        if steps >= cap:
            raise IterationCapExceeded(cap, mult)
        top = remainder.leading()
        if not is_dominant(top):
            raise NotFiltrationCharacter(top, mult)
        c = remainder.coefficient(top)
        mult[top] = mult.get(top, 0) + c
        remainder = remainder - c * make(top)
        steps += 1
    return {w: c for w, c in mult.items() if c}
