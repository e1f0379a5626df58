"""Weight lattice of GL(m|n): dominance order, rho-vectors, the odd pairing,
and the restricted / Steinberg criteria.

Weights are integer vectors of length m+n split into an even block of size m
and an odd block of size n.  Half-integral vectors (rho and friends) are kept
as doubled integers so that nothing is ever rounded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class ShapeMismatch(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class BlockShape:
    m: int
    n: int
    p: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"block sizes must be positive, got ({self.m}|{self.n})")
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"characteristic must be an odd prime, got {self.p}")

    @property
    def size(self) -> int:
        return self.m + self.n

    def parity(self, index: int) -> int:
        """Parity of the 0-based basis index."""
        return 0 if index < self.m else 1

    def sign(self, index: int) -> int:
        return 1 if index < self.m else -1

    def weight(self, entries: Iterable[int]) -> "Weight":
        return Weight(tuple(int(x) for x in entries), self)

    def zero(self) -> "Weight":
        return self.weight([0] * self.size)

    def epsilon(self, index: int) -> "Weight":
        e = [0] * self.size
        e[index] = 1
        return self.weight(e)


@dataclass(frozen=True)
class Weight:
    entries: tuple[int, ...]
    shape: BlockShape

    def __post_init__(self):
        if len(self.entries) != self.shape.size:
            raise ValueError(
                f"weight has {len(self.entries)} entries, shape needs {self.shape.size}"
            )

    @property
    def even(self) -> tuple[int, ...]:
        return self.entries[: self.shape.m]

    @property
    def odd(self) -> tuple[int, ...]:
        return self.entries[self.shape.m :]

    def _check(self, other: "Weight"):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(a + b for a, b in zip(self.entries, other.entries)), self.shape)

    def __sub__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(a - b for a, b in zip(self.entries, other.entries)), self.shape)

    def scale(self, c: int) -> "Weight":
        return Weight(tuple(c * a for a in self.entries), self.shape)

    def __str__(self):
        ev = ",".join(map(str, self.even))
        od = ",".join(map(str, self.odd))
        return f"({ev}|{od})"

    def to_json(self) -> dict:
        return {"m": self.shape.m, "n": self.shape.n, "lambda": [list(self.even), list(self.odd)]}

    @classmethod
    def from_json(cls, data, p: int = 3) -> "Weight":
        if isinstance(data, str):
            data = json.loads(data)
        shape = BlockShape(int(data["m"]), int(data["n"]), int(data.get("p", p)))
        even, odd = data["lambda"]
        if len(even) != shape.m or len(odd) != shape.n:
            raise ValueError("block lengths do not match m and n")
        return shape.weight(list(even) + list(odd))


@dataclass(frozen=True)
class HalfWeight:
    """A vector in (1/2)Z^{m+n}, stored as its double."""

    doubled: tuple[int, ...]
    shape: BlockShape

    @classmethod
    def from_weight(cls, w: Weight) -> "HalfWeight":
        return cls(tuple(2 * a for a in w.entries), w.shape)

    def entry(self, i: int) -> Fraction:
        return Fraction(self.doubled[i], 2)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(d, 2) for d in self.doubled)

    def __add__(self, other: "HalfWeight") -> "HalfWeight":
        return HalfWeight(tuple(a + b for a, b in zip(self.doubled, other.doubled)), self.shape)

    def __sub__(self, other: "HalfWeight") -> "HalfWeight":
        return HalfWeight(tuple(a - b for a, b in zip(self.doubled, other.doubled)), self.shape)

    def scale(self, c: int) -> "HalfWeight":
        return HalfWeight(tuple(c * a for a in self.doubled), self.shape)

    def is_integral(self) -> bool:
        return all(d % 2 == 0 for d in self.doubled)

    def to_weight(self) -> Weight:
        if not self.is_integral():
            raise ValueError(f"{self} is not integral")
        return Weight(tuple(d // 2 for d in self.doubled), self.shape)

    def __str__(self):
        def fmt(d):
            return str(d // 2) if d % 2 == 0 else f"{d}/2"

        m = self.shape.m
        return "(" + ",".join(map(fmt, self.doubled[:m])) + "|" + ",".join(map(fmt, self.doubled[m:])) + ")"


@dataclass(frozen=True)
class Root:
    """Positive root eps_i - eps_j, 0-based indices i < j."""

    i: int
    j: int
    parity: int

    def __str__(self):
        return f"e{self.i + 1}-e{self.j + 1}"

    def as_weight(self, shape: BlockShape) -> Weight:
        return shape.epsilon(self.i) - shape.epsilon(self.j)


def dominance_leq(mu: Weight, lam: Weight) -> bool:
    """Bruhat-Tits order via prefix sums."""
    mu._check(lam)
    if sum(mu.entries) != sum(lam.entries):
        return False
    s_mu = s_lam = 0
    for a, b in zip(mu.entries[:-1], lam.entries[:-1]):
        s_mu += a
        s_lam += b
        if s_mu > s_lam:
            return False
    return True


def root_cone_leq(mu: Weight, lam: Weight) -> dict[tuple[int, int], int] | None:
    """Certificate {(i, j): c_ij} with lam - mu = sum c_ij (eps_i - eps_j), i < j,
    found by left-to-right mass transport; ``None`` if no such combination exists.

    Indices in the certificate are 0-based.
    """
    mu._check(lam)
    diff = [b - a for a, b in zip(mu.entries, lam.entries)]
    supply: list[list[int]] = []  # FIFO of [index, remaining]
    cert: dict[tuple[int, int], int] = {}
    for j, d in enumerate(diff):
        if d > 0:
            supply.append([j, d])
        need = -d
        while need > 0:
            if not supply:
                return None
            src = supply[0]
            moved = min(src[1], need)
            cert[(src[0], j)] = cert.get((src[0], j), 0) + moved
            src[1] -= moved
            need -= moved
            if src[1] == 0:
                supply.pop(0)
    if supply:
        return None
    return cert


def apply_certificate(mu: Weight, cert: dict[tuple[int, int], int]) -> Weight:
    out = list(mu.entries)
    for (i, j), c in cert.items():
        if not i < j or c < 0:
            raise ValueError(f"bad certificate entry {(i, j)}: {c}")
        out[i] += c
        out[j] -= c
    return Weight(tuple(out), mu.shape)


def is_dominant(lam: Weight) -> bool:
    ev, od = lam.even, lam.odd
    return all(a >= b for a, b in zip(ev, ev[1:])) and all(a >= b for a, b in zip(od, od[1:]))


def positive_roots(shape: BlockShape) -> tuple[list[Root], list[Root]]:
    m, size = shape.m, shape.size
    even = [Root(i, j, 0) for i in range(m) for j in range(i + 1, m)]
    even += [Root(i, j, 0) for i in range(m, size) for j in range(i + 1, size)]
    odd = [Root(i, j, 1) for i in range(m) for j in range(m, size)]
    return even, odd


def rho_st(shape: BlockShape, s: int, t: int) -> Weight:
    return shape.weight([s] * shape.m + [t] * shape.n)


def rho_weights(shape: BlockShape, s: int = 0, t: int = 0):
    """Return (rho0, rho1, rho, rho_st) as half weights."""
    m, n = shape.m, shape.n
    rho0 = HalfWeight(tuple(m - 2 * i + 1 for i in range(1, m + 1)) + tuple(n - 2 * i + 1 for i in range(1, n + 1)), shape)
    rho1 = HalfWeight((n,) * m + (-m,) * n, shape)
    return rho0, rho1, rho0 - rho1, HalfWeight.from_weight(rho_st(shape, s, t))


def half_sum(shape: BlockShape, roots: Sequence[Root]) -> HalfWeight:
    doubled = [0] * shape.size
    for a in roots:
        doubled[a.i] += 1
        doubled[a.j] -= 1
    return HalfWeight(tuple(doubled), shape)


def pairing(chi: HalfWeight, alpha: Root) -> Fraction:
    """Form with signature (+1^m, -1^n) evaluated on eps_i - eps_j."""
    sh = chi.shape
    return sh.sign(alpha.i) * chi.entry(alpha.i) - sh.sign(alpha.j) * chi.entry(alpha.j)


def is_restricted(lam: Weight, r: int) -> bool:
    bound = lam.shape.p**r
    e = lam.entries
    return all(0 <= e[i] - e[i + 1] < bound for i in range(len(e) - 1) if i != lam.shape.m - 1)


def steinberg_value(shape: BlockShape, r: int, s: int, t: int) -> int:
    q = shape.p**r
    return (q + 1) // 2 * shape.m + (q - 1) // 2 * shape.n + s + t


def is_steinberg_weight(shape: BlockShape, r: int, s: int, t: int) -> bool:
    return steinberg_value(shape, r, s, t) % shape.p != 0


def marko_irreducible(lam: Weight) -> bool:
    """p does not divide (lam + rho, alpha) for any positive odd root alpha."""
    if not is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    sh = lam.shape
    shifted = HalfWeight.from_weight(lam) + rho_weights(sh)[2]
    for alpha in positive_roots(sh)[1]:
        value = pairing(shifted, alpha)
        assert value.denominator == 1, "odd pairing of an integral weight must be integral"
        if value.numerator % sh.p == 0:
            return False
    return True


def steinberg_weight(shape: BlockShape, r: int, s: int, t: int) -> Weight:
    """(p^r - 1) rho_0 + rho_{s,t}."""
    rho0 = rho_weights(shape)[0]
    return rho0.scale(shape.p**r - 1).to_weight() + rho_st(shape, s, t)


def theta_r(lam: Weight, r: int, s: int, t: int) -> Weight:
    sh = lam.shape
    return steinberg_weight(sh, r, s, t) + lam.scale(sh.p**r)
