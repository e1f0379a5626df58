"""Finite-dimensional supermodules over the Grassmann superalgebra E_N.

E_N is the exterior algebra on N odd generators g_0, ..., g_{N-1}; a monomial
g_{s_1} ... g_{s_k} (s_1 < ... < s_k) is encoded by the bitmask of its indices.
Over F_p it models both Dist(U) and Dist(U^opp) of GL(m|n) with N = mn.

A module is stored as a parity vector plus one action matrix per generator.
Cohomology H^k(E_N, M) = Ext^k(K, M) and homology H_k(E_N, M) = Tor_k(K, M) are
computed from a minimal free resolution of the trivial module, built degree by
degree by lifting a basis of each kernel modulo its radical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import linalg

DEFAULT_DEGREE_BOUND = 3


class DegreeBoundExceeded(ValueError):
    pass


def popcount(x: int) -> int:
    return bin(x).count("1")


def mono_sign(s: int, t: int) -> int:
    """Sign of g_S g_T = +- g_{S u T} for disjoint S, T (bitmasks)."""
    inversions = 0
    for b in range(t.bit_length()):
        if t >> b & 1:
            inversions += popcount(s >> (b + 1))
    return -1 if inversions % 2 else 1


# ---------------------------------------------------------------------------
# the algebra itself


@dataclass(frozen=True)
class GrassmannAlgebra:
    """E_N over F_p, or over the rationals when ``p`` is None."""

    N: int
    p: int | None = None

    @property
    def dim(self) -> int:
        return 1 << self.N

    def _norm(self, c):
        if self.p is None:
            return Fraction(c)
        return int(c) % self.p

    def element(self, coeffs=None) -> "GrassmannElement":
        return GrassmannElement(self, dict(coeffs or {}))

    def scalar(self, c) -> "GrassmannElement":
        return self.element({0: c})

    def generator(self, a: int) -> "GrassmannElement":
        if not 0 <= a < self.N:
            raise IndexError(f"generator {a} out of range for N={self.N}")
        return self.element({1 << a: 1})

    def monomial(self, indices: Sequence[int]) -> "GrassmannElement":
        out = self.scalar(1)
        for a in indices:
            out = out * self.generator(a)
        return out


@dataclass(frozen=True, eq=False)
class GrassmannElement:
    algebra: GrassmannAlgebra
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        norm = {}
        for mask, c in self.coeffs.items():
            if mask >> self.algebra.N:
                raise ValueError(f"monomial {mask:b} uses more than {self.algebra.N} generators")
            c = self.algebra._norm(c)
            if c:
                norm[int(mask)] = c
        object.__setattr__(self, "coeffs", norm)

    def _same(self, other):
        if isinstance(other, GrassmannElement):
            if other.algebra != self.algebra:
                raise ValueError("elements of different Grassmann algebras")
            return other
        return self.algebra.scalar(other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.algebra == other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.algebra, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        other = self._same(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return GrassmannElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(self.algebra, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        other = self._same(other)
        out: dict = {}
        for s, a in self.coeffs.items():
            for t, b in other.coeffs.items():
                if s & t:
                    continue
                u = s | t
                out[u] = out.get(u, 0) + mono_sign(s, t) * a * b
        return GrassmannElement(self.algebra, out)

    def __rmul__(self, other):
        return self._same(other) * self

    @property
    def body(self):
        return self.coeffs.get(0, self.algebra._norm(0))

    @property
    def soul(self) -> "GrassmannElement":
        return GrassmannElement(self.algebra, {k: v for k, v in self.coeffs.items() if k})

    def is_even(self) -> bool:
        return all(popcount(k) % 2 == 0 for k in self.coeffs)

    def is_odd(self) -> bool:
        return all(popcount(k) % 2 == 1 for k in self.coeffs)

    def drop_odd_symbols(self) -> "GrassmannElement":
        """Set every odd symbol to zero (keep the body only)."""
        return self.algebra.scalar(self.body)

    def inverse(self) -> "GrassmannElement":
        """Inverse of an element with invertible body (geometric series in the soul)."""
        b = self.body
        if not b:
            raise ZeroDivisionError("element has zero body")
        if self.algebra.p is None:
            b_inv = 1 / Fraction(b)
        else:
            b_inv = pow(int(b), -1, self.algebra.p)
        x = self.soul * b_inv
        total = self.algebra.scalar(1)
        term = self.algebra.scalar(1)
        for _ in range(self.algebra.N):
            term = term * (-x)
            if not term:
                break
            total = total + term
        return total * b_inv

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for mask in sorted(self.coeffs, key=lambda k: (popcount(k), k)):
            gens = "".join(f"g{a + 1}" for a in range(self.algebra.N) if mask >> a & 1)
            parts.append(f"{self.coeffs[mask]}{'*' + gens if gens else ''}")
        return " + ".join(parts)


def gr_multiply(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a * b


@lru_cache(maxsize=None)
def _mult_tables(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Left and right multiplication by each monomial as signed permutation data.

    ``left[s, t]`` is the signed target index of g_s * g_t, encoded as
    sign * (target + 1), 0 meaning the product vanishes; ``right`` likewise
    for g_t * g_s.
    """
    size = 1 << N
    left = np.zeros((size, size), dtype=np.int64)
    right = np.zeros((size, size), dtype=np.int64)
    for s in range(size):
        for t in range(size):
            if s & t:
                continue
            left[s, t] = mono_sign(s, t) * ((s | t) + 1)
            right[s, t] = mono_sign(t, s) * ((s | t) + 1)
    return left, right


def _mult_matrix(N: int, p: int, mask: int, side: str) -> np.ndarray:
    left, right = _mult_tables(N)
    table = left if side == "left" else right
    size = 1 << N
    mat = np.zeros((size, size), dtype=np.int64)
    for t in range(size):
        code = table[mask, t]
        if code:
            mat[abs(code) - 1, t] = 1 if code > 0 else p - 1
    return mat


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True, eq=False)
class ESuperModule:
    p: int
    parity: tuple[int, ...]
    actions: tuple[np.ndarray, ...]
    weights: tuple | None = None
    shifts: tuple | None = None  # weight shift of each generator, if weighted

    def __post_init__(self):
        object.__setattr__(self, "parity", tuple(int(x) for x in self.parity))
        acts = tuple(np.asarray(a, dtype=np.int64) % self.p for a in self.actions)
        for a in acts:
            a.setflags(write=False)
        object.__setattr__(self, "actions", acts)

    @property
    def dim(self) -> int:
        return len(self.parity)

    @property
    def N(self) -> int:
        return len(self.actions)

    @property
    def algebra(self) -> GrassmannAlgebra:
        return GrassmannAlgebra(self.N, self.p)

    def act(self, element: GrassmannElement) -> np.ndarray:
        """Matrix of a Grassmann element acting on the module."""
        stack = _monomial_actions(self)
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for mask, c in element.coeffs.items():
            out = (out + c * stack[mask]) % self.p
        return out

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "N": self.N,
            "p": self.p,
            "parity": list(self.parity),
            "actions": [a.tolist() for a in self.actions],
        }

    @classmethod
    def from_json(cls, data) -> "ESuperModule":
        if isinstance(data, str):
            data = json.loads(data)
        dim, N, p = int(data["dim"]), int(data["N"]), int(data["p"])
        actions = [np.asarray(a, dtype=np.int64).reshape(dim, dim) for a in data["actions"]]
        if len(actions) != N or len(data["parity"]) != dim:
            raise ValueError("module file is inconsistent with its dim/N fields")
        return cls(p, tuple(data["parity"]), tuple(actions))


def _monomial_actions(M: ESuperModule) -> np.ndarray:
    """rho(g_S) for every bitmask S, shape (2^N, d, d)."""
    cached = getattr(M, "_mono_cache", None)
    if cached is not None:
        return cached
    size, d, p = 1 << M.N, M.dim, M.p
    stack = np.zeros((size, d, d), dtype=np.int64)
    stack[0] = np.eye(d, dtype=np.int64)
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        # g_S = g_low * g_{S \ low}
        stack[mask] = (M.actions[low] @ stack[mask ^ (1 << low)]) % p
    object.__setattr__(M, "_mono_cache", stack)
    return stack


def trivial_module(N: int, p: int, parity: int = 0) -> ESuperModule:
    return ESuperModule(p, (parity,), tuple(np.zeros((1, 1), dtype=np.int64) for _ in range(N)))


def regular_module(N: int, p: int, parity: int = 0) -> ESuperModule:
    """E_N acting on itself by left multiplication."""
    size = 1 << N
    par = tuple((popcount(s) + parity) % 2 for s in range(size))
    acts = tuple(_mult_matrix(N, p, 1 << a, "left") for a in range(N))
    return ESuperModule(p, par, acts)


def direct_sum(*mods: ESuperModule) -> ESuperModule:
    p, N = mods[0].p, mods[0].N
    d = sum(M.dim for M in mods)
    acts = []
    for a in range(N):
        big = np.zeros((d, d), dtype=np.int64)
        off = 0
        for M in mods:
            big[off : off + M.dim, off : off + M.dim] = M.actions[a]
            off += M.dim
        acts.append(big)
    par = sum((M.parity for M in mods), ())
    return ESuperModule(p, par, tuple(acts))


def validate_module(M: ESuperModule) -> str | None:
    """First violated module axiom as a short report, or None when valid."""
    d, p = M.dim, M.p
    if any(x not in (0, 1) for x in M.parity):
        return "parity: entries must be 0 or 1"
    for a, G in enumerate(M.actions):
        if G.shape != (d, d):
            return f"shape: generator {a} has shape {G.shape}, expected {(d, d)}"
    par = np.array(M.parity)
    same = par[:, None] == par[None, :]
    for a, G in enumerate(M.actions):
        if np.any(G[same]):
            return f"parity: generator {a} is not an odd operator"
    for a, G in enumerate(M.actions):
        if np.any((G @ G) % p):
            return f"square: generator {a} does not square to zero"
    for a in range(M.N):
        for b in range(a + 1, M.N):
            A, B = M.actions[a], M.actions[b]
            if np.any((A @ B + B @ A) % p):
                return f"anticommute: generators {a} and {b}"
    if M.weights is not None:
        if len(M.weights) != d or M.shifts is None or len(M.shifts) != M.N:
            return "weights: labels or generator shifts missing"
        for a, G in enumerate(M.actions):
            rows, cols = np.nonzero(G)
            for r, c in zip(rows, cols):
                if M.weights[r] != M.weights[c] + M.shifts[a]:
                    return f"weights: generator {a} maps {M.weights[c]} to {M.weights[r]}"
    return None


def radical(M: ESuperModule) -> np.ndarray:
    """Basis (rows) of E^+ M, the span of all generator images."""
    if M.N == 0:
        return np.zeros((0, M.dim), dtype=np.int64)
    return linalg.column_space(np.hstack(M.actions), M.p)


def socle(M: ESuperModule) -> np.ndarray:
    """Basis (rows) of the joint kernel of the generators, i.e. M^E."""
    if M.N == 0:
        return np.eye(M.dim, dtype=np.int64)
    return linalg.nullspace(np.vstack(M.actions), M.p)


def is_free(M: ESuperModule) -> bool:
    top = M.dim - radical(M).shape[0]
    return M.dim == (1 << M.N) * top


def is_injective(M: ESuperModule) -> bool:
    return M.dim == (1 << M.N) * socle(M).shape[0]


def parity_shift(M: ESuperModule) -> ESuperModule:
    return ESuperModule(M.p, tuple(1 - x for x in M.parity), M.actions, M.weights, M.shifts)


def restrict_generators(M: ESuperModule, subset: Sequence[int]) -> ESuperModule:
    subset = list(subset)
    shifts = None if M.shifts is None else tuple(M.shifts[a] for a in subset)
    return ESuperModule(M.p, M.parity, tuple(M.actions[a] for a in subset), M.weights, shifts)


def transpose_dual(M: ESuperModule, sign: int = -1) -> ESuperModule:
    """Dual space with (g f)(m) = (-1)^{|f|} f(sign * g m).

    ``sign`` is the scalar by which the anti-automorphism t rescales a
    generator: -1 when passing from Dist(U) to Dist(U^opp), +1 the other way.
    """
    p = M.p
    D = np.diag([(-1) ** x for x in M.parity]).astype(np.int64)
    acts = tuple((sign * G.T @ D) % p for G in M.actions)
    # t fixes the torus, so weights are kept and generator shifts reverse
    shifts = None if M.shifts is None else tuple(s.scale(-1) for s in M.shifts)
    return ESuperModule(p, M.parity, acts, M.weights, shifts)


def submodule_span(M: ESuperModule, vectors) -> np.ndarray:
    """Basis (RREF rows) of the submodule generated by ``vectors``."""
    vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, M.dim)
    stack = _monomial_actions(M)
    images = np.einsum("sab,vb->sva", stack, vectors).reshape(-1, M.dim) % M.p
    return linalg.row_basis(images, M.p, M.dim)


def submodule(M: ESuperModule, vectors) -> ESuperModule:
    """The submodule generated by homogeneous ``vectors`` as a module in its own right."""
    basis = submodule_span(M, vectors)
    _, pivots = linalg.rref(basis, M.p) if basis.shape[0] else (None, [])
    par = tuple(M.parity[c] for c in pivots)
    # in RREF, coordinates of a vector in the row basis are its pivot entries
    acts = tuple((G @ basis.T)[pivots, :] % M.p if pivots else np.zeros((0, 0), dtype=np.int64) for G in M.actions)
    return ESuperModule(M.p, par, acts)


def quotient(M: ESuperModule, vectors) -> ESuperModule:
    """M modulo the submodule generated by homogeneous ``vectors``."""
    p = M.p
    basis = submodule_span(M, vectors)
    pivots = linalg.rref(basis, p)[1] if basis.shape[0] else []
    keep = [c for c in range(M.dim) if c not in set(pivots)]

    def reduce(v):
        v = v.copy()
        for row, pc in zip(basis, pivots):
            if v[pc]:
                v = (v - v[pc] * row) % p
        return v[keep]

    acts = []
    for G in M.actions:
        acts.append(np.array([reduce(G[:, c]) for c in keep], dtype=np.int64).T.reshape(len(keep), len(keep)))
    return ESuperModule(p, tuple(M.parity[c] for c in keep), tuple(acts))


# ---------------------------------------------------------------------------
# resolutions


@dataclass(frozen=True, eq=False)
class ResolutionStep:
    """P_k = E^rank -> P_{k-1}; ``generators[j]`` is the image of the j-th basis
    element, a vector of length rank_{k-1} * 2^N; ``differential`` is the
    F_p-linear matrix of the map."""

    rank: int
    generators: np.ndarray
    differential: np.ndarray


@lru_cache(maxsize=None)
def minimal_resolution(N: int, p: int, length: int, side: str = "left") -> tuple[ResolutionStep, ...]:
    """Minimal free resolution of the trivial module over E_N, degrees 1..length.

    ``side='left'`` resolves K as a left module (maps are right multiplication
    by the generator images); ``side='right'`` as a right module.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    size = 1 << N
    mult = [_mult_matrix(N, p, s, "left" if side == "left" else "right") for s in range(size)]
    gens_act = [mult[1 << a] for a in range(N)]

    # kernel of the augmentation E -> K
    prev_rank = 1
    kernel = np.eye(size, dtype=np.int64)[1:]
    steps: list[ResolutionStep] = []
    for _ in range(length):
        width = prev_rank * size
        if kernel.shape[0] == 0:
            gens = np.zeros((0, width), dtype=np.int64)
        else:
            blocks = kernel.reshape(-1, prev_rank, size)
            rad = np.concatenate(
                [np.einsum("ab,kib->kia", G, blocks).reshape(-1, width) for G in gens_act]
            ) % p
            chosen = linalg.extend_to_complement(rad, kernel, p)
            gens = kernel[chosen]
        rank = gens.shape[0]
        # column (j, s) of the differential is g_s acting on generator j
        gblocks = gens.reshape(rank, prev_rank, size)
        diff = np.zeros((width, rank * size), dtype=np.int64)
        for s in range(size):
            img = np.einsum("ab,kib->kia", mult[s], gblocks).reshape(rank, width) % p
            diff[:, np.arange(rank) * size + s] = img.T
        steps.append(ResolutionStep(rank, gens, diff))
        kernel = linalg.nullspace(diff, p) if rank else np.zeros((0, 0), dtype=np.int64)
        prev_rank = rank
    return tuple(steps)


def _element_blocks(M: ESuperModule, gens: np.ndarray, prev_rank: int) -> np.ndarray:
    """rho(z_{j,i}) for generator images z_j, shape (rank, prev_rank, d, d)."""
    stack = _monomial_actions(M)
    size = 1 << M.N
    z = gens.reshape(gens.shape[0], prev_rank, size)
    return np.einsum("jis,sab->jiab", z, stack) % M.p


def _check_degree(k: int, bound: int):
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if k > bound:
        raise DegreeBoundExceeded(f"degree {k} exceeds the configured bound {bound}")


def cochain_maps(M: ESuperModule, upto: int) -> list[np.ndarray]:
    """delta_k : Hom(P_k, M) -> Hom(P_{k+1}, M) for k = 0..upto."""
    steps = minimal_resolution(M.N, M.p, upto + 1, "left")
    ranks = [1] + [s.rank for s in steps]
    d = M.dim
    maps = []
    for k in range(upto + 1):
        step = steps[k]
        blocks = _element_blocks(M, step.generators, ranks[k])
        maps.append(blocks.transpose(0, 2, 1, 3).reshape(step.rank * d, ranks[k] * d))
    return maps


def chain_maps(M: ESuperModule, upto: int) -> list[np.ndarray]:
    """partial_k : P_k (x) M -> P_{k-1} (x) M for k = 1..upto+1 (index k-1)."""
    steps = minimal_resolution(M.N, M.p, upto + 1, "right")
    ranks = [1] + [s.rank for s in steps]
    d = M.dim
    maps = []
    for k in range(1, upto + 2):
        step = steps[k - 1]
        blocks = _element_blocks(M, step.generators, ranks[k - 1])
        maps.append(blocks.transpose(1, 2, 0, 3).reshape(ranks[k - 1] * d, step.rank * d))
    return maps


def cohomology_dim(M: ESuperModule, k: int, bound: int = DEFAULT_DEGREE_BOUND) -> int:
    """dim H^k(E_N, M) = dim Ext^k(K, M)."""
    _check_degree(k, bound)
    if M.dim == 0:
        return 0
    maps = cochain_maps(M, k)
    cols = maps[k].shape[1]
    kernel = cols - linalg.rank(maps[k], M.p)
    image = linalg.rank(maps[k - 1], M.p) if k > 0 else 0
    return kernel - image


def tor_dim(M: ESuperModule, k: int, bound: int = DEFAULT_DEGREE_BOUND) -> int:
    """dim Tor_k(K, M) straight from a right resolution of K tensored with M."""
    _check_degree(k, bound)
    if M.dim == 0:
        return 0
    maps = chain_maps(M, k)
    if k == 0:
        return M.dim - linalg.rank(maps[0], M.p)
    out = maps[k - 1]
    kernel = out.shape[1] - linalg.rank(out, M.p)
    return kernel - linalg.rank(maps[k], M.p)


def homology_dim(M: ESuperModule, k: int, bound: int = DEFAULT_DEGREE_BOUND, sign: int = -1) -> int:
    """dim H_k(E_N, M), computed as cohomology of the transpose dual."""
    return cohomology_dim(transpose_dual(M, sign), k, bound)


# ---------------------------------------------------------------------------
# random modules for property tests


def _random_homogeneous(rng: np.random.Generator, M: ESuperModule) -> np.ndarray:
    par = rng.integers(0, 2)
    v = rng.integers(0, M.p, size=M.dim)
    v[np.array(M.parity) != par] = 0
    return v


def random_module(rng: np.random.Generator, N: int, p: int, max_dim: int = 16) -> ESuperModule:
    """A random valid module assembled from free modules, trivial modules,
    submodules and quotients of free modules, and their duals."""
    pieces: list[ESuperModule] = []
    budget = max_dim
    for _ in range(6):
        kind = rng.choice(["free", "trivial", "quotient", "sub", "dual_quotient"], p=[0.2, 0.15, 0.3, 0.2, 0.15])
        if kind == "trivial":
            piece = trivial_module(N, p, int(rng.integers(0, 2)))
        else:
            F = regular_module(N, p, int(rng.integers(0, 2)))
            if kind == "free":
                piece = F
            else:
                vecs = [_random_homogeneous(rng, F) for _ in range(int(rng.integers(1, 3)))]
                piece = submodule(F, vecs) if kind == "sub" else quotient(F, vecs)
                if kind == "dual_quotient":
                    piece = transpose_dual(piece)
        if piece.dim == 0 or piece.dim > budget:
            continue
        pieces.append(piece)
        budget -= piece.dim
        if rng.random() < 0.4:
            break
    if not pieces:
        pieces.append(trivial_module(N, p))
    return direct_sum(*pieces)
