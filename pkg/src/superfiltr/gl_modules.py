"""Explicit GL(m|n)-supermodules W, Lambda^k(W), S^k(W) over F_p and the
filtration criteria built on U / U^opp (co)invariants.

Basis vectors are sorted index words: ``(0, 2, 2)`` is w_1 w_3^2.  Indices are
0-based; index i is even when i < m.  In Lambda(W) two vectors a, b satisfy
ab = -(-1)^{|a||b|} ba, in S(W) ab = (-1)^{|a||b|} ba, so even vectors are
exterior in Lambda and odd vectors are exterior in S.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from math import comb

import numpy as np

from . import grassmann, linalg
from .characters import Character, ch_ev, decompose_good, dim_of
from .weights import BlockShape, Weight

Word = tuple[int, ...]


def _compositions(total: int, parts: int):
    """Exponent vectors of length ``parts`` summing to ``total``, colex order."""
    for combo in combinations_with_replacement(range(parts), total):
        vec = [0] * parts
        for c in combo:
            vec[c] += 1
        yield tuple(vec)


def _colex_key(vec):
    return tuple(reversed(vec))


@dataclass(frozen=True, eq=False)
class GLModule:
    shape: BlockShape
    kind: str
    degree: int
    basis: tuple[Word, ...]
    weights: tuple[Weight, ...]
    parity: tuple[int, ...]
    actions: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def p(self) -> int:
        return self.shape.p

    def index(self, word: Word) -> int:
        return self._positions()[word]

    def _positions(self):
        pos = getattr(self, "_pos", None)
        if pos is None:
            pos = {w: i for i, w in enumerate(self.basis)}
            object.__setattr__(self, "_pos", pos)
        return pos

    def label(self, word: Word) -> str:
        if not word:
            return "1"
        parts = []
        for idx in sorted(set(word)):
            e = word.count(idx)
            parts.append(f"w{idx + 1}" + (f"^{e}" if e > 1 else ""))
        return "*".join(parts)

    def diagonal(self, i: int) -> np.ndarray:
        """Action of the torus element e_ii."""
        return np.diag([w.entries[i] % self.p for w in self.weights]).astype(np.int64)

    def unit(self, i: int, j: int) -> np.ndarray:
        return self.diagonal(i) if i == j else self.actions[(i, j)]

    def character(self) -> Character:
        return Character(self.shape, _count(w.entries for w in self.weights))


def _count(keys):
    out: dict = {}
    for k in keys:
        out[k] = out.get(k, 0) + 1
    return out


# ---------------------------------------------------------------------------
# bases


def _exterior_basis(shape: BlockShape, k: int) -> list[Word]:
    m, n = shape.m, shape.n
    words = []
    for s in range(min(m, k) + 1):
        for I in combinations(range(m), s):
            for beta in sorted(_compositions(k - s, n), key=_colex_key):
                words.append(tuple(I) + sum(((m + t,) * b for t, b in enumerate(beta)), ()))
    return words


def _symmetric_basis(shape: BlockShape, k: int) -> list[Word]:
    m, n = shape.m, shape.n
    words = []
    for s in range(min(n, k) + 1):
        for J in combinations(range(m, m + n), s):
            for gamma in sorted(_compositions(k - s, m), key=_colex_key):
                words.append(sum(((t,) * g for t, g in enumerate(gamma)), ()) + tuple(J))
    return words


def _swap_sign(kind: str, shape: BlockShape, a: int, b: int) -> int:
    both_odd = shape.parity(a) * shape.parity(b)
    if kind == "exterior":
        return 1 if both_odd else -1
    return -1 if both_odd else 1


def normalize(kind: str, shape: BlockShape, word) -> tuple[int, Word]:
    """Sort a product of basis vectors of W, returning (sign, sorted word);
    sign 0 when the product vanishes."""
    w = list(word)
    sign = 1
    for end in range(len(w) - 1, 0, -1):
        for i in range(end):
            if w[i] > w[i + 1]:
                sign *= _swap_sign(kind, shape, w[i], w[i + 1])
                w[i], w[i + 1] = w[i + 1], w[i]
    for a, b in zip(w, w[1:]):
        if a == b and _swap_sign(kind, shape, a, a) == -1:
            return 0, tuple(w)
    return sign, tuple(w)


def _word_weight(shape: BlockShape, word: Word) -> Weight:
    e = [0] * shape.size
    for idx in word:
        e[idx] += 1
    return shape.weight(e)


def _unit_parity(shape: BlockShape, i: int, j: int) -> int:
    return (shape.parity(i) + shape.parity(j)) % 2


def leibniz_action(kind: str, shape: BlockShape, i: int, j: int, word: Word) -> dict[Word, int]:
    """e_ij applied to a monomial through the super Leibniz rule."""
    par_e = _unit_parity(shape, i, j)
    out: dict[Word, int] = {}
    passed = 0
    for t, idx in enumerate(word):
        if idx == j:
            sign = -1 if (par_e and passed % 2) else 1
            new = list(word)
            new[t] = i
            s2, target = normalize(kind, shape, new)
            if s2:
                out[target] = out.get(target, 0) + sign * s2
        passed += shape.parity(idx)
    return {w: c for w, c in out.items() if c}


def closed_form_action(kind: str, shape: BlockShape, i: int, j: int, word: Word) -> dict[Word, int] | None:
    """Odd matrix units on Lambda^k / S^k by the explicit monomial formulas.

    Returns None for even matrix units, which have no closed form here.
    """
    m = shape.m
    if _unit_parity(shape, i, j) == 0:
        return None
    raising = i < m  # e_ij with i even, j odd lies in Dist(U^opp)
    a, b = (i, j) if raising else (j, i)  # a even index, b odd index
    if kind == "exterior":
        I = [x for x in word if x < m]
        beta = [word.count(m + t) for t in range(shape.n)]
        sign = (-1) ** sum(1 for x in I if x > a)
        if raising:
            # e_ab . w^I w^beta = beta_b w^I w_a w^{beta - e_b}
            if a in I or beta[b - m] == 0:
                return {}
            coef = beta[b - m] * sign
            new_I = sorted(I + [a])
            beta[b - m] -= 1
        else:
            # e_ba . w^I w^beta = +- w^{I minus a} w^{beta + e_b}
            if a not in I:
                return {}
            coef = sign
            new_I = [x for x in I if x != a]
            beta[b - m] += 1
        target = tuple(new_I) + sum(((m + t,) * c for t, c in enumerate(beta)), ())
        return {target: coef}
    gamma = [word.count(t) for t in range(m)]
    J = [x for x in word if x >= m]
    if raising:
        # e_ab . w^gamma w_J = (-1)^{t-1} w^{gamma + e_a} w_{J minus j_t}
        if b not in J:
            return {}
        coef = (-1) ** J.index(b)
        gamma[a] += 1
        new_J = [x for x in J if x != b]
    else:
        # e_ba . w^gamma w_J = gamma_a w^{gamma - e_a} w_b w_J
        if b in J or gamma[a] == 0:
            return {}
        coef = gamma[a] * (-1) ** sum(1 for x in J if x < b)
        gamma[a] -= 1
        new_J = sorted(J + [b])
    target = sum(((t,) * g for t, g in enumerate(gamma)), ()) + tuple(new_J)
    return {target: coef}


def _matrix(basis, pos, p, fn) -> np.ndarray:
    mat = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for col, word in enumerate(basis):
        for target, c in fn(word).items():
            mat[pos[target], col] = (mat[pos[target], col] + c) % p
    return mat


def _build(shape: BlockShape, kind: str, k: int, basis: list[Word]) -> GLModule:
    pos = {w: i for i, w in enumerate(basis)}
    actions = {}
    for i in range(shape.size):
        for j in range(shape.size):
            if i != j:
                actions[(i, j)] = _matrix(basis, pos, shape.p, lambda w: leibniz_action(kind, shape, i, j, w))
    weights = tuple(_word_weight(shape, w) for w in basis)
    parity = tuple(sum(shape.parity(x) for x in w) % 2 for w in basis)
    return GLModule(shape, kind, k, tuple(basis), weights, parity, actions)


def natural_module(shape: BlockShape) -> GLModule:
    """W itself, basis w_1, ..., w_{m+n} in index order."""
    return _build(shape, "exterior", 1, [(i,) for i in range(shape.size)])


def exterior_power(shape: BlockShape, k: int) -> GLModule:
    if k < 0:
        raise ValueError("degree must be nonnegative")
    return _build(shape, "exterior", k, _exterior_basis(shape, k))


def symmetric_power(shape: BlockShape, k: int) -> GLModule:
    if k < 0:
        raise ValueError("degree must be nonnegative")
    return _build(shape, "symmetric", k, _symmetric_basis(shape, k))


def build(kind: str, shape: BlockShape, k: int) -> GLModule:
    if kind == "exterior":
        return exterior_power(shape, k)
    if kind == "symmetric":
        return symmetric_power(shape, k)
    raise ValueError(f"unknown module kind {kind!r}")


def exterior_dim(shape: BlockShape, k: int) -> int:
    return sum(comb(shape.m, i) * comb(k - i + shape.n - 1, shape.n - 1) for i in range(min(shape.m, k) + 1))


def symmetric_dim(shape: BlockShape, k: int) -> int:
    return sum(comb(shape.n, s) * comb(k - s + shape.m - 1, shape.m - 1) for s in range(min(shape.n, k) + 1))


# ---------------------------------------------------------------------------
# structural checks


def bracket_violations(M: GLModule) -> list[tuple[int, int, int, int]]:
    """Quadruples (i, j, k, l) where the super-bracket relation fails on M."""
    sh, p = M.shape, M.p
    size = sh.size
    bad = []
    eye = np.eye(M.dim, dtype=np.int64)
    zero = np.zeros_like(eye)
    for i in range(size):
        for j in range(size):
            A = M.unit(i, j)
            pa = _unit_parity(sh, i, j)
            for k in range(size):
                for l in range(size):
                    B = M.unit(k, l)
                    pb = _unit_parity(sh, k, l)
                    sgn = -1 if pa * pb else 1
                    lhs = (A @ B - sgn * (B @ A)) % p
                    rhs = (M.unit(i, l) if j == k else zero) - sgn * (M.unit(k, j) if l == i else zero)
                    if np.any((lhs - rhs) % p):
                        bad.append((i, j, k, l))
    return bad


def closed_form_mismatches(M: GLModule) -> list[tuple[int, int]]:
    """Odd matrix units whose Leibniz-built matrix differs from the explicit formula."""
    sh = M.shape
    pos = M._positions()
    bad = []
    for (i, j), mat in M.actions.items():
        if _unit_parity(sh, i, j) == 0:
            continue
        closed = _matrix(M.basis, pos, M.p, lambda w: closed_form_action(M.kind, sh, i, j, w))
        if not np.array_equal(closed, mat):
            bad.append((i, j))
    return bad


# ---------------------------------------------------------------------------
# U and U^opp


def odd_pairs(shape: BlockShape) -> list[tuple[int, int]]:
    """(i, j) with i even, j odd, in the generator order used for E_{mn}."""
    return [(i, j) for i in range(shape.m) for j in range(shape.m, shape.size)]


def _units(M: GLModule, side: str) -> list[np.ndarray]:
    if side in ("U_opp", "Uopp", "u_opp"):
        return [M.actions[(i, j)] for i, j in odd_pairs(M.shape)]
    if side in ("U", "u"):
        return [M.actions[(j, i)] for i, j in odd_pairs(M.shape)]
    raise ValueError(f"side must be 'U' or 'U_opp', not {side!r}")


def as_E_module(M: GLModule, side: str = "U_opp") -> grassmann.ESuperModule:
    acts = _units(M, side)
    sh = M.shape
    if side in ("U", "u"):
        shifts = tuple(sh.epsilon(j) - sh.epsilon(i) for i, j in odd_pairs(sh))
    else:
        shifts = tuple(sh.epsilon(i) - sh.epsilon(j) for i, j in odd_pairs(sh))
    E = grassmann.ESuperModule(M.p, M.parity, tuple(acts), M.weights, shifts)
    problem = grassmann.validate_module(E)
    if problem:
        raise RuntimeError(f"construction bug, restricted module invalid: {problem}")
    return E


def _weight_blocks(M: GLModule) -> dict[Weight, list[int]]:
    blocks: dict[Weight, list[int]] = {}
    for idx, w in enumerate(M.weights):
        blocks.setdefault(w, []).append(idx)
    return blocks


def u_opp_invariants(M: GLModule) -> tuple[np.ndarray, Character]:
    """Joint kernel of the e_ij (i <= m < j) and its character."""
    ops = np.vstack(_units(M, "U_opp")) if M.dim else np.zeros((0, 0), dtype=np.int64)
    terms = {}
    vecs = []
    for w, idxs in _weight_blocks(M).items():
        ker = linalg.nullspace(ops[:, idxs], M.p)
        if ker.shape[0]:
            full = np.zeros((ker.shape[0], M.dim), dtype=np.int64)
            full[:, idxs] = ker
            vecs.append(full)
            terms[w.entries] = ker.shape[0]
    basis = np.vstack(vecs) if vecs else np.zeros((0, M.dim), dtype=np.int64)
    return basis, Character(M.shape, terms)


def u_coinvariants(M: GLModule) -> tuple[list[int], Character]:
    """M / M_U with M_U spanned by the images of the e_ji (i <= m < j).

    Returns the indices of basis vectors whose classes form a basis of the
    quotient, and its character.
    """
    images = np.hstack(_units(M, "U")) if M.dim else np.zeros((0, 0), dtype=np.int64)
    span = linalg.column_space(images, M.p)
    chosen = linalg.extend_to_complement(span, np.eye(M.dim, dtype=np.int64), M.p)
    terms = _count(M.weights[c].entries for c in chosen)
    return chosen, Character(M.shape, terms)


def b_opp_primitive_vectors(M: GLModule, lam: Weight) -> np.ndarray:
    """Weight-lam vectors killed by every e_ij with i < j."""
    idxs = [i for i, w in enumerate(M.weights) if w == lam]
    if not idxs:
        return np.zeros((0, M.dim), dtype=np.int64)
    size = M.shape.size
    ops = np.vstack([M.actions[(i, j)] for i in range(size) for j in range(i + 1, size)])
    ker = linalg.nullspace(ops[:, idxs], M.p)
    full = np.zeros((ker.shape[0], M.dim), dtype=np.int64)
    full[:, idxs] = ker
    return full


# ---------------------------------------------------------------------------
# filtration criteria


class Answer(enum.Enum):
    NO_NOT_INJECTIVE_OVER_U = "No_NotInjectiveOverU"
    NO_NEGATIVE_MULTIPLICITY = "No_NegativeMultiplicity"
    YES_CHARACTER_LEVEL = "Yes_CharacterLevel"

    @property
    def is_yes(self) -> bool:
        return self is Answer.YES_CHARACTER_LEVEL


@dataclass(frozen=True)
class FiltrationVerdict:
    answer: Answer
    degree_one: int
    multiplicities: dict = field(default_factory=dict)

    @property
    def is_yes(self) -> bool:
        return self.answer.is_yes

    @property
    def rigorous(self) -> bool:
        """No answers always are.  A Yes is when every section is one
        dimensional, since a composition series then is already a filtration
        by induced (resp. Weyl) even-block modules."""
        if not self.is_yes:
            return True
        return all(dim_of(ch_ev(w)) == 1 for w in self.multiplicities)

    def to_json(self) -> dict:
        return {
            "answer": self.answer.value,
            "rigorous": self.rigorous,
            "degree_one_dim": self.degree_one,
            "multiplicities": [
                {"weight": [list(w.even), list(w.odd)], "mult": c}
                for w, c in sorted(self.multiplicities.items(), key=lambda kv: kv[0].entries, reverse=True)
            ],
        }


def _verdict(degree_one: int, ch: Character) -> FiltrationVerdict:
    if degree_one:
        return FiltrationVerdict(Answer.NO_NOT_INJECTIVE_OVER_U, degree_one)
    mult = decompose_good(ch, "even")
    if any(c < 0 for c in mult.values()):
        return FiltrationVerdict(Answer.NO_NEGATIVE_MULTIPLICITY, 0, mult)
    return FiltrationVerdict(Answer.YES_CHARACTER_LEVEL, 0, mult)


def check_good_filtration(M: GLModule) -> FiltrationVerdict:
    """H^1(U^opp, M) = 0 and a nonnegative ch_ev expansion of M^{U^opp}."""
    h1 = grassmann.cohomology_dim(as_E_module(M, "U_opp"), 1)
    if h1:
        return FiltrationVerdict(Answer.NO_NOT_INJECTIVE_OVER_U, h1)
    return _verdict(0, u_opp_invariants(M)[1])


def check_weyl_filtration(M: GLModule) -> FiltrationVerdict:
    """H_1(U, M) = 0 and a nonnegative Weyl expansion of M / M_U."""
    h1 = grassmann.homology_dim(as_E_module(M, "U"), 1, sign=-1)
    if h1:
        return FiltrationVerdict(Answer.NO_NOT_INJECTIVE_OVER_U, h1)
    return _verdict(0, u_coinvariants(M)[1])


def predicted_exterior(shape: BlockShape, k: int) -> bool:
    return shape.n == 1 and k >= shape.m and k % shape.p >= shape.m


def predicted_symmetric(shape: BlockShape, k: int) -> bool:
    return shape.m == 1 and shape.n <= k < shape.p


def predicted(kind: str, shape: BlockShape, k: int) -> bool:
    """Closed-form answer stated for both filtration types in the source results."""
    return predicted_exterior(shape, k) if kind == "exterior" else predicted_symmetric(shape, k)


def exterior_invariant_words(shape: BlockShape, k: int) -> set[Word]:
    """Monomials spanning Lambda^k(W)^{U^opp} by the closed-form decomposition."""
    m, n, p = shape.m, shape.n, shape.p
    out: set[Word] = set()
    for i in range(min(k, m - 1) + 1):
        if (k - i) % p:
            continue
        for I in combinations(range(m), i):
            for gamma in _compositions((k - i) // p, n):
                out.add(tuple(I) + sum(((m + t,) * (p * g) for t, g in enumerate(gamma)), ()))
    if k >= m:
        for beta in _compositions(k - m, n):
            out.add(tuple(range(m)) + sum(((m + t,) * b for t, b in enumerate(beta)), ()))
    return out


def verify_exterior_invariants_formula(shape: BlockShape, k: int) -> bool:
    M = exterior_power(shape, k)
    basis, _ = u_opp_invariants(M)
    predicted_words = exterior_invariant_words(shape, k)
    if basis.shape[0] != len(predicted_words):
        return False
    reduced = linalg.row_basis(basis, M.p, M.dim) if basis.shape[0] else basis
    expected = np.zeros((len(predicted_words), M.dim), dtype=np.int64)
    for row, idx in enumerate(sorted(M.index(w) for w in predicted_words)):
        expected[row, idx] = 1
    # a monomial subspace has the unit vectors of its monomials as RREF
    return np.array_equal(reduced, expected)


def trivial_gl_module(shape: BlockShape) -> GLModule:
    return exterior_power(shape, 0)
