"""Supermatrices with Grassmann entries over Q and the Berezinian."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .grassmann import GrassmannAlgebra, GrassmannElement

Block = tuple[tuple[GrassmannElement, ...], ...]


class NonInvertible(ZeroDivisionError):
    pass


def _zeros(alg, rows, cols):
    return [[alg.scalar(0) for _ in range(cols)] for _ in range(rows)]


def mat_mul(alg: GrassmannAlgebra, A, B):
    rows, inner = len(A), len(B)
    cols = len(B[0]) if B else 0
    out = _zeros(alg, rows, cols)
    for i in range(rows):
        for j in range(cols):
            acc = alg.scalar(0)
            for k in range(inner):
                acc = acc + A[i][k] * B[k][j]
            out[i][j] = acc
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_neg(A):
    return [[-a for a in row] for row in A]


def _body(A):
    return [[Fraction(a.body) for a in row] for row in A]


def even_inverse(alg: GrassmannAlgebra, A):
    """Inverse of a square matrix with even entries and invertible body.

    A = A0 (1 + A0^{-1} X) with X nilpotent, so the Neumann series stops.
    """
    size = len(A)
    if size == 0:
        return []
    body = _body(A)
    b_inv = _rational_inverse(body)
    B0 = [[alg.scalar(x) for x in row] for row in b_inv]
    soul = [[a.soul for a in row] for row in A]
    step = mat_neg(mat_mul(alg, B0, soul))
    total = [[alg.scalar(1 if i == j else 0) for j in range(size)] for i in range(size)]
    term = total
    for _ in range(alg.N):
        term = mat_mul(alg, term, step)
        if all(not x for row in term for x in row):
            break
        total = mat_add(total, term)
    return mat_mul(alg, total, B0)


def _rational_inverse(body):
    size = len(body)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(body)]
    for col in range(size):
        piv = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if piv is None:
            raise NonInvertible("body of the block is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def even_det(alg: GrassmannAlgebra, A) -> GrassmannElement:
    """Determinant over the commutative even subalgebra, by elimination with
    pivots of invertible body."""
    size = len(A)
    rows = [list(r) for r in A]
    det = alg.scalar(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col].body != 0), None)
        if piv is None:
            # a column with nilpotent entries only: determinant is nilpotent; expand
            return _laplace_det(alg, A)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        p_inv = rows[col][col].inverse()
        det = det * rows[col][col]
        for r in range(col + 1, size):
            f = rows[r][col] * p_inv
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def _laplace_det(alg, A):
    size = len(A)
    if size == 0:
        return alg.scalar(1)
    total = alg.scalar(0)
    for j in range(size):
        minor = [row[:j] + row[j + 1 :] for row in A[1:]]
        term = A[0][j] * _laplace_det(alg, minor)
        total = total + term if j % 2 == 0 else total - term
    return total


@dataclass(frozen=True)
class SuperMatrix:
    algebra: GrassmannAlgebra
    m: int
    n: int
    c00: Block
    c01: Block
    c10: Block
    c11: Block

    def __post_init__(self):
        m, n = self.m, self.n
        dims = {"c00": (m, m), "c01": (m, n), "c10": (n, m), "c11": (n, n)}
        for name, (r, c) in dims.items():
            block = getattr(self, name)
            if len(block) != r or any(len(row) != c for row in block):
                raise ValueError(f"block {name} must be {r}x{c}")
            frozen = tuple(tuple(x if isinstance(x, GrassmannElement) else self.algebra.scalar(x) for x in row) for row in block)
            object.__setattr__(self, name, frozen)
            want_even = name in ("c00", "c11")
            for row in frozen:
                for x in row:
                    if x and (x.is_even() if want_even else x.is_odd()) is False:
                        kind = "even" if want_even else "odd"
                        raise ValueError(f"entries of {name} must be {kind}")

    @classmethod
    def from_full(cls, alg, m, n, full) -> "SuperMatrix":
        c00 = [row[:m] for row in full[:m]]
        c01 = [row[m:] for row in full[:m]]
        c10 = [row[:m] for row in full[m:]]
        c11 = [row[m:] for row in full[m:]]
        return cls(alg, m, n, c00, c01, c10, c11)

    @classmethod
    def identity(cls, alg, m, n) -> "SuperMatrix":
        size = m + n
        full = [[alg.scalar(int(i == j)) for j in range(size)] for i in range(size)]
        return cls.from_full(alg, m, n, full)

    def full(self):
        top = [list(a) + list(b) for a, b in zip(self.c00, self.c01)]
        bottom = [list(a) + list(b) for a, b in zip(self.c10, self.c11)]
        return top + bottom

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        return sm_multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self.m, self.n) == (other.m, other.n) and all(
            a == b for ra, rb in zip(self.full(), other.full()) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash((self.m, self.n))

    def map_entries(self, fn) -> "SuperMatrix":
        return SuperMatrix.from_full(self.algebra, self.m, self.n, [[fn(x) for x in row] for row in self.full()])

    def to_json(self) -> dict:
        def enc(block):
            return [[[[_mask_to_list(k), str(v)] for k, v in sorted(x.coeffs.items())] for x in row] for row in block]

        return {"m": self.m, "n": self.n, "odd_symbols": self.algebra.N,
                "c00": enc(self.c00), "c01": enc(self.c01), "c10": enc(self.c10), "c11": enc(self.c11)}

    @classmethod
    def from_json(cls, data) -> "SuperMatrix":
        """Entries are lists of [subset, rational] pairs; subsets are lists of
        1-based odd symbol indices, rationals are ints or strings like "3/4"."""
        if isinstance(data, str):
            data = json.loads(data)
        alg = GrassmannAlgebra(int(data["odd_symbols"]))

        def dec(block):
            out = []
            for row in block:
                out.append([alg.element({_list_to_mask(s): Fraction(c) for s, c in entry}) if entry else alg.scalar(0) for entry in row])
            return out

        return cls(alg, int(data["m"]), int(data["n"]), dec(data["c00"]), dec(data["c01"]), dec(data["c10"]), dec(data["c11"]))


def _mask_to_list(mask: int) -> list[int]:
    return [b + 1 for b in range(mask.bit_length()) if mask >> b & 1]


def _list_to_mask(items) -> int:
    mask = 0
    for a in items:
        if a < 1:
            raise ValueError("odd symbol indices are 1-based")
        mask |= 1 << (int(a) - 1)
    return mask


def sm_multiply(A: SuperMatrix, B: SuperMatrix) -> SuperMatrix:
    if (A.m, A.n) != (B.m, B.n):
        raise ValueError("supermatrix block sizes differ")
    return SuperMatrix.from_full(A.algebra, A.m, A.n, mat_mul(A.algebra, A.full(), B.full()))


def sm_invert(A: SuperMatrix) -> SuperMatrix:
    """Block inverse through the Schur complement of the odd-odd block."""
    alg = A.algebra
    try:
        d_inv = even_inverse(alg, A.c11)
        s = mat_add(A.c00, mat_neg(mat_mul(alg, mat_mul(alg, A.c01, d_inv), A.c10)))
        s_inv = even_inverse(alg, s)
    except NonInvertible as exc:
        raise NonInvertible(f"supermatrix is not invertible: {exc}") from None
    b_d = mat_mul(alg, A.c01, d_inv)
    d_c = mat_mul(alg, d_inv, A.c10)
    top_right = mat_neg(mat_mul(alg, s_inv, b_d))
    bottom_left = mat_neg(mat_mul(alg, d_c, s_inv))
    bottom_right = mat_add(d_inv, mat_mul(alg, mat_mul(alg, d_c, s_inv), b_d))
    return SuperMatrix(alg, A.m, A.n, s_inv, top_right, bottom_left, bottom_right)


def berezinian(A: SuperMatrix) -> GrassmannElement:
    """det(C00 - C01 C11^{-1} C10) * det(C11)^{-1}."""
    alg = A.algebra
    try:
        d_inv = even_inverse(alg, A.c11)
    except NonInvertible:
        raise NonInvertible("odd-odd block has singular body") from None
    schur = mat_add(A.c00, mat_neg(mat_mul(alg, mat_mul(alg, A.c01, d_inv), A.c10)))
    return even_det(alg, schur) * even_det(alg, A.c11).inverse()


def random_supermatrix(rng: np.random.Generator, alg: GrassmannAlgebra, m: int, n: int, max_coef: int = 3) -> SuperMatrix:
    """Random supermatrix whose diagonal blocks have invertible bodies."""
    even_masks = [s for s in range(1, alg.dim) if bin(s).count("1") % 2 == 0]
    odd_masks = [s for s in range(alg.dim) if bin(s).count("1") % 2 == 1]

    def coef():
        return Fraction(int(rng.integers(-max_coef, max_coef + 1)), int(rng.integers(1, 3)))

    def entry(masks, with_body):
        coeffs = {s: coef() for s in masks if rng.random() < 0.5}
        if with_body:
            coeffs[0] = coef()
        return alg.element(coeffs)

    def even_block(size):
        while True:
            block = [[entry(even_masks, True) for _ in range(size)] for _ in range(size)]
            try:
                _rational_inverse(_body(block))
                return block
            except NonInvertible:
                continue

    c00, c11 = even_block(m), even_block(n)
    c01 = [[entry(odd_masks, False) for _ in range(n)] for _ in range(m)]
    c10 = [[entry(odd_masks, False) for _ in range(m)] for _ in range(n)]
    return SuperMatrix(alg, m, n, c00, c01, c10, c11)
