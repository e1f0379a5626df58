"""Dense exact linear algebra over the prime field F_p.

Matrices are numpy ``int64`` arrays with entries in ``[0, p)``.  Entries stay
small (below p**2) during elimination, so int64 never overflows for the
primes used here.
"""

from __future__ import annotations

import numpy as np


def as_fp(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def _inv(a: int, p: int) -> int:
    return pow(int(a), -1, p)


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns of ``a`` over F_p."""
    r = as_fp(a, p).copy()
    if r.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = (r[row] * _inv(r[row, col], p)) % p
        factors = r[:, col].copy()
        factors[row] = 0
        mask = factors != 0
        if mask.any():
            r[mask] = (r[mask] - np.outer(factors[mask], r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Basis of the right kernel {x : a x = 0}, one vector per row."""
    a = np.asarray(a)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-r[i, f]) % p
    return basis


def column_space(a, p: int) -> np.ndarray:
    """Basis of the column span of ``a``, one vector per row (reduced)."""
    a = np.asarray(a)
    if a.size == 0:
        return np.zeros((0, a.shape[0]), dtype=np.int64)
    r, pivots = rref(a.T, p)
    return r[: len(pivots)]


def row_basis(vectors, p: int, width: int) -> np.ndarray:
    v = np.asarray(vectors, dtype=np.int64).reshape(-1, width)
    if v.shape[0] == 0:
        return v
    r, pivots = rref(v, p)
    return r[: len(pivots)]


def extend_to_complement(sub, candidates, p: int) -> list[int]:
    """Indices of ``candidates`` rows that extend ``sub`` to a basis of
    span(sub) + span(candidates), chosen greedily in order."""
    candidates = np.asarray(candidates, dtype=np.int64)
    width = candidates.shape[1]
    sub = np.asarray(sub, dtype=np.int64).reshape(-1, width)
    if candidates.shape[0] == 0:
        return []
    # leftmost independent columns of [sub^T | cand^T] are exactly the greedy picks
    stacked = np.vstack([sub, candidates]).T
    _, pivots = rref(stacked, p)
    offset = sub.shape[0]
    return [c - offset for c in pivots if c >= offset]
