import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superfiltr.grassmann import GrassmannAlgebra
from superfiltr.supermatrix import (
    NonInvertible,
    SuperMatrix,
    berezinian,
    even_det,
    random_supermatrix,
    sm_invert,
    sm_multiply,
)

seeds = st.integers(0, 2**32 - 1)


def random_pair(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(1, 3)), int(rng.integers(1, 3))
    alg = GrassmannAlgebra(int(rng.integers(0, 4)))
    return random_supermatrix(rng, alg, m, n), random_supermatrix(rng, alg, m, n)


def diag(alg, a, b):
    return SuperMatrix(alg, 1, 1, [[a]], [[0]], [[0]], [[b]])


def test_identity_and_inverse_examples():
    alg = GrassmannAlgebra(2)
    A, _ = random_pair(3)
    I = SuperMatrix.identity(A.algebra, A.m, A.n)
    assert I @ A == A == A @ I
    D = diag(alg, 2, 3)
    inv = sm_invert(D)
    assert inv.c00[0][0] == alg.scalar(Fraction(1, 2)) and inv.c11[0][0] == alg.scalar(Fraction(1, 3))


def test_berezinian_examples():
    alg = GrassmannAlgebra(2)
    assert berezinian(SuperMatrix.identity(alg, 2, 2)) == alg.scalar(1)
    assert berezinian(diag(alg, 2, 3)) == alg.scalar(Fraction(2, 3))


def test_berezinian_with_odd_entries_by_hand():
    # [[1, x], [y, 1]]: Ber = 1 - x y
    alg = GrassmannAlgebra(2)
    x, y = alg.generator(0), alg.generator(1)
    A = SuperMatrix(alg, 1, 1, [[1]], [[x]], [[y]], [[1]])
    assert berezinian(A) == alg.scalar(1) - x * y


@given(seeds)
def test_berezinian_multiplicative(seed):
    A, B = random_pair(seed)
    assert berezinian(sm_multiply(A, B)) == berezinian(A) * berezinian(B)


@given(seeds)
def test_inverse_exact(seed):
    A, _ = random_pair(seed)
    I = SuperMatrix.identity(A.algebra, A.m, A.n)
    inv = sm_invert(A)
    assert A @ inv == I == inv @ A
    assert berezinian(inv) * berezinian(A) == A.algebra.scalar(1)


@given(seeds)
def test_berezinian_commutes_with_dropping_odd_symbols(seed):
    A, _ = random_pair(seed)
    body = A.map_entries(lambda x: x.drop_odd_symbols())
    assert berezinian(A).drop_odd_symbols() == berezinian(body)


@given(seeds)
def test_purely_even_berezinian(seed):
    A, _ = random_pair(seed)
    alg = A.algebra
    Z = lambda r, c: [[alg.scalar(0)] * c for _ in range(r)]
    even = SuperMatrix(alg, A.m, A.n, A.c00, Z(A.m, A.n), Z(A.n, A.m), A.c11)
    assert berezinian(even) == even_det(alg, A.c00) * even_det(alg, A.c11).inverse()


def test_block_parity_enforced():
    alg = GrassmannAlgebra(2)
    x = alg.generator(0)
    with pytest.raises(ValueError):
        SuperMatrix(alg, 1, 1, [[x]], [[0]], [[0]], [[1]])
    with pytest.raises(ValueError):
        SuperMatrix(alg, 1, 1, [[1]], [[1]], [[0]], [[1]])
    with pytest.raises(ValueError):
        SuperMatrix(alg, 1, 1, [[1, 0]], [[0]], [[0]], [[1]])


def test_non_invertible():
    alg = GrassmannAlgebra(1)
    with pytest.raises(NonInvertible):
        berezinian(diag(alg, 1, 0))
    with pytest.raises(NonInvertible):
        sm_invert(diag(alg, 0, 1))


def test_json_round_trip():
    A, _ = random_pair(11)
    data = json.loads(json.dumps(A.to_json()))
    assert data["odd_symbols"] == A.algebra.N
    assert SuperMatrix.from_json(data) == A


def test_json_subsets_are_one_based():
    data = {"m": 1, "n": 1, "odd_symbols": 1, "c00": [[[[[], "2"]]]], "c01": [[[[[0], "1"]]]],
            "c10": [[[]]], "c11": [[[[[], 1]]]]}
    with pytest.raises(ValueError):
        SuperMatrix.from_json(data)
