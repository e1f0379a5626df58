import itertools
import json
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superfiltr import linalg
from superfiltr.grassmann import (
    DegreeBoundExceeded,
    ESuperModule,
    GrassmannAlgebra,
    cochain_maps,
    cohomology_dim,
    direct_sum,
    gr_multiply,
    homology_dim,
    is_free,
    is_injective,
    minimal_resolution,
    parity_shift,
    quotient,
    radical,
    random_module,
    regular_module,
    restrict_generators,
    socle,
    tor_dim,
    transpose_dual,
    trivial_module,
    validate_module,
)

seeds = st.integers(0, 2**32 - 1)


def rand_mod(seed, N=None, p=None):
    rng = np.random.default_rng(seed)
    N = N if N is not None else int(rng.integers(1, 5))
    p = p if p is not None else int(rng.choice([3, 5]))
    return random_module(rng, N, p)


# --- algebra -----------------------------------------------------------------------------


def test_generator_sign_rule():
    E = GrassmannAlgebra(3, 5)
    g1, g2, g3 = (E.generator(a) for a in range(3))
    assert gr_multiply(g1, g2) == -gr_multiply(g2, g1)
    assert not gr_multiply(g1, g1)
    assert gr_multiply(gr_multiply(g1, g2), g3) == E.monomial([0, 1, 2])
    assert E.monomial([1, 0]) == -E.monomial([0, 1])


@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8), st.lists(st.integers(-3, 3), min_size=8, max_size=8),
       st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_grassmann_product_is_associative(a, b, c):
    E = GrassmannAlgebra(3)
    x, y, z = (E.element(dict(enumerate(v))) for v in (a, b, c))
    assert (x * y) * z == x * (y * z)


def test_even_elements_invert():
    E = GrassmannAlgebra(4)
    x = E.scalar(2) + E.monomial([0, 1]) + 3 * E.monomial([2, 3])
    assert x * x.inverse() == E.scalar(1)
    with pytest.raises(ZeroDivisionError):
        E.monomial([0, 1]).inverse()


# --- validation ----------------------------------------------------------------------


@pytest.mark.parametrize("N", [0, 1, 2, 3, 4])
def test_regular_module_is_valid(N):
    assert validate_module(regular_module(N, 3)) is None


def test_validation_reports():
    bad = ESuperModule(3, (0, 1), (np.array([[0, 1], [1, 0]]),))
    assert validate_module(bad).startswith("square")
    even_op = ESuperModule(3, (0, 0), (np.array([[0, 1], [0, 0]]),))
    assert validate_module(even_op).startswith("parity")
    wrong_shape = ESuperModule(3, (0, 1), (np.zeros((3, 3), dtype=np.int64),))
    assert validate_module(wrong_shape).startswith("shape")


def test_anticommute_violation():
    # g1 g2 = g2 g1 on the top vector: they commute instead of anticommuting
    c = np.zeros((4, 4), dtype=np.int64)
    d = np.zeros((4, 4), dtype=np.int64)
    c[1, 0] = c[3, 2] = 1
    d[2, 0] = d[3, 1] = 1
    report = validate_module(ESuperModule(5, (0, 1, 1, 0), (c, d)))
    assert report.startswith("anticommute")


@given(seeds)
def test_random_modules_are_valid(seed):
    M = rand_mod(seed)
    assert validate_module(M) is None
    assert 1 <= M.dim <= 16


# --- radical, socle, freeness -----------------------------------------------------------


def test_radical_socle_examples():
    E1 = regular_module(1, 3)
    assert radical(E1).shape[0] == 1 and socle(E1).shape[0] == 1
    K = trivial_module(2, 3)
    assert radical(K).shape[0] == 0 and socle(K).shape[0] == 1
    E2 = regular_module(2, 3)
    assert radical(E2).shape[0] == 3 and socle(E2).shape[0] == 1


def test_free_injective_examples():
    for N in range(4):
        E = regular_module(N, 5)
        assert is_free(E) and is_injective(E)
    K = trivial_module(2, 3)
    assert not is_free(K) and not is_injective(K)
    E2 = regular_module(2, 3)
    top_removed = quotient(E2, [socle(E2)[0]])
    assert top_removed.dim == 3 and not is_free(top_removed)


@given(seeds)
def test_free_iff_injective_iff_degree_one_vanishes(seed):
    M = rand_mod(seed)
    assert is_free(M) == is_injective(M)
    assert is_injective(M) == (cohomology_dim(M, 1) == 0)
    assert is_free(M) == (homology_dim(M, 1) == 0)
    assert is_free(M) == is_injective(transpose_dual(M))


# --- cohomology and homology ------------------------------------------------------------


def test_cohomology_examples():
    K = trivial_module(1, 3)
    assert cohomology_dim(K, 0) == 1
    assert cohomology_dim(K, 1) == 1
    assert homology_dim(K, 1) == 1
    for N in range(1, 4):
        E = regular_module(N, 3)
        assert cohomology_dim(E, 1) == 0 and homology_dim(E, 1) == 0 and homology_dim(E, 2) == 0


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("side", ["left", "right"])
def test_resolution_ranks_and_differentials(N, side):
    steps = minimal_resolution(N, 3, 4, side)
    for k, step in enumerate(steps, start=1):
        # Ext^k(K, K) of an exterior algebra is the degree-k part of a polynomial ring
        brute = sum(1 for _ in itertools.combinations_with_replacement(range(N), k))
        assert step.rank == comb(N + k - 1, k) == brute
    for lower, upper in zip(steps, steps[1:]):
        assert not np.any((lower.differential @ upper.differential) % 3)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_trivial_module_cohomology_counts(N):
    K = trivial_module(N, 5)
    for k in range(4):
        assert cohomology_dim(K, k) == comb(N + k - 1, k)
        assert tor_dim(K, k) == comb(N + k - 1, k)


@given(seeds)
def test_homology_by_duality_matches_direct_tor(seed):
    M = rand_mod(seed)
    for k in range(3):
        assert homology_dim(M, k) == tor_dim(M, k) == cohomology_dim(transpose_dual(M), k)


@given(seeds)
def test_cochain_complex_and_euler_characteristic(seed):
    M = rand_mod(seed)
    bound = 3
    maps = cochain_maps(M, bound)
    for a, b in zip(maps, maps[1:]):
        assert not np.any((b @ a) % M.p)
    # alternating sum over the truncated complex: sum (-1)^k dim C^k equals
    # sum (-1)^k H^k plus the boundary term (-1)^bound rank(delta_bound)
    dims = [m.shape[1] for m in maps]
    lhs = sum((-1) ** k * dims[k] for k in range(bound + 1))
    rhs = sum((-1) ** k * cohomology_dim(M, k) for k in range(bound + 1))
    rhs += (-1) ** bound * linalg.rank(maps[bound], M.p)
    assert lhs == rhs


@given(seeds)
def test_euler_characteristic_of_injective_modules(seed):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(1, 4))
    M = direct_sum(*[regular_module(N, 3, int(rng.integers(0, 2))) for _ in range(int(rng.integers(1, 3)))])
    euler = sum((-1) ** k * cohomology_dim(M, k) for k in range(4))
    assert euler == socle(M).shape[0] == M.dim // 2**N


def test_degree_bound():
    K = trivial_module(1, 3)
    with pytest.raises(DegreeBoundExceeded):
        cohomology_dim(K, 4)
    assert cohomology_dim(K, 4, bound=5) == 1


# --- constructions --------------------------------------------------------------------


def test_transpose_dual_examples():
    K = trivial_module(2, 3)
    D = transpose_dual(K)
    assert D.dim == 1 and validate_module(D) is None and cohomology_dim(D, 0) == 1


@given(seeds)
def test_transpose_dual_properties(seed):
    M = rand_mod(seed)
    D = transpose_dual(M)
    assert validate_module(D) is None
    assert D.dim == M.dim and sorted(D.parity) == sorted(M.parity)
    DD = transpose_dual(D)
    assert all(cohomology_dim(DD, k) == cohomology_dim(M, k) for k in range(3))


def test_restrict_generators_examples():
    E2 = regular_module(2, 3)
    R = restrict_generators(E2, [0])
    assert R.N == 1 and R.dim == 4 and is_free(R) and R.dim - radical(R).shape[0] == 2
    same = restrict_generators(E2, [0, 1])
    assert all(np.array_equal(a, b) for a, b in zip(same.actions, E2.actions))
    K = trivial_module(3, 3)
    for S in ([0], [1, 2], [0, 1, 2]):
        assert not is_injective(restrict_generators(K, S))


@given(seeds)
def test_parity_shift_properties(seed):
    M = rand_mod(seed)
    S = parity_shift(M)
    assert parity_shift(S).parity == M.parity
    assert validate_module(S) is None
    assert is_free(S) == is_free(M)
    assert socle(S).shape[0] == socle(M).shape[0]


def test_module_json_round_trip():
    M = rand_mod(7)
    data = json.loads(json.dumps(M.to_json()))
    assert set(data) == {"dim", "N", "p", "parity", "actions"}
    back = ESuperModule.from_json(data)
    assert back.parity == M.parity and all(np.array_equal(a, b) for a, b in zip(back.actions, M.actions))
    data["N"] += 1
    with pytest.raises(ValueError):
        ESuperModule.from_json(data)


def test_action_of_elements():
    E2 = regular_module(2, 5)
    E = E2.algebra
    top = E.monomial([0, 1])
    v = np.zeros(4, dtype=np.int64)
    v[0] = 1
    assert (E2.act(top) @ v % 5)[3] in (1, 4)
