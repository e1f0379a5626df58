import itertools
import json

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from superfiltr.characters import (
    Character,
    IterationCapExceeded,
    NotFiltrationCharacter,
    ch_ev,
    ch_induced,
    decompose_good,
    dim_of,
    odd_factor,
    schur,
    twist,
    verify_translation_identity,
)
from superfiltr.weights import BlockShape, is_dominant, steinberg_weight

S11 = BlockShape(1, 1, 3)
S21 = BlockShape(2, 1, 3)
SHAPES = [(1, 1), (2, 1), (1, 2), (2, 2)]


def C(shape, terms):
    return Character(shape, terms)


def dominant(shape, entries):
    even = sorted(entries[: shape.m], reverse=True)
    odd = sorted(entries[shape.m : shape.size], reverse=True)
    return shape.weight(even + odd)


# --- oracle: bialternant formula in sympy ----------------------------------------


def bialternant(parts):
    k = len(parts)
    xs = sympy.symbols(f"x0:{k}")
    shift = min(parts)
    top = sympy.Matrix(k, k, lambda i, j: xs[i] ** (parts[j] - shift + k - 1 - j))
    bottom = sympy.Matrix(k, k, lambda i, j: xs[i] ** (k - 1 - j))
    quotient = sympy.cancel(top.det() / bottom.det())
    poly = sympy.Poly(sympy.expand(quotient), *xs)
    return {tuple(e + shift for e in exp): int(c) for exp, c in poly.terms()}


@pytest.mark.parametrize("parts", [(0,), (3,), (-2,), (1, 0), (2, 1), (3, -1), (0, -2), (2, 1, 0), (2, 2, -1), (1, 0, -1)])
def test_schur_matches_bialternant(parts):
    assert schur(parts) == bialternant(parts)


# --- ch_ev, odd factor, induced --------------------------------------------------------


def test_ch_ev_examples():
    assert ch_ev(S11.weight([1, 0])) == C(S11, {(1, 0): 1})
    assert ch_ev(S21.weight([1, 0, 0])) == C(S21, {(1, 0, 0): 1, (0, 1, 0): 1})
    assert ch_ev(S21.weight([1, 1, 0])) == C(S21, {(1, 1, 0): 1})
    with pytest.raises(ValueError):
        ch_ev(S21.weight([0, 1, 0]))


@given(st.sampled_from(SHAPES), st.lists(st.integers(-3, 4), min_size=4, max_size=4), st.data())
def test_ch_ev_block_symmetric(mn, entries, data):
    shape = BlockShape(*mn, 3)
    lam = dominant(shape, entries)
    ch = ch_ev(lam)
    even = data.draw(st.permutations(range(shape.m)))
    odd = data.draw(st.permutations(range(shape.m, shape.size)))
    assert ch.permute(list(even) + list(odd)) == ch
    assert all(c > 0 for c in ch.terms.values())
    assert ch.coefficient(lam) == 1 and ch.leading() == lam


def test_odd_factor_examples():
    assert odd_factor(S11) == C(S11, {(0, 0): 1, (-1, 1): 1})
    expected = C(S21, {(0, 0, 0): 1, (-1, 0, 1): 1}) * C(S21, {(0, 0, 0): 1, (0, -1, 1): 1})
    assert odd_factor(S21) == expected
    assert dim_of(odd_factor(BlockShape(2, 2, 3))) == 16


def test_ch_induced_examples():
    assert ch_induced(S11.weight([1, 0])) == C(S11, {(1, 0): 1, (0, 1): 1})
    assert ch_induced(S21.zero()) == odd_factor(S21)
    assert dim_of(ch_induced(S11.weight([1, 0]))) == 2


@given(st.sampled_from(SHAPES), st.lists(st.integers(-3, 4), min_size=4, max_size=4))
def test_induced_dimension_and_leading_term(mn, entries):
    shape = BlockShape(*mn, 3)
    lam = dominant(shape, entries)
    ch = ch_induced(lam)
    assert dim_of(ch) == 2 ** (shape.m * shape.n) * dim_of(ch_ev(lam))
    assert ch.leading() == lam and ch.coefficient(lam) == 1
    assert decompose_good(ch) == {lam: 1}


# --- twist ------------------------------------------------------------------------------


def test_twist_examples():
    xy = C(S11, {(1, 0): 1, (0, 1): 1})
    assert twist(xy, 1) == C(S11, {(3, 0): 1, (0, 3): 1})
    one = Character.one(S11)
    assert twist(one, 1) == one
    assert twist(twist(xy, 1), 1) == twist(xy, 2)


@given(st.sampled_from(SHAPES), st.lists(st.integers(-3, 4), min_size=4, max_size=4), st.integers(1, 3))
def test_twist_preserves_dimension(mn, entries, r):
    shape = BlockShape(*mn, 5)
    ch = ch_induced(dominant(shape, entries))
    assert dim_of(twist(ch, r)) == dim_of(ch)


# --- translation identity ------------------------------------------------------------


def test_translation_examples():
    lam = S11.weight([1, 0])
    assert verify_translation_identity(S11, 1, 1, 0, lam)
    lhs = ch_induced(steinberg_weight(S11, 1, 1, 0)) * twist(ch_ev(lam), 1)
    assert lhs == C(S11, {(4, 0): 1, (3, 1): 1}) == ch_induced(S11.weight([4, 0]))
    assert verify_translation_identity(S11, 1, 1, 0, S11.zero())
    assert verify_translation_identity(S21, 1, 0, 0, S21.weight([1, 0, 0]))


@pytest.mark.parametrize("mn", SHAPES)
def test_translation_identity_steinberg_and_not(mn):
    from superfiltr.weights import is_steinberg_weight

    shape = BlockShape(*mn, 3)
    lams = [shape.weight(e) for e in itertools.product(range(2), repeat=shape.size)]
    lams = [lam for lam in lams if is_dominant(lam)]
    seen = set()
    for s, t in itertools.product(range(-2, 3), repeat=2):
        seen.add(is_steinberg_weight(shape, 1, s, t))
        for lam in lams:
            assert verify_translation_identity(shape, 1, s, t, lam)
    assert seen == {True, False}


# --- decomposition -------------------------------------------------------------------------


def test_decompose_examples():
    xy = C(S11, {(1, 0): 1, (0, 1): 1})
    assert decompose_good(xy) == {S11.weight([1, 0]): 1}
    lam, mu = S21.weight([2, 0, 1]), S21.weight([1, 1, -1])
    assert decompose_good(ch_induced(lam) + ch_induced(mu)) == {lam: 1, mu: 1}
    assert decompose_good(ch_ev(lam) + 2 * ch_ev(mu), basis="even") == {lam: 1, mu: 2}


def test_decompose_of_single_monomial_goes_negative():
    x = C(S11, {(1, 0): 1})
    with pytest.raises(IterationCapExceeded) as info:
        decompose_good(x)
    partial = info.value.partial
    assert partial[S11.weight([1, 0])] == 1
    assert any(c < 0 for c in partial.values())
    assert info.value.cap == 4 * 1 * 2


def test_decompose_non_dominant_top():
    sh = BlockShape(2, 1, 3)
    with pytest.raises(NotFiltrationCharacter) as info:
        decompose_good(C(sh, {(0, 1, 0): 1}), basis="even")
    assert info.value.weight == sh.weight([0, 1, 0])


def test_decompose_rejects_unknown_basis():
    with pytest.raises(ValueError):
        decompose_good(Character.one(S11), basis="simple")


# --- arithmetic and serialization ------------------------------------------------------


def test_character_arithmetic():
    a = C(S11, {(1, 0): 2, (0, 1): -1})
    assert a - a == Character(S11, {})
    assert not (a - a)
    assert 3 * a == a + a + a
    assert a * Character.one(S11) == a
    assert C(S11, {(1, 0): 0}).terms == {}
    with pytest.raises(ValueError):
        C(S11, {(1, 0, 0): 1})


def test_large_products_agree_with_small_path():
    sh = BlockShape(2, 2, 5)
    big = ch_induced(sh.weight([6, 0, 5, 1]))
    other = ch_ev(sh.weight([2, 0, 1, 0]))
    fast = big * other
    slow: dict = {}
    for (a, ca), (b, cb) in itertools.product(big.terms.items(), other.terms.items()):
        key = tuple(x + y for x, y in zip(a, b))
        slow[key] = slow.get(key, 0) + ca * cb
    assert fast == Character(sh, slow)


def test_character_json_round_trip():
    ch = ch_induced(S21.weight([1, 0, 2]))
    data = json.loads(json.dumps(ch.to_json()))
    assert data["shape"] == [2, 1]
    assert {"exp": [1, 0, 2], "coef": 1} in data["terms"]
    assert Character.from_json(data) == ch


def test_to_string():
    assert C(S11, {(1, 0): 1, (0, 1): -2}).to_string() == "x1 - 2*x2"
    assert Character(S11, {}).to_string() == "0"
