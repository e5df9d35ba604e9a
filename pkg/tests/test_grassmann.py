import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kanjordan.grassmann import (Grassmann, GrassmannElement, indices_of, mask_of, normalize, parity, partial,
                                 perm_sign, poisson_bracket, wedge, wedge_sign)
from kanjordan.kantor import check_poisson, grassmann_poisson
from kanjordan.scalars import FieldContext

G2, G3, G4 = Grassmann(2), Grassmann(3), Grassmann(4)


def _bubble_sign(seq):
    # independent oracle: count swaps of an explicit bubble sort
    seq, sign = list(seq), 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign


def _word_partial(k, word):
    """d/de_k of the ordered word e_{w1}...e_{wm}: (sign, remaining word) or None."""
    if k not in word:
        return None
    pos = word.index(k)
    return (-1) ** pos, word[:pos] + word[pos + 1:]


def _oracle_bracket(n, a, b):
    # {e_A, e_B} = (-1)^{|A|} sum_k (d_k e_A)(d_k e_B) on ordered words
    out = {}
    A, B = indices_of(a), indices_of(b)
    for k in range(1, n + 1):
        da, db = _word_partial(k, A), _word_partial(k, B)
        if da is None or db is None:
            continue
        word = da[1] + db[1]
        if len(set(word)) < len(word):
            continue
        c = da[0] * db[0] * _bubble_sign(word) * (-1) ** len(A)
        m = mask_of(word)
        out[m] = out.get(m, 0) + c
    return {m: Fraction(c) for m, c in out.items() if c}


def test_wedge_examples():
    assert wedge(G2.e(1), G2.e(2)) == G2.e(1, 2)
    assert not wedge(G2.e(1), G2.e(1))
    assert wedge(G2.e(2), G2.e(1)) == -G2.e(1, 2)


def test_partial_examples():
    assert partial(2, G3.e(1, 2)) == -G3.e(1)
    assert not partial(3, G3.e(1, 2))
    assert partial(1, G3.e(1)) == G3.one()


def test_bracket_examples():
    assert poisson_bracket(G2.e(1), G2.e(1)) == -G2.one()
    assert poisson_bracket(G3.e(1, 2), G3.e(2, 3)) == -G3.e(1, 3)
    for m in G3.basis():
        assert not poisson_bracket(G3.one(), G3.monomial(m))


def test_unordered_monomials_are_normalized():
    assert GrassmannElement.monomial(3, [3, 1]) == -G3.e(1, 3)
    assert not GrassmannElement.monomial(3, [2, 2])
    assert normalize([2, 1, 3]) == (-1, 0b111)
    assert normalize([1, 1])[0] == 0


def test_zero_coefficients_are_dropped():
    x = G2.e(1) + G2.e(2) - G2.e(1)
    assert list(x.terms) == [mask_of([2])]


def test_mixed_parity_has_no_parity():
    with pytest.raises(ValueError):
        (G2.one() + G2.e(1)).parity()


@settings(max_examples=80)
@given(st.permutations(list(range(1, 7))))
def test_perm_sign_matches_bubble_sort(seq):
    assert perm_sign(seq) == _bubble_sign(seq)


@settings(max_examples=80)
@given(st.integers(0, 15), st.integers(0, 15))
def test_wedge_sign_matches_concatenation(a, b):
    if a & b:
        return
    assert wedge_sign(a, b) == _bubble_sign(indices_of(a) + indices_of(b))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_wedge_supercommutative(n):
    G = Grassmann(n)
    for a, b in itertools.product(G.basis(), repeat=2):
        lhs = wedge(G.monomial(a), G.monomial(b))
        rhs = wedge(G.monomial(b), G.monomial(a))
        assert lhs == rhs.scale((-1) ** (parity(a) * parity(b)))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bracket_skew_symmetric(n):
    G = Grassmann(n)
    for a, b in itertools.product(G.basis(), repeat=2):
        lhs = poisson_bracket(G.monomial(a), G.monomial(b))
        rhs = poisson_bracket(G.monomial(b), G.monomial(a))
        assert lhs == -rhs.scale((-1) ** (parity(a) * parity(b)))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bracket_matches_word_oracle(n):
    G = Grassmann(n)
    for a, b in itertools.product(G.basis(), repeat=2):
        assert poisson_bracket(G.monomial(a), G.monomial(b)).terms == _oracle_bracket(n, a, b)


@settings(max_examples=80)
@given(st.integers(0, 15), st.integers(0, 15))
def test_bracket_lowers_degree_by_two(a, b):
    r = poisson_bracket(G4.monomial(a), G4.monomial(b))
    assert all(m.bit_count() == a.bit_count() + b.bit_count() - 2 for m in r.terms)


@settings(max_examples=40)
@given(st.dictionaries(st.integers(0, 7), st.integers(-3, 3), max_size=4),
       st.dictionaries(st.integers(0, 7), st.integers(-3, 3), max_size=4),
       st.integers(0, 7))
def test_bracket_bilinear(f, g, h):
    F, Gx, H = GrassmannElement(3, f), GrassmannElement(3, g), G3.monomial(h)
    assert poisson_bracket(F + Gx, H) == poisson_bracket(F, H) + poisson_bracket(Gx, H)
    assert wedge(F + Gx, H) == wedge(F, H) + wedge(Gx, H)


@settings(max_examples=40)
@given(st.integers(1, 4), st.integers(0, 15), st.integers(0, 15))
def test_partial_is_odd_derivation(k, a, b):
    f, g = G4.monomial(a), G4.monomial(b)
    lhs = partial(k, wedge(f, g))
    rhs = wedge(partial(k, f), g) + wedge(f, partial(k, g)).scale((-1) ** parity(a))
    assert lhs == rhs


@pytest.mark.parametrize("n", [2, 3, 4])
def test_poisson_conditions(n):
    rep = check_poisson(grassmann_poisson(n))
    assert rep.ok, rep.violations[:3]


def test_poisson_conditions_char3():
    assert check_poisson(grassmann_poisson(3, FieldContext(3))).ok
