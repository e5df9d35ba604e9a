import pytest

from conftest import kan, valpha
from kanjordan.kantor import check_kantor_conditions, grassmann_poisson
from kanjordan.scalars import QQ, FieldContext
from kanjordan.superalg import check_jordan_superidentity
from kanjordan.tensor import (TruncatedPolyAlgebra, _apply, build_J_GnT_alpha, check_generalized_derivation,
                              embed_V_alpha, embedding_sign, graded_E, grassmann_tensor, jordan_bracket_tensor,
                              tensor_index)


def test_truncated_derivation():
    A = TruncatedPolyAlgebra(4, 3)
    assert A.check_derivation()
    assert A.D(4) == -12
    assert A.mul(2, 2) is None and A.mul(1, 2) == 3
    with pytest.raises(ValueError):
        TruncatedPolyAlgebra(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_graded_E_is_generalized_derivation(n):
    P = grassmann_poisson(n)
    assert check_generalized_derivation(P, graded_E(P)).ok


def test_identity_map_fails_bracket_law():
    P = grassmann_poisson(2)
    E = {m: {m: 1} for m in range(P.dim)}
    rep = check_generalized_derivation(P, E)
    assert not rep.ok
    assert {v.note for v in rep.violations} == {"bracket compatibility"}


def test_zero_map_passes():
    P = grassmann_poisson(2)
    assert check_generalized_derivation(P, {}).ok


def test_E_of_unit():
    P = grassmann_poisson(3)
    assert _apply(graded_E(P), P.basis(0)) == -P.basis(0)


def test_bracket_examples():
    A = grassmann_tensor(2, 1, 4)
    e1 = A.basis(tensor_index(2, 0b01, 0, 4))
    one = A.basis(0)
    assert A.br(e1, e1) == -one
    # <1 (x) 1, 1 (x) t> = E(1) D(t) = alpha (1 (x) t)
    t = A.basis(tensor_index(2, 0, 1, 4))
    assert A.br(one, t) == t


@pytest.mark.parametrize("alpha", [0, 1, -1, 2])
def test_D_of_tensor_monomials(alpha):
    A = grassmann_tensor(2, alpha, 4)
    for k in range(4):
        for m in range(4):
            x = A.basis(tensor_index(2, m, k, 4))
            assert A.D(x) == x.scale(QQ.coerce(-k * alpha))


def test_alpha_zero_reduces_to_poisson():
    A = grassmann_tensor(2, 0, 3)
    assert A.is_poisson_D()
    P = grassmann_poisson(2)
    for i in range(4):
        for j in range(4):
            assert A.br(A.basis(i), A.basis(j)).coeffs == P.br(P.basis(i), P.basis(j)).coeffs


def test_non_poisson_input_rejected():
    A = grassmann_tensor(2, 1, 2)
    with pytest.raises(ValueError):
        jordan_bracket_tensor(A, {}, TruncatedPolyAlgebra(2, 1))


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("alpha", [1, -1])
def test_tensor_bracket_conditions_n2(N, alpha):
    rep = check_kantor_conditions(grassmann_tensor(2, alpha, N))
    assert rep.ok, rep.violations[:3]


@pytest.mark.parametrize("N", [2, 3])
def test_tensor_bracket_conditions_n3(N):
    assert check_kantor_conditions(grassmann_tensor(3, 2, N)).ok


@pytest.mark.slow
def test_tensor_bracket_conditions_n3_N4():
    assert check_kantor_conditions(grassmann_tensor(3, 2, 4)).ok


def test_tensor_bracket_conditions_char3():
    assert check_kantor_conditions(grassmann_tensor(2, 1, 3, FieldContext(3)), odd_cube=True).ok


def test_double_dimension_and_jordan():
    T = build_J_GnT_alpha(2, 1, 4)
    assert T.dim == 32
    assert check_jordan_superidentity(T).ok


def test_bar_unit_times_bar_degree_one():
    # evaluated straight from the bracket and the doubling rules: (-1)^{|b|} alpha (b (x) t)
    alpha = 3
    T = build_J_GnT_alpha(2, alpha, 2)
    bar_one = T.basis(tensor_index(2, 0, 0, 2, True))
    for m in range(4):
        b_t = tensor_index(2, m, 1, 2)
        got = bar_one * T.basis(tensor_index(2, m, 1, 2, True))
        assert got == T.basis(b_t).scale(QQ.coerce(alpha * (-1) ** (m.bit_count() % 2)))


@pytest.mark.parametrize("n", [2, 3])
def test_degree_zero_part_is_kan(n):
    N = 3
    T = build_J_GnT_alpha(n, 2, N)
    d = 1 << n
    idx = [tensor_index(n, m, 0, N) for m in range(d)] + [tensor_index(n, m, 0, N, True) for m in range(d)]
    assert T.restrict(idx, name=f"Kan({n})").same_structure(kan(n))


def test_quotient_soundness():
    # constants whose t-degree stays below the smaller order agree between N = 3 and N = 4
    n, small, big = 2, 3, 4
    d = 1 << n
    S, B = build_J_GnT_alpha(n, 2, small), build_J_GnT_alpha(n, 2, big)
    assert check_jordan_superidentity(S).ok and check_jordan_superidentity(B).ok

    def to_big(i):
        bar, rest = divmod(i, d * small)
        k, m = divmod(rest, d)
        return tensor_index(n, m, k, big, bool(bar)), k

    for i in range(S.dim):
        for j in range(S.dim):
            (bi, ki), (bj, kj) = to_big(i), to_big(j)
            if ki + kj >= small:
                continue
            expect = tuple((to_big(k)[0], c) for k, c in S.product.get((i, j), ()))
            assert tuple(sorted(expect)) == B.product.get((bi, bj), ())


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("alpha", [0, 1, -1, 2])
def test_embedding_matches_valpha(n, alpha):
    res = embed_V_alpha(n, alpha)
    assert res.closed and res.mismatches == []


def test_embedding_special_element():
    n, N = 3, 2
    res = embed_V_alpha(n, 1, N=N)
    top = (1 << n) - 1
    # w = e_{I_n} (x) t is v(empty) up to the recorded sign
    assert res.W.vlabels[top] == "e[1,2,3]*t^1"
    assert embedding_sign(n, 0) == 1
    T = build_J_GnT_alpha(n, -1, N)
    w = T.basis(tensor_index(n, top, 1, N))
    for a in range(1, 1 << n):
        for bar in (False, True):
            assert not w * T.basis(tensor_index(n, a, 0, N, bar))


def test_literal_parameter_gives_negated_module():
    res = embed_V_alpha(2, 1, tensor_alpha=1)
    assert res.mismatches
    flipped = embed_V_alpha(2, -1, tensor_alpha=1)
    assert flipped.ok


def test_embedding_over_f5():
    assert embed_V_alpha(2, 2, FieldContext(5)).ok
