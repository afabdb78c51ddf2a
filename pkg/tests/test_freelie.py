import random
from itertools import combinations

import pytest
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from nilsolv.core.errors import DomainError, ResourceError
from nilsolv.freelie import (
    LieWord,
    ad,
    bracket,
    build_algebra,
    canonical_derivation,
    chain,
    dimension,
    e,
    elementary,
    extend_automorphism,
    extend_derivation,
    iota,
    is_lie_invariant,
    lie_invariant,
    mobius,
    normal_form,
    permutation_matrix,
    theta,
    theta_power,
    q,
    witt_dimension,
    witt_dimensions,
    witt_table,
)


def test_witt_dimensions_two_generators():
    assert witt_dimensions(2, 14) == [2, 1, 2, 3, 6, 9, 18, 30, 56, 99, 186, 335, 630, 1161]


def test_witt_dimensions_three_generators():
    assert witt_dimensions(3, 7) == [3, 3, 8, 18, 48, 116, 312]


@pytest.mark.parametrize("m, p, dim", [(2, 4, 8), (2, 5, 14), (2, 7, 41), (3, 3, 14), (3, 4, 32)])
def test_total_dimension(m, p, dim):
    assert dimension(m, p) == dim


@pytest.mark.parametrize("m, k", [(1, 3), (2, 0)])
def test_witt_dimension_rejects_bad_arguments(m, k):
    with pytest.raises(DomainError):
        witt_dimension(m, k)


def test_lie_word_parsing():
    assert LieWord.parse("121").letters == (1, 2, 1)
    assert LieWord.parse("e_1,2,10").letters == (1, 2, 10)
    assert str(LieWord((1, 2, 1))) == "e_121"
    with pytest.raises(DomainError):
        LieWord.parse("1a")


@pytest.mark.parametrize("m, p", [(2, 6), (3, 4)])
def test_hall_basis_matches_witt(m, p):
    alg = build_algebra(m, p)
    assert alg.degree_sizes() == witt_dimensions(m, p)
    assert alg.dim == dimension(m, p)


def test_dimension_ceiling():
    with pytest.raises(ResourceError) as info:
        build_algebra(2, 5, max_dim=10)
    assert info.value.required == 14


def test_bracket_is_antisymmetric(f25):
    for a, b in combinations(range(f25.dim), 2):
        forward = f25.bracket_basis(a, b)
        backward = f25.bracket_basis(b, a)
        assert {c: -v for c, v in forward.items()} == backward


@pytest.mark.parametrize("alg_name", ["f25", "f33"])
def test_jacobi_identity(alg_name, request):
    alg = request.getfixturevalue(alg_name)
    zero = alg.zero()
    basis = [alg.basis_element(i) for i in range(alg.dim)]
    for x, y, w in combinations(basis, 3):
        total = (
            bracket(alg, x, bracket(alg, y, w))
            + bracket(alg, y, bracket(alg, w, x))
            + bracket(alg, w, bracket(alg, x, y))
        )
        assert total == zero


def test_brackets_truncate_above_class(f24):
    assert bracket(f24, chain(f24, 4), chain(f24, 1)) == f24.zero()
    assert chain(f24, 4)


def test_normal_form(f24):
    assert normal_form(f24, [1, 1]) == f24.zero()
    assert normal_form(f24, [[1, 2], 1]) == e(f24, 1, 2, 1)
    assert normal_form(f24, [2, 1]) == -e(f24, 1, 2)
    with pytest.raises(DomainError):
        normal_form(f24, [1, 3])


def test_canonical_derivation(f24):
    phi = canonical_derivation(f24)
    assert phi.is_derivation()
    assert phi.trace() == 1 * 2 + 2 * 1 + 3 * 2 + 4 * 3


def test_extended_operators(f24):
    assert extend_derivation(f24, elementary(2, 1, 2)).is_derivation()
    assert theta(f24).is_derivation()
    assert iota(f24).is_homomorphism()
    swap = extend_automorphism(f24, permutation_matrix([2, 1]))
    assert swap.apply(e(f24, 1, 2)) == -e(f24, 1, 2)


def test_singular_automorphism(f24):
    with pytest.raises(DomainError):
        extend_automorphism(f24, [[1, 1], [1, 1]])


def test_lie_invariant_in_degree_six():
    alg = build_algebra(2, 6)
    I = lie_invariant(alg)
    assert I.degrees() == [6]
    matrices = [[[2, 0], [0, 1]], [[0, 1], [1, 0]], [[1, 1], [0, 1]]]
    assert is_lie_invariant(alg, I, matrices)
    assert not is_lie_invariant(alg, chain(alg, 6), matrices)


def test_witt_table_columns():
    assert witt_table([2, 3], 3) == [[2, 3], [1, 3], [2, 8]]


def test_inner_derivations(f24):
    assert ad(f24, f24.generator(1)).is_derivation()
    assert ad(f24, e(f24, 1, 2)).is_derivation()


def test_q_element():
    alg = build_algebra(3, 4)
    x = q(alg, 1, 2, 3)
    assert x
    assert x.degrees() == [4]
    assert {alg.basis[i].content for i, _ in x.items()} == {(2, 1, 1)}


MOBIUS = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0, -1, 0, 1, 1, -1, 0, 0, 1, 0, 0, -1, -1]


def test_mobius_values():
    assert [mobius(n) for n in range(1, 31)] == MOBIUS


@pytest.mark.parametrize("n", [0, -1, True, 2.0])
def test_mobius_rejects(n):
    with pytest.raises(DomainError):
        mobius(n)


@pytest.mark.parametrize("m", range(2, 11))
def test_witt_dimension_bounds(m):
    for k in range(1, 15):
        d = witt_dimension(m, k)
        assert k * d <= m**k
        if k >= 2:
            assert k * d > m**k - m ** (k // 2 + 1)


def _ad_block(alg, x, k):
    """ad x from degree k to degree k + 1 as a matrix in the Hall bases."""
    source = list(alg.degree_ranges[k])
    target = list(alg.degree_ranges[k + 1])
    operator = ad(alg, x)
    rows = [[operator.columns[j][i] for j in source] for i in target]
    return DomainMatrix(rows, (len(target), len(source)), QQ)


@pytest.mark.parametrize("m, p", [(2, 5), (3, 4)])
def test_ad_first_generator_is_injective(m, p):
    alg = build_algebra(m, p)
    for k in range(2, p):
        assert _ad_block(alg, alg.generator(1), k).rank() == len(alg.degree_ranges[k])


def _random_traceless(rng, m):
    rows = [[QQ(rng.randint(-5, 5)) for _ in range(m)] for _ in range(m)]
    rows[m - 1][m - 1] = -sum((rows[i][i] for i in range(m - 1)), QQ(0))
    return rows


@pytest.mark.parametrize("m, p", [(2, 5), (3, 4)])
def test_extended_traceless_derivations_are_traceless_on_each_degree(m, p):
    alg = build_algebra(m, p)
    rng = random.Random(7 * m + p)
    for _ in range(100):
        rho = extend_derivation(alg, _random_traceless(rng, m))
        assert all(rho.block_trace(k) == 0 for k in range(1, p + 1))


def test_block_trace_is_proportional_to_trace(f25):
    rho = extend_derivation(f25, [[3, 1], [-2, 4]])
    for k, d in enumerate(f25.degree_sizes(), start=1):
        assert rho.block_trace(k) == QQ(7 * k * d, 2)


def test_extended_automorphisms_compose(f24):
    S = [[QQ(2), QQ(1)], [QQ(1), QQ(1)]]
    T = [[QQ(1), QQ(-3)], [QQ(0), QQ(2)]]
    ST = (DomainMatrix(S, (2, 2), QQ) * DomainMatrix(T, (2, 2), QQ)).to_list()
    assert extend_automorphism(f24, S) @ extend_automorphism(f24, T) == extend_automorphism(f24, ST)


@pytest.mark.slow
def test_jacobi_identity_f27():
    alg = build_algebra(2, 7)
    zero = alg.zero()
    basis = [alg.basis_element(i) for i in range(alg.dim)]
    for x, y, w in combinations(basis, 3):
        if x.degrees()[0] + y.degrees()[0] + w.degrees()[0] > alg.p:
            continue
        total = (
            bracket(alg, x, bracket(alg, y, w))
            + bracket(alg, y, bracket(alg, w, x))
            + bracket(alg, w, bracket(alg, x, y))
        )
        assert total == zero


def test_words_fold_left(f24):
    e1, e2 = f24.generator(1), f24.generator(2)
    assert f24.word((1, 2, 1)) == bracket(f24, bracket(f24, e1, e2), e1)
    assert f24.word((1, 2, 1, 2, 1)) == f24.zero()
    assert not hasattr(f24, "_words")
    with pytest.raises(DomainError):
        f24.word(())


def test_theta_is_rebuilt_per_call(f24):
    assert not hasattr(theta, "cache_info")
    assert not hasattr(iota, "cache_info")
    assert theta(f24) is not theta(f24)
    assert theta(f24) == theta(f24)
    assert theta_power(f24, 2, 3) == theta(f24).apply(theta(f24).apply(chain(f24, 3)))
