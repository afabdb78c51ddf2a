import random
from itertools import product

import pytest
from sympy.polys.domains import QQ

from nilsolv.core.errors import DomainError, PreconditionError, UnsupportedCaseError
from nilsolv.freelie import (
    build_algebra,
    canonical_derivation,
    e,
    elementary,
    extend_automorphism,
    extend_derivation,
    permutation_matrix,
)
from nilsolv.metric import (
    MetricLieAlgebra,
    MetricParams,
    admissible_metric,
    eigen_constants,
    nilsoliton_residual,
    rank_one_extension,
    required_slots,
    ricci_coefficient,
    ricci_general,
    ricci_nilpotent,
    scalar_curvature,
    theorem_presentation,
    trace_identity_check,
)

F24_SOLITON = {"lambda2": 1, "xi2": "9/4", "sigma2": "9/2"}


@pytest.fixture(scope="module")
def heisenberg(f22):
    return admissible_metric(f22, MetricParams.from_mapping(2, 2, {"lambda2": 1}))


@pytest.fixture(scope="module")
def soliton24(f24):
    return admissible_metric(f24, MetricParams.from_mapping(2, 4, F24_SOLITON))


def test_heisenberg_ricci(f22, heisenberg):
    ric = ricci_nilpotent(f22, heisenberg)
    assert [ric.entry(i, i) for i in range(3)] == [QQ(-1, 2), QQ(-1, 2), QQ(1, 2)]
    assert ric.is_symmetric()
    assert scalar_curvature(ric) == QQ(-1, 2)


def test_scaled_metric_scales_curvature(f22, heisenberg):
    ric = ricci_nilpotent(f22, heisenberg.scaled(2))
    assert scalar_curvature(ric) == QQ(-1, 4)


def test_heisenberg_is_nilsoliton(f22, heisenberg):
    assert nilsoliton_residual(f22, heisenberg, QQ(1, 4)).is_zero
    assert not nilsoliton_residual(f22, heisenberg, QQ(1, 3)).is_zero


def test_eigen_constants(f24):
    assert eigen_constants(f24) == (22, 72)
    assert [ricci_coefficient(f24, k) for k in range(1, 5)] == [-50, -28, -6, 16]


def test_f24_nilsoliton_metric(f24, soliton24):
    assert nilsoliton_residual(f24, soliton24, QQ(1, 16)).is_zero
    residual = nilsoliton_residual(f24, soliton24, QQ(1, 8))
    assert not residual.is_zero
    assert residual.max_abs > 0


def test_ricci_is_block_diagonal_over_contents(f24, soliton24):
    ric = ricci_nilpotent(f24, soliton24)
    assert ric.is_block_diagonal(f24.classes.values())


def test_general_ricci_agrees_on_nilpotent(f24, soliton24):
    expected = ricci_nilpotent(f24, soliton24)
    general = ricci_general(MetricLieAlgebra.from_free(f24, soliton24))
    assert general.rows == expected.rows


def test_rank_one_extension_is_einstein(f24, soliton24):
    ext = rank_one_extension(f24, soliton24, QQ(1, 16))
    assert ext.dim == 9
    assert ext.einstein_constant == QQ(-9, 2)
    assert ext.is_einstein()
    assert ext.scalar_curvature() == QQ(-81, 2)


def test_rank_one_extension_needs_nilsoliton(f24, soliton24):
    with pytest.raises(PreconditionError):
        rank_one_extension(f24, soliton24, QQ(1, 8))


def test_trace_identity(f24):
    derivations = [
        canonical_derivation(f24),
        extend_derivation(f24, elementary(2, 1, 1)),
        extend_derivation(f24, elementary(2, 1, 2)),
    ]
    assert trace_identity_check(f24, QQ(1, 16), derivations)


def test_required_slots():
    assert required_slots(2, 1) == []
    assert required_slots(3, 4) == ["lambda2", "xi2", "sigma2", "eta2"]
    assert len(required_slots(2, 7)) == 15


@pytest.mark.parametrize("m, p", [(4, 4), (3, 5), (2, 8)])
def test_uncovered_cases(m, p):
    with pytest.raises(UnsupportedCaseError):
        required_slots(m, p)


@pytest.mark.parametrize(
    "mapping",
    [
        {"lambda2": 1, "xi2": "9/4"},
        {"lambda2": 1, "xi2": "-1", "sigma2": 1},
        {"lambda2": 1, "xi2": 1, "sigma2": 1, "nu2": 1},
        {"lambda2": 1, "xi2": 1, "sigma2": 1, "foo": 1},
    ],
)
def test_invalid_parameters(mapping):
    with pytest.raises(DomainError):
        MetricParams.from_mapping(2, 4, mapping)


def test_blocks_must_be_positive_definite():
    values = {s: 1 for s in required_slots(2, 7)}
    values.update(v12=0, w12=0)
    MetricParams.from_mapping(2, 7, values)
    values["v12"] = 2
    with pytest.raises(DomainError):
        MetricParams.from_mapping(2, 7, values)


def test_symbolic_parameters():
    params = MetricParams.symbolic(2, 4)
    assert params.symbolic_slots == ["xi2", "sigma2"]
    assert params.values["lambda2"] == 1
    filled = params.substitute({"xi2": QQ(9, 4), "sigma2": QQ(9, 2)})
    assert filled.is_numeric


def test_presentation_constants(f24, soliton24):
    constants = theorem_presentation(f24, soliton24, QQ(1, 16))
    assert constants["e_12"] == 1
    assert constants["e_121"] == QQ(9, 4)
    assert constants["e_1211"] == QQ(9, 2)
    assert "t" not in constants


def test_class_three_presentation():
    alg = build_algebra(2, 3)
    g = admissible_metric(alg, MetricParams.from_mapping(2, 3, {"lambda2": 1, "xi2": "3/4"}))
    assert theorem_presentation(alg, g, QQ(1, 10))["t"] == QQ(1, 4)


@pytest.fixture(scope="module")
def metric33(f33):
    return admissible_metric(f33, MetricParams.from_mapping(3, 3, {"lambda2": 3, "xi2": 2}))


def _transpose(rows):
    return [list(column) for column in zip(*rows)]


@pytest.mark.parametrize("alg_name, metric_name", [("f24", "soliton24"), ("f33", "metric33")])
def test_transposed_derivation_is_the_adjoint(alg_name, metric_name, request):
    alg = request.getfixturevalue(alg_name)
    g = request.getfixturevalue(metric_name)
    basis = [alg.basis_element(i) for i in range(alg.dim)]
    rng = random.Random(alg.dim)
    for _ in range(50):
        L = [[QQ(rng.randint(-4, 4)) for _ in range(alg.m)] for _ in range(alg.m)]
        rho = extend_derivation(alg, L)
        adjoint = extend_derivation(alg, _transpose(L))
        images = [rho.apply(x) for x in basis]
        co_images = [adjoint.apply(y) for y in basis]
        for (x, rx), (y, ay) in product(zip(basis, images), zip(basis, co_images)):
            assert g.inner(rx, y) == g.inner(x, ay)


@pytest.mark.parametrize("perm", [[2, 1, 3], [2, 3, 1], [3, 2, 1]])
def test_ricci_is_permutation_equivariant(f33, metric33, perm):
    R = extend_automorphism(f33, permutation_matrix(perm))
    ric = ricci_nilpotent(f33, metric33)
    basis = [f33.basis_element(i) for i in range(f33.dim)]
    images = [R.apply(x) for x in basis]
    for (x, rx), (y, ry) in product(zip(basis, images), repeat=2):
        assert metric33.inner(rx, ry) == metric33.inner(x, y)
        assert ric.quadratic(rx, ry) == ric.quadratic(x, y)


@pytest.mark.parametrize("factor", [2, 3, QQ(1, 5)])
def test_nilsoliton_constant_scales_inversely(f24, soliton24, factor):
    assert nilsoliton_residual(f24, soliton24.scaled(factor), QQ(1, 16) / factor).is_zero
    assert not nilsoliton_residual(f24, soliton24.scaled(factor), QQ(1, 16)).is_zero


def test_named_norms(f24, soliton24, f33, metric33):
    assert soliton24.norm2(e(f24, 1, 2, 1, 2)) == QQ(9, 4)
    assert metric33.norm2(e(f33, 1, 2, 3)) == QQ(4, 3)
    assert metric33.inner(e(f33, 1, 2, 3), e(f33, 2, 3, 1)) == QQ(-2, 3)
    degree_two = list(f33.degree_ranges[2])
    assert metric33.block(degree_two) == [[QQ(3) if a == b else QQ(0) for b in degree_two] for a in degree_two]
