import math

import pytest
from sympy import Poly, Symbol
from sympy.polys.domains import QQ

from nilsolv.core.errors import DomainError
from nilsolv.core.numbers import is_positive, is_quadratic, radicand_of, root_field, to_float
from nilsolv.metric import RicciForm, admissible_metric, nilsoliton_residual, ricci_nilpotent
from nilsolv.nilsoliton import (
    EinsteinNilradical,
    MonomialVariable,
    NotEinstein,
    UnivariateNoPositiveRoot,
    assemble_equations,
    describe_extension,
    evaluate,
    minimal_polynomial,
    real_roots,
    relations,
    solve_equations,
    verify_combination,
)
from nilsolv.nilsoliton import equations

x = Symbol("x")

F26_COMBINATION = {"e_121": 2, "e_1211": 3, "u": 2, "e_12111": 4, "I": 2, "z": 3, "e_121111": 5}
F27_COMBINATION = {
    "e_12": 1, "e_121": 2, "e_1211": 6, "e_12111": 8, "u": 4, "e_121111": 10,
    "z": 9, "I": 3, "V": 12, "W": 6, "e_1211111": 12,
}


@pytest.fixture(scope="module")
def system24():
    return assemble_equations(2, 4)


def test_monomial_variables():
    mono = MonomialVariable.of({"sigma2": -1, "xi2": 2})
    assert mono.slots == {"xi2": 2, "sigma2": -1}
    assert str(mono) == "ξ⁴σ⁻²"
    assert mono.is_positive
    assert not MonomialVariable.of({"v12": 1, "v11": -1}).is_positive
    assert MonomialVariable.of({"v12": 2}).is_positive
    assert (mono * MonomialVariable.of({"sigma2": 1})).is_positive
    assert (mono * MonomialVariable.of({"sigma2": 1})).slots == {"xi2": 2}


def test_monomial_relations():
    a = MonomialVariable.of({"xi2": 1})
    b = MonomialVariable.of({"sigma2": 1})
    ab = MonomialVariable.of({"xi2": 1, "sigma2": -1})
    found = relations([a, b, ab])
    assert len(found) == 1
    relation = found[0]
    assert relation[a] == -relation[ab] == -relation[b]


def test_f24_equations(system24):
    assert system24.labels == ["e_1", "e_12", "e_121", "e_1211"]
    assert [eq.rhs for eq in system24.equations] == [-50, -28, -6, 16]
    assert system24.block_diagonal
    assert system24.trace == 22
    assert system24.trace_squares == 72


def test_f24_equations_hold_at_the_soliton(system24):
    slots = {"xi2": QQ(9, 4), "sigma2": QQ(9, 2)}
    values = {}
    for mono in system24.monomials:
        value = QQ(1)
        for slot, power in mono.slots.items():
            value *= slots[slot] ** power if power > 0 else 1 / slots[slot] ** (-power)
        values[mono] = value
    for eq in system24.equations:
        assert evaluate(eq, values) == eq.rhs * QQ(1, 16)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_abelian_case(m):
    outcome = solve_equations(assemble_equations(m, 1))
    assert isinstance(outcome, EinsteinNilradical)
    assert outcome.C == QQ(1, m)
    assert outcome.polynomial == (m, -1)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_class_two(m):
    outcome = solve_equations(assemble_equations(m, 2))
    assert isinstance(outcome, EinsteinNilradical)
    assert outcome.C == QQ(1, 2 * m)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_class_three(m):
    outcome = solve_equations(assemble_equations(m, 3))
    assert isinstance(outcome, EinsteinNilradical)
    assert outcome.field == QQ
    assert outcome.params.values["xi2"] == QQ(3 * (m + 1), -m * m + 4 * m + 8)


def test_f24_is_einstein(system24):
    outcome = solve_equations(system24)
    assert isinstance(outcome, EinsteinNilradical)
    assert outcome.C == QQ(1, 16)
    assert outcome.params.values["xi2"] == QQ(9, 4)
    assert outcome.params.values["sigma2"] == QQ(9, 2)
    extension = describe_extension(outcome)
    assert extension["dim"] == 9
    assert extension["einstein_constant"] == QQ(-9, 2)
    assert extension["is_einstein"]


def test_f25_needs_a_quadratic_field(f25):
    outcome = solve_equations(assemble_equations(2, 5), f25)
    assert isinstance(outcome, EinsteinNilradical)
    assert radicand_of(outcome.field) == 745
    assert outcome.polynomial == (5856, -524, -1)
    assert to_float(outcome.C, outcome.field) == pytest.approx(0.09135, abs=1e-4)
    g = admissible_metric(f25, outcome.params)
    assert nilsoliton_residual(f25, g, outcome.C).is_zero


def test_f25_parameter_forms(f25):
    outcome = solve_equations(assemble_equations(2, 5), f25)
    K, C, values = outcome.field, outcome.C, outcome.params.values
    one = K.one
    assert 5856 * C * C - 524 * C - one == K.zero
    assert values["lambda2"] == one
    assert values["xi2"] == 54 * C
    assert values["sigma2"] == K.convert(QQ(3, 4)) + 375 * C
    assert values["alpha2"] == 76 * C * values["sigma2"]
    assert values["gamma2"] == 27 * C * (one + 128 * C)

    c = (524 + math.sqrt(524**2 + 4 * 5856)) / (2 * 5856)
    expected = {
        "xi2": 54 * c,
        "sigma2": 0.75 + 375 * c,
        "alpha2": 76 * c * (0.75 + 375 * c),
        "gamma2": 27 * c * (1 + 128 * c),
    }
    assert abs(to_float(C, K) - c) <= 1e-12
    for slot, value in expected.items():
        assert abs(to_float(values[slot], K) - value) <= 1e-12 * max(1.0, value)


def test_off_block_ricci_entries():
    ric = RicciForm([[QQ(1), QQ(0), QQ(2)], [QQ(0), QQ(1), QQ(0)], [QQ(2), QQ(0), QQ(3)]], QQ)
    assert ric.off_block([[0, 1], [2]]) == [(0, 2)]
    assert not ric.is_block_diagonal([[0, 1], [2]])
    assert ric.is_block_diagonal([[0, 2], [1]])


def test_assembly_rejects_mixed_content_classes(monkeypatch):
    def mixed(alg, g):
        ric = ricci_nilpotent(alg, g)
        # e_1 and e_12 lie in different content classes
        ric.rows[0][2] += ric.domain.one
        ric.rows[2][0] += ric.domain.one
        return ric

    monkeypatch.setattr(equations, "ricci_nilpotent", mixed)
    with pytest.raises(DomainError, match="mixes content classes"):
        assemble_equations(2, 4)


def test_f34_is_not_einstein():
    outcome = solve_equations(assemble_equations(3, 4))
    assert isinstance(outcome, NotEinstein)
    certificate = outcome.certificate
    assert isinstance(certificate, UnivariateNoPositiveRoot)
    assert certificate.valid
    assert certificate.variable == "ξ²"
    assert certificate.coefficients == (16, 171, 99)


def test_unknown_equation_label(system24):
    with pytest.raises(DomainError):
        verify_combination(system24, {"e_123": 1})


def test_invalid_combination_is_reported(system24):
    certificate = verify_combination(system24, {"e_1211": 1})
    assert not certificate.valid
    assert certificate.rhs == 16


@pytest.mark.slow
def test_f26_positive_combination():
    system = assemble_equations(2, 6)
    certificate = verify_combination(system, F26_COMBINATION)
    assert certificate.rhs == -18
    assert certificate.valid
    assert isinstance(solve_equations(system), NotEinstein)


@pytest.mark.slow
def test_f27_positive_combination():
    system = assemble_equations(2, 7)
    assert {"V", "W"} <= set(system.labels)
    certificate = verify_combination(system, F27_COMBINATION)
    assert certificate.rhs == -28
    assert certificate.valid
    assert isinstance(solve_equations(system), NotEinstein)


def test_real_roots_rational():
    assert real_roots(Poly(2 * x - 3, x, domain="QQ")) == [(QQ(3, 2), QQ)]
    assert real_roots(Poly(x**2 + 1, x, domain="QQ")) == []
    found = sorted(root for root, _ in real_roots(Poly(x**2 - 5 * x + 6, x, domain="QQ")))
    assert found == [2, 3]


def test_real_roots_quadratic_field():
    found = real_roots(Poly(x**2 - 8, x, domain="QQ"))
    assert len(found) == 2
    values = sorted(to_float(root, K) for root, K in found)
    assert values == pytest.approx([-2.8284271, 2.8284271])
    assert all(radicand_of(K) == 2 for _, K in found)


def test_real_roots_cubic_with_three_real_roots():
    found = real_roots(Poly(x**3 - 3 * x + 1, x, domain="QQ"))
    assert len(found) == 3
    values = sorted(to_float(root, K) for root, K in found)
    assert values == pytest.approx([-1.8793852415718, 0.3472963553338, 1.5320888862380], abs=1e-12)
    assert sorted(is_positive(root, K) for root, K in found) == [False, True, True]
    for root, K in found:
        assert minimal_polynomial(root, K).all_coeffs() == [1, 0, -3, 1]
        assert not is_quadratic(K)


def test_real_roots_cubic_with_one_real_root():
    [(root, K)] = real_roots(Poly(x**3 - 2, x, domain="QQ"))
    assert to_float(root, K) == pytest.approx(2 ** (1 / 3), abs=1e-12)
    assert is_positive(root, K)
    assert minimal_polynomial(root * root, K).all_coeffs() == [1, 0, 0, -4]


def test_root_field_index_out_of_range():
    with pytest.raises(DomainError):
        root_field(Poly(x**3 - 2, x, domain="QQ"), 1)


def test_minimal_polynomial():
    (root, K), _ = real_roots(Poly(x**2 - 2 * x - 1, x, domain="QQ"))
    assert minimal_polynomial(root, K).all_coeffs() == [1, -2, -1]
    assert minimal_polynomial(QQ(3, 4), QQ).all_coeffs() == [4, -3]
