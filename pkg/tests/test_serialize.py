import json

import pytest
from sympy import Poly, Symbol
from sympy.polys.domains import QQ

from nilsolv.core.errors import DomainError
from nilsolv.core.numbers import from_parts, quadratic_field, root_field, to_float
from nilsolv.core.serialize import decode_scalar, dumps, encode_algebra, encode_case, encode_field, encode_scalar
from nilsolv.graph import Classifier

x = Symbol("x")


def test_rationals_are_fraction_strings():
    assert encode_scalar(QQ(3, 4)) == "3/4"
    assert encode_scalar(QQ(2)) == "2/1"
    assert encode_scalar(QQ(3, 4), approx=True) == {"exact": "3/4", "float": 0.75}


def test_quadratic_field_scalar():
    K = quadratic_field(745)
    value = from_parts(QQ(1, 2), QQ(-1, 3), K)
    encoded = encode_scalar(value, K)
    assert encoded == {"a": "1/2", "b": "-1/3", "sqrt": 745}
    assert decode_scalar(encoded) == (value, K)


@pytest.mark.parametrize("obj", [5, {"a": "1/2"}, "x/y"])
def test_decode_rejects(obj):
    with pytest.raises(DomainError):
        decode_scalar(obj)


def test_encode_algebra(f22):
    doc = encode_algebra(f22)
    assert doc["dim"] == 3
    assert doc["degree_sizes"] == [2, 1]
    assert len(doc["brackets"]) == 1
    assert set(doc["brackets"][0]["value"]) == {"2"}


def test_dumps_is_sorted():
    assert dumps({"b": 1, "a": "ξ"}, indent=None) == '{"a": "ξ", "b": 1}'


def test_root_field_scalar():
    K, theta = root_field(Poly(x**3 - 3 * x + 1, x, domain="QQ"), 2)
    value = theta * theta - K.one
    encoded = json.loads(dumps(encode_scalar(value, K, approx=True)))
    assert encoded["exact"]["root_of"] == ["1/1", "0/1", "-3/1", "1/1"]
    assert encoded["exact"]["index"] == 2
    assert encoded["float"] == pytest.approx(1.5320888862380 ** 2 - 1, abs=1e-12)
    decoded, L = decode_scalar(encoded)
    assert to_float(decoded, L) == pytest.approx(encoded["float"], abs=1e-12)
    assert decoded.to_list() == value.to_list()


def test_field_descriptor():
    assert encode_field(QQ) == {"sqrt": 1}
    assert encode_field(quadratic_field(2)) == {"sqrt": 2}


def test_case_document_survives_json():
    state = Classifier(workers=1).run_case(2, 5)
    doc = json.loads(dumps(encode_case(state)))
    outcome = state["outcome"]
    assert doc["verdict"] == "einstein"
    assert doc["outcome"]["sqrt"] == 745
    assert decode_scalar(doc["outcome"]["C"]) == (outcome.C, outcome.field)
    for slot, value in outcome.params.values.items():
        assert decode_scalar(doc["outcome"]["params"][slot]) == (value, outcome.field)
    assert decode_scalar(doc["extension"]["C"]) == (outcome.C, outcome.field)
