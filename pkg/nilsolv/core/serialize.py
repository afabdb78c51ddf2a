"""JSON codec - exact scalars, algebras, elements and matrices.

Rationals are always "n/d" strings; a + b*sqrt(d) is {"a": "n/d", "b": "n/d", "sqrt": d};
an element of QQ(theta), theta a real root of an irreducible factor, is
{"element": [...], "root_of": [...], "index": i, "interval": [lo, hi]}, coefficients highest degree first;
polynomial-ring values are printed expressions.
"""

import json
from typing import Any, Dict, List, Optional

from sympy import Poly, Symbol
from sympy.polys.domains import QQ

from nilsolv.core.errors import DomainError
from nilsolv.core.numbers import (
    format_rational,
    from_parts,
    is_quadratic,
    parse_rational,
    quadratic_field,
    quadratic_parts,
    radicand_of,
    rational,
    root_field,
    root_interval,
    to_float,
)


def encode_field(K: Any) -> Dict[str, Any]:
    """{"sqrt": d} for QQ (d = 1) and QQ(sqrt(d)); the defining factor and isolating interval otherwise."""
    if K == QQ or is_quadratic(K):
        return {"sqrt": radicand_of(K)}
    factor, lo, hi = root_interval(K)
    index = next(i for i, ((a, _), _) in enumerate(factor.intervals()) if rational(a) == lo)
    return {
        "root_of": [format_rational(c) for c in factor.all_coeffs()],
        "index": index,
        "interval": [format_rational(lo), format_rational(hi)],
    }


def encode_scalar(x: Any, K: Any = QQ, approx: bool = False) -> Any:
    if K == QQ:
        out: Any = format_rational(x)
    elif is_quadratic(K):
        a, b = quadratic_parts(x, K)
        out = {"a": format_rational(a), "b": format_rational(b), "sqrt": radicand_of(K)}
    elif K.is_AlgebraicField:
        out = {"element": [format_rational(QQ.convert(c)) for c in x.to_list()], **encode_field(K)}
    else:
        return str(K.to_sympy(x))
    if approx:
        return {"exact": out, "float": to_float(x, K)}
    return out


def decode_scalar(obj: Any):
    """(value, field) from an encoded scalar."""
    if isinstance(obj, dict) and "exact" in obj:
        return decode_scalar(obj["exact"])
    if isinstance(obj, str):
        return parse_rational(obj), QQ
    if isinstance(obj, dict) and {"a", "b", "sqrt"} <= set(obj):
        K = quadratic_field(int(obj["sqrt"]))
        return from_parts(parse_rational(obj["a"]), parse_rational(obj["b"]), K), K
    if isinstance(obj, dict) and {"element", "root_of", "index"} <= set(obj):
        factor = Poly([parse_rational(c) for c in obj["root_of"]], Symbol("x"), domain="QQ")
        K, _ = root_field(factor, int(obj["index"]))
        return K.new([parse_rational(c) for c in obj["element"]]), K
    raise DomainError(f"not an encoded scalar: {obj!r}")


def encode_matrix(rows: List[List[Any]], K: Any = QQ, approx: bool = False) -> List[List[Any]]:
    return [[encode_scalar(v, K, approx) for v in row] for row in rows]


def encode_algebra(alg, include_brackets: bool = True) -> Dict[str, Any]:
    """Hall basis as nested bracket arrays of generator labels, plus the structure table."""
    doc: Dict[str, Any] = {
        "m": alg.m,
        "p": alg.p,
        "dim": alg.dim,
        "degree_sizes": alg.degree_sizes(),
        "basis": [
            {
                "index": t.index,
                "degree": t.degree,
                "content": list(t.content),
                "bracket": alg.nested(t.index),
                "label": alg.label(t.index),
            }
            for t in alg.basis
        ],
    }
    if include_brackets:
        doc["brackets"] = [
            {"left": a, "right": b, "value": encode_element_map(alg.bracket_basis(a, b))}
            for a, b in sorted(alg.nonzero_pairs())
        ]
    return doc


def encode_element_map(coeffs: Dict[int, Any]) -> Dict[str, str]:
    return {str(i): format_rational(v) for i, v in sorted(coeffs.items())}


def encode_cone_certificate(cert) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"type": str(cert.type), "verdict": cert.verdict}
    if cert.feasible:
        doc["T"] = {f"{i},{j}": format_rational(v) for (i, j), v in sorted(cert.T.items())}
    else:
        doc["a"] = list(cert.a)
    return doc


def encode_certificate(cert) -> Dict[str, Any]:
    if hasattr(cert, "combined"):
        return {
            "kind": "positive_combination",
            "coefficients": {k: int(v) if isinstance(v, int) else format_rational(v) for k, v in cert.coefficients.items()},
            "combined": {str(mono): format_rational(c) for mono, c in sorted(cert.combined.items())},
            "constant": format_rational(cert.constant),
            "rhs": format_rational(cert.rhs),
            "valid": cert.valid,
            "expression": cert.expression(),
        }
    return {
        "kind": "univariate",
        "variable": cert.variable,
        "coefficients": list(cert.coefficients),
        "valid": cert.valid,
        "expression": cert.expression(),
    }


def encode_outcome(outcome, approx: bool = False) -> Dict[str, Any]:
    """Einstein, not Einstein or screened; keyed by `verdict`."""
    doc: Dict[str, Any] = {"m": outcome.m, "p": outcome.p, "verdict": outcome.verdict}
    if outcome.verdict == "einstein":
        K = outcome.field
        doc["C"] = encode_scalar(outcome.C, K, approx)
        doc["params"] = {s: encode_scalar(v, K, approx) for s, v in sorted(outcome.params.values.items())}
        doc["polynomial"] = list(outcome.polynomial)
        doc.update(encode_field(K))
    elif outcome.verdict == "not_einstein":
        doc["certificate"] = encode_certificate(outcome.certificate)
    else:
        doc["certificate"] = encode_cone_certificate(outcome.certificate)
    return doc


def encode_system(system) -> Dict[str, Any]:
    return {
        "m": system.m,
        "p": system.p,
        "trace": system.trace,
        "trace_squares": system.trace_squares,
        "equations": [
            {
                "label": eq.label,
                "degree": eq.degree,
                "coefficients": {str(mono): format_rational(c) for mono, c in sorted(eq.coefficients.items())},
                "constant": format_rational(eq.constant),
                "rhs": eq.rhs,
            }
            for eq in system.equations
        ],
        "relations": system.describe()[len(system.equations):],
    }


def encode_extension(extension: Dict[str, Any], approx: bool = False) -> Dict[str, Any]:
    K = extension["field"]
    doc = {k: encode_scalar(extension[k], K, approx) for k in ("C", "c_hat", "h_norm2", "einstein_constant")}
    doc.update(dim=extension["dim"], trace_phi=extension["trace_phi"], is_einstein=extension["is_einstein"])
    doc.update(encode_field(K))
    return doc


def encode_flow(result) -> Dict[str, Any]:
    return {
        "m": result.m,
        "p": result.p,
        "params": dict(sorted(result.params.items())),
        "C": result.C,
        "residual": result.residual,
        "iterations": result.iterations,
        "converged": result.converged,
        "restart": result.restart,
        "trace_gap": result.trace_gap,
    }


def encode_case(state, approx: bool = False) -> Dict[str, Any]:
    outcome = state.get("outcome")
    extension = state.get("extension")
    return {
        "m": state["m"],
        "p": state["p"],
        "stage": state.get("stage"),
        "verdict": outcome.verdict if outcome is not None else None,
        "outcome": encode_outcome(outcome, approx) if outcome is not None else None,
        "extension": encode_extension(extension, approx) if extension else None,
        "error": state.get("error"),
        "error_kind": state.get("error_kind"),
    }


def dumps(doc: Any, indent: Optional[int] = 2) -> str:
    return json.dumps(doc, sort_keys=True, indent=indent, ensure_ascii=False)
