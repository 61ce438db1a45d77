"""JSON-ready report builders.  Rationals are strings, vectors are int lists."""
from __future__ import annotations

import mpmath

from ..exact import GaussianRational, format_linear, format_rational
from ..toric import Classification, ToricTuple, TorsionReport, Verdict


def tuple_report(t: ToricTuple) -> dict:
    return {
        "vectors": [list(v) for v in t.vectors],
        "coefficients": [format_linear(c) for c in t.coefficients],
        "reduced": t.reduced,
        "m": t.m,
    }


def torsion_report(t: TorsionReport) -> dict:
    return {"m": t.m, "q": t.q, "tau": t.tau}


def classification_report(c: Classification) -> dict:
    out = {
        "classification": c.kind.value,
        "toric_degree": c.degree,
        "tuple": tuple_report(c.tuple),
        "torsion": torsion_report(c.torsion),
        "purity_witness": None,
        "simplification": None,
        "notes": list(c.notes),
        "certified": c.certified,
    }
    if c.purity_witness is not None:
        j, Q = c.purity_witness
        out["purity_witness"] = {"coordinate": j + 1, "multi_index": list(Q)}
    if c.simplification is not None:
        out["simplification"] = {"H": list(c.simplification.H),
                                 "simple_tuple": tuple_report(c.simplification.simple_tuple)}
    return out


def verdict_report(v: Verdict) -> dict:
    return {
        "torus_dimension": v.torus_dimension,
        "weight_matrix": [list(w) for w in v.weight_matrix],
        "criterion": v.criterion,
        "compatibility_required": v.compatibility_required,
    }


def scalar(c, digits: int) -> dict:
    if isinstance(c, GaussianRational):
        return {"re": format_rational(c.re), "im": format_rational(c.im)}
    c = mpmath.mpc(c)
    return {"re": mpmath.nstr(c.real, digits, min_fixed=-1, max_fixed=1),
            "im": mpmath.nstr(c.imag, digits, min_fixed=-1, max_fixed=1)}


def real(x, digits: int) -> str:
    if isinstance(x, int):
        return str(x)
    if not isinstance(x, mpmath.mpf):
        return format_rational(x)
    return mpmath.nstr(x, digits, min_fixed=-1, max_fixed=1)


def coefficient_table(terms, digits: int) -> list[dict]:
    return [{"coordinate": j + 1, "exponent": list(Q), "value": scalar(c, digits)} for j, Q, c in terms]
