"""Command line entry point: ``torictool <command> <file> [options]``."""
from __future__ import annotations

import argparse
import json
import os
import sys

import mpmath

from ..errors import ParseError, PreconditionError, PrecisionError, ToricToolError
from ..exact import LinearForm, PhaseVector, SymbolBasis, as_rational
from ..germ import (
    EXACT,
    Field,
    JetMap,
    JetVectorField,
    commutation_check,
    flow,
    pd_normalize,
    phase_linked_jet,
)
from ..toric import (
    Kind,
    brute_force_resonances,
    classify,
    normalization_verdict,
    resonance_descriptor,
    toric_analysis,
    torsion,
)
from .parsing import GermFile, parse_germ_file, parse_phase_file
from .report import (
    classification_report,
    coefficient_table,
    real,
    torsion_report,
    tuple_report,
    verdict_report,
)

DEFAULT_PRECISION = 256


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _precision(args) -> int:
    if args.precision is not None:
        bits = args.precision
    else:
        env = os.environ.get("TORICTOOL_PRECISION")
        try:
            bits = int(env) if env else DEFAULT_PRECISION
        except ValueError:
            raise PreconditionError(f"TORICTOOL_PRECISION={env!r} is not an integer") from None
    if bits < 64:
        raise PreconditionError("precision must be at least 64 bits")
    return bits


def _digits(bits: int) -> int:
    return max(15, int(bits * 0.30103) - 2)


def _symbol_overrides(args) -> dict:
    out = {}
    for item in args.symbol_value or ():
        if "=" not in item:
            raise PreconditionError(f"--symbol-value expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        out[name.strip()] = value.strip()
    return out


def _check_strict(phi: PhaseVector, degree: int):
    for j in range(phi.n):
        desc = resonance_descriptor(phi, j)
        if desc.enumerate(degree) != brute_force_resonances(phi, j, degree):
            raise AssertionError(f"descriptor for coordinate {j + 1} disagrees with direct enumeration")


def cmd_analyze(args) -> dict:
    phi = parse_phase_file(_read(args.file))
    r, tup = toric_analysis(phi)
    verdict = normalization_verdict(phi, diagonalizable=not args.not_diagonalizable)
    cls = verdict.classification
    if args.strict:
        _check_strict(phi, args.max_degree)
    return {
        "toric_degree": r,
        "tuple": tuple_report(tup),
        "torsion": torsion_report(torsion(phi)),
        "classification": cls.kind.value,
        "verdict": verdict_report(verdict),
        "certified": verdict.certified,
    }


def cmd_resonances(args) -> dict:
    phi = parse_phase_file(_read(args.file))
    coords = [args.coordinate] if args.coordinate else list(range(1, phi.n + 1))
    reports = []
    for j in coords:
        if not 1 <= j <= phi.n:
            raise PreconditionError(f"coordinate {j} out of range 1..{phi.n}")
        desc = resonance_descriptor(phi, j - 1)
        found = desc.enumerate(args.max_degree)
        if args.strict and found != brute_force_resonances(phi, j - 1, args.max_degree):
            raise AssertionError("descriptor disagrees with direct enumeration")
        reports.append({
            "coordinate": j,
            "max_degree": args.max_degree,
            "resonant_multi_indices": [list(Q) for Q in found],
            "generators": [list(g) for g in desc.generators],
            "minimal_solutions": [list(p) for p in desc.minimal_solutions],
            "equal_weight_coordinates": [h + 1 for h in desc.equal_weight],
            "certified": True,
        })
    if args.coordinate:
        return reports[0]
    return {"max_degree": args.max_degree, "coordinates": reports, "certified": True}


def cmd_classify(args) -> dict:
    phi = parse_phase_file(_read(args.file))
    cls = classify(phi, literal_filter=args.literal_filter, strict=args.strict,
                   strict_degree=args.max_degree)
    return classification_report(cls)


def cmd_simplify(args) -> dict:
    phi = parse_phase_file(_read(args.file))
    cls = classify(phi, literal_filter=args.literal_filter, strict=args.strict,
                   strict_degree=args.max_degree)
    if cls.kind in (Kind.TORSION_FREE, Kind.IMPURE_TORSION):
        raise PreconditionError(f"simplification needs pure torsion, found {cls.kind.value}")
    if cls.simplification is None:
        return {"status": "not_found", "search_bound": args.max_degree,
                "reason": cls.notes[0] if cls.notes else "", "certified": False}
    s = cls.simplification
    return {"status": "found", "H": list(s.H), "simple_tuple": tuple_report(s.simple_tuple),
            "certified": True}


def _germ_phases(g: GermFile, args) -> PhaseVector | None:
    if g.mode != "phase":
        return None
    if not args.phases:
        raise PreconditionError("phase-linked eigenvalues need --phases <file>")
    base = parse_phase_file(_read(args.phases))
    picked = []
    for _, k in g.lambdas:
        if k > base.n:
            raise PreconditionError(f"phase {k} does not exist in the phase file")
        picked.append(base[k - 1])
    return PhaseVector(base.basis, tuple(picked))


def _germ_jet(g: GermFile, args, bits: int) -> JetMap:
    phases = _germ_phases(g, args)
    if phases is None:
        return JetMap.from_jordan([v for _, v in g.lambdas], g.eps, g.terms, g.maxdeg, EXACT)
    return phase_linked_jet(phases, g.eps, g.terms, g.maxdeg, bits, _symbol_overrides(args))


def cmd_normalize(args) -> dict:
    bits = _precision(args)
    g = parse_germ_file(_read(args.file))
    f = _germ_jet(g, args, bits)
    nf = pd_normalize(f)
    digits = _digits(bits)
    exact = f.field.exact
    with mpmath.workprec(bits + 64):
        certified = nf.residual == 0 if exact else nf.relative_residual < mpmath.mpf(2) ** (-(bits - 20))
        return {
            "mode": "exact" if exact else "phase",
            "precision": None if exact else bits,
            "psi": coefficient_table(nf.psi.terms(), digits),
            "g": coefficient_table(nf.g.terms(), digits),
            "residual_max": real(nf.residual, 10),
            "relative_residual": real(nf.relative_residual, 10),
            "certified": bool(certified),
        }


def _vector_field(g: GermFile, args, bits: int) -> JetVectorField:
    phases = _germ_phases(g, args)
    if phases is not None:
        basis = phases.basis
        diag = [p.as_form() for p in phases]
    else:
        needs_i = any(v.im for _, v in g.lambdas) or any(c.im for c in g.terms.values())
        basis = SymbolBasis(("i",) if needs_i else ())
        diag = [LinearForm(basis, v.re, (v.im,) if needs_i else ()) for _, v in g.lambdas]
    couplings = {(j, j - 1): 1 for j in range(1, g.dim) if g.eps[j]}
    rational = all(p.is_rational() for p in diag) and not any(c.im for c in g.terms.values())
    field = EXACT if rational and all(p.is_zero() for p in diag) and not args.numeric else Field(bits)
    return JetVectorField.from_parts(diag, couplings, g.terms, g.maxdeg, field, _symbol_overrides(args))


def cmd_flow(args) -> dict:
    bits = _precision(args)
    g = parse_germ_file(_read(args.file), vector_field=True)
    X = _vector_field(g, args, bits)
    t = as_rational(args.time)
    normal = X.is_normal_form()
    F = flow(X, t, args.method)
    return {
        "time": str(t),
        "mode": "exact" if F.field.exact else "numeric",
        "precision": None if F.field.exact else bits,
        "normal_form": normal,
        "flow": coefficient_table(F.terms(), _digits(bits)),
        "certified": True,
    }


def _parse_weights(text: str, n: int) -> list[tuple[int, ...]]:
    vecs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            v = tuple(int(x) for x in chunk.split(","))
        except ValueError:
            raise ParseError(f"weights must be integers: {chunk!r}") from None
        if len(v) != n:
            raise PreconditionError(f"weight vector {v} does not have {n} entries")
        vecs.append(v)
    return vecs


def cmd_check_commute(args) -> dict:
    bits = _precision(args)
    g = parse_germ_file(_read(args.file))
    f = _germ_jet(g, args, bits)
    if args.weights:
        vectors = _parse_weights(args.weights, f.n)
    elif f.phases is not None:
        vectors = list(normalization_verdict(f.phases).weight_matrix)
    else:
        raise PreconditionError("give --weights or a phase-linked germ with --phases")
    rep = commutation_check(f, vectors)
    return {
        "commutes": rep.commutes,
        "weights": [list(v) for v in vectors],
        "witnesses": [{"coordinate": j + 1, "exponent": list(Q)} for j, Q in rep.witnesses],
        "certified": True,
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torictool",
                                description="Toric degree, torsion and resonance analysis of eigenvalue phases.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, phase_input=True):
        sp.add_argument("file", help="phase file" if phase_input else "germ file")
        sp.add_argument("--max-degree", type=int, default=6, help="enumeration bound (default 6)")
        sp.add_argument("--precision", type=int, default=None,
                        help="binary precision for numeric work (default 256, or $TORICTOOL_PRECISION)")
        sp.add_argument("--strict", action="store_true", help="cross-check against bounded enumeration")
        sp.add_argument("--comin-bound", type=int, default=None,
                        help="bound for cominimal enumeration (default: the exact cone bound)")
        if not phase_input:
            sp.add_argument("--phases", help="phase file for 'lambda j = phase k' lines")
            sp.add_argument("--symbol-value", action="append", metavar="NAME=VALUE",
                            help="numeric value of a symbol, e.g. a=0.3+0.1j (repeatable)")
        return sp

    a = common(sub.add_parser("analyze", help="toric degree, tuple, torsion, kind and torus verdict"))
    a.add_argument("--not-diagonalizable", action="store_true",
                   help="the linear part has Jordan blocks; require compatible tuples")
    r = common(sub.add_parser("resonances", help="resonant multi-indices up to --max-degree"))
    r.add_argument("--coordinate", type=int, default=None, help="coordinate j (1-based); default all")
    for name, helptext in (("classify", "torsion kind"), ("simplify", "search for a simple tuple")):
        c = common(sub.add_parser(name, help=helptext))
        c.add_argument("--literal-filter", action="store_true",
                       help="use the divisibility filter on minimal solutions instead of the lattice test")
    common(sub.add_parser("normalize", help="Poincare-Dulac normal form of a germ file"), False)
    fl = common(sub.add_parser("flow", help="time-t flow of the vector field in a germ file"), False)
    fl.add_argument("--time", default="1", help="rational time (default 1)")
    fl.add_argument("--method", choices=("auto", "series", "split"), default="auto")
    fl.add_argument("--numeric", action="store_true", help="force big-float arithmetic")
    ch = common(sub.add_parser("check-commute", help="does the germ commute with a torus action"), False)
    ch.add_argument("--weights", help="weight vectors, e.g. '3,2,-1;2,3,1'")
    return p


COMMANDS = {
    "analyze": cmd_analyze,
    "resonances": cmd_resonances,
    "classify": cmd_classify,
    "simplify": cmd_simplify,
    "normalize": cmd_normalize,
    "flow": cmd_flow,
    "check-commute": cmd_check_commute,
}


def _error(exc: Exception, kind: str, code: int) -> int:
    payload = {"error": kind, "message": getattr(exc, "message", None) or str(exc)}
    if isinstance(exc, ParseError):
        payload["line"] = exc.line
        payload["column"] = exc.column
    print(json.dumps(payload), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_degree < 0:
        return _error(PreconditionError("--max-degree must be nonnegative"), "precondition_violation", 2)
    try:
        report = COMMANDS[args.command](args)
    except ParseError as exc:
        return _error(exc, exc.kind, 1)
    except PrecisionError as exc:
        return _error(exc, exc.kind, 3)
    except (ToricToolError, ValueError, ZeroDivisionError) as exc:
        return _error(exc, "precondition_violation", 2)
    except AssertionError as exc:
        return _error(exc, "internal_check_failed", 2)
    print(json.dumps(report, indent=2))
    return 0


