"""Poincaré-Dulac normalization of map germs and the torus-commutation test."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import mpmath

from ..errors import PrecisionError, PreconditionError
from ..exact import GaussianRational, PhaseVector, to_mpc
from ..exact import symbol_values as numeric_symbols
from ..toric.resonance import theta_resonant
from .jets import (
    Field,
    JetMap,
    compose,
    difference,
    eigenvalues,
    exponents_of_degree,
    max_abs,
    padd,
    pcompose,
    phomogeneous,
    solve_linear,
    unit,
)


@dataclass(frozen=True)
class NormalForm:
    """``residual`` is the largest coefficient of ``psi ∘ g - f ∘ psi``;
    ``relative_residual`` divides it by the largest coefficient of f, psi and g (and 1)."""

    psi: JetMap
    g: JetMap
    residual: object
    relative_residual: object


def _monomial_value(lams, Q):
    v = lams[0] ** 0
    for lam, q in zip(lams, Q):
        if q:
            v = v * lam ** q
    return v


def pd_normalize(f: JetMap) -> NormalForm:
    """Find ``psi`` tangent to the identity and ``g`` in normal form with ``psi ∘ g = f ∘ psi``.

    At each degree the homological operator ``h -> L h - h ∘ L`` is inverted on
    the non-resonant part; resonant terms are kept in ``g`` and ``psi`` has no
    resonant terms.  Resonance is decided exactly: by comparing Gaussian
    rationals, or through the phase vector of a phase-linked jet.
    """
    f.jordan_data()
    if not f.field.exact and f.phases is None:
        raise PreconditionError("numeric jets must be linked to exact phases to decide resonance")
    if f.field.exact:
        psi, g = _normalize(f)
        res = conjugacy_residual(f, psi, g)
        return NormalForm(psi, g, res, res)
    # numeric: work with guard bits, then round the results to the requested precision
    work = Field(f.field.bits + GUARD_BITS)
    fw = f.to_field(work)
    psi, g = _normalize(fw)
    psi, g = psi.to_field(f.field), g.to_field(f.field)
    res = conjugacy_residual(fw, psi.to_field(work), g.to_field(work))
    with work.context():
        scale = max(mpmath.mpf(1), fw.max_coefficient(), psi.max_coefficient(), g.max_coefficient())
        return NormalForm(psi, g, res, res / scale)


GUARD_BITS = 64


def _normalize(f: JetMap) -> tuple[JetMap, JetMap]:
    lambdas, eps = f.jordan_data()
    F = f.field
    n, D = f.n, f.degree
    threshold = None if F.exact else mpmath.mpf(2) ** (-((F.bits - GUARD_BITS) // 2))
    with F.context():
        lin = [{e: c for e, c in comp.items() if sum(e) == 1} for comp in f.components]
        psi = [{unit(n, i): F.one} for i in range(n)]
        g = [dict(c) for c in lin]
        for k in range(2, D + 1):
            fpsi = [pcompose(c, psi, k, F.one) for c in f.components]
            psig = [pcompose(c, g, k, F.one) for c in psi]
            E = [phomogeneous(padd(a, b, scale=-1), k) for a, b in zip(fpsi, psig)]
            groups: dict = {}
            for j in range(n):
                for Q in exponents_of_degree(n, k):
                    groups.setdefault(_key(f, lambdas, Q, j), []).append((Q, j))
            for key, members in groups.items():
                rhs = [E[j].get(Q, F.zero) for Q, j in members]
                if all(v == 0 for v in rhs):
                    continue
                if key[0] == key[1]:
                    for (Q, j), v in zip(members, rhs):
                        if v != 0:
                            g[j][Q] = v
                    continue
                if threshold is not None:
                    lam_Q = _monomial_value(lambdas, members[0][0])
                    if abs(lam_Q - lambdas[members[0][1]]) < threshold:
                        raise PrecisionError(
                            f"small divisor at {members[0]} below 2^-{(F.bits - GUARD_BITS) // 2}; "
                            "raise the precision")
                index = {m: i for i, m in enumerate(members)}
                A = [[F.zero] * len(members) for _ in members]
                for col, (Q, j) in enumerate(members):
                    for (Q2, j2), c in _homological_image(lin, n, Q, j, k, F).items():
                        row = index.get((Q2, j2))
                        if row is None:
                            if c != 0:
                                raise AssertionError("homological operator leaves its block")
                            continue
                        A[row][col] = A[row][col] + c
                sol = solve_linear(A, [-v for v in rhs], lambda x: x == 0)
                for (Q, j), h in zip(members, sol):
                    if h != 0:
                        psi[j][Q] = h
        return f.like(psi), f.like(g)


def _key(f: JetMap, lambdas, Q, j):
    if f.phases is not None:
        return (f.phases[j].as_form().mod1(), f.phases.pairing(Q).mod1())
    return (lambdas[j], _monomial_value(lambdas, Q))


def _homological_image(lin, n, Q, j, k, F: Field) -> dict:
    """``L h - h ∘ L`` for ``h = z^Q e_j`` as a dict {(exponent, coordinate): coefficient}."""
    out: dict = {}
    for i in range(n):
        c = lin[i].get(unit(n, j))
        if c is not None and c != 0:
            out[(Q, i)] = out.get((Q, i), F.zero) + c
    comp = pcompose({Q: F.one}, lin, k, F.one)
    for e, c in comp.items():
        out[(e, j)] = out.get((e, j), F.zero) - c
    return out


def conjugacy_residual(f: JetMap, psi: JetMap, g: JetMap):
    """Largest coefficient of ``psi ∘ g - f ∘ psi`` (an exact Fraction-valued magnitude bound
    in exact mode, an mpmath real otherwise)."""
    diff = difference(compose(psi, g), compose(f, psi))
    if f.field.exact:
        vals = [max(abs(c.re), abs(c.im)) for p in diff for c in p.values()]
        return max(vals) if vals else 0
    return max_abs(diff, f.field)


@dataclass(frozen=True)
class CommutationReport:
    commutes: bool
    witnesses: tuple[tuple[int, tuple[int, ...]], ...]
    spot_deviation: object = None


def commutation_check(f: JetMap, vectors: Sequence[Sequence[int]], spot_check: bool = False,
                      seed: int = 0) -> CommutationReport:
    """Does ``f`` commute with the torus action ``z_j -> exp(2 pi i <x, Theta_j>) z_j``?

    The jet commutes exactly when every nonzero coefficient at ``(j, Q)`` has
    ``Q`` additively resonant for the weight vectors.  Non-resonant nonzero
    coefficients are returned as witnesses (0-based coordinate, exponent).
    """
    if any(len(v) != f.n for v in vectors):
        raise PreconditionError("weight vectors must have length n")
    witnesses = []
    for j, Q, c in f.terms():
        if not theta_resonant(Q, j, vectors):
            witnesses.append((j, Q))
    spot = None
    if spot_check:
        spot = _spot_deviation(f, vectors, seed)
    return CommutationReport(not witnesses, tuple(witnesses), spot)


def _spot_deviation(f: JetMap, vectors, seed: int):
    """max |f(A_x z) - A_x f(z)| over coefficients for a few random torus elements."""
    rng = random.Random(seed)
    bits = f.field.bits or 128
    worst = mpmath.mpf(0)
    with mpmath.workprec(bits):
        for _ in range(3):
            x = [mpmath.mpf(rng.randrange(1, 10 ** 6)) / 10 ** 6 for _ in vectors]
            w = [sum(x[k] * v[i] for k, v in enumerate(vectors)) for i in range(f.n)]
            for j, Q, c in f.terms():
                left = mpmath.expjpi(2 * sum(q * wi for q, wi in zip(Q, w)))
                right = mpmath.expjpi(2 * w[j])
                cv = to_mpc(c) if isinstance(c, GaussianRational) else c
                worst = max(worst, abs(cv) * abs(left - right))
    return worst


def phase_linked_jet(phases: PhaseVector, eps: Sequence[int], terms, degree: int, bits: int = 256,
                     symbol_values=None) -> JetMap:
    """Numeric jet whose eigenvalues are ``exp(2 pi i phases_j)``.

    ``symbol_values`` overrides the default numeric meaning of the symbols.
    """
    F = Field(bits)
    overrides = tuple(sorted(dict(symbol_values or {}).items()))
    with F.context():
        values = numeric_symbols(phases.basis, dict(overrides))
        lambdas = [mpmath.exp(2j * mpmath.pi * p.evaluate(values)) for p in phases]
    return JetMap.from_jordan(lambdas, eps, terms, degree, F, phases=phases, symbol_values=overrides)


__all__ = ["CommutationReport", "NormalForm", "commutation_check", "conjugacy_residual",
           "eigenvalues", "pd_normalize", "phase_linked_jet"]
