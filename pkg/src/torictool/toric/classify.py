"""Torsion kinds, the search for a simple tuple, and the normalization verdict.

For a reduced tuple ``(1/m, eta_1; beta_k, eta_k)`` the torsion is *impure*
when every ``Q - e_j`` with ``Q`` in ``Res_j^+`` of the tail vectors already
satisfies the congruence ``<Q - e_j, eta_1> in mZ``; then the tail alone
describes every resonance.  Otherwise it is *pure*, and we look for an integer
``H`` such that ``xi_1 = eta_1 - m H`` is orthogonal to every ``Q - e_j`` with
``Q`` resonant: that turns the congruence into an equation and gives a
*simple* tuple whose additive resonances are the true ones.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from ..errors import PreconditionError
from ..exact import PhaseVector, is_integral_combination
from ..lattice.normal_forms import solve_integer_linear
from .resonance import (
    ResonanceDescriptor,
    _multi_indices,
    additive_descriptor,
    resonance_descriptor,
    theta_resonant,
)
from .tuples import ToricTuple, TorsionReport, reduce_tuple, toric_analysis, tuple_torsion

Vector = tuple[int, ...]


class Kind(str, enum.Enum):
    TORSION_FREE = "torsion_free"
    IMPURE_TORSION = "impure_torsion"
    PURE_SIMPLIFIABLE = "pure_torsion_simplifiable"
    PURE_NOT_SIMPLIFIED = "pure_torsion_not_simplified"


@dataclass(frozen=True)
class Simplification:
    H: Vector
    simple_tuple: ToricTuple
    conditions: int


@dataclass(frozen=True)
class Classification:
    kind: Kind
    degree: int
    tuple: ToricTuple
    torsion: TorsionReport
    purity_witness: tuple[int, Vector] | None = None
    simplification: Simplification | None = None
    certified: bool = True
    notes: tuple[str, ...] = field(default=())


def _reduced(phi: PhaseVector, tup: ToricTuple | None) -> tuple[ToricTuple, TorsionReport]:
    if tup is None:
        r, tup = toric_analysis(phi)
    elif tup.recombine() != phi:
        raise PreconditionError("tuple does not recombine to the phase vector")
    elif not tup.reduced and any(a.is_rational() for a in tup.coefficients):
        tup = reduce_tuple(tup)
    if not tup.reduced:
        return tup, TorsionReport(1, 1, 1, None)
    q, tau = tuple_torsion(tup)
    if tau == 1:
        return tup, TorsionReport(1, 1, 1, None)
    return tup, TorsionReport(tup.m, q, tau, tup)


def purity_witness(tup: ToricTuple) -> tuple[int, Vector] | None:
    """A pair ``(j, Q)`` with ``Q in Res_j^+(eta_2..eta_r)`` but ``<Q - e_j, eta_1>`` not in mZ."""
    eta, m = tup.vectors[0], tup.m
    for j in range(tup.n):
        desc = additive_descriptor(tup.n, j, tup.vectors[1:])
        for Q in desc.witnesses():
            x = list(Q)
            x[j] -= 1
            if sum(a * b for a, b in zip(x, eta)) % m:
                return j, Q
    return None


def classify(phi: PhaseVector, tup: ToricTuple | None = None, literal_filter: bool = False,
             strict: bool = False, strict_degree: int = 8) -> Classification:
    """Decide the torsion kind of ``[phi]``; for pure torsion also search for a simple tuple."""
    tup, report = _reduced(phi, tup)
    if report.tau == 1:
        if tup.reduced:
            from .tuples import eliminate_rational_coefficient
            tup = eliminate_rational_coefficient(tup)
        return Classification(Kind.TORSION_FREE, tup.r, tup, report)
    witness = purity_witness(tup)
    if witness is None:
        return Classification(Kind.IMPURE_TORSION, tup.r, tup, report)
    simp = simplify_search(phi, tup, literal_filter=literal_filter)
    if simp is not None and strict:
        if not simple_tuple_matches(phi, simp.simple_tuple, strict_degree):
            raise AssertionError("simple tuple disagrees with bounded enumeration")
    if simp is None:
        notes = ("no integer H solves the simplification equations; "
                 "only first vectors of the form eta_1 - m H were searched",)
        return Classification(Kind.PURE_NOT_SIMPLIFIED, tup.r, tup, report, witness, None,
                              certified=False, notes=notes)
    return Classification(Kind.PURE_SIMPLIFIABLE, tup.r, tup, report, witness, simp)


def _equations(tup: ToricTuple, literal_filter: bool) -> tuple[list[list[int]], list[int]]:
    eta, m = tup.vectors[0], tup.m
    rows: dict[Vector, int] = {}
    for j in range(tup.n):
        if literal_filter:
            vecs = _literal_check_vectors(tup, j)
        else:
            desc = additive_descriptor(tup.n, j, tup.vectors[1:], (eta, m))
            vecs = desc.check_vectors()
        for x in vecs:
            value = sum(a * b for a, b in zip(x, eta))
            if value % m:
                raise AssertionError("check vector violates the congruence")
            rows[tuple(x)] = value // m
    keys = sorted(rows)
    return [list(k) for k in keys], [rows[k] for k in keys]


def _literal_check_vectors(tup: ToricTuple, j: int) -> list[Vector]:
    # Congruence-submonoid generators plus minimal solutions of the tail system,
    # kept when <Q - e_j, eta_1> is a multiple of m * eta_1[j].
    eta, m = tup.vectors[0], tup.m
    cong = additive_descriptor(tup.n, j, tup.vectors[1:], (eta, m))
    plain = additive_descriptor(tup.n, j, tup.vectors[1:])
    out = list(cong.generators)
    step = m * eta[j]
    for P in plain.minimal_solutions:
        if sum(P) < 2:
            continue
        x = list(P)
        x[j] -= 1
        value = sum(a * b for a, b in zip(x, eta))
        if (step == 0 and value == 0) or (step and value % step == 0):
            out.append(tuple(x))
    return out


def simplify_search(phi: PhaseVector, tup: ToricTuple | None = None,
                    literal_filter: bool = False,
                    compatible_pairs: Sequence[tuple[int, int]] = ()) -> Simplification | None:
    """Integer ``H`` with ``<H, x> = <eta_1, x> / m`` on every check vector, or None.

    ``compatible_pairs`` adds the equations that give equal first-vector entries
    on pairs of coordinates.
    """
    tup, report = _reduced(phi, tup)
    if report.tau == 1:
        raise PreconditionError("phase vector is torsion-free")
    eta, m = tup.vectors[0], tup.m
    A, b = _equations(tup, literal_filter)
    for j, h in compatible_pairs:
        row = [0] * tup.n
        row[j] += 1
        row[h] -= 1
        diff = eta[j] - eta[h]
        if diff % m:
            return None
        A.append(row)
        b.append(diff // m)
    n_cond = len(A)
    if not A:
        H = (0,) * tup.n
    else:
        sol = solve_integer_linear(A, b, tup.n)
        if sol is None:
            return None
        H = sol[0]
    xi = tuple(a - m * h for a, h in zip(eta, H))
    simple = ToricTuple(tup.n, tup.basis, (xi,) + tup.vectors[1:], tup.coefficients, True, m)
    if not is_simple_tuple(phi, simple) and not literal_filter:
        raise AssertionError("solved H does not give a simple tuple")
    return Simplification(tuple(H), simple, n_cond)


def is_simple_tuple(phi: PhaseVector, tup: ToricTuple) -> bool:
    """Exact check that ``Res_j([phi]) = Res_j^+(all tuple vectors)`` for every j."""
    if tup.recombine() != phi:
        return False
    for j in range(phi.n):
        desc = resonance_descriptor(phi, j, tup)
        for Q in desc.witnesses():
            if not theta_resonant(Q, j, tup.vectors):
                return False
        lower = additive_descriptor(phi.n, j, tup.vectors)
        for Q in lower.witnesses():
            if not is_integral_combination(phi, Q, j):
                return False
    return True


def simple_tuple_matches(phi: PhaseVector, tup: ToricTuple, max_degree: int) -> bool:
    """Bounded cross-check of a simple tuple against the direct integrality test."""
    for Q in _multi_indices(phi.n, max_degree):
        if sum(Q) < 2:
            continue
        for j in range(phi.n):
            if is_integral_combination(phi, Q, j) != theta_resonant(Q, j, tup.vectors):
                return False
    return True


def compatible(phi: PhaseVector, tup: ToricTuple) -> bool:
    """Equal phases must come with equal entries in every tuple vector."""
    for j in range(phi.n):
        for h in range(j):
            if phi[j] == phi[h] and any(v[j] != v[h] for v in tup.vectors):
                return False
    return True


def jordan_compatible(vectors: Sequence[Sequence[int]], block_sizes: Sequence[int]) -> bool:
    """Weights fit a lower Jordan form with the given block sizes.

    Each subdiagonal coupling ``z_{j-1}`` in component ``j`` must be resonant,
    i.e. rows ``j-1`` and ``j`` of the weight matrix coincide inside a block.
    """
    n = sum(block_sizes)
    if any(b < 1 for b in block_sizes) or any(len(v) != n for v in vectors):
        raise PreconditionError("block sizes must be positive and sum to the vector length")
    start = 0
    for size in block_sizes:
        for j in range(start + 1, start + size):
            if any(v[j - 1] != v[j] for v in vectors):
                return False
        start += size
    return True


@dataclass(frozen=True)
class Verdict:
    kind: Kind
    torus_dimension: int
    weight_matrix: tuple[Vector, ...]
    criterion: str
    compatibility_required: bool
    compatible_found: bool | None
    certified: bool
    classification: Classification


def normalization_verdict(phi: PhaseVector, diagonalizable: bool = True,
                          tup: ToricTuple | None = None) -> Verdict:
    """Torus whose action characterises Poincaré-Dulac normal forms with linear part ``exp(2 pi i phi)``.

    ``criterion`` is ``"iff"`` when commuting with the torus is equivalent to
    being in normal form and ``"sufficient"`` when it is only sufficient.
    """
    cls = classify(phi, tup)
    t = cls.tuple
    need = not diagonalizable and any(phi[j] == phi[h] for j in range(phi.n) for h in range(j))
    if cls.kind is Kind.TORSION_FREE:
        weights, criterion = t.vectors, "iff"
    elif cls.kind is Kind.IMPURE_TORSION:
        weights, criterion = t.vectors[1:], "iff"
    elif cls.kind is Kind.PURE_SIMPLIFIABLE:
        simple = cls.simplification.simple_tuple
        if need and not compatible(phi, simple):
            pairs = [(j, h) for j in range(phi.n) for h in range(j) if phi[j] == phi[h]]
            retry = simplify_search(phi, t, compatible_pairs=pairs)
            if retry is not None:
                simple = retry.simple_tuple
        weights, criterion = simple.vectors, "iff"
    else:
        weights, criterion = t.vectors, "sufficient"
    found = compatible(phi, _as_tuple(t, weights)) if need else None
    if need and not found:
        criterion = "sufficient"
    return Verdict(cls.kind, len(weights), tuple(weights), criterion, need, found,
                   cls.certified, cls)


def _as_tuple(t: ToricTuple, weights) -> ToricTuple:
    return ToricTuple(t.n, t.basis, tuple(weights), tuple(t.coefficients[-len(weights):]) if weights else ())


