"""Toric tuples: writing a phase vector as ``sum alpha_k theta_k`` with few integer vectors."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import PreconditionError
from ..exact import LinearForm, PhaseVector, SymbolBasis, gcd_all, lcm_all
from ..lattice.monoid import Lattice
from ..lattice.normal_forms import (
    hermite_form,
    integer_kernel,
    integer_scale,
    rational_coordinates,
    rational_rank,
    smith_form,
)

Vector = tuple[int, ...]


@dataclass(frozen=True)
class ToricTuple:
    """Vectors ``theta_1..theta_r`` in Z^n with coefficients ``alpha_k``.

    When ``reduced`` is set the first coefficient is exactly ``1/m``, the first
    vector is coprime to ``m`` and the remaining coefficients carry no rational
    part.
    """

    n: int
    basis: SymbolBasis
    vectors: tuple[Vector, ...]
    coefficients: tuple[LinearForm, ...]
    reduced: bool = False
    m: int | None = None

    def __post_init__(self):
        vecs = tuple(tuple(int(v) for v in vec) for vec in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "coefficients", tuple(c.as_form() for c in self.coefficients))
        if len(vecs) != len(self.coefficients):
            raise PreconditionError("one coefficient per vector is required")
        if any(len(v) != self.n for v in vecs):
            raise PreconditionError("tuple vector of the wrong length")
        if self.reduced and (self.m is None or self.m < 2):
            raise PreconditionError("a reduced tuple needs m >= 2")

    @property
    def r(self) -> int:
        return len(self.vectors)

    def recombine(self) -> PhaseVector:
        total = [LinearForm.zero(self.basis) for _ in range(self.n)]
        for vec, a in zip(self.vectors, self.coefficients):
            for i, v in enumerate(vec):
                if v:
                    total[i] = total[i] + a * v
        return PhaseVector.from_forms(total)

    def symbol_matrix(self) -> list[list[Fraction]]:
        """r x S matrix of symbol coefficients of the alphas."""
        return [list(a.coeffs) for a in self.coefficients]

    def tail(self) -> tuple[Vector, ...]:
        return self.vectors[1:] if self.reduced else self.vectors


def saturated_basis(vectors: Sequence[Sequence], n: int) -> list[Vector]:
    """Canonical echelon basis of ``span_Q(vectors) ∩ Z^n``."""
    ints = [integer_scale(v) for v in vectors if any(Fraction(x) != 0 for x in v)]
    if not ints:
        return []
    orth = integer_kernel([list(v) for v in ints], n)
    return list(Lattice.kernel(orth, n).basis)


def _coefficients_over(basis_vecs: Sequence[Vector], phi: PhaseVector) -> list[LinearForm]:
    """Symbol-only coefficients ``Gamma sigma`` with ``Theta Gamma = A``."""
    A = phi.symbol_matrix()
    S = len(phi.basis)
    gamma = [[Fraction(0)] * S for _ in basis_vecs]
    for s in range(S):
        col = [A[i][s] for i in range(phi.n)]
        t = rational_coordinates(basis_vecs, col)
        if t is None:
            raise AssertionError("symbol column outside the saturated span")
        for k, v in enumerate(t):
            gamma[k][s] = v
    return [LinearForm(phi.basis, Fraction(0), tuple(row)) for row in gamma]


def tuple_torsion(tup: ToricTuple) -> tuple[int, int]:
    """``(q, tau)`` for a reduced tuple: ``qZ`` is the set of values ``<eta_1, b>`` over the
    integer kernel of the tail vectors, and ``tau = m / gcd(m, q)``."""
    if not tup.reduced:
        raise PreconditionError("torsion via q needs a reduced tuple")
    kernel = integer_kernel([list(v) for v in tup.vectors[1:]], tup.n)
    eta = tup.vectors[0]
    q = abs(gcd_all(sum(a * b for a, b in zip(eta, k)) for k in kernel))
    return q, tup.m // math.gcd(tup.m, q)


def _candidate(phi: PhaseVector) -> tuple[list[Vector], ToricTuple | None, ToricTuple]:
    A = phi.symbol_matrix()
    cols = [[A[i][s] for i in range(phi.n)] for s in range(len(phi.basis))]
    theta = saturated_basis(cols, phi.n)
    gamma = _coefficients_over(theta, phi)
    c = phi.rational_vector()
    plain = ToricTuple(phi.n, phi.basis, tuple(theta), tuple(gamma))
    if all(v == 0 for v in c):
        return theta, None, plain
    m = lcm_all(v.denominator for v in c)
    eta = tuple(int(v * m) for v in c)
    cand = ToricTuple(phi.n, phi.basis, (eta,) + tuple(theta),
                      (LinearForm.constant(phi.basis, Fraction(1, m)),) + tuple(gamma),
                      reduced=True, m=m)
    return theta, cand, plain


def toric_analysis(phi: PhaseVector) -> tuple[int, ToricTuple]:
    """Toric degree of ``[phi]`` and a tuple of that length realising it.

    Torsion-free phases come back over a saturated lattice basis with rational
    parts folded in; phases with torsion come back as a reduced tuple.
    """
    theta, cand, plain = _candidate(phi)
    if cand is None:
        return plain.r, plain
    _, tau = tuple_torsion(cand)
    if tau == 1:
        out = eliminate_rational_coefficient(cand)
        return out.r, out
    return cand.r, cand


def is_torsion_free(phi: PhaseVector) -> bool:
    _, cand, _ = _candidate(phi)
    return cand is None or tuple_torsion(cand)[1] == 1


@dataclass(frozen=True)
class TorsionReport:
    m: int
    q: int
    tau: int
    tuple: ToricTuple | None = None


def torsion(phi: PhaseVector) -> TorsionReport:
    """Order of the rational phase group modulo Z, through a reduced tuple."""
    _, cand, _ = _candidate(phi)
    if cand is None:
        return TorsionReport(1, 1, 1, None)
    q, tau = tuple_torsion(cand)
    if tau == 1:
        return TorsionReport(1, 1, 1, None)
    return TorsionReport(cand.m, q, tau, cand)


def eliminate_rational_coefficient(tup: ToricTuple) -> ToricTuple:
    """Drop the purely rational coefficients of a tuple whose phase is torsion-free.

    The rational remainder ``c = sum rat(alpha_k) theta_k`` is absorbed by
    solving ``N x ≡ c (mod Z^n)`` for the vectors ``N`` with irrational
    coefficients, using a Smith decomposition ``U N V = D``.
    """
    keep = [k for k, a in enumerate(tup.coefficients) if not a.is_rational()]
    N = [tup.vectors[k] for k in keep]
    c = [sum(a.rational_part * vec[i] for vec, a in zip(tup.vectors, tup.coefficients))
         for i in range(tup.n)]
    sym = [tup.coefficients[k].symbol_part() for k in keep]
    if rational_rank([[a for a in s.coeffs] for s in sym] or [[0]]) < len(keep):
        raise PreconditionError("coefficients are not rationally independent modulo Q")
    x = _solve_mod_integers([list(v) for v in N], c, tup.n)
    if x is None:
        raise PreconditionError("the rational coefficient cannot be eliminated: torsion > 1")
    coeffs = tuple(s + (xk % 1) for s, xk in zip(sym, x))
    return ToricTuple(tup.n, tup.basis, tuple(N), coeffs)


def _solve_mod_integers(vectors: list[list[int]], c: Sequence[Fraction], n: int):
    """Rational ``x`` with ``sum x_k vectors[k] - c in Z^n``, or None."""
    s = len(vectors)
    if s == 0:
        return [] if all(Fraction(v).denominator == 1 for v in c) else None
    Nmat = [[vectors[k][i] for k in range(s)] for i in range(n)]
    D, U, V = smith_form(Nmat)
    Uc = [sum(U[i][j] * Fraction(c[j]) for j in range(n)) for i in range(n)]
    rank = sum(1 for i in range(min(n, s)) if D[i][i])
    if rank < s:
        raise PreconditionError("tuple vectors are linearly dependent")
    if any(v.denominator != 1 for v in Uc[s:]):
        return None
    y = [Uc[i] / D[i][i] for i in range(s)]
    return [sum(V[k][i] * y[i] for i in range(s)) for k in range(s)]


def reduce_tuple(tup: ToricTuple, compatible_with: PhaseVector | None = None) -> ToricTuple:
    """Rewrite a tuple whose coefficients are rationally dependent with 1 in reduced form.

    A reduced tuple is returned unchanged.  With ``compatible_with`` the first
    vector is adjusted so coordinates with equal phases get equal entries.
    """
    if _is_reduced_shape(tup):
        out = tup if tup.reduced else ToricTuple(tup.n, tup.basis, tup.vectors, tup.coefficients,
                                                 True, _denominator_of(tup.coefficients[0]))
    else:
        out = _reduce(tup)
    if compatible_with is not None:
        out = make_compatible(out, compatible_with)
    return out


def _denominator_of(a: LinearForm) -> int:
    return a.rational_part.denominator


def _is_reduced_shape(tup: ToricTuple) -> bool:
    if tup.r == 0:
        return False
    a = tup.coefficients[0]
    if not a.is_rational() or a.rational_part.numerator != 1 or a.rational_part.denominator < 2:
        return False
    m = a.rational_part.denominator
    if math.gcd(m, gcd_all(tup.vectors[0])) != 1:
        return False
    if any(not b.symbol_part() == b for b in tup.coefficients[1:]):
        return False
    return rational_rank([list(b.coeffs) for b in tup.coefficients[1:]] or [[0]]) == tup.r - 1


def _reduce(tup: ToricTuple) -> ToricTuple:
    r = tup.r
    gamma = tup.symbol_matrix()
    S = len(tup.basis)
    if r == 0:
        raise PreconditionError("empty tuple")
    if rational_rank(gamma) == r:
        raise PreconditionError("input already torsion-free: coefficients are independent with 1")
    if rational_rank(gamma) < r - 1:
        raise PreconditionError("coefficients have more than one rational relation")
    # integer relation M with sum M_k alpha_k rational
    rel = integer_kernel([[gamma[k][s] * lcm_all(gamma[kk][s].denominator for kk in range(r))
                           for k in range(r)] for s in range(S)], r) if S else \
        [tuple(int(i == j) for j in range(r)) for i in range(r)]
    if len(rel) != 1:
        raise PreconditionError("coefficients have more than one rational relation")
    M = rel[0]
    # unimodular V with M V = (1, 0, ..., 0); new vectors Theta V, new coefficients V^{-1} alpha
    _, V = hermite_form([list(M)])
    new_vecs = [tuple(sum(tup.vectors[k][i] * V[k][c] for k in range(r)) for i in range(tup.n))
                for c in range(r)]
    # V^{-1} alpha: first entry is <M, alpha>; others solve by rows of V^{-1}
    Vinv = _unimodular_inverse(V)
    new_coeffs = []
    for c in range(r):
        acc = LinearForm.zero(tup.basis)
        for k in range(r):
            if Vinv[c][k]:
                acc = acc + tup.coefficients[k] * Vinv[c][k]
        new_coeffs.append(acc)
    if not new_coeffs[0].is_rational():
        raise AssertionError("first transformed coefficient should be rational")
    c = [sum(a.rational_part * v[i] for v, a in zip(new_vecs, new_coeffs)) for i in range(tup.n)]
    c = [v % 1 for v in c]
    if all(v == 0 for v in c):
        raise PreconditionError("input already torsion-free: rational part vanishes")
    m = lcm_all(v.denominator for v in c)
    eta = tuple(int(v * m) for v in c)
    tail = []
    tail_coeffs = []
    for v, a in zip(new_vecs[1:], new_coeffs[1:]):
        g = gcd_all(v)
        sign = 1 if next(x for x in v if x) > 0 else -1
        tail.append(tuple(sign * x // g for x in v))
        tail_coeffs.append(a.symbol_part() * (sign * g))
    out = ToricTuple(tup.n, tup.basis, (eta,) + tuple(tail),
                     (LinearForm.constant(tup.basis, Fraction(1, m)),) + tuple(tail_coeffs),
                     reduced=True, m=m)
    return out


def _unimodular_inverse(V: list[list[int]]) -> list[list[int]]:
    n = len(V)
    cols = []
    for c in range(n):
        e = [Fraction(int(i == c)) for i in range(n)]
        t = rational_coordinates([[V[i][k] for i in range(n)] for k in range(n)], e)
        cols.append([int(v) for v in t])
    return [[cols[c][k] for c in range(n)] for k in range(n)]


def normalize_gcd(vec: Sequence[int], coefficient: LinearForm) -> tuple[Vector, LinearForm]:
    """Replace ``alpha * theta`` by ``(d alpha) * (theta / d)`` with ``d = gcd(theta)``."""
    d = gcd_all(vec)
    if d == 0:
        raise PreconditionError("zero vector")
    return tuple(v // d for v in vec), coefficient * d


def make_compatible(tup: ToricTuple, phi: PhaseVector) -> ToricTuple:
    """Adjust ``eta_1`` so that coordinates with equal phases carry equal entries."""
    if not tup.reduced:
        return tup
    eta = list(tup.vectors[0])
    m = tup.m
    n = tup.n
    for j in range(n):
        for h in range(j):
            if phi[j] == phi[h] and eta[j] != eta[h]:
                diff = eta[j] - eta[h]
                if diff % m:
                    raise AssertionError("equal phases with incongruent first entries")
                eta[j] = eta[h]
    vecs = (tuple(eta),) + tup.vectors[1:]
    return ToricTuple(n, tup.basis, vecs, tup.coefficients, True, m)


def validate_tuple(phi: PhaseVector, tup: ToricTuple) -> list[str]:
    """Names of the tuple invariants that fail (empty when the tuple is valid)."""
    problems = []
    if tup.n != phi.n:
        return ["dimension"]
    if tup.r and tup.recombine() != phi:
        problems.append("recombination")
    if not tup.r and any(not e.is_zero() for e in phi):
        problems.append("recombination")
    if tup.r and rational_rank([list(v) for v in tup.vectors]) != tup.r:
        problems.append("vector_independence")
    gamma = tup.symbol_matrix()
    if tup.reduced:
        a = tup.coefficients[0]
        if a.as_form() != LinearForm.constant(tup.basis, Fraction(1, tup.m)):
            problems.append("first_coefficient")
        if math.gcd(tup.m, gcd_all(tup.vectors[0])) != 1:
            problems.append("first_vector_coprime")
        if any(b.rational_part for b in tup.coefficients[1:]):
            problems.append("tail_rational_part")
        if rational_rank(gamma[1:] or [[0]]) != tup.r - 1:
            problems.append("coefficient_independence")
    elif tup.r and rational_rank(gamma) != tup.r:
        problems.append("coefficient_independence")
    return problems
