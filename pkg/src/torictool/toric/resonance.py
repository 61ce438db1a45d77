"""Resonant multi-indices ``Res_j([phi]) = {Q in N^n : |Q| >= 2, <Q, phi> - phi_j in Z}``.

All resonance sets here share one shape: ``Q - e_j`` must lie in a lattice.
A :class:`ResonanceDescriptor` stores that lattice with the Hilbert basis of its
nonnegative part and the minimal elements of the shifted set, which together
describe the (usually infinite) set exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..errors import PreconditionError
from ..exact import PhaseVector, is_integral_combination
from ..lattice.monoid import (
    Lattice,
    affine_description,
    affine_span_members,
    grlex_key,
    monoid_combinations,
)
from ..lattice.normal_forms import rational_rank
from .tuples import ToricTuple, reduce_tuple, toric_analysis

Vector = tuple[int, ...]


@dataclass(frozen=True)
class ResonanceDescriptor:
    """Exact description of ``{Q in N^n : |Q| >= 2, Q - e_j in lattice}``.

    ``generators`` and ``minimal_solutions`` (a Hilbert basis and the minimal
    shifted points) are computed on first use; membership, emptiness and the
    witnesses used for classification do not need them.
    """

    n: int
    coordinate: int
    lattice: Lattice
    rows: tuple[Vector, ...]
    congruence: tuple[Vector, int] | None

    @cached_property
    def _affine(self):
        shift = [0] * self.n
        shift[self.coordinate] = 1
        return affine_description(self.lattice, shift)

    @property
    def generators(self) -> tuple[Vector, ...]:
        return self._affine.homogeneous

    @property
    def minimal_solutions(self) -> tuple[Vector, ...]:
        return self._affine.particular

    @cached_property
    def _span_members(self) -> tuple[Vector, ...]:
        return tuple(affine_span_members(self.lattice, self.coordinate))

    @property
    def equal_weight(self) -> tuple[int, ...]:
        """Coordinates ``h != j`` with ``e_h - e_j`` in the lattice (degree-1 resonances)."""
        j = self.coordinate
        out = []
        for h in range(self.n):
            if h == j:
                continue
            v = [0] * self.n
            v[h] += 1
            v[j] -= 1
            if self.lattice.contains(v):
                out.append(h)
        return tuple(out)

    def contains(self, Q: Sequence[int]) -> bool:
        if len(Q) != self.n or any(q < 0 for q in Q):
            raise PreconditionError("multi-index must be a nonnegative vector of length n")
        if sum(Q) < 2:
            return False
        x = list(Q)
        x[self.coordinate] -= 1
        return self.lattice.contains(x)

    def __contains__(self, Q) -> bool:
        return self.contains(Q)

    def is_empty(self) -> bool:
        """True when no multi-index of degree >= 2 qualifies."""
        return not self._span_members

    def enumerate(self, max_degree: int) -> list[Vector]:
        """Every member with ``|Q| <= max_degree``, graded-lex sorted."""
        out: set[Vector] = set()
        gens = list(self.generators)
        for p in self.minimal_solutions:
            if sum(p) > max_degree:
                continue
            for v in monoid_combinations(gens, max_degree - sum(p), self.n):
                q = tuple(a + b for a, b in zip(p, v))
                if sum(q) >= 2:
                    out.add(q)
        return sorted(out, key=grlex_key)

    def check_vectors(self) -> list[Vector]:
        """Differences ``x = Q - e_j`` of finitely many members whose integer span contains
        ``Q - e_j`` for every member ``Q``.  An additive condition holding on these holds on
        the whole set."""
        return list(self._span_members)

    def witnesses(self) -> list[Vector]:
        """The members ``Q`` behind check_vectors."""
        j = self.coordinate
        out = []
        for x in self._span_members:
            q = list(x)
            q[j] += 1
            out.append(tuple(q))
        return sorted(out, key=grlex_key)


def additive_descriptor(n: int, j: int, rows: Sequence[Sequence[int]],
                        congruence: tuple[Sequence[int], int] | None = None) -> ResonanceDescriptor:
    """Descriptor of ``{Q : |Q| >= 2, <Q - e_j, v> = 0 for v in rows [, <Q - e_j, eta> in mZ]}``."""
    if not 0 <= j < n:
        raise PreconditionError(f"coordinate {j} out of range")
    L = Lattice.kernel([list(r) for r in rows], n)
    cong = None
    if congruence is not None:
        eta, m = congruence
        L = L.with_congruence(eta, m)
        cong = (tuple(eta), int(m))
    return ResonanceDescriptor(n, j, L, tuple(tuple(r) for r in rows), cong)


def phase_lattice_rows(tup: ToricTuple) -> tuple[list[Vector], tuple[Vector, int] | None]:
    """Rows and congruence whose lattice is ``{x in Z^n : <x, phi> in Z}`` for a torsion-free
    or reduced tuple."""
    if tup.reduced:
        return list(tup.vectors[1:]), (tup.vectors[0], tup.m)
    # independent symbol parts make the coefficients independent with 1
    if tup.r and rational_rank(tup.symbol_matrix()) < tup.r:
        raise PreconditionError("tuple must be torsion-free with independent coefficients or reduced")
    return list(tup.vectors), None


def resonance_descriptor(phi: PhaseVector, j: int, tup: ToricTuple | None = None) -> ResonanceDescriptor:
    """Certified description of ``Res_j([phi])`` (``j`` is 0-based)."""
    tup = _usable_tuple(phi, tup)
    rows, cong = phase_lattice_rows(tup)
    return additive_descriptor(phi.n, j, rows, cong)


def _usable_tuple(phi: PhaseVector, tup: ToricTuple | None) -> ToricTuple:
    if tup is None:
        return toric_analysis(phi)[1]
    if tup.n != phi.n:
        raise PreconditionError("tuple dimension differs from the phase vector")
    if tup.recombine() != phi:
        raise PreconditionError("tuple does not recombine to the phase vector")
    if tup.reduced or not tup.r or rational_rank(tup.symbol_matrix()) == tup.r:
        return tup
    if any(a.is_rational() for a in tup.coefficients):
        return reduce_tuple(tup)
    return toric_analysis(phi)[1]


def enumerate_resonances(phi: PhaseVector, j: int, max_degree: int,
                         tup: ToricTuple | None = None, check: bool = True) -> list[Vector]:
    """``Res_j([phi])`` up to total degree ``max_degree``, graded-lex sorted.

    With ``check`` every returned multi-index is confirmed with the direct
    integrality test.
    """
    desc = resonance_descriptor(phi, j, tup)
    out = desc.enumerate(max_degree)
    if check:
        for Q in out:
            if not is_integral_combination(phi, Q, j):
                raise AssertionError(f"descriptor produced non-resonant {Q}")
    return out


def theta_resonant(Q: Sequence[int], j: int, vectors: Sequence[Sequence[int]]) -> bool:
    """``Q in Res_j^+(Theta)``: ``<Q, theta> = theta_j`` for every vector (additive resonance)."""
    return all(sum(q * t for q, t in zip(Q, th)) == th[j] for th in vectors)


def theta_descriptor(n: int, j: int, vectors: Sequence[Sequence[int]]) -> ResonanceDescriptor:
    """Descriptor of ``Res_j^+`` for a family of integer vectors."""
    return additive_descriptor(n, j, vectors)


def brute_force_resonances(phi: PhaseVector, j: int, max_degree: int) -> list[Vector]:
    """Direct scan of all multi-indices of degree 2..max_degree (oracle for small cases)."""
    out = []
    for Q in _multi_indices(phi.n, max_degree):
        if sum(Q) >= 2 and is_integral_combination(phi, Q, j):
            out.append(Q)
    return sorted(out, key=grlex_key)


def _multi_indices(n: int, max_degree: int):
    def rec(i, left):
        if i == n - 1:
            for v in range(left + 1):
                yield (v,)
            return
        for v in range(left + 1):
            for rest in rec(i + 1, left - v):
                yield (v,) + rest
    yield from rec(0, max_degree)
