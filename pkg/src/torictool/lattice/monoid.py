"""Lattices in Z^N and the monoids they cut out of N^N.

The Hilbert basis of ``L ∩ N^N`` is computed from the extreme rays of the cone
``span(L) ∩ R^N_{>=0}``: every element of the basis lies in the half-open
parallelepiped spanned by some linearly independent set of ray generators, so
enumerating those parallelepipeds (through a Smith decomposition of the ray
coordinates) and discarding reducible points gives the basis exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from ..errors import PreconditionError
from ..exact import lcm_all
from .normal_forms import (
    integer_kernel,
    integer_scale,
    matvec,
    rational_rank,
    row_hermite_basis,
    smith_form,
    solve_integer_linear,
    transpose,
)

Vector = tuple[int, ...]

# refuse parallelepipeds with more lattice points than this
MAX_PARALLELEPIPED = 2_000_000


def grlex_key(Q: Sequence[int]):
    """Graded lexicographic order: total degree first, then larger leading exponents first."""
    return (sum(Q), tuple(-q for q in Q))


def _leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^dim held as a canonical echelon basis."""

    dim: int
    basis: tuple[Vector, ...]
    _pivots: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        pivots = []
        for b in self.basis:
            if len(b) != self.dim:
                raise PreconditionError("basis vector of the wrong length")
            pivots.append(next(i for i, v in enumerate(b) if v))
        object.__setattr__(self, "_pivots", tuple(pivots))

    @classmethod
    def from_generators(cls, generators: Iterable[Sequence[int]], dim: int) -> "Lattice":
        gens = [list(g) for g in generators]
        return cls(dim, tuple(row_hermite_basis(gens, dim)) if gens else ())

    @classmethod
    def kernel(cls, equations: Sequence[Sequence[int]], dim: int) -> "Lattice":
        """``{x in Z^dim : <e, x> = 0 for every row e}``."""
        return cls(dim, tuple(integer_kernel([list(e) for e in equations], dim)))

    @classmethod
    def full(cls, dim: int) -> "Lattice":
        return cls(dim, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def with_congruence(self, v: Sequence[int], m: int) -> "Lattice":
        """Sublattice ``{x in L : <v, x> ≡ 0 (mod m)}``."""
        if m <= 0:
            raise PreconditionError("modulus must be positive")
        if not self.basis:
            return self
        w = [sum(a * b for a, b in zip(bvec, v)) for bvec in self.basis]
        sols = integer_kernel([w + [m]], len(w) + 1)
        gens = [[sum(t[i] * self.basis[i][c] for i in range(len(w))) for c in range(self.dim)]
                for t in sols]
        return Lattice.from_generators(gens, self.dim)

    def coordinates(self, x: Sequence[int]) -> list[Fraction] | None:
        """Rational coordinates of ``x`` in the basis, or None if ``x`` is outside the span."""
        t: list[Fraction] = []
        for k, p in enumerate(self._pivots):
            partial = sum(t[c] * self.basis[c][p] for c in range(k))
            t.append((Fraction(x[p]) - partial) / self.basis[k][p])
        recon = [sum(t[k] * self.basis[k][c] for k in range(len(t))) for c in range(self.dim)]
        if any(a != b for a, b in zip(recon, x)):
            return None
        return t

    def contains(self, x: Sequence[int]) -> bool:
        if len(x) != self.dim:
            raise PreconditionError("vector of the wrong length")
        t = self.coordinates(x)
        return t is not None and all(v.denominator == 1 for v in t)

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def equations(self) -> list[Vector]:
        """Integer basis of the vectors orthogonal to the lattice."""
        if not self.basis:
            return [tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim)]
        return integer_kernel([list(b) for b in self.basis], self.dim)

    def points(self, max_degree: int) -> Iterator[Vector]:
        """All of ``L ∩ N^dim`` with total degree at most ``max_degree``."""
        yield from _echelon_points(self.basis, self._pivots, self.dim, max_degree)

    def primitive_multiple(self, v: Sequence[int]) -> Vector:
        """Smallest positive multiple of ``v`` lying in the lattice."""
        t = self.coordinates(v)
        if t is None:
            raise PreconditionError("vector is not in the span of the lattice")
        k = lcm_all(c.denominator for c in t)
        return tuple(k * a for a in v)


def _echelon_points(basis, pivots, dim, bound):
    k = len(basis)
    if k == 0:
        yield (0,) * dim
        return
    ends = list(pivots[1:]) + [dim]

    def rec(level, x, used):
        if level == k:
            yield tuple(x)
            return
        p = pivots[level]
        piv = basis[level][p]
        # x[p] = base + t * piv must lie in [0, bound - used]
        base = x[p]
        lo = -(base // piv)  # ceil(-base / piv)
        hi = (bound - used - base) // piv
        for t in range(lo, hi + 1):
            y = [a + t * b for a, b in zip(x, basis[level])] if t else list(x)
            seg = y[p:ends[level]]
            if any(v < 0 for v in seg):
                continue
            s = used + sum(seg)
            if s > bound:
                continue
            yield from rec(level + 1, y, s)

    yield from rec(0, [0] * dim, 0)


def extreme_rays(lattice: Lattice) -> list[Vector]:
    """Primitive lattice generators of the extreme rays of ``span(L) ∩ R^N_{>=0}``."""
    N = lattice.dim
    if lattice.rank == 0:
        return []
    E = [list(e) for e in lattice.equations()]
    rays: list[Vector] = []
    supports: list[frozenset] = []
    for size in range(1, N + 1):
        for S in combinations(range(N), size):
            fs = frozenset(S)
            if any(s <= fs for s in supports):
                continue
            sub = [[e[c] for c in S] for e in E]
            ker = integer_kernel(sub, size) if E else [tuple(int(i == j) for j in range(size)) for i in range(size)]
            if len(ker) != 1:
                continue
            v = ker[0]
            if any(a == 0 for a in v):
                continue
            if not (all(a > 0 for a in v) or all(a < 0 for a in v)):
                continue
            full = [0] * N
            for c, a in zip(S, v):
                full[c] = abs(a)
            rays.append(lattice.primitive_multiple(integer_scale(full)))
            supports.append(fs)
    return sorted(rays, key=grlex_key)


def _parallelepiped_points(rays: Sequence[Vector], coords: list[list[int]]) -> Iterator[Vector]:
    """Lattice points of the half-open parallelepiped spanned by ``rays``.

    ``coords`` are the integer coordinates of the rays in a basis of the
    lattice they span; the points are ``frac(a D^-1 U) · rays`` for the Smith
    decomposition ``U T V = D``.
    """
    d = len(rays)
    D, U, _ = smith_form(coords)
    diag = [D[i][i] for i in range(d)]
    total = 1
    for v in diag:
        total *= v
    if total > MAX_PARALLELEPIPED:
        raise PreconditionError(f"cone too wide for exact Hilbert basis computation ({total} points)")

    def rec(i, a):
        if i == d:
            yield a
            return
        for v in range(diag[i]):
            yield from rec(i + 1, a + [v])

    N = len(rays[0])
    for a in rec(0, []):
        lam = [sum(Fraction(a[i], diag[i]) * U[i][k] for i in range(d)) for k in range(d)]
        lam = [x - (x.numerator // x.denominator) for x in lam]
        pt = [sum(lam[k] * rays[k][c] for k in range(d)) for c in range(N)]
        yield tuple(int(v) for v in pt)


def hilbert_basis_of_lattice(lattice: Lattice) -> list[Vector]:
    """Minimal generating set of the monoid ``L ∩ N^N``, sorted in graded-lex order."""
    rays = extreme_rays(lattice)
    if not rays:
        return []
    N = lattice.dim
    d = rational_rank(rays)
    if d == lattice.rank:
        cone_lattice = lattice
    else:
        F = integer_kernel([list(r) for r in rays], N)
        BT = transpose([list(b) for b in lattice.basis])
        M = [[sum(f[c] * BT[c][k] for c in range(N)) for k in range(lattice.rank)] for f in F]
        ts = integer_kernel(M, lattice.rank)
        gens = [[sum(t[k] * lattice.basis[k][c] for k in range(lattice.rank)) for c in range(N)] for t in ts]
        cone_lattice = Lattice.from_generators(gens, N)
    ray_coords = []
    for r in rays:
        t = cone_lattice.coordinates(r)
        ray_coords.append([int(v) for v in t])
    candidates: set[Vector] = set(rays)
    for subset in combinations(range(len(rays)), d):
        T = [ray_coords[i] for i in subset]
        if rational_rank(T) < d:
            continue
        for pt in _parallelepiped_points([rays[i] for i in subset], T):
            if any(pt):
                candidates.add(pt)
    return _irreducible(candidates)


def _irreducible(candidates: Iterable[Vector]) -> list[Vector]:
    kept: list[Vector] = []
    for x in sorted(candidates, key=grlex_key):
        if not any(_leq(y, x) for y in kept):
            kept.append(x)
    return kept


@dataclass(frozen=True)
class AffineMonoidDescription:
    """``{x in N^N : x - shift in L}`` as ``particular + N·homogeneous``.

    ``homogeneous`` is the Hilbert basis of ``L ∩ N^N`` and ``particular`` are
    the componentwise-minimal elements of the shifted set.
    """

    dim: int
    homogeneous: tuple[Vector, ...]
    particular: tuple[Vector, ...]
    lattice: Lattice

    def elements(self, max_degree: int) -> list[Vector]:
        """All elements of the set of total degree at most ``max_degree``, graded-lex sorted."""
        out: set[Vector] = set()
        gens = sorted(g for g in self.homogeneous)
        for p in self.particular:
            if sum(p) > max_degree:
                continue
            for v in monoid_combinations(gens, max_degree - sum(p), self.dim):
                out.add(tuple(a + b for a, b in zip(p, v)))
        return sorted(out, key=grlex_key)


def monoid_combinations(generators: Sequence[Vector], max_degree: int, dim: int | None = None) -> set[Vector]:
    """All N-combinations of ``generators`` with total degree at most ``max_degree``."""
    if dim is None:
        dim = len(generators[0]) if generators else 0
    seen: set[Vector] = {(0,) * dim}
    frontier = [(0,) * dim]
    degrees = [sum(g) for g in generators]
    while frontier:
        nxt = []
        for x in frontier:
            dx = sum(x)
            for g, dg in zip(generators, degrees):
                if dx + dg > max_degree or dg == 0:
                    continue
                y = tuple(a + b for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def affine_description(lattice: Lattice, shift: Sequence[int]) -> AffineMonoidDescription:
    """Describe ``{x in N^N : x - shift in L}`` through one homogenized Hilbert basis."""
    N = lattice.dim
    gens = [list(b) + [0] for b in lattice.basis] + [list(shift) + [1]]
    hom = Lattice.from_generators(gens, N + 1)
    basis = hilbert_basis_of_lattice(hom)
    homogeneous = tuple(v[:N] for v in basis if v[N] == 0)
    particular = tuple(v[:N] for v in basis if v[N] == 1)
    return AffineMonoidDescription(N, homogeneous, particular, lattice)


def hilbert_basis(equations: Sequence[Sequence[int]], dim: int,
                  congruences: Sequence[tuple[Sequence[int], int]] = ()) -> AffineMonoidDescription:
    """Hilbert basis of ``{x in N^dim : E x = 0, <v, x> ≡ 0 mod m for each (v, m)}``."""
    L = Lattice.kernel(equations, dim)
    for v, m in congruences:
        L = L.with_congruence(v, m)
    return AffineMonoidDescription(dim, tuple(hilbert_basis_of_lattice(L)), ((0,) * dim,), L)


def minimal_inhomogeneous(equations: Sequence[Sequence[int]], rhs: Sequence[int],
                          dim: int) -> AffineMonoidDescription:
    """Minimal solutions of ``E x = b`` over N together with the homogeneous Hilbert basis."""
    if len(rhs) != len(equations):
        raise PreconditionError("right-hand side has the wrong length")
    rows = [list(e) + [-b] for e, b in zip(equations, rhs)]
    hom = Lattice.kernel(rows, dim + 1)
    basis = hilbert_basis_of_lattice(hom)
    L = Lattice.kernel(equations, dim)
    return AffineMonoidDescription(
        dim,
        tuple(v[:dim] for v in basis if v[dim] == 0),
        tuple(v[:dim] for v in basis if v[dim] == 1),
        L,
    )


def _zero_on(lattice: Lattice, coords: Sequence[int]) -> list[Vector]:
    """Basis of the sublattice of ``lattice`` vanishing on ``coords``."""
    if not coords:
        return list(lattice.basis)
    rows = [[b[i] for b in lattice.basis] for i in coords]
    out = []
    for c in integer_kernel(rows, lattice.rank):
        out.append(tuple(sum(ck * b[t] for ck, b in zip(c, lattice.basis)) for t in range(lattice.dim)))
    return out


def _weighted_compositions(u: Sequence[int], total: int) -> Iterator[list[int]]:
    """All ``z in N^k`` with ``<u, z> = total`` for a strictly positive ``u``."""
    k = len(u)

    def rec(i, left):
        if i == k - 1:
            if left % u[i] == 0:
                yield [left // u[i]]
            return
        for v in range(left // u[i] + 1):
            for rest in rec(i + 1, left - v * u[i]):
                yield [v] + rest

    if k:
        yield from rec(0, total)


def affine_span_members(lattice: Lattice, j: int) -> list[Vector]:
    """Finitely many elements of ``T = {x in L : x >= -e_j, sum(x) >= 1}`` spanning the same group.

    With ``C = span(L) ∩ R^N_{>=0}`` and ``W`` the union of the supports of its
    extreme rays, the coordinates outside ``W`` take finitely many values on
    ``T``: there is a ``u > 0`` orthogonal to the projection of ``L`` off ``W``,
    so ``<u, y + e_j> = u_j``.  Each admissible projection ``y`` is lifted to
    ``L``; adding a multiple of ``w = sum of rays`` moves the lift into ``T``.
    No Hilbert basis is needed, so large congruence moduli stay cheap.
    """
    n = lattice.dim
    if not 0 <= j < n:
        raise PreconditionError(f"coordinate {j} out of range")
    rays = extreme_rays(lattice)
    W = {i for r in rays for i, v in enumerate(r) if v}
    off = [i for i in range(n) if i not in W]
    w = [sum(r[i] for r in rays) for i in range(n)]
    lifts: list[Vector] = [(0,) * n]
    if j in off:
        proj = [[b[i] for i in off] for b in lattice.basis]
        k = len(off)
        perp = integer_kernel(proj, k) if proj else [tuple(int(a == b) for b in range(k)) for a in range(k)]
        u = [sum(r[i] for r in extreme_rays(Lattice.from_generators(perp, k))) for i in range(k)]
        if any(v <= 0 for v in u):
            raise AssertionError("no positive functional vanishes on the projected lattice")
        A = [[b[i] for b in lattice.basis] for i in off]
        jj = off.index(j)
        for z in _weighted_compositions(u, u[jj]):
            y = list(z)
            y[jj] -= 1
            sol = solve_integer_linear(A, y, lattice.rank) if lattice.rank else None
            if sol is None:
                continue
            c = sol[0]
            lifts.append(tuple(sum(ck * b[t] for ck, b in zip(c, lattice.basis)) for t in range(n)))
    if not rays:
        # T is finite: the lifts are its only points
        members = {x for x in lifts if sum(x) >= 1}
        return sorted(members, key=grlex_key)
    members = set()
    for x in set(lifts) | set(_zero_on(lattice, off)):
        need = [1]
        for i in W:
            low = -1 if i == j else 0
            need.append(-((x[i] - low) // w[i]))
        need.append(-((sum(x) - 1) // sum(w)))
        k = max(need)
        members.add(tuple(a + k * b for a, b in zip(x, w)))
    return sorted(members, key=grlex_key)
