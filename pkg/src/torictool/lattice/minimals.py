"""Support-minimal elements, cominimal elements and the decomposition they give.

For ``A+ = L ∩ N^N`` an element is *minimal* when no other nonzero element has
strictly smaller support and it is the lex-least element of its support.  These
are exactly the primitive lattice points on the extreme rays of the cone.  A
nonzero element is *cominimal* when subtracting any minimal element leaves
``N^N``.  Every element is then a nonnegative combination of minimals plus at
most one cominimal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ..errors import PreconditionError
from ..exact import gcd_all, lcm_all
from .monoid import Lattice, Vector, extreme_rays, grlex_key
from .normal_forms import determinant, rational_rank


@dataclass(frozen=True)
class PaperMinimals:
    lattice: Lattice
    elements: tuple[Vector, ...]

    @property
    def supports(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(i for i, v in enumerate(e) if v) for e in self.elements)


@dataclass(frozen=True)
class Cominimals:
    elements: tuple[Vector, ...]
    bound: int
    exact_bound: int
    certified: bool


def _lattice_of(source, dim: int | None = None) -> Lattice:
    if isinstance(source, Lattice):
        return source
    if dim is None:
        raise PreconditionError("dimension is needed when passing equations")
    return Lattice.kernel(source, dim)


def paper_minimal_elements(source, dim: int | None = None) -> PaperMinimals:
    """Support-minimal elements of ``L ∩ N^N`` (``source`` is a Lattice or equation rows)."""
    L = _lattice_of(source, dim)
    return PaperMinimals(L, tuple(extreme_rays(L)))


def red(x: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries."""
    g = gcd_all(x)
    if g == 0:
        raise PreconditionError("cannot reduce the zero vector")
    return tuple(v // g for v in x)


def reduce_pair(A: Sequence[int], B: Sequence[int]) -> Vector:
    """``A/B = red(qA - pB)`` where ``p/q = min over supp B of a_j / b_j``.

    The result is a nonnegative vector whose support misses at least one index
    of ``supp B``; it is the zero vector when ``A`` is a multiple of ``B``.
    """
    if len(A) != len(B):
        raise PreconditionError("vectors of different lengths")
    if any(v < 0 for v in A) or any(v < 0 for v in B):
        raise PreconditionError("reduce_pair expects nonnegative vectors")
    if not any(B):
        raise PreconditionError("B must be nonzero")
    ratio = min(Fraction(a, b) for a, b in zip(A, B) if b)
    p, q = ratio.numerator, ratio.denominator
    out = [q * a - p * b for a, b in zip(A, B)]
    if not any(out):
        return tuple(out)
    return red(out)


def delta_bound(minimals: Sequence[Sequence[int]]) -> int:
    """lcm of the nonzero |det| over all rank-sized square minors of the matrix of minimals."""
    if not minimals:
        return 1
    cols = [list(m) for m in minimals]
    n = len(cols[0])
    rho = rational_rank(cols)
    values = []
    for rows in combinations(range(n), rho):
        for cs in combinations(range(len(cols)), rho):
            d = determinant([[cols[c][r] for c in cs] for r in rows])
            if d:
                values.append(abs(d))
    return lcm_all(values)


def cominimal_exact_bound(minimals: Sequence[Sequence[int]]) -> int:
    """Every cominimal has total degree strictly below the sum of the d largest minimal degrees.

    A cominimal ``C`` lies in a simplicial cone ``sum mu_k M_k`` over at most d
    independent minimals; if some ``mu_k >= 1`` then ``C - M_k`` stays in the
    cone, so ``C`` would dominate ``M_k``.  Hence all ``mu_k < 1``.
    """
    if not minimals:
        return 0
    d = rational_rank([list(m) for m in minimals])
    degs = sorted((sum(m) for m in minimals), reverse=True)
    return sum(degs[:d]) - 1


def default_cominimal_bound(minimals: Sequence[Sequence[int]], dim: int) -> int:
    """The coarse bound ``(n+1) · delta · max|M|``."""
    if not minimals:
        return 0
    return (dim + 1) * delta_bound(minimals) * max(sum(m) for m in minimals)


def cominimal_elements(source, minimals: Sequence[Sequence[int]] | None = None,
                       bound: int | None = None, dim: int | None = None) -> Cominimals:
    """Enumerate cominimals up to total degree ``bound``.

    Without an explicit bound the exact cone bound is used, which makes the
    result complete; ``certified`` reports whether the bound used reaches it.
    """
    L = _lattice_of(source, dim)
    mins = list(minimals) if minimals is not None else list(extreme_rays(L))
    exact = cominimal_exact_bound(mins)
    if bound is None:
        bound = exact
    found = []
    for x in L.points(bound):
        if not any(x):
            continue
        if any(all(a >= b for a, b in zip(x, m)) for m in mins):
            continue
        found.append(x)
    return Cominimals(tuple(sorted(found, key=grlex_key)), bound, exact, bound >= exact)


def decompose(x: Sequence[int], minimals: Sequence[Sequence[int]],
              cominimals: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], int | None]:
    """Write ``x = sum l_i M_i + C`` with ``C`` cominimal or absent.

    Returns the multiplicities and the index of ``C`` in ``cominimals`` (None for C = 0).
    """
    rest = list(x)
    if any(v < 0 for v in rest):
        raise PreconditionError("decompose expects a nonnegative vector")
    counts = [0] * len(minimals)
    progress = True
    while any(rest) and progress:
        progress = False
        for i, m in enumerate(minimals):
            if all(a >= b for a, b in zip(rest, m)):
                k = min(a // b for a, b in zip(rest, m) if b)
                counts[i] += k
                rest = [a - k * b for a, b in zip(rest, m)]
                progress = True
    if not any(rest):
        return tuple(counts), None
    rest_t = tuple(rest)
    for idx, c in enumerate(cominimals):
        if tuple(c) == rest_t:
            return tuple(counts), idx
    raise PreconditionError(f"remainder {rest_t} is neither zero nor a listed cominimal")


def is_decomposition(x, minimals, cominimals, counts, index) -> bool:
    total = [0] * len(x)
    for k, m in zip(counts, minimals):
        total = [a + k * b for a, b in zip(total, m)]
    if index is not None:
        total = [a + b for a, b in zip(total, cominimals[index])]
    return tuple(total) == tuple(x) and all(k >= 0 for k in counts)


__all__ = [
    "Cominimals", "PaperMinimals", "cominimal_elements", "cominimal_exact_bound",
    "decompose", "default_cominimal_bound", "delta_bound", "is_decomposition",
    "paper_minimal_elements", "red", "reduce_pair",
]

