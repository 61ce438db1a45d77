"""Truncated polynomial maps C^n -> C^n ("jets") over exact or big-float coefficients.

A jet component is a dict from exponent tuples to coefficients.  Exact jets
use :class:`GaussianRational`; numeric jets use mpmath complex numbers at a
fixed binary precision.
"""
from __future__ import annotations

from contextlib import nullcontext
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import mpmath

from ..errors import PreconditionError
from ..exact import GaussianRational, PhaseVector, precision, to_mpc
from ..exact import symbol_values as numeric_symbols

Exponent = tuple[int, ...]
Poly = dict


@dataclass(frozen=True)
class Field:
    """Coefficient field: exact Gaussian rationals (``bits=None``) or mpmath complexes."""

    bits: int | None = None

    @property
    def exact(self) -> bool:
        return self.bits is None

    def context(self):
        return nullcontext() if self.bits is None else precision(self.bits)

    def convert(self, x):
        if self.bits is None:
            if isinstance(x, GaussianRational):
                return x
            if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
                return GaussianRational(x)
            raise PreconditionError(f"{x!r} is not an exact Gaussian rational")
        with self.context():
            return +(to_mpc(x) if isinstance(x, (GaussianRational, Fraction)) else mpmath.mpc(x))

    @property
    def zero(self):
        return GaussianRational(0) if self.bits is None else mpmath.mpc(0)

    @property
    def one(self):
        return GaussianRational(1) if self.bits is None else mpmath.mpc(1)

    def magnitude(self, x):
        """|x| as an mpmath real (exact values are converted at 256 bits)."""
        if self.bits is None:
            with precision(256):
                return abs(x)
        with self.context():
            return abs(x)


EXACT = Field(None)


# polynomial helpers -----------------------------------------------------------

def unit(n: int, i: int) -> Exponent:
    return tuple(int(k == i) for k in range(n))


def degree(e: Exponent) -> int:
    return sum(e)


def padd(a: Mapping, b: Mapping, scale=None) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        c = c if scale is None else c * scale
        s = c if v is None else v + c
        if s == 0:
            out.pop(e, None)
        else:
            out[e] = s
    return out


def pscale(a: Mapping, k) -> Poly:
    out = {}
    for e, c in a.items():
        v = c * k
        if v != 0:
            out[e] = v
    return out


def pmul(a: Mapping, b: Mapping, max_degree: int) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb in b.items():
            if da + sum(eb) > max_degree:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e)
            s = ca * cb if v is None else v + ca * cb
            out[e] = s
    return {e: c for e, c in out.items() if c != 0}


def ptruncate(a: Mapping, max_degree: int) -> Poly:
    return {e: c for e, c in a.items() if sum(e) <= max_degree}


def phomogeneous(a: Mapping, k: int) -> Poly:
    return {e: c for e, c in a.items() if sum(e) == k}


def pderivative(a: Mapping, i: int) -> Poly:
    out = {}
    for e, c in a.items():
        if e[i]:
            f = list(e)
            f[i] -= 1
            out[tuple(f)] = c * e[i]
    return out


def pcompose(p: Mapping, gs: Sequence[Mapping], max_degree: int, one) -> Poly:
    """``p(g_1, ..., g_n)`` truncated; the ``g_i`` should have no constant term."""
    n = len(gs)
    cache: dict[tuple[int, int], Poly] = {}

    def power(i, k):
        if k == 0:
            return {(0,) * n: one}
        key = (i, k)
        if key not in cache:
            cache[key] = pmul(power(i, k - 1), gs[i], max_degree)
        return cache[key]

    out: Poly = {}
    for e, c in p.items():
        term: Poly = {(0,) * n: c}
        for i, k in enumerate(e):
            if k:
                term = pmul(term, power(i, k), max_degree)
                if not term:
                    break
        out = padd(out, term)
    return out


def exponents_of_degree(n: int, k: int) -> list[Exponent]:
    """All exponents of total degree k, graded-lex (larger leading exponents first)."""
    if n == 1:
        return [(k,)]
    out = []
    for first in range(k, -1, -1):
        for rest in exponents_of_degree(n - 1, k - first):
            out.append((first,) + rest)
    return out


# jets -------------------------------------------------------------------------

@dataclass(frozen=True)
class JetMap:
    """Germ of a holomorphic map fixing 0, truncated at ``degree``.

    ``phases`` (optional) ties the linear diagonal to exact phases:
    ``lambda_j = exp(2 pi i phases_j)``; resonance decisions then use the
    phases instead of comparing floating values.
    """

    n: int
    degree: int
    components: tuple[Mapping[Exponent, object], ...]
    field: Field = EXACT
    phases: PhaseVector | None = None
    symbol_values: tuple[tuple[str, object], ...] | None = None

    def __post_init__(self):
        if self.n < 1 or self.degree < 1:
            raise PreconditionError("dimension and degree must be positive")
        comps = []
        if len(self.components) != self.n:
            raise PreconditionError("one component per coordinate is required")
        with self.field.context():
            for comp in self.components:
                clean = {}
                for e, c in comp.items():
                    e = tuple(int(v) for v in e)
                    if len(e) != self.n or any(v < 0 for v in e):
                        raise PreconditionError(f"bad exponent {e}")
                    if sum(e) == 0:
                        raise PreconditionError("jets must fix the origin (no constant terms)")
                    if sum(e) > self.degree:
                        continue
                    c = self.field.convert(c)
                    if c != 0:
                        clean[e] = c
                comps.append(clean)
        object.__setattr__(self, "components", tuple(comps))
        if self.phases is not None and self.phases.n != self.n:
            raise PreconditionError("phase vector has the wrong dimension")

    def like(self, components, **changes) -> "JetMap":
        kw = dict(n=self.n, degree=self.degree, field=self.field, phases=self.phases,
                  symbol_values=self.symbol_values)
        kw.update(changes)
        return JetMap(components=tuple(components), **kw)

    @classmethod
    def identity(cls, n: int, degree: int, field: Field = EXACT, **kw) -> "JetMap":
        return cls(n, degree, tuple({unit(n, i): field.one} for i in range(n)), field, **kw)

    @classmethod
    def from_jordan(cls, lambdas: Sequence, eps: Sequence[int], terms: Mapping[tuple[int, Exponent], object],
                    degree: int, field: Field = EXACT, **kw) -> "JetMap":
        """``f_j = lambda_j z_j + eps_j z_{j-1} + sum of terms[(j, Q)] z^Q`` (0-based j)."""
        n = len(lambdas)
        comps = [dict() for _ in range(n)]
        with field.context():
            for j, lam in enumerate(lambdas):
                comps[j][unit(n, j)] = field.convert(lam)
                if j and eps[j]:
                    comps[j][unit(n, j - 1)] = field.one * eps[j]
            for (j, Q), c in terms.items():
                if sum(Q) < 2:
                    raise PreconditionError("nonlinear terms must have degree >= 2")
                comps[j][tuple(Q)] = field.convert(c)
        return cls(n, degree, tuple(comps), field, **kw)

    def linear_matrix(self) -> list[list]:
        """``L[i][h]`` = coefficient of ``z_h`` in component ``i``."""
        zero = self.field.zero
        return [[comp.get(unit(self.n, h), zero) for h in range(self.n)] for comp in self.components]

    def jordan_data(self) -> tuple[list, list[int]]:
        """``(lambdas, eps)`` when the linear part is in lower Jordan form, else raise."""
        L = self.linear_matrix()
        lambdas = [L[i][i] for i in range(self.n)]
        eps = [0] * self.n
        for i in range(self.n):
            for h in range(self.n):
                if h == i:
                    continue
                v = L[i][h]
                if v == 0:
                    continue
                if h != i - 1 or v != 1:
                    raise PreconditionError("linear part is not in Jordan normal form")
                eps[i] = 1
        for i in range(self.n):
            if lambdas[i] == 0:
                raise PreconditionError("linear part must be invertible")
            if eps[i] and not self._same_eigenvalue(i, i - 1, lambdas):
                raise PreconditionError("Jordan coupling between different eigenvalues")
        return lambdas, eps

    def _same_eigenvalue(self, i: int, h: int, lambdas) -> bool:
        if self.phases is not None:
            return self.phases[i] == self.phases[h]
        return lambdas[i] == lambdas[h]

    def max_coefficient(self):
        with self.field.context():
            vals = [self.field.magnitude(c) for comp in self.components for c in comp.values()]
            return max(vals) if vals else mpmath.mpf(0)

    def terms(self) -> list[tuple[int, Exponent, object]]:
        """All stored (coordinate, exponent, coefficient) triples in a deterministic order."""
        out = []
        for j, comp in enumerate(self.components):
            for e in sorted(comp, key=lambda e: (sum(e), tuple(-v for v in e))):
                out.append((j, e, comp[e]))
        return out

    def to_field(self, field: Field) -> "JetMap":
        with field.context():
            comps = [{e: field.convert(c) for e, c in comp.items()} for comp in self.components]
        return self.like(comps, field=field)


def compose(f: JetMap, g: JetMap) -> JetMap:
    """``f ∘ g`` truncated at the common degree."""
    if f.n != g.n or f.field != g.field:
        raise PreconditionError("jets of different shapes")
    D = min(f.degree, g.degree)
    with f.field.context():
        comps = [pcompose(c, g.components, D, f.field.one) for c in f.components]
    phases = f.phases if f.phases == g.phases else None
    return f.like(comps, degree=D, phases=phases)


def difference(f: JetMap, g: JetMap) -> list[Poly]:
    with f.field.context():
        return [padd(a, b, scale=-1) for a, b in zip(f.components, g.components)]


def max_abs(polys: Iterable[Mapping], field: Field):
    with field.context() if field.bits else precision(256):
        vals = [abs(to_mpc(c)) if field.exact else abs(c) for p in polys for c in p.values()]
        return max(vals) if vals else mpmath.mpf(0)


def eigenvalues(f: JetMap) -> list:
    """Diagonal of the linear part, computed from phases when the jet is phase-linked."""
    if f.phases is None:
        return [f.linear_matrix()[i][i] for i in range(f.n)]
    with f.field.context():
        values = numeric_symbols(f.phases.basis, dict(f.symbol_values or ()))
        return [mpmath.exp(2j * mpmath.pi * p.evaluate(values)) for p in f.phases]


def solve_linear(A: list[list], b: list, is_small: Callable[[object], bool]) -> list:
    """Gaussian elimination with largest-pivot choice over exact or mpmath scalars."""
    n = len(A)
    M = [row[:] + [v] for row, v in zip(A, b)]
    for c in range(n):
        p = max(range(c, n), key=lambda i: abs(M[i][c]) if not isinstance(M[i][c], GaussianRational)
                else M[i][c].norm2())
        if is_small(M[p][c]):
            raise ZeroDivisionError("singular system")
        M[c], M[p] = M[p], M[c]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


