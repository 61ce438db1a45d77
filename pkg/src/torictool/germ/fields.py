"""Formal vector fields, their Lie brackets and time-t flows as jets."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath

from ..errors import PreconditionError
from ..exact import GaussianRational, LinearForm, SymbolBasis, as_rational, symbol_values as numeric_symbols
from ..lattice.normal_forms import rational_coordinates
from ..toric.tuples import saturated_basis
from .jets import (
    EXACT,
    Field,
    JetMap,
    compose,
    difference,
    max_abs,
    padd,
    pcompose,
    pderivative,
    pmul,
    pscale,
    ptruncate,
    unit,
)

MAX_SERIES_TERMS = 20000


@dataclass(frozen=True)
class JetVectorField:
    """``X = sum_j X_j(z) d/dz_j`` truncated at ``degree`` (components include linear terms).

    ``diag_phases`` optionally records the diagonal linear part exactly:
    ``X^dia = sum_j phi_j z_j d/dz_j``.
    """

    n: int
    degree: int
    components: tuple[Mapping, ...]
    field: Field = EXACT
    diag_phases: tuple[LinearForm, ...] | None = None
    symbol_values: tuple[tuple[str, object], ...] | None = None

    def __post_init__(self):
        if len(self.components) != self.n:
            raise PreconditionError("one component per coordinate is required")
        comps = []
        with self.field.context():
            for comp in self.components:
                clean = {}
                for e, c in comp.items():
                    e = tuple(int(v) for v in e)
                    if len(e) != self.n or any(v < 0 for v in e) or sum(e) == 0:
                        raise PreconditionError(f"bad exponent {e}")
                    if sum(e) > self.degree:
                        continue
                    c = self.field.convert(c)
                    if c != 0:
                        clean[e] = c
                comps.append(clean)
        object.__setattr__(self, "components", tuple(comps))
        if self.diag_phases is not None:
            if len(self.diag_phases) != self.n:
                raise PreconditionError("one diagonal phase per coordinate is required")
            L = self.linear_matrix()
            vals = self._phase_values()
            for i in range(self.n):
                if not self._close(L[i][i], vals[i]):
                    raise PreconditionError("diagonal coefficients disagree with the recorded phases")

    @classmethod
    def from_parts(cls, phases: Sequence[LinearForm], couplings: Mapping[tuple[int, int], object],
                   terms: Mapping[tuple[int, tuple[int, ...]], object], degree: int,
                   field: Field = EXACT, symbol_values: Mapping[str, object] | None = None):
        """Diagonal ``phases``, linear ``couplings[(j, h)]`` (coefficient of ``z_h`` in
        component j, h != j) and higher ``terms[(j, Q)]``.

        ``symbol_values`` overrides the default numeric meaning of symbols; values
        are re-evaluated whenever the precision changes.
        """
        n = len(phases)
        values = tuple(sorted((symbol_values or {}).items()))
        comps = [dict() for _ in range(n)]
        with field.context():
            for j, v in enumerate(_diagonal_values(phases, field, values)):
                if v != 0:
                    comps[j][unit(n, j)] = v
            for (j, h), c in couplings.items():
                if j == h:
                    raise PreconditionError("couplings must be off-diagonal")
                comps[j][unit(n, h)] = field.convert(c)
            for (j, Q), c in terms.items():
                if sum(Q) < 2:
                    raise PreconditionError("higher terms must have degree >= 2")
                comps[j][tuple(Q)] = field.convert(c)
        return cls(n, degree, tuple(comps), field, tuple(p.as_form() for p in phases), values)

    def _phase_values(self):
        with self.field.context():
            if self.field.exact and not all(p.is_rational() for p in self.diag_phases):
                return [None] * self.n
            return _diagonal_values(self.diag_phases, self.field, self.symbol_values)

    def _close(self, a, b) -> bool:
        if b is None:
            return False
        if self.field.exact:
            return a == b
        with self.field.context():
            return abs(a - b) <= mpmath.mpf(2) ** (-(self.field.bits - 8)) * max(1, abs(b))

    def like(self, components, **changes) -> "JetVectorField":
        kw = dict(n=self.n, degree=self.degree, field=self.field, diag_phases=self.diag_phases,
                  symbol_values=self.symbol_values)
        kw.update(changes)
        return JetVectorField(components=tuple(components), **kw)

    def linear_matrix(self) -> list[list]:
        zero = self.field.zero
        return [[comp.get(unit(self.n, h), zero) for h in range(self.n)] for comp in self.components]

    def diagonal_part(self) -> "JetVectorField":
        comps = []
        for i, comp in enumerate(self.components):
            e = unit(self.n, i)
            comps.append({e: comp[e]} if e in comp else {})
        return self.like(comps)

    def remainder(self) -> "JetVectorField":
        """``X - X^dia``."""
        comps = []
        for i, comp in enumerate(self.components):
            e = unit(self.n, i)
            comps.append({k: v for k, v in comp.items() if k != e})
        return self.like(comps, diag_phases=None)

    def terms(self):
        out = []
        for j, comp in enumerate(self.components):
            for e in sorted(comp, key=lambda e: (sum(e), tuple(-v for v in e))):
                out.append((j, e, comp[e]))
        return out

    def non_commuting_terms(self) -> list[tuple[int, tuple[int, ...]]]:
        """Terms of ``X - X^dia`` whose bracket with ``X^dia`` is nonzero, decided exactly."""
        if self.diag_phases is None:
            raise PreconditionError("exact diagonal phases are needed")
        basis = self.diag_phases[0].basis
        out = []
        for j, Q, c in self.remainder().terms():
            s = LinearForm.zero(basis)
            for q, p in zip(Q, self.diag_phases):
                if q:
                    s = s + p * q
            if not (s - self.diag_phases[j]).is_zero():
                out.append((j, Q))
        return out

    def is_normal_form(self) -> bool:
        """``[X^dia, X - X^dia] = 0``."""
        if self.diag_phases is not None:
            return not self.non_commuting_terms()
        br = lie_bracket(self.diagonal_part(), self.remainder())
        return _is_zero_field(br)

    def to_field(self, field: Field) -> "JetVectorField":
        with field.context():
            comps = [{e: field.convert(c) for e, c in comp.items()} for comp in self.components]
            if self.diag_phases is not None:
                for j, v in enumerate(_diagonal_values(self.diag_phases, field, self.symbol_values)):
                    comps[j].pop(unit(self.n, j), None)
                    if v != 0:
                        comps[j][unit(self.n, j)] = v
        return self.like(comps, field=field)


def _diagonal_values(phases, field: Field, overrides) -> list:
    if field.exact:
        if not all(p.is_rational() for p in phases):
            raise PreconditionError("exact vector fields need rational diagonal entries")
        return [GaussianRational(p.rational_part) for p in phases]
    with field.context():
        values = numeric_symbols(phases[0].basis, dict(overrides or ()))
        return [p.evaluate(values) for p in phases]


def _is_zero_field(X: JetVectorField, tol=None) -> bool:
    if X.field.exact:
        return all(not comp for comp in X.components)
    tol = tol if tol is not None else mpmath.mpf(2) ** (-(X.field.bits - 16))
    return max_abs(X.components, X.field) <= tol


def lie_derivative(X: JetVectorField, p: Mapping, max_degree: int) -> dict:
    """``sum_i X_i d p / d z_i`` truncated."""
    out: dict = {}
    for i, Xi in enumerate(X.components):
        if not Xi:
            continue
        d = pderivative(p, i)
        if d:
            out = padd(out, pmul(Xi, d, max_degree))
    return out


def lie_bracket(X: JetVectorField, Y: JetVectorField) -> JetVectorField:
    """``[X, Y]_j = sum_i X_i dY_j/dz_i - Y_i dX_j/dz_i`` truncated at the common degree."""
    if X.n != Y.n or X.field != Y.field:
        raise PreconditionError("fields of different shapes")
    D = min(X.degree, Y.degree)
    with X.field.context():
        comps = [padd(lie_derivative(X, Yj, D), lie_derivative(Y, Xj, D), scale=-1)
                 for Xj, Yj in zip(X.components, Y.components)]
    return JetVectorField(X.n, D, tuple(comps), X.field)


def _norm(X: JetVectorField):
    with X.field.context():
        total = mpmath.mpf(0)
        for comp in X.components:
            s = sum((X.field.magnitude(c) for c in comp.values()), mpmath.mpf(0))
            total = max(total, s)
        return total * X.degree


def _lie_series(X: JetVectorField, t, field: Field) -> list[dict]:
    D = X.degree
    n = X.n
    out = []
    with field.context():
        tol = None if field.exact else mpmath.mpf(2) ** (-(field.bits + 8))
        rho = None if field.exact else _norm(X) * abs(t)
        for i in range(n):
            term = {unit(n, i): field.one}
            total = dict(term)
            k = 0
            quiet = 0
            while True:
                k += 1
                if k > MAX_SERIES_TERMS:
                    raise PreconditionError("Lie series did not terminate; use numeric mode")
                term = pscale(lie_derivative(X, term, D), t / k if not field.exact else
                              GaussianRational(as_rational(t) / k) if not isinstance(t, GaussianRational)
                              else t * GaussianRational(Fraction(1, k)))
                if not term:
                    break
                total = padd(total, term)
                if tol is not None and k > 2 * rho:
                    if max_abs([term], field) <= tol * max(1, max_abs([total], field)):
                        quiet += 1
                        if quiet >= 2:
                            break
                    else:
                        quiet = 0
            out.append(total)
    return out


def _nilpotent_bound(X: JetVectorField) -> bool:
    return all(not X.components[i].get(unit(X.n, i)) for i in range(X.n))


def flow(X: JetVectorField, t=1, method: str = "auto", bits: int | None = None) -> JetMap:
    """Time-``t`` flow ``exp(t X)`` as a jet.

    ``method="series"`` sums the Lie series ``sum t^k/k! X^k(z)`` on the jet
    space directly.  ``method="split"`` (the default for normal-form fields)
    uses ``exp(tX) = exp(t X^dia) ∘ exp(t (X - X^dia))``, whose second factor
    is a terminating series.  Exact fields are only supported when the series
    terminates.
    """
    if method not in ("auto", "series", "split"):
        raise PreconditionError(f"unknown flow method {method!r}")
    field = X.field if bits is None else Field(bits)
    if field != X.field:
        X = X.to_field(field)
    if method == "auto":
        method = "split" if X.diag_phases is not None and X.is_normal_form() else "series"
    if field.exact:
        t = as_rational(t) if not isinstance(t, GaussianRational) else t
    else:
        with field.context():
            t = field.convert(t)
    if method == "split":
        if not X.is_normal_form():
            raise PreconditionError("splitting needs a field in normal form")
        rest = X.remainder()
        comps = _lie_series(rest, t, field) if not _is_zero_field(rest) else \
            [{unit(X.n, i): field.one} for i in range(X.n)]
        with field.context():
            L = X.linear_matrix()
            if field.exact:
                if any(L[i][i] != 0 for i in range(X.n)):
                    raise PreconditionError("exact flows need a zero diagonal; use numeric mode")
                return JetMap(X.n, X.degree, tuple(comps), field)
            scales = [mpmath.exp(t * L[i][i]) for i in range(X.n)]
            comps = [pscale(c, scales[i]) for i, c in enumerate(comps)]
        return JetMap(X.n, X.degree, tuple(comps), field)
    if field.exact and not _nilpotent_bound(X):
        raise PreconditionError("exact flows need a nilpotent linear part; use numeric mode")
    if not field.exact:
        with field.context():
            rho = _norm(X) * abs(t)
        if rho > 64:
            # scaling and squaring keeps the series short
            s = int(mpmath.ceil(mpmath.log(rho / 32, 2)))
            with field.context():
                half = flow(X, t / 2 ** s, "series")
            out = half
            for _ in range(s):
                out = compose(out, out)
            return out
    comps = _lie_series(X, t, field)
    return JetMap(X.n, X.degree, tuple(comps), field)


def commutes_with_field(f: JetMap, X: JetVectorField, tol=None) -> tuple[bool, tuple | None, object]:
    """Check ``df · X = X ∘ f`` up to the jet degree.

    Returns ``(ok, witness, deviation)`` with the first offending
    (coordinate, exponent) as witness.
    """
    if f.n != X.n or f.field != X.field:
        raise PreconditionError("map and field of different shapes")
    D = min(f.degree, X.degree)
    F = f.field
    with F.context():
        lhs = []
        for fj in f.components:
            acc: dict = {}
            for i, Xi in enumerate(X.components):
                d = pderivative(fj, i)
                if d and Xi:
                    acc = padd(acc, pmul(d, Xi, D))
            lhs.append(acc)
        rhs = [pcompose(Xj, f.components, D, F.one) for Xj in X.components]
        diff = [padd(a, b, scale=-1) for a, b in zip(lhs, rhs)]
    dev = max_abs(diff, F)
    if F.exact:
        tol = 0
    elif tol is None:
        tol = mpmath.mpf(2) ** (-(F.bits - 24))
    for j, comp in enumerate(diff):
        for e in sorted(comp, key=lambda e: (sum(e), tuple(-v for v in e))):
            mag = F.magnitude(comp[e])
            if mag > tol:
                return False, (j, e), dev
    return True, None, dev


@dataclass(frozen=True)
class FlowCheck:
    ok: bool
    witness: tuple | None
    reason: str
    deviation: object


def flow_normal_form_check(X: JetVectorField, bits: int | None = None) -> FlowCheck:
    """Check that the time-1 flow of a normal-form field has the expected structure.

    The field must commute with its diagonal part; the flow must then have
    triangular linear part with diagonal ``exp(phi_j)``, commute with
    ``exp(X^dia)`` and agree with the direct Lie series.  Failures carry a
    witness (coordinate, exponent).
    """
    if X.diag_phases is None:
        raise PreconditionError("the field must record its diagonal phases")
    bad = X.non_commuting_terms()
    if bad:
        return FlowCheck(False, bad[0], "field is not in normal form", None)
    field = X.field if bits is None else Field(bits)
    if field.exact:
        field = Field(256)
    Xn = X.to_field(field)
    F = flow(Xn, 1, "split")
    G = flow(Xn, 1, "series")
    tol = mpmath.mpf(2) ** (-(field.bits - 32))
    with field.context():
        dev = max_abs(difference(F, G), field)
        if dev > tol:
            return FlowCheck(False, None, "split and direct flows disagree", dev)
        L = F.linear_matrix()
        diag = [mpmath.exp(Xn.linear_matrix()[i][i]) for i in range(X.n)]
        for i in range(X.n):
            if abs(L[i][i] - diag[i]) > tol * max(1, abs(diag[i])):
                return FlowCheck(False, (i, unit(X.n, i)), "diagonal is not exp(phi)", dev)
        lower = all(L[i][h] == 0 for i in range(X.n) for h in range(i + 1, X.n))
        upper = all(L[i][h] == 0 for i in range(X.n) for h in range(i))
        if not (lower or upper):
            return FlowCheck(False, None, "linear part of the flow is not triangular", dev)
        Dm = JetMap(X.n, X.degree, tuple({unit(X.n, i): diag[i]} for i in range(X.n)), field)
        comm = difference(compose(F, Dm), compose(Dm, F))
        cdev = max_abs(comm, field)
        if cdev > tol * max(1, F.max_coefficient()):
            for j, comp in enumerate(comm):
                for e, c in comp.items():
                    if abs(c) > tol:
                        return FlowCheck(False, (j, e), "flow does not commute with exp(X^dia)", cdev)
    return FlowCheck(True, None, "ok", dev)


def vf_toric_degree(phases: Sequence[LinearForm] | JetVectorField) -> tuple[int, tuple, tuple]:
    """Smallest r with ``phi = sum alpha_k rho_k`` over C, rho_k in Z^n, alpha_k in C.

    Returns ``(r, vectors, coefficients)``: a saturated integer basis of the
    Q-span of the rational and symbolic parts, and exact coefficients.
    """
    if isinstance(phases, JetVectorField):
        if phases.diag_phases is None:
            raise PreconditionError("the field must record its diagonal phases")
        phases = phases.diag_phases
    phases = [p.as_form() for p in phases]
    n = len(phases)
    if n == 0:
        raise PreconditionError("empty phase list")
    basis: SymbolBasis = phases[0].basis
    cols = [[p.rational_part for p in phases]]
    cols += [[p.coeffs[s] for p in phases] for s in range(len(basis))]
    vecs = saturated_basis(cols, n)
    coeffs = []
    coords = [rational_coordinates(vecs, c) for c in cols]
    for k in range(len(vecs)):
        coeffs.append(LinearForm(basis, coords[0][k], tuple(coords[s + 1][k] for s in range(len(basis)))))
    return len(vecs), tuple(vecs), tuple(coeffs)


def flow_group_deviation(X: JetVectorField, s, t):
    """Largest coefficient of ``flow(s) ∘ flow(t) - flow(s + t)``."""
    with X.field.context():
        a = compose(flow(X, s), flow(X, t))
        b = flow(X, X.field.convert(s) + X.field.convert(t)) if not X.field.exact else \
            flow(X, as_rational(s) + as_rational(t))
        return max_abs(difference(a, b), X.field)


def flow_derivative_deviation(X: JetVectorField, bits: int = 512):
    """Central difference ``(flow(h) - flow(-h)) / 2h`` against X with ``h = 2^(-bits/4)``."""
    Xw = X.to_field(Field(bits))
    with Xw.field.context():
        h = mpmath.mpf(2) ** (-(bits // 4))
        plus, minus = flow(Xw, h, "series"), flow(Xw, -h, "series")
        diff = difference(plus, minus)
        approx = [pscale(p, 1 / (2 * h)) for p in diff]
        err = [padd(a, ptruncate(x, Xw.degree), scale=-1) for a, x in zip(approx, Xw.components)]
        return max_abs(err, Xw.field)
