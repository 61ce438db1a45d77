"""Exact scalars: phases modulo the integers, Gaussian rationals, big complex numbers.

A phase is stored as ``rational_part + sum(coeffs[s] * symbol_s)`` over a fixed
:class:`SymbolBasis`.  The symbols are opaque and assumed rationally
independent together with 1, so equality of phases is decided by comparing
rational data only.
"""
from __future__ import annotations

import math
import re
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import mpmath

from .errors import PreconditionError

Rational = Fraction

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def as_rational(value) -> Fraction:
    """Convert int, Fraction or a ``"p/q"`` string to a Fraction.  Floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        if v:
            out = out * abs(v) // math.gcd(out, abs(v))
    return out


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g


@dataclass(frozen=True)
class SymbolBasis:
    names: tuple[str, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise PreconditionError(f"duplicate symbol names in {names}")
        for name in names:
            if not _NAME.match(name) or name == "I":
                raise PreconditionError(f"invalid symbol name {name!r}")

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PreconditionError(f"undeclared symbol {name!r}") from None


@dataclass(frozen=True)
class LinearForm:
    """An element ``r + sum a_s sigma_s`` of Q + Q sigma_1 + ... (no reduction mod 1)."""

    basis: SymbolBasis
    rational_part: Fraction
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(as_rational(c) for c in self.coeffs)
        if len(coeffs) != len(self.basis):
            raise PreconditionError("coefficient count does not match the symbol basis")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rational_part", as_rational(self.rational_part))

    @classmethod
    def zero(cls, basis: SymbolBasis):
        return cls(basis, Fraction(0), (Fraction(0),) * len(basis))

    @classmethod
    def constant(cls, basis: SymbolBasis, value):
        return cls(basis, as_rational(value), (Fraction(0),) * len(basis))

    @classmethod
    def symbol(cls, basis: SymbolBasis, name: str, coefficient=1):
        coeffs = [Fraction(0)] * len(basis)
        coeffs[basis.index(name)] = as_rational(coefficient)
        return cls(basis, Fraction(0), tuple(coeffs))

    def _check(self, other: "LinearForm"):
        if self.basis != other.basis:
            raise PreconditionError("phases over different symbol bases")

    def _new(self, rational, coeffs):
        return type(self)(self.basis, rational, tuple(coeffs))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._new(self.rational_part + other, self.coeffs)
        if not isinstance(other, LinearForm):
            return NotImplemented
        self._check(other)
        return self._new(self.rational_part + other.rational_part,
                         (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.rational_part, (-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if not isinstance(k, (int, Fraction)) or isinstance(k, bool):
            return NotImplemented
        return self._new(self.rational_part * k, (a * k for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.rational_part == 0 and not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs)

    def symbol_part(self) -> "LinearForm":
        return LinearForm(self.basis, Fraction(0), self.coeffs)

    def as_form(self) -> "LinearForm":
        return LinearForm(self.basis, self.rational_part, self.coeffs)

    def mod1(self) -> "PhaseScalar":
        return PhaseScalar(self.basis, self.rational_part, self.coeffs)

    def evaluate(self, values: Mapping[str, object]):
        """Numeric value at the current mpmath precision."""
        total = mpmath.mpc(self.rational_part.numerator) / self.rational_part.denominator
        for name, a in zip(self.basis.names, self.coeffs):
            if a:
                if name not in values:
                    raise PreconditionError(f"no numeric value for symbol {name!r}")
                total += mpmath.mpf(a.numerator) / a.denominator * mpmath.mpmathify(values[name])
        return total

    def __str__(self) -> str:
        return format_linear(self)


class PhaseScalar(LinearForm):
    """A class in C/Z: the rational part is kept in [0, 1)."""

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "rational_part", self.rational_part % 1)

    def __mul__(self, k):
        if isinstance(k, Fraction) and k.denominator == 1:
            k = int(k)
        if not isinstance(k, int) or isinstance(k, bool):
            raise TypeError("phases modulo Z can only be scaled by integers")
        return super().__mul__(k)

    __rmul__ = __mul__


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_linear(form: LinearForm) -> str:
    parts: list[tuple[Fraction, str | None]] = []
    if form.rational_part or form.is_rational():
        parts.append((form.rational_part, None))
    for name, a in zip(form.basis.names, form.coeffs):
        if a:
            parts.append((a, name))
    out = ""
    for k, (a, name) in enumerate(parts):
        body = format_rational(abs(a)) + (f"*{name}" if name else "")
        if k == 0:
            out = ("-" if a < 0 else "") + body
        else:
            out += (" - " if a < 0 else " + ") + body
    return out


@dataclass(frozen=True)
class PhaseVector:
    """A point of (C/Z)^n, each coordinate a :class:`PhaseScalar`."""

    basis: SymbolBasis
    entries: tuple[PhaseScalar, ...]

    def __post_init__(self):
        entries = tuple(e if isinstance(e, PhaseScalar) else e.mod1() for e in self.entries)
        if not entries:
            raise PreconditionError("a phase vector needs at least one coordinate")
        for e in entries:
            if e.basis != self.basis:
                raise PreconditionError("phase entries use a different symbol basis")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_forms(cls, forms: Sequence[LinearForm]):
        if not forms:
            raise PreconditionError("a phase vector needs at least one coordinate")
        return cls(forms[0].basis, tuple(f.mod1() for f in forms))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, j: int) -> PhaseScalar:
        return self.entries[j]

    def __iter__(self):
        return iter(self.entries)

    def rational_vector(self) -> list[Fraction]:
        return [e.rational_part for e in self.entries]

    def symbol_matrix(self) -> list[list[Fraction]]:
        """n x S matrix of symbol coefficients."""
        return [list(e.coeffs) for e in self.entries]

    def pairing(self, Q: Sequence[int]) -> LinearForm:
        """``sum_h Q_h phi_h`` computed on the stored representatives."""
        if len(Q) != self.n:
            raise PreconditionError(f"multi-index of length {len(Q)} for dimension {self.n}")
        total = LinearForm.zero(self.basis)
        for q, e in zip(Q, self.entries):
            if q:
                total = total + e.as_form() * int(q)
        return total

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


def phase_from_terms(basis: SymbolBasis, terms: Iterable[tuple[object, str | None]]) -> PhaseScalar:
    """Build ``[sum of rational * symbol terms]``; a term with symbol ``None`` is rational."""
    total = LinearForm.zero(basis)
    for coeff, name in terms:
        q = as_rational(coeff)
        total = total + (LinearForm.constant(basis, q) if name is None
                         else LinearForm.symbol(basis, name, q))
    return total.mod1()


def is_integral_combination(phi: PhaseVector, Q: Sequence[int], j: int) -> bool:
    """Exact test of ``<Q, phi> - phi_j in Z`` (j is 0-based)."""
    if len(Q) != phi.n:
        raise PreconditionError(f"multi-index of length {len(Q)} for dimension {phi.n}")
    if not 0 <= j < phi.n:
        raise PreconditionError(f"coordinate {j} out of range")
    if any(q < 0 for q in Q):
        raise PreconditionError("multi-index entries must be nonnegative")
    value = phi.pairing(Q) - phi[j].as_form()
    return value.is_rational() and value.rational_part.denominator == 1


@dataclass(frozen=True)
class GaussianRational:
    """``re + im*I`` with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_rational(self.re))
        object.__setattr__(self, "im", as_rational(self.im))

    @staticmethod
    def lift(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(as_rational(x), Fraction(0))

    def __add__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        d = o.norm2()
        if d == 0:
            raise ZeroDivisionError("division by the Gaussian rational 0")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return GaussianRational.lift(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(1) / (self ** -k)
        out, base = GaussianRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __abs__(self):
        n = self.norm2()
        return mpmath.sqrt(mpmath.mpf(n.numerator) / n.denominator)

    def to_mpc(self):
        return to_mpc(self)

    def __str__(self) -> str:
        sign = "-" if self.im < 0 else "+"
        return f"{format_rational(self.re)} {sign} {format_rational(abs(self.im))} I"

    def __repr__(self) -> str:
        return f"GaussianRational({format_rational(self.re)}, {format_rational(self.im)})"


def to_mpc(x):
    """Exact or numeric scalar to an mpmath complex at the current precision."""
    if isinstance(x, GaussianRational):
        return mpmath.mpc(mpmath.mpf(x.re.numerator) / x.re.denominator,
                          mpmath.mpf(x.im.numerator) / x.im.denominator)
    if isinstance(x, Fraction):
        return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
    return mpmath.mpc(x)


@contextmanager
def precision(bits: int):
    """Run mpmath arithmetic with a binary precision of ``bits``."""
    if bits < 53:
        raise PreconditionError("precision must be at least 53 bits")
    with mpmath.workprec(bits):
        yield


def default_symbol_value(name: str):
    """Numeric meaning of common symbol names: ``sqrtK``, ``i``, ``pi``, ``e``."""
    m = re.fullmatch(r"sqrt(\d+)", name)
    if m:
        return mpmath.sqrt(int(m.group(1)))
    if name == "i":
        return mpmath.mpc(0, 1)
    if name == "pi":
        return +mpmath.pi
    if name == "e":
        return +mpmath.e
    return None


def symbol_values(basis: SymbolBasis, overrides: Mapping[str, object] | None = None) -> dict:
    """Numeric values for every symbol of ``basis`` at the current precision."""
    out = {}
    overrides = dict(overrides or {})
    for name in basis.names:
        if name in overrides:
            v = overrides[name]
            out[name] = mpmath.mpmathify(v.replace("I", "j") if isinstance(v, str) else v)
            continue
        v = default_symbol_value(name)
        if v is None:
            raise PreconditionError(f"symbol {name!r} has no numeric value; supply one")
        out[name] = v
    return out
