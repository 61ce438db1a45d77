"""Readers and canonical printers for phase files and germ files.

Phase file::

    symbols sqrt2 i
    phi 1 = 1/6 + 1*sqrt2
    phi 2 = 1/2 - 6*sqrt2

Germ file::

    dim 2
    maxdeg 4
    lambda 1 = exact 1/4 + 0 I
    lambda 2 = phase 1
    eps 2 = 0
    term 1 (1,1) 1 + 0 I

``#`` starts a comment.  Coordinates are numbered from 1.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ParseError
from ..exact import (
    GaussianRational,
    LinearForm,
    PhaseVector,
    SymbolBasis,
    format_linear,
    format_rational,
)

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[/*+\-=(),]))")


@dataclass
class Token:
    kind: str
    text: str
    col: int


def tokenize(line: str, lineno: int) -> list[Token]:
    code = line.split("#", 1)[0]
    out = []
    pos = 0
    while pos < len(code):
        if code[pos:].strip() == "":
            break
        m = _TOKEN.match(code, pos)
        if not m or m.end() == pos:
            col = pos + 1 + (len(code[pos:]) - len(code[pos:].lstrip()))
            raise ParseError(f"unexpected character {code[col - 1]!r}", lineno, col)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), start + 1))
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, tokens: list[Token], lineno: int, line: str):
        self.tokens = tokens
        self.i = 0
        self.lineno = lineno
        self.end_col = len(line.split("#", 1)[0].rstrip()) + 1

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self, what: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {what} but the line ended", self.lineno, self.end_col)
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        tok = self.next(what or text or kind)
        if tok.kind != kind or (text is not None and tok.text != text):
            raise ParseError(f"expected {what or text or kind}, found {tok.text!r}", self.lineno, tok.col)
        return tok

    def done(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected {tok.text!r}", self.lineno, tok.col)

    def error(self, message: str, tok: Token | None = None):
        return ParseError(message, self.lineno, tok.col if tok else self.end_col)


def _rational(cur: _Cursor, signed: bool = True) -> Fraction:
    sign = 1
    tok = cur.peek()
    if signed and tok is not None and tok.kind == "punct" and tok.text in "+-":
        cur.next("sign")
        sign = -1 if tok.text == "-" else 1
    num = cur.expect("int", what="an integer")
    value = Fraction(int(num.text))
    tok = cur.peek()
    if tok is not None and tok.kind == "punct" and tok.text == "/":
        cur.next("/")
        den = cur.expect("int", what="a denominator")
        if int(den.text) == 0:
            raise cur.error("zero denominator", den)
        value /= int(den.text)
    return sign * value


def _coordinate(cur: _Cursor, n: int | None = None) -> int:
    tok = cur.expect("int", what="a coordinate index")
    j = int(tok.text)
    if j < 1 or (n is not None and j > n):
        raise cur.error(f"coordinate {j} out of range", tok)
    return j


def parse_phase_file(text: str) -> PhaseVector:
    basis: SymbolBasis | None = None
    forms: dict[int, LinearForm] = {}
    last_line = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = tokenize(line, lineno)
        if not tokens:
            continue
        last_line = lineno
        cur = _Cursor(tokens, lineno, line)
        head = cur.expect("name", what="'symbols' or 'phi'")
        if head.text == "symbols":
            if basis is not None:
                raise cur.error("symbols declared twice", head)
            if forms:
                raise cur.error("symbols must be declared before any phi line", head)
            names = []
            while cur.peek() is not None:
                tok = cur.expect("name", what="a symbol name")
                if tok.text in names:
                    raise cur.error(f"duplicate symbol {tok.text!r}", tok)
                if tok.text in ("symbols", "phi", "I"):
                    raise cur.error(f"reserved word {tok.text!r} cannot be a symbol", tok)
                names.append(tok.text)
            basis = SymbolBasis(tuple(names))
        elif head.text == "phi":
            if basis is None:
                basis = SymbolBasis(())
            j_tok = cur.peek()
            j = _coordinate(cur)
            if j in forms:
                raise cur.error(f"duplicate coordinate {j}", j_tok)
            cur.expect("punct", "=")
            forms[j] = _expression(cur, basis)
            cur.done()
        else:
            raise cur.error(f"unknown keyword {head.text!r}", head)
    if not forms:
        raise ParseError("no phi lines", last_line or 1, None)
    n = max(forms)
    missing = [j for j in range(1, n + 1) if j not in forms]
    if missing:
        raise ParseError(f"missing coordinate {missing[0]}", last_line, None)
    return PhaseVector.from_forms([forms[j] for j in range(1, n + 1)])


def _expression(cur: _Cursor, basis: SymbolBasis) -> LinearForm:
    total = _term(cur, basis, 1)
    while cur.peek() is not None:
        tok = cur.peek()
        if tok.kind != "punct" or tok.text not in "+-":
            raise cur.error(f"expected '+' or '-', found {tok.text!r}", tok)
        cur.next("operator")
        total = total + _term(cur, basis, -1 if tok.text == "-" else 1)
    return total


def _term(cur: _Cursor, basis: SymbolBasis, sign: int) -> LinearForm:
    q = _rational(cur) * sign
    tok = cur.peek()
    if tok is not None and tok.kind == "punct" and tok.text == "*":
        cur.next("*")
        name = cur.expect("name", what="a symbol name")
        if name.text not in basis.names:
            raise cur.error(f"undeclared symbol {name.text!r}", name)
        return LinearForm.symbol(basis, name.text, q)
    return LinearForm.constant(basis, q)


def format_phase_file(phi: PhaseVector) -> str:
    lines = []
    if len(phi.basis):
        lines.append("symbols " + " ".join(phi.basis.names))
    for j, e in enumerate(phi, 1):
        lines.append(f"phi {j} = {format_linear(e)}")
    return "\n".join(lines) + "\n"


@dataclass
class GermFile:
    dim: int
    maxdeg: int
    lambdas: list  # ("exact", GaussianRational) or ("phase", k) with 1-based k
    eps: list[int]
    terms: dict = field(default_factory=dict)  # (j 0-based, exponent) -> GaussianRational

    @property
    def mode(self) -> str:
        kinds = {kind for kind, _ in self.lambdas}
        return "phase" if "phase" in kinds else "exact"


def _complex(cur: _Cursor) -> GaussianRational:
    re_part = _rational(cur)
    op = cur.expect("punct", what="'+' or '-'")
    if op.text not in "+-":
        raise cur.error(f"expected '+' or '-', found {op.text!r}", op)
    im_part = _rational(cur)
    if op.text == "-":
        im_part = -im_part
    cur.expect("name", "I", what="'I'")
    return GaussianRational(re_part, im_part)


def parse_germ_file(text: str, vector_field: bool = False) -> GermFile:
    """Parse a germ file; ``vector_field`` allows zero diagonal entries (a field, not a map)."""
    dim = maxdeg = None
    lambdas: dict[int, tuple] = {}
    eps: dict[int, int] = {}
    terms: dict = {}
    lines_of: dict = {}
    last = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = tokenize(line, lineno)
        if not tokens:
            continue
        last = lineno
        cur = _Cursor(tokens, lineno, line)
        head = cur.expect("name", what="a keyword")
        key = head.text
        if key in ("dim", "maxdeg"):
            tok = cur.expect("int", what="a positive integer")
            value = int(tok.text)
            if value < 1:
                raise cur.error(f"{key} must be positive", tok)
            if (dim if key == "dim" else maxdeg) is not None:
                raise cur.error(f"{key} given twice", head)
            if key == "dim":
                dim = value
            else:
                maxdeg = value
            cur.done()
            continue
        if dim is None or maxdeg is None:
            raise cur.error("dim and maxdeg must come first", head)
        if key == "lambda":
            j_tok = cur.peek()
            j = _coordinate(cur, dim)
            if j in lambdas:
                raise cur.error(f"lambda {j} given twice", j_tok)
            cur.expect("punct", "=")
            kind = cur.expect("name", what="'exact' or 'phase'")
            if kind.text == "exact":
                value = _complex(cur)
                if value == 0 and not vector_field:
                    raise cur.error("eigenvalue must be nonzero", kind)
                lambdas[j] = ("exact", value)
            elif kind.text == "phase":
                lambdas[j] = ("phase", _coordinate(cur))
            else:
                raise cur.error(f"expected 'exact' or 'phase', found {kind.text!r}", kind)
            lines_of[("lambda", j)] = lineno
        elif key == "eps":
            j_tok = cur.peek()
            j = _coordinate(cur, dim)
            if j in eps:
                raise cur.error(f"eps {j} given twice", j_tok)
            cur.expect("punct", "=")
            tok = cur.expect("int", what="0 or 1")
            if tok.text not in ("0", "1"):
                raise cur.error("eps must be 0 or 1", tok)
            if j == 1 and tok.text == "1":
                raise cur.error("eps 1 must be 0", tok)
            eps[j] = int(tok.text)
            lines_of[("eps", j)] = lineno
        elif key == "term":
            j = _coordinate(cur, dim)
            open_tok = cur.expect("punct", "(")
            exps = [int(cur.expect("int", what="an exponent").text)]
            while True:
                tok = cur.next("',' or ')'")
                if tok.kind == "punct" and tok.text == ")":
                    break
                if tok.kind != "punct" or tok.text != ",":
                    raise cur.error(f"expected ',' or ')', found {tok.text!r}", tok)
                exps.append(int(cur.expect("int", what="an exponent").text))
            if len(exps) != dim:
                raise cur.error(f"exponent has {len(exps)} entries, expected {dim}", open_tok)
            if not 2 <= sum(exps) <= maxdeg:
                raise cur.error(f"term degree {sum(exps)} outside 2..{maxdeg}", open_tok)
            value = _complex(cur)
            k = (j - 1, tuple(exps))
            if ("term", k) in lines_of:
                raise cur.error("term given twice", open_tok)
            lines_of[("term", k)] = lineno
            if value != 0:
                terms[k] = value
        else:
            raise cur.error(f"unknown keyword {key!r}", head)
        cur.done()
    if dim is None or maxdeg is None:
        raise ParseError("dim and maxdeg are required", last or 1, None)
    missing = [j for j in range(1, dim + 1) if j not in lambdas]
    if missing:
        raise ParseError(f"missing lambda {missing[0]}", last or 1, None)
    lam = [lambdas[j] for j in range(1, dim + 1)]
    kinds = {k for k, _ in lam}
    if len(kinds) > 1:
        raise ParseError("lambdas must be all exact or all phase", lines_of[("lambda", 1)], None)
    eps_list = [eps.get(j, 0) for j in range(1, dim + 1)]
    for j in range(2, dim + 1):
        if eps_list[j - 1] and lam[j - 1] != lam[j - 2] and "phase" not in kinds:
            raise ParseError(f"eps {j} = 1 needs lambda {j} = lambda {j - 1}", lines_of[("eps", j)], None)
    return GermFile(dim, maxdeg, lam, eps_list, terms)


def format_germ_file(g: GermFile) -> str:
    lines = [f"dim {g.dim}", f"maxdeg {g.maxdeg}"]
    for j, (kind, v) in enumerate(g.lambdas, 1):
        lines.append(f"lambda {j} = exact {_fmt_complex(v)}" if kind == "exact" else f"lambda {j} = phase {v}")
    for j, e in enumerate(g.eps, 1):
        if e:
            lines.append(f"eps {j} = {e}")
    for (j, Q), c in sorted(g.terms.items(), key=lambda kv: (kv[0][0], sum(kv[0][1]), [-q for q in kv[0][1]])):
        lines.append(f"term {j + 1} ({','.join(map(str, Q))}) {_fmt_complex(c)}")
    return "\n".join(lines) + "\n"


def _fmt_complex(c: GaussianRational) -> str:
    sign = "-" if c.im < 0 else "+"
    return f"{format_rational(c.re)} {sign} {format_rational(abs(c.im))} I"
