"""Hermite and Smith normal forms over Z, integer kernels and solves.

Matrices are lists of rows of Python ints.  All routines are exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import PreconditionError

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def _as_int_matrix(M: Sequence[Sequence[int]]) -> IntMatrix:
    rows = [list(r) for r in M]
    for r in rows:
        for v in r:
            if isinstance(v, bool) or not isinstance(v, int):
                if isinstance(v, Fraction) and v.denominator == 1:
                    continue
                raise PreconditionError(f"non-integer matrix entry {v!r}")
    rows = [[int(v) for v in r] for r in rows]
    if rows and len({len(r) for r in rows}) != 1:
        raise PreconditionError("ragged matrix")
    return rows


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _column_hnf(M: IntMatrix, ncols: int):
    H = [row[:] for row in M]
    n = ncols
    U = identity(n)
    pivot_rows: list[int] = []
    k = 0

    def colop(i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for mat in (H, U):
            for row in mat:
                x, y = row[i], row[j]
                row[i], row[j] = a * x + b * y, c * x + d * y

    for i, row in enumerate(H):
        if k == n:
            break
        for c in range(k + 1, n):
            b = H[i][c]
            if b == 0:
                continue
            a = H[i][k]
            g, x, y = xgcd(a, b)
            colop(k, c, x, y, -b // g, a // g)
        p = H[i][k]
        if p == 0:
            continue
        if p < 0:
            for mat in (H, U):
                for r in mat:
                    r[k] = -r[k]
            p = -p
        for c in range(k):
            q = H[i][c] // p
            if q:
                for mat in (H, U):
                    for r in mat:
                        r[c] -= q * r[k]
        pivot_rows.append(i)
        k += 1
    return H, U, pivot_rows


def hermite_form(M: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[IntMatrix, IntMatrix]:
    """Column-style Hermite normal form ``H = M U`` with ``U`` unimodular.

    ``H`` is lower echelon: its nonzero columns come first, each with a positive
    pivot strictly below the previous pivot, and every entry left of a pivot lies
    in ``[0, pivot)``.
    """
    rows = _as_int_matrix(M)
    n = len(rows[0]) if rows else (ncols or 0)
    H, U, _ = _column_hnf(rows, n)
    return H, U


def row_hermite_basis(generators: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Canonical echelon basis of the lattice spanned by ``generators`` in Z^dim."""
    gens = _as_int_matrix(generators)
    if not gens:
        return []
    H, _, pivots = _column_hnf(transpose(gens), len(gens))
    return [tuple(H[i][k] for i in range(dim)) for k in range(len(pivots))]


def integer_kernel(M: Sequence[Sequence[int]], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Basis of ``{x in Z^n : M x = 0}`` in canonical echelon form."""
    rows = _as_int_matrix(M)
    n = len(rows[0]) if rows else ncols
    if n is None:
        raise PreconditionError("column count is needed for an empty matrix")
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    _, U, pivots = _column_hnf(rows, n)
    gens = [[U[i][k] for i in range(n)] for k in range(len(pivots), n)]
    return row_hermite_basis(gens, n)


def solve_integer_linear(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None):
    """Solve ``A x = b`` over Z.

    Returns ``(x, kernel_basis)`` or ``None`` when no integer solution exists.
    """
    rows = _as_int_matrix(A)
    n = len(rows[0]) if rows else ncols
    if n is None:
        raise PreconditionError("column count is needed for an empty matrix")
    if len(b) != len(rows):
        raise PreconditionError("right-hand side has the wrong length")
    b = [Fraction(v) for v in b]
    if any(v.denominator != 1 for v in b):
        return None
    H, U, pivots = _column_hnf(rows, n)
    y = [0] * n
    k = 0
    for i, row in enumerate(H):
        partial = sum(row[c] * y[c] for c in range(k))
        if k < len(pivots) and pivots[k] == i:
            num = b[i] - partial
            if num % row[k]:
                return None
            y[k] = int(num // row[k])
            k += 1
        elif partial != b[i]:
            return None
    x = tuple(sum(U[i][c] * y[c] for c in range(n)) for i in range(n))
    kernel = row_hermite_basis([[U[i][c] for i in range(n)] for c in range(len(pivots), n)], n)
    return x, kernel


def smith_form(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns ``(D, U, V)`` with ``U M V = D``.

    ``U`` and ``V`` are unimodular and the diagonal of ``D`` is nonnegative with
    each entry dividing the next.
    """
    A = _as_int_matrix(M)
    m = len(A)
    n = len(A[0]) if A else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for mat in (A, V):
            for r in mat:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for mat in (A, V):
            for r in mat:
                r[dst] += q * r[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            best = None
            for i in range(t + 1, m):
                if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                    best = (abs(A[i][t]), "r", i)
            for j in range(t + 1, n):
                if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                    best = (abs(A[t][j]), "c", j)
            if best is not None:
                if best[1] == "r":
                    swap_rows(t, best[2])
                else:
                    swap_cols(t, best[2])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return A, U, V


def smith_invariants(M: Sequence[Sequence[int]]) -> list[int]:
    D, _, _ = smith_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss determinant of a square integer matrix."""
    A = _as_int_matrix(M)
    n = len(A)
    if any(len(r) != n for r in A):
        raise PreconditionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# rational linear algebra -----------------------------------------------------

def rational_row_reduce(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    A = [[Fraction(v) for v in r] for r in M]
    if not A:
        return [], []
    n = len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rational_rank(M: Sequence[Sequence]) -> int:
    return len(rational_row_reduce(M)[1])


def rational_coordinates(basis: Sequence[Sequence], x: Sequence) -> list[Fraction] | None:
    """Coefficients ``t`` with ``sum t_k basis[k] = x``, or None if ``x`` is outside the span.

    ``basis`` must be linearly independent.
    """
    k = len(basis)
    if k == 0:
        return [] if all(v == 0 for v in x) else None
    aug = [[Fraction(basis[i][c]) for i in range(k)] + [Fraction(x[c])] for c in range(len(x))]
    R, pivots = rational_row_reduce(aug)
    if k in pivots:
        return None
    if len(pivots) != k:
        raise PreconditionError("basis vectors are linearly dependent")
    return [R[i][k] for i in range(k)]


def integer_scale(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest positive multiple of a rational vector that is an integer vector, made primitive."""
    from ..exact import gcd_all, lcm_all
    d = lcm_all(Fraction(a).denominator for a in v)
    ints = [int(Fraction(a) * d) for a in v]
    g = gcd_all(ints)
    return tuple(a // g for a in ints) if g else tuple(ints)
