"""Independent reference computations (brute force or sympy) for cross-checking."""
import itertools
import random
from fractions import Fraction as F
from math import gcd

import sympy
from sympy.matrices.normalforms import smith_normal_decomp

from torictool.exact import LinearForm, PhaseVector, SymbolBasis


def lcm(a, b):
    return a * b // gcd(a, b)


def saturated_kernel_sympy(rows, n):
    """Basis of {x in Z^n : rows x = 0} through sympy's nullspace and Smith decomposition."""
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    M = sympy.Matrix(rows)
    null = M.nullspace()
    if not null:
        return []
    K = sympy.Matrix.hstack(*[v * sympy.ilcm(1, 1, *[sympy.fraction(x)[1] for x in v]) for v in null])
    D, U, V = smith_normal_decomp(K, domain=sympy.ZZ)
    Uinv = U.inv()
    return [tuple(int(Uinv[i, k]) for i in range(n)) for k in range(K.shape[1])]


def torsion_oracle(phi: PhaseVector) -> int:
    """lcm of denominators of <M, c> over a basis M of integer vectors killing the symbol part."""
    A = phi.symbol_matrix()
    S = len(phi.basis)
    rows = [[A[i][s] for i in range(phi.n)] for s in range(S)]
    rows = [r for r in rows if any(r)]
    kernel = saturated_kernel_sympy(rows, phi.n)
    c = phi.rational_vector()
    tau = 1
    for M in kernel:
        tau = lcm(tau, sum(F(m) * x for m, x in zip(M, c)).denominator)
    return tau


def symbol_rank_sympy(phi: PhaseVector) -> int:
    A = phi.symbol_matrix()
    if not A or not A[0]:
        return 0
    return sympy.Matrix(A).rank()


def brute_minimal_points(member, N, bound):
    """Componentwise-minimal nonzero points of a set of N^N, scanning |x| <= bound."""
    pts = [x for x in itertools.product(range(bound + 1), repeat=N) if 0 < sum(x) <= bound and member(x)]
    pts.sort(key=sum)
    keep = []
    for x in pts:
        if not any(all(a <= b for a, b in zip(y, x)) for y in keep):
            keep.append(x)
    return sorted(keep)


def random_phase(rng: random.Random, n=None, symbols=None, max_entry=9, basis=None) -> PhaseVector:
    """Random phase with rational parts and symbol coefficients p/q, |p|, q <= max_entry."""
    n = n or rng.randint(1, 5)
    basis = basis or SymbolBasis(("a", "b", "c"))
    s = rng.randint(0, len(basis)) if symbols is None else symbols

    def q():
        if rng.random() < 0.3:
            return F(0)
        return F(rng.randint(-max_entry, max_entry), rng.randint(1, max_entry))

    # low-rank symbol matrix so that torsion shows up often
    rank = rng.randint(0, min(s, n))
    base = [[q() for _ in range(len(basis))] for _ in range(rank)]
    mix = [[rng.randint(-2, 2) for _ in range(rank)] for _ in range(n)]
    forms = []
    for i in range(n):
        coeffs = tuple(sum((mix[i][k] * base[k][t] for k in range(rank)), F(0)) if t < s else F(0)
                       for t in range(len(basis)))
        forms.append(LinearForm(basis, q(), coeffs))
    return PhaseVector.from_forms(forms)


def random_reduced_tuple_phase(rng: random.Random, basis=None):
    """Phase built from a random reduced-looking tuple (1/m) eta + sum beta_k eta_k."""
    basis = basis or SymbolBasis(("a", "b"))
    n = rng.randint(1, 4)
    m = rng.randint(2, 9)
    eta = [rng.randint(0, m - 1) for _ in range(n)]
    while gcd(m, gcd(*eta) if len(eta) > 1 else eta[0]) != 1:
        eta = [rng.randint(0, m - 1) for _ in range(n)]
    forms = [LinearForm.constant(basis, F(e, m)) for e in eta]
    for k in range(rng.randint(0, min(2, n - 1) if n > 1 else 0)):
        vec = [rng.randint(-4, 4) for _ in range(n)]
        sym = LinearForm.symbol(basis, basis.names[k], F(rng.randint(1, 5), rng.randint(1, 5)))
        forms = [f + sym * v for f, v in zip(forms, vec)]
    return PhaseVector.from_forms(forms)


def resonance_oracle(phi: PhaseVector, Q, j) -> bool:
    """<Q, phi> - phi_j has no symbol part and an integer rational part (0-based j)."""
    forms = [e.as_form() for e in phi]
    rat = sum((F(q) * f.rational_part for q, f in zip(Q, forms)), F(0)) - forms[j].rational_part
    for s in range(len(phi.basis)):
        if sum(q * f.coeffs[s] for q, f in zip(Q, forms)) != forms[j].coeffs[s]:
            return False
    return rat.denominator == 1


def multi_indices(n, lo, hi):
    return [Q for Q in itertools.product(range(hi + 1), repeat=n) if lo <= sum(Q) <= hi]


def integer_solvable(A, b):
    """Does A h = b have an integer solution?  Smith decomposition through sympy."""
    if not A:
        return True
    M = sympy.Matrix(A)
    D, U, V = smith_normal_decomp(M, domain=sympy.ZZ)
    c = U * sympy.Matrix(b)
    for i in range(M.shape[0]):
        d = D[i, i] if i < M.shape[1] else 0
        if d == 0:
            if c[i] != 0:
                return False
        elif c[i] % d:
            return False
    return True


def brute_simplification_system(phi: PhaseVector, eta, m, max_degree):
    """Rows <x, h> = <x, eta>/m for x = Q - e_j over all resonant Q with |Q| <= max_degree."""
    A, b = [], []
    for j in range(phi.n):
        for Q in multi_indices(phi.n, 2, max_degree):
            if resonance_oracle(phi, Q, j):
                x = list(Q)
                x[j] -= 1
                v = sum(a * e for a, e in zip(x, eta))
                assert v % m == 0
                A.append(x)
                b.append(v // m)
    return A, b
