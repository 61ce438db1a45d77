"""Acceptance criteria, one test each; every test logs a PASS/FAIL line with its runtime."""
import itertools
import random
import time
from fractions import Fraction as F

import mpmath

import corpus as C
from acceptance_log import criterion
from oracles import multi_indices, random_phase, random_reduced_tuple_phase, resonance_oracle, torsion_oracle
from torictool.exact import GaussianRational as G, LinearForm, PhaseVector
from torictool.germ import (
    Field,
    JetMap,
    JetVectorField,
    commutation_check,
    conjugacy_residual,
    exponents_of_degree,
    flow_derivative_deviation,
    flow_group_deviation,
    flow_normal_form_check,
    pd_normalize,
    phase_linked_jet,
)
from torictool.lattice import Lattice, cominimal_elements, decompose, is_decomposition, paper_minimal_elements
from torictool.toric import (
    Kind,
    ToricTuple,
    classify,
    eliminate_rational_coefficient,
    enumerate_resonances,
    is_simple_tuple,
    resonance_descriptor,
    simple_tuple_matches,
    simplify_search,
    theta_descriptor,
    toric_analysis,
    torsion,
)

TORSION_FREE_CORPUS = ["scalar_multiple", "six_first", "six_second", "phi_two", "zero"]


def test_criterion_1_toric_degrees():
    with criterion(1, "toric degree regression set", budget=1.0):
        for phi, degree in C.DEGREE_CASES:
            r, tup = toric_analysis(phi)
            assert r == degree, (phi, r, degree)
            assert tup.recombine() == phi


def test_criterion_2_torsion():
    with criterion(2, "torsion regression and tau | m"):
        two = torsion(C.TORSION_TWO)
        assert (two.tau, two.q) == (2, 9)
        assert torsion(C.TORSION_SEVEN).tau == 7
        for name in TORSION_FREE_CORPUS:
            assert torsion(C.CORPUS[name]).tau == 1 == torsion_oracle(C.CORPUS[name])
        rng = random.Random(20)
        count = 0
        while count < 200:
            phi = random_reduced_tuple_phase(rng)
            rep = torsion(phi)
            if rep.tuple is None:
                continue
            count += 1
            assert rep.m % rep.tau == 0


def test_criterion_3_resonances():
    with criterion(3, "resonance enumeration", budget=5.0):
        assert [enumerate_resonances(C.SIX_FIRST, j, 10) for j in range(3)] == [[], [(1, 0, 1)], []]
        res = [set(enumerate_resonances(C.SIX_SECOND, j, 40)) for j in range(3)]
        qs = [q for q in range(1, 40) if 19 * q + 1 <= 40]
        assert res[0] == {(q + 1, 5 * q, 13 * q) for q in qs}
        assert res[1] == {(q, 5 * q + 1, 13 * q) for q in qs}
        assert res[2] == {(q, 5 * q, 13 * q + 1) for q in qs}
        assert enumerate_resonances(C.TORSION_SEVEN, 0, 50) == [(43, 7)]
        for phi in C.CORPUS.values():
            for j in range(phi.n):
                desc = resonance_descriptor(phi, j)
                listed = set(desc.enumerate(10))
                for Q in multi_indices(phi.n, 2, 10):
                    truth = resonance_oracle(phi, Q, j)
                    assert (Q in listed) == truth == desc.contains(Q), (Q, j)


def test_criterion_4_classification():
    with criterion(4, "classification regression"):
        assert classify(C.IMPURE).kind is Kind.IMPURE_TORSION
        cls = classify(C.SIMPLIFIABLE)
        assert cls.kind is Kind.PURE_SIMPLIFIABLE
        simple = cls.simplification.simple_tuple
        assert is_simple_tuple(C.SIMPLIFIABLE, simple)
        for j in range(4):
            want = set(theta_descriptor(4, j, simple.vectors).enumerate(12))
            got = {Q for Q in multi_indices(4, 2, 12) if resonance_oracle(C.SIMPLIFIABLE, Q, j)}
            assert got == want
        hand = ToricTuple(4, simple.basis, ((1, -2, 1, -5),) + simple.vectors[1:], simple.coefficients,
                           True, simple.m)
        assert is_simple_tuple(C.SIMPLIFIABLE, hand) and simple_tuple_matches(C.SIMPLIFIABLE, hand, 12)
        seven = classify(C.TORSION_SEVEN)
        assert seven.kind is Kind.PURE_NOT_SIMPLIFIED
        assert simplify_search(C.TORSION_SEVEN) is None


def test_criterion_5_monoid():
    with criterion(5, "minimal elements, cominimals and decomposition"):
        L = Lattice.kernel([[1, -1, -1, 1]], 4)
        mins = paper_minimal_elements(L).elements
        assert set(mins) == {(1, 1, 0, 0), (1, 0, 1, 0), (0, 1, 0, 1), (0, 0, 1, 1)} and len(mins) == 4
        com = cominimal_elements(L, mins)
        assert com.elements == () and com.certified
        for x in multi_indices(4, 0, 12):
            if x[0] - x[1] - x[2] + x[3] == 0:
                counts, idx = decompose(x, mins, com.elements)
                assert is_decomposition(x, mins, com.elements, counts, idx)


def _symbol_part(phi: PhaseVector) -> PhaseVector:
    return PhaseVector.from_forms([LinearForm(phi.basis, F(0), e.as_form().coeffs) for e in phi])


def test_criterion_6_torsion_free_iff():
    with criterion(6, "classify is torsion-free exactly when tau = 1"):
        rng = random.Random(6)
        eliminated = 0
        for _ in range(200):
            phi = random_phase(rng, n=rng.randint(1, 5), max_entry=9)
            tau = torsion_oracle(phi)
            cls = classify(phi)
            assert (cls.kind is Kind.TORSION_FREE) == (tau == 1)
            c = phi.rational_vector()
            if tau == 1 and any(c):
                m = 1
                for v in c:
                    m = m * v.denominator // __import__("math").gcd(m, v.denominator)
                plain = toric_analysis(_symbol_part(phi))[1]
                tup = ToricTuple(phi.n, phi.basis, (tuple(int(v * m) for v in c),) + plain.vectors,
                                 (LinearForm.constant(phi.basis, F(1, m)),) + plain.coefficients)
                out = eliminate_rational_coefficient(tup)
                assert out.recombine() == phi
                eliminated += 1
        assert eliminated > 10


def _all_terms(n, D):
    return [(j, Q) for k in range(2, D + 1) for Q in exponents_of_degree(n, k) for j in range(n)]


def _resonant(Q, j, vecs):
    return all(sum(q * v for q, v in zip(Q, th)) == th[j] for th in vecs)


def test_criterion_7_germ_suite():
    with criterion(7, "germ suite", budget=60.0):
        rng = random.Random(7)
        pairs = 0
        while pairs < 100:
            n = rng.randint(1, 3)
            vecs = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(rng.randint(1, 2))]
            cand = _all_terms(n, 4)
            non = [t for t in cand if not _resonant(t[1], t[0], vecs)]
            if not non:
                continue
            pairs += 1
            terms = {t: G(rng.randint(1, 4), rng.randint(-3, 3)) for t in cand
                     if _resonant(t[1], t[0], vecs) and rng.random() < 0.5}
            f = JetMap.from_jordan([G(1)] * n, [0] * n, terms, 4)
            assert commutation_check(f, vecs).commutes
            extra = rng.choice(non)
            g = JetMap.from_jordan([G(1)] * n, [0] * n, {**terms, extra: G(1)}, 4)
            rep = commutation_check(g, vecs)
            assert not rep.commutes and rep.witnesses == (extra,)
        for lams in ([G(2), G(4), G(F(1, 2))], [G(0, 1), G(-1), G(0, -1)]):
            f = JetMap.from_jordan(lams, [0, 0, 0], {t: G(1, 1) for t in _all_terms(3, 4)}, 4)
            nf = pd_normalize(f)
            assert nf.residual == 0 == conjugacy_residual(f, nf.psi, nf.g)
        for name in ("six_first", "six_second", "mixed_pair", "torsion_two", "torsion_seven", "half_sqrt2_i"):
            phi = C.CORPUS[name]
            f = phase_linked_jet(phi, [0] * phi.n, {t: G(1, -1) for t in _all_terms(phi.n, 4)}, 4, bits=256)
            assert pd_normalize(f).relative_residual < mpmath.mpf(2) ** -236
        tol = mpmath.mpf(2) ** -200
        B = C.SYMBOLS
        a = LinearForm.symbol(B, "sqrt2", F(1, 4))
        b = LinearForm.symbol(B, "sqrt3", F(1, 4))
        phases = [a, a * 2, a + b]
        res = [(j, Q) for j, Q in _all_terms(3, 3)
               if (sum((p * q for p, q in zip(phases, Q)), LinearForm.zero(B)) - phases[j]).is_zero()]
        non = [t for t in _all_terms(3, 3) if t not in res]
        X = JetVectorField.from_parts(phases, {}, {t: 1 for t in res}, 3, Field(320))
        assert flow_group_deviation(X, F(1, 3), F(2, 3)) < tol
        assert flow_derivative_deviation(X) < tol
        for k in range(20):
            terms = {t: F(rng.randint(-4, 4), rng.randint(1, 4)) for t in res}
            X = JetVectorField.from_parts(phases, {}, terms, 3, Field(256))
            assert flow_normal_form_check(X).ok
            bad = rng.choice(non)
            Y = JetVectorField.from_parts(phases, {}, {**terms, bad: 1}, 3, Field(256))
            out = flow_normal_form_check(Y)
            assert not out.ok and out.witness == bad
