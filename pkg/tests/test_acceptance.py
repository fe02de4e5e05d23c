"""Acceptance suite: one test per criterion, run at the stated tolerances.

A summary line per criterion is printed at the end of the pytest run.
"""

from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from zhscale import nests, rules, scalable, transforms
from zhscale.bang import arrow_to_bang, bang_to_arrow, instantiate
from zhscale.diagram import equal_semantics
from zhscale.scalable import BitMatrix, all_bitmatrices, s_equal, strip
from zhscale.transforms import PhaseFunction, SymmetricPhaseFunction

TOL = 1e-9


def _matrices(max_size=3, min_size=0):
    for m in range(min_size, max_size + 1):
        for n in range(min_size, max_size + 1):
            yield from all_bitmatrices(m, n)


def _random_matrix(rng, rows, cols):
    return BitMatrix([[rng.randint(0, 1) for _ in range(cols)] for _ in range(rows)], rows, cols)


def _random_exact_function(rng, n, symmetric=False):
    size = n + 1 if symmetric else 2 ** n
    den = rng.choice([1, 2, 4, 8, 16])
    thetas = [Fraction(rng.randrange(2 * den), den) for _ in range(size)]
    cls = SymmetricPhaseFunction if symmetric else PhaseFunction
    return cls.from_thetas(n, thetas)


def _eighth_root_functions(n, symmetric=False):
    size = n + 1 if symmetric else 2 ** n
    cls = SymmetricPhaseFunction if symmetric else PhaseFunction
    for ks in itertools.product(range(8), repeat=size):
        yield cls.from_thetas(n, [Fraction(k, 4) for k in ks])


def _corpus(symmetric=False):
    yield from _eighth_root_functions(2, symmetric)
    rng = random.Random(2024)
    for n in (3, 4):
        for _ in range(200):
            yield _random_exact_function(rng, n, symmetric)


def _exactly_equal(xs, ys):
    xs, ys = list(xs), list(ys)
    return len(xs) == len(ys) and all(a.is_exact and b.is_exact and a.equals(b) for a, b in zip(xs, ys))


# -- 1 ----------------------------------------------------------------------

def test_criterion_1_rule_catalog():
    start = time.perf_counter()
    assert len(rules.RULES) == 11
    for name, rule in rules.RULES.items():
        rng = random.Random(1)
        draws = [rule.sampler(rng) for _ in range(20)]
        for params in draws:
            lhs, rhs = rule.sides(**params)
            for side in (lhs, rhs):
                assert side.n_in + side.n_out <= 10, (name, params)
            assert equal_semantics(lhs, rhs, tol=TOL), (name, params)
    assert time.perf_counter() - start < 60


# -- 2 ----------------------------------------------------------------------

@pytest.mark.parametrize("name", ["zs1", "hs1", "ba1", "ba2"])
def test_criterion_2_bang_rule_families(name):
    results = rules.check_bang_rule(name, max_count=3, tol=TOL)
    assert len(results) == 16
    assert all(results.values()), {k: v for k, v in results.items() if not v}


# -- 3 ----------------------------------------------------------------------

def test_criterion_3_arrow_algebra():
    for kind in ("red", "yellow"):
        count, bad = scalable.composition_table_check(kind, 3, TOL)
        assert count == 349691 and not bad, (kind, bad[:3])
    # the table composes oracle tensors; check that against direct composite diagrams on a sample
    rng = random.Random(3)
    for _ in range(40):
        kind = rng.choice(["red", "yellow"])
        n, k, m = (rng.randint(1, 3) for _ in range(3))
        A, B = _random_matrix(rng, k, n), _random_matrix(rng, m, k)
        assert scalable.arrow_laws_check(f"compose-{kind}", A, B, TOL)
    for A in _matrices(3):
        for law in ("copy-green", "erase-green", "cocopy-red", "coerase-red", "cocopy-yellow",
                    "coerase-yellow", "hadamard-flip"):
            assert scalable.arrow_laws_check(law, A, tol=TOL), (law, A)
        if A.at_most_one_per_row():
            assert scalable.arrow_laws_check("red-eq-yellow-rowcond", A, tol=TOL), A


# -- 4 ----------------------------------------------------------------------

def test_criterion_4_dictionary():
    for kind in ("red", "yellow"):
        for A in _matrices(3):
            t = arrow_to_bang(kind, A)
            assert bang_to_arrow(t) == (kind, A)
            assert equal_semantics(instantiate(t), strip(scalable.arrow(kind, A)), tol=TOL), (kind, A)


# -- 5 ----------------------------------------------------------------------

def test_criterion_5_transforms():
    for f in _corpus():
        fh = transforms.fourier(f)
        assert _exactly_equal(transforms.invert_fourier(fh, f.values[0]).values, f.values)
        assert _exactly_equal(transforms.invert_mobius(transforms.mobius(f)).values, f.values)
    for F in _corpus(symmetric=True):
        assert _exactly_equal(transforms.invert_kravchuk(transforms.kravchuk_transform(F)).F, F.F)
        assert _exactly_equal(transforms.invert_binomial(transforms.binomial_transform(F)).F, F.F)
    rng = random.Random(5)
    for n in range(7):
        for _ in range(5):
            F = _random_exact_function(rng, n, symmetric=True)
            fh, Fh = transforms.fourier(F.expand()), transforms.kravchuk_transform(F)
            ft, Ft = transforms.mobius(F.expand()), transforms.binomial_transform(F)
            for x in range(2 ** n):
                w = transforms.popcount(x)
                assert fh.values[x].exp == Fh.F[w].exp
                assert ft.values[x].exp == Ft.F[w].exp


# -- 6 ----------------------------------------------------------------------

def test_criterion_6_cross_formulas():
    for f in _corpus():
        fh, ft = transforms.fourier(f), transforms.mobius(f)
        assert _exactly_equal(transforms.mobius_from_fourier(fh).values, ft.values)
        assert _exactly_equal(transforms.fourier_from_mobius(ft).values, fh.values)
        vac = transforms.vacuum_scalar(fh)
        assert vac.is_exact and vac.exp == f.values[0].exp


# -- 7 ----------------------------------------------------------------------

def test_criterion_7_kravchuk_values():
    F = Fraction
    for n in range(11):
        for m in range(n + 1):
            K = lambda k: transforms.kravchuk(n, k, m)
            direct = lambda k: sum((-1) ** j * comb(m, j) * comb(n - m, k - j) for j in range(k + 1))
            for k in range(n + 1):
                assert K(k) == direct(k)
            assert K(0) == 1
            if n >= 1:
                assert K(1) == n - 2 * m
            assert K(n) == (-1) ** m
            if n >= 2:
                assert K(2) == 2 * m * m - 2 * n * m + F(n * n - n, 2)
            if n >= 3:
                assert K(3) == (-F(4, 3) * m ** 3 + 2 * n * m * m + (-n * n + n - F(2, 3)) * m
                                + F(n ** 3 - 3 * n * n + 2 * n, 6))


# -- 8 ----------------------------------------------------------------------

def test_criterion_8_mobius_gadget_identity():
    for n in range(1, 13):
        Gt = transforms.binomial_transform(nests.omega_gadget_profile(n))
        want = [Fraction(0)] + [nests.OMEGA * Fraction(-2) ** (m - 1) for m in range(1, n + 1)]
        assert [p.exp for p in Gt.F] == want
    start = time.perf_counter()
    for n in (3, 4, 5, 6):
        spec = nests.mobius_gadget_identity(n)
        assert max(k for kind, k, _ in spec.profile if kind is nests.GadgetKind.HYPER_EDGE) <= 3
        lhs, rhs = nests.mobius_gadget_sides(n)
        assert equal_semantics(lhs, rhs, tol=TOL), n
    assert time.perf_counter() - start < 30


# -- 9 ----------------------------------------------------------------------

def test_criterion_9_toffoli_nest_identity():
    """Checked as stated; the literal angles do not compose to the identity (see the notes)."""
    failures = []
    for n in range(4, 33):
        S = nests.tof_inverse(n)
        if any((s - S[0]) % 2 for s in S):
            failures.append(f"S(m) not constant mod 2 at n={n}")
    residues = [nests.residue_E(l) for l in range(24)]
    if any(r != Fraction(1, 16) for r in residues):
        failures.append(f"E(l) mod 2 takes values {sorted(set(residues))}")
    for n in (4, 5):
        if not nests.oracle_check_nest(nests.tof_nest_identity(n), tol=TOL):
            failures.append(f"oracle rejects the diagram identity at n={n}")
    assert not failures, "; ".join(failures[:3] + failures[-2:])


# -- 10 ---------------------------------------------------------------------

def test_criterion_10_hyper_local_complementation_and_pivot():
    for n in (1, 2, 3):
        assert equal_semantics(*rules.hyper_local_complementation(n), tol=TOL)
    for A in _matrices(3, min_size=1):
        assert s_equal(*rules.scalable_hlc(A), tol=TOL), A
    for n in (1, 2, 3):
        for m in (1, 2, 3):
            assert equal_semantics(*rules.regular_hyper_pivot_instance(n, m), tol=TOL)
    rng = random.Random(10)
    for A in _matrices(3, min_size=1):
        for _ in range(3):
            B = _random_matrix(rng, rng.randint(1, 3), rng.randint(1, 3))
            assert equal_semantics(*rules.regular_hyper_pivot(A, B), tol=TOL), (A, B)
    small = list(_matrices(2, min_size=1))
    pairs = list(itertools.product(small, small))
    pairs += [(_random_matrix(rng, 3, 3), _random_matrix(rng, 3, 3)) for _ in range(20)]
    for A, B in pairs:
        assert s_equal(*rules.rhp_scalable(A, B), tol=TOL), (A, B)
        assert s_equal(*rules.rhp_lemma(A, B), tol=TOL), (A, B)
    for name in ("hs2", "ba1", "ba2"):
        for m, n in ((1, 1), (2, 2), (2, 3), (3, 2)):
            assert rules.check_special_case(name, m, n, tol=TOL), (name, m, n)


# -- 11 ---------------------------------------------------------------------

def test_criterion_11_fourier_hyper_pivot():
    shapes = [(n, m) for n in range(1, 7) for m in range(1, 7) if n * m <= 6]
    for seed in range(10):
        rng = np.random.default_rng(seed)
        for n, m in shapes:
            lam = rng.normal(size=n) + 1j * rng.normal(size=n)
            assert equal_semantics(*nests.fourier_hyper_pivot(n, m, lam), tol=TOL), (seed, n, m)
    for n, m in shapes:
        fl, fr = nests.fourier_hyper_pivot(n, m, [-1] * n)
        rl, rr = rules.regular_hyper_pivot_instance(n, m)
        assert equal_semantics(fl, rl, tol=TOL) and equal_semantics(fr, rr, tol=TOL), (n, m)


# -- 12 ---------------------------------------------------------------------

def test_criterion_12_mining():
    """Both identities are searched for on the 1/16 lattice, the second with its literal angles."""
    start = time.perf_counter()
    missing = []
    for n in range(4, 9):
        spec = nests.mobius_gadget_identity(n)
        gadgets = {k: p.exp for kind, k, p in spec.profile if kind is nests.GadgetKind.PHASE_GADGET}
        hyper = {k: p.exp for kind, k, p in spec.profile if kind is nests.GadgetKind.HYPER_EDGE}
        found = nests.mine_nests(n, 16, gadget_weights=(), hyper_weights=(1, 2, 3))
        if not any(nests.same_profile(s, gadgets, hyper) for s in found.specs):
            missing.append(f"first identity at n={n}")
        found = nests.mine_nests(n, 16, gadget_weights=(1, 2, 3))
        if not any(nests.same_profile(s, nests.tof_profile(n)) for s in found.specs):
            missing.append(f"second identity at n={n}")
    assert time.perf_counter() - start < 300
    assert not missing, ", ".join(missing)
