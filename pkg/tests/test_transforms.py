import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from strategies import exact_functions, exact_symmetric
from zhscale import transforms as T
from zhscale.transforms import Phase, PhaseFunction, SymmetricPhaseFunction


def test_fourier_of_one_and_i():
    # f = (1, i): exponents (0, 1/2); fhat(s) = prod_t f(t)^(-(-1)^(s.t))
    fh = T.fourier(PhaseFunction.from_thetas(1, [0, Fraction(1, 2)]))
    assert [v.exp for v in fh.values] == [Fraction(-1, 2), Fraction(1, 2)]
    np.testing.assert_allclose([v.value for v in fh.values], [-1j, 1j], atol=1e-12)


def test_phase_basics():
    p = Phase.exact(Fraction(5, 2))
    assert p.exp == Fraction(1, 2) and p.is_exact
    assert p.value == pytest.approx(1j)
    assert (p * p).equals(Phase.exact(1))
    q = Phase.of(1j)
    assert not q.is_exact and q.equals(p)
    with pytest.raises(ValueError):
        Phase.from_complex(0)


@settings(max_examples=100, deadline=None)
@given(exact_functions())
def test_fourier_round_trip(f):
    back = T.invert_fourier(T.fourier(f), f.values[0])
    assert all(a.is_exact and a.equals(b) for a, b in zip(back.values, f.values))


@settings(max_examples=100, deadline=None)
@given(exact_functions())
def test_mobius_round_trip(f):
    back = T.invert_mobius(T.mobius(f))
    assert [a.exp for a in back.values] == [b.exp for b in f.values]


@settings(max_examples=100, deadline=None)
@given(exact_functions())
def test_cross_formulas(f):
    fh, ft = T.fourier(f), T.mobius(f)
    assert all(a.equals(b) for a, b in zip(T.mobius_from_fourier(fh).values, ft.values))
    assert all(a.equals(b) for a, b in zip(T.fourier_from_mobius(ft).values, fh.values))
    assert T.vacuum_scalar(fh).exp == f.values[0].exp


@settings(max_examples=100, deadline=None)
@given(exact_symmetric())
def test_symmetric_round_trips(F):
    assert T.invert_kravchuk(T.kravchuk_transform(F)).equals(F)
    assert T.invert_binomial(T.binomial_transform(F)).equals(F)


@settings(max_examples=50, deadline=None)
@given(exact_symmetric(max_n=6))
def test_symmetric_matches_general(F):
    fh, Fh = T.fourier(F.expand()), T.kravchuk_transform(F)
    ft, Ft = T.mobius(F.expand()), T.binomial_transform(F)
    for x in range(2 ** F.n):
        assert fh.values[x].exp == Fh[T.popcount(x)].exp
        assert ft.values[x].exp == Ft[T.popcount(x)].exp


@settings(max_examples=50, deadline=None)
@given(exact_functions(max_n=3))
def test_fourier_reconstructs_values(f):
    # f(x) = f(0) prod_s fhat(s)^(s.x), checked numerically on values
    fh = T.fourier(f)
    for x in range(2 ** f.n):
        prod = f.values[0].value
        for s in range(2 ** f.n):
            if T.popcount(s & x) % 2:
                prod *= fh.values[s].value
        assert prod == pytest.approx(f.values[x].value)


def test_approximate_tier_uses_principal_branch():
    f = PhaseFunction.from_values(1, [1, cmath.exp(0.7j)])
    assert f.values[0].value == pytest.approx(1)
    assert not any(v.is_exact for v in f.values)
    fh = T.fourier(f)
    assert fh.values[1].value == pytest.approx(cmath.exp(0.7j))
    back = T.invert_fourier(fh, f.values[0])
    assert back.values[1].value == pytest.approx(cmath.exp(0.7j))


def test_as_phase_reads_fractions_as_angles():
    assert T.as_phase(Fraction(1, 2)).exp == Fraction(1, 2)
    assert T.as_phase(-1).value == pytest.approx(-1)
    assert T.as_phase(2).value == pytest.approx(2)


def test_lifted_exponents_keep_the_vacuum_scalar_exact():
    # halving a reduced exponent would flip the sign here
    f = PhaseFunction.from_thetas(1, [Fraction(3, 2), Fraction(1, 2)])
    assert T.vacuum_scalar(T.fourier(f)).exp == Fraction(3, 2)


def test_kravchuk_small_values():
    assert [T.kravchuk(3, 1, m) for m in range(4)] == [3, 1, -1, -3]
    assert [T.kravchuk(4, 2, m) for m in range(5)] == [6, 0, -2, 0, 6]


def test_size_checks():
    with pytest.raises(ValueError):
        PhaseFunction.from_thetas(2, [0, 0, 0])
    with pytest.raises(ValueError):
        SymmetricPhaseFunction.from_thetas(2, [0, 0])


@given(exact_functions(max_n=3))
def test_json_round_trip(f):
    back = T.function_from_json(T.function_to_json(f))
    assert [v.exp for v in back.values] == [v.exp % 2 for v in f.values]


def test_symmetric_json():
    F = SymmetricPhaseFunction.from_thetas(2, [0, Fraction(1, 4), 1])
    back = T.function_from_json(T.symmetric_to_json(F))
    assert isinstance(back, SymmetricPhaseFunction) and back.equals(F)
    z = T.phase_from_json({"re": math.cos(1.0), "im": math.sin(1.0)})
    assert not z.is_exact and z.value == pytest.approx(cmath.exp(1j))
