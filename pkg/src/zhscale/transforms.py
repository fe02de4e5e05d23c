"""Fourier and Möbius transforms of phase functions, and their symmetric forms.

A phase function ``f: {0,1}^n -> C*`` is stored as a table indexed by the
integer ``x`` whose bit ``i`` is wire ``i``.  Each value is a :class:`Phase`
holding an exponent ``e`` with value ``exp(i*pi*e)``.

Exponents are *lifted*: inputs are reduced into ``[0, 2)`` once, and every
transform then acts linearly on the exponent vector without reducing again.
That fixes one branch for the fractional powers, and because all transforms
are linear on lifted exponents, composites such as ``vacuum_scalar(fourier(f))``
agree with ``f(0)`` exactly rather than up to a root of unity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence


class InexactWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Phase:
    """``exp(i*pi*exp)``; ``exp`` is a Fraction (exact) or a complex number (approximate).

    A complex exponent may have an imaginary part, so approximate phases also
    cover values off the unit circle.
    """

    exp: Fraction | complex

    @classmethod
    def exact(cls, theta) -> "Phase":
        return cls(Fraction(theta) % 2)

    @classmethod
    def from_complex(cls, z: complex) -> "Phase":
        z = complex(z)
        if z == 0:
            raise ValueError("phase functions take nonzero values")
        return cls(cmath.log(z) / (1j * math.pi))

    @classmethod
    def of(cls, value) -> "Phase":
        """Exact if given a rational angle (in units of pi), approximate if complex."""
        if isinstance(value, Phase):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls.exact(value)
        return cls.from_complex(value)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.exp, Fraction)

    @property
    def value(self) -> complex:
        if self.is_exact:
            e = self.exp % 2
            return _exact_root(e.numerator, e.denominator)
        return cmath.exp(1j * math.pi * self.exp)

    @property
    def reduced(self) -> Fraction | complex:
        if self.is_exact:
            return self.exp % 2
        return self.exp

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(_add(self.exp, other.exp))

    def __truediv__(self, other: "Phase") -> "Phase":
        return Phase(_add(self.exp, -other.exp))

    def __pow__(self, r) -> "Phase":
        """Lifted power: scale the stored exponent."""
        if isinstance(r, (int, Fraction)) and self.is_exact:
            return Phase(self.exp * Fraction(r))
        return Phase(complex(self.exp) * complex(r))

    def equals(self, other: "Phase", tol: float = 1e-9) -> bool:
        """Equality of values: exponents mod 2 when both are exact."""
        if self.is_exact and other.is_exact:
            return (self.exp - other.exp) % 2 == 0
        return abs(self.value - other.value) <= tol

    def __repr__(self):
        return f"Phase({self.exp})"


def as_phase(v) -> Phase:
    """A Phase as is, a Fraction as an exact angle in units of pi, any other number as the value itself."""
    if isinstance(v, Phase):
        return v
    if isinstance(v, Fraction):
        return Phase.exact(v)
    return Phase.from_complex(v)


@lru_cache(maxsize=None)
def _exact_root(num: int, den: int) -> complex:
    return cmath.exp(1j * math.pi * num / den)


def _add(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return complex(a) + complex(b)


def _lin(coeffs: Sequence, exps: Sequence):
    """Exact when every exponent is a Fraction, complex otherwise."""
    if all(isinstance(e, Fraction) for e in exps):
        return sum((Fraction(c) * e for c, e in zip(coeffs, exps) if c), Fraction(0))
    return sum(complex(c) * complex(e) for c, e in zip(coeffs, exps) if c)


def popcount(x: int) -> int:
    return bin(x).count("1")


def is_subset(s: int, t: int) -> bool:
    return s & ~t == 0


@dataclass(frozen=True)
class PhaseFunction:
    n: int
    values: tuple[Phase, ...]

    def __post_init__(self):
        if len(self.values) != 2 ** self.n:
            raise ValueError(f"need {2 ** self.n} values for n={self.n}, got {len(self.values)}")

    @classmethod
    def from_values(cls, n: int, values: Iterable) -> "PhaseFunction":
        """Values are read by :func:`as_phase`."""
        return cls(n, tuple(as_phase(v) for v in values))

    @classmethod
    def from_thetas(cls, n: int, thetas: Iterable) -> "PhaseFunction":
        return cls(n, tuple(Phase.exact(t) for t in thetas))

    @classmethod
    def constant(cls, n: int, value=1) -> "PhaseFunction":
        return cls(n, (as_phase(value),) * 2 ** n)

    @classmethod
    def from_callable(cls, n: int, fn) -> "PhaseFunction":
        """``fn`` takes a tuple of bits (wire 0 first)."""
        return cls.from_values(n, [fn(tuple((x >> i) & 1 for i in range(n))) for x in range(2 ** n)])

    @property
    def is_exact(self) -> bool:
        return all(v.is_exact for v in self.values)

    @property
    def exps(self) -> list:
        return [v.exp for v in self.values]

    def __getitem__(self, x: int) -> Phase:
        return self.values[x]

    def __mul__(self, other: "PhaseFunction") -> "PhaseFunction":
        _same(self, other)
        return PhaseFunction(self.n, tuple(a * b for a, b in zip(self.values, other.values)))

    def __pow__(self, r) -> "PhaseFunction":
        return PhaseFunction(self.n, tuple(v ** r for v in self.values))

    def complex_values(self) -> list[complex]:
        return [v.value for v in self.values]

    def equals(self, other: "PhaseFunction", tol: float = 1e-9) -> bool:
        return self.n == other.n and all(a.equals(b, tol) for a, b in zip(self.values, other.values))

    def lifted_equal(self, other: "PhaseFunction") -> bool:
        """Same lifted exponents, not merely the same values."""
        return self.n == other.n and all(a.exp == b.exp for a, b in zip(self.values, other.values))

    def diagonal(self):
        """Diagonal entries in big-endian order (wire 0 is the most significant bit)."""
        out = []
        for idx in range(2 ** self.n):
            x = sum(((idx >> (self.n - 1 - i)) & 1) << i for i in range(self.n))
            out.append(self.values[x].value)
        return out


def _same(f, g):
    if f.n != g.n:
        raise ValueError(f"size mismatch: n={f.n} vs n={g.n}")


def _make(n, exps) -> PhaseFunction:
    return PhaseFunction(n, tuple(Phase(e) for e in exps))


@lru_cache(maxsize=None)
def _fourier_matrix(n: int):
    scale = -Fraction(2, 2 ** n)
    return tuple(tuple(scale * (-1) ** popcount(s & t) for t in range(2 ** n)) for s in range(2 ** n))


def fourier(f: PhaseFunction) -> PhaseFunction:
    """``f^(s) = prod_t f(t)^(-2^(1-n) (-1)^(s.t))``."""
    M = _fourier_matrix(f.n)
    return _make(f.n, [_lin(row, f.exps) for row in M])


def invert_fourier(fhat: PhaseFunction, f_empty) -> PhaseFunction:
    """``f(x) = f(0) prod_s f^(s)^(s.x)``."""
    f_empty = as_phase(f_empty)
    n = fhat.n
    out = []
    for x in range(2 ** n):
        coeffs = [popcount(s & x) % 2 for s in range(2 ** n)]
        out.append(_add(f_empty.exp, _lin(coeffs, fhat.exps)))
    return _make(n, out)


def mobius(f: PhaseFunction) -> PhaseFunction:
    """``f~(s) = prod_{t <= s} f(t)^((-1)^(|t|+|s|))``."""
    n = f.n
    out = []
    for s in range(2 ** n):
        coeffs = [(-1) ** (popcount(t) + popcount(s)) if is_subset(t, s) else 0 for t in range(2 ** n)]
        out.append(_lin(coeffs, f.exps))
    return _make(n, out)


def invert_mobius(ftilde: PhaseFunction) -> PhaseFunction:
    """``f(x) = prod_{s <= x} f~(s)``."""
    n = ftilde.n
    return _make(n, [_lin([1 if is_subset(s, x) else 0 for s in range(2 ** n)], ftilde.exps)
                     for x in range(2 ** n)])


def mobius_from_fourier(fhat: PhaseFunction) -> PhaseFunction:
    """``f~(x) = prod_{t >= x} f^(t)^((-2)^(|x|-1))``."""
    n = fhat.n
    out = []
    for x in range(2 ** n):
        c = Fraction(-2) ** (popcount(x) - 1)
        out.append(_lin([c if is_subset(x, t) else 0 for t in range(2 ** n)], fhat.exps))
    return _make(n, out)


def fourier_from_mobius(ftilde: PhaseFunction) -> PhaseFunction:
    """``f^(x) = prod_{t >= x} f~(t)^(-2^(1-|t|) (-1)^|x|)``."""
    n = ftilde.n
    out = []
    for x in range(2 ** n):
        sign = (-1) ** popcount(x)
        coeffs = [-Fraction(2, 2 ** popcount(t)) * sign if is_subset(x, t) else 0 for t in range(2 ** n)]
        out.append(_lin(coeffs, ftilde.exps))
    return _make(n, out)


def vacuum_scalar(fhat: PhaseFunction) -> Phase:
    """``f(0) = prod_t f^(t)^(-1/2)``."""
    return Phase(_lin([Fraction(-1, 2)] * 2 ** fhat.n, fhat.exps))


# -- symmetric functions ---------------------------------------------------------

@lru_cache(maxsize=None)
def kravchuk(n: int, k: int, m: int) -> int:
    """``K^n_k(m) = sum_j C(m,j) C(n-m,k-j) (-1)^j``."""
    if not (0 <= k <= n and 0 <= m <= n):
        raise ValueError(f"kravchuk needs 0 <= k, m <= n (got n={n}, k={k}, m={m})")
    return sum(comb(m, j) * comb(n - m, k - j) * (-1) ** j for j in range(0, min(k, m) + 1))


@dataclass(frozen=True)
class SymmetricPhaseFunction:
    """``f(x) = F(|x|)``, stored as the ``n+1`` values ``F(0), ..., F(n)``."""

    n: int
    F: tuple[Phase, ...]

    def __post_init__(self):
        if len(self.F) != self.n + 1:
            raise ValueError(f"need {self.n + 1} values for n={self.n}, got {len(self.F)}")

    @classmethod
    def from_values(cls, n: int, values: Iterable) -> "SymmetricPhaseFunction":
        return cls(n, tuple(as_phase(v) for v in values))

    @classmethod
    def from_thetas(cls, n: int, thetas: Iterable) -> "SymmetricPhaseFunction":
        return cls(n, tuple(Phase.exact(t) for t in thetas))

    @property
    def exps(self):
        return [v.exp for v in self.F]

    @property
    def is_exact(self):
        return all(v.is_exact for v in self.F)

    def __getitem__(self, m: int) -> Phase:
        return self.F[m]

    def expand(self) -> PhaseFunction:
        return PhaseFunction(self.n, tuple(self.F[popcount(x)] for x in range(2 ** self.n)))

    def equals(self, other: "SymmetricPhaseFunction", tol: float = 1e-9) -> bool:
        return self.n == other.n and all(a.equals(b, tol) for a, b in zip(self.F, other.F))

    def lifted_equal(self, other) -> bool:
        return self.n == other.n and all(a.exp == b.exp for a, b in zip(self.F, other.F))


def _sym(n, exps) -> SymmetricPhaseFunction:
    return SymmetricPhaseFunction(n, tuple(Phase(e) for e in exps))


def kravchuk_transform(F: SymmetricPhaseFunction) -> SymmetricPhaseFunction:
    """``F^(m) = prod_k F(k)^(-2^(1-n) K^n_k(m))``."""
    n = F.n
    scale = -Fraction(2, 2 ** n)
    return _sym(n, [_lin([scale * kravchuk(n, k, m) for k in range(n + 1)], F.exps) for m in range(n + 1)])


def invert_kravchuk(Fhat: SymmetricPhaseFunction) -> SymmetricPhaseFunction:
    """``F(m) = prod_k F^(k)^(-K^n_k(m)/2)``."""
    n = Fhat.n
    return _sym(n, [_lin([Fraction(-kravchuk(n, k, m), 2) for k in range(n + 1)], Fhat.exps)
                    for m in range(n + 1)])


def binomial_transform(F: SymmetricPhaseFunction) -> SymmetricPhaseFunction:
    """``F~(m) = prod_{k<=m} F(k)^(C(m,k) (-1)^(m-k))``."""
    n = F.n
    return _sym(n, [_lin([comb(m, k) * (-1) ** (m - k) if k <= m else 0 for k in range(n + 1)], F.exps)
                    for m in range(n + 1)])


def invert_binomial(Ftilde: SymmetricPhaseFunction) -> SymmetricPhaseFunction:
    """``F(m) = prod_{k<=m} F~(k)^C(m,k)``."""
    n = Ftilde.n
    return _sym(n, [_lin([comb(m, k) if k <= m else 0 for k in range(n + 1)], Ftilde.exps)
                    for m in range(n + 1)])


# -- JSON -------------------------------------------------------------------------

def phase_to_json(p: Phase) -> dict:
    if p.is_exact:
        return {"theta_num": p.exp.numerator, "theta_den": p.exp.denominator}
    z = p.value
    return {"re": z.real, "im": z.imag}


def phase_from_json(data: dict) -> Phase:
    if "theta_num" in data:
        return Phase(Fraction(int(data["theta_num"]), int(data.get("theta_den", 1))))
    return Phase.from_complex(complex(data["re"], data["im"]))


def function_to_json(f: PhaseFunction) -> dict:
    return {"n": f.n, "values": [phase_to_json(v) for v in f.values]}


def function_from_json(data) -> PhaseFunction | SymmetricPhaseFunction:
    """A dict ``{"n", "values"}`` is a general function; a bare list is symmetric."""
    if isinstance(data, list):
        return SymmetricPhaseFunction(len(data) - 1, tuple(phase_from_json(v) for v in data))
    return PhaseFunction(int(data["n"]), tuple(phase_from_json(v) for v in data["values"]))


def symmetric_to_json(F: SymmetricPhaseFunction) -> list:
    return [phase_to_json(v) for v in F.F]
