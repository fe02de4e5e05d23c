"""Phase gadgets, generalised hyper-edges, transform diagrams and spider nests.

Subsets of wires are integers with bit ``i`` standing for wire ``i``, the
same convention as :mod:`zhscale.transforms`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .diagram import (DEFAULT_LIMIT, DEFAULT_TOL, CapacityError, Diagram, add_x_spider,
                      compare_tensors, semantics)
from .scalable import (BitMatrix, ScalableDiagram, ScaledH, ThickCup, and_arrow, arrow, as_bitmatrix,
                       hstack, mul_bool, regroup, s_compose, s_compose_all, s_permute, s_tensor, scaled_h,
                       scaled_z, single, strip, thick_identity, vstack)
from .transforms import (Phase, PhaseFunction, as_phase, SymmetricPhaseFunction, fourier, is_subset, kravchuk,
                         invert_kravchuk, mobius, mobius_from_fourier, popcount,
                         vacuum_scalar)

DELTA_LIMIT = 12


class GadgetKind(str, Enum):
    PHASE_GADGET = "phase_gadget"
    HYPER_EDGE = "hyper_edge"


def _mask(s) -> int:
    if isinstance(s, (int, np.integer)):
        return int(s)
    m = 0
    for i in s:
        m |= 1 << int(i)
    return m


def _wires(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _label(lam) -> complex:
    return as_phase(lam).value


# -- single gadgets -------------------------------------------------------------------

def _wire_spiders(d: Diagram, n: int) -> list[int]:
    """``n`` pass-through wires, each through its own Z spider."""
    spiders = [d.z() for _ in range(n)]
    ins = [d.add_input() for _ in range(n)]
    outs = [d.add_output() for _ in range(n)]
    for v, i, o in zip(spiders, ins, outs):
        d.connect(i, v)
        d.connect(v, o)
    return spiders


def _attach(d: Diagram, spiders: Sequence[int], kind: GadgetKind, mask: int, label: complex) -> None:
    if kind is GadgetKind.PHASE_GADGET:
        _, leg = add_x_spider(d)
        for w in _wires(mask):
            d.connect(spiders[w], leg())
        d.connect(leg(), d.h(label))
    else:
        box = d.h(label)
        for w in _wires(mask):
            d.connect(spiders[w], box)


def phase_gadget(s, lam, n: int | None = None) -> Diagram:
    """``|x> -> lam^(s.x) |x>``: wire spiders joined by an X spider to a unary H-box."""
    mask = _mask(s)
    n = mask.bit_length() if n is None else n
    d = Diagram()
    _attach(d, _wire_spiders(d, n), GadgetKind.PHASE_GADGET, mask, _label(lam))
    return d


def hyper_edge(s, lam, n: int | None = None) -> Diagram:
    """``|x> -> lam^[s <= x] |x>``; the empty support gives the global scalar ``lam``."""
    mask = _mask(s)
    n = mask.bit_length() if n is None else n
    d = Diagram()
    _attach(d, _wire_spiders(d, n), GadgetKind.HYPER_EDGE, mask, _label(lam))
    return d


def diagonal_of(kind: GadgetKind, mask: int, lam, n: int) -> np.ndarray:
    """The defining diagonal, big-endian (wire 0 is the most significant bit)."""
    lam = _label(lam)
    out = np.empty(2 ** n, dtype=complex)
    for idx in range(2 ** n):
        x = sum(((idx >> (n - 1 - i)) & 1) << i for i in range(n))
        if kind is GadgetKind.PHASE_GADGET:
            out[idx] = lam ** (popcount(x & mask) % 2)
        else:
            out[idx] = lam if is_subset(mask, x) else 1
    return out


@dataclass(frozen=True)
class GadgetTerm:
    kind: GadgetKind
    support: int
    param: Phase

    def __post_init__(self):
        if not self.param.is_exact and self.param.value == 0:
            raise ValueError("gadget parameter must be nonzero")

    @property
    def is_scalar(self) -> bool:
        """A hyper-edge with empty support is only a global scalar."""
        return self.kind is GadgetKind.HYPER_EDGE and self.support == 0

    def exponent(self, x: int):
        """Lifted exponent contributed at basis state ``x``."""
        hit = popcount(x & self.support) % 2 if self.kind is GadgetKind.PHASE_GADGET \
            else int(is_subset(self.support, x))
        return self.param.exp * hit

    def diagram(self, n: int) -> Diagram:
        fn = phase_gadget if self.kind is GadgetKind.PHASE_GADGET else hyper_edge
        return fn(self.support, self.param.value, n)


@dataclass(frozen=True)
class NestSpec:
    """A composition of diagonal gadgets claimed to equal ``claimed_scalar`` times the identity.

    ``profile`` optionally records a symmetric description
    ``((kind, weight, phase), ...)``; the explicit terms are then every
    support of that weight.
    """

    n: int
    terms: tuple[GadgetTerm, ...] = ()
    claimed_scalar: Phase = field(default_factory=lambda: Phase(Fraction(0)))
    profile: tuple | None = None

    @classmethod
    def symmetric(cls, n: int, gadgets: dict | None = None, hyper: dict | None = None,
                  claimed_scalar=Fraction(0)) -> "NestSpec":
        """Nest built from weight-indexed parameters (angles in units of pi or Phases)."""
        profile = []
        for kind, table in ((GadgetKind.PHASE_GADGET, gadgets or {}), (GadgetKind.HYPER_EDGE, hyper or {})):
            for k in sorted(table):
                if not 0 <= k <= n:
                    raise ValueError(f"weight {k} outside 0..{n}")
                profile.append((kind, k, Phase.of(table[k])))
        return cls(n, (), Phase.of(claimed_scalar), tuple(profile))

    def all_terms(self) -> list[GadgetTerm]:
        if self.profile is None:
            return list(self.terms)
        out = []
        for kind, k, phase in self.profile:
            for combo in itertools.combinations(range(self.n), k):
                out.append(GadgetTerm(kind, _mask(combo), phase))
        return out

    @property
    def term_count(self) -> int:
        if self.profile is None:
            return len(self.terms)
        return sum(comb(self.n, k) for _, k, _ in self.profile)

    def diagram(self) -> Diagram:
        """All gadgets hang off one Z spider per wire."""
        d = Diagram()
        spiders = _wire_spiders(d, self.n)
        for t in self.all_terms():
            _attach(d, spiders, t.kind, t.support, t.param.value)
        return d


# -- verification ---------------------------------------------------------------------

@dataclass
class NestReport:
    identity: bool
    n: int
    term_count: int
    scalar: Phase
    method: str
    witness: int | None = None
    witness_ratio: Phase | None = None
    exponents: list | None = None
    oracle: bool | None = None
    closed_form: bool | None = None
    residues: list | None = None

    def to_json(self) -> dict:
        out = {"identity": self.identity, "n": self.n, "term_count": self.term_count,
               "scalar": _phase_json(self.scalar), "method": self.method}
        if self.witness is not None:
            out["witness"] = self.witness
            out["witness_ratio"] = _phase_json(self.witness_ratio)
        if self.exponents is not None:
            out["exponents"] = [str(e) for e in self.exponents]
        for key in ("oracle", "closed_form"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.residues is not None:
            out["residues"] = [str(r) for r in self.residues]
        return out


def _phase_json(p: Phase):
    if p.is_exact:
        return {"theta_num": p.exp.numerator, "theta_den": p.exp.denominator}
    z = p.value
    return {"re": z.real, "im": z.imag}


def gadget_weight_coefficient(n: int, k: int, m: int) -> int:
    """How many weight-``k`` supports meet a weight-``m`` input an odd number of times."""
    return (comb(n, k) - kravchuk(n, k, m)) // 2


def symmetric_exponents(spec: NestSpec) -> list:
    """Lifted exponent of the nest's diagonal at each Hamming weight ``m``."""
    if spec.profile is None:
        raise ValueError("symmetric_exponents needs a profile")
    exps = []
    for m in range(spec.n + 1):
        total = Fraction(0)
        for kind, k, phase in spec.profile:
            coeff = gadget_weight_coefficient(spec.n, k, m) if kind is GadgetKind.PHASE_GADGET else comb(m, k)
            total += coeff * phase.exp if phase.is_exact else 0
        exps.append(total)
    return exps


def term_exponents(spec: NestSpec) -> list:
    """Lifted exponent at every basis state, by direct summation over the terms."""
    terms = spec.all_terms()
    return [sum((t.exponent(x) for t in terms), Fraction(0)) for x in range(2 ** spec.n)]


def verify_nest(spec: NestSpec, oracle: bool = False, tol: float = DEFAULT_TOL,
                limit: int = DEFAULT_LIMIT) -> NestReport:
    """Decide whether the nest equals ``claimed_scalar`` times the identity.

    Symmetric exact nests go through the weight-indexed (Kravchuk/binomial)
    exponents, others through direct summation over all basis states.  A
    failure reports the first witness (a weight or a basis state).
    """
    exact = all(p.is_exact for _, _, p in spec.profile) if spec.profile is not None \
        else all(t.param.is_exact for t in spec.terms)
    if not exact:
        return _verify_numeric(spec, tol, limit)
    if spec.profile is not None:
        exps, method = symmetric_exponents(spec), "kravchuk"
    else:
        exps, method = term_exponents(spec), "direct"
    target = spec.claimed_scalar.exp
    witness = next((i for i, e in enumerate(exps) if (e - target) % 2 != 0), None)
    report = NestReport(witness is None, spec.n, spec.term_count, spec.claimed_scalar, method,
                        exponents=exps)
    if witness is not None:
        report.witness = witness
        report.witness_ratio = Phase(exps[witness] - target)
    if oracle:
        report.oracle = oracle_check_nest(spec, tol, limit)
    return report


def _verify_numeric(spec, tol, limit):
    diag = np.diag(semantics(spec.diagram(), limit))
    target = spec.claimed_scalar.value
    bad = np.flatnonzero(np.abs(diag - target) > tol)
    report = NestReport(bad.size == 0, spec.n, spec.term_count, spec.claimed_scalar, "numeric", oracle=True)
    if bad.size:
        report.witness = int(bad[0])
        report.witness_ratio = Phase.from_complex(diag[bad[0]] / target)
    return report


def oracle_check_nest(spec: NestSpec, tol: float = DEFAULT_TOL, limit: int = DEFAULT_LIMIT) -> bool:
    t = semantics(spec.diagram(), limit)
    return bool(compare_tensors(t, spec.claimed_scalar.value * np.eye(2 ** spec.n), tol))


# -- the two nest identities --------------------------------------------------------

OMEGA = Fraction(1, 4)


def omega_gadget_profile(n: int) -> SymmetricPhaseFunction:
    """``G(m) = omega^((1-(-1)^m)/2)``, the phase gadget on all ``n`` wires."""
    return SymmetricPhaseFunction.from_thetas(n, [OMEGA * (m % 2) for m in range(n + 1)])


def mobius_gadget_identity(n: int) -> NestSpec:
    """Hyper-edges of weights 1, 2, 3 (omega, -i, -1) composing to the n-wire omega-gadget.

    Returned as a nest that also contains the inverse gadget, so the claim is
    that it composes to the identity.
    """
    from .transforms import binomial_transform
    Gt = binomial_transform(omega_gadget_profile(n))
    hyper = {m: Gt[m].exp for m in range(1, n + 1) if Gt[m].exp % 2 != 0}
    spec = NestSpec.symmetric(n, gadgets={n: -OMEGA}, hyper=hyper, claimed_scalar=Gt[0].exp)
    return spec


def mobius_gadget_sides(n: int) -> tuple[Diagram, Diagram]:
    """(n-wire omega gadget, its hyper-edge decomposition) as plain diagrams."""
    lhs = phase_gadget(range(n), Phase(OMEGA).value, n)
    rhs_spec = NestSpec.symmetric(n, hyper={k: v.exp for _, k, v in mobius_gadget_identity(n).profile
                                            if _ is GadgetKind.HYPER_EDGE})
    return lhs, rhs_spec.diagram()


def tof_profile(n: int, corrected: bool = False) -> dict[int, Fraction]:
    """Weight-indexed gadget angles (units of pi) of the n-wire spider nest.

    The plain profile is the one usually quoted; it composes to
    ``diag((-1)^[|x| mod 8 in 4..7])`` rather than the identity.  With
    ``corrected`` every angle is doubled, which gives a genuine identity
    for every ``n >= 4``.
    """
    if n < 4:
        raise ValueError("the nest needs n >= 4 so that weights 1, 2, 3, n are distinct")
    scale = 2 if corrected else 1
    return {1: scale * Fraction((n - 2) * (n - 3), 16), 2: scale * Fraction(-(n - 3), 8),
            3: scale * Fraction(1, 8), n: scale * Fraction(-1, 8)}


def tof_nest_identity(n: int, overrides: dict | None = None, corrected: bool = False) -> NestSpec:
    profile = tof_profile(n, corrected)
    if overrides:
        profile.update({k: Fraction(v) for k, v in overrides.items()})
    return NestSpec.symmetric(n, gadgets=profile)


def tof_inverse(n: int, overrides: dict | None = None, corrected: bool = False) -> list[Fraction]:
    """``S(m)`` exponents from inverting the Kravchuk transform of the gadget profile."""
    profile = tof_profile(n, corrected)
    if overrides:
        profile.update({k: Fraction(v) for k, v in overrides.items()})
    Shat = SymmetricPhaseFunction(n, tuple(Phase(profile.get(k, Fraction(0))) for k in range(n + 1)))
    return [v.exp for v in invert_kravchuk(Shat).F]


def tof_closed_form(n: int, m: int, corrected: bool = False) -> Fraction:
    """Closed-form exponent of ``S(m)``."""
    F = Fraction
    e = (F(m ** 3, 12) - F(3 * m * m, 8) + F(5 * m, 12) - F(n ** 3, 96) + F(n * n, 16) - F(11 * n, 96)
         + F((-1) ** m, 16))
    return 2 * e if corrected else e


def E_part(m: int) -> Fraction:
    """The m-dependent part of the closed form."""
    F = Fraction
    return F(m ** 3, 12) - F(3 * m * m, 8) + F(5 * m, 12) + F((-1) ** m, 16)


def residue_E(l: int, modulus: int = 2) -> Fraction:
    return E_part(l) % modulus


def residue_shift(k: int, l: int) -> Fraction:
    """``E(24k+l) - E(l)``; always an even integer."""
    return E_part(24 * k + l) - E_part(l)


def verify_tof(n: int, oracle: bool = False, overrides: dict | None = None,
               corrected: bool = False) -> NestReport:
    """Kravchuk inversion, closed form and residues for the n-wire nest."""
    spec = tof_nest_identity(n, overrides, corrected)
    report = verify_nest(spec, oracle=oracle)
    S = tof_inverse(n, overrides, corrected)
    report.exponents = S
    report.method = "kravchuk-inversion"
    witness = next((m for m in range(n + 1) if (S[m] - S[0]) % 2 != 0), None)
    report.identity = report.identity and witness is None
    if witness is not None:
        report.witness = witness
        report.witness_ratio = Phase(S[witness] - S[0])
    if not overrides:
        report.closed_form = all(S[m] == tof_closed_form(n, m, corrected) for m in range(n + 1))
        report.residues = [(2 * E_part(l) if corrected else E_part(l)) % 2 for l in range(24)]
    return report


# -- Delta_n and transform diagrams ------------------------------------------------------

def delta_matrix(n: int, limit: int = DELTA_LIMIT) -> BitMatrix:
    """Rows are all subsets ``s`` in counting order, ``(s, i) = [i in s]``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > limit:
        raise CapacityError(f"Delta_{n} has 2^{n} rows, above the limit 2^{limit}")
    return BitMatrix([[s >> i & 1 for i in range(n)] for s in range(2 ** n)], 2 ** n, n)


def diagonal_scalable(kind: str, M: BitMatrix, labels: Sequence[complex]) -> ScalableDiagram:
    """``|x> -> prod_r labels[r]^(row_r(x)) |x>`` on a bundle of ``M.cols`` wires.

    ``kind='red'`` uses parities of the rows, ``kind='and'`` conjunctions.
    The wire bundle is copied by a scaled Z spider into the arrow, which
    feeds one unary H-box per row; all powers of 2 cancel.
    """
    M = as_bitmatrix(M)
    w, r = M.cols, M.rows
    if r == 0:
        return thick_identity(w)
    if w == 0:
        # every row is empty: parities vanish, conjunctions hold
        value = np.prod(labels) if kind == "and" else 1
        return ScalableDiagram(scalar=complex(value))
    tap = arrow("red", M) if kind == "red" else and_arrow(M)
    branch = s_compose(single(ScaledH(tuple(complex(a) for a in labels), 1, 0)), tap)
    return s_compose(s_tensor(thick_identity(w), branch), scaled_z(w, 1, 2))


def fourier_diagram(f: PhaseFunction) -> Diagram:
    """Red ``Delta_n`` arrow into unary H-boxes carrying the Fourier coefficients."""
    fhat = fourier(f)
    s = diagonal_scalable("red", delta_matrix(f.n), fhat.complex_values())
    d = strip(s)
    d.multiply(f[0].value)
    return d


def fourier_diagram_vacuum(f: PhaseFunction) -> Diagram:
    """Same as :func:`fourier_diagram` with the vacuum scalar computed from the coefficients."""
    fhat = fourier(f)
    d = strip(diagonal_scalable("red", delta_matrix(f.n), fhat.complex_values()))
    d.multiply(vacuum_scalar(fhat).value)
    return d


def mobius_diagram(f: PhaseFunction) -> Diagram:
    """AND arrow of ``Delta_n`` into unary H-boxes carrying the Möbius coefficients."""
    return strip(diagonal_scalable("and", delta_matrix(f.n), mobius(f).complex_values()))


def diag_tensor(f: PhaseFunction) -> np.ndarray:
    return np.diag(np.array(f.diagonal(), dtype=complex))


# -- mining -------------------------------------------------------------------------------

@dataclass
class MiningResult:
    specs: list[NestSpec]
    searched: int
    n: int
    denominator: int


def mine_nests(n: int, denominator: int = 16, gadget_weights: Iterable[int] = (1, 2, 3),
               hyper_weights: Iterable[int] = (), include_n: bool = True, cap: int = 1 << 24,
               nontrivial_only: bool = False) -> MiningResult:
    """All weight-symmetric nests on the lattice ``{j/denominator}`` that compose to the identity.

    Gadget weights ``k`` put a phase gadget on every ``k``-subset; hyper
    weights a hyper-edge.  With ``include_n`` the full-support gadget is
    added.  Enumeration is in lexicographic order of the angle numerators.
    """
    gw = sorted(set(gadget_weights) | ({n} if include_n else set()))
    hw = sorted(set(hyper_weights))
    if any(not 1 <= k <= n for k in gw + hw):
        raise ValueError(f"weights must lie in 1..{n}")
    slots = [(GadgetKind.PHASE_GADGET, k) for k in gw] + [(GadgetKind.HYPER_EDGE, k) for k in hw]
    base = 2 * denominator
    total = base ** len(slots)
    if total > cap:
        raise CapacityError(f"search space {total} exceeds the cap {cap}")
    coeffs = np.array([[gadget_weight_coefficient(n, k, m) if kind is GadgetKind.PHASE_GADGET else comb(m, k)
                        for m in range(n + 1)] for kind, k in slots], dtype=np.int64)
    # a[slot] runs over 0..base-1; exponent numerator at weight m is sum a*coeff
    found = []
    if slots:
        grids = np.indices((base,) * len(slots)).reshape(len(slots), -1).T
        values = (grids @ coeffs) % base
        ok = np.flatnonzero((values == 0).all(axis=1))
        hits = grids[ok]
    else:
        hits = np.zeros((1, 0), dtype=np.int64)
    for row in hits:
        if nontrivial_only and not row.any():
            continue
        gadgets = {k: Fraction(int(a), denominator) for (kind, k), a in zip(slots, row)
                   if kind is GadgetKind.PHASE_GADGET and a}
        hyper = {k: Fraction(int(a), denominator) for (kind, k), a in zip(slots, row)
                 if kind is GadgetKind.HYPER_EDGE and a}
        found.append(NestSpec.symmetric(n, gadgets=gadgets, hyper=hyper))
    return MiningResult(found, total, n, denominator)


def same_profile(spec: NestSpec, gadgets: dict, hyper: dict | None = None) -> bool:
    """Whether a mined spec has these angles (compared mod 2)."""
    want = {(GadgetKind.PHASE_GADGET, k): Fraction(v) % 2 for k, v in gadgets.items()}
    want.update({(GadgetKind.HYPER_EDGE, k): Fraction(v) % 2 for k, v in (hyper or {}).items()})
    want = {key: v for key, v in want.items() if v}
    have = {(kind, k): p.exp % 2 for kind, k, p in spec.profile if p.exp % 2}
    return have == want


# -- Fourier hyper pivot ----------------------------------------------------------------

def _support_list(M: BitMatrix, offset: int = 0) -> list[int]:
    return [sum(1 << (j + offset) for j in range(M.cols) if M[i, j]) for i in range(M.rows)]


def pivot_diagram(y_supports: Sequence[int], z_supports: Sequence[int], z_labels: Sequence[complex],
                  n_wires: int, scalar: complex = 1) -> Diagram:
    """Two internal spiders ``y``, ``z`` joined by a Hadamard.

    Each ``y`` support gets a (-1) H-box touching ``y``; the ``z`` support
    ``k`` gets an H-box labelled ``z_labels[k]`` touching ``z``.
    """
    d = Diagram(scalar)
    spiders = _wire_spiders(d, n_wires)
    y, z = d.z(), d.z()
    had = d.h()
    d.connect(y, had)
    d.connect(had, z)
    for sup in y_supports:
        box = d.h(-1)
        d.connect(y, box)
        for w in _wires(sup):
            d.connect(spiders[w], box)
    for sup, lab in zip(z_supports, z_labels):
        box = d.h(lab)
        d.connect(z, box)
        for w in _wires(sup):
            d.connect(spiders[w], box)
    return d


def hypergraph_diagram(supports: Sequence[int], labels: Sequence[complex], n_wires: int,
                       scalar: complex = 1) -> Diagram:
    d = Diagram(scalar)
    spiders = _wire_spiders(d, n_wires)
    for sup, lab in zip(supports, labels):
        _attach(d, spiders, GadgetKind.HYPER_EDGE, sup, lab)
    return d


def fhp_terms(z_supports: Sequence[int], y_supports: Sequence[int], lam: Sequence) -> list[tuple[int, complex]]:
    """Right-hand hyper-edges: ``f_i | union(e_b, b in S)`` with label ``lam_i^((-2)^(|S|-1))``."""
    out = []
    m = len(y_supports)
    for i, f in enumerate(z_supports):
        lam_i = _label(lam[i])
        for S in range(1, 2 ** m):
            sup = f
            for b in range(m):
                if S >> b & 1:
                    sup |= y_supports[b]
            out.append((sup, lam_i ** ((-2) ** (popcount(S) - 1))))
    return out


def fourier_hyper_pivot(n: int, m: int, lam: Sequence) -> tuple[Diagram, Diagram]:
    """The !-box form: ``n`` labelled H-boxes on ``z`` and ``m`` (-1) boxes on ``y``, one wire each.

    Wires ``0..n-1`` carry the ``z`` side, wires ``n..n+m-1`` the ``y`` side.
    """
    if len(lam) != n:
        raise ValueError(f"need {n} labels, got {len(lam)}")
    return fhp_supports([1 << i for i in range(n)], [1 << (n + b) for b in range(m)], lam, n + m)


def fhp_supports(z_supports, y_supports, lam, n_wires) -> tuple[Diagram, Diagram]:
    labels = [_label(a) for a in lam]
    lhs = pivot_diagram(y_supports, z_supports, labels, n_wires)
    terms = fhp_terms(z_supports, y_supports, labels)
    rhs = hypergraph_diagram([s for s, _ in terms], [a for _, a in terms], n_wires)
    return lhs, rhs


def lifted_vector(n: int, m: int) -> BitMatrix:
    """``nm x n``: ``m`` stacked copies of the identity (bit ``b*n + i`` copies word position ``i``)."""
    return vstack(*([BitMatrix.identity(n)] * m)) if m else BitMatrix.zeros(0, n)


def copy_selector(n: int, m: int) -> BitMatrix:
    """``nm x m``: bit ``b*n + i`` selects copy ``b``."""
    return BitMatrix([[1 if r // n == b else 0 for b in range(m)] for r in range(n * m)], n * m, m)


def copies_of(i: int, n: int, m: int) -> int:
    """The word of ``m`` copies of the size-``n`` word with a single 1 at ``i``."""
    return sum(1 << (b * n + i) for b in range(m))


def fhp_mu_appendix(lam: Sequence, m: int) -> PhaseFunction:
    """Hyper-edge labels from the lifted Möbius-from-Fourier formula applied to Lambda."""
    lam = [as_phase(a) for a in lam]
    n = len(lam)
    big = n * m
    table = [Phase(Fraction(0))] * 2 ** big
    for i, a in enumerate(lam):
        table[copies_of(i, n, m)] = a
    return mobius_from_fourier(PhaseFunction(big, tuple(table)))


def fhp_mu_case(lam: Sequence, m: int) -> list[Phase]:
    """Case form: ``mu_0 = prod lam_i^(-1/2)``; ``lam_i^((-2)^(|s|-1))`` for ``0 < s <= copies(i)``."""
    lam = [as_phase(a) for a in lam]
    n = len(lam)
    out = []
    for s in range(2 ** (n * m)):
        if s == 0:
            acc = Phase(Fraction(0))
            for a in lam:
                acc = acc * a ** Fraction(-1, 2)
            out.append(acc)
            continue
        owner = [i for i in range(n) if is_subset(s, copies_of(i, n, m))]
        if owner:
            out.append(lam[owner[0]] ** Fraction((-2) ** (popcount(s) - 1)))
        else:
            out.append(Phase(Fraction(0)))
    return out


def fhp_scalable(A, B, lam: Sequence) -> tuple[ScalableDiagram, ScalableDiagram]:
    """Scalable Fourier hyper pivot on bundles ``A.cols`` (z side) and ``B.cols`` (y side).

    Row ``i`` of ``A`` is the support of the box labelled ``lam[i]``, row ``b``
    of ``B`` a (-1) box on ``y``.  The right side is one AND arrow
    ``[C | D]`` with ``C = Delta_nm . copies . A`` and ``D = Delta_nm . selector . B``
    feeding H-boxes ``mu_s``.  Both sides carry the floating scalar ``mu_0``.
    """
    A, B = as_bitmatrix(A), as_bitmatrix(B)
    n, m = A.rows, B.rows
    if len(lam) != n:
        raise ValueError(f"need {n} labels, got {len(lam)}")
    p, q = A.cols, B.cols
    mu = fhp_mu_appendix(lam, m)
    mu0 = mu[0].value
    # left: z-side boxes through A, y-side boxes through B, y and z joined by a Hadamard
    lhs = _pivot_scalable(A, B, [_label(a) for a in lam], mu0)
    delta = delta_matrix(n * m)
    C = mul_bool(delta, mul_bool(lifted_vector(n, m), A))
    D = mul_bool(delta, mul_bool(copy_selector(n, m), B))
    rhs = s_compose_all(regroup([p + q], [p, q]), diagonal_scalable("and", hstack(C, D), mu.complex_values()),
                        regroup([p, q], [p + q]))
    return lhs, rhs


def _pivot_scalable(A: BitMatrix, B: BitMatrix, labels, scalar) -> ScalableDiagram:
    """``y``/``z`` pivot where the boxes see the wire bundles through AND arrows.

    ``z`` is copied ``n`` times and ``y`` ``m`` times by red all-ones arrows;
    a scaled H-box pairs each copy with the conjunction of its support.
    """
    n, m, p, q = A.rows, B.rows, A.cols, B.cols
    if min(n, m, p, q) < 1:
        raise ValueError("pivot needs nonempty box families and wire bundles")
    yz = s_compose(s_tensor(scaled_h(1), thick_identity(1)), single(ThickCup(1)))
    copies = s_compose(s_tensor(arrow("red", BitMatrix.ones(n, 1)), arrow("red", BitMatrix.ones(m, 1))), yz)
    boxes = s_tensor(single(ScaledH(tuple(labels), 2, 0)), single(ScaledH((-1,) * m, 2, 0)))
    effect = s_compose(boxes, s_permute(s_tensor(thick_identity(n, m), copies), outputs=[0, 2, 1, 3]))
    taps = s_compose(effect, s_tensor(and_arrow(A), and_arrow(B)))
    copy = s_permute(s_tensor(scaled_z(p, 1, 2), scaled_z(q, 1, 2)), outputs=[0, 2, 1, 3])
    out = s_compose(s_tensor(thick_identity(p, q), taps), copy)
    out.scalar *= scalar
    return out
