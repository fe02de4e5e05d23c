"""Scalable ZH: sized wires, dividers/gatherers, scaled generators and matrix arrows.

Scalable diagrams are stripped to plain ZH with :func:`strip`.  The closed-form
interpretations (:func:`interpret_arrow`, :func:`interpret_scaled`,
:func:`interpret`) never go through the stripped graph and serve as the
second route every stripping result is checked against.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .diagram import (DEFAULT_LIMIT, DEFAULT_TOL, ArityError, CapacityError, Comparison,
                      Diagram, add_not, add_x_spider, compare_tensors, contract_network,
                      semantics, splice)


class TypeMismatch(ValueError):
    pass


class PreconditionError(ValueError):
    pass


# -- bit matrices ----------------------------------------------------------

class BitMatrix:
    """Immutable {0,1} matrix; zero rows or columns are allowed."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries, rows: int | None = None, cols: int | None = None):
        arr = np.asarray(entries, dtype=np.int64)
        if arr.size == 0:
            r = rows if rows is not None else (arr.shape[0] if arr.ndim == 2 else 0)
            c = cols if cols is not None else (arr.shape[1] if arr.ndim == 2 else 0)
            arr = np.zeros((r, c), dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("BitMatrix needs a 2-d array")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("BitMatrix entries must be 0 or 1")
        if (rows is not None and rows != arr.shape[0]) or (cols is not None and cols != arr.shape[1]):
            raise ValueError("inconsistent BitMatrix dimensions")
        self.rows, self.cols = arr.shape
        self._data = tuple(tuple(int(v) for v in row) for row in arr)

    @classmethod
    def zeros(cls, rows, cols):
        return cls(np.zeros((rows, cols), dtype=np.int64), rows, cols)

    @classmethod
    def ones(cls, rows, cols):
        return cls(np.ones((rows, cols), dtype=np.int64), rows, cols)

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n, dtype=np.int64), n, n)

    @classmethod
    def from_int(cls, value: int, rows: int, cols: int):
        """Row-major bits of ``value``, most significant first."""
        bits = [(value >> (rows * cols - 1 - k)) & 1 for k in range(rows * cols)]
        return cls(np.array(bits, dtype=np.int64).reshape(rows, cols), rows, cols)

    @property
    def array(self) -> np.ndarray:
        return np.array(self._data, dtype=np.int64).reshape(self.rows, self.cols)

    @property
    def T(self) -> "BitMatrix":
        return BitMatrix(self.array.T, self.cols, self.rows)

    def tolist(self):
        return [list(r) for r in self._data]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __eq__(self, other):
        return isinstance(other, BitMatrix) and (self.rows, self.cols, self._data) == (
            other.rows, other.cols, other._data)

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self):
        return f"BitMatrix({self.tolist()}, rows={self.rows}, cols={self.cols})"

    def at_most_one_per_row(self) -> bool:
        return all(sum(r) <= 1 for r in self._data)

    def apply_f2(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(sum(a * b for a, b in zip(row, x)) % 2) for row in self._data)

    def apply_bool(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(any(a and b for a, b in zip(row, x))) for row in self._data)


def as_bitmatrix(A) -> BitMatrix:
    return A if isinstance(A, BitMatrix) else BitMatrix(A)


def _check_inner(B: BitMatrix, A: BitMatrix):
    if B.cols != A.rows:
        raise ArityError(f"cannot multiply {B.rows}x{B.cols} by {A.rows}x{A.cols}")


def mul_f2(B, A) -> BitMatrix:
    """``B A`` over the two-element field."""
    B, A = as_bitmatrix(B), as_bitmatrix(A)
    _check_inner(B, A)
    return BitMatrix((B.array @ A.array) % 2, B.rows, A.cols)


def mul_bool(B, A) -> BitMatrix:
    """``B · A`` over the Boolean semiring (or/and)."""
    B, A = as_bitmatrix(B), as_bitmatrix(A)
    _check_inner(B, A)
    return BitMatrix(((B.array @ A.array) > 0).astype(np.int64), B.rows, A.cols)


def all_bitmatrices(rows: int, cols: int):
    for v in range(2 ** (rows * cols)):
        yield BitMatrix.from_int(v, rows, cols)


def hstack(*ms: BitMatrix) -> BitMatrix:
    rows = ms[0].rows
    return BitMatrix(np.hstack([m.array for m in ms]), rows, sum(m.cols for m in ms))


def vstack(*ms: BitMatrix) -> BitMatrix:
    cols = ms[0].cols
    return BitMatrix(np.vstack([m.array for m in ms]), sum(m.rows for m in ms), cols)


# -- generators -------------------------------------------------------------

class WireType(tuple):
    """A type ``(n1)+...+(nm)``; the empty type is ``(0)``."""

    def __new__(cls, sizes=()):
        sizes = tuple(int(s) for s in sizes)
        if any(s < 0 for s in sizes):
            raise ValueError("wire sizes must be non-negative")
        return super().__new__(cls, sizes)

    @property
    def size(self) -> int:
        return sum(self)


@dataclass(frozen=True)
class ScaledZ:
    phases: tuple[float, ...]
    n_in: int = 1
    n_out: int = 1

    @property
    def ports(self):
        return [len(self.phases)] * (self.n_in + self.n_out)


@dataclass(frozen=True)
class ScaledH:
    labels: tuple[complex, ...]
    n_in: int = 1
    n_out: int = 1

    @property
    def ports(self):
        return [len(self.labels)] * (self.n_in + self.n_out)


@dataclass(frozen=True)
class Divider:
    """``(n+1) -> (1) + (n)``."""
    n: int
    n_in = 1

    @property
    def ports(self):
        return [self.n + 1, 1, self.n]


@dataclass(frozen=True)
class Gatherer:
    """``(1) + (n) -> (n+1)``."""
    n: int
    n_in = 2

    @property
    def ports(self):
        return [1, self.n, self.n + 1]


@dataclass(frozen=True)
class RedArrow:
    """``|x> -> 2^((m-n)/4) |Ax>`` over F2, ``A`` of shape m x n."""
    A: BitMatrix
    n_in = 1

    @property
    def ports(self):
        return [self.A.cols, self.A.rows]


@dataclass(frozen=True)
class YellowArrow:
    """``|x> -> 2^((m-n)/4) |A·x>`` over the Boolean semiring."""
    A: BitMatrix
    n_in = 1

    @property
    def ports(self):
        return [self.A.cols, self.A.rows]


@dataclass(frozen=True)
class ThickCup:
    n: int
    n_in = 0

    @property
    def ports(self):
        return [self.n, self.n]


@dataclass(frozen=True)
class ThickCap:
    n: int
    n_in = 2

    @property
    def ports(self):
        return [self.n, self.n]


@dataclass(frozen=True)
class ThickSwap:
    n: int
    n2: int
    n_in = 2

    @property
    def ports(self):
        return [self.n, self.n2, self.n2, self.n]


ScalableGenerator = (ScaledZ, ScaledH, Divider, Gatherer, RedArrow, YellowArrow,
                     ThickCup, ThickCap, ThickSwap)


class SEnd(NamedTuple):
    node: int | None
    port: int


@dataclass
class ScalableDiagram:
    nodes: dict = field(default_factory=dict)
    wires: list = field(default_factory=list)
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    sizes: dict = field(default_factory=dict)
    scalar: complex = 1

    def add(self, gen) -> int:
        nid = max(self.nodes, default=-1) + 1
        self.nodes[nid] = gen
        return nid

    def add_input(self, size: int) -> SEnd:
        idx = len(self.sizes)
        self.sizes[idx] = size
        self.inputs.append(idx)
        return SEnd(None, idx)

    def add_output(self, size: int) -> SEnd:
        idx = len(self.sizes)
        self.sizes[idx] = size
        self.outputs.append(idx)
        return SEnd(None, idx)

    def size_of(self, e: SEnd) -> int:
        if e.node is None:
            return self.sizes[e.port]
        return self.nodes[e.node].ports[e.port]

    def connect(self, a: SEnd, b: SEnd) -> None:
        if self.size_of(a) != self.size_of(b):
            raise TypeMismatch(f"wire joins size {self.size_of(a)} to size {self.size_of(b)}")
        self.wires.append((a, b))

    @property
    def in_type(self):
        return [self.sizes[i] for i in self.inputs]

    @property
    def out_type(self):
        return [self.sizes[i] for i in self.outputs]

    def validate(self):
        used = set()
        for a, b in self.wires:
            if self.size_of(a) != self.size_of(b):
                raise TypeMismatch("wire size mismatch")
            for e in (a, b):
                if e in used:
                    raise TypeMismatch(f"end {e} used twice")
                used.add(e)
        for nid, gen in self.nodes.items():
            for p in range(len(gen.ports)):
                if SEnd(nid, p) not in used and gen.ports[p]:
                    raise TypeMismatch(f"port {p} of node {nid} is unwired")
        for idx in self.inputs + self.outputs:
            if SEnd(None, idx) not in used and self.sizes[idx]:
                raise TypeMismatch(f"boundary {idx} is unwired")


# -- small constructors -----------------------------------------------------

def single(gen) -> ScalableDiagram:
    """A diagram holding one generator with its ports on the boundary."""
    s = ScalableDiagram()
    v = s.add(gen)
    ports = gen.ports
    for p in range(gen.n_in):
        s.connect(s.add_input(ports[p]), SEnd(v, p))
    for p in range(gen.n_in, len(ports)):
        s.connect(SEnd(v, p), s.add_output(ports[p]))
    return s


def arrow(kind: str, A) -> ScalableDiagram:
    A = as_bitmatrix(A)
    return single(RedArrow(A) if kind == "red" else YellowArrow(A))


def scaled_z(k: int, n_in: int = 1, n_out: int = 1, phases=None) -> ScalableDiagram:
    return single(ScaledZ(tuple(phases) if phases is not None else (0.0,) * k, n_in, n_out))


def scaled_h(k: int, n_in: int = 1, n_out: int = 1, labels=None) -> ScalableDiagram:
    return single(ScaledH(tuple(labels) if labels is not None else (-1,) * k, n_in, n_out))


def thick_identity(*sizes: int) -> ScalableDiagram:
    s = ScalableDiagram()
    for k in sizes:
        i = s.add_input(k)
        o = s.add_output(k)
        s.connect(i, o)
    return s


def scaled_x(k: int, n_in: int = 1, n_out: int = 1) -> ScalableDiagram:
    """X-spiders of size ``k``: a scaled Z with scaled Hadamards on all legs."""
    s = ScalableDiagram()
    z = s.add(ScaledZ((0.0,) * k, n_in, n_out))
    for p in range(n_in + n_out):
        h = s.add(ScaledH((-1,) * k, 1, 1))
        if p < n_in:
            s.connect(s.add_input(k), SEnd(h, 0))
            s.connect(SEnd(h, 1), SEnd(z, p))
        else:
            s.connect(SEnd(z, p), SEnd(h, 0))
            s.connect(SEnd(h, 1), s.add_output(k))
    return s


def scaled_not(k: int) -> ScalableDiagram:
    """NOT on every bit of a size-``k`` wire."""
    return s_compose_all(scaled_h(k), scaled_z(k, phases=[np.pi] * k), scaled_h(k))


def and_arrow(A) -> ScalableDiagram:
    """``|x> -> 2^((m-n)/4) |A ⊙ x>`` where row ``i`` is the AND of its support."""
    A = as_bitmatrix(A)
    return s_compose_all(scaled_not(A.rows), arrow("yellow", A), scaled_not(A.cols))


def s_relabel(s: ScalableDiagram, off: int, bmap: dict):
    def end(e):
        if e.node is None:
            return bmap[e.port]
        return SEnd(e.node + off, e.port)
    return [(end(a), end(b)) for a, b in s.wires]


def _is_j(e):
    return isinstance(e, tuple) and len(e) == 2 and e[0] == "J"


def _drop_empty(s: ScalableDiagram) -> ScalableDiagram:
    """Same diagram without its size-0 wires, which carry nothing."""
    out = ScalableDiagram(s.nodes, [w for w in s.wires if s.size_of(w[0])], s.inputs, s.outputs,
                          s.sizes, s.scalar)
    return out


def s_compose(s1: ScalableDiagram, s2: ScalableDiagram) -> ScalableDiagram:
    """``s1 ∘ s2``."""
    if s2.out_type != s1.in_type:
        raise TypeMismatch(f"cannot compose type {s2.out_type} into {s1.in_type}")
    out = ScalableDiagram(scalar=s1.scalar * s2.scalar)
    off2 = max(s1.nodes, default=-1) + 1
    for nid, g in s1.nodes.items():
        out.nodes[nid] = g
    for nid, g in s2.nodes.items():
        out.nodes[nid + off2] = g
    m1, m2 = {}, {}
    for k, (o, i) in enumerate(zip(s2.outputs, s1.inputs)):
        m2[o] = ("J", k)
        m1[i] = ("J", k)
    for i in s2.inputs:
        m2[i] = out.add_input(s2.sizes[i])
    for o in s1.outputs:
        m1[o] = out.add_output(s1.sizes[o])
    wires = s_relabel(_drop_empty(s1), 0, m1) + s_relabel(_drop_empty(s2), off2, m2)
    merged, loops = splice(wires, _is_j)
    out.wires = merged
    if loops:
        raise TypeMismatch("composition closes a thick loop; add it as an explicit scalar")
    return out


def s_compose_all(*ds: ScalableDiagram) -> ScalableDiagram:
    out = ds[-1]
    for d in reversed(ds[:-1]):
        out = s_compose(d, out)
    return out


def s_tensor(*ds: ScalableDiagram) -> ScalableDiagram:
    out = ScalableDiagram()
    maps = []
    off = 0
    offsets = []
    for s in ds:
        offsets.append(off)
        for nid, g in s.nodes.items():
            out.nodes[nid + off] = g
        off += max(s.nodes, default=-1) + 1
        out.scalar *= s.scalar
        maps.append({})
    for s, m in zip(ds, maps):
        for i in s.inputs:
            m[i] = out.add_input(s.sizes[i])
    for s, m in zip(ds, maps):
        for o in s.outputs:
            m[o] = out.add_output(s.sizes[o])
    for s, m, o in zip(ds, maps, offsets):
        out.wires += s_relabel(s, o, m)
    return out


def s_transpose(s: ScalableDiagram) -> ScalableDiagram:
    out = ScalableDiagram(dict(s.nodes), list(s.wires), list(s.outputs), list(s.inputs),
                          dict(s.sizes), s.scalar)
    return out


def s_permute(s: ScalableDiagram, outputs=None, inputs=None) -> ScalableDiagram:
    out = ScalableDiagram(dict(s.nodes), list(s.wires), list(s.inputs), list(s.outputs),
                          dict(s.sizes), s.scalar)
    if outputs is not None:
        out.outputs = [s.outputs[k] for k in outputs]
    if inputs is not None:
        out.inputs = [s.inputs[k] for k in inputs]
    return out


# -- wire stripping ----------------------------------------------------------

def _expand(d: Diagram, gen, fresh) -> tuple[list[list], list[tuple]]:
    """Plain expansion of one generator.

    Returns, per port, the list of plain ends (one per bit), plus internal
    links between junction points created by pass-through generators.
    """
    ports = gen.ports
    if isinstance(gen, ScaledZ):
        spiders = [d.z(a) for a in gen.phases]
        return [[d.port(v) for v in spiders] for _ in ports], []
    if isinstance(gen, ScaledH):
        boxes = [d.h(a) for a in gen.labels]
        return [[d.port(v) for v in boxes] for _ in ports], []
    if isinstance(gen, RedArrow):
        A = gen.A
        cols = [d.z() for _ in range(A.cols)]
        ins = [d.port(c) for c in cols]
        outs = []
        for i in range(A.rows):
            _, leg = add_x_spider(d)
            for j in range(A.cols):
                if A[i, j]:
                    d.connect(cols[j], leg())
            outs.append(d.port(leg()))
        return [ins, outs], []
    if isinstance(gen, YellowArrow):
        A = gen.A
        cols = [d.z() for _ in range(A.cols)]
        ins = [d.port(c) for c in cols]
        outs = []
        for i in range(A.rows):
            conj = d.h(-1)
            for j in range(A.cols):
                if A[i, j]:
                    a, b = add_not(d)
                    d.connect(cols[j], a)
                    d.connect(b, conj)
            had = d.h()
            d.connect(conj, had)
            a, b = add_not(d)
            d.connect(had, a)
            outs.append(d.port(b))
        return [ins, outs], []
    # pass-through generators: every bit is a junction
    ends = [[fresh() for _ in range(size)] for size in ports]
    links = []
    if isinstance(gen, Divider):
        links = list(zip(ends[0], ends[1] + ends[2]))
    elif isinstance(gen, Gatherer):
        links = list(zip(ends[0] + ends[1], ends[2]))
    elif isinstance(gen, (ThickCup, ThickCap)):
        links = list(zip(ends[0], ends[1]))
    elif isinstance(gen, ThickSwap):
        links = list(zip(ends[0], ends[3])) + list(zip(ends[1], ends[2]))
    else:
        raise TypeError(f"unknown scalable generator {gen!r}")
    return ends, links


def regroup(in_sizes: Sequence[int], out_sizes: Sequence[int]) -> ScalableDiagram:
    """Pure rewiring ``(a1)+...+(ak) -> (b1)+...+(bl)`` built from dividers and gatherers."""
    if sum(in_sizes) != sum(out_sizes):
        raise TypeMismatch("regrouping must preserve the total size")
    s = ScalableDiagram()
    singles = []
    for k in in_sizes:
        cur = s.add_input(k)
        for rest in range(k - 1, 0, -1):
            v = s.add(Divider(rest))
            s.connect(cur, SEnd(v, 0))
            singles.append(SEnd(v, 1))
            cur = SEnd(v, 2)
        if k:
            singles.append(cur)
    pos = 0
    pending = []
    for k in out_sizes:
        word = singles[pos:pos + k]
        pos += k
        if not k:
            pending.append(("empty", None))
            continue
        cur = word[-1]
        for j in range(k - 2, -1, -1):
            v = s.add(Gatherer(k - 1 - j))
            s.connect(word[j], SEnd(v, 0))
            s.connect(cur, SEnd(v, 1))
            cur = SEnd(v, 2)
        pending.append(("word", cur))
    for tag, cur in pending:
        out = s.add_output(0 if tag == "empty" else s.size_of(cur))
        if tag == "word":
            s.connect(cur, out)
    return s


def strip(s: ScalableDiagram) -> Diagram:
    """Wire-stripping: the plain ZH diagram ``|s|`` on ``|a| -> |b|`` wires."""
    s.validate()
    d = Diagram(s.scalar)
    counter = itertools.count()

    def fresh():
        return ("J", next(counter))

    port_ends: dict[SEnd, list] = {}
    wires: list[tuple] = []
    for nid in sorted(s.nodes):
        ends, links = _expand(d, s.nodes[nid], fresh)
        for p, es in enumerate(ends):
            port_ends[SEnd(nid, p)] = es
        wires += links
    for idx in s.inputs:
        port_ends[SEnd(None, idx)] = [d.add_input() for _ in range(s.sizes[idx])]
    for idx in s.outputs:
        port_ends[SEnd(None, idx)] = [d.add_output() for _ in range(s.sizes[idx])]
    for a, b in s.wires:
        wires += list(zip(port_ends[a], port_ends[b]))
    merged, loops = splice(wires, _is_j)
    for a, b in merged:
        d.connect(a, b)
    d.scalar *= 2 ** loops
    return d


@lru_cache(maxsize=None)
def arrow_scale(kind: str, m: int, n: int) -> float:
    """Ratio between the expanded arrow and its interpretation formula.

    Measured once per (kind, m, n) on the all-ones matrix through the
    contraction oracle; the expansions are built so that this is exactly 1.
    """
    A = BitMatrix.ones(m, n)
    got = semantics(strip(arrow(kind, A)))
    want = interpret_arrow(kind, A)
    return float(abs(got[0, 0]) / abs(want[0, 0]))


# -- closed-form interpretations -------------------------------------------

def _bits(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> (n - 1 - i)) & 1 for i in range(n))


def _index(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | int(b)
    return v


def interpret_arrow(kind: str, A, limit: int = DEFAULT_LIMIT) -> np.ndarray:
    """Closed-form matrix of a red or yellow arrow."""
    A = as_bitmatrix(A)
    m, n = A.rows, A.cols
    if m + n > limit:
        raise CapacityError(f"arrow of size {m}x{n} exceeds the limit {limit}")
    apply = A.apply_f2 if kind == "red" else A.apply_bool
    M = np.zeros((2 ** m, 2 ** n), dtype=complex)
    for x in range(2 ** n):
        M[_index(apply(_bits(x, n))), x] = 2 ** ((m - n) / 4)
    return M


def interpret_scaled(gen, limit: int = DEFAULT_LIMIT) -> np.ndarray:
    """Closed-form matrix of a scaled spider, H-box or pure wiring generator."""
    if isinstance(gen, (RedArrow, YellowArrow)):
        return interpret_arrow("red" if isinstance(gen, RedArrow) else "yellow", gen.A, limit)
    ports = gen.ports
    n_in = gen.n_in
    total = sum(ports)
    if total > limit:
        raise CapacityError(f"generator with {total} wires exceeds the limit {limit}")
    out_bits = sum(ports[n_in:])
    in_bits = sum(ports[:n_in])
    M = np.zeros((2 ** out_bits, 2 ** in_bits), dtype=complex)
    if isinstance(gen, ScaledZ):
        k = len(gen.phases)
        deg = gen.n_in + gen.n_out
        for x in range(2 ** k):
            xb = _bits(x, k)
            val = 2 ** (k * (deg - 2) / 4) * cmath.exp(1j * sum(b * a for b, a in zip(xb, gen.phases)))
            M[_index(xb * gen.n_out), _index(xb * gen.n_in)] += val
        return M
    if isinstance(gen, ScaledH):
        k = len(gen.labels)
        deg = gen.n_in + gen.n_out
        for r in range(2 ** out_bits):
            for c in range(2 ** in_bits):
                words = _bits(r, out_bits) + _bits(c, in_bits)
                val = 2 ** (-k * deg / 4)
                for j, a in enumerate(gen.labels):
                    if all(words[i * k + j] for i in range(deg)):
                        val *= a
                M[r, c] = val
        return M
    if isinstance(gen, (Divider, Gatherer)):
        return np.eye(2 ** in_bits, dtype=complex)
    if isinstance(gen, ThickCup):
        return np.eye(2 ** gen.n, dtype=complex).reshape(-1, 1)
    if isinstance(gen, ThickCap):
        return np.eye(2 ** gen.n, dtype=complex).reshape(1, -1)
    if isinstance(gen, ThickSwap):
        a, b = 2 ** gen.n, 2 ** gen.n2
        return np.eye(a * b, dtype=complex).reshape(a, b, a, b).transpose(1, 0, 2, 3).reshape(a * b, a * b)
    raise TypeError(gen)


def _generator_tensor_by_port(gen, limit) -> np.ndarray:
    """Closed-form tensor with one axis of dimension ``2**size`` per port."""
    M = interpret_scaled(gen, limit)
    ports = gen.ports
    n_in = gen.n_in
    outs, ins = ports[n_in:], ports[:n_in]
    t = M.reshape([2 ** p for p in outs] + [2 ** p for p in ins])
    perm = list(range(len(outs), len(outs) + len(ins))) + list(range(len(outs)))
    return np.transpose(t, perm)


def interpret(s: ScalableDiagram, limit: int = DEFAULT_LIMIT) -> np.ndarray:
    """Contract the closed-form generator tensors along thick wires."""
    s.validate()
    label = {}
    tensors = []
    for w, (a, b) in enumerate(s.wires):
        if a.node is None and b.node is None:
            la, lb = ("w", w, 0), ("w", w, 1)
            label[a], label[b] = la, lb
            tensors.append((np.eye(2 ** s.sizes[a.port], dtype=complex), [la, lb]))
        else:
            label[a] = label[b] = ("w", w)
    # empty (size 0) ends may stay unwired; give them a trivial axis
    empties = [SEnd(nid, p) for nid, g in s.nodes.items() for p in range(len(g.ports))]
    empties += [SEnd(None, i) for i in s.inputs + s.outputs]
    for e in empties:
        if e not in label:
            label[e] = ("empty", e)
            tensors.append((np.ones(1, dtype=complex), [label[e]]))
    for nid, gen in s.nodes.items():
        tensors.append((_generator_tensor_by_port(gen, limit),
                        [label[SEnd(nid, p)] for p in range(len(gen.ports))]))
    open_labels = [label[SEnd(None, i)] for i in s.outputs + s.inputs]
    t = contract_network(tensors, open_labels, limit=limit)
    out_bits = sum(s.out_type)
    in_bits = sum(s.in_type)
    return s.scalar * t.reshape(2 ** out_bits, 2 ** in_bits)


def s_semantics(s: ScalableDiagram, limit: int = DEFAULT_LIMIT) -> np.ndarray:
    return semantics(strip(s), limit)


def s_equal(s1: ScalableDiagram, s2: ScalableDiagram, tol: float = DEFAULT_TOL,
            limit: int = DEFAULT_LIMIT) -> Comparison:
    return compare_tensors(s_semantics(s1, limit), s_semantics(s2, limit), tol)


# -- arrow laws --------------------------------------------------------------

LAWS = ("copy-green", "erase-green", "cocopy-red", "coerase-red", "cocopy-yellow",
        "coerase-yellow", "compose-red", "compose-yellow", "hadamard-flip",
        "red-eq-yellow-rowcond")


def _red_node(k: int, n_in: int) -> ScalableDiagram:
    return scaled_x(k, n_in, 1)


def _yellow_node(k: int, n_in: int) -> ScalableDiagram:
    """Bitwise OR of ``n_in`` words of size ``k``."""
    if n_in == 0:
        return arrow("yellow", BitMatrix.zeros(k, 0))
    return s_compose(arrow("yellow", hstack(*([BitMatrix.identity(k)] * n_in))), regroup([k] * n_in, [k * n_in]))


def law_sides(law: str, A, B=None, kind: str = "red") -> tuple[ScalableDiagram, ScalableDiagram]:
    """Both sides of an arrow law as scalable diagrams.

    ``kind`` picks the arrow colour for the copy/erase laws, which hold for both.
    """
    A = as_bitmatrix(A)
    m, n = A.rows, A.cols
    if law == "copy-green":
        lhs = s_compose(scaled_z(m, 1, 2), arrow(kind, A))
        rhs = s_compose(s_tensor(arrow(kind, A), arrow(kind, A)), scaled_z(n, 1, 2))
    elif law == "erase-green":
        lhs = s_compose(scaled_z(m, 1, 0), arrow(kind, A))
        rhs = scaled_z(n, 1, 0)
    elif law == "cocopy-red":
        lhs = s_compose(arrow("red", A), _red_node(n, 2))
        rhs = s_compose(_red_node(m, 2), s_tensor(arrow("red", A), arrow("red", A)))
    elif law == "coerase-red":
        lhs = s_compose(arrow("red", A), _red_node(n, 0))
        rhs = _red_node(m, 0)
    elif law == "cocopy-yellow":
        lhs = s_compose(arrow("yellow", A), _yellow_node(n, 2))
        rhs = s_compose(_yellow_node(m, 2), s_tensor(arrow("yellow", A), arrow("yellow", A)))
    elif law == "coerase-yellow":
        lhs = s_compose(arrow("yellow", A), _yellow_node(n, 0))
        rhs = _yellow_node(m, 0)
    elif law in ("compose-red", "compose-yellow"):
        if B is None:
            raise PreconditionError(f"{law} needs a second matrix")
        B = as_bitmatrix(B)
        colour = law.split("-")[1]
        product = mul_f2(B, A) if colour == "red" else mul_bool(B, A)
        lhs = s_compose(arrow(colour, B), arrow(colour, A))
        rhs = arrow(colour, product)
    elif law == "hadamard-flip":
        lhs = s_compose_all(scaled_h(m), arrow("red", A), scaled_h(n))
        rhs = s_transpose(arrow("red", A.T))
    elif law == "red-eq-yellow-rowcond":
        if not A.at_most_one_per_row():
            raise PreconditionError("red and yellow arrows agree only when every row has at most one 1")
        lhs, rhs = arrow("red", A), arrow("yellow", A)
    else:
        raise KeyError(f"unknown arrow law {law!r}")
    return lhs, rhs


def arrow_laws_check(law: str, A, B=None, tol: float = DEFAULT_TOL, kind: str | None = None) -> bool:
    """Build both sides of ``law``, strip them and compare with the oracle."""
    kinds = [kind] if kind else (["red", "yellow"] if law in ("copy-green", "erase-green") else ["red"])
    for k in kinds:
        lhs, rhs = law_sides(law, A, B, kind=k)
        if not s_equal(lhs, rhs, tol):
            return False
    return True


def oracle_arrow_tensors(kind: str, max_size: int = 3, limit: int = DEFAULT_LIMIT) -> dict:
    """Oracle tensor of every stripped ``kind`` arrow with at most ``max_size`` rows and columns."""
    return {A: semantics(strip(arrow(kind, A)), limit)
            for m in range(max_size + 1) for n in range(max_size + 1) for A in all_bitmatrices(m, n)}


def composition_table_check(kind: str, max_size: int = 3, tol: float = DEFAULT_TOL) -> tuple[int, list]:
    """Check ``arrow(B) . arrow(A) = arrow(BA)`` for every composable pair up to ``max_size``.

    Each arrow is contracted once; the composite of two oracle tensors is
    their matrix product.  Returns the number of pairs and the failing ones.
    """
    T = oracle_arrow_tensors(kind, max_size)
    product = mul_f2 if kind == "red" else mul_bool
    by_rows: dict[int, list] = {}
    for A in T:
        by_rows.setdefault(A.rows, []).append(A)
    count, bad = 0, []
    for B in T:
        for A in by_rows.get(B.cols, []):
            count += 1
            if np.abs(T[B] @ T[A] - T[product(B, A)]).max(initial=0.0) > tol:
                bad.append((A, B))
    return count, bad


# -- divider / gatherer and lifted rules -------------------------------------

def divider_gatherer_sides(n: int):
    """Both equations relating dividers and gatherers, as (lhs, rhs) pairs."""
    dg = s_compose(single(Gatherer(n)), single(Divider(n)))
    gd = s_compose(single(Divider(n)), single(Gatherer(n)))
    return [(dg, thick_identity(n + 1)), (gd, thick_identity(1, n))]


def scaled_fusion_sides(k: int, a, b, n1: int = 1, n2: int = 1):
    """Scaled spider fusion: phases add pointwise."""
    lhs = s_compose(scaled_z(k, 1, n2, b), scaled_z(k, n1, 1, a))
    rhs = scaled_z(k, n1, n2, [x + y for x, y in zip(a, b)])
    return lhs, rhs


def scaled_multiply_sides(k: int, a, b, m: int = 2):
    """Scaled H-boxes sharing their legs through scaled Z copies multiply pointwise."""
    lhs = ScalableDiagram()
    ha = lhs.add(ScaledH(tuple(a), m, 0))
    hb = lhs.add(ScaledH(tuple(b), m, 0))
    for p in range(m):
        z = lhs.add(ScaledZ((0.0,) * k, 1, 2))
        lhs.connect(lhs.add_input(k), SEnd(z, 0))
        lhs.connect(SEnd(z, 1), SEnd(ha, p))
        lhs.connect(SEnd(z, 2), SEnd(hb, p))
    rhs = single(ScaledH(tuple(x * y for x, y in zip(a, b)), m, 0))
    return lhs, rhs


# -- JSON -----------------------------------------------------------------------

def gen_to_json(gen) -> dict:
    if isinstance(gen, ScaledZ):
        return {"kind": "scaled_z", "phases": list(gen.phases), "n_in": gen.n_in, "n_out": gen.n_out,
                "sizes": gen.ports}
    if isinstance(gen, ScaledH):
        return {"kind": "scaled_h", "labels": [[complex(z).real, complex(z).imag] for z in gen.labels],
                "n_in": gen.n_in, "n_out": gen.n_out, "sizes": gen.ports}
    if isinstance(gen, (RedArrow, YellowArrow)):
        kind = "red_arrow" if isinstance(gen, RedArrow) else "yellow_arrow"
        return {"kind": kind, "matrix": gen.A.tolist(), "rows": gen.A.rows, "cols": gen.A.cols,
                "sizes": gen.ports}
    name = {Divider: "divider", Gatherer: "gatherer", ThickCup: "thick_cup", ThickCap: "thick_cap"}
    if type(gen) in name:
        return {"kind": name[type(gen)], "n": gen.n, "sizes": gen.ports}
    if isinstance(gen, ThickSwap):
        return {"kind": "thick_swap", "n": gen.n, "n2": gen.n2, "sizes": gen.ports}
    raise TypeError(gen)


def gen_from_json(data: dict):
    kind = data["kind"]
    if kind == "scaled_z":
        return ScaledZ(tuple(float(a) for a in data["phases"]), data["n_in"], data["n_out"])
    if kind == "scaled_h":
        return ScaledH(tuple(complex(re, im) for re, im in data["labels"]), data["n_in"], data["n_out"])
    if kind in ("red_arrow", "yellow_arrow"):
        A = BitMatrix(data["matrix"], data["rows"], data["cols"])
        return RedArrow(A) if kind == "red_arrow" else YellowArrow(A)
    if kind == "thick_swap":
        return ThickSwap(data["n"], data["n2"])
    cls = {"divider": Divider, "gatherer": Gatherer, "thick_cup": ThickCup, "thick_cap": ThickCap}[kind]
    return cls(data["n"])


def s_to_json(s: ScalableDiagram) -> dict:
    def end(e):
        return f"b{e.port}" if e.node is None else f"n{e.node}:{e.port}"
    return {
        "nodes": [dict(id=nid, **gen_to_json(g)) for nid, g in sorted(s.nodes.items())],
        "wires": [[end(a), end(b)] for a, b in s.wires],
        "inputs": [f"b{i}" for i in s.inputs],
        "outputs": [f"b{i}" for i in s.outputs],
        "boundary_sizes": {f"b{i}": k for i, k in sorted(s.sizes.items())},
        "scalar": [complex(s.scalar).real, complex(s.scalar).imag],
    }


def s_from_json(data: dict) -> ScalableDiagram:
    def end(text):
        if text.startswith("b"):
            return SEnd(None, int(text[1:]))
        nid, p = text[1:].split(":")
        return SEnd(int(nid), int(p))
    s = ScalableDiagram(scalar=complex(*data.get("scalar", [1.0, 0.0])))
    for entry in data["nodes"]:
        s.nodes[int(entry["id"])] = gen_from_json(entry)
    s.sizes = {int(k[1:]): int(v) for k, v in data["boundary_sizes"].items()}
    s.inputs = [int(t[1:]) for t in data["inputs"]]
    s.outputs = [int(t[1:]) for t in data["outputs"]]
    s.wires = [(end(a), end(b)) for a, b in data["wires"]]
    s.validate()
    return s


def s_to_dot(s: ScalableDiagram, name: str = "szh") -> str:
    """Graphviz source; wires are annotated with their size."""
    lines = [f"graph {name} {{"]
    for idx in s.inputs:
        lines.append(f'  b{idx} [shape=point, xlabel="in b{idx} ({s.sizes[idx]})"];')
    for idx in s.outputs:
        lines.append(f'  b{idx} [shape=point, xlabel="out b{idx} ({s.sizes[idx]})"];')
    for nid in sorted(s.nodes):
        g = s.nodes[nid]
        if isinstance(g, ScaledZ):
            label, shape = f"Z({', '.join(f'{a:g}' for a in g.phases)})", "circle"
        elif isinstance(g, ScaledH):
            label, shape = f"H({', '.join(_fmt_label(a) for a in g.labels)})", "box"
        elif isinstance(g, (RedArrow, YellowArrow)):
            colour = "red" if isinstance(g, RedArrow) else "yellow"
            label, shape = f"arrow({g.A.tolist()})", f"invtriangle, color={colour}"
        else:
            label, shape = type(g).__name__, "diamond"
        lines.append(f'  n{nid} [label="{label}", shape={shape}];')
    for a, b in s.wires:
        ta = f"b{a.port}" if a.node is None else f"n{a.node}"
        tb = f"b{b.port}" if b.node is None else f"n{b.node}"
        size = s.sizes[a.port] if a.node is None else s.nodes[a.node].ports[a.port]
        lines.append(f'  {ta} -- {tb} [label="{size}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _fmt_label(z) -> str:
    z = complex(z)
    return f"{z.real:g}" if z.imag == 0 else f"{z.real:g}{z.imag:+g}j"
