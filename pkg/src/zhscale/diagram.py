"""ZH diagrams, their well-tempered semantics and the tensor-contraction oracle.

A :class:`Diagram` is an open graph of generators.  Wires are unordered pairs
of :class:`End` values; an end is either a port of a node or a boundary port.
Spiders and H-boxes are symmetric, so their arity is simply the number of
wire ends attached to them.

Tensors follow one global convention: a map with ``k`` outputs and ``l``
inputs is a ``(2**k, 2**l)`` complex array and the first boundary port of
each list is the most significant bit of the index.
"""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple

import numpy as np

DEFAULT_LIMIT = 24
DEFAULT_TOL = 1e-9


class CapacityError(RuntimeError):
    """The diagram is too large for the dense contraction oracle."""


class ArityError(ValueError):
    pass


class Kind(str, Enum):
    Z = "Z"
    H = "H"
    CUP = "cup"
    CAP = "cap"
    SWAP = "swap"


@dataclass(frozen=True)
class Generator:
    kind: Kind
    phase: float = 0.0
    label: complex = -1

    def __str__(self):
        if self.kind is Kind.Z:
            return f"Z({self.phase:g})" if self.phase else "Z"
        if self.kind is Kind.H:
            return "H" if self.label == -1 else f"H({_fmt_complex(self.label)})"
        return self.kind.value


def _fmt_complex(z):
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:g}"
    return f"{z.real:g}{z.imag:+g}j"


class End(NamedTuple):
    """A wire end: ``node`` is ``None`` for boundary port number ``port``."""

    node: int | None
    port: int

    @property
    def is_boundary(self):
        return self.node is None

    def __str__(self):
        if self.node is None:
            return f"b{self.port}"
        return f"n{self.node}:{self.port}"


def parse_end(text: str) -> End:
    if text.startswith("b"):
        return End(None, int(text[1:]))
    if text.startswith("n") and ":" in text:
        nid, port = text[1:].split(":")
        return End(int(nid), int(port))
    raise ValueError(f"bad endpoint {text!r}")


def well_tempered_exponent(kind: Kind, degree: int) -> Fraction:
    """Power of 2 carried by a generator of the given degree."""
    if kind is Kind.Z:
        return Fraction(degree - 2, 4)
    if kind is Kind.H:
        return Fraction(-degree, 4)
    return Fraction(0)


def generator_tensor(gen: Generator, degree: int) -> np.ndarray:
    """Dense tensor of one generator with ``degree`` legs, shape ``(2,)*degree``."""
    scale = 2.0 ** float(well_tempered_exponent(gen.kind, degree))
    if gen.kind is Kind.Z:
        t = np.zeros((2,) * degree, dtype=complex)
        if degree == 0:
            return np.asarray((1 + cmath.exp(1j * gen.phase)) * scale, dtype=complex)
        t[(0,) * degree] = 1
        t[(1,) * degree] += cmath.exp(1j * gen.phase)
        return t * scale
    if gen.kind is Kind.H:
        t = np.ones((2,) * degree, dtype=complex)
        t[(1,) * degree] = gen.label
        return t * scale
    if gen.kind in (Kind.CUP, Kind.CAP):
        if degree != 2:
            raise ArityError(f"{gen.kind.value} needs exactly 2 legs")
        return np.eye(2, dtype=complex)
    if gen.kind is Kind.SWAP:
        if degree != 4:
            raise ArityError("swap needs exactly 4 legs")
        t = np.zeros((2,) * 4, dtype=complex)
        for a in (0, 1):
            for b in (0, 1):
                t[a, b, b, a] = 1
        return t
    raise ValueError(gen.kind)


class Diagram:
    """Mutable builder for a ZH diagram; treat finished diagrams as values.

    Operations in this package never modify their arguments.
    """

    def __init__(self, scalar: complex = 1):
        self.nodes: dict[int, Generator] = {}
        self.wires: list[tuple[End, End]] = []
        self.inputs: list[int] = []
        self.outputs: list[int] = []
        self.scalar = complex(scalar)
        self._next_node = 0
        self._next_boundary = 0
        self._next_port: dict[int, int] = defaultdict(int)

    # -- building -------------------------------------------------------
    def add_node(self, gen: Generator, nid: int | None = None) -> int:
        if nid is None:
            nid = self._next_node
        if nid in self.nodes:
            raise ValueError(f"node {nid} exists")
        self.nodes[nid] = gen
        self._next_node = max(self._next_node, nid + 1)
        return nid

    def z(self, phase: float = 0.0) -> int:
        return self.add_node(Generator(Kind.Z, phase=float(phase)))

    def h(self, label: complex = -1) -> int:
        return self.add_node(Generator(Kind.H, label=complex(label)))

    def _boundary(self, idx=None) -> End:
        if idx is None:
            idx = self._next_boundary
        self._next_boundary = max(self._next_boundary, idx + 1)
        return End(None, idx)

    def add_input(self) -> End:
        end = self._boundary()
        self.inputs.append(end.port)
        return end

    def add_output(self) -> End:
        end = self._boundary()
        self.outputs.append(end.port)
        return end

    def port(self, nid: int) -> End:
        """Next free port on node ``nid``."""
        p = self._next_port[nid]
        self._next_port[nid] = p + 1
        return End(nid, p)

    def _as_end(self, x) -> End:
        if isinstance(x, End):
            if x.node is not None:
                self._next_port[x.node] = max(self._next_port[x.node], x.port + 1)
            return x
        return self.port(x)

    def connect(self, a, b) -> None:
        """Add a wire; ``a``/``b`` are node ids (next free port) or ends."""
        self.wires.append((self._as_end(a), self._as_end(b)))

    def multiply(self, c: complex) -> None:
        self.scalar *= c

    # -- inspection -----------------------------------------------------
    @property
    def n_in(self):
        return len(self.inputs)

    @property
    def n_out(self):
        return len(self.outputs)

    def legs(self, nid: int) -> list[End]:
        return sorted(e for w in self.wires for e in w if e.node == nid)

    def degree(self, nid: int) -> int:
        return len(self.legs(nid))

    def neighbours(self, nid: int) -> list[End]:
        out = []
        for a, b in self.wires:
            if a.node == nid:
                out.append(b)
            if b.node == nid:
                out.append(a)
        return out

    def arity(self, nid: int) -> tuple[int, int]:
        """(in, out) counts; spiders report all legs as outputs."""
        kind = self.nodes[nid].kind
        if kind is Kind.CUP:
            return (0, 2)
        if kind is Kind.CAP:
            return (2, 0)
        if kind is Kind.SWAP:
            return (2, 2)
        return (0, self.degree(nid))

    def copy(self) -> "Diagram":
        d = Diagram(self.scalar)
        d.nodes = dict(self.nodes)
        d.wires = list(self.wires)
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d._next_node = self._next_node
        d._next_boundary = self._next_boundary
        d._next_port = defaultdict(int, self._next_port)
        return d

    def validate(self) -> None:
        seen = set()
        for a, b in self.wires:
            for e in (a, b):
                if e in seen:
                    raise ValueError(f"end {e} used twice")
                seen.add(e)
                if e.node is not None and e.node not in self.nodes:
                    raise ValueError(f"wire to unknown node {e.node}")
        boundary = self.inputs + self.outputs
        if len(set(boundary)) != len(boundary):
            raise ValueError("inputs and outputs must be disjoint")
        for idx in boundary:
            if End(None, idx) not in seen:
                raise ValueError(f"boundary port b{idx} is not wired")
        for e in seen:
            if e.node is None and e.port not in boundary:
                raise ValueError(f"dangling boundary end {e}")
        for nid, gen in self.nodes.items():
            if gen.kind in (Kind.CUP, Kind.CAP, Kind.SWAP):
                ports = sorted(e.port for e in seen if e.node == nid)
                need = 4 if gen.kind is Kind.SWAP else 2
                if ports != list(range(need)):
                    raise ArityError(f"node {nid} ({gen.kind.value}) needs ports 0..{need - 1}")

    def __repr__(self):
        return (f"Diagram(nodes={len(self.nodes)}, wires={len(self.wires)}, "
                f"in={self.n_in}, out={self.n_out}, scalar={self.scalar:.6g})")


# -- contraction ---------------------------------------------------------

def contract_network(tensors: list[tuple[np.ndarray, list]], open_labels: list,
                     limit: int = DEFAULT_LIMIT, order: str = "greedy",
                     rng: np.random.Generator | None = None) -> np.ndarray:
    """Contract a network where every label occurs at most twice.

    Returns an array with one axis per entry of ``open_labels``, in order.
    ``order`` is ``"greedy"`` (smallest intermediate first) or ``"random"``.
    Raises :class:`CapacityError` if some intermediate would exceed
    ``limit`` indices.
    """
    if len(open_labels) > limit:
        raise CapacityError(f"{len(open_labels)} open wires exceed the limit {limit}")
    live: dict[int, tuple[np.ndarray, list]] = {}
    owners: dict = defaultdict(set)
    for k, (arr, labels) in enumerate(tensors):
        if len(set(labels)) > limit:
            raise CapacityError(f"a generator with {len(labels)} legs exceeds the limit {limit}")
        arr, labels = _self_trace(np.asarray(arr, dtype=complex), list(labels))
        live[k] = (arr, labels)
        for lab in labels:
            owners[lab].add(k)
    next_id = len(tensors)
    open_set = set(open_labels)
    if rng is None:
        rng = np.random.default_rng(0)

    while True:
        pairs = {tuple(sorted(ks)) for lab, ks in owners.items() if len(ks) == 2}
        if not pairs:
            break
        pairs = sorted(pairs)
        if order == "random":
            i, j = pairs[rng.integers(len(pairs))]
        else:
            def cost(p):
                li, lj = live[p[0]][1], live[p[1]][1]
                keep = set(li) ^ set(lj)
                return (len(keep), len(li) + len(lj))
            i, j = min(pairs, key=cost)
        ai, li = live.pop(i)
        aj, lj = live.pop(j)
        keep = [x for x in li if x not in lj] + [x for x in lj if x not in li]
        if len(keep) > limit:
            raise CapacityError(f"intermediate tensor with {len(keep)} indices exceeds the limit {limit}")
        arr = _einsum_pair(ai, li, aj, lj, keep)
        for lab in li + lj:
            owners[lab].discard(i)
            owners[lab].discard(j)
        for lab in set(li) & set(lj):
            if not owners[lab]:
                del owners[lab]
        for lab in keep:
            owners[lab].add(next_id)
        live[next_id] = (arr, keep)
        next_id += 1

    result = np.asarray(1, dtype=complex)
    labels: list = []
    for arr, labs in live.values():
        result = np.multiply.outer(result, arr)
        labels += labs
    if set(labels) != open_set:
        raise ValueError("contraction left unexpected labels")
    perm = [labels.index(lab) for lab in open_labels]
    return np.transpose(result, perm) if perm else result


def _letters(labels_lists):
    table = {}
    for labels in labels_lists:
        for lab in labels:
            if lab not in table:
                table[lab] = _LETTERS[len(table)]
    return table


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _self_trace(arr, labels):
    if len(set(labels)) == len(labels):
        return arr, labels
    table = _letters([labels])
    keep = [x for x in dict.fromkeys(labels) if labels.count(x) == 1]
    spec = "".join(table[x] for x in labels) + "->" + "".join(table[x] for x in keep)
    return np.einsum(spec, arr), keep


def _einsum_pair(ai, li, aj, lj, keep):
    table = _letters([li, lj])
    spec = ("".join(table[x] for x in li) + "," + "".join(table[x] for x in lj)
            + "->" + "".join(table[x] for x in keep))
    return np.einsum(spec, ai, aj)


def semantics(d: Diagram, limit: int = DEFAULT_LIMIT, order: str = "greedy",
              rng: np.random.Generator | None = None) -> np.ndarray:
    """Well-tempered interpretation of ``d`` as a ``(2**out, 2**in)`` matrix."""
    d.validate()
    tensors = []
    port_label: dict[End, object] = {}
    for w, (a, b) in enumerate(d.wires):
        if a.is_boundary and b.is_boundary:
            la, lb = ("w", w, 0), ("w", w, 1)
            port_label[a], port_label[b] = la, lb
            tensors.append((np.eye(2, dtype=complex), [la, lb]))
        else:
            port_label[a] = port_label[b] = ("w", w)
    legs = defaultdict(list)
    for e in port_label:
        if e.node is not None:
            legs[e.node].append(e)
    for nid, gen in d.nodes.items():
        labels = [port_label[e] for e in sorted(legs[nid])]
        if gen.kind is Kind.Z and len(labels) > 3:
            tensors += _spider_chain(nid, gen.phase, labels)
        else:
            tensors.append((generator_tensor(gen, len(labels)), labels))
    open_labels = [port_label[End(None, i)] for i in d.outputs + d.inputs]
    t = contract_network(tensors, open_labels, limit=limit, order=order, rng=rng)
    return d.scalar * t.reshape(2 ** d.n_out, 2 ** d.n_in)


def _spider_chain(nid: int, phase: float, labels: list) -> list:
    """A Z spider as a chain of degree-3 spiders; their powers of 2 add up exactly."""
    three = generator_tensor(Generator(Kind.Z), 3)
    links = [("chain", nid, k) for k in range(len(labels) - 3)]
    ends = [labels[0]] + links
    outs = []
    for k in range(len(labels) - 2):
        left = ends[k]
        right = links[k] if k < len(links) else labels[-1]
        t = generator_tensor(Generator(Kind.Z, phase), 3) if k == 0 else three
        outs.append((t, [left, labels[k + 1], right]))
    return outs


class Comparison(NamedTuple):
    equal: bool
    index: tuple[int, int] | None = None
    left: complex | None = None
    right: complex | None = None
    max_diff: float = 0.0

    def __bool__(self):
        return self.equal


def compare_tensors(t1: np.ndarray, t2: np.ndarray, tol: float = DEFAULT_TOL) -> Comparison:
    if t1.shape != t2.shape:
        raise ArityError(f"shape mismatch {t1.shape} vs {t2.shape}")
    diff = np.abs(t1 - t2)
    worst = float(diff.max()) if diff.size else 0.0
    if worst <= tol:
        return Comparison(True, max_diff=worst)
    bad = np.argwhere(diff > tol)[0]
    idx = (int(bad[0]), int(bad[1]))
    return Comparison(False, idx, complex(t1[idx]), complex(t2[idx]), worst)


def equal_semantics(d1: Diagram, d2: Diagram, tol: float = DEFAULT_TOL,
                    limit: int = DEFAULT_LIMIT) -> Comparison:
    """Compare two diagrams entrywise, scalars included."""
    if (d1.n_in, d1.n_out) != (d2.n_in, d2.n_out):
        raise ArityError(f"arity mismatch {(d1.n_in, d1.n_out)} vs {(d2.n_in, d2.n_out)}")
    return compare_tensors(semantics(d1, limit), semantics(d2, limit), tol)


# -- composition ---------------------------------------------------------

def splice(wires: list[tuple], is_junction: Callable[[object], bool]) -> tuple[list[tuple], int]:
    """Merge wire chains through junction points.

    Every junction must occur in exactly two wires.  Returns the merged wire
    list and the number of closed loops that consisted only of junctions.
    """
    incident = defaultdict(list)
    for k, (a, b) in enumerate(wires):
        for e in (a, b):
            if is_junction(e):
                incident[e].append(k)
    for j, ks in incident.items():
        if len(ks) != 2:
            raise ValueError(f"junction {j} has {len(ks)} wires")
    used = [False] * len(wires)

    def walk(k, cur):
        prev = k
        while is_junction(cur):
            a, b = incident[cur]
            nxt = b if a == prev else a
            used[nxt] = True
            x, y = wires[nxt]
            cur = y if x == cur else x
            prev = nxt
        return cur

    out = []
    for k, (a, b) in enumerate(wires):
        if used[k] or (is_junction(a) and is_junction(b)):
            continue
        if is_junction(a):
            a, b = b, a
        used[k] = True
        out.append((a, walk(k, b)))
    loops = 0
    for k, (a, b) in enumerate(wires):
        if used[k]:
            continue
        loops += 1
        used[k] = True
        cur, prev = b, k
        while cur != a:
            x, y = incident[cur]
            nxt = y if x == prev else x
            used[nxt] = True
            p, q = wires[nxt]
            cur = q if p == cur else p
            prev = nxt
    return out, loops


def _relabel(d: Diagram, node_offset: int, boundary_map: dict[int, object]):
    def end(e):
        if e.node is None:
            return boundary_map[e.port]
        return End(e.node + node_offset, e.port)
    return [(end(a), end(b)) for a, b in d.wires]


def _junction(e):
    return isinstance(e, tuple) and len(e) == 2 and e[0] == "J"


def compose(d1: Diagram, d2: Diagram) -> Diagram:
    """``d1 ∘ d2``: the outputs of ``d2`` feed the inputs of ``d1``."""
    if d2.n_out != d1.n_in:
        raise ArityError(f"cannot compose: {d2.n_out} outputs into {d1.n_in} inputs")
    out = Diagram(d1.scalar * d2.scalar)
    off1 = 0
    off2 = max(d1.nodes, default=-1) + 1
    for nid, g in d1.nodes.items():
        out.add_node(g, nid + off1)
    for nid, g in d2.nodes.items():
        out.add_node(g, nid + off2)
    m1: dict[int, object] = {}
    m2: dict[int, object] = {}
    for k, (o, i) in enumerate(zip(d2.outputs, d1.inputs)):
        m2[o] = ("J", k)
        m1[i] = ("J", k)
    for i in d2.inputs:
        m2[i] = out.add_input()
    for o in d1.outputs:
        m1[o] = out.add_output()
    wires = _relabel(d1, off1, m1) + _relabel(d2, off2, m2)
    merged, loops = splice(wires, _junction)
    for a, b in merged:
        out.connect(a, b)
    out.scalar *= 2 ** loops
    return out


def tensor_product(d1: Diagram, d2: Diagram) -> Diagram:
    out = Diagram(d1.scalar * d2.scalar)
    off2 = max(d1.nodes, default=-1) + 1
    for nid, g in d1.nodes.items():
        out.add_node(g, nid)
    for nid, g in d2.nodes.items():
        out.add_node(g, nid + off2)
    m1, m2 = {}, {}
    for i in d1.inputs:
        m1[i] = out.add_input()
    for i in d2.inputs:
        m2[i] = out.add_input()
    for o in d1.outputs:
        m1[o] = out.add_output()
    for o in d2.outputs:
        m2[o] = out.add_output()
    for a, b in _relabel(d1, 0, m1) + _relabel(d2, off2, m2):
        out.connect(a, b)
    return out


def tensor_all(diagrams: Iterable[Diagram]) -> Diagram:
    out = identity(0)
    for d in diagrams:
        out = tensor_product(out, d)
    return out


def compose_all(*diagrams: Diagram) -> Diagram:
    """``compose_all(a, b, c) == a ∘ b ∘ c``."""
    out = diagrams[-1]
    for d in reversed(diagrams[:-1]):
        out = compose(d, out)
    return out


def permute(d: Diagram, outputs: list[int] | None = None, inputs: list[int] | None = None) -> Diagram:
    """Reorder the boundary: new output ``k`` is old output ``outputs[k]``."""
    out = d.copy()
    if outputs is not None:
        out.outputs = [d.outputs[k] for k in outputs]
    if inputs is not None:
        out.inputs = [d.inputs[k] for k in inputs]
    return out


def transpose(d: Diagram) -> Diagram:
    """Swap the roles of inputs and outputs (bending every boundary wire)."""
    out = d.copy()
    out.inputs, out.outputs = list(d.outputs), list(d.inputs)
    return out


# -- small constructors ----------------------------------------------------

def identity(n: int = 1) -> Diagram:
    d = Diagram()
    for _ in range(n):
        i = d.add_input()
        o = d.add_output()
        d.connect(i, o)
    return d


def scalar(c: complex) -> Diagram:
    return Diagram(c)


def z_spider(n_in: int, n_out: int, phase: float = 0.0) -> Diagram:
    d = Diagram()
    v = d.z(phase)
    for _ in range(n_in):
        d.connect(d.add_input(), v)
    for _ in range(n_out):
        d.connect(v, d.add_output())
    return d


def h_box(n_in: int, n_out: int, label: complex = -1) -> Diagram:
    d = Diagram()
    v = d.h(label)
    for _ in range(n_in):
        d.connect(d.add_input(), v)
    for _ in range(n_out):
        d.connect(v, d.add_output())
    return d


def hadamard() -> Diagram:
    return h_box(1, 1)


def cup() -> Diagram:
    d = Diagram()
    v = d.add_node(Generator(Kind.CUP))
    d.connect(End(v, 0), d.add_output())
    d.connect(End(v, 1), d.add_output())
    return d


def cap() -> Diagram:
    d = Diagram()
    v = d.add_node(Generator(Kind.CAP))
    d.connect(d.add_input(), End(v, 0))
    d.connect(d.add_input(), End(v, 1))
    return d


def swap() -> Diagram:
    d = Diagram()
    v = d.add_node(Generator(Kind.SWAP))
    d.connect(d.add_input(), End(v, 0))
    d.connect(d.add_input(), End(v, 1))
    d.connect(End(v, 2), d.add_output())
    d.connect(End(v, 3), d.add_output())
    return d


def add_x_spider(d: Diagram, phase: float = 0.0) -> tuple[int, Callable[[], int]]:
    """Insert an X-spider into ``d``.

    Returns the centre node and a function creating a fresh leg; each leg is
    a Hadamard box attached to the centre, whose free side is returned.
    """
    centre = d.z(phase)

    def leg() -> int:
        h = d.h()
        d.connect(h, centre)
        return h
    return centre, leg


def x_spider(m: int, n: int, phase: float = 0.0) -> Diagram:
    """X-spider: a Z-spider with a Hadamard box on every leg."""
    d = Diagram()
    _, leg = add_x_spider(d, phase)
    for _ in range(m):
        d.connect(d.add_input(), leg())
    for _ in range(n):
        d.connect(leg(), d.add_output())
    return d


def add_not(d: Diagram) -> tuple[int, int]:
    """Insert a NOT gate into ``d``; returns its (input, output) Hadamard nodes.

    NOT is a Hadamard, a Z-spider carrying a unary (-1) H-box, and a Hadamard.
    """
    h1, h2 = d.h(), d.h()
    z = d.z()
    d.connect(d.h(-1), z)
    d.connect(h1, z)
    d.connect(z, h2)
    return h1, h2


def not_gate() -> Diagram:
    d = Diagram()
    a, b = add_not(d)
    d.connect(d.add_input(), a)
    d.connect(b, d.add_output())
    return d


def z_phase(alpha: float) -> Diagram:
    return z_spider(1, 1, alpha)


def x_phase(alpha: float) -> Diagram:
    return x_spider(1, 1, alpha)


# -- serialisation ---------------------------------------------------------

def to_json(d: Diagram) -> dict:
    nodes = []
    for nid in sorted(d.nodes):
        g = d.nodes[nid]
        entry: dict = {"id": nid, "kind": g.kind.value}
        if g.kind is Kind.Z:
            entry["phase"] = g.phase
        elif g.kind is Kind.H:
            lab = complex(g.label)
            entry["label_re"] = lab.real
            entry["label_im"] = lab.imag
        nodes.append(entry)
    return {
        "nodes": nodes,
        "wires": [[str(a), str(b)] for a, b in d.wires],
        "inputs": [f"b{i}" for i in d.inputs],
        "outputs": [f"b{i}" for i in d.outputs],
        "scalar": [d.scalar.real, d.scalar.imag],
    }


def from_json(data: dict) -> Diagram:
    scalar_re, scalar_im = data.get("scalar", [1.0, 0.0])
    d = Diagram(complex(scalar_re, scalar_im))
    for entry in data["nodes"]:
        kind = Kind(entry["kind"])
        gen = Generator(kind,
                        phase=float(entry.get("phase", 0.0)),
                        label=complex(entry.get("label_re", -1.0), entry.get("label_im", 0.0)))
        d.add_node(gen, int(entry["id"]))
    for key, target in (("inputs", d.inputs), ("outputs", d.outputs)):
        for text in data.get(key, []):
            end = parse_end(text)
            d._boundary(end.port)
            target.append(end.port)
    for a, b in data["wires"]:
        d.connect(parse_end(a), parse_end(b))
    d.validate()
    return d


def to_dot(d: Diagram, name: str = "zh") -> str:
    lines = [f"graph {name} {{"]
    for idx in d.inputs:
        lines.append(f'  b{idx} [shape=point, xlabel="in b{idx}"];')
    for idx in d.outputs:
        lines.append(f'  b{idx} [shape=point, xlabel="out b{idx}"];')
    for nid in sorted(d.nodes):
        g = d.nodes[nid]
        if g.kind is Kind.Z:
            label = f"Z({g.phase:g})"
            shape = "circle"
        elif g.kind is Kind.H:
            label = f"H({_fmt_complex(g.label)})"
            shape = "box"
        else:
            label, shape = g.kind.value, "diamond"
        lines.append(f'  n{nid} [label="{label}", shape={shape}];')
    for a, b in d.wires:
        ta = f"b{a.port}" if a.node is None else f"n{a.node}"
        tb = f"b{b.port}" if b.node is None else f"n{b.node}"
        lines.append(f"  {ta} -- {tb};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def well_tempered_scalar_exponent(d: Diagram) -> Fraction:
    """Sum of the generator powers of 2 in ``d`` (exact)."""
    return sum((well_tempered_exponent(g.kind, d.degree(n)) for n, g in d.nodes.items()), Fraction(0))


def is_close(a: complex, b: complex, tol: float = DEFAULT_TOL) -> bool:
    return abs(complex(a) - complex(b)) <= tol


def phase_value(theta: float) -> complex:
    return cmath.exp(1j * math.pi * theta)
