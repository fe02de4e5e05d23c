"""!-box templates and their instantiation into concrete ZH diagrams.

A template is a plain :class:`~zhscale.diagram.Diagram` (the base) together
with boxes, each owning a set of nodes and boundary ports.  Every node or
port may sit in at most two boxes; a node in two boxes is copied once per
pair of indices.  Two boxes whose contents are joined by a wire produce a
complete bipartite pattern, optionally restricted by an allowed-pairs mask
(this is how a matrix arrow reads as two overlapping boxes).
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import networkx as nx
import numpy as np

from .diagram import Diagram, End, Generator, Kind, add_not, add_x_spider, to_json, from_json
from .scalable import (BitMatrix, as_bitmatrix, strip, and_arrow, scaled_z, scaled_h, s_compose,
                       s_tensor, thick_identity)
from .transforms import Phase, phase_from_json, phase_to_json, popcount


class TemplateError(ValueError):
    """Malformed template or missing count."""


class NotInDictionary(ValueError):
    """The template is not one of the shapes that translate to a matrix arrow."""


# -- per-copy parameters ---------------------------------------------------

def _as_number(v) -> complex:
    if isinstance(v, Phase):
        return v.value
    return complex(v)


@dataclass(frozen=True)
class Const:
    value: object

    def __call__(self, index: Mapping[str, int]):
        return self.value

    def to_json(self):
        return {"kind": "const", "value": _value_json(self.value)}


@dataclass(frozen=True)
class Lookup:
    """``values[i]`` where ``i`` is the copy index of ``box``."""

    box: str
    values: tuple

    def __call__(self, index):
        return self.values[index[self.box]]

    def to_json(self):
        return {"kind": "lookup", "box": self.box, "values": [_value_json(v) for v in self.values]}


@dataclass(frozen=True)
class WeightPower:
    """``base ** e(w)`` where ``w`` is the Hamming weight of the copy index of ``box``.

    ``rule`` is ``"weight"`` for ``e(w) = w`` or ``"alternating"`` for
    ``e(w) = (-2)^(w-1)``.  Exact phases are raised on their lifted exponent.
    """

    box: str
    base: object
    rule: str = "alternating"

    def exponent(self, w: int) -> Fraction:
        if self.rule == "weight":
            return Fraction(w)
        if self.rule == "alternating":
            return Fraction(-2) ** (w - 1)
        raise TemplateError(f"unknown weight rule {self.rule!r}")

    def __call__(self, index):
        base = self.base(index) if callable(self.base) else self.base
        e = self.exponent(popcount(index[self.box]))
        if isinstance(base, Phase):
            return base ** e
        return complex(base) ** float(e)

    def to_json(self):
        base = self.base.to_json() if hasattr(self.base, "to_json") else _value_json(self.base)
        return {"kind": "weight_power", "box": self.box, "base": base, "rule": self.rule}


def _value_json(v):
    if isinstance(v, Phase):
        return {"phase": phase_to_json(v)}
    z = complex(v)
    return {"re": z.real, "im": z.imag}


def _value_from_json(data):
    if "phase" in data:
        return phase_from_json(data["phase"])
    return complex(data["re"], data["im"])


def param_from_json(data):
    kind = data["kind"]
    if kind == "const":
        return Const(_value_from_json(data["value"]))
    if kind == "lookup":
        return Lookup(data["box"], tuple(_value_from_json(v) for v in data["values"]))
    if kind == "weight_power":
        base = data["base"]
        base = param_from_json(base) if "kind" in base else _value_from_json(base)
        return WeightPower(data["box"], base, data.get("rule", "alternating"))
    raise TemplateError(f"unknown parameter form {kind!r}")


# -- templates -------------------------------------------------------------

@dataclass(frozen=True)
class IndexedBox:
    id: str
    nodes: frozenset = frozenset()
    boundary: frozenset = frozenset()
    count_var: str | None = None
    index_set: int | None = None    # size of [n], if annotated


@dataclass
class BangTemplate:
    base: Diagram
    boxes: list[IndexedBox]
    masks: dict[tuple[str, str], BitMatrix] = field(default_factory=dict)
    params: dict[int, object] = field(default_factory=dict)

    def box(self, bid: str) -> IndexedBox:
        for b in self.boxes:
            if b.id == bid:
                return b
        raise KeyError(bid)

    def boxes_of_node(self, nid: int) -> tuple[str, ...]:
        return tuple(b.id for b in self.boxes if nid in b.nodes)

    def boxes_of_port(self, idx: int) -> tuple[str, ...]:
        return tuple(b.id for b in self.boxes if idx in b.boundary)

    def boxes_of_end(self, e: End) -> tuple[str, ...]:
        return self.boxes_of_port(e.port) if e.node is None else self.boxes_of_node(e.node)

    def overlaps(self) -> set[frozenset]:
        out = set()
        for nid in self.base.nodes:
            bs = self.boxes_of_node(nid)
            if len(bs) == 2:
                out.add(frozenset(bs))
        for idx in self.base.inputs + self.base.outputs:
            bs = self.boxes_of_port(idx)
            if len(bs) == 2:
                out.add(frozenset(bs))
        return out

    def validate(self) -> None:
        ids = [b.id for b in self.boxes]
        if len(set(ids)) != len(ids):
            raise TemplateError("duplicate box id")
        for b in self.boxes:
            if not b.nodes <= set(self.base.nodes):
                raise TemplateError(f"box {b.id} owns unknown nodes")
        for nid in self.base.nodes:
            if len(self.boxes_of_node(nid)) > 2:
                raise TemplateError(f"node {nid} lies in more than two boxes")
        for idx in self.base.inputs + self.base.outputs:
            if len(self.boxes_of_port(idx)) > 2:
                raise TemplateError(f"port b{idx} lies in more than two boxes")
        for a, b in self.base.wires:
            if len(set(self.boxes_of_end(a)) | set(self.boxes_of_end(b))) > 2:
                raise TemplateError("a wire joins more than two boxes; only pairwise overlap is supported")
        for (r, c), M in self.masks.items():
            if r not in ids or c not in ids:
                raise TemplateError(f"mask on unknown boxes {(r, c)}")
        for nid, expr in self.params.items():
            if nid not in self.base.nodes:
                raise TemplateError(f"parameter on unknown node {nid}")


def _count_for(t: BangTemplate, b: IndexedBox, counts: Mapping[str, int]) -> int:
    for key in (b.id, b.count_var):
        if key is not None and key in counts:
            n = int(counts[key])
            if n < 0:
                raise TemplateError(f"negative count for box {b.id}")
            return n
    if b.index_set is not None:
        return b.index_set
    raise TemplateError(f"missing count for box {b.id}")


def _assignments(boxes: tuple[str, ...], counts: dict[str, int]):
    for combo in itertools.product(*(range(counts[b]) for b in boxes)):
        yield tuple(zip(boxes, combo))


def _allowed(t: BangTemplate, index: dict) -> bool:
    for (r, c), M in t.masks.items():
        if r in index and c in index:
            i, j = index[r], index[c]
            if i >= M.rows or j >= M.cols:
                raise TemplateError(f"count exceeds the mask on boxes {(r, c)}")
            if not M[i, j]:
                return False
    return True


def _restrict(index: dict, boxes) -> tuple:
    return tuple((b, index[b]) for b in boxes)


def _instantiate_gen(gen: Generator, value) -> Generator:
    if gen.kind is Kind.Z:
        return Generator(Kind.Z, phase=cmath.phase(_as_number(value)))
    if gen.kind is Kind.H:
        return Generator(Kind.H, label=_as_number(value))
    raise TemplateError(f"{gen.kind.value} carries no parameter")


def instantiate(t: BangTemplate, counts: Mapping[str, int] | None = None) -> Diagram:
    """Expand every box ``counts[box]`` times.

    Boxes without a count fall back to their annotated index set.  Copies
    are ordered lexicographically by box order; a boundary port inside a box
    becomes a run of adjacent ports.
    """
    t.validate()
    counts = dict(counts or {})
    order = [b.id for b in t.boxes]
    n_of = {b.id: _count_for(t, b, counts) for b in t.boxes}

    def sort_boxes(bs):
        return tuple(sorted(bs, key=order.index))

    d = Diagram(t.base.scalar)
    copies: dict[tuple, int] = {}
    for nid in sorted(t.base.nodes):
        bs = sort_boxes(t.boxes_of_node(nid))
        for key in _assignments(bs, n_of):
            index = dict(key)
            if not _allowed(t, index):
                continue
            gen = t.base.nodes[nid]
            if nid in t.params:
                gen = _instantiate_gen(gen, t.params[nid](index))
            copies[(nid, key)] = d.add_node(gen)
    ports: dict[tuple, int] = {}
    for side, target in ((t.base.inputs, d.inputs), (t.base.outputs, d.outputs)):
        for idx in side:
            bs = sort_boxes(t.boxes_of_port(idx))
            for key in _assignments(bs, n_of):
                if not _allowed(t, dict(key)):
                    continue
                ports[(idx, key)] = d._boundary().port
                target.append(ports[(idx, key)])

    # wire ends are collected first so node port numbers follow template
    # port order, then copy order
    pending: list[list] = []
    for a, b in t.base.wires:
        ba, bb = t.boxes_of_end(a), t.boxes_of_end(b)
        union = sort_boxes(set(ba) | set(bb))
        for key in _assignments(union, n_of):
            index = dict(key)
            if not _allowed(t, index):
                continue
            ends = []
            for e, bs in ((a, ba), (b, bb)):
                sub = _restrict(index, sort_boxes(bs))
                if e.node is None:
                    ends.append(("b", ports[(e.port, sub)]))
                else:
                    ends.append(("n", copies[(e.node, sub)], (e.port, key)))
            pending.append(ends)
    slots: dict[int, list] = {}
    for ends in pending:
        for e in ends:
            if e[0] == "n":
                slots.setdefault(e[1], []).append(e[2])
    numbering = {}
    for nid, keys in slots.items():
        for p, k in enumerate(sorted(keys)):
            numbering[(nid, k)] = p
    for ends in pending:
        conv = []
        for e in ends:
            conv.append(End(None, e[1]) if e[0] == "b" else End(e[1], numbering[(e[1], e[2])]))
        d.connect(*conv)
    d.validate()
    return d


# -- example templates -----------------------------------------------------

def spider_with_boxed_leg(label: complex = -1) -> BangTemplate:
    """A Z spider with one input and a boxed leg ending in an H box and an output."""
    d = Diagram()
    z = d.z()
    h = d.h(label)
    d.connect(d.add_input(), z)
    d.connect(z, h)
    out = d.add_output()
    d.connect(h, out)
    return BangTemplate(d, [IndexedBox("a", frozenset({h}), frozenset({out.port}), "k")])


def overlapping_boxes() -> BangTemplate:
    """Two boxes of Z spiders, each copy of one joined to every copy of the other."""
    d = Diagram()
    u, v = d.z(), d.z()
    d.connect(d.add_input(), u)
    d.connect(u, v)
    out = d.add_output()
    d.connect(v, out)
    return BangTemplate(d, [IndexedBox("a", frozenset({u}), frozenset({0}), "n"),
                            IndexedBox("b", frozenset({v}), frozenset({out.port}), "m")])


def arrow_to_bang(kind: str, A, masked: bool | None = None) -> BangTemplate:
    """Two overlapping boxes expressing a matrix arrow.

    Box ``"col"`` indexes input bits, box ``"row"`` output bits; the overlap
    is restricted by the mask ``A`` (omitted when ``A`` is full of ones,
    unless ``masked`` forces it).
    """
    A = as_bitmatrix(A)
    if masked is None:
        masked = not bool(np.all(A.array == 1))
    d = Diagram()
    inp = d.add_input()
    zc = d.z()
    d.connect(inp, zc)
    if kind == "red":
        centre, leg = add_x_spider(d)
        first = leg()
        d.connect(zc, first)
        edge = {first}
        last = leg()
        row_nodes = {centre, last}
    elif kind == "yellow":
        before = set(d.nodes)
        a, b = add_not(d)
        edge = set(d.nodes) - before
        d.connect(zc, a)
        before = set(d.nodes)
        conj, had = d.h(-1), d.h()
        d.connect(b, conj)
        d.connect(conj, had)
        a2, last = add_not(d)
        d.connect(had, a2)
        row_nodes = set(d.nodes) - before
    else:
        raise ValueError(f"unknown arrow kind {kind!r}")
    out = d.add_output()
    d.connect(last, out)
    boxes = [IndexedBox("col", frozenset({zc}) | edge, frozenset({inp.port}), "n", A.cols),
             IndexedBox("row", frozenset(row_nodes) | edge, frozenset({out.port}), "m", A.rows)]
    masks = {("row", "col"): A} if masked else {}
    return BangTemplate(d, boxes, masks)


def _signature_graph(t: BangTemplate, roles: dict[str, str]) -> nx.MultiGraph:
    g = nx.MultiGraph()
    for nid, gen in t.base.nodes.items():
        label = (gen.kind.value, round(gen.phase, 9), complex(round(gen.label.real, 9), round(gen.label.imag, 9)))
        g.add_node(("n", nid), sig=(label, frozenset(roles[b] for b in t.boxes_of_node(nid))))
    for idx, io in [(i, "in") for i in t.base.inputs] + [(i, "out") for i in t.base.outputs]:
        g.add_node(("b", idx), sig=(io, frozenset(roles[b] for b in t.boxes_of_port(idx))))
    for a, b in t.base.wires:
        g.add_edge(("b", a.port) if a.node is None else ("n", a.node),
                   ("b", b.port) if b.node is None else ("n", b.node))
    return g


def bang_to_arrow(t: BangTemplate, counts: Mapping[str, int] | None = None) -> tuple[str, BitMatrix]:
    """Recognise a two-box arrow template; raises :class:`NotInDictionary` otherwise."""
    if len(t.boxes) != 2:
        raise NotInDictionary(f"expected two overlapping boxes, found {len(t.boxes)}")
    try:
        t.validate()
    except TemplateError as exc:
        raise NotInDictionary(str(exc)) from exc
    if t.params:
        raise NotInDictionary("parametrised copies have no arrow counterpart")
    if not t.overlaps():
        raise NotInDictionary("the two boxes do not overlap")
    b0, b1 = (b.id for b in t.boxes)
    match = lambda x, y: x["sig"] == y["sig"]
    for kind in ("red", "yellow"):
        ref = arrow_to_bang(kind, BitMatrix.ones(1, 1))
        gref = _signature_graph(ref, {"col": "col", "row": "row"})
        for col, row in ((b0, b1), (b1, b0)):
            g = _signature_graph(t, {col: "col", row: "row"})
            if not nx.is_isomorphic(g, gref, node_match=match):
                continue
            counts = dict(counts or {})
            m = _count_for(t, t.box(row), counts)
            n = _count_for(t, t.box(col), counts)
            if (row, col) in t.masks:
                M = t.masks[(row, col)].array
            elif (col, row) in t.masks:
                M = t.masks[(col, row)].array.T
            else:
                M = np.ones((m, n), dtype=np.uint8)
            return kind, BitMatrix(M[:m, :n])
    raise NotInDictionary("template does not match the red or yellow arrow shape")


def triangle_of_boxes() -> BangTemplate:
    """Three pairwise overlapping boxes; outside the arrow dictionary."""
    d = Diagram()
    u, v, w = d.z(), d.z(), d.z()
    d.connect(u, v)
    d.connect(v, w)
    d.connect(w, u)
    return BangTemplate(d, [IndexedBox("a", frozenset({u, v})), IndexedBox("b", frozenset({v, w})),
                            IndexedBox("c", frozenset({w, u}))])


# -- graph states ----------------------------------------------------------

def _check_adjacency(adj) -> np.ndarray:
    G = np.asarray(adj, dtype=int)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError("adjacency must be square")
    if not np.array_equal(G, G.T):
        raise ValueError("adjacency must be symmetric")
    if np.any(np.diag(G)):
        raise ValueError("adjacency must have zero diagonal")
    if not np.all((G == 0) | (G == 1)):
        raise ValueError("adjacency must be a {0,1} matrix")
    return G


def edges_of(adj) -> list[tuple[int, int]]:
    G = _check_adjacency(adj)
    n = len(G)
    return [(u, v) for u in range(n) for v in range(u + 1, n) if G[u, v]]


def incidence(adj) -> BitMatrix:
    """``K[v, e] = 1`` iff vertex ``v`` is an end of edge ``e``."""
    G = _check_adjacency(adj)
    es = edges_of(G)
    K = np.zeros((len(G), len(es)), dtype=np.uint8)
    for k, (u, v) in enumerate(es):
        K[u, k] = K[v, k] = 1
    return BitMatrix(K)


def graph_state(adj) -> Diagram:
    """One Z spider per vertex with an output, one H(-1) wire per edge."""
    G = _check_adjacency(adj)
    d = Diagram()
    vs = [d.z() for _ in range(len(G))]
    for v in vs:
        d.connect(v, d.add_output())
    for u, v in edges_of(G):
        h = d.h(-1)
        d.connect(vs[u], h)
        d.connect(h, vs[v])
    return d


def graph_state_scalable(adj):
    """Incidence route: copy each vertex, AND the ends of every edge, unary H(-1)."""
    G = _check_adjacency(adj)
    n = len(G)
    K = incidence(G)
    e = K.cols
    copy = scaled_z(n, 0, 2)
    parity = s_compose(scaled_h(e, 1, 0, [-1] * e), and_arrow(K.T))
    return s_compose(s_tensor(thick_identity(n), parity), copy)


def graph_state_via_incidence(adj) -> Diagram:
    return strip(graph_state_scalable(adj))


# -- serialisation ---------------------------------------------------------

def template_to_json(t: BangTemplate) -> dict:
    boxes = []
    for b in t.boxes:
        entry = {"id": b.id, "nodes": sorted(b.nodes), "boundary": sorted(b.boundary),
                 "count_var": b.count_var}
        if b.index_set is not None:
            entry["index_set"] = b.index_set
        exprs = {str(n): t.params[n].to_json() for n in sorted(b.nodes) if n in t.params}
        if exprs:
            entry["param_expr"] = exprs
        boxes.append(entry)
    loose = {str(n): e.to_json() for n, e in t.params.items() if not t.boxes_of_node(n)}
    out = {"base": to_json(t.base), "boxes": boxes,
           "masks": [{"rows": r, "cols": c, "matrix": M.tolist()} for (r, c), M in t.masks.items()]}
    if loose:
        out["param_expr"] = loose
    return out


def template_from_json(data: dict) -> BangTemplate:
    base = from_json(data["base"])
    boxes, params = [], {}
    for entry in data["boxes"]:
        boxes.append(IndexedBox(entry["id"], frozenset(entry.get("nodes", [])),
                                frozenset(entry.get("boundary", [])), entry.get("count_var"),
                                entry.get("index_set")))
        for n, e in entry.get("param_expr", {}).items():
            params[int(n)] = param_from_json(e)
    for n, e in data.get("param_expr", {}).items():
        params[int(n)] = param_from_json(e)
    masks = {(m["rows"], m["cols"]): BitMatrix(np.array(m["matrix"], dtype=np.uint8).reshape(len(m["matrix"]), -1))
             for m in data.get("masks", [])}
    t = BangTemplate(base, boxes, masks, params)
    t.validate()
    return t
