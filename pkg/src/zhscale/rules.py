"""The ZH rule catalogue as checked rewrites, plus the graph-state identities.

Each rule is a pair of parameterised builders.  ``verify_rule`` compares the
two sides with the contraction oracle, scalars included; ``apply`` replaces
an exact occurrence of the left side inside a larger diagram.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import networkx as nx
import numpy as np

from .bang import BangTemplate, IndexedBox, instantiate, graph_state, _check_adjacency
from .diagram import (DEFAULT_LIMIT, DEFAULT_TOL, Diagram, End, Generator, Kind, add_not, add_x_spider,
                      compose, equal_semantics, h_box, hadamard, identity, splice, tensor_product,
                      x_phase, x_spider, z_phase, z_spider)
from .nests import hypergraph_diagram, pivot_diagram, _pivot_scalable
from .scalable import (BitMatrix, ScalableDiagram, as_bitmatrix, and_arrow, arrow, mul_bool, regroup,
                       s_compose, s_compose_all, s_permute, s_tensor, scaled_h, scaled_z,
                       thick_identity, vstack)


class NoMatch(ValueError):
    """The site is not an occurrence of the rule's left-hand side."""


# -- rule sides ------------------------------------------------------------

def _zs1(m=1, n=1, alpha=0.0, beta=0.0):
    lhs = Diagram()
    u, v = lhs.z(alpha), lhs.z(beta)
    for _ in range(m):
        lhs.connect(lhs.add_input(), u)
    lhs.connect(u, v)
    for _ in range(n):
        lhs.connect(v, lhs.add_output())
    return lhs, z_spider(m, n, alpha + beta)


def _zs2():
    return z_spider(1, 1), identity(1)


def _hs1(m=1, n=1, a=-1):
    lhs = Diagram()
    ha, had, hb = lhs.h(a), lhs.h(), lhs.h()
    for _ in range(m):
        lhs.connect(lhs.add_input(), ha)
    lhs.connect(ha, had)
    lhs.connect(had, hb)
    for _ in range(n):
        lhs.connect(hb, lhs.add_output())
    return lhs, h_box(m, n, a)


def _hs2():
    return compose(hadamard(), hadamard()), identity(1)


def _ba1(m=2, n=2):
    lhs = Diagram()
    _, xleg = add_x_spider(lhs)
    for _ in range(m):
        lhs.connect(lhs.add_input(), xleg())
    z = lhs.z()
    lhs.connect(xleg(), z)
    for _ in range(n):
        lhs.connect(z, lhs.add_output())
    rhs = Diagram()
    zs = [rhs.z() for _ in range(m)]
    for v in zs:
        rhs.connect(rhs.add_input(), v)
    legs = [add_x_spider(rhs)[1] for _ in range(n)]
    for leg in legs:
        for v in zs:
            rhs.connect(v, leg())
    for leg in legs:
        rhs.connect(leg(), rhs.add_output())
    return lhs, rhs


def _ba2(m=2, n=2):
    lhs = Diagram()
    h = lhs.h()
    for _ in range(m):
        lhs.connect(lhs.add_input(), h)
    _, xleg = add_x_spider(lhs)
    lhs.connect(h, xleg())
    for _ in range(n):
        lhs.connect(xleg(), lhs.add_output())
    rhs = Diagram()
    zs = [rhs.z() for _ in range(m)]
    for v in zs:
        rhs.connect(rhs.add_input(), v)
    hs = [rhs.h() for _ in range(n)]
    for h in hs:
        for v in zs:
            rhs.connect(v, h)
    for h in hs:
        rhs.connect(h, rhs.add_output())
    return lhs, rhs


def _shared_inputs(d: Diagram, m: int) -> list[int]:
    zs = [d.z() for _ in range(m)]
    for v in zs:
        d.connect(d.add_input(), v)
    return zs


def _mult(m=2, a=2, b=3):
    lhs = Diagram()
    zs = _shared_inputs(lhs, m)
    for lab in (a, b):
        h = lhs.h(lab)
        for v in zs:
            lhs.connect(v, h)
    return lhs, h_box(m, 0, complex(a) * complex(b))


def _ident(n=2):
    rhs = Diagram()
    for _ in range(n):
        rhs.connect(rhs.add_input(), rhs.z())
    return h_box(n, 0, 1), rhs


def _avg(m=2, a=2, b=3):
    lhs = Diagram()
    zs = _shared_inputs(lhs, m)
    ha, hb = lhs.h(a), lhs.h(b)
    for v in zs:
        lhs.connect(v, ha)
        lhs.connect(v, hb)
    i, o = add_not(lhs)
    lhs.connect(ha, i)
    lhs.connect(o, hb)
    rhs = h_box(m, 0, (complex(a) + complex(b)) / 2)
    rhs.z()   # arity-0 Z spider: the scalar sqrt(2)
    return lhs, rhs


def _ortho(m=1, a=2):
    lhs = Diagram()
    h = lhs.h(a)
    for _ in range(m):
        lhs.connect(lhs.add_input(), h)
    s = lhs.z()
    lhs.connect(lhs.add_input(), s)
    lhs.connect(s, h)
    i, o = add_not(lhs)
    lhs.connect(s, i)
    lhs.connect(o, h)
    rhs = Diagram()
    for _ in range(m + 1):
        rhs.connect(rhs.add_input(), rhs.z())
    return lhs, rhs


def _unit():
    rhs = h_box(0, 1, 0)
    rhs.z()
    return x_spider(0, 1), rhs


def _phase(rng: random.Random) -> float:
    return rng.uniform(-math.pi, math.pi)


def _label(rng: random.Random) -> complex:
    return complex(rng.gauss(0, 1), rng.gauss(0, 1))


@dataclass(frozen=True)
class RewriteRule:
    name: str
    builder: Callable[..., tuple[Diagram, Diagram]]
    sampler: Callable[[random.Random], dict]
    description: str = ""
    defaults: dict = field(default_factory=dict)

    def sides(self, **params) -> tuple[Diagram, Diagram]:
        return self.builder(**{**self.defaults, **params})

    def lhs(self, **params) -> Diagram:
        return self.sides(**params)[0]

    def rhs(self, **params) -> Diagram:
        return self.sides(**params)[1]


def _ar(rng, hi, total):
    while True:
        m, n = rng.randint(0, hi), rng.randint(0, hi)
        if m + n <= total:
            return m, n


RULES: dict[str, RewriteRule] = {r.name: r for r in [
    RewriteRule("zs1", _zs1, lambda g: dict(zip("mn", _ar(g, 5, 10)), alpha=_phase(g), beta=_phase(g)),
                "Z spiders joined by one wire fuse; phases add", {"m": 1, "n": 1}),
    RewriteRule("zs2", _zs2, lambda g: {}, "a phase-free 1-1 Z spider is a plain wire"),
    RewriteRule("hs1", _hs1, lambda g: dict(zip("mn", _ar(g, 5, 10)), a=_label(g)),
                "an H box fuses with a (-1) H box through a Hadamard", {"m": 1, "n": 1}),
    RewriteRule("hs2", _hs2, lambda g: {}, "two Hadamards cancel"),
    RewriteRule("ba1", _ba1, lambda g: dict(zip("mn", _ar(g, 3, 6))),
                "Z/X bialgebra", {"m": 2, "n": 2}),
    RewriteRule("ba2", _ba2, lambda g: dict(zip("mn", _ar(g, 3, 6))),
                "Z/H bialgebra", {"m": 2, "n": 2}),
    RewriteRule("m", _mult, lambda g: {"m": g.randint(0, 8), "a": _label(g), "b": _label(g)},
                "H boxes on the same wires multiply their labels", {"m": 2, "a": 2, "b": 3}),
    RewriteRule("i", _ident, lambda g: {"n": g.randint(0, 10)},
                "an H box labelled 1 disconnects", {"n": 2}),
    RewriteRule("a", _avg, lambda g: {"m": g.randint(0, 8), "a": _label(g), "b": _label(g)},
                "H boxes joined through NOT average their labels", {"m": 2, "a": 2, "b": 3}),
    RewriteRule("o", _ortho, lambda g: {"m": g.randint(0, 8), "a": _label(g)},
                "an H box seeing a bit and its negation disconnects", {"m": 1, "a": 2}),
    RewriteRule("u", _unit, lambda g: {}, "unary X spider is a unary H box labelled 0"),
]}


def get_rule(name: str) -> RewriteRule:
    try:
        return RULES[name.lower()]
    except KeyError:
        raise KeyError(f"unknown rule {name!r}; known: {', '.join(RULES)}") from None


def verify_rule(name: str, params: dict | None = None, draws: int = 20, seed: int = 0,
                tol: float = DEFAULT_TOL, limit: int = DEFAULT_LIMIT) -> bool:
    """Oracle check of one rule at ``params``, or at ``draws`` random parameter tuples."""
    rule = get_rule(name)
    if params is not None:
        trials = [params]
    else:
        rng = random.Random(seed)
        trials = [rule.sampler(rng) for _ in range(draws)]
    for p in trials:
        lhs, rhs = rule.sides(**p)
        if not equal_semantics(lhs, rhs, tol=tol, limit=limit):
            return False
    return True


# -- applying a rule inside a diagram --------------------------------------

def _node_sig(g: Generator):
    return (g.kind, g.phase % (2 * math.pi), complex(g.label))


def _same_gen(a: Generator, b: Generator, tol=1e-9) -> bool:
    if a.kind is not b.kind:
        return False
    if a.kind is Kind.Z:
        return abs(cmath.exp(1j * a.phase) - cmath.exp(1j * b.phase)) < tol
    if a.kind is Kind.H:
        return abs(complex(a.label) - complex(b.label)) < tol
    return True


def _pattern_graph(d: Diagram, nodes: set) -> tuple[nx.MultiGraph, dict]:
    g = nx.MultiGraph()
    free = {v: [] for v in nodes}
    for v in nodes:
        g.add_node(v, gen=d.nodes[v])
    for a, b in d.wires:
        ina = a.node in nodes
        inb = b.node in nodes
        if ina and inb:
            g.add_edge(a.node, b.node)
        elif ina:
            free[a.node].append((a, b))
        elif inb:
            free[b.node].append((b, a))
    for v in nodes:
        g.nodes[v]["free"] = len(free[v])
    return g, free


def _infer(name: str, d: Diagram, site: Sequence[int]) -> dict:
    gens = [d.nodes[v] for v in site]
    deg = [d.degree(v) for v in site]
    if name == "zs1" and len(site) == 2:
        return {"m": deg[0] - 1, "n": deg[1] - 1, "alpha": gens[0].phase, "beta": gens[1].phase}
    if name == "hs1" and len(site) == 3:
        return {"m": deg[0] - 1, "n": deg[2] - 1, "a": gens[0].label}
    if name in ("zs2", "hs2", "u"):
        return {}
    if name == "i" and len(site) == 1:
        return {"n": deg[0]}
    if name in ("m", "a") and len(site) >= 2:
        hs = [g for g in gens if g.kind is Kind.H]
        m = sum(1 for g in gens if g.kind is Kind.Z)
        if name == "m" and len(hs) == 2:
            return {"m": m, "a": hs[0].label, "b": hs[1].label}
    raise NoMatch(f"cannot infer parameters of {name} at {list(site)}; pass them explicitly")


def apply(rule: str | RewriteRule, d: Diagram, site: Sequence[int], params: dict | None = None) -> Diagram:
    """Replace the left side of ``rule`` found exactly on the nodes ``site`` by its right side.

    Boundary legs of the same pattern node may be matched in any order, which
    is sound because all ZH generators are symmetric.
    """
    rule = get_rule(rule) if isinstance(rule, str) else rule
    site = list(site)
    if len(set(site)) != len(site) or any(v not in d.nodes for v in site):
        raise NoMatch("site must list distinct nodes of the diagram")
    if params is None:
        params = _infer(rule.name, d, site)
    lhs, rhs = rule.sides(**params)
    if set(lhs.nodes) and len(lhs.nodes) != len(site):
        raise NoMatch(f"{rule.name} needs {len(lhs.nodes)} nodes, site has {len(site)}")
    if any(a.node is None and b.node is None for a, b in lhs.wires):
        raise NoMatch("pattern with a bare wire cannot be matched")
    pat, pat_free = _pattern_graph(lhs, set(lhs.nodes))
    tgt, tgt_free = _pattern_graph(d, set(site))
    match = nx.isomorphism.MultiGraphMatcher(
        tgt, pat, node_match=lambda x, y: x["free"] == y["free"] and _same_gen(x["gen"], y["gen"]))
    phi = next(match.isomorphisms_iter(), None)
    if phi is None:
        raise NoMatch(f"site is not an occurrence of {rule.name}")
    inv = {p: t for t, p in phi.items()}
    # pattern boundary port -> outer end in d
    outer: dict[int, End] = {}
    pools = {v: list(tgt_free[v]) for v in site}
    for inner, bnd in sorted(((a, b) if b.node is None else (b, a)) for a, b in lhs.wires
                             if (a.node is None) != (b.node is None)):
        _, far = pools[inv[inner.node]].pop(0)
        outer[bnd.port] = far

    out = Diagram(d.scalar * rhs.scalar / lhs.scalar)
    for nid, g in d.nodes.items():
        if nid not in set(site):
            out.add_node(g, nid)
    out.inputs, out.outputs = list(d.inputs), list(d.outputs)
    out._next_boundary = d._next_boundary
    off = max(d.nodes, default=-1) + 1
    for nid, g in rhs.nodes.items():
        out.add_node(g, nid + off)
    keep = [(a, b) for a, b in d.wires if a.node not in site and b.node not in site]
    wires = list(keep)
    # outer ends reattach to the junction standing for the matching port
    lhs_ports = lhs.inputs + lhs.outputs
    rhs_ports = rhs.inputs + rhs.outputs
    for k, (lp, rp) in enumerate(zip(lhs_ports, rhs_ports)):
        wires.append((outer[lp], ("J", k)))
    port_junction = {rp: ("J", k) for k, rp in enumerate(rhs_ports)}
    for a, b in rhs.wires:
        ends = []
        for e in (a, b):
            ends.append(port_junction[e.port] if e.node is None else End(e.node + off, e.port))
        wires.append(tuple(ends))
    merged, loops = splice(wires, lambda e: isinstance(e, tuple) and len(e) == 2 and e[0] == "J")
    for a, b in merged:
        out.connect(a, b)
    out.scalar *= 2 ** loops
    out.validate()
    return out


def find_sites(rule: str, d: Diagram) -> list[list[int]]:
    """Candidate sites for the fusion rules (pairs or chains joined by single wires)."""
    name = get_rule(rule).name
    sites = []
    if name == "zs1":
        for a, b in d.wires:
            u, v = a.node, b.node
            if u is None or v is None or u == v:
                continue
            if d.nodes[u].kind is Kind.Z and d.nodes[v].kind is Kind.Z:
                joins = sum(1 for x, y in d.wires if {x.node, y.node} == {u, v})
                if joins == 1:
                    sites.append([u, v])
    elif name == "zs2":
        for v, g in d.nodes.items():
            if g.kind is Kind.Z and abs(cmath.exp(1j * g.phase) - 1) < 1e-12 and d.degree(v) == 2:
                sites.append([v])
    return sites


# -- graph states and local complementation --------------------------------

def complement_at(adj, v: int) -> np.ndarray:
    """``G * v``: toggle every edge between two neighbours of ``v``."""
    G = _check_adjacency(adj).copy()
    nb = [u for u in range(len(G)) if G[v, u]]
    for a, b in itertools.combinations(nb, 2):
        G[a, b] ^= 1
        G[b, a] ^= 1
    return G


def _on_outputs(d: Diagram, ops: dict[int, Diagram]) -> Diagram:
    """Post-compose single-wire maps on selected outputs."""
    layer = identity(0)
    for k in range(d.n_out):
        layer = tensor_product(layer, ops.get(k, identity(1)))
    return compose(layer, d)


def local_complementation(adj, v: int) -> tuple[Diagram, Diagram]:
    """``X(pi/2)_v . prod_{u ~ v} Z(-pi/2)_u |G>  =  |G * v>`` exactly."""
    G = _check_adjacency(adj)
    if not 0 <= v < len(G):
        raise ValueError(f"vertex {v} out of range")
    ops = {u: z_phase(-math.pi / 2) for u in range(len(G)) if G[v, u]}
    ops[v] = x_phase(math.pi / 2)
    return _on_outputs(graph_state(G), ops), graph_state(complement_at(G, v))


def hypergraph_state(n: int, edges: Sequence[tuple[Sequence[int], complex]]) -> Diagram:
    """One Z spider with an output per vertex; one H box per (support, label)."""
    d = Diagram()
    vs = [d.z() for _ in range(n)]
    for v in vs:
        d.connect(v, d.add_output())
    for sup, lab in edges:
        h = d.h(lab)
        for u in sup:
            d.connect(vs[u], h)
    return d


def hlc_template() -> BangTemplate:
    """Vertex ``v`` (output 0) under an X(pi/2), a shared vertex ``w`` (output 1),
    and a box of hyper-edges ``{v, w, u_i}`` each with its own vertex ``u_i``."""
    d = Diagram()
    v, w = d.z(), d.z()
    h1, zp, h2 = d.h(), d.z(math.pi / 2), d.h()
    d.connect(v, h1)
    d.connect(h1, zp)
    d.connect(zp, h2)
    d.connect(h2, d.add_output())
    d.connect(w, d.add_output())
    u, e = d.z(), d.h(-1)
    out = d.add_output()
    d.connect(u, out)
    for x in (v, w, u):
        d.connect(x, e)
    return BangTemplate(d, [IndexedBox("e", frozenset({u, e}), frozenset({out.port}), "n")])


def hlc_terms(supports: Sequence[frozenset]) -> list[tuple[frozenset, complex]]:
    """Extra hyper-edges: label ``i`` on each support, ``-1`` on each pairwise union."""
    out = [(s, 1j) for s in supports]
    out += [(a | b, -1) for a, b in itertools.combinations(supports, 2)]
    return out


def hyper_local_complementation(n: int) -> tuple[Diagram, Diagram]:
    """!-box form at count ``n``; vertices are ordered ``v, w, u_0 .. u_{n-1}``."""
    if n < 1:
        raise ValueError("need at least one hyper-edge")
    lhs = instantiate(hlc_template(), {"n": n})
    supports = [frozenset({1, 2 + i}) for i in range(n)]
    edges = [(s | {0}, -1) for s in supports] + hlc_terms(supports)
    return lhs, hypergraph_state(n + 2, edges)


def scalable_hlc(A) -> tuple[ScalableDiagram, ScalableDiagram]:
    """Scalable form: ``v`` (size 1) and a bundle of ``p`` vertices; row ``i`` of
    ``A`` is the hyper-edge ``e_i`` minus ``v``.  Outputs are ``(1) + (p)``."""
    A = as_bitmatrix(A)
    n, p = A.rows, A.cols
    if n < 1 or p < 1:
        raise ValueError("need at least one hyper-edge and one vertex")
    pairs = _pair_selector(n)
    X = s_compose_all(scaled_h(1), scaled_z(1, phases=[math.pi / 2]), scaled_h(1))

    def build(extra: bool) -> ScalableDiagram:
        legs = 3 if extra else 2
        vert = scaled_z(p, 0, legs)
        vcopy = arrow("red", BitMatrix.ones(n, 1))
        vstate = scaled_z(1, 0, 2)
        edge = s_compose(scaled_h(n, 2, 0), s_tensor(vcopy, and_arrow(A)))
        # wires: v-out, v-edge, p-out, p-edge[, p-extra]
        s = s_tensor(vstate, vert)
        order = [0, 2, 1, 3] + ([4] if extra else [])
        s = s_permute(s, outputs=order)
        tail = s_tensor(X if not extra else thick_identity(1), thick_identity(p), edge)
        if extra:
            C = vstack(A, mul_bool(pairs, A))
            labels = [1j] * n + [-1] * (C.rows - n)
            tail = s_tensor(tail, s_compose(scaled_h(C.rows, 1, 0, labels), and_arrow(C)))
        return s_compose(tail, s)

    return build(False), build(True)


def _pair_selector(n: int) -> BitMatrix:
    rows = [[1 if k in (i, j) else 0 for k in range(n)] for i, j in itertools.combinations(range(n), 2)]
    return BitMatrix(rows, len(rows), n)


# -- regular hyper pivot ---------------------------------------------------

def _supports(M: BitMatrix, offset: int = 0) -> list[int]:
    return [sum(1 << (j + offset) for j in range(M.cols) if M[i, j]) for i in range(M.rows)]


def regular_hyper_pivot(A, B) -> tuple[Diagram, Diagram]:
    """Pivot on a Hadamard-joined pair ``z``/``y`` over ``p + q`` wires.

    Row ``i`` of ``A`` (over wires ``0..p-1``) is a (-1) box touching ``z``;
    row ``b`` of ``B`` (over wires ``p..p+q-1``) a (-1) box touching ``y``.
    The right side has a (-1) hyper-edge on every union of an ``A`` row and a ``B`` row.
    """
    A, B = as_bitmatrix(A), as_bitmatrix(B)
    p, q = A.cols, B.cols
    zs, ys = _supports(A), _supports(B, p)
    lhs = pivot_diagram(ys, zs, [-1] * len(zs), p + q)
    rhs = hypergraph_diagram([f | e for f in zs for e in ys], [-1] * (len(zs) * len(ys)), p + q)
    return lhs, rhs


def regular_hyper_pivot_instance(n: int, m: int) -> tuple[Diagram, Diagram]:
    """``n`` boxes on ``z`` and ``m`` on ``y``, one private wire each."""
    return regular_hyper_pivot(BitMatrix.identity(n), BitMatrix.identity(m))


def _union_rows(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    rows = [list(A.tolist()[i]) + list(B.tolist()[b]) for i in range(A.rows) for b in range(B.rows)]
    return BitMatrix(rows, A.rows * B.rows, A.cols + B.cols)


def rhp_scalable(A, B) -> tuple[ScalableDiagram, ScalableDiagram]:
    """Scalable pivot on bundles ``(p) + (q)``; the right side is one AND arrow of unions."""
    A, B = as_bitmatrix(A), as_bitmatrix(B)
    lhs = _pivot_scalable(A, B, [-1] * A.rows, 1)
    rhs = s_compose_all(regroup([A.cols + B.cols], [A.cols, B.cols]),
                        _diag_boxes(_union_rows(A, B), -1), regroup([A.cols, B.cols], [A.cols + B.cols]))
    return lhs, rhs


def _diag_boxes(C: BitMatrix, label) -> ScalableDiagram:
    """Diagonal map on ``(C.cols)``: one H box per row of ``C`` on the AND of its support."""
    k = C.cols
    copy = scaled_z(k, 1, 2)
    boxes = s_compose(scaled_h(C.rows, 1, 0, [label] * C.rows), and_arrow(C))
    return s_compose(s_tensor(thick_identity(k), boxes), copy)


def _parity(k: int) -> ScalableDiagram:
    return arrow("red", BitMatrix.ones(1, k))


def rhp_lemma(A, B) -> tuple[ScalableDiagram, ScalableDiagram]:
    """Bilinearity step of the scalable pivot proof.

    Left: the parity of the ``A``-conjunctions and the parity of the
    ``B``-conjunctions meet in one (-1) H box.  Right: a (-1) hyper-edge on
    every union of an ``A`` row and a ``B`` row.  Both act diagonally on
    ``(p) + (q)``.
    """
    A, B = as_bitmatrix(A), as_bitmatrix(B)
    p, q = A.cols, B.cols
    left_a = s_compose(_parity(A.rows), and_arrow(A))
    left_b = s_compose(_parity(B.rows), and_arrow(B))
    meet = s_compose(scaled_h(1, 2, 0), s_tensor(left_a, left_b))
    copies = s_permute(s_tensor(scaled_z(p, 1, 2), scaled_z(q, 1, 2)), outputs=[0, 2, 1, 3])
    lhs = s_compose(s_tensor(thick_identity(p, q), meet), copies)
    rhs = s_compose_all(regroup([p + q], [p, q]), _diag_boxes(_union_rows(A, B), -1),
                        regroup([p, q], [p + q]))
    return lhs, rhs


def bare_pivot(z_supports: Sequence[Sequence[int]], y_supports: Sequence[Sequence[int]],
               n_in: int, n_out: int) -> tuple[Diagram, Diagram]:
    """Pivot whose supports are boundary wires ``0..n_in+n_out-1`` (inputs first).

    Every boundary wire gets a Z spider so that several boxes can share it; a
    Z spider with two legs is a plain wire.
    """
    def frame():
        d = Diagram()
        ends = [d.z() for _ in range(n_in + n_out)]
        for k, v in enumerate(ends):
            d.connect(d.add_input() if k < n_in else d.add_output(), v)
        return d, ends

    lhs, ends = frame()
    y, z, had = lhs.z(), lhs.z(), lhs.h()
    lhs.connect(z, had)
    lhs.connect(had, y)
    for sup, centre in [(s, z) for s in z_supports] + [(s, y) for s in y_supports]:
        box = lhs.h(-1)
        lhs.connect(centre, box)
        for w in sup:
            lhs.connect(ends[w], box)
    rhs, ends = frame()
    for f in z_supports:
        for e in y_supports:
            box = rhs.h(-1)
            for w in sorted(set(f) | set(e)):
                rhs.connect(ends[w], box)
    return lhs, rhs


def _hadamards(k: int) -> Diagram:
    d = identity(0)
    for _ in range(k):
        d = tensor_product(d, hadamard())
    return d


def rhp_special_case(name: str, m: int = 2, n: int = 2) -> dict:
    """Pivot instances that are rules of the catalogue in disguise.

    Returns the pivot sides, the rule sides, and the same fixed adapter
    applied to both rule sides so that ``pivot side == adapter(rule side)``.
    """
    name = name.lower()
    if name == "hs2":
        plhs, prhs = bare_pivot([[0]], [[1]], 1, 1)
        rl, rr = _hs2()
        adapt = lambda d: compose(d, hadamard())
    elif name == "ba1":
        plhs, prhs = bare_pivot([[i] for i in range(m)], [[m + j] for j in range(n)], m, n)
        rl, rr = _ba1(m, n)
        adapt = lambda d: compose(_hadamards(n), d)
    elif name == "ba2":
        plhs, prhs = bare_pivot([list(range(m))], [[m + j] for j in range(n)], m, n)
        rl, rr = _ba2(m, n)
        adapt = lambda d: d
    else:
        raise KeyError(f"{name} is not a pivot special case")
    return {"pivot": (plhs, prhs), "rule": (rl, rr), "adapted": (adapt(rl), adapt(rr))}


def check_special_case(name: str, m: int = 2, n: int = 2, tol: float = DEFAULT_TOL) -> bool:
    case = rhp_special_case(name, m, n)
    (pl, pr), (al, ar) = case["pivot"], case["adapted"]
    return bool(equal_semantics(pl, al, tol=tol)) and bool(equal_semantics(pr, ar, tol=tol)) \
        and bool(equal_semantics(pl, pr, tol=tol))


# -- !-box forms of the fusion and bialgebra rules --------------------------

def bang_rule(name: str) -> tuple[BangTemplate, BangTemplate]:
    """Templates for ZS1, HS1, BA1, BA2 with boxed legs (boxes ``a`` and ``b``)."""
    name = name.lower()
    if name in ("zs1", "hs1"):
        if name == "zs1":
            lhs, rhs = _zs1(1, 1, 0.3, 0.5)
        else:
            lhs, rhs = _hs1(1, 1, 0.5 + 0.25j)
        return _box_legs(lhs), _box_legs(rhs)
    if name in ("ba1", "ba2"):
        lhs, rhs = (_ba1 if name == "ba1" else _ba2)(1, 1)
        return _box_legs(lhs), _box_rhs_bipartite(rhs)
    raise KeyError(f"no !-box form for {name}")


def _box_legs(d: Diagram) -> BangTemplate:
    """Box ``a`` holds the input port, box ``b`` the output port (plus any leg node)."""
    ins, outs = set(d.inputs), set(d.outputs)
    in_nodes, out_nodes = set(), set()
    for a, b in d.wires:
        for e, f in ((a, b), (b, a)):
            if e.node is None and f.node is not None:
                # H legs of an X spider go with their port
                if d.nodes[f.node].kind is Kind.H and d.degree(f.node) == 2 and _is_x_leg(d, f.node):
                    (in_nodes if e.port in ins else out_nodes).add(f.node)
    return BangTemplate(d, [IndexedBox("a", frozenset(in_nodes), frozenset(ins), "m"),
                            IndexedBox("b", frozenset(out_nodes), frozenset(outs), "n")])


def _is_x_leg(d: Diagram, h: int) -> bool:
    return any(e.node is not None and d.nodes[e.node].kind is Kind.Z for e in d.neighbours(h)) and \
        any(e.node is None for e in d.neighbours(h))


def _box_rhs_bipartite(d: Diagram) -> BangTemplate:
    """One input spider in box ``a``, one output structure in box ``b``; the joining
    wire (and any Hadamard on it) lies in both."""
    ins, outs = set(d.inputs), set(d.outputs)
    a_nodes, b_nodes = set(), set()
    for a, b in d.wires:
        for e, f in ((a, b), (b, a)):
            if e.node is None and f.node is not None:
                (a_nodes if e.port in ins else b_nodes).add(f.node)
    changed = True
    while changed:
        changed = False
        for nid in d.nodes:
            if nid in a_nodes or nid in b_nodes:
                continue
            nb = {e.node for e in d.neighbours(nid)}
            # a node touching the b side joins b; if it also touches a it is shared
            if nb & b_nodes:
                b_nodes.add(nid)
                if nb & a_nodes:
                    a_nodes.add(nid)
                changed = True
    return BangTemplate(d, [IndexedBox("a", frozenset(a_nodes), frozenset(ins), "m"),
                            IndexedBox("b", frozenset(b_nodes), frozenset(outs), "n")])


def check_bang_rule(name: str, max_count: int = 3, tol: float = DEFAULT_TOL) -> dict[tuple[int, int], bool]:
    lt, rt = bang_rule(name)
    out = {}
    for m in range(max_count + 1):
        for n in range(max_count + 1):
            counts = {"m": m, "n": n}
            out[(m, n)] = bool(equal_semantics(instantiate(lt, counts), instantiate(rt, counts), tol=tol))
    return out
