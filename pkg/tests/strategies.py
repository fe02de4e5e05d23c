"""Hypothesis strategies shared by the module tests."""

import math
from fractions import Fraction

from hypothesis import strategies as st

from zhscale.diagram import Diagram
from zhscale.scalable import BitMatrix
from zhscale.transforms import PhaseFunction, SymmetricPhaseFunction

phases = st.floats(-math.pi, math.pi, allow_nan=False)
labels = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
exact_angles = st.builds(Fraction, st.integers(-32, 32), st.sampled_from([1, 2, 4, 8, 16]))


@st.composite
def diagrams(draw, max_nodes=4, max_in=2, max_out=2, max_wires=5):
    """Small random ZH diagrams, self loops and parallel wires included."""
    d = Diagram()
    for _ in range(draw(st.integers(1, max_nodes))):
        if draw(st.booleans()):
            d.z(draw(phases))
        else:
            d.h(draw(labels))
    nodes = st.sampled_from(sorted(d.nodes))
    for _ in range(draw(st.integers(0, max_in))):
        d.connect(d.add_input(), draw(nodes))
    for _ in range(draw(st.integers(0, max_out))):
        d.connect(draw(nodes), d.add_output())
    for _ in range(draw(st.integers(0, max_wires))):
        d.connect(draw(nodes), draw(nodes))
    return d


@st.composite
def bitmatrices(draw, max_rows=3, max_cols=3, min_size=0):
    r = draw(st.integers(min_size, max_rows))
    c = draw(st.integers(min_size, max_cols))
    rows = [[draw(st.integers(0, 1)) for _ in range(c)] for _ in range(r)]
    return BitMatrix(rows, r, c)


@st.composite
def exact_functions(draw, min_n=0, max_n=4):
    n = draw(st.integers(min_n, max_n))
    return PhaseFunction.from_thetas(n, draw(st.lists(exact_angles, min_size=2 ** n, max_size=2 ** n)))


@st.composite
def exact_symmetric(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    return SymmetricPhaseFunction.from_thetas(n, draw(st.lists(exact_angles, min_size=n + 1, max_size=n + 1)))


@st.composite
def graphs(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    adj = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            adj[u][v] = adj[v][u] = draw(st.integers(0, 1))
    return adj
