import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import diagrams, labels, phases
from zhscale.diagram import (ArityError, CapacityError, Diagram, compose, equal_semantics, from_json,
                             h_box, hadamard, identity, not_gate, permute, scalar, semantics, swap,
                             tensor_product, to_dot, to_json, transpose, x_spider, z_spider)

s2 = math.sqrt(2)


def test_hadamard_matrix():
    np.testing.assert_allclose(semantics(hadamard()), np.array([[1, 1], [1, -1]]) / s2, atol=1e-12)


@given(phases)
def test_phase_spider(alpha):
    np.testing.assert_allclose(semantics(z_spider(1, 1, alpha)), np.diag([1, np.exp(1j * alpha)]), atol=1e-12)


@given(st.integers(0, 5), st.integers(0, 5), labels)
def test_h_box_entries(m, n, a):
    t = semantics(h_box(m, n, a))
    scale = 2 ** (-(m + n) / 4)
    want = np.full((2 ** n, 2 ** m), scale, dtype=complex)
    want[-1, -1] = scale * a
    np.testing.assert_allclose(t, want, atol=1e-9)


@given(st.integers(0, 5), st.integers(0, 5))
def test_z_spider_well_tempered(m, n):
    t = semantics(z_spider(m, n))
    scale = 2 ** ((m + n - 2) / 4)
    if m + n == 0:
        assert t[0, 0] == pytest.approx(2 * scale)
        return
    assert t[0, 0] == pytest.approx(scale)
    assert t[-1, -1] == pytest.approx(scale)
    assert np.count_nonzero(np.abs(t) > 1e-12) == 2


def test_x_spider_and_not():
    np.testing.assert_allclose(semantics(x_spider(1, 1)), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(semantics(not_gate()), np.array([[0, 1], [1, 0]]), atol=1e-12)
    # XOR on two inputs; the three Hadamard legs give 2^(1/4 - 3/2 + 1)
    t = semantics(x_spider(2, 1))
    parity = np.array([[1, 0, 0, 1], [0, 1, 1, 0]]) * 2 ** (-1 / 4)
    np.testing.assert_allclose(t, parity, atol=1e-12)


def test_swap_and_identity():
    np.testing.assert_allclose(semantics(identity(2)), np.eye(4))
    P = semantics(swap())
    assert P[1, 2] == 1 and P[2, 1] == 1 and P[0, 0] == 1 and P[3, 3] == 1


def test_scalar_diagram():
    assert semantics(scalar(2 - 1j))[0, 0] == 2 - 1j


@settings(max_examples=60, deadline=None)
@given(diagrams(), st.integers(0, 2 ** 16))
def test_contraction_order_does_not_matter(d, seed):
    greedy = semantics(d)
    shuffled = semantics(d, order="random", rng=np.random.default_rng(seed))
    np.testing.assert_allclose(greedy, shuffled, atol=1e-8 * max(1, np.abs(greedy).max()))


@settings(max_examples=60, deadline=None)
@given(diagrams())
def test_json_round_trip(d):
    back = from_json(to_json(d))
    assert to_json(back) == to_json(d)
    np.testing.assert_allclose(semantics(back), semantics(d), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(diagrams(max_in=2, max_out=2), diagrams(max_in=2, max_out=2))
def test_tensor_is_kron(a, b):
    np.testing.assert_allclose(semantics(tensor_product(a, b)), np.kron(semantics(a), semantics(b)), atol=1e-8)


@settings(max_examples=40, deadline=None)
@given(diagrams(max_in=2, max_out=2), st.data())
def test_compose_is_matrix_product(a, data):
    b = data.draw(diagrams(max_in=0, max_out=2))
    while b.n_in < a.n_out:
        b.connect(b.add_input(), sorted(b.nodes)[0])
    got = semantics(compose(b, a))
    np.testing.assert_allclose(got, semantics(b) @ semantics(a), atol=1e-8 * max(1, np.abs(got).max()))


@settings(max_examples=40, deadline=None)
@given(diagrams())
def test_transpose_of_symmetric_generators(d):
    np.testing.assert_allclose(semantics(transpose(d)), semantics(d).T, atol=1e-9)


def test_permute_outputs():
    d = tensor_product(z_spider(0, 1, 0.3), h_box(0, 1, 2))
    p = permute(d, outputs=[1, 0])
    np.testing.assert_allclose(semantics(p), semantics(swap()) @ semantics(d), atol=1e-12)


def test_compose_checks_arity():
    with pytest.raises(ArityError):
        compose(identity(2), identity(1))
    with pytest.raises(ArityError):
        equal_semantics(identity(1), identity(2))


def test_capacity_error():
    with pytest.raises(CapacityError):
        semantics(z_spider(13, 13))
    with pytest.raises(CapacityError):
        semantics(z_spider(3, 3), limit=4)


def test_high_degree_spider_split_agrees():
    # a degree-8 spider is contracted as a chain of degree-3 pieces
    d = z_spider(4, 4, 0.7)
    t = semantics(d)
    assert t[0, 0] == pytest.approx(2 ** 1.5)
    assert t[-1, -1] == pytest.approx(2 ** 1.5 * np.exp(0.7j))


def test_validate_rejects_dangling_port():
    d = Diagram()
    d.add_input()
    with pytest.raises(ValueError):
        d.validate()


def test_dot_labels():
    d = compose(h_box(1, 1, 2), z_spider(1, 1, 0.5))
    dot = to_dot(d)
    assert dot.startswith("graph zh {")
    assert 'label="Z(0.5)"' in dot and 'label="H(2)"' in dot
    assert to_dot(d) == dot
