import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import bitmatrices, labels, phases
from zhscale.diagram import semantics
from zhscale.scalable import (LAWS, BitMatrix, PreconditionError, TypeMismatch, all_bitmatrices,
                              and_arrow, arrow, arrow_laws_check, arrow_scale, divider_gatherer_sides,
                              hstack, interpret, interpret_arrow, mul_bool, mul_f2, regroup,
                              s_compose, s_equal, s_from_json, s_semantics, s_tensor, s_to_dot,
                              s_to_json, scaled_fusion_sides, scaled_h, scaled_multiply_sides, scaled_x,
                              scaled_z, strip, thick_identity, vstack)


@given(bitmatrices(), st.data())
def test_f2_and_boolean_products(A, data):
    k = data.draw(st.integers(0, 3))
    B = BitMatrix([[data.draw(st.integers(0, 1)) for _ in range(A.rows)] for _ in range(k)], k, A.rows)
    np.testing.assert_array_equal(mul_f2(B, A).array, (B.array.astype(int) @ A.array) % 2)
    np.testing.assert_array_equal(mul_bool(B, A).array, (B.array.astype(int) @ A.array) > 0)


@given(bitmatrices())
def test_transpose_and_stacking(A):
    assert A.T.T == A
    assert vstack(A, A).rows == 2 * A.rows
    assert hstack(A, A).cols == 2 * A.cols
    assert hash(A) == hash(BitMatrix(A.tolist(), A.rows, A.cols))


def test_all_bitmatrices_counts():
    assert sum(1 for _ in all_bitmatrices(2, 3)) == 64
    assert list(all_bitmatrices(0, 2)) == [BitMatrix.zeros(0, 2)]


def test_mismatched_product():
    with pytest.raises((TypeMismatch, ValueError)):
        mul_f2(BitMatrix.ones(2, 2), BitMatrix.ones(3, 1))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["red", "yellow"]), bitmatrices())
def test_stripped_arrow_matches_closed_form(kind, A):
    np.testing.assert_allclose(semantics(strip(arrow(kind, A))), interpret_arrow(kind, A), atol=1e-9)


@pytest.mark.parametrize("kind", ["red", "yellow"])
def test_arrow_scale_is_one(kind):
    for m in range(4):
        for n in range(4):
            if m and n:
                assert arrow_scale(kind, m, n) == pytest.approx(1)


def test_red_arrow_action():
    A = BitMatrix([[1, 1], [0, 1]], 2, 2)
    M = interpret_arrow("red", A)
    # |x0 x1> -> |x0^x1, x1>, first bit most significant
    assert M[0b01, 0b11] == 1 and M[0b11, 0b01] == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.lists(phases, min_size=3, max_size=3), st.lists(phases, min_size=3, max_size=3))
def test_scaled_spider_fusion(k, a, b):
    lhs, rhs = scaled_fusion_sides(k, a[:k], b[:k])
    assert s_equal(lhs, rhs)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 2), st.lists(labels, min_size=2, max_size=2), st.lists(labels, min_size=2, max_size=2))
def test_scaled_h_multiply(k, a, b):
    lhs, rhs = scaled_multiply_sides(k, a[:k], b[:k])
    assert s_equal(lhs, rhs, tol=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_divider_gatherer_inverse(n):
    for lhs, rhs in divider_gatherer_sides(n):
        assert s_equal(lhs, rhs)


def test_scaled_generators_closed_form():
    for s in (scaled_z(2, 1, 2, [0.3, 1.1]), scaled_h(2, 1, 1, [2, -1j]), scaled_x(2, 2, 1),
              and_arrow(BitMatrix([[1, 0], [1, 1], [0, 0]], 3, 2)), regroup([1, 2], [3])):
        np.testing.assert_allclose(s_semantics(s), interpret(s), atol=1e-9)


def test_composition_and_tensor_on_thick_wires():
    A = BitMatrix([[1, 1, 0], [0, 1, 1]], 2, 3)
    B = BitMatrix([[1, 0], [1, 1]], 2, 2)
    s = s_compose(arrow("red", B), arrow("red", A))
    assert s_equal(s, arrow("red", mul_f2(B, A)))
    t = s_tensor(thick_identity(2), scaled_z(1, 1, 1, [0.4]))
    assert interpret(t).shape == (8, 8)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(LAWS[:6] + ("hadamard-flip",)), bitmatrices(max_rows=2, max_cols=2))
def test_arrow_laws_sampled(law, A):
    assert arrow_laws_check(law, A)


def test_red_yellow_differ_without_row_condition():
    A = BitMatrix([[1, 1]], 1, 2)
    with pytest.raises(PreconditionError):
        arrow_laws_check("red-eq-yellow-rowcond", A)
    assert not s_equal(arrow("red", A), arrow("yellow", A))


def test_json_round_trip_and_dot():
    s = s_compose(scaled_h(2, 1, 0, [2, 3]), and_arrow(BitMatrix([[1, 0], [1, 1]], 2, 2)))
    back = s_from_json(s_to_json(s))
    assert s_to_json(back) == s_to_json(s)
    assert s_equal(back, s)
    dot = s_to_dot(s)
    assert "arrow" in dot and "H(" in dot
    assert s_to_dot(back) == dot
