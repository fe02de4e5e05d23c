import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import bitmatrices, graphs
from zhscale import rules
from zhscale.diagram import Diagram, equal_semantics, z_spider
from zhscale.rules import NoMatch, apply, find_sites
from zhscale.scalable import BitMatrix, s_equal, strip


@pytest.mark.parametrize("name", sorted(rules.RULES))
def test_rule_holds_on_random_draws(name):
    assert rules.verify_rule(name, draws=20, seed=7)


@pytest.mark.parametrize("name", sorted(rules.RULES))
def test_rule_defaults(name):
    lhs, rhs = rules.RULES[name].sides()
    assert equal_semantics(lhs, rhs)


def test_unknown_rule():
    with pytest.raises(KeyError):
        rules.get_rule("zz9")


def test_rules_are_not_vacuous():
    # perturbing a rule must break it: fusing adds phases, not multiplies them
    lhs, _ = rules.RULES["zs1"].sides(m=1, n=1, alpha=0.3, beta=0.4)
    assert not equal_semantics(lhs, z_spider(1, 1, 0.12))
    lhs, _ = rules.RULES["m"].sides(m=2, a=2, b=3)
    _, wrong = rules.RULES["m"].sides(m=2, a=2, b=5)
    assert not equal_semantics(lhs, wrong)


def _chain():
    d = Diagram()
    a, b, c = d.z(0.2), d.z(0.5), d.h(3)
    d.connect(d.add_input(), a)
    d.connect(a, b)
    d.connect(b, c)
    d.connect(c, d.add_output())
    d.connect(a, d.add_output())
    return d, (a, b, c)


def test_apply_fusion_inside_a_larger_diagram():
    d, (a, b, c) = _chain()
    assert [a, b] in find_sites("zs1", d)
    out = apply("zs1", d, [a, b])
    assert len(out.nodes) == 2
    assert equal_semantics(out, d)


def test_apply_identity_removal():
    d = Diagram()
    v = d.z()
    d.connect(d.add_input(), v)
    d.connect(v, d.add_output())
    assert find_sites("zs2", d) == [[v]]
    out = apply("zs2", d, [v])
    assert not out.nodes
    assert equal_semantics(out, d)


def test_apply_hs1_and_multiply():
    lhs, _ = rules.RULES["hs1"].sides(m=2, n=1, a=2)
    out = apply("hs1", lhs, sorted(lhs.nodes))
    assert equal_semantics(out, lhs)
    lhs, _ = rules.RULES["m"].sides(m=2, a=2, b=-1j)
    out = apply("m", lhs, sorted(lhs.nodes))
    assert equal_semantics(out, lhs)
    assert len(out.nodes) < len(lhs.nodes)


def test_apply_bialgebra_with_params():
    lhs, _ = rules.RULES["ba1"].sides(m=2, n=3)
    out = apply("ba1", lhs, sorted(lhs.nodes), {"m": 2, "n": 3})
    assert equal_semantics(out, lhs)


def test_apply_rejects_non_occurrence():
    d, (a, b, c) = _chain()
    with pytest.raises(NoMatch):
        apply("zs1", d, [b, c])
    with pytest.raises(NoMatch):
        apply("zs1", d, [a, a])


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=5), st.data())
def test_local_complementation(adj, data):
    v = data.draw(st.integers(0, len(adj) - 1))
    assert equal_semantics(*rules.local_complementation(adj, v))


def test_complement_toggles_neighbourhood():
    P3 = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    np.testing.assert_array_equal(rules.complement_at(P3, 1), [[0, 1, 1], [1, 0, 1], [1, 1, 0]])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hyper_local_complementation(n):
    assert equal_semantics(*rules.hyper_local_complementation(n))


def test_hlc_bang_form_matches_scalable_form():
    lhs, rhs = rules.hyper_local_complementation(3)
    A = BitMatrix([[1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]], 3, 4)
    slhs, srhs = rules.scalable_hlc(A)
    assert equal_semantics(strip(slhs), lhs)
    assert equal_semantics(strip(srhs), rhs)


@settings(max_examples=20, deadline=None)
@given(bitmatrices(min_size=1), bitmatrices(min_size=1, max_rows=2, max_cols=2))
def test_regular_hyper_pivot(A, B):
    assert equal_semantics(*rules.regular_hyper_pivot(A, B))
    assert s_equal(*rules.rhp_lemma(A, B))


def test_scalable_pivot_agrees_with_plain_pivot():
    A = BitMatrix([[1, 0], [1, 1]], 2, 2)
    B = BitMatrix([[0, 1, 1]], 1, 3)
    lhs, rhs = rules.regular_hyper_pivot(A, B)
    slhs, srhs = rules.rhp_scalable(A, B)
    assert equal_semantics(strip(slhs), lhs)
    assert equal_semantics(strip(srhs), rhs)


@pytest.mark.parametrize("name", ["hs2", "ba1", "ba2"])
@pytest.mark.parametrize("m,n", [(1, 1), (2, 2), (3, 1)])
def test_pivot_special_cases(name, m, n):
    assert rules.check_special_case(name, m, n)


@pytest.mark.parametrize("name", ["zs1", "hs1", "ba1", "ba2"])
def test_bang_rules(name):
    assert all(rules.check_bang_rule(name, max_count=2).values())
