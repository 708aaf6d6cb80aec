from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crystalwalk.cartan import Family, WeightVector, cartan_matrix, parse_type
from crystalwalk.crystal import MonomialCrystal
from crystalwalk.perfect import b11, bn1_typeA, box_nodes
from crystalwalk.tensor import (
    TensorError,
    TensorNode,
    box_tensor,
    box_tensor_stats,
    catalogue_types,
    construct_walk_node,
    eligible_walks,
    existence_witness,
    kmn_component_check,
    kmn_decompose,
    left_fold_e,
    left_fold_eps_phi,
    left_fold_f,
    lemma_eps_tensor_clauses,
    psi_composition,
    psi_embed,
    psi_intertwines,
    product_highest_nodes,
    tensor_e,
    tensor_eps,
    tensor_f,
    tensor_phi,
    walk_sweep,
)

CATALOGUE = catalogue_types(4)


@st.composite
def box_products(draw, max_len=4):
    t = draw(st.sampled_from(CATALOGUE))
    pc = b11(t)
    factors = draw(st.lists(st.sampled_from(pc.nodes), min_size=1, max_size=max_len))
    return t, box_tensor(pc, factors)


def signature(tn: TensorNode, i: int):
    """Signature rule: -^eps +^phi per factor, then cancel adjacent (+, -)."""
    seq = []
    for p, (x, comp) in enumerate(zip(tn.factors, tn.components)):
        seq += [("-", p)] * comp.eps(x, i) + [("+", p)] * comp.phi(x, i)
    stack: list = []
    for s in seq:
        if s[0] == "-" and stack and stack[-1][0] == "+":
            stack.pop()
        else:
            stack.append(s)
    minus = [p for s, p in stack if s == "-"]
    plus = [p for s, p in stack if s == "+"]
    return len(minus), len(plus), (minus[-1] if minus else None), (plus[0] if plus else None)


def act(tn: TensorNode, pos, op):
    if pos is None:
        return None
    y = op(tn.components[pos], tn.factors[pos])
    return tn.replace(pos, y)


# -- tensor rule


@given(box_products())
def test_matches_signature_rule(case):
    t, tn = case
    for i in t.index_set:
        ne, nf, pe, pf = signature(tn, i)
        assert tensor_eps(tn, i) == ne and tensor_phi(tn, i) == nf
        assert tensor_e(tn, i) == act(tn, pe, lambda c, x: c.e(x, i))
        assert tensor_f(tn, i) == act(tn, pf, lambda c, x: c.f(x, i))


@given(box_products())
def test_right_and_left_folds_agree(case):
    t, tn = case
    for i in t.index_set:
        assert left_fold_eps_phi(tn, i) == (tensor_eps(tn, i), tensor_phi(tn, i))
        assert left_fold_e(tn, i) == tensor_e(tn, i)
        assert left_fold_f(tn, i) == tensor_f(tn, i)


@given(box_products())
def test_e_and_f_are_mutually_inverse(case):
    t, tn = case
    a = cartan_matrix(t)
    for i in t.index_set:
        y = tensor_f(tn, i)
        if y is not None:
            assert tensor_e(y, i) == tn
            for j in t.index_set:
                delta = (tensor_phi(y, j) - tensor_eps(y, j)) - (tensor_phi(tn, j) - tensor_eps(tn, j))
                assert delta == -a[j, i]
        x = tensor_e(tn, i)
        if x is not None:
            assert tensor_f(x, i) == tn


@given(box_products())
def test_string_length_is_e_iteration(case):
    t, tn = case
    for i in t.index_set:
        n, y = 0, tn
        while (y := tensor_e(y, i)) is not None:
            n += 1
        assert n == tensor_eps(tn, i)


def test_highest_factors_and_max_branch():
    t = parse_type("A2~1")
    bl = MonomialCrystal(t, WeightVector.fundamental(0))
    pc = b11(t)
    hw = TensorNode((bl.highest, "x0"), (bl, pc))
    # phi_1(v_{Lambda_0}) = 0 so eps_1 adds up
    assert tensor_eps(hw, 1) == pc.eps("x0", 1)
    assert tensor_eps(hw, 0) == max(0, pc.eps("x0", 0) - 1)


# -- box tensors and the existence construction


def test_lemma_clauses_on_a_cycle_walk():
    t = parse_type("A2~1")
    pc = b11(t)
    lab = box_nodes(t, pc, (1, 2, 0))
    clauses = lemma_eps_tensor_clauses(t, pc, lab)
    assert clauses == {"eps_first": True, "e_first": True, "phi_last": True}
    eps, phi = box_tensor_stats(t, pc, lab.boxes)
    assert eps == pc.epsilon_vector(lab.boxes[0], t.index_set)


def test_c_affine_walk_example():
    t = parse_type("C2~1")
    node, rep = construct_walk_node(t, (1, 2, 1, 0))
    assert rep.hw_check and rep.replay_check and rep.singular_check
    assert rep.to_json()["pass"] is True
    assert set(rep.to_json()) == {"walk", "lambda", "mu", "k", "m", "clauses", "pass"}


def test_repeat_walk_box_count():
    t = parse_type("B3~1")
    _, rep = construct_walk_node(t, (2, 3, 3, 2))
    assert rep.k - rep.m == 3


@pytest.mark.parametrize("name", ["A1~1", "A2~1", "A3~1", "C2~1", "C3~1"])
def test_construction_holds_for_a_and_c(name):
    t = parse_type(name)
    for rev in ([False, True] if t.family is Family.Aaff else [False]):
        pc = bn1_typeA(t.rank) if rev else b11(t)
        for w in eligible_walks(t, pc, 5):
            _, rep = construct_walk_node(t, w, rev)
            assert rep.passed, rep.to_json()
            assert all(rep.lemma.values())


def test_k1_walks_are_singular_everywhere():
    for t in CATALOGUE:
        pc = b11(t)
        for c in pc.colours:
            _, rep = construct_walk_node(t, (c,))
            assert rep.singular_check, (str(t), c)


def test_construction_rejects_bad_walks():
    t = parse_type("A2~1")
    with pytest.raises(TensorError):
        construct_walk_node(t, (1, 1))
    with pytest.raises(TensorError):
        construct_walk_node(parse_type("B3~1"), (3, 3))
    with pytest.raises(TensorError):
        construct_walk_node(parse_type("C2~1"), (1,), reversed_arrows=True)


def test_existence_witnesses_cover_every_walk():
    # the monomial model realises every eligible walk at level <= 2
    for t in [parse_type(s) for s in ("B3~1", "D4~1", "A4~2", "A5~2", "D3~2", "C2~1")]:
        for w in eligible_walks(t, b11(t), 4):
            assert existence_witness(t, w, 2) is not None, (str(t), w)


def test_walk_sweep_rows():
    rows = walk_sweep([parse_type("A2~1"), parse_type("C2~1")], max_len=4)
    assert [(r.type, r.reversed) for r in rows] == [("A2~1", False), ("A2~1", True), ("C2~1", False)]
    assert all(r.passed and r.walks > 0 for r in rows)


# -- KMN decomposition and psi


def test_kmn_filter():
    t = parse_type("A2~1")
    pc = b11(t)
    assert len(kmn_decompose(t, WeightVector.fundamental(0), pc)) == 1
    big = WeightVector({0: 5, 1: 5, 2: 5})
    assert len(kmn_decompose(t, big, pc)) == len(pc)
    with pytest.raises(TensorError):
        kmn_decompose(t, WeightVector(), pc)


@pytest.mark.parametrize("name", ["A2~1", "C2~1"])
def test_kmn_components(name):
    t = parse_type(name)
    for i in t.index_set:
        rep = kmn_component_check(t, WeightVector.fundamental(i), b11(t), depth=4)
        assert rep.passed, rep


def test_psi_embedding():
    t = parse_type("A2~1")
    lam, mu = WeightVector.fundamental(0), WeightVector.fundamental(1)
    hw = product_highest_nodes(t, lam, b11(t), 1, mu)
    assert len(hw) == 1
    assert psi_embed(t, lam, mu, 1, ()) == hw[0]
    rep = psi_intertwines(t, lam, mu, 1, depth=4)
    assert rep.passed and rep.checked > 0


def test_psi_composition():
    t = parse_type("A2~1")
    L = WeightVector.fundamental
    rep = psi_composition(t, L(0), L(1), L(2), depth=3)
    assert rep.passed and rep.composition_failures == 0
