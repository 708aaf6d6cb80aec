from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crystalwalk.cartan import WeightVector, parse_type
from crystalwalk.crystal import find_node, generate, walks_to_highest
from crystalwalk.verify import (
    CHECKERS,
    SweepConfig,
    check_axioms,
    check_cor_parent,
    check_cor_serre,
    check_cor_zero,
    check_lemma_eps,
    check_stembridge,
    check_weyl_dimension,
    eval_index,
    exception_table,
    grid,
    mutation_selftest,
    qualifying_nodes,
    report_lines,
    run_cell,
    verify_thm_global,
    verify_thm_type,
)


def graph(name, values, depth=None):
    t = parse_type(name)
    return generate(t, WeightVector.from_list(t, values), depth)


# -- lemma and corollaries


def test_lemma_eps_examples():
    assert check_lemma_eps(graph("A1", [1])).status == "pass"
    rep = check_lemma_eps(graph("C2", [0, 1], 6))
    assert rep.status == "pass" and rep.instances > 0


def test_lemma_eps_printed_bound_fails_on_c2():
    # e_2 on the 5-dimensional C_2 crystal raises eps_1 by two, above -a_{21} = 1
    g = graph("C2", [0, 1])
    literal = check_lemma_eps(g, literal=True)
    assert not literal.passed
    assert all("i=2 j=1" in v[2] for v in literal.violations)
    assert check_lemma_eps(g).passed


def test_serre_case_two_counts():
    simply = check_cor_serre(graph("A3", [1, 0, 1]))
    assert simply.counts["case2"] == 0 and simply.counts["case2_second"] == 0
    c2 = check_cor_serre(graph("C2", [1, 1], 8))
    assert c2.passed and c2.counts["case2"] + c2.counts["case2_second"] > 0
    b2 = check_cor_serre(graph("B2", [0, 1], 8))
    assert b2.passed and b2.counts["case2_refined"] > 0


@pytest.mark.parametrize("name,values,depth", [("C2~1", [1, 0, 0], 8), ("B3~1", [1, 0, 0, 0], 8), ("D3~2", [1, 0, 0], 8)])
def test_corollaries_non_vacuous(name, values, depth):
    g = graph(name, values, depth)
    for fn in (check_cor_zero, check_cor_parent, check_cor_serre):
        rep = fn(g)
        assert rep.passed
    assert check_cor_parent(g).instances > 0 and check_cor_serre(g).instances > 0


def test_vacuous_status():
    g = graph("A1", [1])
    rep = check_cor_zero(g)
    assert rep.instances == 0 and rep.status == "vacuous" and rep.passed


# -- theorems


def test_type_a_unique_walk():
    g = graph("A3", [0, 1, 0])
    rep = verify_thm_global(g)
    assert rep.status == "pass"
    x = find_node(g, (2,))
    assert x in set(qualifying_nodes(g))
    assert walks_to_highest(g, x) == [(2,)]
    assert rep.counts["walk_count_histogram"] == {"1": rep.instances}


def test_type_c_turn_is_accepted():
    g = graph("C2", [1, 0])
    x = find_node(g, (1, 2, 1))
    assert x in set(qualifying_nodes(g))
    assert verify_thm_type(g).status == "pass"


def test_d4_has_a_diamond_pair():
    rep = verify_thm_global(graph("D4", [1, 0, 0, 0]))
    assert rep.status == "pass"
    pairs = rep.counts["two_walk_examples"]
    assert pairs
    w1, w2 = pairs[0]
    diff = {(a, b) for a, b in zip(w1, w2) if a != b}
    assert {frozenset(d) for d in diff} == {frozenset((3, 4))}


def test_b2_spin_chain_breaks_the_walk_shape():
    # B(Lambda_2) of B_2 is the chain f_2 f_1 f_2, every node singular;
    # its walk (2,1,2) is not consecutive on the 1,2,2,1 graph
    rep = verify_thm_global(graph("B2", [0, 1]))
    assert not rep.passed
    assert ("consecutive", "walk [2, 1, 2]") in {(v[1], v[2]) for v in rep.violations}


def test_finite_full_depth_skips_nothing():
    for name, values in [("B3", [1, 0, 0]), ("C3", [0, 1, 0]), ("A4", [1, 0, 0, 1])]:
        g = graph(name, values)
        assert verify_thm_type(g).skipped_frontier == 0


@given(st.sampled_from([("A2~1", [1, 0, 0]), ("C2~1", [0, 1, 0]), ("A1~1", [1, 1]), ("D3~2", [1, 0, 0])]),
       st.integers(2, 6))
def test_instance_counts_monotone_in_depth(cell, d):
    name, values = cell
    lo = verify_thm_type(graph(name, values, d)).instances
    hi = verify_thm_type(graph(name, values, d + 1)).instances
    assert lo <= hi


def test_a1_affine_needs_a_grandparent():
    g = graph("A1~1", [1, 0], 6)
    q = set(qualifying_nodes(g))
    assert find_node(g, (0,)) not in q  # parent v, no grandparent
    assert find_node(g, (1, 0)) in q
    assert verify_thm_type(g).passed


def test_exception_table_and_index_grammar():
    assert eval_index("n-1", 4) == 3 and eval_index("n", 4) == 4 and eval_index("0", 4) == 0
    t = parse_type("D4~1")
    assert exception_table(t) == [WeightVector({3: 1, 4: 1}), WeightVector({0: 1, 1: 1})]
    assert exception_table(t, {"Daff": []}) == []


# -- model validation


@pytest.mark.parametrize("name,values", [("A3", [1, 1, 0]), ("D4", [0, 1, 0, 0]), ("A2~1", [1, 1, 0])])
def test_stembridge_axioms(name, values):
    rep = check_stembridge(graph(name, values, 6))
    assert rep.status == "pass"


def test_axioms_and_dimension():
    g = graph("B3", [0, 0, 1])
    assert check_axioms(g).status == "pass"
    assert check_weyl_dimension(g.t, g.weight, g).status == "pass"


# -- mutation self-test


@pytest.mark.parametrize("name,values,depth", [("C2~1", [1, 0, 0], 8), ("C3", [1, 0, 1], None)])
def test_mutations_are_detected(name, values, depth):
    g = graph(name, values, depth)
    assert all(CHECKERS[n](g).passed for n in CHECKERS)
    for rep in mutation_selftest(g, seed=1):
        assert rep.detected == rep.seeded, (rep.checker, rep.missed)
    assert sum(r.seeded for r in mutation_selftest(g, seed=1)) > 0


# -- sweep plumbing


SMALL = """
[finite]
types = A2
weights = fundamental
depth = full

[affine]
types = A1~1
max_level = 1
depth = 4

[sweep]
checkers = axioms, global
stembridge = no
"""


def test_config_and_grid():
    cfg = SweepConfig.from_text(SMALL)
    cells = grid(cfg)
    assert [(str(t), w.as_list(t), d) for t, w, d in cells] == [
        ("A2", [1, 0], None), ("A2", [0, 1], None), ("A1~1", [1, 0], 4), ("A1~1", [0, 1], 4)]
    default = SweepConfig.load()
    assert "D4" in default.finite_types and default.affine_depth == 8


def test_single_cell_equals_direct_call():
    cfg = SweepConfig.from_text(SMALL)
    t, w, d = grid(cfg)[0]
    reports = run_cell(t, w, d, cfg)
    direct = verify_thm_global(generate(t, w, d))
    got = reports[1].to_json()
    assert {got["counts"].pop(k) for k in ("edges", "nodes")} == {2, 3}
    assert got == direct.to_json()
    lines = list(report_lines(reports))
    assert [json.loads(s)["theorem"] for s in lines] == ["axioms", "thm-global", "weyl-dimension"]


def test_exceptions_section_overrides():
    cfg = SweepConfig.from_text(SMALL + "\n[exceptions]\nBaff = 2*n\n")
    assert cfg.exceptions == {"Baff": ["2*n"]}
