"""Tests for the rank audit, FPS detection, maximal-rank classification,
the two standard twist families and the vertex-split surgery."""

import pytest
from hypothesis import given, settings, strategies as st

from traintrack.ct import check_ct
from traintrack.disintegrate import disintegrate
from traintrack.errors import InputError, InvariantForestError
from traintrack.freegroup import (
    is_IA,
    map_is_pi1_surjective,
    pi1_basis,
    pi1_images,
    spanning_tree,
)
from traintrack.maps import GraphMap, classify_strata, compose
from traintrack.maxrank import (
    classify_max_rank,
    default_stage_grouping,
    detect_fps,
    find_invariant_forest,
    gen_type_c,
    gen_type_e,
    rank_audit,
    split_twist_vertex,
    stage_ranks,
    valid_orders,
)
from traintrack.paths import MarkedGraph
from traintrack.samples import (
    exceptional_rose,
    full_fps_map,
    inner_twist_pair,
    partial_fps_map,
    qe_rose,
    rose_cascade,
    suffix_rose,
    swap_rose,
    zero_stratum_map,
)


def _forest_map():
    # the arc X is fixed, so {X} is a nontrivial invariant forest
    g = MarkedGraph(["a", "b"], [("A", "a", "a"), ("X", "a", "b"), ("B", "b", "b")])
    return GraphMap(
        g,
        {"A": g.path(["A"]), "X": g.path(["X"]), "B": g.path(["X'", "A", "X", "B"])},
    )


def _interleaved_pairs():
    # type E shape for n = 4, but with the construction order of the two
    # hanging pairs interleaved: E3, E5, E4, E6.  The default grouping then
    # has a stage whose intermediate prefixes do not retract to its floor,
    # so exhibiting the decomposition requires reordering strata.
    g = MarkedGraph(
        ["v1", "v2", "v3"],
        [
            ("E1", "v1", "v1"),
            ("E2", "v1", "v1"),
            ("E3", "v2", "v1"),
            ("E5", "v3", "v1"),
            ("E4", "v2", "v1"),
            ("E6", "v3", "v1"),
        ],
    )
    imgs = {"E1": ["E1"], "E2": ["E2", "E1"]}
    for j, name in enumerate(("E3", "E5", "E4", "E6"), start=2):
        imgs[name] = [name] + ["E1"] * j
    return GraphMap(g, {k: g.path(v) for k, v in imgs.items()}, name="interleaved")


# -- invariant forests -----------------------------------------------------------


def test_samples_have_no_invariant_forest():
    for make in (rose_cascade, qe_rose, partial_fps_map, full_fps_map):
        assert find_invariant_forest(make()) is None


def test_fixed_arc_is_an_invariant_forest():
    assert find_invariant_forest(_forest_map()) == ("X",)


def test_classify_refuses_invariant_forest():
    with pytest.raises(InvariantForestError, match="X"):
        classify_max_rank(_forest_map())


# -- stratum orders --------------------------------------------------------------


def test_valid_orders_identity_first():
    orders = list(valid_orders(qe_rose()))
    assert orders[0] == (0, 1, 2, 3)
    # E2 and E3 both depend only on E1, E4 on everything below
    assert orders == [(0, 1, 2, 3), (0, 2, 1, 3)]


def test_valid_orders_cap():
    assert len(list(valid_orders(qe_rose(), cap=1))) == 1


# -- rank sequences --------------------------------------------------------------


def test_stage_ranks_of_samples():
    assert stage_ranks(rose_cascade()) == [0, 0, 1, 1]
    assert stage_ranks(qe_rose()) == [0, 0, 1, 2, 1]
    assert stage_ranks(exceptional_rose()) == [0, 0, 1, 2, 2]
    assert stage_ranks(partial_fps_map()) == [0, 0, 1, 2, 3]
    assert stage_ranks(full_fps_map()) == [0, 0, 1, 2, 3, 4, 5]


def test_stage_ranks_skip_zero_topped_prefixes():
    # the prefix {A, Z} ends in a zero stratum; its rank is the rank below
    assert stage_ranks(zero_stratum_map()) == [0, 0, 0, 1]


def test_default_grouping_of_samples():
    assert default_stage_grouping(rose_cascade()) == [1, 2, 3]
    assert default_stage_grouping(qe_rose()) == [1, 2, 3, 4]
    assert default_stage_grouping(partial_fps_map()) == [1, 4]
    assert default_stage_grouping(full_fps_map()) == [1, 2, 6]
    assert default_stage_grouping(zero_stratum_map()) == [1, 3]


def test_grouping_boundaries_have_no_valence_one_vertices():
    for make in (qe_rose, partial_fps_map, full_fps_map):
        m = make()
        filt = classify_strata(m)
        for b in default_stage_grouping(m)[:-1]:
            edges = filt.prefix_edges(b)
            verts = m.graph.incident_vertices(edges)
            deg = {v: 0 for v in verts}
            for e in edges:
                deg[m.graph.init(e)] += 1
                deg[m.graph.term(e)] += 1
            assert all(d != 1 for d in deg.values())


# -- the audit -------------------------------------------------------------------


def test_audit_qe_rose():
    a = rank_audit(qe_rose())
    assert a.ranks == [0, 0, 1, 2, 1]
    assert a.grouping == [1, 2, 3, 4]
    assert [s.case for s in a.stages] == ["c", "c", None]
    assert [s.equality for s in a.stages] == [True, True, False]
    assert a.stages[2].delta_r == -1
    assert a.passed


def test_audit_partial_fps():
    a = rank_audit(partial_fps_map())
    assert a.grouping == [1, 4]
    (stage,) = a.stages
    assert (stage.delta_r, stage.delta_chi, stage.delta) == (3, 2, 1)
    assert stage.equality and stage.case == "b"
    assert stage.witness is not None and stage.witness.kind == "partial"
    assert a.passed


def test_audit_full_fps():
    a = rank_audit(full_fps_map())
    assert a.grouping == [1, 2, 6]
    assert [s.case for s in a.stages] == ["c", "a"]
    top = a.stages[1]
    assert (top.delta_r, top.delta_chi, top.delta) == (4, 2, 0)
    assert top.witness.kind == "full"
    assert a.passed


def test_audit_type_families():
    a = rank_audit(gen_type_e(3).generic)
    assert a.ranks == [0, 0, 1, 2, 3]
    assert [s.case for s in a.stages] == ["c", "d"]
    assert a.passed
    a = rank_audit(gen_type_c(4).generic)
    assert a.ranks == [0, 0, 0, 1, 2, 3, 4]
    assert a.grouping == [1, 2, 4, 6]
    # the second fixed petal adds euler characteristic but no rank
    assert [s.case for s in a.stages] == [None, "d", "d"]
    assert [s.equality for s in a.stages] == [False, True, True]
    assert a.passed


def test_audit_passes_on_homotopy_equivalence_samples():
    makers = (
        rose_cascade,
        qe_rose,
        exceptional_rose,
        suffix_rose,
        swap_rose,
        partial_fps_map,
        full_fps_map,
    )
    for make in makers:
        assert rank_audit(make()).passed, make.__name__
    f1, f2 = inner_twist_pair()
    assert rank_audit(f1).passed and rank_audit(f2).passed


def test_audit_flags_equality_without_shape():
    # the zero-stratum sample attains the bound without any of the four
    # shapes; it is exactly the sample that is not a homotopy equivalence
    a = rank_audit(zero_stratum_map())
    assert not a.passed
    (stage,) = a.stages
    assert stage.equality and stage.case is None and not stage.ok
    assert any("VIOLATION" in ln for ln in a.lines())


def test_audit_lines_format():
    a = rank_audit(partial_fps_map())
    assert a.lines()[0] == "ranks [0, 0, 1, 2, 3]"
    assert a.lines()[2] == "  G_1 -> G_4: dR=3 = 2*2 - 1 case (b)"
    assert a.lines()[-1] == "audit passed"


# -- FPS detection ---------------------------------------------------------------


def test_detect_partial_fps():
    (w,) = detect_fps(partial_fps_map())
    assert w.kind == "partial"
    assert w.l == 1 and w.strata == (2, 3, 4)
    assert w.shape == "pair-of-arcs"
    assert w.eg_edges == ("P", "Q")
    assert [(e, d, v) for e, d, v in w.linear] == [("E2", 1, "v2"), ("E3", 2, "v3")]
    assert [ax.edges for ax in w.alphas] == [("E1",), ("E1",)]
    assert w.chi_drop == 2


def test_detect_full_fps():
    (w,) = detect_fps(full_fps_map())
    assert w.kind == "full"
    assert w.l == 2 and w.strata == (3, 4, 5, 6)
    assert w.eg_edges == ("U", "V")
    assert [(e, d, v) for e, d, v in w.linear] == [
        ("F1", 1, "w1"),
        ("F2", 2, "w2"),
        ("F3", 3, "w3"),
    ]
    assert w.chi_drop == 2


def test_detect_fps_none_on_roses():
    assert detect_fps(qe_rose()) == []
    assert detect_fps(rose_cascade()) == []
    assert detect_fps(exceptional_rose()) == []


def test_full_fps_degrades_to_partial_when_a_twist_is_off():
    # with F1 fixed there are only two linear edges below the EG stratum,
    # and its images become concatenations over the larger floor G_3
    m = full_fps_map()
    imgs = dict(m.edge_images)
    imgs["F1"] = m.graph.path(["F1"])
    m2 = GraphMap(m.graph, imgs)
    (w,) = detect_fps(m2)
    assert w.kind == "partial" and w.l == 3 and w.strata == (4, 5, 6)
    assert [e for e, _, _ in w.linear] == ["F2", "F3"]


def test_detect_fps_rejects_bad_image_grammar():
    # F1 E1 E2 F1' is not a twist conjugate and not a Nielsen path
    m = full_fps_map()
    imgs = dict(m.edge_images)
    imgs["V"] = m.graph.path("U' F1 E1 E2 F1' U F2 E1 F2' V".split())
    m2 = GraphMap(m.graph, imgs)
    assert detect_fps(m2) == []


def test_witness_lines_mention_shape_and_twists():
    (w,) = detect_fps(full_fps_map())
    text = "\n".join(w.lines())
    assert "full FPS subgraph over G_2" in text
    assert "pair-of-arcs" in text
    assert "linear F3 from w3 twisting (E1)^3" in text


# -- classification --------------------------------------------------------------


def test_classify_rejects_unknown_mode():
    with pytest.raises(InputError):
        classify_max_rank(qe_rose(), mode="both")


def test_classify_partial_fps_map():
    r = classify_max_rank(partial_fps_map())
    assert r.ok and r.rank == r.target == 3
    assert r.base == ("A", 3)
    assert r.stages == []


def test_classify_full_fps_map():
    r = classify_max_rank(full_fps_map())
    assert r.ok and r.rank == r.target == 5
    assert r.base == ("A", 2)
    assert len(r.stages) == 1
    kind, num, witness = r.stages[0]
    assert (kind, num) == ("B", 2) and witness.kind == "full"


def test_classify_type_e_family():
    for n in (3, 4, 5):
        r = classify_max_rank(gen_type_e(n).generic)
        assert r.ok and r.rank == 2 * n - 3
        assert r.base == ("A", 2)
        assert all(s[:2] == ("B", 1) for s in r.stages)
        assert len(r.stages) == n - 2


def test_classify_type_c_family():
    for n in (4, 5):
        fam = gen_type_c(n)
        assert is_IA(fam.generic)
        r = classify_max_rank(fam.generic, mode="ia")
        assert r.ok and r.rank == 2 * n - 4
        assert r.base[0] == "A"
        assert all(s[:2] == ("B", 1) for s in r.stages)


def test_classify_reports_rank_obstruction():
    r = classify_max_rank(qe_rose())
    assert not r.ok
    assert r.obstruction == "rank(L) is 1, not 5"
    assert not r.inconclusive
    assert "not maximal" in "\n".join(r.lines())


def test_classify_ia_reports_homology_obstruction():
    # rank 2n-4 is attained but the E3 twist is visible in homology
    fam = gen_type_c(4)
    imgs = dict(fam.generic.edge_images)
    imgs["E3"] = fam.graph.path(["E3", "E1"])
    m = GraphMap(fam.graph, imgs)
    assert disintegrate(m).lattice.rank == 4
    r = classify_max_rank(m, mode="ia")
    assert not r.ok
    assert r.obstruction == "the map acts nontrivially on homology"


def test_classify_searches_stratum_reorderings():
    m = _interleaved_pairs()
    # under construction order the two pairs interleave and no proper
    # grouping exists, so the match must come from a reordering
    assert default_stage_grouping(m) == [1, 2, 6]
    r = classify_max_rank(m)
    assert r.ok and r.rank == 5
    assert r.order == (0, 1, 2, 4, 3, 5)
    assert [s[2] for s in r.stages] == [("E3", "E4"), ("E5", "E6")]
    assert any("reordered" in ln for ln in r.lines())


# -- the twist families ----------------------------------------------------------


def test_family_graph_shape():
    fam = gen_type_e(4)
    g = fam.graph
    assert g.rank() == 4
    assert [g.is_loop(e) for e in g.edge_names] == [True, True, False, False, False, False]
    assert g.init("E5") == "v3" and g.term("E5") == "v1"


def test_type_e_generator_count_and_commutation():
    fam = gen_type_e(3)
    assert [m.name for m in fam.generators] == ["eta_1", "eta_2", "eta_3"]
    for a in fam.generators:
        for b in fam.generators:
            assert compose(a, b).edges_equal(compose(b, a))


def test_type_e_first_generator_pi1_action():
    # eta_1 sends the second basis loop to (second)(first) and fixes the rest
    fam = gen_type_e(3)
    tree = spanning_tree(fam.graph)
    assert pi1_basis(fam.graph, tree) == ["E1", "E2", "E4"]
    words = pi1_images(fam.generators[0], tree)
    assert words == [("E1",), ("E2", "E1"), ("E4",)]


def test_type_c_generator_count_and_word():
    fam = gen_type_c(4)
    assert [m.name for m in fam.generators] == ["mu_1", "mu_2", "mu_3", "mu_4"]
    assert fam.word.edges == ("E1", "E2", "E1'", "E2'")
    for a in fam.generators:
        for b in fam.generators:
            assert compose(a, b).edges_equal(compose(b, a))


def test_type_c_generator_pi1_action():
    fam = gen_type_c(4)
    tree = spanning_tree(fam.graph)
    assert pi1_basis(fam.graph, tree) == ["E1", "E2", "E4", "E6"]
    words = pi1_images(fam.generators[0], tree)
    # the twisted loop picks up the commutator of the two petals
    assert words[2] == ("E2", "E1", "E2'", "E1'", "E4")
    assert words[0] == ("E1",) and words[1] == ("E2",) and words[3] == ("E6",)


def test_type_c_members_act_trivially_on_homology():
    fam = gen_type_c(5)
    assert all(is_IA(m) for m in fam.generators)
    assert is_IA(fam.generic)
    assert not is_IA(gen_type_e(3).generic)


def test_generic_members_are_ct():
    assert check_ct(gen_type_e(3).generic).passed
    assert check_ct(gen_type_c(4).generic).passed


def test_family_rank_census():
    for n in (3, 4, 5):
        assert disintegrate(gen_type_e(n).generic).lattice.rank == 2 * n - 3
    for n in (4, 5):
        assert disintegrate(gen_type_c(n).generic).lattice.rank == 2 * n - 4


def test_gen_argument_validation():
    with pytest.raises(InputError):
        gen_type_e(2)
    with pytest.raises(InputError):
        gen_type_c(3)
    with pytest.raises(InputError, match="homologically trivial"):
        gen_type_c(4, ["E1", "E2"])
    with pytest.raises(InputError, match="only E1 and E2"):
        gen_type_c(4, ["E3", "E3'"])
    with pytest.raises(InputError, match="trivial"):
        gen_type_c(4, ["E1", "E1'"])


def test_type_c_accepts_custom_word():
    fam = gen_type_c(4, ["E2", "E1", "E2'", "E1'"])
    assert fam.word.edges == ("E2", "E1", "E2'", "E1'")
    assert is_IA(fam.generic)
    assert classify_max_rank(fam.generic, mode="ia").ok


@settings(max_examples=25, deadline=None)
@given(
    st.lists(
        st.integers(min_value=1, max_value=9), min_size=3, max_size=3, unique=True
    )
)
def test_twist_exponents_never_break_audit_or_rank(exps):
    # distinct positive twisting exponents on the n=3 family graph give
    # lattice rank three, a passing audit and a matching decomposition
    # (equal exponents on one axis are rejected by the structure checks)
    g = gen_type_e(3).graph
    imgs = {"E1": g.path(["E1"])}
    for name, d in zip(("E2", "E3", "E4"), exps):
        imgs[name] = g.path([name] + ["E1"] * d)
    m = GraphMap(g, imgs)
    assert stage_ranks(m) == [0, 0, 1, 2, 3]
    assert rank_audit(m).passed
    assert classify_max_rank(m).ok


# -- vertex-split surgery --------------------------------------------------------


def test_split_shifts_exponents_and_fixes_pivot():
    sp = split_twist_vertex(qe_rose(), "E2")
    g = sp.graph
    assert g.edge_names == ("E1", "E2", "E3", "E4", "E0")
    assert sp.edge_images["E2"].edges == ("E2",)
    assert sp.edge_images["E0"].edges == ("E0",)
    # E3 had exponent 1, the pivot 2; the shifted twist is one negative
    # power of the conjugated axis loop
    assert sp.edge_images["E3"].edges == ("E3", "E0", "E1'", "E0'")
    filt = classify_strata(sp)
    (e3,) = [s for s in filt if s.edges == ("E3",)]
    assert e3.linear and e3.axis.edges == ("E0", "E1'", "E0'") and e3.exponent == 1


def test_split_lifts_other_images_through_the_new_edge():
    sp = split_twist_vertex(qe_rose(), "E2")
    assert sp.edge_images["E4"].edges == ("E4", "E3", "E0", "E3", "E2'")


def test_split_map_carries_the_forest_and_stays_surjective():
    sp = split_twist_vertex(qe_rose(), "E2")
    assert find_invariant_forest(sp) == ("E2",)
    assert map_is_pi1_surjective(sp)
    with pytest.raises(InvariantForestError):
        classify_max_rank(sp)


def test_split_on_full_fps_map():
    sp = split_twist_vertex(full_fps_map(), "F2")
    # every twist over E1 moves: exponents shift by -2
    assert sp.edge_images["F2"].edges == ("F2",)
    assert sp.edge_images["F1"].edges == ("F1", "E0", "E1'", "E0'")
    assert sp.edge_images["F3"].edges == ("F3", "E0", "E1", "E0'")
    assert sp.edge_images["E2"].edges == ("E2", "E0", "E1", "E1", "E0'")
    assert find_invariant_forest(sp) == ("F2",)
    assert map_is_pi1_surjective(sp)


def test_split_argument_validation():
    with pytest.raises(InputError, match="not a linear edge"):
        split_twist_vertex(qe_rose(), "E4")
    with pytest.raises(InputError, match="names are taken"):
        split_twist_vertex(qe_rose(), "E2", new_edge="E1")
