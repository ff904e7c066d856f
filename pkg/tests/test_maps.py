import itertools

import pytest
from hypothesis import given, strategies as st

from traintrack.paths import MarkedGraph, inverse, base_name
from traintrack.maps import (
    GraphMap,
    compose,
    identity_map,
    transition_matrix,
    compute_filtration,
    restrict,
    direction_map,
    illegal_turns,
    is_legal_path,
    turns_crossed,
)
from traintrack.errors import MalformedPath, EndpointMismatch, InconsistentFiltration
from traintrack import samples


# --- oracle: apply by naive substitution + naive reduction ------------------


def naive_apply(m, edges):
    out = []
    for e in edges:
        im = m.edge_images[base_name(e)].edges
        out.extend(im if not e.endswith("'") else [inverse(x) for x in reversed(im)])
    changed = True
    out = list(out)
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if out[i + 1] == inverse(out[i]):
                del out[i : i + 2]
                changed = True
                break
    return tuple(out)


@st.composite
def cascade_words(draw):
    letters = [x for n in ("A", "B", "C") for x in (n, n + "'")]
    return tuple(draw(st.lists(st.sampled_from(letters), max_size=10)))


@given(cascade_words())
def test_apply_matches_substitution_oracle(word):
    m = samples.rose_cascade()
    p = m.graph.tighten(word, base="v")
    assert m.apply(p).edges == naive_apply(m, p.edges)


def test_apply_known_values():
    m = samples.rose_cascade()
    g = m.graph
    assert m.apply(g.path(["C"])).edges == ("C", "B")
    assert m.iterate(g.path(["C"]), 2).edges == ("C", "B", "B", "A")
    assert m.iterate(g.path(["C"]), 0).edges == ("C",)

    q = samples.qe_rose()
    h = q.graph
    assert q.apply(h.path(["E3", "E2'"])).edges == ("E3", "E1'", "E2'")
    f2e4 = q.iterate(h.path(["E4"]), 2)
    assert f2e4.edges == ("E4", "E3", "E3", "E2'", "E3", "E1", "E3", "E1'", "E2'")


def test_apply_trivial_path_moves_basepoint():
    m = samples.zero_stratum_map()
    t = m.graph.trivial_path("z1")
    assert m.apply(t).base == "a"


def test_graphmap_validation():
    g = MarkedGraph(["v"], [("A", "v", "v"), ("B", "v", "v")])
    with pytest.raises(MalformedPath):
        GraphMap(g, {"A": g.path(["A"])})  # missing image
    with pytest.raises(MalformedPath):
        GraphMap(g, {"A": g.trivial_path("v"), "B": g.path(["B"])})
    # two-vertex graph: endpoint consistency of vertex images
    h = MarkedGraph(
        ["u", "w"], [("P", "u", "w"), ("Q", "u", "w"), ("L", "u", "u")]
    )
    with pytest.raises(EndpointMismatch):
        # P's image sends u to w but L's image fixes u
        GraphMap(h, {"P": h.path(["Q'"]), "Q": h.path(["P'"]), "L": h.path(["L"])})
    GraphMap(h, {"P": h.path(["Q"]), "Q": h.path(["P"]), "L": h.path(["L"])})


def test_compose_and_iterate_agree():
    m = samples.qe_rose()
    g = m.graph
    mm = compose(m, m)
    for e in g.edge_names:
        assert mm.edge_images[e] == m.iterate(g.path([e]), 2)
    ident = identity_map(g)
    assert compose(m, ident).edges_equal(m)
    assert compose(ident, m).edges_equal(m)


# --- transition matrices -----------------------------------------------------


def brute_crossings(m, e_row, e_col):
    return sum(1 for x in m.edge_images[e_col].edges if base_name(x) == e_row)


def test_transition_matrix_counts():
    m = samples.qe_rose()
    t = transition_matrix(m)
    names = m.graph.edge_names
    for i, r in enumerate(names):
        for j, c in enumerate(names):
            assert t[i][j] == brute_crossings(m, r, c)
    # E4 column crosses E3 twice and E2 once
    assert t[names.index("E3")][names.index("E4")] == 2
    assert t[names.index("E2")][names.index("E4")] == 1


def test_transition_matrix_of_composition_bounded_by_square():
    # cancellation can only lose crossings, never create them
    for factory in (samples.rose_cascade, samples.qe_rose, samples.zero_stratum_map):
        m = factory()
        t = transition_matrix(m)
        n = len(t)
        sq = [[sum(t[i][k] * t[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        t2 = transition_matrix(compose(m, m))
        for i in range(n):
            for j in range(n):
                assert t2[i][j] <= sq[i][j]


def test_transition_matrix_of_composition_equals_square_when_legal():
    # all images of rose_cascade are legal paths, so no cancellation happens
    m = samples.rose_cascade()
    t = transition_matrix(m)
    n = len(t)
    sq = [[sum(t[i][k] * t[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert transition_matrix(compose(m, m)) == sq


# --- filtration ---------------------------------------------------------------


def reachability_scc_oracle(m):
    """Partition edges into SCCs via reflexive-transitive closure."""
    names = list(m.graph.edge_names)
    n = len(names)
    idx = {e: i for i, e in enumerate(names)}
    reach = [[False] * n for _ in range(n)]
    for e in names:
        for x in m.edge_images[e].edges:
            reach[idx[e]][idx[base_name(x)]] = True
    for k in range(n):
        for i in range(n):
            for j in range(n):
                reach[i][j] = reach[i][j] or (reach[i][k] and reach[k][j])
    comps = set()
    for i in range(n):
        comp = frozenset(
            names[j] for j in range(n) if (i == j) or (reach[i][j] and reach[j][i])
        )
        comps.add(frozenset(c for c in comp))
    return comps


def test_filtration_sccs_match_oracle():
    for factory in (
        samples.rose_cascade,
        samples.qe_rose,
        samples.zero_stratum_map,
        samples.partial_fps_map,
        samples.full_fps_map,
    ):
        m = factory()
        filt = compute_filtration(m)
        got = set()
        for s in filt:
            if s.kind == "zero":
                # merged zero strata may glue several oracle components
                for c in reachability_scc_oracle(m):
                    if c <= set(s.edges):
                        got.add(c)
            else:
                got.add(frozenset(s.edges))
        assert got == reachability_scc_oracle(m)


def test_filtration_qe_rose():
    m = samples.qe_rose()
    filt = compute_filtration(m)
    assert [list(s.edges) for s in filt] == [["E1"], ["E2"], ["E3"], ["E4"]]
    assert [s.kind for s in filt] == ["fixed", "NEG", "NEG", "NEG"]
    assert filt[1].neg_edge == "E2"
    assert filt[1].neg_suffix.edges == ("E1", "E1")
    assert filt.level("E4'") == 3
    assert filt.prefix_edges(2) == ["E1", "E2"]
    assert filt.height(m.graph.path(["E2", "E1"])) == 1


def test_filtration_respects_invariance():
    # every image of a stratum edge stays at or below its level
    for factory in samples.SAMPLES.values():
        m = factory()
        filt = compute_filtration(m)
        for s in filt:
            for e in s.edges:
                lvl = filt.level(e)
                for x in m.edge_images[e].edges:
                    assert filt.level(x) <= lvl


def test_filtration_zero_and_eg():
    m = samples.zero_stratum_map()
    filt = compute_filtration(m)
    assert [list(s.edges) for s in filt] == [["A"], ["Z"], ["S", "T"]]
    assert [s.kind for s in filt] == ["fixed", "zero", "EG"]


def test_orientation_flip_is_neg_without_normal_form():
    g = MarkedGraph(["v"], [("A", "v", "v"), ("B", "v", "v")])
    m = GraphMap(g, {"A": g.path(["A"]), "B": g.path(["B'"])})
    filt = compute_filtration(m)
    s = filt[1]
    assert s.kind == "NEG" and s.neg_edge is None and s.neg_suffix is None


def test_multi_edge_neg_stratum_rejected():
    g = MarkedGraph(["v"], [("A", "v", "v"), ("B", "v", "v")])
    m = GraphMap(g, {"A": g.path(["B"]), "B": g.path(["A"])})
    with pytest.raises(InconsistentFiltration):
        compute_filtration(m)


def test_restrict_to_prefix():
    m = samples.qe_rose()
    filt = compute_filtration(m)
    sub = restrict(m, filt.prefix_edges(2))
    assert sub.graph.edge_names == ("E1", "E2")
    assert sub.edge_images["E2"].edges == ("E2", "E1", "E1")
    with pytest.raises(InconsistentFiltration):
        restrict(m, ["E1", "E4"])  # image of E4 leaves the subset


# --- directions and turns ------------------------------------------------------


def test_direction_map_swap_rose():
    m = samples.swap_rose()
    dm = direction_map(m)
    assert dm.classify("A'") == "fixed"
    assert dm.classify("B'") == "fixed"
    assert dm.classify("C'") == "fixed"
    assert dm.classify("B") == "periodic(2)"
    assert dm.classify("C") == "periodic(2)"
    assert dm.classify("A") == "pre-periodic"
    per = dict(dm.periodic_directions("v"))
    assert per == {"A'": 1, "B'": 1, "C'": 1, "B": 2, "C": 2}


def test_illegal_turns_qe_rose():
    m = samples.qe_rose()
    ill = illegal_turns(m)
    # E2' and E3' both eventually point along E1'
    assert frozenset(("E2'", "E3'")) in ill
    # degenerate turns are always illegal
    assert frozenset(("E1",)) in ill
    # a fixed pair is legal
    assert frozenset(("E1", "E2")) not in ill
    assert is_legal_path(m, m.graph.path(["E2", "E1"]))
    assert not is_legal_path(m, m.graph.path(["E3", "E2'"]))
    assert turns_crossed(m.graph, m.graph.path(["E3", "E2'"])) == [
        frozenset(("E3'", "E2'"))
    ]


def test_illegal_turn_of_zero_stratum_map_is_hidden():
    # the EG stratum needs an illegal turn, but no image may take it
    m = samples.zero_stratum_map()
    ill = illegal_turns(m)
    assert frozenset(("S'", "T'")) in ill
    for e in m.graph.edge_names:
        for t in turns_crossed(m.graph, m.edge_images[e]):
            assert t not in ill


def test_periodic_vertices():
    m = samples.zero_stratum_map()
    assert m.periodic_vertices() == {"a": 1}
    assert m.fixed_vertices() == ["a"]
