"""Nielsen catalog, linear edges, axes, and splitting tests.

The catalog is pinned against brute-force enumeration on small bounds:
every tight path up to the bound is checked for f_#(p) = p directly, and
indivisibility by trying every split point.
"""

import pytest
from hypothesis import given, settings, strategies as st

from traintrack import MarkedGraph
from traintrack.errors import LViolation, NotCompletelySplit
from traintrack.maps import GraphMap
from traintrack.paths import inverse
from traintrack.nielsen import (
    TERM_CONN,
    TERM_EDGE,
    TERM_EXC,
    TERM_INP,
    TERM_QE,
    Term,
    axes,
    build_catalog,
    complete_split,
    default_length_bound,
    detect_linear_edges,
    is_exceptional_path,
    is_nielsen_path,
    qe_families,
    qe_split,
    verify_splitting,
)
from traintrack.samples import (
    exceptional_rose,
    full_fps_map,
    inner_twist_pair,
    partial_fps_map,
    qe_rose,
    rose_cascade,
    suffix_rose,
    zero_stratum_map,
)


def _rose(names):
    return MarkedGraph(["v"], [(n, "v", "v") for n in names])


def _map(g, images, name="f"):
    return GraphMap(g, {e: g.path(w.split()) for e, w in images.items()}, name=name)


def tight_paths_up_to(g, n):
    out = []
    frontier = [((d,), g.term(d)) for d in g.directions()]
    while frontier:
        nxt = []
        for edges, end in frontier:
            out.append(g.path(edges))
            if len(edges) < n:
                for d in g.directions(end):
                    if d != inverse(edges[-1]):
                        nxt.append((edges + (d,), g.term(d)))
        frontier = nxt
    return out


def norm(p):
    return min(p.edges, p.reverse().edges)


def brute_nielsen(m, max_len):
    return [p for p in tight_paths_up_to(m.graph, max_len) if m.apply(p) == p]


def brute_indivisible(m, p):
    for i in range(1, len(p)):
        left, right = p.subpath(0, i), p.subpath(i, len(p))
        if m.apply(left) == left and m.apply(right) == right:
            return False
    return True


# -- catalog vs brute force ------------------------------------------------------


def test_catalog_matches_brute_force_qe_rose():
    m = qe_rose()
    bound = 4
    cat = build_catalog(m, bound=bound)
    cat_inps = {norm(e.path) for e in cat.inps()}
    brute = {
        norm(p)
        for p in brute_nielsen(m, bound)
        if len(p) >= 2 and brute_indivisible(m, p)
    }
    assert cat_inps == brute
    assert brute == {
        ("E2", "E1", "E2'"),
        ("E2", "E1", "E1", "E2'"),
        ("E3", "E1", "E3'"),
        ("E3", "E1", "E1", "E3'"),
    }
    # composite entries carry the flag and are genuinely divisible
    for e in cat.entries:
        assert is_nielsen_path(m, e.path)
        if not e.indivisible:
            assert not brute_indivisible(m, e.path)


def test_catalog_matches_brute_force_rose_cascade():
    m = rose_cascade()
    cat = build_catalog(m, bound=4)
    cat_inps = {norm(e.path) for e in cat.inps()}
    brute = {
        norm(p)
        for p in brute_nielsen(m, 4)
        if len(p) >= 2 and brute_indivisible(m, p)
    }
    assert cat_inps == brute == {("B", "A", "B'"), ("B", "A", "A", "B'")}
    assert cat.fixed_edges == ["A"]


def test_catalog_fixed_edges_and_heights():
    m = qe_rose()
    cat = build_catalog(m, bound=6)
    assert cat.fixed_edges == ["E1"]
    for e in cat.entries:
        # every entry through E2 / E3 tops out at that stratum
        top = max(e.path.edges, key=lambda x: m.graph.edge_index(x))
        assert e.height == {"E1": 0, "E2": 1, "E3": 2}[top.rstrip("'")]


def test_catalog_is_cached():
    m = qe_rose()
    assert build_catalog(m, bound=8) is build_catalog(m, bound=8)
    assert build_catalog(m, bound=8) is not build_catalog(m, bound=9)


def test_default_bound_covers_images():
    m = qe_rose()
    assert default_length_bound(m) == 4 * 4 + 8


def test_periodic_entries_orientation_flip():
    # B reverses onto itself, so BB flips orientation and returns: a
    # genuine period-two Nielsen path, while AA is fixed outright.
    g = _rose(["A", "B"])
    m = _map(g, {"A": "A", "B": "B'"})
    cat = build_catalog(m, bound=4, period_bound=2)
    assert any(e.path.edges == ("B", "B") and e.period == 2 for e in cat.periodic)
    for e in cat.periodic:
        probe = e.path
        for _ in range(e.period):
            probe = m.apply(probe)
        assert probe == e.path
        assert m.apply(e.path) != e.path
    assert any(e.path.edges == ("A", "A") for e in cat.entries)


def test_no_periodic_entries_qe_rose():
    cat = build_catalog(qe_rose(), bound=6, period_bound=3)
    assert cat.periodic == []


# -- linear edges and axes -------------------------------------------------------


def test_linear_edges_qe_rose():
    got = {le.edge: (le.word.edges, le.exponent) for le in detect_linear_edges(qe_rose())}
    assert got == {"E2": (("E1",), 2), "E3": (("E1",), 1)}


def test_linear_edges_suffix_rose():
    m = suffix_rose()
    got = {le.edge: (le.word.edges, le.exponent) for le in detect_linear_edges(m)}
    # C's suffix is B, which is not Nielsen, so C is NEG but not linear
    assert got == {"B": (("A",), 2), "D": (("A",), 5)}
    ax = axes(m)
    assert len(ax) == 1
    assert ax[0].word.edges == ("A",)
    assert ax[0].members == [("B", 2), ("D", 5)]
    assert ax[0].multiplicity == 3


def test_linear_edge_reversed_orientation():
    f1, _ = inner_twist_pair()
    got = {le.edge: (le.word.edges, le.exponent) for le in detect_linear_edges(f1)}
    assert got["E2'"] == (("E1'",), 1)


def test_axes_violation_equal_exponents():
    g = _rose(["A", "B", "C"])
    m = _map(g, {"A": "A", "B": "B A", "C": "C A"})
    with pytest.raises(LViolation):
        axes(m)


def test_axes_violation_conjugate_words():
    g = _rose(["A1", "A2", "B", "C"])
    m = _map(g, {"A1": "A1", "A2": "A2", "B": "B A1 A2", "C": "C A2 A1"})
    with pytest.raises(LViolation):
        axes(m)


def test_axes_opposite_orientation_groups_together():
    g = _rose(["A", "B", "C"])
    m = _map(g, {"A": "A", "B": "B A", "C": "C A' A'"})
    ax = axes(m)
    assert len(ax) == 1
    assert ax[0].members == [("B", 1), ("C", -2)]


def test_qe_families_qe_rose():
    fams = qe_families(qe_rose())
    assert len(fams) == 1
    fam = fams[0]
    assert (fam.e_i, fam.d_i, fam.e_j, fam.d_j) == ("E2", 2, "E3", 1)
    assert fam.is_exceptional()
    m = qe_rose()
    g = m.graph
    assert fam.member_path(1).edges == ("E2", "E1", "E3'")
    assert fam.matches(g.path(["E2", "E1", "E1", "E3'"])) == 2
    assert fam.matches(g.path(["E3", "E2'"])) == 0
    assert fam.matches(g.path(["E3", "E1", "E2'"])) == -1
    assert fam.matches(g.path(["E2", "E1", "E2'"])) is None
    assert fam.matches(g.path(["E2", "E1"])) is None


def test_qe_family_opposite_signs_not_exceptional():
    g = _rose(["A", "B", "C"])
    m = _map(g, {"A": "A", "B": "B A", "C": "C A'"})
    fams = qe_families(m)
    assert len(fams) == 1
    assert (fams[0].d_i, fams[0].d_j) == (1, -1)
    assert not fams[0].is_exceptional()
    assert is_exceptional_path(m, g.path(["B", "A", "C'"])) is None


def test_is_exceptional_path():
    m = qe_rose()
    g = m.graph
    assert is_exceptional_path(m, g.path(["E2", "E1", "E1", "E3'"])) is not None
    assert is_exceptional_path(m, g.path(["E2", "E1", "E2'"])) is None


# -- complete splittings ---------------------------------------------------------


def test_complete_split_qe_rose_image():
    m = qe_rose()
    cs = complete_split(m, m.image("E4"))
    assert [t.kind for t in cs.terms] == [TERM_EDGE, TERM_EDGE, TERM_EXC]
    assert [t.path.edges for t in cs.terms] == [
        ("E4",),
        ("E3",),
        ("E3", "E2'"),
    ]
    assert cs.certificate == "legal-turns"


def test_complete_split_exceptional_rose_image():
    m = exceptional_rose()
    cs = complete_split(m, m.image("D"))
    assert [t.kind for t in cs.terms] == [TERM_EDGE, TERM_EXC]
    assert cs.terms[1].path.edges == ("C", "B'")


def test_complete_split_whole_exceptional():
    m = qe_rose()
    cs = complete_split(m, m.graph.path(["E2", "E1", "E1", "E3'"]))
    assert len(cs.terms) == 1 and cs.terms[0].kind == TERM_EXC


def test_complete_split_inp_terms():
    m = partial_fps_map()
    cs = complete_split(m, m.image("P"))
    kinds = [t.kind for t in cs.terms]
    assert kinds == [
        TERM_EDGE,
        TERM_INP,
        TERM_EDGE,
        TERM_INP,
        TERM_EDGE,
        TERM_INP,
        TERM_EDGE,
        TERM_EDGE,
        TERM_EDGE,
    ]
    assert cs.terms[1].path.edges == ("E2", "E1", "E2'")
    assert cs.terms[3].path.edges == ("E3", "E1", "E1", "E3'")
    assert cs.terms[5].path.edges == ("E2", "E1'", "E2'")


def test_complete_split_zero_stratum_run():
    m = zero_stratum_map()
    cs = complete_split(m, m.image("T"))
    assert any(t.kind == TERM_CONN for t in cs.terms)
    for t in cs.terms:
        if t.kind == TERM_CONN:
            assert t.path.edges in {("Z",), ("Z'",)}


def test_complete_split_edge_images_verify():
    for make in (
        rose_cascade,
        qe_rose,
        exceptional_rose,
        partial_fps_map,
        full_fps_map,
        zero_stratum_map,
    ):
        m = make()
        for e in m.graph.edge_names:
            path = m.image(e)
            cs = complete_split(m, path)
            ok, cert = verify_splitting(m, path, cs.terms)
            assert ok, (m.name, e, cert)
            assert sum(len(t.path) for t in cs.terms) == len(path)


def test_not_completely_split():
    m = rose_cascade()
    with pytest.raises(NotCompletelySplit) as ei:
        complete_split(m, m.graph.path(["B", "A'"]))
    assert ei.value.position == 1


def test_suffix_rose_top_image_does_not_split():
    # f(E) = D C B' crosses the illegal turn {C', B'} with no Nielsen or
    # exceptional piece to absorb it.
    m = suffix_rose()
    with pytest.raises(NotCompletelySplit):
        complete_split(m, m.image("E"))


def test_verify_splitting_rejects_cancellation():
    m = qe_rose()
    g = m.graph
    path = g.path(["E2", "E3'"])
    bad = [Term(TERM_EDGE, path.subpath(0, 1)), Term(TERM_EDGE, path.subpath(1, 2))]
    ok, why = verify_splitting(m, path, bad)
    assert not ok and "cancel" in why
    ok, why = verify_splitting(m, g.path(["E2", "E1"]), bad)
    assert not ok and "concatenate" in why


def test_trivial_split():
    m = qe_rose()
    cs = complete_split(m, m.graph.trivial_path("v"))
    assert cs.terms == [] and cs.certificate == "trivial"


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(["E1", "E2", "E3", "E4", "E1'", "E2'", "E3'", "E4'"]), min_size=1, max_size=6))
def test_split_respects_iteration(word):
    m = qe_rose()
    g = m.graph
    path = g.tighten(word, base="v")
    if path.is_trivial():
        return
    try:
        cs = complete_split(m, path)
    except NotCompletelySplit:
        return
    # the defining property: images of the terms concatenate with no
    # cancellation, at every depth we care to check
    probe = path
    pieces = [t.path for t in cs.terms]
    for _ in range(3):
        probe = m.apply(probe)
        pieces = [m.apply(p) for p in pieces]
        flat = []
        for p in pieces:
            flat.extend(p.edges)
        assert tuple(flat) == probe.edges


# -- QE splittings ---------------------------------------------------------------


def test_qe_split_relabels_exceptional():
    m = qe_rose()
    qs = qe_split(m, m.image("E4"))
    assert [t.kind for t in qs.terms] == [TERM_EDGE, TERM_EDGE, TERM_QE]
    assert qs.qe_terms()[0].power == 0


def test_qe_split_merges_opposite_sign_run():
    g = _rose(["A", "B", "C"])
    m = _map(g, {"A": "A", "B": "B A", "C": "C A'"})
    path = g.path(["B", "A", "C'"])
    cs = complete_split(m, path)
    assert [t.kind for t in cs.terms] == [TERM_EDGE, TERM_EDGE, TERM_EDGE]
    qs = qe_split(m, path, splitting=cs)
    assert len(qs.terms) == 1
    t = qs.terms[0]
    assert t.kind == TERM_QE and t.power == 1
    assert t.family.ends() == {"B", "C"}


def test_qe_split_merges_longer_powers():
    m = qe_rose()
    g = m.graph
    path = g.path(["E2", "E1", "E1", "E1", "E3'"])
    qs = qe_split(m, path)
    assert len(qs.terms) == 1
    assert qs.terms[0].kind == TERM_QE and qs.terms[0].power == 3


def test_qe_split_leaves_plain_paths_alone():
    m = rose_cascade()
    qs = qe_split(m, m.image("C"))
    assert [t.kind for t in qs.terms] == [TERM_EDGE, TERM_EDGE]
