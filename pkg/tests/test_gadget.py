import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ovdiam.gadget import (
    GadgetParams,
    ParameterError,
    UnsupportedCut,
    build_gadget,
    cut_partition,
    exact_size,
    map_ell,
    negative_control_edge,
    parse_edgelist_text,
    parse_labels_text,
    remove_edge,
    to_edgelist_text,
    to_json_doc,
    to_labels_text,
)
from ovdiam.ovcore import BitVector, OVInstance, random_ov


def bv(*xs):
    return BitVector(tuple(xs))


def tiny_instance():
    return OVInstance((bv(1),), (bv(1),))


params_strategy = st.builds(
    GadgetParams,
    st.integers(1, 3),
    st.integers(0, 1),
    st.integers(0, 2),
)
instance_strategy = st.builds(
    random_ov,
    st.integers(1, 4),
    st.integers(1, 4),
    st.integers(0, 10**6),
)


# -- map_ell -------------------------------------------------------------------

def test_map_ell_examples():
    assert map_ell(4) == (2, 0)
    assert map_ell(5) == (3, 1)
    assert map_ell(1) == (1, 1)


def test_map_ell_identities():
    for ell in range(1, 40):
        ep, p = map_ell(ell)
        assert 4 * ep - 2 * p == 2 * ell
        assert 6 * ep - 3 * p == 3 * ell


def test_map_ell_rejects_zero():
    with pytest.raises(ParameterError):
        map_ell(0)


def test_params_validation():
    with pytest.raises(ParameterError):
        GadgetParams(0, 0, 0)
    with pytest.raises(ParameterError):
        GadgetParams(1, 2, 0)
    with pytest.raises(ParameterError):
        GadgetParams(1, 0, -1)


# -- construction ----------------------------------------------------------------

def test_ten_vertex_example():
    g = build_gadget(tiny_instance(), GadgetParams(1, 0, 1))
    assert (g.vertex_count, g.edge_count) == (10, 12)
    # all paths have length 1, so no interior vertices exist
    assert all(lab.kind != "interior" for labs in g.labels.values() for lab in labs)


def test_q_zero_identifications():
    g = build_gadget(tiny_instance(), GadgetParams(1, 0, 0))
    assert g.vertex_count == 8
    w = g.vertex_of("wL", 1)
    assert w == g.vertex_of("wR", 1)
    assert g.vertex_of("yL") == g.vertex_of("yR")
    kinds = {lab.kind for lab in g.labels[w]}
    assert kinds == {"wL", "wR"}


def test_ell1_p1_identifications():
    g = build_gadget(tiny_instance(), GadgetParams(1, 1, 0))
    assert g.vertex_of("xL") == g.vertex_of("yL")
    assert g.vertex_of("xR") == g.vertex_of("yR")
    assert g.vertex_of("uL", 1) == g.vertex_of("vL", 1)
    assert g.vertex_of("uR", 1) == g.vertex_of("vR", 1)
    # p + q = 1 keeps the two y vertices distinct
    assert g.vertex_of("yL") != g.vertex_of("yR")


def test_every_exterior_role_exactly_once():
    g = build_gadget(random_ov(3, 4, seed=1), GadgetParams(2, 1, 1))
    roles = [
        lab for labs in g.labels.values() for lab in labs if lab.kind != "interior"
    ]
    assert len(roles) == len(set(roles)) == 4 * 3 + 2 * 4 + 4


def test_interior_positions_strictly_inside():
    g = build_gadget(random_ov(2, 3, seed=5), GadgetParams(3, 0, 2))
    for rec in g.paths:
        assert len(rec.vertices) == max(rec.length + 1, 1)
        for pos, v in enumerate(rec.vertices):
            for lab in g.labels[v]:
                if lab.kind == "interior" and lab.index == rec.ordinal:
                    assert 0 < lab.position < rec.length
                    assert pos == lab.position


def test_determinism():
    inst = random_ov(3, 5, seed=42)
    params = GadgetParams(2, 1, 2)
    assert build_gadget(inst, params) == build_gadget(inst, params)


def _is_connected(g):
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in g.adjacency[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.vertex_count


@given(instance_strategy, params_strategy)
@settings(max_examples=40, deadline=None)
def test_built_graph_simple_connected_and_sized(inst, params):
    g = build_gadget(inst, params)
    # simple and symmetric
    for u, nbrs in enumerate(g.adjacency):
        assert u not in nbrs
        assert len(nbrs) == len(set(nbrs))
        for v in nbrs:
            assert u in g.adjacency[v]
    assert _is_connected(g)
    assert (g.vertex_count, g.edge_count) == exact_size(
        inst.n, inst.dimension, inst.ones_left(), inst.ones_right(), params
    )
    assert len(g.edges) == len(set(g.edges))


def test_exact_size_example():
    assert exact_size(1, 1, 1, 1, GadgetParams(1, 0, 1)) == (10, 12)


def test_zero_row_keeps_graph_connected():
    inst = OVInstance((bv(0, 0), bv(1, 0)), (bv(0, 0), bv(0, 0)))
    g = build_gadget(inst, GadgetParams(2, 0, 1))
    assert _is_connected(g)


def test_size_growth_with_ell_matches_formula():
    inst = random_ov(2, 3, seed=3)
    for q in (0, 1):
        v1, e1 = exact_size(2, 3, inst.ones_left(), inst.ones_right(), GadgetParams(2, 0, q))
        v2, e2 = exact_size(2, 3, inst.ones_left(), inst.ones_right(), GadgetParams(4, 0, q))
        g1 = build_gadget(inst, GadgetParams(2, 0, q))
        g2 = build_gadget(inst, GadgetParams(4, 0, q))
        assert (g1.vertex_count, g1.edge_count) == (v1, e1)
        assert (g2.vertex_count, g2.edge_count) == (v2, e2)
        # with p = 0, every edge count is linear in ell except the q terms
        assert e2 - e1 == e1 - q * (3 + 1)


# -- cut partition ----------------------------------------------------------------

def test_cut_example():
    g = build_gadget(tiny_instance(), GadgetParams(1, 0, 1))
    cut = cut_partition(g)
    assert cut.size == 2  # d + 1
    assert set(cut.cut_edges) == {
        (g.vertex_of("wL", 1), g.vertex_of("wR", 1)),
        (g.vertex_of("yL"), g.vertex_of("yR")),
    }


def test_cut_size_is_d_plus_one():
    inst = random_ov(2, 7, seed=8)
    g = build_gadget(inst, GadgetParams(2, 1, 1))
    assert cut_partition(g).size == 8


def test_cut_rejects_q_zero():
    g = build_gadget(tiny_instance(), GadgetParams(1, 0, 0))
    with pytest.raises(UnsupportedCut):
        cut_partition(g)


@given(instance_strategy, st.integers(1, 3), st.integers(0, 1), st.integers(1, 2))
@settings(max_examples=30, deadline=None)
def test_cut_disconnects_u_anchors(inst, ell, p, q):
    g = build_gadget(inst, GadgetParams(ell, p, q))
    cut = cut_partition(g)
    assert cut.size == inst.dimension + 1
    banned = set(cut.cut_edges) | {(b, a) for a, b in cut.cut_edges}
    start = g.vertex_of("uL", 1)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in g.adjacency[u]:
            if (u, v) not in banned and v not in seen:
                seen.add(v)
                stack.append(v)
    for i in range(1, g.n + 1):
        assert g.vertex_of("uL", i) in seen
        assert g.vertex_of("uR", i) not in seen
    # side assignment matches reachability
    for v in seen:
        assert cut.side_of[v] == "A"


def _side_signature(g, cut, side):
    """Instance-independent content description of one side's subgraph."""
    key = {}
    for rec in g.paths:
        for pos, v in enumerate(rec.vertices):
            key.setdefault(v, (rec.kind, rec.side, rec.i, rec.k, pos))
    chosen = sorted(v for v in range(g.vertex_count) if cut.side_of[v] == side)
    edges = {
        (key[u], key[v])
        for u, v in g.edges
        if cut.side_of[u] == side and cut.side_of[v] == side
    }
    return {key[v] for v in chosen}, edges


def test_sides_determined_by_own_vectors():
    params = GadgetParams(2, 0, 2)
    left = random_ov(2, 3, seed=1).left
    right_a = random_ov(2, 3, seed=2).right
    right_b = random_ov(2, 3, seed=3).right
    g_a = build_gadget(OVInstance(left, right_a), params)
    g_b = build_gadget(OVInstance(left, right_b), params)
    assert _side_signature(g_a, cut_partition(g_a), "A") == _side_signature(
        g_b, cut_partition(g_b), "A"
    )
    other_left = random_ov(2, 3, seed=4).left
    g_c = build_gadget(OVInstance(other_left, right_a), params)
    assert _side_signature(g_a, cut_partition(g_a), "B") == _side_signature(
        g_c, cut_partition(g_c), "B"
    )


def test_gluing_sides_reproduces_graph():
    g = build_gadget(random_ov(3, 4, seed=6), GadgetParams(2, 1, 2))
    cut = cut_partition(g)
    intra = [
        e for e in g.edges if cut.side_of[e[0]] == cut.side_of[e[1]]
    ]
    assert sorted(intra + [tuple(sorted(e)) for e in cut.cut_edges]) == list(g.edges)


# -- negative control edits --------------------------------------------------------

def test_remove_edge():
    g = build_gadget(tiny_instance(), GadgetParams(1, 0, 1))
    u, v = negative_control_edge(g)
    g2 = remove_edge(g, u, v)
    assert g2.edge_count == g.edge_count - 1
    assert v not in g2.adjacency[u]
    with pytest.raises(ValueError):
        remove_edge(g, 0, g.vertex_count - 1)


def test_negative_control_edge_when_u_merged():
    g = build_gadget(tiny_instance(), GadgetParams(1, 1, 1))
    u, v = negative_control_edge(g)
    assert u == g.vertex_of("vL", 1)


# -- text exports ------------------------------------------------------------------

def test_edgelist_round_trip_and_determinism():
    g = build_gadget(random_ov(2, 3, seed=9), GadgetParams(2, 0, 1))
    text = to_edgelist_text(g)
    assert text == to_edgelist_text(g)
    count, edges = parse_edgelist_text(text)
    assert count == g.vertex_count
    assert edges == g.edges


def test_edgelist_example_bytes():
    g = build_gadget(tiny_instance(), GadgetParams(1, 0, 1))
    assert to_edgelist_text(g) == (
        "p edge 10 12\n"
        "e 1 3\ne 2 4\ne 3 5\ne 3 7\ne 4 6\ne 4 8\n"
        "e 5 6\ne 5 9\ne 6 10\ne 7 9\ne 8 10\ne 9 10\n"
    )
    assert to_labels_text(g) == (
        "1 uL 1\n2 uR 1\n3 vL 1\n4 vR 1\n5 wL 1\n"
        "6 wR 1\n7 xL\n8 xR\n9 yL\n10 yR\n"
    )


def test_labels_round_trip():
    g = build_gadget(random_ov(2, 2, seed=4), GadgetParams(1, 1, 0))
    parsed = parse_labels_text(to_labels_text(g))
    assert set(parsed) == set(range(g.vertex_count))
    merged = g.vertex_of("xL")
    assert "xL" in parsed[merged] and "yL" in parsed[merged]


def test_edgelist_parse_errors():
    from ovdiam.ovcore import ParseError

    with pytest.raises(ParseError):
        parse_edgelist_text("e 1 2\n")
    with pytest.raises(ParseError):
        parse_edgelist_text("p edge 2 1\ne 1 3\n")
    with pytest.raises(ParseError):
        parse_edgelist_text("p edge 2 2\ne 1 2\n")


def test_json_doc_fields():
    g = build_gadget(tiny_instance(), GadgetParams(1, 0, 1))
    doc = to_json_doc(g)
    assert doc["vertex_count"] == 10
    assert doc["edge_count"] == 12
    assert doc["params"] == {"ell": 1, "p": 0, "q": 1}
    assert doc["source"] == {"n": 1, "d": 1}
    assert doc["labels"]["1"] == ["uL 1"]
