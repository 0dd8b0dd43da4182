import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ovdiam.gadget import (
    GadgetParams,
    build_gadget,
    negative_control_edge,
    remove_edge,
)
from ovdiam.metrics import (
    Classification,
    DisconnectedGraphError,
    VerificationReport,
    bfs,
    classify,
    diameter,
    distance_matrix,
    verify_diameter_dichotomy,
    verify_distance_bounds,
    vertex_classes,
    walk_forms_from_u,
)
from ovdiam.ovcore import BitVector, OVInstance, encode_disjointness, random_ov
from ovdiam.ovcore import DisjointnessInstance, random_disjointness

PATH3 = [[1], [0, 2], [1]]


def bv(*xs):
    return BitVector(tuple(xs))


def tiny_gadget(params=GadgetParams(1, 0, 1)):
    return build_gadget(OVInstance((bv(1),), (bv(1),)), params)


# -- bfs / diameter -----------------------------------------------------------

def test_bfs_path_graph():
    row = bfs(PATH3, 0)
    assert row.dist == {0: 0, 1: 1, 2: 2}
    assert bfs(PATH3, 1)[1] == 0


def test_bfs_unknown_vertex():
    with pytest.raises(ValueError):
        bfs(PATH3, 9)


def test_bfs_absent_means_unreachable():
    row = bfs([[1], [0], []], 0)
    assert row.get(2) is None


def test_bfs_gadget_hand_trace():
    g = tiny_gadget()
    row = bfs(g, g.vertex_of("uL", 1))
    assert row[g.vertex_of("uR", 1)] == 5


def test_diameter_path_graph():
    assert diameter(PATH3).value == 2


def test_diameter_examples():
    assert diameter(tiny_gadget()).value == 5  # no orthogonal pair
    g = build_gadget(OVInstance((bv(1, 0),), (bv(0, 1),)), GadgetParams(1, 0, 1))
    assert diameter(g).value == 7  # orthogonal pair


def test_diameter_witness_tie_break():
    result = diameter(PATH3)
    assert result.witness == (0, 2)


def test_diameter_disconnected():
    with pytest.raises(DisconnectedGraphError):
        diameter([[1], [0], []])


def test_bfs_row_changes_by_at_most_one_per_edge():
    g = build_gadget(random_ov(3, 3, seed=21), GadgetParams(2, 0, 2))
    row = bfs(g, 0)
    assert row[0] == 0
    for u, v in g.edges:
        assert abs(row[u] - row[v]) <= 1


def test_distance_matrix_agrees_with_bfs():
    g = build_gadget(random_ov(2, 4, seed=3), GadgetParams(2, 1, 1))
    dmat = distance_matrix(g)
    for source in range(0, g.vertex_count, 7):
        row = bfs(g, source)
        for v in range(g.vertex_count):
            assert dmat[source, v] == row[v]


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 500))
@settings(max_examples=25, deadline=None)
def test_triangle_inequality_sampled(n, d, seed):
    g = build_gadget(random_ov(n, d, seed), GadgetParams(2, 0, 1))
    dmat = distance_matrix(g)
    rng = np.random.default_rng(seed)
    for _ in range(30):
        u, v, w = rng.integers(0, g.vertex_count, size=3)
        assert dmat[u, w] <= dmat[u, v] + dmat[v, w]


# -- classify --------------------------------------------------------------------

def test_classify_examples():
    params = GadgetParams(2, 0, 1)
    assert classify(13, params) is Classification.HAS_PAIR
    assert classify(9, params) is Classification.NO_PAIR
    assert classify(10, params) is Classification.INCONSISTENT


# -- vertex classes ----------------------------------------------------------------

def test_vertex_classes_tiny_gadget():
    g = tiny_gadget()
    classes = vertex_classes(g)
    u, v = g.vertex_of("uL", 1), g.vertex_of("vL", 1)
    assert classes.pl[1] == {u, v}
    assert classes.vl == {u, v}
    assert classes.vr == {g.vertex_of("uR", 1), g.vertex_of("vR", 1)}
    assert classes.vm == {
        g.vertex_of("xL"),
        g.vertex_of("xR"),
        g.vertex_of("yL"),
        g.vertex_of("yR"),
        g.vertex_of("wL", 1),
        g.vertex_of("wR", 1),
    }


def test_vertex_classes_exclusions():
    g = build_gadget(random_ov(3, 3, seed=2), GadgetParams(2, 0, 1))
    classes = vertex_classes(g)
    for i in range(1, 4):
        assert g.vertex_of("uL", i) in classes.pl[i]
        assert g.vertex_of("yL") not in classes.pl[i]
        assert g.vertex_of("xL") not in classes.pl[i]
        for k in range(1, 4):
            assert g.vertex_of("wL", k) not in classes.pl[i]
    # partition properties
    assert classes.vl | classes.vm | classes.vr == set(range(g.vertex_count))
    assert not classes.vl & classes.vr
    assert not classes.vl & classes.vm
    assert not classes.vr & classes.vm


# -- verifiers ----------------------------------------------------------------------

def test_dichotomy_verifier_passes_small_sweep():
    for seed in range(6):
        inst = random_ov(seed % 3 + 1, 3, seed)
        for params in (GadgetParams(1, 0, 1), GadgetParams(2, 1, 0), GadgetParams(1, 1, 2)):
            report = verify_diameter_dichotomy(inst, params)
            assert report.passed, report.to_text()


def test_dichotomy_verifier_via_encoder_chain():
    inst = random_disjointness(6, seed=1, force="intersecting")
    ov = encode_disjointness(inst)
    params = GadgetParams.from_target(1, 1)
    report = verify_diameter_dichotomy(ov, params)
    assert report.passed
    diameters = [c for c in report.checks if c.name == "diameter"]
    assert diameters[0].actual == params.pair_diameter


def test_chain_distinguisher_exhaustive_small():
    # every 1-, 2-, and 3-bit intersection instance, pushed through the
    # encoder and the smallest gadget, classifies correctly off the diameter
    import itertools

    params = GadgetParams.from_target(1, 1)
    for n in (1, 2, 3):
        for xv in itertools.product((0, 1), repeat=n):
            for yv in itertools.product((0, 1), repeat=n):
                inst = DisjointnessInstance(BitVector(xv), BitVector(yv))
                ov = encode_disjointness(inst)
                verdict = classify(diameter(build_gadget(ov, params)).value, params)
                intersecting = any(a and b for a, b in zip(xv, yv))
                expected = (
                    Classification.HAS_PAIR if intersecting else Classification.NO_PAIR
                )
                assert verdict is expected, (xv, yv)


def test_dichotomy_verifier_negative_control():
    inst = random_ov(2, 3, seed=11)
    params = GadgetParams(2, 0, 1)
    g = build_gadget(inst, params)
    mutated = remove_edge(g, *negative_control_edge(g))
    report = verify_diameter_dichotomy(inst, params, graph=mutated)
    assert not report.passed


def test_negative_control_breaks_bounds_even_when_u_merged():
    # with ell = 1, p = 1 the u chain is merged away; the fallback edge
    # must still break either connectivity or the u-to-y equality
    for seed in range(8):
        inst = random_ov(2, 3, seed=seed)
        params = GadgetParams(1, 1, 1)
        g = build_gadget(inst, params)
        mutated = remove_edge(g, *negative_control_edge(g))
        dichotomy = verify_diameter_dichotomy(inst, params, graph=mutated)
        bounds = verify_distance_bounds(inst, params, graph=mutated)
        assert not (dichotomy.passed and bounds.passed)


def test_distance_bounds_pass_on_identified_gadget():
    # ell = 1, p = 1: the u-to-y distance collapses to 3*1 - 2*1 = 1
    inst = random_ov(3, 3, seed=7)
    report = verify_distance_bounds(inst, GadgetParams(1, 1, 1))
    assert report.passed, report.to_text()
    check = next(c for c in report.checks if c.name == "u-to-own-y[L]")
    assert check.expected == "== 1"


def test_distance_bounds_sweep():
    for seed in range(5):
        n = seed % 4 + 1
        inst = random_ov(n, 2 + seed % 3, seed * 13)
        for ell in (1, 2, 3):
            for p in (0, 1):
                for q in (0, 1, 2):
                    report = verify_distance_bounds(inst, GadgetParams(ell, p, q))
                    assert report.passed, (n, ell, p, q, report.to_text())


def test_u_to_w_floor_attained():
    # a 1 bit in row i gives a direct v--w path, meeting the floor exactly
    inst = OVInstance((bv(1),), (bv(1),))
    params = GadgetParams(2, 1, 1)
    g = build_gadget(inst, params)
    dmat = distance_matrix(g)
    dist = dmat[g.vertex_of("uL", 1), g.vertex_of("wL", 1)]
    assert dist == 2 * params.ell - params.p


# -- reports -----------------------------------------------------------------------

def test_report_serialization():
    report = VerificationReport()
    report.add("alpha", 3, 3)
    report.add("beta", "<= 2", 5, ok=False)
    assert not report.passed
    doc = report.to_doc()
    assert doc["passed"] is False
    assert doc["checks"][0] == {
        "name": "alpha", "expected": 3, "actual": 3, "ok": True,
    }
    text = report.to_text()
    assert "ok   alpha" in text
    assert "FAIL beta" in text
    assert text.endswith("FAILED (2 checks, 1 failures)\n")


def test_report_classification_rendering():
    report = VerificationReport()
    report.add("classification", Classification.NO_PAIR, Classification.NO_PAIR)
    assert report.to_doc()["checks"][0]["expected"] == "no-pair"


# -- walk catalog -------------------------------------------------------------------

def test_walk_forms_cover_and_match():
    inst = OVInstance(
        (bv(1, 1, 0), bv(0, 1, 0)),
        (bv(0, 1, 1), bv(1, 0, 0)),
    )
    for params in (GadgetParams(2, 0, 1), GadgetParams(1, 1, 0), GadgetParams(3, 1, 2)):
        g = build_gadget(inst, params)
        for i in (1, 2):
            forms = walk_forms_from_u(g, i)
            assert len(forms) == 13
            for form in forms:
                if form.exists:
                    assert form.computed_length == form.expected_length, form


def test_walk_forms_absent_branches():
    inst = OVInstance((bv(0, 0),), (bv(0, 0),))  # no v--w paths at all
    g = build_gadget(inst, GadgetParams(2, 0, 1))
    forms = {f.name: f for f in walk_forms_from_u(g, 1)}
    assert not forms["u-v-w"].exists
    assert not forms["u-v-x-v'"].exists  # n = 1: no second index
    assert forms["u-v-x-y"].exists
