import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from planar4crit.assembly import guaranteed_critical_edges
from planar4crit.coloring import is_proper, naive_colorable, solve
from planar4crit.criticality import (
    bound_limit,
    bound_monotone_from,
    canonical_diagonal,
    check_edges,
    density_bound,
    density_report,
    density_row,
    density_threshold,
    dual_density,
    dual_density_limit,
    extract_4_critical,
    is_critical,
    witness_diagonal,
    witness_vertical,
)
from planar4crit.graph import GraphError, build_graph, delete_edge

K4_EDGES = list(itertools.combinations(range(4), 2))


def end_rows(lat, phi):
    top = {phi[v] for v in lat.row(1)}
    bottom = {phi[v] for v in lat.row(lat.n)}
    return len(top) == 1, len(bottom) == 1


def test_vertical_witness_example(g4):
    lat = g4.lattice
    phi = witness_vertical(g4, 1, 1)
    assert {v: phi[v] for v in lat.row(4)} == {lat.x(4, 1): 2, lat.x(4, 2): 1, lat.x(4, 3): 1, lat.x(4, 4): 1}
    assert phi[lat.x(3, 1)] == 1 and phi[lat.x(2, 1)] == 2
    a = phi[lat.x(2, 1)]
    assert all(phi[v] == a for v in lat.row(1))
    assert phi[lat.x(1, 1)] == phi[lat.x(2, 1)]
    assert all(phi[v] == 3 for i in range(1, 4) for v in lat.stripe(i))


@pytest.mark.parametrize("n", [4, 5])
def test_vertical_witnesses(request, n):
    h = request.getfixturevalue(f"g{n}")
    lat = h.lattice
    for i in range(1, n):
        for j in range(1, n + 1):
            phi = witness_vertical(h, i, j)
            e = (lat.x(i, j), lat.x(i + 1, j))
            assert is_proper(delete_edge(lat.graph, e), phi, 3)
            assert not is_proper(lat.graph, phi, 3)
            assert end_rows(lat, phi) == (True, False)


@pytest.mark.parametrize("n", [4, 5])
def test_diagonal_witnesses(request, n):
    h = request.getfixturevalue(f"g{n}")
    lat = h.lattice
    for i in range(2, n + 1):
        for j in range(1, n):
            phi = witness_diagonal(h, i, j)
            e = (lat.x(i, j), lat.y(i - 1, j + 1))
            assert is_proper(delete_edge(lat.graph, e), phi, 3)
            assert phi[e[0]] == phi[e[1]]
            assert end_rows(lat, phi) == (True, False)


def test_diagonal_example_extends(g4):
    lat = g4.lattice
    rep = is_critical(g4, (lat.x(2, 1), lat.y(1, 2)))
    assert rep.critical and rep.method == "constructed-witness" and rep.mirror == ""


def test_out_of_range_witnesses(g4):
    with pytest.raises(GraphError):
        witness_vertical(g4, 4, 1)
    with pytest.raises(GraphError):
        witness_diagonal(g4, 1, 1)
    with pytest.raises(GraphError):
        witness_diagonal(g4, 2, 4)


def test_canonical_mapping(g4):
    lat = g4.lattice
    x, y = lat.x, lat.y
    assert canonical_diagonal(lat, (x(3, 2), y(2, 3))) == (3, 2, "")
    assert canonical_diagonal(lat, (x(3, 2), y(2, 2))) == (3, 3, "lr")
    assert canonical_diagonal(lat, (x(3, 2), y(3, 3))) == (2, 2, "tb")
    assert canonical_diagonal(lat, (x(3, 2), y(3, 2))) == (2, 3, "lr+tb")
    # stripe ends have degree two and stay outside the constructed family
    assert canonical_diagonal(lat, (x(2, 1), y(1, 1))) is None
    assert canonical_diagonal(lat, (x(1, 1), x(2, 1))) is None


def test_stripe_end_edge_goes_to_solver(g4):
    lat = g4.lattice
    e = (lat.x(2, 1), lat.y(1, 1))
    mirrored = (lat.mirror_lr(e[0]), lat.mirror_lr(e[1]))
    assert g4.graph.has_edge(*mirrored)
    rep = is_critical(g4, e)
    assert rep.method == "solver"
    assert rep.critical == solve(delete_edge(g4.graph, e), 3).satisfiable


@pytest.mark.parametrize("n", [4, 5])
def test_guaranteed_edges_critical(request, n):
    h = request.getfixturevalue(f"g{n}")
    reports = [is_critical(h, e) for e in guaranteed_critical_edges(h)]
    assert len(reports) == 5 * n * n - 9 * n + 4
    for r in reports:
        assert r.critical and r.method == "constructed-witness"
        assert is_proper(delete_edge(h.graph, r.edge), r.witness, 3)
        assert len(r.witness) == h.graph.n


def test_absent_edge_rejected(g4):
    with pytest.raises(GraphError):
        is_critical(g4, (0, g4.graph.n - 1))


def test_parallel_sweep_matches_sequential(g4):
    edges = g4.graph.edges()[::40]
    seq = check_edges(g4, edges, workers=1)
    par = check_edges(g4, edges, workers=2)
    assert [(r.edge, r.critical, r.method, r.witness) for r in seq] == [
        (r.edge, r.critical, r.method, r.witness) for r in par
    ]


# -- extraction ------------------------------------------------------------


def restart_scan(g):
    """Delete the first edge whose removal keeps the graph 4-chromatic, restart."""
    edges = list(g.edges())
    while True:
        for e in edges:
            rest = [f for f in edges if f != e]
            if not naive_colorable(build_graph(g.n, rest), 3):
                edges = rest
                break
        else:
            return sorted(edges)


def test_k4_is_fixed():
    k4 = build_graph(4, K4_EDGES)
    q, old = extract_4_critical(k4)
    assert q == k4 and old == [0, 1, 2, 3]


def test_pendant_removed():
    g = build_graph(5, K4_EDGES + [(3, 4)])
    q, old = extract_4_critical(g)
    assert old == [0, 1, 2, 3] and q.num_edges == 6


def test_rejects_3_colorable_input():
    with pytest.raises(GraphError):
        extract_4_critical(build_graph(3, [(0, 1), (1, 2), (0, 2)]))


@st.composite
def four_chromatic(draw):
    n = draw(st.integers(4, 7))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = set(K4_EDGES) | {p for p, k in zip(pairs, keep) if k}
    return build_graph(n, sorted(edges))


@settings(max_examples=40, deadline=None)
@given(four_chromatic())
def test_single_pass_equals_restart_scan(g):
    assume(naive_colorable(g, 4))
    q, old = extract_4_critical(g)
    assert sorted((old[u], old[v]) for u, v in q.edges()) == restart_scan(g)
    for e in q.edges():
        assert solve(delete_edge(q, e), 3).satisfiable


def test_qn_properties(g4, q4):
    q, old = q4
    assert not solve(q, 3).satisfiable
    kept = {(old[u], old[v]) for u, v in q.edges()}
    assert set(guaranteed_critical_edges(g4)) <= kept
    assert q.num_edges >= 48
    assert all(q.degree(v) > 0 for v in range(q.n))


def test_qn_keeps_every_critical_edge_of_gn(g4, q4):
    q, old = q4
    kept = {(old[u], old[v]) for u, v in q.edges()}
    critical = [r.edge for r in check_edges(g4, g4.graph.edges(), workers=1) if r.critical]
    assert set(critical) <= kept


def test_idempotent(q4):
    q, _ = q4
    again, old = extract_4_critical(q)
    assert again == q and old == list(range(q.n))


# -- density -----------------------------------------------------------------


def test_bound_formula():
    assert density_bound(4, 52, -91) == Fraction(48, 149)
    assert density_bound(5, 52, -91) == Fraction(84, 219)
    assert bound_limit() == Fraction(5, 2)


def test_threshold_for_measured_coefficients():
    n0 = density_threshold(52, -91)
    assert n0 == 668
    assert density_bound(n0, 52, -91) >= Fraction(12, 5) > density_bound(n0 - 1, 52, -91)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 200), st.integers(-400, 400))
def test_threshold_property(a, b):
    assume(all(2 * n * n + a * n + b > 0 for n in range(4, 10)))
    n0 = density_threshold(a, b)
    for n in list(range(n0, n0 + 50)) + [n0 + 1000, n0 + 10**6]:
        assert density_bound(n, a, b) >= Fraction(12, 5)
    if n0 > 4:
        assert density_bound(n0 - 1, a, b) < Fraction(12, 5)


def test_bound_monotone():
    start = bound_monotone_from(52, -91)
    assert start == 4
    vals = [density_bound(n, 52, -91) for n in range(start, 400)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_dual_density():
    assert dual_density(12, 8) == Fraction(12, 6)
    assert dual_density_limit() == Fraction(5, 3)


def test_density_row_at_4():
    row = density_row(4, None)
    assert not row.symbolic
    assert row.ratio >= row.bound
    assert row.q_edges >= 48
    assert row.dual_edges == row.q_edges
    assert row.dual_vertices == row.q_edges - row.q_vertices + 2


def test_budget_degrades_to_symbolic():
    rows = density_report(4, 5, budget_secs=0.0)
    assert [r.symbolic for r in rows] == [True, True]
    assert rows[1].bound == density_bound(5, 52, -91)
    assert rows[0].to_json()["q_edges"] is None
