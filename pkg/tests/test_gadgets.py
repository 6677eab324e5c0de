import itertools
import json

import pytest

from planar4crit.coloring import count_colorings, iter_colorings
from planar4crit.embedding import face_with_cyclic_order, planarity_test, verify_genus_zero
from planar4crit.gadgets import (
    ContractId,
    build_gadget,
    extension_table,
    g2_without_diamond_edge,
    manifest,
    verify_contract,
)

TUPLES = {b: list(itertools.product((1, 2, 3), repeat=b)) for b in (3, 4, 5)}


def mono(*xs):
    return len(set(xs)) == 1


# contract predicates restated from the extension conditions, independent of the package
ORACLE = {
    ContractId.F0: lambda v1, v2, w: mono(v1, v2, w) or (v2 != v1 and v1 != w),
    ContractId.G0: lambda v1, v2, v3, v4: mono(v1, v2, v3, v4) or (v1 != v2 and v3 != v4),
    ContractId.G1: lambda v1, v2, v3, v4, v5: mono(v1, v2, v3, v4, v5)
    or (not mono(v1, v2, v3) and v4 != v5),
    ContractId.G2: lambda u1, u2, u3, u4: u2 == u3 and ((u1 == u2) != (u3 == u4)),
}
SIZES = {ContractId.F0: 15, ContractId.G0: 39, ContractId.G1: 147, ContractId.G2: 12}


def projected_table(bp):
    """Boundary tuples seen across a full enumeration of the gadget's colorings."""
    return {tuple(col[v] for v in bp.boundary) for col in iter_colorings(bp.graph, 3)}


def counted_table(bp):
    return {
        t
        for t in TUPLES[len(bp.boundary)]
        if not any(
            a == b and bp.graph.has_edge(u, v)
            for (u, a), (v, b) in itertools.combinations(zip(bp.boundary, t), 2)
        )
        and count_colorings(bp.graph, 3, dict(zip(bp.boundary, t)))
    }


@pytest.mark.parametrize("kind", list(ORACLE))
def test_oracle_counts(kind):
    b = {ContractId.F0: 3, ContractId.G1: 5}.get(kind, 4)
    assert sum(ORACLE[kind](*t) for t in TUPLES[b]) == SIZES[kind]


@pytest.mark.parametrize("kind", list(ORACLE))
def test_extension_table_equals_oracle(kind):
    bp = build_gadget(kind)
    table = extension_table(bp)
    want = {t for t in TUPLES[len(bp.boundary)] if ORACLE[kind](*t)}
    assert set(table.accepted) == want
    assert len(table) == SIZES[kind]


@pytest.mark.parametrize("kind", [ContractId.F0, ContractId.G0, ContractId.G1PRIME, ContractId.G2])
def test_table_matches_full_enumeration(kind):
    bp = build_gadget(kind)
    assert projected_table(bp) == set(extension_table(bp).accepted)


def test_g1_table_matches_counting():
    bp = build_gadget(ContractId.G1)
    assert counted_table(bp) == set(extension_table(bp).accepted)


def test_g1prime_forced_relation():
    bp = build_gadget(ContractId.G1PRIME)
    table = extension_table(bp)
    assert len(table.project((0, 1, 2))) == 27
    for v1, v2, v3, v4, v5 in table.accepted:
        assert (v4 == v5) == mono(v1, v2, v3)


def test_examples():
    g0 = extension_table(build_gadget(ContractId.G0)).accepted
    assert (1, 1, 1, 1) in g0 and (1, 2, 1, 1) not in g0 and (1, 2, 1, 2) in g0
    g2 = extension_table(build_gadget(ContractId.G2)).accepted
    assert (1, 1, 1, 2) in g2 and (1, 1, 1, 1) not in g2 and (2, 1, 1, 1) in g2


def test_g2_universal_claims():
    bp = build_gadget(ContractId.G2)
    u1, u2, u3, u4 = (bp.role(r) for r in ("u1", "u2", "u3", "u4"))
    for col in iter_colorings(bp.graph, 3):
        assert col[u2] == col[u3]
        assert (col[u1] == col[u2]) != (col[u3] == col[u4])


@pytest.mark.parametrize("kind", list(ContractId))
def test_contract_and_planarity(kind):
    bp = build_gadget(kind)
    rep = verify_contract(bp)
    assert rep.ok, rep.message
    assert verify_genus_zero(bp.graph, bp.rotation)
    assert planarity_test(bp.graph)
    order = [bp.boundary[k] for k in bp.face_order]
    assert face_with_cyclic_order(bp.rotation, order) is not None


def test_mutation_is_caught():
    bp = build_gadget(ContractId.G2)
    rep = verify_contract(bp, g2_without_diamond_edge())
    assert not rep.ok and rep.message
    mutant = extension_table(bp, g2_without_diamond_edge()).accepted
    assert any(t[1] != t[2] for t in mutant)


def test_tables_closed_under_color_permutation():
    for kind in ContractId:
        acc = extension_table(build_gadget(kind)).accepted
        for perm in itertools.permutations((1, 2, 3)):
            assert {tuple(perm[c - 1] for c in t) for t in acc} == set(acc)


def test_sizes_and_manifest():
    g1, g2 = build_gadget(ContractId.G1), build_gadget(ContractId.G2)
    assert (g1.size, g2.size) == (29, 18)
    data = json.loads(manifest(g1))
    assert data["face_order"] == ["v1", "v2", "v3", "v5", "v4"]
    assert set(data["boundary"]) == {"v1", "v2", "v3", "v4", "v5"}
