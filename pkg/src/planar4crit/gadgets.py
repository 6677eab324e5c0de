"""Planar 3-coloring gadgets and their boundary-extension contracts.

Every gadget is assembled from one primitive, the *equality star*
``star(c; p, q)`` on three boundary vertices with three private vertices
``y, z, t``::

    triangle q y z  with  y ~ c, z ~ p      (c = p  forces  q = c)
    triangle p z t  with  z ~ q, t ~ c      (c = q  forces  p = c)

A boundary coloring of ``(c, p, q)`` extends iff ``c = p = q`` or
``p != c != q``.  This is F0.  G0 chains four stars, G1' combines two stars
and one triangle, G1 feeds G1' into G0, and G2 is a small XOR core routed
through a planar crossover so that its boundary can sit on the outer face in
the order the G_n assembly needs.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from .coloring import solve
from .embedding import RotationSystem, embed_with_boundary, face_with_cyclic_order, verify_genus_zero
from .graph import Boundary, GadgetInternal, Graph, build_graph, delete_edge

__all__ = [
    "ContractId",
    "ContractReport",
    "ExtensionTable",
    "GadgetBlueprint",
    "build_gadget",
    "contract_predicate",
    "extension_table",
    "manifest",
    "verify_contract",
]


class ContractId(str, enum.Enum):
    F0 = "F0"
    G0 = "G0"
    G1PRIME = "G1PRIME"
    G1 = "G1"
    G2 = "G2"


def _mono(*cs: int) -> bool:
    return len(set(cs)) == 1


def _f0(t):
    v1, v2, w = t
    return _mono(v1, v2, w) or (v2 != v1 and v1 != w)


def _g0(t):
    v1, v2, v3, v4 = t
    return _mono(*t) or (v1 != v2 and v3 != v4)


def _g1prime(t):
    # admissible boundary states; G1' need not realize all of them
    v1, v2, v3, v4, v5 = t
    if _mono(v1, v2, v3):
        return v4 == v5 == v2
    return v4 != v5


def _g1(t):
    v1, v2, v3, v4, v5 = t
    return _mono(*t) or (not _mono(v1, v2, v3) and v4 != v5)


def _g2(t):
    u1, u2, u3, u4 = t
    return u2 == u3 and ((u1 == u2) != (u3 == u4))


_PREDICATES: dict[ContractId, Callable[[tuple], bool]] = {
    ContractId.F0: _f0,
    ContractId.G0: _g0,
    ContractId.G1PRIME: _g1prime,
    ContractId.G1: _g1,
    ContractId.G2: _g2,
}


def contract_predicate(kind: ContractId | str) -> Callable[[tuple], bool]:
    return _PREDICATES[ContractId(kind)]


@dataclass(frozen=True)
class GadgetBlueprint:
    """A gadget graph with its named boundary.

    ``boundary[k]`` is the vertex playing role ``names[k]``.  ``face_order``
    lists boundary indices in the cyclic order they take along the outer
    face of ``rotation``.
    """

    kind: ContractId
    graph: Graph
    boundary: tuple[int, ...]
    names: tuple[str, ...]
    face_order: tuple[int, ...]
    rotation: RotationSystem = field(compare=False, repr=False)

    @property
    def size(self) -> int:
        return self.graph.n

    def role(self, name: str) -> int:
        return self.boundary[self.names.index(name)]


# -- construction -----------------------------------------------------------


class _Builder:
    def __init__(self) -> None:
        self.n = 0
        self.edges: list[tuple[int, int]] = []

    def vertex(self) -> int:
        self.n += 1
        return self.n - 1

    def edge(self, u: int, v: int) -> None:
        self.edges.append((u, v))

    def star(self, c: int, p: int, q: int) -> None:
        y, z, t = self.vertex(), self.vertex(), self.vertex()
        for u, v in ((q, y), (q, z), (y, z), (y, c), (z, p), (z, t), (t, p), (t, c)):
            self.edge(u, v)

    def g0(self, v1: int, v2: int, v3: int, v4: int) -> None:
        w1, w2 = self.vertex(), self.vertex()
        self.star(v1, v2, w2)
        self.star(w2, v1, w1)
        self.star(w1, w2, v3)
        self.star(v3, w1, v4)

    def g1prime(self, v1: int, v2: int, v3: int, v4: int, v5: int) -> None:
        self.star(v2, v1, v4)
        self.star(v2, v3, v5)
        y, z = self.vertex(), self.vertex()
        for u, v in ((v2, y), (v2, z), (y, z), (y, v4), (z, v5)):
            self.edge(u, v)

    def crossover(self, a: int, b: int, a2: int, b2: int) -> None:
        # terminals in cyclic order a, b, a2, b2; forces a = a2 and b = b2
        terms = (a, b, a2, b2)
        hub = self.vertex()
        ring = [self.vertex() for _ in range(4)]
        outer = [self.vertex() for _ in range(4)]
        for k in range(4):
            self.edge(hub, ring[k])
            self.edge(ring[k], ring[(k + 1) % 4])
            self.edge(terms[k], ring[k])
            self.edge(terms[k], outer[k])
            self.edge(terms[(k + 1) % 4], outer[k])
            self.edge(outer[k], ring[k])


def _raw_gadget(kind: ContractId) -> tuple[int, list[tuple[int, int]], list[int], list[str], list[int]]:
    b = _Builder()
    if kind is ContractId.F0:
        bd = [b.vertex() for _ in range(3)]
        b.star(*bd)
        return b.n, b.edges, bd, ["v1", "v2", "w"], [0, 1, 2]
    if kind is ContractId.G0:
        bd = [b.vertex() for _ in range(4)]
        b.g0(*bd)
        return b.n, b.edges, bd, ["v1", "v2", "v3", "v4"], [0, 1, 2, 3]
    names5 = ["v1", "v2", "v3", "v4", "v5"]
    if kind is ContractId.G1PRIME:
        bd = [b.vertex() for _ in range(5)]
        b.g1prime(*bd)
        return b.n, b.edges, bd, names5, [0, 1, 2, 4, 3]
    if kind is ContractId.G1:
        bd = [b.vertex() for _ in range(5)]
        a, c = b.vertex(), b.vertex()
        b.g1prime(bd[0], bd[1], bd[2], a, c)
        b.g0(a, c, bd[4], bd[3])
        return b.n, b.edges, bd, names5, [0, 1, 2, 4, 3]
    if kind is ContractId.G2:
        u1, u2, u3, u4 = bd = [b.vertex() for _ in range(4)]
        # XOR core on (u1, u2, r3, r4), then carry r3 -> u3 and r4 -> u4 across
        r3, r4 = b.vertex(), b.vertex()
        z, p, q = b.vertex(), b.vertex(), b.vertex()
        for u, v in ((u1, r4), (z, u1), (z, r4), (z, u2), (p, u2), (p, r3), (q, u2), (q, r3), (p, q)):
            b.edge(u, v)
        b.crossover(r4, r3, u4, u3)
        return b.n, b.edges, bd, ["u1", "u2", "u3", "u4"], [0, 1, 3, 2]
    raise ValueError(kind)


@lru_cache(maxsize=None)
def build_gadget(kind: ContractId | str) -> GadgetBlueprint:
    kind = ContractId(kind)
    n, edges, bd, names, order = _raw_gadget(kind)
    role = {v: nm for v, nm in zip(bd, names)}
    labels = []
    k = 0
    for v in range(n):
        if v in role:
            labels.append(Boundary(role[v]))
        else:
            labels.append(GadgetInternal(kind.value, k))
            k += 1
    g = build_graph(n, edges, labels)
    rot = embed_with_boundary(g, [bd[i] for i in order])
    if rot is None:
        raise RuntimeError(f"gadget {kind.value} has no plane embedding with its boundary on a face")
    return GadgetBlueprint(kind, g, tuple(bd), tuple(names), tuple(order), rot)


# -- contracts ----------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionTable:
    boundary_size: int
    accepted: frozenset[tuple[int, ...]]

    def __len__(self) -> int:
        return len(self.accepted)

    def project(self, idx) -> frozenset[tuple[int, ...]]:
        return frozenset(tuple(t[i] for i in idx) for t in self.accepted)


def extension_table(bp: GadgetBlueprint, graph: Optional[Graph] = None) -> ExtensionTable:
    """Boundary tuples that extend to a full proper 3-coloring (one pinned
    solve per tuple)."""
    g = bp.graph if graph is None else graph
    acc = set()
    for t in itertools.product((1, 2, 3), repeat=len(bp.boundary)):
        pin = dict(zip(bp.boundary, t))
        if any(pin.get(u) == c for v, c in pin.items() for u in g.adj[v]):
            continue
        if solve(g, 3, pin).satisfiable:
            acc.add(t)
    return ExtensionTable(len(bp.boundary), frozenset(acc))


@dataclass
class ContractReport:
    kind: ContractId
    ok: bool
    accepted: int
    expected: int
    planar: bool
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _permutation_closed(acc) -> bool:
    for perm in itertools.permutations((1, 2, 3)):
        for t in acc:
            if tuple(perm[c - 1] for c in t) not in acc:
                return False
    return True


def verify_contract(bp: GadgetBlueprint, graph: Optional[Graph] = None) -> ContractReport:
    """Exhaustively compare the gadget's extension table with its contract
    and certify the boundary face.

    For G1' the contract is one-sided (every extension obeys the forced
    relation and every coloring of v1, v2, v3 extends); for the others the
    table must equal the predicate exactly.
    """
    g = bp.graph if graph is None else graph
    table = extension_table(bp, g)
    pred = _PREDICATES[bp.kind]
    allt = list(itertools.product((1, 2, 3), repeat=len(bp.boundary)))
    want = {t for t in allt if pred(t)}
    planar = graph is None and _boundary_face_ok(bp)
    msg = ""
    if bp.kind is ContractId.G1PRIME:
        stray = sorted(table.accepted - want)
        proj = table.project((0, 1, 2))
        ok = not stray and len(proj) == 27
        if stray:
            msg = f"extension {stray[0]} violates the forced (v4, v5) relation"
        elif len(proj) != 27:
            missing = sorted(set(itertools.product((1, 2, 3), repeat=3)) - proj)
            msg = f"coloring {missing[0]} of (v1, v2, v3) does not extend"
        expected = len(table.accepted) if ok else -1
    else:
        diff = sorted(table.accepted ^ want)
        ok = not diff
        if diff:
            t = diff[0]
            msg = f"tuple {t}: " + ("extends but contract rejects" if t in table.accepted else "contract accepts but does not extend")
        expected = len(want)
    if not _permutation_closed(table.accepted):
        ok = False
        msg = msg or "extension table not closed under color permutations"
    if graph is None and not planar:
        ok = False
        msg = msg or "boundary is not on a common face of a genus-0 rotation"
    return ContractReport(bp.kind, ok, len(table.accepted), expected, planar, msg)


def _boundary_face_ok(bp: GadgetBlueprint) -> bool:
    if not verify_genus_zero(bp.graph, bp.rotation):
        return False
    order = [bp.boundary[k] for k in bp.face_order]
    return face_with_cyclic_order(bp.rotation, order) is not None


def g2_without_diamond_edge() -> Graph:
    """G2 with the edge p-q of its u2/r3 diamond removed (a mutation control)."""
    bp = build_gadget(ContractId.G2)
    # p and q are the two internal vertices adjacent to u2 and to each other
    u2 = bp.role("u2")
    cands = [v for v in bp.graph.adj[u2] if v not in bp.boundary]
    for p, q in itertools.combinations(cands, 2):
        if bp.graph.has_edge(p, q):
            return delete_edge(bp.graph, (p, q))
    raise RuntimeError("diamond edge not found")


def manifest(bp: GadgetBlueprint) -> str:
    """Sidecar JSON: ordered boundary names to vertex ids."""
    return json.dumps(
        {
            "kind": bp.kind.value,
            "vertices": bp.graph.n,
            "edges": bp.graph.num_edges,
            "boundary": {nm: v for nm, v in zip(bp.names, bp.boundary)},
            "face_order": [bp.names[k] for k in bp.face_order],
        },
        indent=2,
    )
