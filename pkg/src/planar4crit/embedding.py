"""Rotation systems, face tracing, planar duals and the embedding of G_n.

A rotation system maps every vertex to the cyclic list of its neighbours.
Faces are the orbits of the dart map ``(u, v) -> (v, succ_v(u))`` where
``succ_v`` is the next entry after ``u`` in ``rot[v]``.  A connected graph
with rotation ``rot`` is plane iff ``V - E + F = 2``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import networkx as nx

from .graph import Graph, build_graph

__all__ = [
    "DualHandle",
    "EmbeddingError",
    "RotationSystem",
    "build_embedding",
    "dual_graph",
    "embed_with_boundary",
    "euler_characteristic",
    "face_with_cyclic_order",
    "lattice_rotation",
    "planarity_test",
    "restrict_rotation",
    "rotation_from_json",
    "rotation_to_json",
    "trace_faces",
    "verify_genus_zero",
]

RotationSystem = dict[int, list[int]]


class EmbeddingError(ValueError):
    pass


# -- faces ------------------------------------------------------------------


def _succ_tables(rot: RotationSystem) -> dict[int, dict[int, int]]:
    succ = {}
    for v, nbrs in rot.items():
        d = len(nbrs)
        succ[v] = {nbrs[k]: nbrs[(k + 1) % d] for k in range(d)}
    return succ


def trace_faces(rot: RotationSystem) -> list[list[tuple[int, int]]]:
    """All faces as lists of darts, in a deterministic order."""
    succ = _succ_tables(rot)
    seen: set[tuple[int, int]] = set()
    faces = []
    for u in sorted(rot):
        for v in rot[u]:
            if (u, v) in seen:
                continue
            face = []
            d = (u, v)
            while d not in seen:
                seen.add(d)
                face.append(d)
                a, b = d
                d = (b, succ[b][a])
            if d != (u, v):
                raise EmbeddingError("dart map is not a permutation")
            faces.append(face)
    return faces


def _rotation_matches(g: Graph, rot: RotationSystem) -> bool:
    if set(rot) != {v for v in range(g.n) if g.adj[v]}:
        return False
    for v, nbrs in rot.items():
        if len(nbrs) != len(set(nbrs)) or sorted(nbrs) != list(g.adj[v]):
            return False
    return True


def _connected(g: Graph) -> bool:
    verts = [v for v in range(g.n) if g.adj[v]]
    if not verts:
        return True
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(verts)


def euler_characteristic(g: Graph, rot: RotationSystem) -> int:
    """V - E + F over the non-isolated vertices."""
    nv = sum(1 for v in range(g.n) if g.adj[v])
    return nv - g.num_edges + len(trace_faces(rot))


def verify_genus_zero(g: Graph, rot: RotationSystem) -> bool:
    if not _rotation_matches(g, rot) or not _connected(g):
        return False
    if g.num_edges == 0:
        return True
    return euler_characteristic(g, rot) == 2


def restrict_rotation(rot: RotationSystem, g: Graph) -> RotationSystem:
    """Drop every entry not an edge of ``g`` (deleting edges keeps a plane
    embedding plane)."""
    out = {}
    for v, nbrs in rot.items():
        if v < g.n and g.adj[v]:
            keep = [u for u in nbrs if g.has_edge(v, u)]
            if keep:
                out[v] = keep
    return out


def rotation_to_json(rot: RotationSystem) -> dict[str, list[int]]:
    return {str(v): list(rot[v]) for v in sorted(rot)}


def rotation_from_json(data: dict) -> RotationSystem:
    return {int(k): [int(x) for x in v] for k, v in data.items()}


# -- planarity --------------------------------------------------------------


def _to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def planarity_test(g: Graph) -> bool:
    """Left-right planarity test (networkx), independent of the face tracer."""
    return nx.check_planarity(_to_nx(g))[0]


def embed_with_boundary(g: Graph, cyclic: Sequence[int]) -> Optional[RotationSystem]:
    """A plane rotation of ``g`` with ``cyclic`` along one face in that cyclic
    order, or None when no such embedding exists.

    Works by embedding ``g`` plus the cycle through ``cyclic`` plus an apex
    joined to it, then deleting the helpers.
    """
    h = _to_nx(g)
    apex = g.n
    k = len(cyclic)
    extra = set()
    for a in range(k):
        u, v = cyclic[a], cyclic[(a + 1) % k]
        if k > 2 and not h.has_edge(u, v):
            h.add_edge(u, v)
            extra.add(frozenset((u, v)))
        h.add_edge(apex, u)
    ok, emb = nx.check_planarity(h)
    if not ok:
        return None
    rot = {}
    for v in range(g.n):
        if not g.adj[v]:
            continue
        rot[v] = [
            u
            for u in emb.neighbors_cw_order(v)
            if u != apex and frozenset((u, v)) not in extra
        ]
    return rot


def face_with_cyclic_order(
    rot: RotationSystem, order: Sequence[int]
) -> Optional[tuple[list[tuple[int, int]], bool]]:
    """First face visiting every vertex of ``order`` exactly once, in that
    cyclic order.  Returns ``(face, reversed)``; ``reversed`` is True when the
    face meets them in the opposite direction."""
    want = list(order)
    for face in trace_faces(rot):
        tails = [d[0] for d in face]
        if any(tails.count(v) != 1 for v in want):
            continue
        seq = [v for v in tails if v in set(want)]
        r = seq.index(want[0])
        seq = seq[r:] + seq[:r]
        if seq == want:
            return face, False
        if [seq[0]] + seq[1:][::-1] == want:
            return face, True
    return None


# -- G_n embedding ----------------------------------------------------------


def lattice_rotation(lat) -> RotationSystem:
    """Straight-line drawing of L_n: x(i,j) at (2j, -2i), y(i,j) at (2j-1, -2i-1),
    neighbours sorted counter-clockwise."""

    def pos(v):
        kind, i, j = lat.coords(v)
        return (2 * j, -2 * i) if kind == "x" else (2 * j - 1, -2 * i - 1)

    g = lat.graph
    rot = {}
    for v in lat.vertices:
        px, py = pos(v)
        nbrs = [u for u in g.adj[v - lat.offset]]
        nbrs = [u + lat.offset for u in nbrs]
        nbrs.sort(key=lambda u: math.atan2(pos(u)[1] - py, pos(u)[0] - px))
        rot[v] = nbrs
    return rot


def _merge(
    host: RotationSystem,
    grot: RotationSystem,
    gface_order: Sequence[int],
    mapping: dict[int, int],
) -> None:
    """Glue a gadget (rotation ``grot`` on local ids, boundary cyclic order
    ``gface_order``) into ``host`` in place.  Boundary vertices already in the
    host must lie on one host face in a compatible cyclic order."""
    present = [b for b in gface_order if mapping[b] in host]
    new_ids = {mapping[v] for v in grot}
    for b in present:
        for u in grot[b]:
            if mapping[u] in host.get(mapping[b], ()):
                raise EmbeddingError("gadget edge duplicates a host edge")
    gfound = face_with_cyclic_order(grot, list(gface_order))
    if gfound is None:
        raise EmbeddingError("gadget boundary not on a common gadget face")
    gface, _ = gfound
    hfound = face_with_cyclic_order(host, [mapping[b] for b in present])
    if hfound is None:
        raise EmbeddingError(
            f"no host face carries {[mapping[b] for b in present]} in cyclic order"
        )
    hface, _ = hfound
    # the gadget face must run through the boundary opposite to the host face
    gtails = [d[0] for d in gface if d[0] in present]
    htails = [d[0] for d in hface if d[0] in {mapping[b] for b in present}]
    gseq = [mapping[b] for b in gtails]
    r = gseq.index(htails[0])
    gseq = gseq[r:] + gseq[:r]
    if len(present) >= 3 and gseq == htails:
        grot = {v: nbrs[::-1] for v, nbrs in grot.items()}
        gface, _ = face_with_cyclic_order(grot, list(gface_order))
    gin = {d[1]: d[0] for d in gface}  # vertex -> predecessor on gadget face
    hin = {d[1]: d[0] for d in hface}
    for v, nbrs in grot.items():
        gv = mapping[v]
        if gv not in host or gv not in {mapping[b] for b in present}:
            if gv in host:
                raise EmbeddingError(f"vertex {gv} already embedded")
            host[gv] = [mapping[u] for u in nbrs]
            continue
        # rotate gadget list to start at succ(pred on gadget face)
        up = gin[v]
        k = nbrs.index(up)
        block = nbrs[k + 1 :] + nbrs[: k + 1]
        hu = hin[gv]
        hl = host[gv]
        hk = hl.index(hu)
        host[gv] = hl[: hk + 1] + [mapping[u] for u in block] + hl[hk + 1 :]
    missing = new_ids - set(host)
    if missing:
        raise EmbeddingError(f"vertices {sorted(missing)} lost while merging")


def build_embedding(handle) -> RotationSystem:
    """Compose a rotation for G_n from the lattice drawing and each gadget
    copy's certified rotation, inserting copies in construction order."""
    rot = lattice_rotation(handle.lattice)
    for copy in handle.copies:
        bp = copy.blueprint
        mapping = dict(enumerate(copy.local_to_global))
        order = [bp.boundary[k] for k in bp.face_order]
        _merge(rot, bp.rotation, order, mapping)
    if not verify_genus_zero(handle.graph, rot):
        faces = trace_faces(rot)
        raise EmbeddingError(
            f"composed rotation has Euler characteristic "
            f"{euler_characteristic(handle.graph, rot)} over {len(faces)} faces"
        )
    return rot


# -- duals ------------------------------------------------------------------


@dataclass
class DualHandle:
    """Planar dual as a multigraph: dual vertex per face, dual edge per
    primal edge.  ``edges[k]`` is the pair of faces on the two sides of the
    k-th primal edge (``primal_edges[k]``); loops appear as (f, f)."""

    primal: Graph
    rotation: RotationSystem
    faces: list[list[tuple[int, int]]]
    primal_edges: list[tuple[int, int]]
    edges: list[tuple[int, int]]

    @property
    def num_vertices(self) -> int:
        return len(self.faces)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def multiplicity(self) -> Counter:
        return Counter(tuple(sorted(e)) for e in self.edges)

    @property
    def density(self) -> float:
        return self.num_edges / self.num_vertices

    def simple_graph(self) -> Graph:
        """Underlying simple graph (loops dropped, parallels merged)."""
        return build_graph(self.num_vertices, [e for e in self.multiplicity if e[0] != e[1]])

    def dual_faces(self) -> list[list[tuple[int, int]]]:
        """Faces of the dual under the rotation induced by face boundaries,
        as lists of (edge index, side) darts."""
        face_of = {}
        for f, face in enumerate(self.faces):
            for d in face:
                face_of[d] = f
        eidx = {}
        for k, (u, v) in enumerate(self.primal_edges):
            eidx[(u, v)] = (k, 0)
            eidx[(v, u)] = (k, 1)
        # dual dart (k, s) leaves face_of[primal dart with side s]
        rot = {}
        for f, face in enumerate(self.faces):
            rot[f] = [eidx[d] for d in face]
        succ = {}
        for f, darts in rot.items():
            for a, d in enumerate(darts):
                succ[d] = darts[(a + 1) % len(darts)]
        seen, out = set(), []
        for f in range(len(self.faces)):
            for d in rot[f]:
                if d in seen:
                    continue
                cyc = []
                while d not in seen:
                    seen.add(d)
                    cyc.append(d)
                    k, s = d
                    d = succ[(k, 1 - s)]
                out.append(cyc)
        return out


def dual_graph(g: Graph, rot: RotationSystem) -> DualHandle:
    if not verify_genus_zero(g, rot):
        raise EmbeddingError("dual requires a genus-0 rotation of a connected graph")
    faces = trace_faces(rot)
    face_of = {}
    for f, face in enumerate(faces):
        for d in face:
            face_of[d] = f
    pedges = g.edges()
    dedges = [(face_of[(u, v)], face_of[(v, u)]) for u, v in pedges]
    return DualHandle(g, rot, faces, pedges, dedges)
