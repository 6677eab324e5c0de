"""Gluing L_n, two chains of G1 copies and one G2 copy into G_n."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Optional

from .coloring import ColoringError, is_proper, solve
from .gadgets import ContractId, GadgetBlueprint, build_gadget, verify_contract
from .graph import Boundary, GadgetInternal, Graph, build_graph, normalize_edge
from .lattice import LatticeHandle, build_lattice, row_coloring

__all__ = [
    "GadgetCopy",
    "GnHandle",
    "build_gn",
    "gn_size",
    "guaranteed_critical_edges",
    "extension_checks",
    "monochromatic_extension",
]


@dataclass(frozen=True)
class GadgetCopy:
    name: str
    blueprint: GadgetBlueprint
    roles: dict[str, int]
    local_to_global: tuple[int, ...]


@dataclass(frozen=True)
class GnHandle:
    n: int
    graph: Graph
    lattice: LatticeHandle
    copies: tuple[GadgetCopy, ...]
    k1: int
    k2: int
    closed: bool = True

    def copy(self, name: str) -> GadgetCopy:
        for c in self.copies:
            if c.name == name:
                return c
        raise KeyError(name)

    def boundary(self, name: str) -> int:
        return self.graph.vertex_of(Boundary(name))

    def manifest(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "vertices": self.graph.n,
                "edges": self.graph.num_edges,
                "k1": self.k1,
                "k2": self.k2,
                "labels": [self.graph.name(v) for v in range(self.graph.n)],
                "copies": [
                    {"name": c.name, "kind": c.blueprint.kind.value, "roles": c.roles}
                    for c in self.copies
                ],
            },
            indent=2,
        )


def gn_size(n: int, k1: int, k2: int) -> int:
    """|V(G_n)| = 2n^2 + a n + b with a = 2(k1-3), b = k2 - 4 k1 + 7."""
    return 2 * n * n + 2 * (k1 - 3) * n + (k2 - 4 * k1 + 7)


def build_gn(
    n: int,
    g1: Optional[GadgetBlueprint] = None,
    g2: Optional[GadgetBlueprint] = None,
    closed: bool = True,
    check_contracts: bool = True,
) -> GnHandle:
    """Assemble G_n.  Ids: lattice first, then F_1..F_{n-2}, H_1..H_{n-2}, H;
    inside each copy its new boundary vertices come before its internals.
    ``closed=False`` leaves out the G2 copy H (a negative control)."""
    if n < 4:
        raise ValueError("G_n needs n >= 4")
    g1 = g1 or build_gadget(ContractId.G1)
    g2 = g2 or build_gadget(ContractId.G2)
    if check_contracts:
        for bp in (g1, g2):
            if not verify_contract(bp):
                raise ValueError(f"gadget {bp.kind.value} fails its contract")
    lat = build_lattice(n)
    labels: list = list(lat.graph.labels)
    edges: list[tuple[int, int]] = list(lat.graph.edges())
    named: dict[str, int] = {}
    copies = []

    def fresh(label) -> int:
        labels.append(label)
        return len(labels) - 1

    def boundary_vertex(name: str) -> int:
        if name not in named:
            named[name] = fresh(Boundary(name))
        return named[name]

    def instantiate(copy_name: str, bp: GadgetBlueprint, roles: dict[str, int | str]) -> None:
        # resolve named boundary roles first so they precede internals
        resolved = {
            r: (boundary_vertex(v) if isinstance(v, str) else v) for r, v in roles.items()
        }
        local = [0] * bp.graph.n
        for r, v in resolved.items():
            local[bp.role(r)] = v
        k = 0
        for lv in range(bp.graph.n):
            if lv not in bp.boundary:
                local[lv] = fresh(GadgetInternal(copy_name, k))
                k += 1
        for u, v in bp.graph.edges():
            edges.append((local[u], local[v]))
        copies.append(GadgetCopy(copy_name, bp, resolved, tuple(local)))

    for row, (a, b, chain) in ((1, ("s", "t", "F")), (n, ("p", "q", "H"))):
        instantiate(
            f"{chain}1",
            g1,
            {"v1": lat.x(row, 1), "v2": lat.x(row, 2), "v3": lat.x(row, 3), "v4": f"{a}2", "v5": f"{b}2"},
        )
        for i in range(4, n + 1):
            instantiate(
                f"{chain}{i - 2}",
                g1,
                {
                    "v1": f"{a}{i - 2}",
                    "v2": f"{b}{i - 2}",
                    "v3": lat.x(row, i),
                    "v4": f"{a}{i - 1}",
                    "v5": f"{b}{i - 1}",
                },
            )
    if closed:
        m = n - 1
        instantiate("H", g2, {"u1": f"s{m}", "u2": f"t{m}", "u3": f"p{m}", "u4": f"q{m}"})
    g = build_graph(len(labels), edges, labels)
    if g.num_edges != len({normalize_edge(*e) for e in edges}):
        raise AssertionError("gluing created parallel edges")
    return GnHandle(n, g, lat, tuple(copies), g1.size, g2.size, closed)


def guaranteed_critical_edges(handle: GnHandle) -> list[tuple[int, int]]:
    """Vertical lattice edges plus diagonal lattice edges avoiding the
    degree-2 ends y(i,1), y(i,n+1); there are 5n^2 - 9n + 4 of them."""
    lat = handle.lattice
    if handle.n < 4:
        raise ValueError("needs n >= 4")
    n = lat.n
    ends = {lat.y(i, 1) for i in range(1, n)} | {lat.y(i, n + 1) for i in range(1, n)}
    diag = [e for e in lat.diagonal_edges() if e[0] not in ends and e[1] not in ends]
    return [normalize_edge(*e) for e in lat.vertical_edges() + diag]


def _remove_edges(g: Graph, X) -> Graph:
    drop = {normalize_edge(*e) for e in X}
    if not drop:
        return g
    return build_graph(g.n, [e for e in g.edges() if e not in drop], g.labels)


def monochromatic_extension(
    handle: GnHandle,
    phi: Mapping[int, int],
    X=(),
) -> Optional[dict[int, int]]:
    """Extend a proper 3-coloring of L_n - X to G_n - X, or None if impossible.

    Decided by a pinned exact solve.  It succeeds exactly when one of the end
    rows is monochromatic and the other is not.
    """
    g = _remove_edges(handle.graph, X)
    lat = handle.lattice
    if set(phi) != set(lat.vertices):
        raise ColoringError("phi must color every lattice vertex")
    if not is_proper(g, phi, 3):
        raise ColoringError("phi is not a proper coloring of L_n - X")
    res = solve(g, 3, phi)
    return res.witness if res.satisfiable else None


def _chain_forces(handle: GnHandle, row: int, a: str, b: str) -> bool:
    """On the open graph, a monochromatic end row forces its chain's last
    pair equal and a non-monochromatic one forces it unequal.  Checked by
    refuting the opposite for every row coloring with x(row,1) = 1."""
    g = handle.graph
    lat = handle.lattice
    last_a, last_b = handle.boundary(f"{a}{handle.n - 1}"), handle.boundary(f"{b}{handle.n - 1}")
    cells = lat.row(row)
    for rest in itertools.product((1, 2, 3), repeat=len(cells) - 1):
        pins = dict(zip(cells, (1,) + rest))
        mono = len(set(pins.values())) == 1
        for c in (1, 2, 3):
            for d in (1, 2, 3):
                if (c == d) == mono:
                    continue
                if solve(g, 3, {**pins, last_a: c, last_b: d}).satisfiable:
                    return False
    return True


def _rows_coloring(lat: LatticeHandle, rows: dict[int, dict[int, int]]) -> dict[int, int]:
    phi = {v: 3 for i in range(1, lat.n) for v in lat.stripe(i)}
    for r in rows.values():
        phi.update(r)
    return phi


def extension_checks(n: int = 4) -> dict[str, bool]:
    """Both directions of the end-row extension rule on G_n, plus the chain
    behaviour it rests on."""
    h = build_gn(n)
    lat = h.lattice
    both_mono = lat.standard_coloring()
    both_non = _rows_coloring(
        lat,
        {k: row_coloring(lat, "pattern", k, *((1, 1, 2) if k % 2 else (2, 1, 1))) for k in range(1, n + 1)},
    )
    e = (lat.x(1, 1), lat.x(2, 1))
    # top row smeared, lower rows alternate motifs at column 1
    one_mono = {v: 3 for i in range(1, n) for v in lat.stripe(i)}
    for step, k in enumerate(range(n, 1, -1)):
        one_mono.update(row_coloring(lat, "motif", k, *((1, 1, 2) if step % 2 == 0 else (2, 1, 1))))
    one_mono.update(row_coloring(lat, "smear", 1, one_mono[lat.x(2, 1)]))
    opened = build_gn(n, closed=False, check_contracts=False)
    return {
        "both_mono_blocked": monochromatic_extension(h, both_mono) is None,
        "both_non_mono_blocked": monochromatic_extension(h, both_non) is None,
        "exactly_one_mono_extends": monochromatic_extension(h, one_mono, [e]) is not None,
        "top_chain_forces": _chain_forces(opened, 1, "s", "t"),
        "bottom_chain_forces": _chain_forces(opened, n, "p", "q"),
        "open_graph_colorable": solve(opened.graph, 3).satisfiable,
    }
