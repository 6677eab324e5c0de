"""The diamond lattice L_n, its stripes and the named row colorings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .coloring import is_proper, iter_colorings, solve
from .graph import Graph, LatticeX, LatticeY, build_graph

__all__ = [
    "LatticeHandle",
    "build_lattice",
    "lattice_size",
    "row_coloring",
    "verify_endrow_transfer",
    "endrow_report",
]


def lattice_size(n: int) -> tuple[int, int]:
    """(|V(L_n)|, |E(L_n)|)."""
    return 2 * n * n - 1, 5 * n * (n - 1)


@dataclass(frozen=True)
class LatticeHandle:
    n: int
    graph: Graph
    offset: int = 0  # id of x(1,1); nonzero when the lattice is embedded in G_n

    def x(self, i: int, j: int) -> int:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"x({i},{j}) outside L_{self.n}")
        return self.offset + (i - 1) * (2 * self.n + 1) + (j - 1)

    def y(self, i: int, j: int) -> int:
        if not (1 <= i <= self.n - 1 and 1 <= j <= self.n + 1):
            raise IndexError(f"y({i},{j}) outside L_{self.n}")
        return self.offset + (i - 1) * (2 * self.n + 1) + self.n + (j - 1)

    def row(self, i: int) -> list[int]:
        return [self.x(i, j) for j in range(1, self.n + 1)]

    def stripe(self, i: int) -> list[int]:
        return [self.y(i, j) for j in range(1, self.n + 2)]

    @property
    def vertices(self) -> range:
        return range(self.offset, self.offset + lattice_size(self.n)[0])

    def vertical_edges(self) -> list[tuple[int, int]]:
        n = self.n
        return [(self.x(i, j), self.x(i + 1, j)) for i in range(1, n) for j in range(1, n + 1)]

    def diagonal_edges(self) -> list[tuple[int, int]]:
        n, out = self.n, []
        for i in range(1, n):
            for j in range(1, n + 1):
                for xv in (self.x(i, j), self.x(i + 1, j)):
                    out.append((xv, self.y(i, j)))
                    out.append((xv, self.y(i, j + 1)))
        return out

    def edges(self) -> list[tuple[int, int]]:
        return self.vertical_edges() + self.diagonal_edges()

    def coords(self, v: int) -> tuple[str, int, int]:
        """('x', i, j) or ('y', i, j) for a lattice vertex id."""
        r = v - self.offset
        w = 2 * self.n + 1
        i, q = divmod(r, w)
        if q < self.n:
            return ("x", i + 1, q + 1)
        return ("y", i + 1, q - self.n + 1)

    def mirror_lr(self, v: int) -> int:
        """Left-right automorphism x(i,j)->x(i,n+1-j), y(i,j)->y(i,n+2-j)."""
        kind, i, j = self.coords(v)
        return self.x(i, self.n + 1 - j) if kind == "x" else self.y(i, self.n + 2 - j)

    def mirror_tb(self, v: int) -> int:
        """Top-bottom automorphism x(i,j)->x(n+1-i,j), y(i,j)->y(n-i,j)."""
        kind, i, j = self.coords(v)
        return self.x(self.n + 1 - i, j) if kind == "x" else self.y(self.n - i, j)

    def standard_coloring(self) -> dict[int, int]:
        """Rows alternate 1, 2 starting at row 1; every stripe gets 3."""
        col = {}
        for i in range(1, self.n + 1):
            for v in self.row(i):
                col[v] = 1 if i % 2 else 2
        for i in range(1, self.n):
            for v in self.stripe(i):
                col[v] = 3
        return col


def build_lattice(n: int) -> LatticeHandle:
    """L_n with ids laid out row by row: x(1,*), y(1,*), x(2,*), ..., x(n,*)."""
    if n < 2:
        raise ValueError("L_n needs n >= 2")
    nv, _ = lattice_size(n)
    labels: list = [None] * nv
    h = LatticeHandle(n, build_graph(0, []))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            labels[h.x(i, j)] = LatticeX(i, j)
    for i in range(1, n):
        for j in range(1, n + 2):
            labels[h.y(i, j)] = LatticeY(i, j)
    g = build_graph(nv, h.edges(), labels)
    return LatticeHandle(n, g)


def row_coloring(
    lat: LatticeHandle,
    kind: str,
    t: int,
    a: int,
    s: Optional[int] = None,
    b: Optional[int] = None,
) -> dict[int, int]:
    """Motif, smear or pattern on row t.

    motif   (t; a; s; b): column s gets b, every other column a
    smear   (t; a):       every column a
    pattern (t; a; s; b): columns 1..s get a, columns s+1..n get b
    """
    n = lat.n
    if not 1 <= t <= n or a not in (1, 2, 3):
        raise ValueError("bad row or color")
    if kind == "smear":
        return {lat.x(t, j): a for j in range(1, n + 1)}
    if kind not in ("motif", "pattern"):
        raise ValueError(f"unknown row coloring {kind!r}")
    if s is None or b is None or not 1 <= s <= n or b not in (1, 2, 3) or a == b:
        raise ValueError(f"{kind} needs a column s in [1, n] and a color b != a")
    if kind == "motif":
        return {lat.x(t, j): (b if j == s else a) for j in range(1, n + 1)}
    return {lat.x(t, j): (a if j <= s else b) for j in range(1, n + 1)}


def endrow_report(
    lat: LatticeHandle, graph: Optional[Graph] = None
) -> tuple[bool, bool]:
    """Enumerate every 3-coloring of L_n (or of ``graph`` on the same ids).

    Returns ``(transfer, stripes_mono)``: whether equality patterns on row 1
    and row n always agree, and whether every stripe is monochromatic in
    every coloring.
    """
    g = lat.graph if graph is None else graph
    n = lat.n
    top, bot = lat.row(1), lat.row(n)
    transfer = stripes = True
    for col in iter_colorings(g, 3):
        for a in range(n):
            for b in range(a + 1, n):
                if (col[top[a]] == col[top[b]]) != (col[bot[a]] == col[bot[b]]):
                    transfer = False
        for i in range(1, n):
            if len({col[v] for v in lat.stripe(i)}) != 1:
                stripes = False
    return transfer, stripes


def _universal_report(lat: LatticeHandle) -> tuple[bool, bool]:
    """Same answers as endrow_report, via refutation.  Up to a color
    permutation an equal pair is (1, 1) and an unequal pair is (1, 2), so it
    suffices to show every pinning breaking the property is unsatisfiable."""
    g, n = lat.graph, lat.n

    def sat(pins: dict[int, int]) -> bool:
        return is_proper(g, pins, 3) and solve(g, 3, pins).satisfiable

    transfer = True
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            top, bot = (lat.x(1, a), lat.x(1, b)), (lat.x(n, a), lat.x(n, b))
            for c in (1, 2, 3):
                for d in (1, 2, 3):
                    if c != d and sat({top[0]: 1, top[1]: 1, bot[0]: c, bot[1]: d}):
                        transfer = False
                if sat({top[0]: 1, top[1]: 2, bot[0]: c, bot[1]: c}):
                    transfer = False
    stripes = not any(
        sat({lat.y(i, j): 1, lat.y(i, j + 1): 2}) for i in range(1, n) for j in range(1, n + 1)
    )
    return transfer, stripes


def verify_endrow_transfer(n: int) -> bool:
    """Row-1 / row-n equality transfer plus stripe monochromaticity in every
    3-coloring of L_n.  Full enumeration for n <= 3, refutation of every
    counterexample pinning beyond that."""
    lat = build_lattice(n)
    transfer, stripes = endrow_report(lat) if n <= 3 else _universal_report(lat)
    return transfer and stripes
