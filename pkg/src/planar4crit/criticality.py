"""Critical edges of G_n: constructed witnesses, solver checks, extraction of
a 4-critical subgraph, and the density table built on top of it."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .assembly import GnHandle, build_gn, guaranteed_critical_edges, monochromatic_extension
from .coloring import is_proper, solve
from .embedding import build_embedding, dual_graph
from .graph import Graph, GraphError, build_graph, delete_edge, edge_subgraph, normalize_edge
from .lattice import LatticeHandle, row_coloring

__all__ = [
    "BudgetExceeded",
    "CriticalityReport",
    "DensityRow",
    "bound_limit",
    "bound_monotone_from",
    "canonical_diagonal",
    "check_edges",
    "density_bound",
    "density_report",
    "density_row",
    "extract_qn",
    "subgraph_rotation",
    "density_threshold",
    "dual_density",
    "extract_4_critical",
    "is_critical",
    "witness_diagonal",
    "witness_vertical",
]

WORKERS_ENV = "PLANAR4CRIT_WORKERS"


class BudgetExceeded(RuntimeError):
    pass


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    return 1


# -- constructed witnesses ------------------------------------------------


def witness_vertical(handle: GnHandle, i: int, j: int) -> dict[int, int]:
    """3-coloring of L_n minus the vertical edge x(i,j)x(i+1,j).

    Rows n..i+1 alternate the (k;1;j;2) and (k;2;j;1) motifs, rows i..1
    alternate smears starting with the color a of x(i+1,j), stripes get 3.
    """
    lat = handle.lattice
    n = lat.n
    if not (1 <= i <= n - 1 and 1 <= j <= n):
        raise GraphError(f"no vertical edge x({i},{j})x({i + 1},{j}) in L_{n}")
    phi: dict[int, int] = {}
    for step, k in enumerate(range(n, i, -1)):
        a, b = (1, 2) if step % 2 == 0 else (2, 1)
        phi.update(row_coloring(lat, "motif", k, a, j, b))
    a = phi[lat.x(i + 1, j)]
    for step, k in enumerate(range(i, 0, -1)):
        phi.update(row_coloring(lat, "smear", k, a if step % 2 == 0 else 3 - a))
    for k in range(1, n):
        phi.update({v: 3 for v in lat.stripe(k)})
    return phi


def witness_diagonal(handle: GnHandle, i: int, j: int) -> dict[int, int]:
    """3-coloring of L_n minus the diagonal edge x(i,j)y(i-1,j+1)."""
    lat = handle.lattice
    n = lat.n
    if not (2 <= i <= n and 1 <= j <= n - 1):
        raise GraphError(f"x({i},{j})y({i - 1},{j + 1}) is not a canonical diagonal of L_{n}")
    phi: dict[int, int] = {}
    for step, k in enumerate(range(n, i - 1, -1)):
        a, b = (1, 2) if step % 2 == 0 else (2, 1)
        phi.update(row_coloring(lat, "pattern", k, a, j, b))
    for step, k in enumerate(range(i - 1, 0, -1)):
        phi.update(row_coloring(lat, "smear", k, 3 if step % 2 == 0 else 2))
    for k in range(i, n):
        phi.update({v: 3 for v in lat.stripe(k)})
    a = phi[lat.x(i, j)]
    for c in range(1, n + 2):
        phi[lat.y(i - 1, c)] = 3 - a if c <= j else a
    for k in range(1, i - 1):
        phi.update({v: 1 for v in lat.stripe(k)})
    return phi


_MIRRORS = ("", "lr", "tb", "lr+tb")


def _apply(lat: LatticeHandle, how: str, v: int) -> int:
    if "lr" in how:
        v = lat.mirror_lr(v)
    if "tb" in how:
        v = lat.mirror_tb(v)
    return v


def canonical_diagonal(lat: LatticeHandle, e: Sequence[int]) -> Optional[tuple[int, int, str]]:
    """(i, j, mirror) such that the mirror maps e onto x(i,j)y(i-1,j+1) with
    i >= 2 and j <= n-1; None if e is not a diagonal edge or touches a
    degree-2 stripe end."""
    n = lat.n
    for how in _MIRRORS:
        u, v = (_apply(lat, how, w) for w in e)
        cu, cv = lat.coords(u), lat.coords(v)
        if cu[0] == "y":
            cu, cv = cv, cu
        if cu[0] != "x" or cv[0] != "y":
            return None
        _, i, j = cu
        _, yi, yj = cv
        if yi == i - 1 and yj == j + 1 and 2 <= i <= n and 1 <= j <= n - 1:
            return i, j, how
    return None


# -- criticality ----------------------------------------------------------


@dataclass
class CriticalityReport:
    edge: tuple[int, int]
    critical: bool
    witness: Optional[dict[int, int]]
    method: str  # "constructed-witness" or "solver"
    mirror: str = ""
    note: str = ""

    def to_json(self, g: Graph) -> dict:
        return {
            "edge": [g.name(self.edge[0]), g.name(self.edge[1])],
            "critical": self.critical,
            "method": self.method,
            "mirror": self.mirror or None,
            "note": self.note or None,
        }


def _constructed(handle: GnHandle, e: tuple[int, int]) -> Optional[tuple[dict[int, int], str]]:
    lat = handle.lattice
    if not all(v in lat.vertices for v in e):
        return None
    cu, cv = sorted((lat.coords(e[0]), lat.coords(e[1])))
    if cu[0] == cv[0] == "x":
        (_, i1, j1), (_, i2, _) = cu, cv
        return witness_vertical(handle, min(i1, i2), j1), ""
    canon = canonical_diagonal(lat, e)
    if canon is None:
        return None
    i, j, how = canon
    base = witness_diagonal(handle, i, j)
    if not how:
        return base, ""
    # both mirrors are involutions of L_n, so phi o sigma colors L_n - e
    return {v: base[_apply(lat, how, v)] for v in lat.vertices}, how


def is_critical(handle: GnHandle, e: Sequence[int]) -> CriticalityReport:
    """Decide whether G_n - e is 3-colorable (G_n itself is 4-chromatic).

    Lattice edges covered by a constructed witness are settled by extending
    that witness; mirrored witnesses are re-checked the same way and fall
    back to the solver if they do not extend.
    """
    u, v = normalize_edge(*e)
    g = handle.graph
    if not g.has_edge(u, v):
        raise GraphError(f"edge {u}-{v} not in G_{handle.n}")
    note = ""
    built = _constructed(handle, (u, v))
    if built is not None:
        phi, how = built
        if is_proper(delete_edge(g, (u, v)), phi, 3):
            full = monochromatic_extension(handle, phi, [(u, v)])
            if full is not None:
                return CriticalityReport((u, v), True, full, "constructed-witness", how)
        note = "constructed witness did not extend"
    res = solve(delete_edge(g, (u, v)), 3)
    return CriticalityReport((u, v), res.satisfiable, res.witness, "solver", note=note)


@lru_cache(maxsize=4)
def _handle(n: int) -> GnHandle:
    return build_gn(n)


def _check_one(args: tuple[int, tuple[int, int]]) -> CriticalityReport:
    n, e = args
    return is_critical(_handle(n), e)


def check_edges(
    handle: GnHandle, edges: Iterable[Sequence[int]], workers: Optional[int] = None
) -> list[CriticalityReport]:
    """is_critical over many edges, in order; ``workers > 1`` uses processes
    (only for the default gadget set, which workers rebuild themselves)."""
    edges = [normalize_edge(*e) for e in edges]
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(edges) < 2:
        return [is_critical(handle, e) for e in edges]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_check_one, [(handle.n, e) for e in edges], chunksize=4))


# -- extraction -----------------------------------------------------------


def extract_4_critical(
    g: Graph,
    known_critical: Iterable[Sequence[int]] = (),
    deadline: Optional[float] = None,
    check_input: bool = True,
) -> tuple[Graph, list[int]]:
    """4-critical subgraph of a 4-chromatic graph, isolated vertices removed.

    Edges are scanned once in id order and dropped whenever the remainder stays
    non-3-colorable.  An edge kept at its turn is critical in every later
    subgraph, so one pass gives the same result as restarting the scan after
    each deletion.  ``known_critical`` edges are kept without a solve.
    Returns the subgraph and its ``old_ids`` map.
    """
    if check_input and (not solve(g, 4).satisfiable or solve(g, 3).satisfiable):
        raise GraphError("extraction needs a 4-chromatic graph")
    known = {normalize_edge(*e) for e in known_critical}
    kept = set(g.edges())
    cur = g
    for e in g.edges():
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded("extraction ran past its budget")
        if e in known:
            continue
        trial = build_graph(g.n, sorted(kept - {e}), g.labels)
        if not solve(trial, 3).satisfiable:
            kept.discard(e)
            cur = trial
    return edge_subgraph(cur, sorted(kept))


# -- density --------------------------------------------------------------


def guaranteed_count(n: int) -> int:
    return 5 * n * n - 9 * n + 4


def density_bound(n: int, a: int, b: int) -> Fraction:
    """(5n^2 - 9n + 4) / (2n^2 + an + b)."""
    return Fraction(guaranteed_count(n), 2 * n * n + a * n + b)


def bound_limit() -> Fraction:
    # equal degrees: ratio of leading coefficients
    return Fraction(5, 2)


def _last_root_floor(p: int, q: int, r: int) -> int:
    """floor of the largest real root of p x^2 + q x + r (p > 0), or a value
    below which nothing matters if there is none."""
    disc = q * q - 4 * p * r
    if disc < 0:
        return -(10**9)
    x = math.floor((-q + math.isqrt(disc)) / (2 * p))
    while p * (x + 1) ** 2 + q * (x + 1) + r <= 0:
        x += 1
    while p * x * x + q * x + r > 0:
        x -= 1
    return x


def density_threshold(a: int, b: int, level: Fraction = Fraction(12, 5)) -> int:
    """Least N0 >= 4 with density_bound(n) >= level for every n >= N0."""
    # 5n^2-9n+4 >= level (2n^2+an+b) with level = s/t, scaled by t
    s, t = level.numerator, level.denominator
    p, q, r = 5 * t - 2 * s, -9 * t - a * s, 4 * t - b * s
    if p <= 0:
        raise ValueError("level must lie below the limit 5/2")
    # largest root is where the quadratic turns nonnegative for good
    n0 = max(4, _last_root_floor(p, q, r) + 1)
    while p * (n0 - 1) ** 2 + q * (n0 - 1) + r >= 0 and n0 - 1 >= 4:
        n0 -= 1
    return n0


def bound_monotone_from(a: int, b: int) -> int:
    """Least n >= 4 from which density_bound increases strictly."""
    # sign of the derivative numerator: (5a+18) n^2 + (10b-16) n - (9b+4a)
    p, q, r = 5 * a + 18, 10 * b - 16, -(9 * b + 4 * a)
    if p <= 0:
        raise ValueError("bound is not eventually increasing")
    return max(4, _last_root_floor(p, q, r) + 1)


def dual_density(num_edges: int, num_vertices: int) -> Fraction:
    """Edge/vertex ratio of the dual of a connected plane graph."""
    return Fraction(num_edges, num_edges - num_vertices + 2)


def dual_density_limit() -> Fraction:
    r = bound_limit()
    return r / (r - 1)


@dataclass
class DensityRow:
    n: int
    gn_vertices: int
    gn_edges: int
    q_vertices: Optional[int]
    q_edges: Optional[int]
    bound: Fraction
    symbolic: bool
    seconds: float = 0.0
    dual_vertices: Optional[int] = None
    dual_edges: Optional[int] = None
    extra: dict = field(default_factory=dict)

    @property
    def ratio(self) -> Optional[Fraction]:
        if self.q_edges is None:
            return None
        return Fraction(self.q_edges, self.q_vertices)

    @property
    def dual_ratio(self) -> Optional[Fraction]:
        if self.dual_edges is None:
            return None
        return Fraction(self.dual_edges, self.dual_vertices)

    def to_json(self) -> dict:
        def f(x):
            return None if x is None else round(float(x), 6)

        return {
            "n": self.n,
            "gn_vertices": self.gn_vertices,
            "gn_edges": self.gn_edges,
            "q_vertices": self.q_vertices,
            "q_edges": self.q_edges,
            "ratio": f(self.ratio),
            "bound": f(self.bound),
            "bound_exact": str(self.bound),
            "dual_vertices": self.dual_vertices,
            "dual_edges": self.dual_edges,
            "dual_ratio": f(self.dual_ratio),
            "symbolic": self.symbolic,
            "seconds": round(self.seconds, 3),
        }


def extract_qn(handle: GnHandle, deadline: Optional[float] = None) -> tuple[Graph, list[int]]:
    """Q_n from G_n, skipping solves for the guaranteed critical edges."""
    return extract_4_critical(
        handle.graph, guaranteed_critical_edges(handle), deadline, check_input=False
    )


def subgraph_rotation(rot: dict, q: Graph, old_ids: Sequence[int]) -> dict:
    """Rotation of G_n cut down to a renumbered subgraph ``q``."""
    sub = {o: v for v, o in enumerate(old_ids)}
    return {
        sub[v]: [sub[w] for w in nbrs if w in sub and q.has_edge(sub[v], sub[w])]
        for v, nbrs in rot.items()
        if v in sub
    }


def density_row(n: int, budget_secs: Optional[float] = 600.0) -> DensityRow:
    start = time.monotonic()
    h = build_gn(n)
    a, b = 2 * (h.k1 - 3), h.k2 - 4 * h.k1 + 7
    row = DensityRow(n, h.graph.n, h.graph.num_edges, None, None, density_bound(n, a, b), True)
    deadline = None if budget_secs is None else start + budget_secs
    try:
        if solve(h.graph, 3).satisfiable:
            raise AssertionError(f"G_{n} is 3-colorable")
        q, old = extract_qn(h, deadline)
    except BudgetExceeded:
        row.seconds = time.monotonic() - start
        return row
    dual = dual_graph(q, subgraph_rotation(build_embedding(h), q, old))
    row.q_vertices, row.q_edges = q.n, q.num_edges
    row.dual_vertices, row.dual_edges = dual.num_vertices, dual.num_edges
    row.symbolic = False
    row.seconds = time.monotonic() - start
    return row


def density_report(n_from: int, n_to: int, budget_secs: Optional[float] = 600.0) -> list[DensityRow]:
    """One row per n; a row that runs past the budget carries only the bound,
    and once one row does, the larger ones are not attempted."""
    rows, over = [], False
    for n in range(n_from, n_to + 1):
        if over:
            h = build_gn(n, check_contracts=False)
            a, b = 2 * (h.k1 - 3), h.k2 - 4 * h.k1 + 7
            rows.append(DensityRow(n, h.graph.n, h.graph.num_edges, None, None, density_bound(n, a, b), True))
            continue
        row = density_row(n, budget_secs)
        over = row.symbolic
        rows.append(row)
    return rows
