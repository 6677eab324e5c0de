"""Exact k-coloring by backtracking with domain propagation.

Domains are bitmasks over the colors ``1..k`` (bit ``c-1`` set means color
``c`` is still allowed).  Singleton domains propagate to a fixpoint before
every branch, and once the uncolored vertices fall apart into several
connected components each component is searched on its own: a failure in
one of them refutes the whole node, so the search never re-explores an
independent component while backtracking through another.

A component's outcome depends only on its vertex set and their current
domains (colored neighbours act through the domains alone), so refuted
components and component counts are memoized under that key.  This is
subproblem caching, not clause learning: nothing is derived beyond what the
exhaustive search over that exact subproblem established.

Nothing is randomized and there are no timeouts, so a result is a proof.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from .graph import Graph

__all__ = [
    "ColoringError",
    "SolveResult",
    "SolveStats",
    "chromatic_number",
    "count_colorings",
    "is_k_colorable",
    "is_proper",
    "iter_colorings",
    "naive_colorable",
    "solve",
    "to_cnf",
]

_POP = [bin(m).count("1") for m in range(16)]


class ColoringError(ValueError):
    """Raised for improper pinnings and invalid requests."""


def is_proper(g: Graph, coloring: Mapping[int, int], k: int = 3) -> bool:
    """True iff every colored vertex has a color in 1..k and no edge with
    both ends colored is monochromatic.  Partial colorings are allowed."""
    for v, c in coloring.items():
        if not (0 <= v < g.n) or not (1 <= c <= k):
            return False
    for v, c in coloring.items():
        for u in g.adj[v]:
            if coloring.get(u) == c:
                return False
    return True


@dataclass
class SolveStats:
    nodes: int = 0
    propagations: int = 0


@dataclass
class SolveResult:
    satisfiable: bool
    witness: Optional[dict[int, int]] = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def status(self) -> str:
        return "satisfiable" if self.satisfiable else "unsatisfiable"


class _Search:
    def __init__(self, g: Graph, k: int):
        self.g = g
        self.adj = g.adj
        self.k = k
        self.full = (1 << k) - 1
        self.dom = [self.full] * g.n
        self.color = [0] * g.n
        self.trail: list[tuple[int, int, int]] = []  # (vertex, old dom, old color)
        self.stats = SolveStats()
        self.refuted: set = set()
        self.counted: dict = {}

    def key(self, comp: list[int]) -> tuple:
        dom = self.dom
        return (tuple(comp), tuple([dom[v] for v in comp]))

    # -- propagation --------------------------------------------------------

    def assign(self, v: int, c: int) -> bool:
        """Color v with c and propagate singletons; False on a wipe-out."""
        bit = 1 << (c - 1)
        if not self.dom[v] & bit:
            return False
        dom, color, adj, trail = self.dom, self.color, self.adj, self.trail
        trail.append((v, dom[v], color[v]))
        dom[v] = bit
        queue = [v]
        while queue:
            x = queue.pop()
            b = dom[x]
            cx = b.bit_length()
            if color[x]:
                continue
            color[x] = cx
            self.stats.propagations += 1
            for y in adj[x]:
                dy = dom[y]
                if dy & b:
                    if color[y]:
                        return False
                    trail.append((y, dy, color[y]))
                    dy &= ~b
                    dom[y] = dy
                    if not dy:
                        return False
                    if not dy & (dy - 1):
                        queue.append(y)
        return True

    def undo(self, mark: int) -> None:
        trail, dom, color = self.trail, self.dom, self.color
        while len(trail) > mark:
            v, d, c = trail.pop()
            dom[v] = d
            color[v] = c

    # -- search -------------------------------------------------------------

    def components(self, verts: list[int]) -> list[list[int]]:
        color, adj = self.color, self.adj
        free = {v for v in verts if not color[v]}
        comps = []
        while free:
            s = min(free)
            free.discard(s)
            stack, comp = [s], [s]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in free:
                        free.discard(y)
                        stack.append(y)
                        comp.append(y)
            comp.sort()
            comps.append(comp)
        comps.sort(key=lambda c: (len(c), min(c)))
        return comps

    def pick(self, comp: list[int]) -> int:
        # smallest domain, then most colored neighbours, then highest degree, then id
        dom, color, adj = self.dom, self.color, self.adj
        best, best_key = -1, None
        for v in comp:
            done = 0
            for u in adj[v]:
                if color[u]:
                    done += 1
            key = (_POP[dom[v]], -done, -len(adj[v]), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def solve_region(self, verts: list[int]) -> bool:
        comps = self.components(verts)
        for comp in comps:
            if not self.branch(comp):
                return False
        return True

    def branch(self, comp: list[int]) -> bool:
        key = self.key(comp)
        if key in self.refuted:
            return False
        self.stats.nodes += 1
        v = self.pick(comp)
        d = self.dom[v]
        for c in range(1, self.k + 1):
            if not d & (1 << (c - 1)):
                continue
            mark = len(self.trail)
            if self.assign(v, c):
                rest = [u for u in comp if not self.color[u]]
                if not rest or self.solve_region(rest):
                    return True
            self.undo(mark)
        self.refuted.add(key)
        return False

    def count_region(self, verts: list[int]) -> int:
        total = 1
        for comp in self.components(verts):
            total *= self.count_branch(comp)
            if not total:
                return 0
        return total

    def count_branch(self, comp: list[int]) -> int:
        key = self.key(comp)
        if key in self.counted:
            return self.counted[key]
        self.stats.nodes += 1
        v = self.pick(comp)
        d = self.dom[v]
        total = 0
        for c in range(1, self.k + 1):
            if not d & (1 << (c - 1)):
                continue
            mark = len(self.trail)
            if self.assign(v, c):
                rest = [u for u in comp if not self.color[u]]
                total += self.count_region(rest) if rest else 1
            self.undo(mark)
        self.counted[key] = total
        return total

    def enumerate(self, order: list[int], idx: int = 0) -> Iterator[dict[int, int]]:
        while idx < len(order) and self.color[order[idx]]:
            idx += 1
        if idx == len(order):
            yield {v: self.color[v] for v in range(self.g.n)}
            return
        v = order[idx]
        d = self.dom[v]
        for c in range(1, self.k + 1):
            if d & (1 << (c - 1)):
                mark = len(self.trail)
                if self.assign(v, c):
                    yield from self.enumerate(order, idx + 1)
                self.undo(mark)

    def pin(self, pinned: Mapping[int, int]) -> bool:
        for v in sorted(pinned):
            c = pinned[v]
            if self.color[v]:
                if self.color[v] != c:
                    return False
                continue
            if not self.assign(v, c):
                return False
        return True


def _check_pinned(g: Graph, k: int, pinned: Mapping[int, int]) -> None:
    if not is_proper(g, pinned, k):
        raise ColoringError("pinned partial coloring is not proper")


def _find_triangle(g: Graph) -> Optional[tuple[int, int, int]]:
    for u in range(g.n):
        for v in g.adj[u]:
            if v <= u:
                continue
            for w in g.adj[v]:
                if w > v and g.has_edge(u, w):
                    return (u, v, w)
    return None


def solve(
    g: Graph,
    k: int = 3,
    pinned: Optional[Mapping[int, int]] = None,
    break_symmetry: bool = True,
) -> SolveResult:
    """Decide whether ``g`` has a proper k-coloring extending ``pinned``.

    With an empty pinning one triangle is pre-colored (1, 2, ..., k) when
    ``break_symmetry`` is set; satisfiability is unaffected.
    """
    if k < 1:
        raise ColoringError("k must be positive")
    pinned = dict(pinned or {})
    _check_pinned(g, k, pinned)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * g.n + 1000))
    s = _Search(g, k)
    if not s.pin(pinned):
        return SolveResult(False, None, s.stats)
    if not pinned and break_symmetry and k >= 3:
        tri = _find_triangle(g)
        if tri is not None:
            for v, c in zip(tri, (1, 2, 3)):
                if not s.assign(v, c):
                    return SolveResult(False, None, s.stats)
    ok = s.solve_region(list(range(g.n)))
    if not ok:
        return SolveResult(False, None, s.stats)
    witness = {v: s.color[v] for v in range(g.n)}
    if not is_proper(g, witness, k) or any(witness[v] != c for v, c in pinned.items()):
        raise AssertionError("solver produced an invalid witness")
    return SolveResult(True, witness, s.stats)


def is_k_colorable(g: Graph, k: int = 3, pinned: Optional[Mapping[int, int]] = None) -> bool:
    return solve(g, k, pinned).satisfiable


def count_colorings(g: Graph, k: int = 3, pinned: Optional[Mapping[int, int]] = None) -> int:
    """Exact number of proper k-colorings extending ``pinned`` (no symmetry breaking)."""
    pinned = dict(pinned or {})
    _check_pinned(g, k, pinned)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * g.n + 1000))
    s = _Search(g, k)
    if not s.pin(pinned):
        return 0
    rest = [v for v in range(g.n) if not s.color[v]]
    return s.count_region(rest) if rest else 1


def iter_colorings(
    g: Graph, k: int = 3, pinned: Optional[Mapping[int, int]] = None
) -> Iterator[dict[int, int]]:
    """Every proper k-coloring extending ``pinned``, in lexicographic vertex order."""
    pinned = dict(pinned or {})
    _check_pinned(g, k, pinned)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * g.n + 1000))
    s = _Search(g, k)
    if not s.pin(pinned):
        return
    yield from s.enumerate(list(range(g.n)))


def chromatic_number(g: Graph, cap: int = 4) -> Optional[int]:
    """Smallest k <= cap admitting a proper k-coloring, or None for "> cap"."""
    if g.n == 0:
        return 0
    for k in range(1, cap + 1):
        if solve(g, k).satisfiable:
            return k
    return None


def naive_colorable(g: Graph, k: int = 3) -> bool:
    """Plain k^n enumeration; only an oracle for tiny graphs."""
    edges = g.edges()
    for cols in itertools.product(range(k), repeat=g.n):
        if all(cols[u] != cols[v] for u, v in edges):
            return True
    return False


def to_cnf(g: Graph, k: int = 3, pinned: Optional[Mapping[int, int]] = None) -> str:
    """DIMACS CNF, direct encoding: variable ``v*k + c`` means vertex v has color c."""
    pinned = dict(pinned or {})

    def var(v: int, c: int) -> int:
        return v * k + c

    clauses: list[list[int]] = []
    for v in range(g.n):
        clauses.append([var(v, c) for c in range(1, k + 1)])
        for a in range(1, k + 1):
            for b in range(a + 1, k + 1):
                clauses.append([-var(v, a), -var(v, b)])
    for u, v in g.edges():
        for c in range(1, k + 1):
            clauses.append([-var(u, c), -var(v, c)])
    for v in sorted(pinned):
        clauses.append([var(v, pinned[v])])
    lines = [f"p cnf {g.n * k} {len(clauses)}"]
    lines += [" ".join(map(str, cl)) + " 0" for cl in clauses]
    return "\n".join(lines) + "\n"
