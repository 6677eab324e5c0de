"""Immutable simple graphs plus graph6 / DIMACS / DOT interchange."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

__all__ = [
    "Boundary",
    "GadgetInternal",
    "Graph",
    "GraphError",
    "GraphFormatError",
    "Label",
    "LatticeX",
    "LatticeY",
    "build_graph",
    "delete_edge",
    "edge_subgraph",
    "normalize_edge",
    "parse",
    "parse_label",
    "serialize",
]


class GraphError(ValueError):
    """Invalid graph construction or mutation."""


class GraphFormatError(ValueError):
    """Malformed serialized graph text."""


# -- labels -----------------------------------------------------------------


@dataclass(frozen=True, order=True)
class LatticeX:
    i: int
    j: int

    def __str__(self) -> str:
        return f"x{self.i}_{self.j}"


@dataclass(frozen=True, order=True)
class LatticeY:
    i: int
    j: int

    def __str__(self) -> str:
        return f"y{self.i}_{self.j}"


@dataclass(frozen=True, order=True)
class GadgetInternal:
    copy_id: str
    local_index: int

    def __str__(self) -> str:
        return f"{self.copy_id}.{self.local_index}"


@dataclass(frozen=True, order=True)
class Boundary:
    name: str

    def __str__(self) -> str:
        return self.name


Label = Union[LatticeX, LatticeY, GadgetInternal, Boundary]

_LABEL_RE = [
    (re.compile(r"^x(\d+)_(\d+)$"), lambda m: LatticeX(int(m[1]), int(m[2]))),
    (re.compile(r"^y(\d+)_(\d+)$"), lambda m: LatticeY(int(m[1]), int(m[2]))),
    (re.compile(r"^([A-Za-z][\w']*)\.(\d+)$"), lambda m: GadgetInternal(m[1], int(m[2]))),
]


def parse_label(text: str) -> Label:
    """Inverse of ``str(label)``; anything unrecognised becomes a Boundary."""
    for rx, make in _LABEL_RE:
        m = rx.match(text)
        if m:
            return make(m)
    return Boundary(text)


# -- graph ------------------------------------------------------------------


def normalize_edge(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise GraphError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Adjacency lists are sorted tuples, so two graphs compare equal exactly
    when they have the same vertex count and edge set.  Labels are carried
    along but ignored by equality.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]
    labels: Optional[tuple[Label, ...]] = field(default=None, compare=False, repr=False)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        # adjacency is sorted; small lists so linear scan is fine
        return v in a

    def label(self, v: int) -> Optional[Label]:
        return None if self.labels is None else self.labels[v]

    def name(self, v: int) -> str:
        lab = self.label(v)
        return str(v) if lab is None else str(lab)

    def vertex_of(self, label: Label) -> int:
        if self.labels is None:
            raise KeyError(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def validate(self) -> None:
        """Raise GraphError unless the simple/symmetric/sorted invariants hold."""
        if len(self.adj) != self.n:
            raise GraphError("adjacency length differs from vertex count")
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError("label count differs from vertex count")
        for u, nbrs in enumerate(self.adj):
            if list(nbrs) != sorted(set(nbrs)):
                raise GraphError(f"neighbour list of {u} not strictly sorted")
            for v in nbrs:
                if v == u:
                    raise GraphError(f"self-loop at {u}")
                if not 0 <= v < self.n:
                    raise GraphError(f"neighbour {v} of {u} out of range")
                if u not in self.adj[v]:
                    raise GraphError(f"asymmetric adjacency {u}-{v}")


def build_graph(
    n: int,
    edges: Iterable[Sequence[int]],
    labels: Optional[Sequence[Label]] = None,
) -> Graph:
    """Build a canonical Graph; duplicate pairs (in either orientation) collapse."""
    if n < 0:
        raise GraphError("vertex count must be nonnegative")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for e in edges:
        u, v = normalize_edge(int(e[0]), int(e[1]))
        if u < 0 or v >= n:
            raise GraphError(f"edge {u}-{v} out of range for n={n}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != n:
            raise GraphError("label count differs from vertex count")
    return Graph(n, tuple(tuple(sorted(s)) for s in nbrs), labels)


def delete_edge(g: Graph, e: Sequence[int]) -> Graph:
    u, v = normalize_edge(int(e[0]), int(e[1]))
    if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
        raise GraphError(f"edge {u}-{v} not in graph")
    adj = list(g.adj)
    adj[u] = tuple(w for w in adj[u] if w != v)
    adj[v] = tuple(w for w in adj[v] if w != u)
    return Graph(g.n, tuple(adj), g.labels)


def edge_subgraph(
    g: Graph, edges: Iterable[Sequence[int]], drop_isolated: bool = True
) -> tuple[Graph, list[int]]:
    """Subgraph spanned by ``edges``.

    Returns the new graph and ``old_ids`` with ``old_ids[new] = old``.  With
    ``drop_isolated`` the vertices left without edges are removed and the
    rest renumbered in increasing order of their old ids.
    """
    es = [normalize_edge(int(a), int(b)) for a, b in edges]
    for u, v in es:
        if not g.has_edge(u, v):
            raise GraphError(f"edge {u}-{v} not in graph")
    if drop_isolated:
        old_ids = sorted({x for e in es for x in e})
    else:
        old_ids = list(range(g.n))
    new_of = {old: new for new, old in enumerate(old_ids)}
    labels = None if g.labels is None else [g.labels[o] for o in old_ids]
    h = build_graph(len(old_ids), [(new_of[u], new_of[v]) for u, v in es], labels)
    return h, old_ids


# -- graph6 -----------------------------------------------------------------


def _g6_size(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def _to_graph6(g: Graph) -> str:
    bits = [
        1 if g.has_edge(i, j) else 0 for j in range(1, g.n) for i in range(j)
    ]
    bits += [0] * (-len(bits) % 6)
    body = "".join(
        chr(63 + int("".join(map(str, bits[k : k + 6])), 2))
        for k in range(0, len(bits), 6)
    )
    return _g6_size(g.n) + body


def _from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s:
        raise GraphFormatError("empty graph6 string")
    if any(not 63 <= ord(c) <= 126 for c in s):
        raise GraphFormatError("graph6 character out of range")
    vals = [ord(c) - 63 for c in s]
    if vals[0] != 63:
        n, body = vals[0], vals[1:]
    elif len(vals) >= 2 and vals[1] == 63:
        if len(vals) < 8:
            raise GraphFormatError("truncated graph6 size field")
        n = 0
        for x in vals[2:8]:
            n = (n << 6) | x
        body = vals[8:]
    else:
        if len(vals) < 4:
            raise GraphFormatError("truncated graph6 size field")
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        body = vals[4:]
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise GraphFormatError(
            f"graph6 body has {len(body)} bytes, expected {(nbits + 5) // 6} for n={n}"
        )
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    return build_graph(n, edges)


# -- DIMACS -----------------------------------------------------------------


def _to_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.num_edges}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def _from_dimacs(text: str) -> Graph:
    n = m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise GraphFormatError(f"line {lineno}: malformed header {raw!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed header {raw!r}") from None
        elif parts[0] == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: malformed edge {raw!r}")
            u, v = int(parts[1]), int(parts[2])
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"line {lineno}: vertex index out of range")
            edges.append((u - 1, v - 1))
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphFormatError("missing 'p edge' header")
    try:
        g = build_graph(n, edges)
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from None
    if g.num_edges != m:
        raise GraphFormatError(f"header announces {m} edges, found {g.num_edges}")
    return g


# -- DOT --------------------------------------------------------------------

_DOT_NODE = re.compile(r'^\s*"([^"]+)"\s*;\s*$')
_DOT_EDGE = re.compile(r'^\s*"([^"]+)"\s*--\s*"([^"]+)"\s*;\s*$')


def _to_dot(g: Graph) -> str:
    names = [g.name(v) for v in range(g.n)]
    if len(set(names)) != len(names):
        names = [f"{v}:{nm}" for v, nm in enumerate(names)]
    out = ["graph G {"]
    out += [f'  "{nm}";' for nm in names]
    out += [f'  "{names[u]}" -- "{names[v]}";' for u, v in g.edges()]
    out.append("}")
    return "\n".join(out) + "\n"


def _from_dot(text: str) -> Graph:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not re.match(r"^\s*(strict\s+)?graph\b.*\{\s*$", lines[0]):
        raise GraphFormatError("expected 'graph ... {' header")
    if lines[-1].strip() != "}":
        raise GraphFormatError("missing closing brace")
    ids: dict[str, int] = {}
    edges = []
    for ln in lines[1:-1]:
        m = _DOT_EDGE.match(ln)
        if m:
            for nm in m.groups():
                ids.setdefault(nm, len(ids))
            edges.append((ids[m[1]], ids[m[2]]))
            continue
        m = _DOT_NODE.match(ln)
        if m:
            ids.setdefault(m[1], len(ids))
            continue
        raise GraphFormatError(f"unparsable DOT line {ln!r}")
    names = sorted(ids, key=ids.get)
    labels = [parse_label(nm.split(":", 1)[1] if re.match(r"^\d+:", nm) else nm) for nm in names]
    return build_graph(len(names), edges, labels)


_WRITERS = {"graph6": _to_graph6, "dimacs": _to_dimacs, "dot": _to_dot}
_READERS = {"graph6": _from_graph6, "dimacs": _from_dimacs, "dot": _from_dot}
FORMATS = tuple(_WRITERS)


def serialize(g: Graph, fmt: str = "graph6") -> str:
    try:
        return _WRITERS[fmt](g)
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}") from None


def parse(text: str, fmt: str = "graph6") -> Graph:
    try:
        reader = _READERS[fmt]
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}") from None
    return reader(text)
