"""Defining graphs of right-angled Artin groups.

Vertices are kept in input order; internally every vertex subset is an int
bitmask (bit ``i`` is ``graph.vertices[i]``), which keeps the join and star
queries cheap enough to run inside the enumeration loops of the deciders.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class DefiningGraph:
    """A finite simplicial graph with a fixed vertex order."""

    def __init__(self, vertices: Sequence[str], edges: Iterable[Sequence[str]] = ()):
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise InputError("duplicate vertex name")
        for v in vertices:
            if not isinstance(v, str) or not _NAME.match(v):
                raise InputError(f"bad vertex name {v!r}")
        self.vertices: tuple[str, ...] = vertices
        self.index: dict[str, int] = {v: i for i, v in enumerate(vertices)}
        n = len(vertices)
        adj = [0] * n
        seen: set[frozenset[str]] = set()
        for e in edges:
            u, v = e
            if u not in self.index or v not in self.index:
                raise InputError(f"edge {u}-{v} uses an unknown vertex")
            if u == v:
                raise InputError(f"loop at {u}")
            key = frozenset((u, v))
            if key in seen:
                raise InputError(f"duplicate edge {u}-{v}")
            seen.add(key)
            i, j = self.index[u], self.index[v]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        self.adj: tuple[int, ...] = tuple(adj)
        self.star_masks: tuple[int, ...] = tuple(a | (1 << i) for i, a in enumerate(adj))
        self.full_mask: int = (1 << n) - 1
        # edges in vertex order, each as (i, j) with i < j
        self.edge_pairs: tuple[tuple[int, int], ...] = tuple(
            (i, j) for i in range(n) for j in range(i + 1, n) if adj[i] >> j & 1
        )

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"DefiningGraph({len(self.vertices)} vertices, {len(self.edge_pairs)} edges)"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DefiningGraph)
            and self.vertices == other.vertices
            and self.adj == other.adj
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.adj))

    @property
    def edges(self) -> list[tuple[str, str]]:
        return [(self.vertices[i], self.vertices[j]) for i, j in self.edge_pairs]

    def adjacent(self, u: str, v: str) -> bool:
        return bool(self.adj[self.index[u]] >> self.index[v] & 1)

    def mask(self, vertex_set: Iterable[str]) -> int:
        """Bitmask of a set of vertex names; unknown names raise InputError."""
        m = 0
        for v in vertex_set:
            try:
                m |= 1 << self.index[v]
            except KeyError:
                raise InputError(f"unknown vertex {v!r}") from None
        return m

    def names(self, mask: int) -> tuple[str, ...]:
        """Vertex names of a bitmask, in graph order."""
        return tuple(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    def to_text(self) -> str:
        lines = [f"vertex {v}" for v in self.vertices]
        lines += [f"edge {u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> DefiningGraph:
    """Parse the ``vertex <name>`` / ``edge <u> <v>`` line format."""
    vertices: list[str] = []
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertex" and len(parts) == 2:
            vertices.append(parts[1])
        elif parts[0] == "edge" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise InputError(f"line {lineno}: cannot parse {raw!r}")
    return DefiningGraph(vertices, edges)


def cycle_graph(n: int, names: Sequence[str] | None = None) -> DefiningGraph:
    names = list(names) if names is not None else [chr(ord("a") + i) for i in range(n)]
    return DefiningGraph(names, [(names[i], names[(i + 1) % n]) for i in range(n)])


def path_graph(names: Sequence[str]) -> DefiningGraph:
    names = list(names)
    return DefiningGraph(names, list(zip(names, names[1:])))


def complete_graph(names: Sequence[str]) -> DefiningGraph:
    names = list(names)
    return DefiningGraph(
        names, [(u, v) for i, u in enumerate(names) for v in names[i + 1:]]
    )


@dataclass(frozen=True)
class JoinCover:
    """Two disjoint nonempty vertex sets with every cross pair adjacent."""

    side_a: tuple[str, ...]
    side_b: tuple[str, ...]

    def vertices(self) -> frozenset[str]:
        return frozenset(self.side_a) | frozenset(self.side_b)


@dataclass
class ValidationReport:
    connected: bool
    anti_connected: bool
    vertex_count: int
    warnings: list[str] = field(default_factory=list)

    @property
    def satisfies_hypotheses(self) -> bool:
        """Connected, anti-connected and at least two vertices."""
        return self.connected and self.anti_connected and self.vertex_count >= 2


def _components(masks: Sequence[int], within: int) -> list[int]:
    """Connected components of the graph given by neighbour masks, restricted to ``within``."""
    out = []
    todo = within
    while todo:
        low = todo & -todo
        comp = low
        frontier = low
        while frontier:
            bit = frontier & -frontier
            frontier ^= bit
            i = bit.bit_length() - 1
            new = masks[i] & within & ~comp
            comp |= new
            frontier |= new
        out.append(comp)
        todo &= ~comp
    return out


def _complement_components(g: DefiningGraph, s: int) -> list[int]:
    comp_adj = [(g.full_mask & ~a & ~(1 << i)) for i, a in enumerate(g.adj)]
    return _components(comp_adj, s)


def validate_graph(g: DefiningGraph) -> ValidationReport:
    n = len(g)
    connected = len(_components(g.adj, g.full_mask)) <= 1
    warnings = []
    single_edge = n == 2 and len(g.edge_pairs) == 1
    anti = n <= 1 or single_edge or len(_complement_components(g, g.full_mask)) == 1
    if single_edge:
        warnings.append(
            "graph is a single edge: the group is free abelian of rank 2 and has no loxodromic elements"
        )
    if n < 2:
        warnings.append("graph has fewer than two vertices")
    if not connected:
        warnings.append("graph is not connected")
    if not anti:
        warnings.append("graph decomposes as a nontrivial join")
    return ValidationReport(connected, anti, n, warnings)


def star(g: DefiningGraph, v: str) -> tuple[str, ...]:
    if v not in g.index:
        raise InputError(f"unknown vertex {v!r}")
    return g.names(g.star_masks[g.index[v]])


def link(g: DefiningGraph, v: str) -> tuple[str, ...]:
    if v not in g.index:
        raise InputError(f"unknown vertex {v!r}")
    return g.names(g.adj[g.index[v]])


def induced_complement_components(g: DefiningGraph, s: Iterable[str]) -> list[tuple[str, ...]]:
    """Components of the complement of the subgraph induced on ``s``."""
    return [g.names(c) for c in _complement_components(g, g.mask(s))]


def join_cover_mask(g: DefiningGraph, s: int) -> tuple[int, int] | None:
    """Bitmask form of :func:`join_cover`."""
    for i, st in enumerate(g.star_masks):
        if g.adj[i] and s & ~st == 0:
            return 1 << i, g.adj[i]
    if s & (s - 1):
        comps = _complement_components(g, s)
        if len(comps) > 1:
            return comps[0], s & ~comps[0]
    return None


def join_cover(g: DefiningGraph, s: Iterable[str]) -> JoinCover | None:
    """A join subgraph containing ``s``, or None when ``s`` lies in no join.

    A set lies in a join exactly when it fits in the star of a non-isolated
    vertex, or when its own induced subgraph has disconnected complement.
    """
    found = join_cover_mask(g, g.mask(s))
    if found is None:
        return None
    return JoinCover(g.names(found[0]), g.names(found[1]))


def is_join_cover(g: DefiningGraph, cover: JoinCover) -> bool:
    """Check the JoinCover invariants against ``g``."""
    try:
        a, b = g.mask(cover.side_a), g.mask(cover.side_b)
    except InputError:
        return False
    if len(set(cover.side_a)) != len(cover.side_a) or len(set(cover.side_b)) != len(cover.side_b):
        return False
    if not a or not b or a & b:
        return False
    for i in range(len(g)):
        if a >> i & 1 and b & ~g.adj[i]:
            return False
    return True
