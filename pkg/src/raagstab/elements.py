"""Loxodromic/elliptic classification and star length."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import BudgetExceeded, HypothesisError
from .graph import DefiningGraph, JoinCover, join_cover_mask, validate_graph
from .words import WordLike, Word, as_word, cyclic_reduce, multiply, normalize, support_mask

STATE_CAP = 10**6
GROWTH_NMAX = 64


@dataclass(frozen=True)
class ElementClass:
    kind: str  # "identity" | "elliptic" | "loxodromic"
    witness: Optional[JoinCover] = None
    core: Word = ()
    conjugator: Word = ()


@dataclass
class StarFactorization:
    blocks: list[Word] = field(default_factory=list)
    star_vertices: list[str] = field(default_factory=list)

    def word(self) -> Word:
        return tuple(c for b in self.blocks for c in b)


def require_hypotheses(g: DefiningGraph) -> None:
    report = getattr(g, "_validation", None)
    if report is None:
        report = validate_graph(g)
        g._validation = report
    if not report.satisfies_hypotheses:
        raise HypothesisError(
            "graph must be connected, anti-connected and have at least two vertices: "
            + "; ".join(report.warnings)
        )


def classify(g: DefiningGraph, w: WordLike) -> ElementClass:
    """Loxodromic iff the cyclically reduced support lies in no join subgraph."""
    require_hypotheses(g)
    cf = cyclic_reduce(g, as_word(g, w))
    return classify_core(g, cf.core, cf.conjugator)


def classify_core(g: DefiningGraph, core: Word, conjugator: Word = ()) -> ElementClass:
    if not core:
        return ElementClass("identity", None, core, conjugator)
    found = join_cover_mask(g, support_mask(core))
    if found is None:
        return ElementClass("loxodromic", None, core, conjugator)
    cover = JoinCover(g.names(found[0]), g.names(found[1]))
    return ElementClass("elliptic", cover, core, conjugator)


def _trace_tables(g: DefiningGraph, nf: Word):
    """Per-vertex occurrence positions and, per position, the prefix counts it depends on."""
    n = len(g)
    occ: list[list[int]] = [[] for _ in range(n)]
    need: list[list[tuple[int, int]]] = []
    counts = [0] * n
    for p, x in enumerate(nf):
        v = x >> 1
        dep = ~g.adj[v]
        need.append([(u, counts[u]) for u in range(n) if dep >> u & 1 and counts[u]])
        occ[v].append(p)
        counts[v] += 1
    return occ, need


def _extend(state: tuple[int, ...], star: int, occ, need) -> tuple[int, ...]:
    """Largest prefix reachable from ``state`` using only letters in ``star``."""
    c = list(state)
    members = [u for u in range(len(c)) if star >> u & 1 and c[u] < len(occ[u])]
    changed = True
    while changed:
        changed = False
        for u in members:
            ou = occ[u]
            while c[u] < len(ou):
                p = ou[c[u]]
                if all(c[t] >= k for t, k in need[p]):
                    c[u] += 1
                    changed = True
                else:
                    break
    return tuple(c)


def star_length(g: DefiningGraph, w: WordLike, cap: int = STATE_CAP) -> tuple[int, StarFactorization]:
    """Exact star length with a star-geodesic factorization.

    Minimizes the number of star-block pieces over all normal forms of the
    element.  Normal forms are linearizations of one letter poset, so a
    factorization is a chain of prefixes (order ideals, recorded as
    per-vertex letter counts) where each step adds letters from a single
    star.  Breadth-first search over the maximal one-star extensions finds
    the shortest chain; extension is monotone, so dominated states are dropped.
    """
    nf = normalize(g, as_word(g, w))
    if not nf:
        return 0, StarFactorization()
    occ, need = _trace_tables(g, nf)
    n = len(g)
    full = tuple(len(o) for o in occ)
    start = (0,) * n
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], int]] = {}
    frontier = [start]
    level = 0
    goal = None
    while goal is None:
        level += 1
        new: dict[tuple[int, ...], tuple[tuple[int, ...], int]] = {}
        for s in frontier:
            for v in range(n):
                t = _extend(s, g.star_masks[v], occ, need)
                if t == s or t in parent or t in new:
                    continue
                new[t] = (s, v)
                if t == full:
                    goal = t
                    break
            if goal is not None:
                break
        if not new:  # pragma: no cover - every letter lies in its own star
            raise RuntimeError("star extension stalled")
        parent.update(new)
        if len(parent) > cap:
            raise BudgetExceeded(f"star-length search exceeded {cap} states")
        frontier = _maximal(sorted(new))
    blocks: list[Word] = []
    verts: list[str] = []
    t = goal
    while t != start:
        s, v = parent[t]
        pos = sorted(p for u in range(n) for p in occ[u][s[u]:t[u]])
        blocks.append(tuple(nf[p] for p in pos))
        verts.append(g.vertices[v])
        t = s
    blocks.reverse()
    verts.reverse()
    return level, StarFactorization(blocks, verts)


def _maximal(states: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    keep = []
    for s in states:
        if any(s != t and all(a <= b for a, b in zip(s, t)) for t in states):
            continue
        keep.append(s)
    return keep


def star_distance(g: DefiningGraph, u: WordLike, v: WordLike) -> int:
    """Left-invariant star metric ``|u^-1 v|_*``."""
    from .words import inverse

    return star_length(g, inverse(as_word(g, u)) + as_word(g, v))[0]


def growth_probe(g: DefiningGraph, w: WordLike, nmax: int, bound: int = GROWTH_NMAX) -> list[int]:
    """Star lengths of ``w^n`` for ``n = 1..nmax``."""
    if nmax > bound:
        raise BudgetExceeded(f"nmax {nmax} above configured bound {bound}")
    w = normalize(g, as_word(g, w))
    out = []
    power: Word = ()
    for _ in range(nmax):
        power = multiply(g, power, w)
        out.append(star_length(g, power)[0])
    return out
