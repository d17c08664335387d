"""Base-pointed labeled square complexes mapping to the Salvetti complex.

Only the 1-skeleton and squares are stored.  An edge is ``(src, dst, label)``
with ``label`` a vertex index of the defining graph; an edge traversed
forwards reads ``label``, backwards reads ``label^-1``.

A square is a 4-tuple of edge ids ``(e1, e2, e3, e4)`` arranged on the unit
grid: ``e1: (0,0)->(1,0)`` and ``e3: (0,1)->(1,1)`` carry the first label,
``e4: (0,0)->(0,1)`` and ``e2: (1,0)->(1,1)`` the second, so the boundary
read from ``(0,0)`` is ``x y x^-1 y^-1``.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Optional, Sequence

from .errors import BudgetExceeded, InputError
from .graph import DefiningGraph, join_cover_mask
from .words import Word, WordLike, as_word, normalize, support_mask

CYCLE_CAP = 200_000

Germ = tuple[int, int]  # (edge id, +1 leaving the vertex / -1 entering it)


@dataclass
class LabeledComplex:
    basepoint: int
    vertices: set[int]
    edges: dict[int, tuple[int, int, int]]
    squares: set[tuple[int, int, int, int]] = field(default_factory=set)
    next_vertex: int = 0
    next_edge: int = 0

    def copy(self) -> "LabeledComplex":
        return LabeledComplex(
            self.basepoint, set(self.vertices), dict(self.edges), set(self.squares),
            self.next_vertex, self.next_edge,
        )

    def add_vertex(self) -> int:
        v = self.next_vertex
        self.next_vertex += 1
        self.vertices.add(v)
        return v

    def add_edge(self, src: int, dst: int, label: int) -> int:
        e = self.next_edge
        self.next_edge += 1
        self.edges[e] = (src, dst, label)
        return e

    def germs(self) -> dict[int, list[tuple[int, int, int]]]:
        """vertex -> list of ``(label, sign, edge)`` for every edge end at it."""
        out: dict[int, list[tuple[int, int, int]]] = {v: [] for v in self.vertices}
        for e, (s, d, lab) in sorted(self.edges.items()):
            out[s].append((lab, 1, e))
            out[d].append((lab, -1, e))
        return out

    def step_table(self) -> dict[tuple[int, int, int], tuple[int, int]]:
        """``(vertex, label, sign) -> (edge, far end)``; meaningful on folded complexes."""
        t = {}
        for e, (s, d, lab) in sorted(self.edges.items()):
            t.setdefault((s, lab, 1), (e, d))
            t.setdefault((d, lab, -1), (e, s))
        return t


def rose(g: DefiningGraph, gens: Sequence[WordLike]) -> LabeledComplex:
    """Wedge of cycles at the basepoint, one spelling each generator."""
    words = [as_word(g, w) for w in gens]
    if not words:
        raise InputError("rose needs at least one generator")
    c = LabeledComplex(0, {0}, {}, set(), 1, 0)
    for w in words:
        if not w:
            raise InputError("empty generator word")
        here = 0
        for k, x in enumerate(w):
            there = 0 if k == len(w) - 1 else c.add_vertex()
            if x & 1:
                c.add_edge(here, there, x >> 1)
            else:
                c.add_edge(there, here, x >> 1)
            here = there
    return c


class _UnionFind:
    def __init__(self, rng: Optional[random.Random] = None):
        self.parent: dict[int, int] = {}
        self.rng = rng

    def find(self, x: int) -> int:
        p = self.parent.get(x, x)
        if p == x:
            return x
        root = self.find(p)
        self.parent[x] = root
        return root

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if self.rng is not None:
            if self.rng.random() < 0.5:
                a, b = b, a
        elif b < a:
            a, b = b, a
        self.parent[b] = a
        return True


def fold(c: LabeledComplex, rng: Optional[random.Random] = None) -> LabeledComplex:
    """Stallings-fold the 1-skeleton; squares follow their edges and merge when equal.

    With ``rng`` the identification order and representatives are randomized;
    the result is the same up to relabeling.
    """
    uf = _UnionFind(rng)
    edges = list(c.edges.items())
    changed = True
    while changed:
        changed = False
        if rng is not None:
            rng.shuffle(edges)
        table: dict[tuple[int, int, int], int] = {}
        for _, (s, d, lab) in edges:
            s, d = uf.find(s), uf.find(d)
            for key, far in (((s, lab, 1), d), ((d, lab, -1), s)):
                other = table.get(key)
                if other is None:
                    table[key] = far
                elif uf.union(other, far):
                    changed = True
                    break
    return _quotient(c, uf)


def _quotient(c: LabeledComplex, uf: _UnionFind) -> LabeledComplex:
    emap: dict[int, int] = {}
    canon: dict[tuple[int, int, int], int] = {}
    for e in sorted(c.edges):
        s, d, lab = c.edges[e]
        key = (uf.find(s), uf.find(d), lab)
        if key not in canon:
            canon[key] = e
        emap[e] = canon[key]
    out = LabeledComplex(
        uf.find(c.basepoint),
        {uf.find(v) for v in c.vertices},
        {e: key for key, e in canon.items()},
        {tuple(emap[e] for e in sq) for sq in c.squares},
        c.next_vertex,
        c.next_edge,
    )
    return out


def identify_vertices(c: LabeledComplex, a: int, b: int) -> LabeledComplex:
    uf = _UnionFind()
    uf.union(a, b)
    return _quotient(c, uf)


def is_folded(c: LabeledComplex) -> bool:
    seen = set()
    for s, d, lab in c.edges.values():
        for key in ((s, lab, 1), (d, lab, -1)):
            if key in seen:
                return False
            seen.add(key)
    # parallel duplicates (same src, dst, label) already collide above
    return True


def square_corners(c: LabeledComplex, sq: tuple[int, int, int, int]) -> list[tuple[int, Germ, Germ]]:
    e1, e2, e3, e4 = sq
    return [
        (c.edges[e1][0], (e1, 1), (e4, 1)),
        (c.edges[e1][1], (e1, -1), (e2, 1)),
        (c.edges[e2][1], (e2, -1), (e3, -1)),
        (c.edges[e3][0], (e3, 1), (e4, -1)),
    ]


def square_is_valid(g: DefiningGraph, c: LabeledComplex, sq: tuple[int, int, int, int]) -> bool:
    if len(sq) != 4 or any(e not in c.edges for e in sq):
        return False
    (s1, d1, x1), (s2, d2, y2), (s3, d3, x3), (s4, d4, y4) = (c.edges[e] for e in sq)
    if x1 != x3 or y2 != y4 or x1 == y2 or not g.adj[x1] >> y2 & 1:
        return False
    return s1 == s4 and d1 == s2 and d4 == s3 and d2 == d3


def _corner_key(c: LabeledComplex, a: Germ, b: Germ) -> tuple:
    return tuple(sorted((a, b)))


@dataclass
class IsometryReport:
    folded: bool
    missing_squares: list[tuple[int, tuple[int, int], tuple[int, int]]] = field(default_factory=list)
    duplicate_squares: list[tuple[int, tuple[int, int], tuple[int, int]]] = field(default_factory=list)
    invalid_squares: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def passes(self) -> bool:
        return self.folded and not (self.missing_squares or self.duplicate_squares or self.invalid_squares)


def _label_germ(c: LabeledComplex, germ: Germ) -> tuple[int, int]:
    e, sign = germ
    return c.edges[e][2], sign


def check_local_isometry(g: DefiningGraph, c: LabeledComplex) -> IsometryReport:
    """Square-level link condition: folded, every commuting corner filled exactly once.

    Corners are reported as ``(vertex, (label, sign), (label, sign))`` with
    the smaller germ first.
    """
    report = IsometryReport(is_folded(c))
    cover: dict[tuple, int] = {}
    for sq in sorted(c.squares):
        if not square_is_valid(g, c, sq):
            report.invalid_squares.append(sq)
            continue
        for v, a, b in square_corners(c, sq):
            key = (v, _corner_key(c, a, b))
            cover[key] = cover.get(key, 0) + 1
    germs = c.germs()
    for v in sorted(c.vertices):
        gs = [((e, sign), lab) for lab, sign, e in germs[v]]
        for i in range(len(gs)):
            for j in range(i + 1, len(gs)):
                (ga, la), (gb, lb) = gs[i], gs[j]
                if la == lb or not g.adj[la] >> lb & 1:
                    continue
                n = cover.get((v, _corner_key(c, ga, gb)), 0)
                pair = tuple(sorted((_label_germ(c, ga), _label_germ(c, gb))))
                if n == 0:
                    report.missing_squares.append((v, pair[0], pair[1]))
                elif n > 1:
                    report.duplicate_squares.append((v, pair[0], pair[1]))
    return report


def complete_squares_step(g: DefiningGraph, c: LabeledComplex) -> LabeledComplex:
    """Fill the least missing corner with a square, then refold."""
    report = check_local_isometry(g, c)
    if not report.missing_squares:
        return c
    p, (x, sx), (y, sy) = report.missing_squares[0]
    c = c.copy()
    table = c.step_table()
    ex, q = table[(p, x, sx)]
    ey, s = table[(p, y, sy)]
    i0 = 0 if sx > 0 else 1
    j0 = 0 if sy > 0 else 1
    at_q = table.get((q, y, sy))
    at_s = table.get((s, x, sx))
    if at_q is None and at_s is None:
        r = c.add_vertex()
    elif at_q is not None:
        r = at_q[1]
    else:
        r = at_s[1]
    if at_q is None:
        ey2 = c.add_edge(q, r, y) if sy > 0 else c.add_edge(r, q, y)
    else:
        ey2 = at_q[0]
    if at_s is None:
        ex2 = c.add_edge(s, r, x) if sx > 0 else c.add_edge(r, s, x)
    else:
        ex2 = at_s[0]
    # x-edges indexed by j, y-edges by i on the unit grid
    x_at = {j0: ex, 1 - j0: ex2}
    y_at = {i0: ey, 1 - i0: ey2}
    c.squares.add((x_at[0], y_at[1], x_at[1], y_at[0]))
    if at_q is not None and at_s is not None and at_q[1] != at_s[1]:
        c = identify_vertices(c, at_q[1], at_s[1])
    return fold(c)


def saturate(g: DefiningGraph, c: LabeledComplex, budget: int) -> tuple[LabeledComplex, str]:
    """Fold and complete squares until the link condition holds or ``budget`` steps pass."""
    c = fold(c)
    for _ in range(budget):
        if check_local_isometry(g, c).passes:
            return c, "complete"
        c = complete_squares_step(g, c)
    if check_local_isometry(g, c).passes:
        return c, "complete"
    return c, "budget_exhausted"


@dataclass
class TracedPath:
    vertices: list[int]
    edges: list[int]

    @property
    def is_loop(self) -> bool:
        return self.vertices[0] == self.vertices[-1]


def trace_word(c: LabeledComplex, w: Sequence[int], start: Optional[int] = None) -> Optional[TracedPath]:
    """Follow the letters of ``w`` from the basepoint; None when some letter has no edge."""
    table = c.step_table()
    v = c.basepoint if start is None else start
    path = TracedPath([v], [])
    for x in w:
        step = table.get((v, x >> 1, 1 if x & 1 else -1))
        if step is None:
            return None
        e, v = step
        path.edges.append(e)
        path.vertices.append(v)
    return path


def loop_trace(g: DefiningGraph, c: LabeledComplex, h: WordLike) -> Optional[Word]:
    """A word in the shuffle class of ``normalize(h)`` reading a loop at the basepoint.

    Explores shuffles and complex vertices together: a state is a complex
    vertex plus the set of letters read so far, which for a normal form is a
    prefix of its letter poset and is recorded as per-vertex counts.
    """
    nf = normalize(g, as_word(g, h))
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
    full = tuple(counts)
    table = c.step_table()
    start = (c.basepoint, (0,) * n)
    parent: dict = {start: None}
    stack = [start]
    while stack:
        state = stack.pop()
        v, cnt = state
        if cnt == full:
            if v == c.basepoint:
                out = []
                while parent[state] is not None:
                    state, x = parent[state]
                    out.append(x)
                return tuple(reversed(out))
            continue
        for u in range(n - 1, -1, -1):
            k = cnt[u]
            if k >= len(occ[u]):
                continue
            p = occ[u][k]
            if not all(cnt[t] >= m for t, m in need[p]):
                continue
            x = nf[p]
            step = table.get((v, x >> 1, 1 if x & 1 else -1))
            if step is None:
                continue
            nxt = (step[1], cnt[:u] + (k + 1,) + cnt[u + 1:])
            if nxt not in parent:
                parent[nxt] = (state, x)
                stack.append(nxt)
    return None


def edge_letter(c: LabeledComplex, e: int, sign: int) -> int:
    return 2 * c.edges[e][2] + (1 if sign > 0 else 0)


def simple_cycles(c: LabeledComplex, cap: int = CYCLE_CAP) -> list[list[Germ]]:
    """Every simple cycle of the 1-skeleton once, as a list of traversed germs.

    Cycles are rooted at their least vertex and read in the direction whose
    first edge id is smaller than the last; loops and parallel edges count.
    """
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in c.vertices}
    for e, (s, d, _) in sorted(c.edges.items()):
        adj[s].append((d, e, 1))
        if s != d:
            adj[d].append((s, e, -1))
    out: list[list[Germ]] = []
    for e, (s, d, _) in sorted(c.edges.items()):
        if s == d:
            out.append([(e, 1)])
    for root in sorted(c.vertices):
        path: list[Germ] = []
        on_path = {root}

        def extend(v: int) -> None:
            for w, e, sign in adj[v]:
                if path and e == path[-1][0]:
                    continue
                if w == root and path:
                    if path[0][0] < e:
                        out.append(path + [(e, sign)])
                        if len(out) > cap:
                            raise BudgetExceeded(f"more than {cap} simple cycles")
                    continue
                if w <= root or w in on_path:
                    continue
                on_path.add(w)
                path.append((e, sign))
                extend(w)
                path.pop()
                on_path.discard(w)

        extend(root)
    return out


def cycle_word(c: LabeledComplex, cycle: Sequence[Germ]) -> Word:
    return tuple(edge_letter(c, e, sign) for e, sign in cycle)


def simple_cycle_supports(g: DefiningGraph, c: LabeledComplex, cap: int = CYCLE_CAP) -> list[tuple[list[Germ], tuple[str, ...]]]:
    return [(cyc, g.names(support_mask(cycle_word(c, cyc)))) for cyc in simple_cycles(c, cap)]


@dataclass
class ScanResult:
    pure: bool
    witness: Optional[list[Germ]] = None
    witness_word: Word = ()
    cycles_scanned: int = 0


def purely_loxodromic_scan(g: DefiningGraph, c: LabeledComplex, cap: int = CYCLE_CAP) -> ScanResult:
    """Look for a simple loop with nontrivial label whose support lies in a join.

    Loops reading the identity (square boundaries and the like) are skipped;
    on a locally isometric complex they are exactly the null-homotopic ones.
    """
    cycles = simple_cycles(c, cap)
    for cyc in cycles:
        w = cycle_word(c, cyc)
        if join_cover_mask(g, support_mask(w)) is not None and normalize(g, w):
            return ScanResult(False, cyc, w, len(cycles))
    return ScanResult(True, None, (), len(cycles))


def _bfs_tree(c: LabeledComplex) -> tuple[dict[int, Word], set[int]]:
    table = sorted(c.step_table().items())
    by_vertex: dict[int, list[tuple[int, int, int, int]]] = {}
    for (v, lab, sign), (e, w) in table:
        by_vertex.setdefault(v, []).append((lab, sign, e, w))
    paths = {c.basepoint: ()}
    tree_edges: set[int] = set()
    queue = deque([c.basepoint])
    while queue:
        v = queue.popleft()
        for lab, sign, e, w in by_vertex.get(v, []):
            if w not in paths:
                paths[w] = paths[v] + (2 * lab + (1 if sign > 0 else 0),)
                tree_edges.add(e)
                queue.append(w)
    return paths, tree_edges


def spanning_tree_paths(c: LabeledComplex) -> dict[int, Word]:
    """Breadth-first tree from the basepoint: vertex -> label of its tree path."""
    return _bfs_tree(c)[0]


def basis_loops(c: LabeledComplex) -> list[tuple[int, Word]]:
    """One loop label per non-tree edge; together they generate pi_1 of the 1-skeleton."""
    paths, tree_edges = _bfs_tree(c)
    if len(paths) != len(c.vertices):
        raise InputError("complex is not connected")
    out = []
    for e in sorted(c.edges):
        if e in tree_edges:
            continue
        s, d, lab = c.edges[e]
        back = tuple(x ^ 1 for x in reversed(paths[d]))
        out.append((e, paths[s] + (2 * lab + 1,) + back))
    return out


def canonical_form(c: LabeledComplex) -> tuple:
    """Relabeling-invariant form of a folded complex (breadth-first numbering)."""
    table = sorted(c.step_table().items())
    by_vertex: dict[int, list[tuple[int, int, int]]] = {}
    for (v, lab, sign), (e, w) in table:
        by_vertex.setdefault(v, []).append((lab, sign, w))
    number = {c.basepoint: 0}
    queue = deque([c.basepoint])
    while queue:
        v = queue.popleft()
        for lab, sign, w in sorted(by_vertex.get(v, [])):
            if w not in number:
                number[w] = len(number)
                queue.append(w)
    edges = sorted((number[s], number[d], lab) for s, d, lab in c.edges.values())
    ekey = {e: (number[s], number[d], lab) for e, (s, d, lab) in c.edges.items()}
    squares = sorted(tuple(ekey[e] for e in sq) for sq in c.squares)
    return (len(number), tuple(edges), tuple(squares))


def canonical_relabel(c: LabeledComplex) -> LabeledComplex:
    """Renumber a folded complex: vertices breadth-first from the basepoint
    (germs in label order), edges by (source, target, label)."""
    number = {c.basepoint: 0}
    queue = deque([c.basepoint])
    table = c.step_table()
    while queue:
        v = queue.popleft()
        for lab, sign in sorted((lab, sign) for (u, lab, sign) in table if u == v):
            w = table[(v, lab, sign)][1]
            if w not in number:
                number[w] = len(number)
                queue.append(w)
    for v in sorted(c.vertices):  # unreachable vertices cannot occur in connected input
        number.setdefault(v, len(number))
    keyed = sorted(((number[s], number[d], lab), e) for e, (s, d, lab) in c.edges.items())
    emap = {e: i for i, (_, e) in enumerate(keyed)}
    out = LabeledComplex(0, set(range(len(number))), {i: k for i, (k, _) in enumerate(keyed)},
                         {tuple(emap[e] for e in sq) for sq in c.squares}, len(number), len(keyed))
    return out


def to_text(g: DefiningGraph, c: LabeledComplex) -> str:
    """Serialize with edges renumbered 0.. in ``dedge`` line order."""
    order = sorted(c.edges)
    idx = {e: i for i, e in enumerate(order)}
    lines = [f"basepoint {c.basepoint}"]
    lines += [f"vertex {v}" for v in sorted(c.vertices)]
    for e in order:
        s, d, lab = c.edges[e]
        lines.append(f"dedge {s} {d} {g.vertices[lab]}")
    for sq in sorted(tuple(idx[e] for e in sq) for sq in c.squares):
        lines.append("square " + " ".join(map(str, sq)))
    return "\n".join(lines) + "\n"


def parse_complex(g: DefiningGraph, text: str) -> LabeledComplex:
    base = None
    vertices: set[int] = set()
    edges: dict[int, tuple[int, int, int]] = {}
    squares: set[tuple[int, int, int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "basepoint" and len(parts) == 2 and base is None:
                base = int(parts[1])
            elif parts[0] == "vertex" and len(parts) == 2:
                v = int(parts[1])
                if v in vertices:
                    raise InputError(f"line {lineno}: duplicate vertex")
                vertices.add(v)
            elif parts[0] == "dedge" and len(parts) == 4:
                if parts[3] not in g.index:
                    raise InputError(f"line {lineno}: unknown label {parts[3]!r}")
                edges[len(edges)] = (int(parts[1]), int(parts[2]), g.index[parts[3]])
            elif parts[0] == "square" and len(parts) == 5:
                sq = tuple(int(p) for p in parts[1:])
                if sq in squares:
                    raise InputError(f"line {lineno}: repeated square line")
                squares.add(sq)
            else:
                raise InputError(f"line {lineno}: cannot parse {raw!r}")
        except ValueError as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"line {lineno}: {exc}") from None
    if base is None or base not in vertices:
        raise InputError("missing or unknown basepoint")
    for e, (s, d, _) in edges.items():
        if s not in vertices or d not in vertices:
            raise InputError(f"edge {e} uses an unknown vertex")
    for sq in squares:
        if any(e not in edges for e in sq):
            raise InputError(f"square {sq} uses an unknown edge")
    c = LabeledComplex(base, vertices, edges, squares, max(vertices) + 1, len(edges))
    if len(spanning_tree_paths_any(c)) != len(vertices):
        raise InputError("complex is not connected")
    return c


def spanning_tree_paths_any(c: LabeledComplex) -> set[int]:
    """Vertices reachable from the basepoint, ignoring edge directions."""
    adj: dict[int, list[int]] = {v: [] for v in c.vertices}
    for s, d, _ in c.edges.values():
        adj[s].append(d)
        adj[d].append(s)
    seen = {c.basepoint}
    stack = [c.basepoint]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def complete_with_all_squares(g: DefiningGraph, c: LabeledComplex) -> LabeledComplex:
    """Attach a square to every commuting 4-cycle of a folded complex."""
    c = c.copy()
    table = c.step_table()
    for v in sorted(c.vertices):
        for x, y in g.edge_pairs:
            a = table.get((v, x, 1))
            b = table.get((v, y, 1))
            if a is None or b is None:
                continue
            e2 = table.get((a[1], y, 1))
            e3 = table.get((b[1], x, 1))
            if e2 is None or e3 is None or e2[1] != e3[1]:
                continue
            c.squares.add((a[0], e2[0], e3[0], b[0]))
    return c


def enumerate_complexes(g: DefiningGraph, max_vertices: int) -> Iterator[LabeledComplex]:
    """Blind enumeration of connected folded complexes passing the link condition.

    Every label acts as a partial injection on ``{0..n-1}``; squares are
    forced (a folded complex must fill each commuting 4-cycle).  Exponential,
    kept as the fallback candidate stream.
    """
    for n in range(1, max_vertices + 1):
        yield from enumerate_complexes_exact(g, n)


def enumerate_complexes_exact(g: DefiningGraph, n: int) -> Iterator[LabeledComplex]:
    choices = list(_partial_injections(n))
    for combo in product(choices, repeat=len(g)):
        c = LabeledComplex(0, set(range(n)), {}, set(), n, 0)
        for lab, images in enumerate(combo):
            for s, d in enumerate(images):
                if d is not None:
                    c.add_edge(s, d, lab)
        if not c.edges or len(spanning_tree_paths_any(c)) != n:
            continue
        c = complete_with_all_squares(g, c)
        if check_local_isometry(g, c).passes:
            yield c


def _partial_injections(n: int) -> Iterator[tuple[Optional[int], ...]]:
    def rec(i: int, used: frozenset[int], acc: tuple) -> Iterator[tuple]:
        if i == n:
            yield acc
            return
        yield from rec(i + 1, used, acc + (None,))
        for d in range(n):
            if d not in used:
                yield from rec(i + 1, used | {d}, acc + (d,))

    yield from rec(0, frozenset(), ())
