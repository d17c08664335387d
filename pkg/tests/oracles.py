"""Brute-force references, independent of the library's algorithms."""
from __future__ import annotations

from itertools import combinations, product

import sympy
from sympy.matrices.normalforms import smith_normal_form

from raagstab.graph import DefiningGraph
from raagstab.words import normalize, shuffle_class


def join_unions(g: DefiningGraph) -> set[int]:
    """Vertex masks A|B over every pair of disjoint nonempty sets with all A-B pairs adjacent."""
    n = len(g)
    out = set()
    for labels in product(range(3), repeat=n):
        a = sum(1 << i for i in range(n) if labels[i] == 1)
        b = sum(1 << i for i in range(n) if labels[i] == 2)
        if not a or not b:
            continue
        if all(b & ~g.adj[i] == 0 for i in range(n) if a >> i & 1):
            out.add(a | b)
    return out


def has_join_cover(unions: set[int], s: int) -> bool:
    return any(s & ~u == 0 for u in unions)


def greedy_blocks(g: DefiningGraph, word) -> int:
    """Fewest contiguous pieces, each supported in one star (greedy is optimal: pieces are hereditary)."""
    count, cur = 0, None
    for x in word:
        v = 1 << (x >> 1)
        if cur is not None:
            nxt = cur | v
            if any(nxt & ~st == 0 for st in g.star_masks):
                cur = nxt
                continue
        count += 1
        cur = v
    return count


def brute_star_length(g: DefiningGraph, word) -> int:
    nf = normalize(g, word)
    if not nf:
        return 0
    return min(greedy_blocks(g, w) for w in shuffle_class(g, nf))


def free_reduce(word) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def lattice_index(vectors: list[list[int]], rank: int) -> int:
    """Index of the integer span of ``vectors`` in Z^rank (0 when infinite), via Smith form."""
    m = sympy.Matrix(vectors)
    if m.rank() < rank:
        return 0
    snf = smith_normal_form(m, domain=sympy.ZZ)
    d = 1
    for i in range(rank):
        d *= abs(snf[i, i])
    return int(d)


def elements_up_to(g: DefiningGraph, length: int):
    """Normal forms of every element of word length exactly 0..length, one per element."""
    from raagstab.words import canonical_form

    levels = [[()]]
    seen = {()}
    letters = range(2 * len(g))
    for n in range(1, length + 1):
        nxt = []
        for w in levels[-1]:
            for x in letters:
                c = canonical_form(g, w + (x,))
                if len(c) == n and c not in seen:
                    seen.add(c)
                    nxt.append(c)
        levels.append(nxt)
    return levels


def subsets(n: int):
    for k in range(n + 1):
        for c in combinations(range(n), k):
            yield sum(1 << i for i in c)


def _tree_dist(u: tuple, v: tuple) -> int:
    k = 0
    for x, y in zip(u, v):
        if x != y:
            break
        k += 1
    return len(u) + len(v) - 2 * k


def tree_local_to_global(K: int, lam: float, eps: float, lam2: float, eps2: float, max_len: int,
                         letters=(0, 1, 2, 3)):
    """Every edge path of at most ``max_len`` steps in the free-group tree, up to automorphism.

    Vertices are freely reduced words over letter codes (``x ^ 1`` inverts).
    From the current vertex the walk may step to any visited neighbour, or
    to one representative unvisited neighbour.  Two unvisited choices differ
    by a tree automorphism fixing everything visited so far, so distances,
    and with them both quasigeodesic tests, agree.  A path whose K-windows
    all pass (lam, eps) must pass (lam2, eps2) globally.

    Returns (paths examined, first counterexample or None).
    """
    tol = 1e-9
    path = [()]
    visited = {(): 1}
    count = 0

    def neighbours(v: tuple):
        for x in letters:
            if v and v[-1] == x ^ 1:
                yield v[:-1]
            else:
                yield v + (x,)

    def rec():
        nonlocal count
        count += 1
        n = len(path) - 1
        if n == max_len:
            return None
        v = path[-1]
        fresh_done = False
        for w in neighbours(v):
            if w not in visited:
                if fresh_done:
                    continue
                fresh_done = True
            path.append(w)
            m = n + 1
            ok_local, bad = True, None
            for i in range(m):
                d = _tree_dist(path[i], w)
                k = m - i
                if k <= K and (d < k / lam - eps - tol or d > lam * k + eps + tol):
                    ok_local = False
                    break
                if d < k / lam2 - eps2 - tol or d > lam2 * k + eps2 + tol:
                    bad = (i, m, d)
            if ok_local:
                if bad is not None:
                    return list(path), bad
                visited[w] = visited.get(w, 0) + 1
                found = rec()
                visited[w] -= 1
                if not visited[w]:
                    del visited[w]
                if found:
                    return found
            path.pop()
        return None

    found = rec()
    return count, found
