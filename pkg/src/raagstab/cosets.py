"""HLT coset enumeration over the commutator presentation.

Columns of the table are letter codes (see :mod:`raagstab.words`).  Cosets
are numbered from 0 internally, coset 0 being the subgroup; the CSV dump is
1-based.  The budget counts coset definitions.  An interrupted run stops
just before the definition that would exceed the budget, and rescanning is
idempotent, so resuming a partial table reproduces the uninterrupted run.
"""
from __future__ import annotations

import csv
import io
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InputError
from .graph import DefiningGraph
from .words import Word, WordLike, as_word, inverse

UNDEF = -1


def raag_relators(g: DefiningGraph) -> list[Word]:
    """One commutator ``u v u^-1 v^-1`` per edge."""
    return [(2 * i + 1, 2 * j + 1, 2 * i, 2 * j) for i, j in g.edge_pairs]


class _OutOfBudget(Exception):
    pass


@dataclass
class CosetTable:
    ncols: int
    rows: list[list[int]] = field(default_factory=list)
    parent: list[int] = field(default_factory=list)
    definitions: int = 0
    # resume point of the HLT loop
    phase: str = "subgroup"  # subgroup | relators | done
    coset: int = 0
    item: int = 0
    status: str = "in_progress"

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def live(self) -> list[int]:
        return [c for c in range(len(self.rows)) if self.parent[c] == c]

    @property
    def index(self) -> int:
        return len(self.live())

    def image(self, c: int, x: int) -> int:
        return self.rows[c][x]

    def to_json(self) -> str:
        return json.dumps({
            "ncols": self.ncols, "rows": self.rows, "parent": self.parent,
            "definitions": self.definitions, "phase": self.phase, "coset": self.coset,
            "item": self.item, "status": self.status,
        })

    @classmethod
    def from_json(cls, text: str) -> "CosetTable":
        try:
            d = json.loads(text)
            return cls(d["ncols"], d["rows"], d["parent"], d["definitions"], d["phase"],
                       d["coset"], d["item"], d["status"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad checkpoint: {exc}") from None


class _Enumerator:
    def __init__(self, table: CosetTable, budget: int):
        self.t = table
        self.budget = budget

    def new_coset(self) -> int:
        t = self.t
        if t.definitions >= self.budget:
            raise _OutOfBudget
        t.definitions += 1
        t.rows.append([UNDEF] * t.ncols)
        t.parent.append(len(t.rows) - 1)
        return len(t.rows) - 1

    def define(self, c: int, x: int) -> None:
        d = self.new_coset()
        self.t.rows[c][x] = d
        self.t.rows[d][x ^ 1] = c

    def scan_and_fill(self, c: int, w: Sequence[int]) -> None:
        rows = self.t.rows
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and rows[f][w[i]] != UNDEF:
                f = rows[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and rows[b][w[j] ^ 1] != UNDEF:
                b = rows[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                rows[f][w[i]] = b
                rows[b][w[i] ^ 1] = f
                return
            self.define(f, w[i])

    def coincidence(self, a: int, b: int) -> None:
        t = self.t
        rows = t.rows
        queue: deque[int] = deque()

        def merge(k: int, l: int) -> None:
            k, l = t.rep(k), t.rep(l)
            if k != l:
                lo, hi = min(k, l), max(k, l)
                t.parent[hi] = lo
                queue.append(hi)

        merge(a, b)
        while queue:
            g = queue.popleft()
            for x in range(t.ncols):
                d = rows[g][x]
                if d == UNDEF:
                    continue
                if rows[d][x ^ 1] == g:
                    rows[d][x ^ 1] = UNDEF
                mu, nu = t.rep(g), t.rep(d)
                if rows[mu][x] != UNDEF:
                    merge(nu, rows[mu][x])
                elif rows[nu][x ^ 1] != UNDEF:
                    merge(mu, rows[nu][x ^ 1])
                else:
                    rows[mu][x] = nu
                    rows[nu][x ^ 1] = mu

    def run(self, gens: Sequence[Word], relators: Sequence[Word]) -> None:
        t = self.t
        if not t.rows:
            self.new_coset()
        if t.phase == "subgroup":
            while t.item < len(gens):
                self.scan_and_fill(0, gens[t.item])
                t.item += 1
            t.phase, t.coset, t.item = "relators", 0, 0
        while t.phase == "relators":
            c = t.coset
            if c >= len(t.rows):
                t.phase = "done"
                break
            if t.parent[c] == c:
                while t.item < len(relators) and t.parent[c] == c:
                    self.scan_and_fill(c, relators[t.item])
                    t.item += 1
                if t.parent[c] == c:
                    for x in range(t.ncols):
                        if t.rows[c][x] == UNDEF:
                            self.define(c, x)
            t.coset, t.item = c + 1, 0


@dataclass
class CosetResult:
    status: str  # complete | budget_exhausted
    table: CosetTable

    @property
    def index(self) -> Optional[int]:
        return self.table.index if self.status == "complete" else None


def enumerate_cosets(
    g: DefiningGraph,
    gens: Sequence[WordLike],
    budget: int,
    table: Optional[CosetTable] = None,
) -> CosetResult:
    """Enumerate cosets of ``<gens>``; pass a partial ``table`` back in to resume."""
    words = [as_word(g, w) for w in gens]
    if table is None:
        table = CosetTable(2 * len(g))
    elif table.ncols != 2 * len(g):
        raise InputError("checkpoint does not match the graph")
    if table.status == "complete":
        return CosetResult("complete", table)
    try:
        _Enumerator(table, budget).run(words, raag_relators(g))
    except _OutOfBudget:
        return CosetResult("budget_exhausted", table)
    table.status = "complete"
    return CosetResult("complete", table)


def compact(table: CosetTable) -> list[list[int]]:
    """Rows of the live cosets renumbered 0..index-1."""
    live = table.live()
    num = {c: k for k, c in enumerate(live)}
    return [[num[table.rep(d)] if d != UNDEF else UNDEF for d in table.rows[c]] for c in live]


def validate_table(g: DefiningGraph, rows: Sequence[Sequence[int]], gens: Sequence[WordLike]) -> bool:
    """Independent check of a compacted table: a transitive permutation action in which
    every relator closes at every coset and every generator closes at coset 0."""
    n = len(rows)
    ncols = 2 * len(g)
    if n == 0:
        return False
    for c, row in enumerate(rows):
        if len(row) != ncols:
            return False
        for x, d in enumerate(row):
            if not 0 <= d < n or rows[d][x ^ 1] != c:
                return False

    def close(c: int, w: Sequence[int]) -> bool:
        d = c
        for x in w:
            d = rows[d][x]
        return d == c

    if not all(close(c, r) for c in range(n) for r in raag_relators(g)):
        return False
    if not all(close(0, as_word(g, w)) for w in gens):
        return False
    seen = {0}
    stack = [0]
    while stack:
        c = stack.pop()
        for d in rows[c]:
            if d not in seen:
                seen.add(d)
                stack.append(d)
    return len(seen) == n


def table_csv(g: DefiningGraph, rows: Sequence[Sequence[int]]) -> str:
    """``coset,generator,image`` lines, 1-based cosets, inverse columns as ``name^-1``."""
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["coset", "generator", "image"])
    for c, row in enumerate(rows):
        for x, d in enumerate(row):
            name = g.vertices[x >> 1] + ("" if x & 1 else "^-1")
            out.writerow([c + 1, name, d + 1])
    return buf.getvalue()


def coset_of(rows: Sequence[Sequence[int]], w: Sequence[int]) -> int:
    c = 0
    for x in w:
        c = rows[c][x]
    return c


def in_subgroup(rows: Sequence[Sequence[int]], w: Sequence[int]) -> bool:
    return coset_of(rows, w) == 0 and coset_of(rows, inverse(w)) == 0
