"""Words over the standard generators and the normal-form machinery.

A letter is an int code ``2 * i + 1`` for vertex ``i`` and ``2 * i`` for its
inverse, so ``code ^ 1`` inverts, ``code >> 1`` is the vertex, and plain int
order is the canonical letter order (vertex order, inverse before positive).
A word is a tuple of codes.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import BudgetExceeded, InputError
from .graph import DefiningGraph

Word = tuple[int, ...]
WordLike = Union[str, Sequence[int]]

SHUFFLE_CAP = 10**6

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def letter(g: DefiningGraph, name: str, sign: int = 1) -> int:
    if name not in g.index:
        raise InputError(f"unknown generator {name!r}")
    return 2 * g.index[name] + (1 if sign > 0 else 0)


def parse_word(g: DefiningGraph, text: str) -> Word:
    """Parse whitespace separated tokens ``a``, ``a^-1``, ``a^3``; ``1`` is the identity."""
    out: list[int] = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise InputError(f"bad word token {tok!r}")
        name, exp = m.group(1), int(m.group(2) or 1)
        if exp == 0:
            raise InputError(f"zero exponent in {tok!r}")
        code = letter(g, name, exp)
        out.extend([code] * abs(exp))
    return tuple(out)


def format_word(g: DefiningGraph, w: Sequence[int]) -> str:
    if not w:
        return "1"
    return " ".join(
        g.vertices[c >> 1] if c & 1 else g.vertices[c >> 1] + "^-1" for c in w
    )


def as_word(g: DefiningGraph, w: WordLike) -> Word:
    """Coerce text or a code sequence into a validated word."""
    if isinstance(w, str):
        return parse_word(g, w)
    w = tuple(w)
    top = 2 * len(g)
    for c in w:
        if not isinstance(c, int) or not 0 <= c < top:
            raise InputError(f"invalid letter code {c!r}")
    return w


def inverse(w: Sequence[int]) -> Word:
    return tuple(c ^ 1 for c in reversed(w))


def support_mask(w: Iterable[int]) -> int:
    m = 0
    for c in set(w):
        m |= 1 << (c >> 1)
    return m


def support(g: DefiningGraph, w: WordLike) -> tuple[str, ...]:
    return g.names(support_mask(as_word(g, w)))


def abelianization(g: DefiningGraph, w: Iterable[int]) -> tuple[int, ...]:
    """Exponent-sum vector of a word."""
    v = [0] * len(g)
    for c in w:
        v[c >> 1] += 1 if c & 1 else -1
    return tuple(v)


def commute(g: DefiningGraph, x: int, y: int) -> bool:
    """Whether two letters on distinct adjacent vertices commute (equal vertices do not swap)."""
    return bool(g.adj[x >> 1] >> (y >> 1) & 1)


def push_letter(g: DefiningGraph, nf: list[int], x: int) -> None:
    """Right-multiply the normal form ``nf`` (a list, edited in place) by one letter.

    Scans back over letters commuting with ``x``; meeting ``x^-1`` cancels it,
    meeting anything else stops the scan and ``x`` is appended.
    """
    v = x >> 1
    adj = g.adj[v]
    inv = x ^ 1
    k = len(nf) - 1
    while k >= 0:
        y = nf[k]
        if y == inv:
            del nf[k]
            return
        if not adj >> (y >> 1) & 1:
            break
        k -= 1
    nf.append(x)


def normalize(g: DefiningGraph, w: WordLike) -> Word:
    """A normal form of ``w``: no subword ``x^e u x^-e`` with ``u`` commuting with ``x``."""
    out: list[int] = []
    for x in as_word(g, w):
        push_letter(g, out, x)
    return tuple(out)


def multiply(g: DefiningGraph, nf: Sequence[int], w: Sequence[int]) -> Word:
    """Normal form of ``nf * w`` where ``nf`` is already a normal form."""
    out = list(nf)
    for x in w:
        push_letter(g, out, x)
    return tuple(out)


def is_normal_form(g: DefiningGraph, w: Sequence[int]) -> bool:
    n = len(w)
    for i, x in enumerate(w):
        adj = g.adj[x >> 1]
        inv = x ^ 1
        for j in range(i + 1, n):
            y = w[j]
            if y == inv:
                return False
            if y == x or not adj >> (y >> 1) & 1:
                break
    return True


def is_cyclically_reduced(g: DefiningGraph, w: Sequence[int]) -> bool:
    """Every rotation of ``w`` is a normal form (checked rotation by rotation)."""
    w = tuple(w)
    return all(is_normal_form(g, w[i:] + w[:i]) for i in range(max(1, len(w))))


def are_equal(g: DefiningGraph, u: WordLike, v: WordLike) -> bool:
    u, v = as_word(g, u), as_word(g, v)
    return not normalize(g, u + inverse(v))


def shuffle_class(g: DefiningGraph, nf: WordLike, cap: int = SHUFFLE_CAP) -> set[Word]:
    """All words reachable from ``nf`` by swapping adjacent commuting letters."""
    start = as_word(g, nf)
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for i in range(len(w) - 1):
            x, y = w[i], w[i + 1]
            if x >> 1 != y >> 1 and g.adj[x >> 1] >> (y >> 1) & 1:
                s = w[:i] + (y, x) + w[i + 2:]
                if s not in seen:
                    seen.add(s)
                    if len(seen) > cap:
                        raise BudgetExceeded(f"shuffle class larger than {cap}")
                    queue.append(s)
    return seen


def canonical_form(g: DefiningGraph, w: WordLike) -> Word:
    """Lexicographically least member of the shuffle class of ``normalize(w)``."""
    rest = list(normalize(g, w))
    out = []
    while rest:
        best = None
        blocked = 0
        for k, x in enumerate(rest):
            v = x >> 1
            if not blocked >> v & 1 and (best is None or x < rest[best]):
                best = k
            blocked |= ~g.adj[v]
            if blocked & g.full_mask == g.full_mask:
                break
        out.append(rest.pop(best))
    return tuple(out)


def first_letters(g: DefiningGraph, w: Sequence[int]) -> dict[int, int]:
    """Vertex -> position of the letter on it that can be shuffled to the front."""
    found = {}
    blocked = 0
    full = g.full_mask
    for k, x in enumerate(w):
        v = x >> 1
        if not blocked >> v & 1:
            found[v] = k
        blocked |= ~g.adj[v] & full
        if blocked == full:
            break
    return found


def last_letters(g: DefiningGraph, w: Sequence[int]) -> dict[int, int]:
    found = {}
    blocked = 0
    full = g.full_mask
    for k in range(len(w) - 1, -1, -1):
        v = w[k] >> 1
        if not blocked >> v & 1:
            found[v] = k
        blocked |= ~g.adj[v] & full
        if blocked == full:
            break
    return found


@dataclass(frozen=True)
class CyclicNormalForm:
    """``conjugator * core * conjugator^-1`` with ``core`` cyclically reduced."""

    core: Word
    conjugator: Word


def cyclic_reduce(g: DefiningGraph, w: WordLike, normal: bool = False) -> CyclicNormalForm:
    """Peel matching first/last letters; ``normal=True`` skips re-normalizing ``w``."""
    nf = list(w) if normal else list(normalize(g, w))
    conj: list[int] = []
    while len(nf) > 1:
        first = first_letters(g, nf)
        last = last_letters(g, nf)
        hit = None
        for v in sorted(first.keys() & last.keys()):
            i, j = first[v], last[v]
            if nf[i] == nf[j] ^ 1:
                hit = (i, j)
                break
        if hit is None:
            break
        i, j = hit
        conj.append(nf[i])
        del nf[j]
        del nf[i]
    return CyclicNormalForm(tuple(nf), tuple(conj))
