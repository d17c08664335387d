"""Local-to-global constants and the star-metric quasigeodesic probe.

Local-to-global constants
-------------------------
``delta`` is the four-point (Gromov product) constant:
``(x|z)_w >= min((x|y)_w, (y|z)_w) - delta``.  Paths are edge paths
``p_0..p_n`` with unit steps.  The constants come from three standard steps.

1. Morse bound.  Iterating the four-point inequality along ``M <= 2^r``
   points gives ``(y_0|y_M)_w >= min_i (y_i|y_{i+1})_w - r*delta``.  Run the
   usual detour argument (Bridson-Haefliger III.H.1.7) for a
   (lam, eps)-quasigeodesic window with that inequality in place of the
   slim-triangle log bound.  The geodesic between the window's ends stays
   within ``D*`` of the window, where ``D*`` is the largest ``D`` with
   ``D <= 1 + delta * ceil(log2(max(2, 2*ceil(D) + lam*(6*D + eps))))``
   (``D* = 0`` when ``delta = 0``: the unit spacing can be refined freely).
   Every window point then lies within ``R = D* + lam*(2*D* + eps)/2`` of
   that geodesic, so each interior Gromov product is at most ``R``.
2. Broken geodesics.  If consecutive sample points ``x_0..x_T`` have
   Gromov products ``<= C`` at interior points, and interior gaps exceed
   ``2C + 2*delta``, then
   ``d(x_0, x_T) >= sum d(x_t, x_{t+1}) - 2(T-1)(C + delta)``.
3. Sampling.  Sample every ``m`` steps with
   ``m = floor(lam*(2R + 2*delta + eps)) + 1``, so each gap is at least
   ``m/lam - eps > 2R + 2*delta``.  Two consecutive gaps fit in one window
   when ``K = 2m``.  Each full gap then gains
   ``g = m/lam - eps - 2R - 2*delta > 0``, which gives
   ``d(p_i, p_j) >= |i-j| * g/m - g*(m-1)/m``.

Hence ``lam' = m/g`` and ``eps' = max(eps, g*(m-1)/m)``.  The upper
quasigeodesic bound is free for unit-step paths since ``lam' >= lam >= 1``.
This is a derivation from textbook ingredients, not a formula quoted from
one source; the test suite checks the contract exhaustively on a tree.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

from .elements import star_length
from .errors import InputError
from .graph import DefiningGraph
from .words import Word, WordLike, as_word, canonical_form, inverse, multiply, normalize

_TOL = 1e-9


@dataclass(frozen=True)
class L2GConstants:
    delta: float
    lam: float
    eps: float
    K: int
    lam_out: float
    eps_out: float
    morse_radius: float = 0.0
    spacing: int = 1

    def as_dict(self) -> dict:
        d = asdict(self)
        d["lambda"], d["epsilon"] = d.pop("lam"), d.pop("eps")
        d["lambda_out"], d["epsilon_out"] = d.pop("lam_out"), d.pop("eps_out")
        return d


def _morse_depth(delta: float, lam: float, eps: float) -> float:
    if delta == 0:
        return 0.0

    def f(d: float) -> float:
        span = max(2.0, 2 * math.ceil(d) + lam * (6 * d + eps))
        return 1 + delta * math.ceil(math.log2(span) - _TOL)

    d = 1e6 * (1 + delta + lam + eps)
    while True:
        nd = f(d)
        if nd >= d:
            return d
        d = nd


def l2g_constants(delta: float, lam: float, eps: float) -> L2GConstants:
    """(K, lam', eps') such that K-local (lam, eps)-quasigeodesics are global (lam', eps') ones."""
    for name, v in (("delta", delta), ("lambda", lam), ("epsilon", eps)):
        if not isinstance(v, (int, float)) or math.isnan(v) or math.isinf(v):
            raise InputError(f"{name} must be a finite number")
    if delta < 0 or lam < 1 or eps < 0:
        raise InputError("need delta >= 0, lambda >= 1, epsilon >= 0")
    d_star = _morse_depth(delta, lam, eps)
    r = d_star + lam * (2 * d_star + eps) / 2
    m = math.floor(lam * (2 * r + 2 * delta + eps)) + 1
    g = m / lam - eps - 2 * r - 2 * delta
    return L2GConstants(
        float(delta), float(lam), float(eps), 2 * m,
        max(float(lam), m / g), max(float(eps), g * (m - 1) / m), r, m,
    )


@dataclass
class QGResult:
    ok: bool
    violation: Optional[tuple[int, int, int]] = None  # (i, j, distance)

    def __bool__(self) -> bool:
        return self.ok


def quasigeodesic_violation(
    n: int, dist: Callable[[int, int], float], lam: float, eps: float, window: Optional[int] = None
) -> Optional[tuple[int, int, float]]:
    """First (i, j, d) with ``|i-j|/lam - eps <= d <= lam|i-j| + eps`` false; pairs within ``window`` only."""
    for i in range(n):
        top = n if window is None else min(n, i + window + 1)
        for j in range(i + 1, top):
            d = dist(i, j)
            k = j - i
            if d < k / lam - eps - _TOL or d > lam * k + eps + _TOL:
                return (i, j, d)
    return None


def _letter_path(g: DefiningGraph, path: Sequence[WordLike]) -> list[Word]:
    pts = [normalize(g, as_word(g, p)) for p in path]
    for k in range(len(pts) - 1):
        if len(normalize(g, inverse(pts[k]) + pts[k + 1])) != 1:
            raise InputError(f"path entries {k} and {k + 1} do not differ by one generator")
    return pts


def is_quasigeodesic_star(g: DefiningGraph, path: Sequence[WordLike], lam: float, eps: float) -> QGResult:
    """Whether ``path`` is a (lam, eps)-quasigeodesic in the star metric."""
    pts = _letter_path(g, path)
    cache: dict[Word, int] = {}

    def dist(i: int, j: int) -> int:
        w = normalize(g, inverse(pts[i]) + pts[j])
        if w not in cache:
            cache[w] = star_length(g, w)[0]
        return cache[w]

    bad = quasigeodesic_violation(len(pts), dist, lam, eps)
    return QGResult(bad is None, bad)


@dataclass
class ProbeEntry:
    lam: int
    eps: int
    constants: L2GConstants
    status: str  # pass | fail | inconclusive
    words_checked: int
    violation: Optional[dict] = None


@dataclass
class ProbeReport:
    delta_assumed: float
    entries: list[ProbeEntry] = field(default_factory=list)
    first_pass: Optional[tuple[int, int]] = None
    label: str = "HEURISTIC"

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "delta_assumed": self.delta_assumed,
            "first_pass": list(self.first_pass) if self.first_pass else None,
            "pairs": [
                {"lambda": e.lam, "epsilon": e.eps, "constants": e.constants.as_dict(),
                 "status": e.status, "words_checked": e.words_checked, "violation": e.violation}
                for e in self.entries
            ],
        }


def _subgroup_ball(g: DefiningGraph, gens: Sequence[Word], radius: int, max_words: int, max_letters: int):
    """One geodesic generator word per element of the radius ball; leaves of the BFS tree.

    Elements whose normal form exceeds ``max_letters`` are not expanded.
    Returns (leaves, complete) where each leaf is (generator word, normal form).
    """
    letters = [(i, s) for i in range(len(gens)) for s in (1, -1)]
    seen = {(): 0}
    queue = deque([((), ())])
    has_child: set = set()
    nodes = []
    complete = True
    while queue:
        word, nf = queue.popleft()
        nodes.append((word, nf))
        if len(word) == radius:
            continue
        if len(nf) > max_letters:
            complete = False
            continue
        for i, s in letters:
            if word and word[-1] == (i, -s):
                continue
            nxt = multiply(g, nf, gens[i] if s > 0 else inverse(gens[i]))
            key = canonical_form(g, nxt)
            if key in seen:
                continue
            if len(seen) >= max_words:
                complete = False
                break
            seen[key] = len(word) + 1
            has_child.add(word)
            queue.append((word + ((i, s),), nxt))
    return [(w, nf) for w, nf in nodes if w and w not in has_child], complete


def stability_probe(
    g: DefiningGraph,
    gens: Sequence[WordLike],
    lambda_max: int,
    epsilon_max: int,
    delta_assumed: float,
    max_words: int = 300,
    max_letters: int = 60,
) -> ProbeReport:
    """HEURISTIC: search for (lam, eps) whose local test certifies quasigeodesic subgroup words.

    For each pair, every subgroup element within generator distance K gets
    one geodesic generator word.  The letter path of its normal form is
    tested as a (lam, eps)-quasigeodesic in the star metric.  If every such
    K-window passes, the local-to-global constants say that the subgroup's
    geodesics are global (lam', eps')-quasigeodesics.  That conclusion holds
    only if ``delta_assumed`` really bounds the star metric's hyperbolicity
    constant, which nothing here computes.
    """
    words = [normalize(g, as_word(g, w)) for w in gens]
    report = ProbeReport(float(delta_assumed))
    if lambda_max < 1 or epsilon_max < 0:
        return report
    pairs = sorted(((l, e) for l in range(1, lambda_max + 1) for e in range(epsilon_max + 1)),
                   key=lambda p: (p[0] + p[1], p[0]))
    cache: dict[Word, int] = {}

    def dstar(w: Word) -> int:
        if w not in cache:
            cache[w] = star_length(g, w)[0]
        return cache[w]

    for lam, eps in pairs:
        const = l2g_constants(delta_assumed, lam, eps)
        leaves, complete = _subgroup_ball(g, words, const.K, max_words, max_letters)
        status, violation, checked = "pass", None, 0
        for word, nf in leaves:
            if len(nf) > max_letters:
                complete = False
                nf = nf[:max_letters]
            checked += 1
            bad = quasigeodesic_violation(len(nf) + 1, lambda i, j: dstar(nf[i:j]), lam, eps)
            if bad is not None:
                i, j, d = bad
                status = "fail"
                violation = {"generator_word": [list(x) for x in word], "i": i, "j": j, "distance": d}
                break
        if status == "pass" and not complete:
            status = "inconclusive"
        report.entries.append(ProbeEntry(lam, eps, const, status, checked, violation))
        if status == "pass" and report.first_pass is None:
            report.first_pass = (lam, eps)
            break
    return report
