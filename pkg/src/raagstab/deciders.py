"""Stability decision and Morse semi-decision with checkable certificates.

Two searches share one deterministic budget:

* side A walks the products of the generators in length-lex order and
  classifies each element; a nontrivial elliptic element ends the run with
  ``not_stable``;
* side B builds candidate complexes, confirms that a candidate's
  fundamental group maps onto exactly the subgroup, and scans its simple
  loops; a clean scan ends the run with ``stable``.

Side A gets 1000 classifications per turn, side B one step.  Every unit of
work costs one budget unit, so a run that stops with ``BudgetExhausted``
resumes bit-for-bit where it left off.
"""
from __future__ import annotations

import json
from collections import deque
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

from . import complexes as cx
from .cosets import CosetTable, compact, enumerate_cosets, validate_table
from .elements import classify_core, require_hypotheses
from .errors import BudgetExceeded, InputError
from .graph import DefiningGraph, JoinCover, is_join_cover, parse_graph
from .words import (
    Word, WordLike, abelianization, are_equal, as_word, canonical_form, cyclic_reduce, format_word,
    inverse, is_cyclically_reduced, multiply, normalize, parse_word, support_mask,
)

SCHEMA = "raag-cert/1"
A_QUANTUM = 1000
PRODUCT_QUANTUM = 1000
SATURATION_STEPS = 256  # then fall back to blind enumeration

Product = tuple[tuple[int, int], ...]  # (generator index, +1/-1) factors


@dataclass
class EllipticWitness:
    product: Product
    word: Word
    core: Word
    conjugator: Word
    cover: JoinCover


@dataclass
class PureComplex:
    complex: cx.LabeledComplex
    generator_traces: list[Word]
    loop_products: dict[int, Product]
    cycles_scanned: int


@dataclass
class TrivialSubgroup:
    pass


@dataclass
class StabilityCertificate:
    verdict: str  # stable | not_stable
    evidence: Union[EllipticWitness, PureComplex, TrivialSubgroup]


@dataclass
class MorseCertificate:
    route: str  # via_stable | via_finite_index
    stability: Optional[StabilityCertificate] = None
    table: Optional[list[list[int]]] = None
    verdict: str = "morse"

    @property
    def index(self) -> Optional[int]:
        return None if self.table is None else len(self.table)


@dataclass
class BudgetExhausted:
    units_used: int
    state: object
    status: str = "budget_exhausted"


def spell(gens: Sequence[Word], product: Product) -> Word:
    out: list[int] = []
    for i, s in product:
        out.extend(gens[i] if s > 0 else inverse(gens[i]))
    return tuple(out)


def elliptic_witness(g: DefiningGraph, product: Product, word: Sequence[int]) -> EllipticWitness:
    """Canonical witness fields: lex-least normal form, its cyclic reduction, the first join cover."""
    word = canonical_form(g, word)
    cf = cyclic_reduce(g, word, normal=True)
    ec = classify_core(g, cf.core, cf.conjugator)
    return EllipticWitness(tuple(product), word, cf.core, cf.conjugator, ec.witness)


def _freely_reduced(p: Product) -> bool:
    return all(p[k + 1] != (p[k][0], -p[k][1]) for k in range(len(p) - 1))


class _ProductSearch:
    """Length-lex products of the generators, indexed by abelianization."""

    def __init__(self, g: DefiningGraph, gens: Sequence[Word]):
        self.g = g
        self.gens = gens
        self.letters = [(i, s) for i in range(len(gens)) for s in (1, -1)]
        self.queue: deque = deque([((), (), (0,) * len(g))])
        self.by_abel: dict[tuple[int, ...], list[tuple[Product, Word]]] = {}

    def step(self, count: int) -> None:
        """Expand the rest of the current length level, at most ``count`` products."""
        level = len(self.queue[0][0])
        for _ in range(count):
            if len(self.queue[0][0]) != level:
                return
            prod, nf, ab = self.queue.popleft()
            self.by_abel.setdefault(ab, []).append((prod, nf))
            for i, s in self.letters:
                if prod and prod[-1] == (i, -s):
                    continue
                w = self.gens[i] if s > 0 else inverse(self.gens[i])
                sign_ab = abelianization(self.g, w)
                self.queue.append((prod + ((i, s),), multiply(self.g, nf, w),
                                   tuple(a + b for a, b in zip(ab, sign_ab))))

    def find(self, w: Word) -> Optional[Product]:
        for prod, nf in self.by_abel.get(abelianization(self.g, w), ()):
            if are_equal(self.g, nf, w):
                return prod
        return None


class _SaturationStream:
    """Fold/square-completion of the rose: yields one candidate when the link condition holds."""

    def __init__(self, g: DefiningGraph, gens: Sequence[Word], max_steps: int = SATURATION_STEPS):
        self.g = g
        self.gens = gens
        self.c = cx.fold(cx.rose(g, [w for w in gens if w]))
        self.done = False
        self.steps = 0
        self.max_steps = max_steps
        self.fallback: Optional[_EnumerationStream] = None
        self.history: list[cx.LabeledComplex] = [self.c]

    def advance(self) -> Optional[cx.LabeledComplex]:
        if self.fallback is not None:
            return self.fallback.advance()
        if self.done:
            return None
        if self.steps >= self.max_steps:
            self.fallback = _EnumerationStream(self.g, self.gens)
            return self.fallback.advance()
        if cx.check_local_isometry(self.g, self.c).passes:
            self.done = True
            return self.c
        self.c = cx.complete_squares_step(self.g, self.c)
        self.steps += 1
        self.history.append(self.c)
        return None


class _EnumerationStream:
    """Blind enumeration of locally isometric folded complexes by vertex count."""

    def __init__(self, g: DefiningGraph, gens: Sequence[Word]):
        self.it = self._all(g)
        self.done = False

    @staticmethod
    def _all(g: DefiningGraph) -> Iterator[cx.LabeledComplex]:
        n = 1
        while True:
            yield from cx.enumerate_complexes_exact(g, n)
            n += 1

    def advance(self) -> Optional[cx.LabeledComplex]:
        return next(self.it)


@dataclass
class _Candidate:
    complex: cx.LabeledComplex
    traces: list[Word]
    loops: list[tuple[int, Word]]
    found: dict[int, Product] = field(default_factory=dict)


class StabilityDecider:
    """Resumable interleaving of the two searches; see the module docstring."""

    def __init__(
        self,
        g: DefiningGraph,
        gens: Sequence[WordLike],
        strategy: str = "saturate",
        sides: str = "AB",
        a_quantum: int = A_QUANTUM,
        cycle_cap: int = cx.CYCLE_CAP,
        keep_history: bool = False,
    ):
        require_hypotheses(g)
        self.g = g
        self.gens = [as_word(g, w) for w in gens]
        if not self.gens:
            raise InputError("need at least one generator")
        self.nfs = [normalize(g, w) for w in self.gens]
        self.used = 0
        self.result: Optional[StabilityCertificate] = None
        self.a_quantum = a_quantum
        self.cycle_cap = cycle_cap
        self.turn = "A" if "A" in sides else "B"
        self.in_turn = 0
        self.sides = sides
        if not any(self.nfs):
            self.result = StabilityCertificate("stable", TrivialSubgroup())
            return
        self.a_queue: deque = deque([((), ())])
        self.letters = [(i, s) for i in range(len(self.gens)) for s in (1, -1)]
        self.b_active = "B" in sides
        self.b_stream = (_SaturationStream if strategy == "saturate" else _EnumerationStream)(g, self.nfs)
        self.keep_history = keep_history
        self.pending: list[_Candidate] = []
        self.products = _ProductSearch(g, self.nfs)
        self.b_nonpure: Optional[cx.ScanResult] = None

    # side A -------------------------------------------------------------
    def _a_step(self) -> None:
        prod, nf = self.a_queue.popleft()
        for i, s in self.letters:
            if prod and prod[-1] == (i, -s):
                continue
            w = self.nfs[i] if s > 0 else inverse(self.nfs[i])
            self.a_queue.append((prod + ((i, s),), multiply(self.g, nf, w)))
        if not prod:
            return
        cf = cyclic_reduce(self.g, nf, normal=True)
        ec = classify_core(self.g, cf.core, cf.conjugator)
        if ec.kind == "elliptic":
            self.result = StabilityCertificate("not_stable", elliptic_witness(self.g, prod, nf))

    # side B -------------------------------------------------------------
    def _b_step(self) -> None:
        g = self.g
        cand = self.b_stream.advance()
        if cand is not None:
            cand = cx.canonical_relabel(cand)
            traces = [cx.loop_trace(g, cand, w) for w in self.nfs]
            if all(t is not None for t in traces):
                self.pending.append(_Candidate(cand, traces, cx.basis_loops(cand)))
        if any(len(c.found) < len(c.loops) for c in self.pending):
            if not self.products.by_abel:
                self.products.step(1)
            for c in self.pending:
                self._resolve(c)
            if any(len(c.found) < len(c.loops) for c in self.pending):
                self.products.step(PRODUCT_QUANTUM)
        for c in self.pending:
            self._resolve(c)
            if len(c.found) == len(c.loops):
                try:
                    scan = cx.purely_loxodromic_scan(g, c.complex, self.cycle_cap)
                except BudgetExceeded:
                    # too many cycles to certify; drop this candidate
                    self.pending.remove(c)
                    return
                if scan.pure:
                    self.result = StabilityCertificate(
                        "stable", PureComplex(c.complex, c.traces, dict(c.found), scan.cycles_scanned)
                    )
                else:
                    # the subgroup has a nontrivial elliptic element; side A will find it
                    self.b_nonpure = scan
                    self.b_active = False
                return

    def _resolve(self, c: _Candidate) -> None:
        for e, w in c.loops:
            if e not in c.found:
                prod = self.products.find(w)
                if prod is not None:
                    c.found[e] = prod

    def run(self, budget: int) -> Union[StabilityCertificate, BudgetExhausted]:
        while self.result is None:
            if self.used >= budget:
                return BudgetExhausted(self.used, self)
            if self.turn == "A":
                self._a_step()
                self.used += 1
                self.in_turn += 1
                if self.in_turn >= self.a_quantum and self.b_active:
                    self.turn, self.in_turn = "B", 0
            else:
                if self.b_active:
                    self._b_step()
                    self.used += 1
                if "A" in self.sides:
                    self.turn = "A"
                elif not self.b_active:
                    return BudgetExhausted(self.used, self)
        return self.result


def decide_stability(
    g: DefiningGraph,
    gens: Sequence[WordLike],
    budget: int = 10**6,
    state: Optional[StabilityDecider] = None,
    **options,
) -> Union[StabilityCertificate, BudgetExhausted]:
    """Decide whether ``<gens>`` is stable; resume by passing a previous ``state``."""
    decider = state if state is not None else StabilityDecider(g, gens, **options)
    return decider.run(budget)


def _one_side(graph_text: str, gens: list[str], budget: int, sides: str):
    g = parse_graph(graph_text)
    out = decide_stability(g, [parse_word(g, w) for w in gens], budget, sides=sides)
    if isinstance(out, BudgetExhausted):
        return None
    return certificate_to_json(g, [parse_word(g, w) for w in gens], out)


def decide_stability_parallel(g: DefiningGraph, gens: Sequence[WordLike], budget: int = 10**6):
    """Run the two sides in separate processes; first verdict wins.  Not reproducible."""
    words = [format_word(g, as_word(g, w)) for w in gens]
    with ProcessPoolExecutor(max_workers=2) as pool:
        futures = [pool.submit(_one_side, g.to_text(), words, budget, s) for s in ("A", "B")]
        pending = set(futures)
        while pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for f in done:
                data = f.result()
                if data is not None:
                    for p in pending:
                        p.cancel()
                    return certificate_from_json(g, data)
    return BudgetExhausted(budget, None)


@dataclass
class _MorseState:
    decider: StabilityDecider
    stability: Optional[StabilityCertificate] = None
    table: Optional[CosetTable] = None


def semidecide_morse(
    g: DefiningGraph,
    gens: Sequence[WordLike],
    budget: int = 10**6,
    state: Optional[_MorseState] = None,
    **options,
) -> Union[MorseCertificate, BudgetExhausted]:
    """Morse iff stable or of finite index: decide stability, then enumerate cosets.

    Runs forever (here: until the budget) on non-Morse subgroups.
    """
    if state is None:
        state = _MorseState(StabilityDecider(g, gens, **options))
    if state.stability is None:
        out = state.decider.run(budget)
        if isinstance(out, BudgetExhausted):
            return BudgetExhausted(out.units_used, state)
        state.stability = out
    if state.stability.verdict == "stable":
        return MorseCertificate("via_stable", stability=state.stability)
    used = state.decider.used
    defined = state.table.definitions if state.table is not None else 0
    res = enumerate_cosets(g, state.decider.gens, max(0, budget - used), state.table)
    state.table = res.table
    if res.status == "complete":
        return MorseCertificate("via_finite_index", table=compact(res.table))
    return BudgetExhausted(used + res.table.definitions, state)


# certificates -----------------------------------------------------------

def _product_json(p: Product) -> list[list[int]]:
    return [[i, s] for i, s in p]


def _stability_json(g: DefiningGraph, cert: StabilityCertificate) -> dict:
    ev = cert.evidence
    if isinstance(ev, TrivialSubgroup):
        evidence = {"type": "trivial_subgroup"}
    elif isinstance(ev, EllipticWitness):
        evidence = {
            "type": "elliptic_witness",
            "product": _product_json(ev.product),
            "word": format_word(g, ev.word),
            "core": format_word(g, ev.core),
            "conjugator": format_word(g, ev.conjugator),
            "cover": {"side_a": list(ev.cover.side_a), "side_b": list(ev.cover.side_b)},
        }
    else:
        evidence = {
            "type": "pure_complex",
            "complex": cx.to_text(g, ev.complex),
            "generator_traces": [format_word(g, w) for w in ev.generator_traces],
            "loop_products": [
                {"edge": e, "product": _product_json(p)}
                for e, p in sorted(ev.loop_products.items())
            ],
            "cycles_scanned": ev.cycles_scanned,
        }
    return {"verdict": cert.verdict, "evidence": evidence}


def certificate_to_json(
    g: DefiningGraph, gens: Sequence[WordLike], cert: Union[StabilityCertificate, MorseCertificate]
) -> dict:
    head = {
        "schema": SCHEMA,
        "graph": g.to_text(),
        "generators": [format_word(g, as_word(g, w)) for w in gens],
    }
    if isinstance(cert, StabilityCertificate):
        return {**head, "kind": "stability", **_stability_json(g, cert)}
    body = {"kind": "morse", "verdict": cert.verdict, "route": cert.route}
    if cert.route == "via_stable":
        body["stability"] = _stability_json(g, cert.stability)
    else:
        body["index"] = len(cert.table)
        body["table"] = cert.table
    return {**head, **body}


def _need(d: dict, key: str, kind: type):
    if not isinstance(d, dict) or key not in d or not isinstance(d[key], kind) or (
        kind is int and isinstance(d[key], bool)
    ):
        raise InputError(f"certificate field {key!r} missing or not {kind.__name__}")
    return d[key]


def _product_from_json(data, ngens: int) -> Product:
    if not isinstance(data, list):
        raise InputError("product must be a list")
    out = []
    for item in data:
        if (not isinstance(item, list) or len(item) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)):
            raise InputError("product factor must be [index, sign]")
        i, s = item
        if not 0 <= i < ngens or s not in (1, -1):
            raise InputError("product factor out of range")
        out.append((i, s))
    return tuple(out)


def _stability_from_json(g: DefiningGraph, d: dict, ngens: int) -> StabilityCertificate:
    verdict = _need(d, "verdict", str)
    ev = _need(d, "evidence", dict)
    kind = _need(ev, "type", str)
    if kind == "trivial_subgroup":
        if set(ev) != {"type"}:
            raise InputError("unexpected evidence fields")
        return StabilityCertificate(verdict, TrivialSubgroup())
    if kind == "elliptic_witness":
        if set(ev) != {"type", "product", "word", "core", "conjugator", "cover"}:
            raise InputError("unexpected evidence fields")
        cover = _need(ev, "cover", dict)
        if set(cover) != {"side_a", "side_b"}:
            raise InputError("unexpected cover fields")
        sides = []
        for key in ("side_a", "side_b"):
            side = _need(cover, key, list)
            if not all(isinstance(v, str) for v in side):
                raise InputError("cover sides must list vertex names")
            sides.append(tuple(side))
        return StabilityCertificate(verdict, EllipticWitness(
            _product_from_json(ev["product"], ngens),
            parse_word(g, _need(ev, "word", str)),
            parse_word(g, _need(ev, "core", str)),
            parse_word(g, _need(ev, "conjugator", str)),
            JoinCover(*sides),
        ))
    if kind == "pure_complex":
        if set(ev) != {"type", "complex", "generator_traces", "loop_products", "cycles_scanned"}:
            raise InputError("unexpected evidence fields")
        c = cx.parse_complex(g, _need(ev, "complex", str))
        traces = _need(ev, "generator_traces", list)
        if not all(isinstance(t, str) for t in traces):
            raise InputError("traces must be words")
        loops: dict[int, Product] = {}
        for item in _need(ev, "loop_products", list):
            if not isinstance(item, dict) or set(item) != {"edge", "product"}:
                raise InputError("bad loop product entry")
            e = _need(item, "edge", int)
            if e in loops:
                raise InputError("repeated loop product edge")
            loops[e] = _product_from_json(item["product"], ngens)
        return StabilityCertificate(verdict, PureComplex(
            c, [parse_word(g, t) for t in traces], loops, _need(ev, "cycles_scanned", int)
        ))
    raise InputError(f"unknown evidence type {kind!r}")


def certificate_from_json(g: DefiningGraph, data: dict) -> Union[StabilityCertificate, MorseCertificate]:
    if not isinstance(data, dict) or data.get("schema") != SCHEMA:
        raise InputError("not a raag-cert/1 certificate")
    gens = _need(data, "generators", list)
    kind = _need(data, "kind", str)
    if kind == "stability":
        if set(data) != {"schema", "graph", "generators", "kind", "verdict", "evidence"}:
            raise InputError("unexpected certificate fields")
        return _stability_from_json(g, data, len(gens))
    if kind == "morse":
        route = _need(data, "route", str)
        if _need(data, "verdict", str) != "morse":
            raise InputError("morse certificate must have verdict morse")
        if route == "via_stable":
            if set(data) != {"schema", "graph", "generators", "kind", "verdict", "route", "stability"}:
                raise InputError("unexpected certificate fields")
            return MorseCertificate(route, stability=_stability_from_json(g, _need(data, "stability", dict), len(gens)))
        if route == "via_finite_index":
            if set(data) != {"schema", "graph", "generators", "kind", "verdict", "route", "index", "table"}:
                raise InputError("unexpected certificate fields")
            table = _need(data, "table", list)
            if not all(isinstance(r, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in r) for r in table):
                raise InputError("table rows must be integer lists")
            if _need(data, "index", int) != len(table):
                raise InputError("index does not match table size")
            return MorseCertificate(route, table=table)
        raise InputError(f"unknown route {route!r}")
    raise InputError(f"unknown certificate kind {kind!r}")


@dataclass
class Verification:
    ok: bool
    failure: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _check_stability(g: DefiningGraph, gens: list[Word], cert: StabilityCertificate) -> Verification:
    ev = cert.evidence
    if isinstance(ev, TrivialSubgroup):
        if cert.verdict != "stable":
            return Verification(False, "trivial subgroup evidence must claim stable")
        if any(normalize(g, w) for w in gens):
            return Verification(False, "a generator is nontrivial")
        return Verification(True)
    if isinstance(ev, EllipticWitness):
        if cert.verdict != "not_stable":
            return Verification(False, "elliptic witness must claim not_stable")
        if not ev.product or not _freely_reduced(ev.product):
            return Verification(False, "witness product empty or not freely reduced")
        if not are_equal(g, spell(gens, ev.product), ev.word):
            return Verification(False, "witness word differs from the product")
        if not ev.core or not is_cyclically_reduced(g, ev.core):
            return Verification(False, "core is not a nonempty cyclically reduced normal form")
        if not are_equal(g, ev.conjugator + ev.core + inverse(ev.conjugator), ev.word):
            return Verification(False, "conjugator * core * conjugator^-1 differs from the witness")
        if not is_join_cover(g, ev.cover):
            return Verification(False, "cover is not a join")
        if support_mask(ev.core) & ~g.mask(ev.cover.vertices()):
            return Verification(False, "core support not inside the cover")
        expect = elliptic_witness(g, ev.product, normalize(g, spell(gens, ev.product)))
        if (ev.word, ev.core, ev.conjugator, ev.cover) != (expect.word, expect.core, expect.conjugator, expect.cover):
            return Verification(False, "witness fields are not in canonical form")
        return Verification(True)
    if cert.verdict != "stable":
        return Verification(False, "complex evidence must claim stable")
    c = ev.complex
    if cx.to_text(g, cx.canonical_relabel(c)) != cx.to_text(g, c):
        return Verification(False, "complex is not canonically numbered")
    report = cx.check_local_isometry(g, c)
    if not report.passes:
        return Verification(False, f"link condition fails: {report}")
    if len(ev.generator_traces) != len(gens):
        return Verification(False, "one trace per generator required")
    for w, t in zip(gens, ev.generator_traces):
        if not are_equal(g, w, t):
            return Verification(False, "trace word differs from its generator")
        path = cx.trace_word(c, t)
        if path is None or path.vertices[-1] != c.basepoint:
            return Verification(False, "generator trace is not a loop at the basepoint")
        if t != cx.loop_trace(g, c, w):
            return Verification(False, "generator trace is not the canonical one")
    loops = cx.basis_loops(c)
    if {e for e, _ in loops} != set(ev.loop_products):
        return Verification(False, "loop products do not match the non-tree edges")
    for e, w in loops:
        if not _freely_reduced(ev.loop_products[e]):
            return Verification(False, f"loop product at edge {e} is not freely reduced")
        if not are_equal(g, w, spell(gens, ev.loop_products[e])):
            return Verification(False, f"basis loop at edge {e} is not the claimed product")
    scan = cx.purely_loxodromic_scan(g, c)
    if not scan.pure:
        return Verification(False, "a simple loop reads a nontrivial join word")
    if scan.cycles_scanned != ev.cycles_scanned:
        return Verification(False, "cycle count mismatch")
    return Verification(True)


def verify_certificate(
    g: DefiningGraph,
    gens: Sequence[WordLike],
    cert: Union[StabilityCertificate, MorseCertificate, dict],
) -> Verification:
    """Re-derive every claim of a certificate; JSON dicts are parsed first.

    Malformed input raises InputError; a well-formed certificate whose
    evidence does not check returns a falsy Verification naming the failure.
    """
    words = [as_word(g, w) for w in gens]
    if isinstance(cert, dict):
        if cert.get("generators") != [format_word(g, w) for w in words]:
            return Verification(False, "certificate generators differ")
        try:
            same_graph = parse_graph(_need(cert, "graph", str)) == g
        except InputError:
            same_graph = False
        if not same_graph:
            return Verification(False, "certificate graph differs")
        cert = certificate_from_json(g, cert)
    if isinstance(cert, MorseCertificate):
        if cert.verdict != "morse":
            return Verification(False, "verdict must be morse")
        if cert.route == "via_stable":
            if cert.stability is None or cert.stability.verdict != "stable":
                return Verification(False, "via_stable needs a stable certificate")
            return _check_stability(g, words, cert.stability)
        if cert.table is None or not validate_table(g, cert.table, words):
            return Verification(False, "coset table does not validate")
        return Verification(True)
    return _check_stability(g, words, cert)


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True)
