"""Command line front end: ``raagstab <command> ...``.

Exit status: 0 computed, 1 certificate rejected, 2 input or hypothesis
error, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import complexes as cx
from .cosets import CosetTable, compact, enumerate_cosets, table_csv, validate_table
from .deciders import (
    BudgetExhausted, certificate_to_json,
    decide_stability, decide_stability_parallel, semidecide_morse, verify_certificate,
)
from .elements import classify, require_hypotheses, star_length
from .errors import BudgetExceeded, HypothesisError, InputError
from .geometry import stability_probe
from .graph import DefiningGraph, parse_graph, validate_graph
from .words import canonical_form, format_word, normalize, parse_word

EXIT_OK, EXIT_REJECTED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_BUDGET = 10**6


@dataclass
class RunConfig:
    command: str
    graph_path: Optional[str]
    words: list[str]
    budget: int = DEFAULT_BUDGET
    output_format: str = "text"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.budget <= 0:
            raise InputError("budget must be positive")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str) -> DefiningGraph:
    return parse_graph(_read(path))


def _gens(args) -> list[str]:
    words = list(args.gen or [])
    if getattr(args, "gens_file", None):
        words += [ln.split("#", 1)[0].strip() for ln in _read(args.gens_file).splitlines()]
        words = [w for w in words if w]
    if not words:
        raise InputError("no generators given (use -g WORD or --gens-file)")
    return words


class _Out:
    def __init__(self, fmt: str):
        self.fmt = fmt

    def emit(self, report: dict, text: str) -> None:
        if self.fmt == "json":
            print(json.dumps(report, indent=2, sort_keys=True))
        else:
            print(text)


def cmd_check_graph(args, out: _Out) -> int:
    g = _load_graph(args.graph)
    r = validate_graph(g)
    report = {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges],
              "connected": r.connected, "anti_connected": r.anti_connected,
              "satisfies_hypotheses": r.satisfies_hypotheses, "warnings": r.warnings}
    text = (f"{len(g)} vertices, {len(g.edges)} edges\nconnected: {r.connected}\n"
            f"anti-connected: {r.anti_connected}\nhypotheses: {'ok' if r.satisfies_hypotheses else 'FAIL'}")
    text += "".join(f"\nwarning: {w}" for w in r.warnings)
    out.emit(report, text)
    return EXIT_OK if r.satisfies_hypotheses else EXIT_INPUT


def cmd_nf(args, out: _Out) -> int:
    g = _load_graph(args.graph)
    rows = []
    for w in args.word:
        word = parse_word(g, w)
        nf = canonical_form(g, word) if args.canonical else normalize(g, word)
        rows.append({"word": w, "normal_form": format_word(g, nf), "length": len(nf)})
    out.emit({"results": rows}, "\n".join(r["normal_form"] for r in rows))
    return EXIT_OK


def cmd_classify(args, out: _Out) -> int:
    g = _load_graph(args.graph)
    rows = []
    for w in args.word:
        ec = classify(g, parse_word(g, w))
        row = {"word": w, "kind": ec.kind, "core": format_word(g, ec.core),
               "conjugator": format_word(g, ec.conjugator), "witness": None}
        if ec.witness is not None:
            row["witness"] = {"side_a": list(ec.witness.side_a), "side_b": list(ec.witness.side_b)}
        rows.append(row)
    lines = []
    for r in rows:
        extra = ""
        if r["witness"]:
            extra = f"  join {{{' '.join(r['witness']['side_a'])}}} * {{{' '.join(r['witness']['side_b'])}}}"
        lines.append(f"{r['word']}: {r['kind']}{extra}")
    out.emit({"results": rows}, "\n".join(lines))
    return EXIT_OK


def cmd_star_length(args, out: _Out) -> int:
    g = _load_graph(args.graph)
    rows = []
    for w in args.word:
        n, fac = star_length(g, parse_word(g, w), cap=args.budget)
        rows.append({"word": w, "star_length": n,
                     "blocks": [format_word(g, b) for b in fac.blocks], "stars": fac.star_vertices})
    lines = [f"{r['word']}: {r['star_length']}  " + " | ".join(
        f"[{b}]@{v}" for b, v in zip(r["blocks"], r["stars"])) for r in rows]
    out.emit({"results": rows}, "\n".join(lines))
    return EXIT_OK


def _write_cert(args, data: dict) -> None:
    if getattr(args, "cert_out", None):
        Path(args.cert_out).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def cmd_stability(args, out: _Out) -> int:
    g = _load_graph(args.graph)
    gens = _gens(args)
    if args.parallel:
        require_hypotheses(g)
        res = decide_stability_parallel(g, gens, args.budget)
    else:
        res = decide_stability(g, gens, args.budget, strategy=args.strategy)
    if isinstance(res, BudgetExhausted):
        out.emit({"status": "budget_exhausted", "units_used": res.units_used},
                 f"budget_exhausted after {res.units_used} units")
        return EXIT_BUDGET
    cert = certificate_to_json(g, gens, res)
    _write_cert(args, cert)
    out.emit({"status": "decided", "verdict": res.verdict, "certificate": cert},
             f"verdict: {res.verdict}\nevidence: {cert['evidence']['type']}")
    return EXIT_OK


def cmd_morse(args, out: _Out) -> int:
    g = _load_graph(args.graph)
    gens = _gens(args)
    res = semidecide_morse(g, gens, args.budget, strategy=args.strategy)
    if isinstance(res, BudgetExhausted):
        out.emit({"status": "budget_exhausted", "units_used": res.units_used},
                 f"budget_exhausted after {res.units_used} units (no verdict; the search continues on non-Morse input)")
        return EXIT_BUDGET
    cert = certificate_to_json(g, gens, res)
    _write_cert(args, cert)
    text = f"verdict: morse\nroute: {res.route}"
    if res.index is not None:
        text += f"\nindex: {res.index}"
    out.emit({"status": "decided", "verdict": "morse", "route": res.route, "certificate": cert}, text)
    return EXIT_OK


def cmd_cosets(args, out: _Out) -> int:
    g = _load_graph(args.graph)
    gens = _gens(args)
    table = CosetTable.from_json(_read(args.resume)) if args.resume else None
    res = enumerate_cosets(g, [parse_word(g, w) for w in gens], args.budget, table)
    if args.checkpoint:
        Path(args.checkpoint).write_text(res.table.to_json())
    if res.status != "complete":
        out.emit({"status": "budget_exhausted", "definitions": res.table.definitions},
                 f"budget_exhausted after {res.table.definitions} coset definitions")
        return EXIT_BUDGET
    rows = compact(res.table)
    if args.csv:
        Path(args.csv).write_text(table_csv(g, rows))
    ok = validate_table(g, rows, [parse_word(g, w) for w in gens])
    out.emit({"status": "complete", "index": len(rows), "validates": ok, "table": rows},
             f"index: {len(rows)}\nvalidates: {ok}")
    return EXIT_OK


def _germ(g: DefiningGraph, germ: tuple[int, int]) -> str:
    lab, sign = germ
    return g.vertices[lab] + ("" if sign > 0 else "^-1")


def _report_text(g: DefiningGraph, rep: cx.IsometryReport) -> str:
    lines = [f"folded: {rep.folded}", f"passes: {rep.passes}"]
    lines += [f"missing square at vertex {v}: {_germ(g, a)} / {_germ(g, b)}" for v, a, b in rep.missing_squares]
    lines += [f"duplicate square at vertex {v}: {_germ(g, a)} / {_germ(g, b)}" for v, a, b in rep.duplicate_squares]
    lines += [f"invalid square {sq}" for sq in rep.invalid_squares]
    return "\n".join(lines)


def _report_json(rep: cx.IsometryReport) -> dict:
    return {"folded": rep.folded, "passes": rep.passes,
            "missing_squares": [{"vertex": v, "germs": [list(a), list(b)]} for v, a, b in rep.missing_squares],
            "duplicate_squares": [{"vertex": v, "germs": [list(a), list(b)]} for v, a, b in rep.duplicate_squares],
            "invalid_squares": [list(s) for s in rep.invalid_squares]}


def cmd_complex(args, out: _Out) -> int:
    import random

    g = _load_graph(args.graph)
    if args.action == "verify":
        if not args.complex_file:
            raise InputError("complex verify needs --complex FILE")
        c = cx.parse_complex(g, _read(args.complex_file))
        status = "read"
    else:
        words = [parse_word(g, w) for w in _gens(args)]
        rng = random.Random(args.seed) if args.seed else None
        c = cx.fold(cx.rose(g, [w for w in words if w]), rng)
        status = "built"
        if args.action == "saturate":
            require_hypotheses(g)
            c, status = cx.saturate(g, c, args.budget)
    rep = cx.check_local_isometry(g, c)
    text = cx.to_text(g, c)
    if args.output:
        Path(args.output).write_text(text)
    summary = f"{status}: {len(c.vertices)} vertices, {len(c.edges)} edges, {len(c.squares)} squares"
    out.emit({"status": status, "complex": text, "report": _report_json(rep)},
             summary + "\n" + _report_text(g, rep) + ("" if args.output else "\n" + text.rstrip()))
    if status == "budget_exhausted":
        return EXIT_BUDGET
    return EXIT_OK


def cmd_probe(args, out: _Out) -> int:
    g = _load_graph(args.graph)
    gens = _gens(args)
    rep = stability_probe(g, [parse_word(g, w) for w in gens], args.lambda_max, args.epsilon_max,
                          args.delta, max_words=args.max_words, max_letters=args.max_letters)
    lines = [f"HEURISTIC probe (delta assumed {args.delta})"]
    for e in rep.entries:
        lines.append(f"lambda={e.lam} epsilon={e.eps} K={e.constants.K}: {e.status}")
    lines.append(f"first passing pair: {rep.first_pass}")
    out.emit(rep.as_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_verify_cert(args, out: _Out) -> int:
    try:
        data = json.loads(_read(args.cert))
    except json.JSONDecodeError as exc:
        raise InputError(f"certificate is not JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("certificate must be a JSON object")
    g = _load_graph(args.graph) if args.graph else parse_graph(data.get("graph", ""))
    gens = args.gen or data.get("generators")
    if not isinstance(gens, list) or not all(isinstance(w, str) for w in gens):
        raise InputError("certificate generators missing")
    res = verify_certificate(g, [parse_word(g, w) for w in gens], data)
    out.emit({"valid": res.ok, "failure": res.failure},
             "valid" if res.ok else f"REJECTED: {res.failure}")
    return EXIT_OK if res.ok else EXIT_REJECTED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="raagstab", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="work units (default 10^6)")
    p.add_argument("--seed", type=int, default=0, help="fold-order seed for `complex` (0 = fixed order)")
    sub = p.add_subparsers(dest="command", required=True)

    def with_graph(name: str, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.add_argument("graph", help="graph file (vertex/edge lines)")
        return sp

    def with_gens(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("-g", "--gen", action="append", help="generator word, repeatable")
        sp.add_argument("--gens-file", help="one generator word per line")

    with_graph("check-graph", "validate a defining graph").set_defaults(fn=cmd_check_graph)
    sp = with_graph("nf", "normal forms")
    sp.add_argument("word", nargs="+")
    sp.add_argument("--canonical", action="store_true", help="lexicographically least normal form")
    sp.set_defaults(fn=cmd_nf)
    sp = with_graph("classify", "elliptic or loxodromic")
    sp.add_argument("word", nargs="+")
    sp.set_defaults(fn=cmd_classify)
    sp = with_graph("star-length", "star length with a factorization")
    sp.add_argument("word", nargs="+")
    sp.set_defaults(fn=cmd_star_length)
    for name, fn, help in (("stability", cmd_stability, "decide stability"),
                           ("morse", cmd_morse, "semi-decide Morseness")):
        sp = with_graph(name, help)
        with_gens(sp)
        sp.add_argument("--strategy", choices=("saturate", "enumerate"), default="saturate")
        sp.add_argument("--cert-out", help="write the certificate JSON here")
        if name == "stability":
            sp.add_argument("--parallel", action="store_true",
                            help="two OS processes, first verdict wins (not reproducible)")
        sp.set_defaults(fn=fn)
    sp = with_graph("cosets", "Todd-Coxeter coset enumeration")
    with_gens(sp)
    sp.add_argument("--csv", help="write the coset table as CSV")
    sp.add_argument("--checkpoint", help="write the (partial) table state here")
    sp.add_argument("--resume", help="continue from a checkpoint file")
    sp.set_defaults(fn=cmd_cosets)
    sp = with_graph("complex", "build, saturate or verify a labeled square complex")
    sp.add_argument("action", choices=("build", "saturate", "verify"))
    with_gens(sp)
    sp.add_argument("--complex", dest="complex_file", help="complex file for verify")
    sp.add_argument("-o", "--output", help="write the complex here")
    sp.set_defaults(fn=cmd_complex)
    sp = with_graph("probe", "HEURISTIC star-metric quasigeodesic probe")
    with_gens(sp)
    sp.add_argument("--lambda-max", type=int, default=4)
    sp.add_argument("--epsilon-max", type=int, default=4)
    sp.add_argument("--delta", type=float, required=True, help="assumed hyperbolicity constant")
    sp.add_argument("--max-words", type=int, default=300)
    sp.add_argument("--max-letters", type=int, default=60)
    sp.set_defaults(fn=cmd_probe)
    sp = sub.add_parser("verify-cert", help="re-check a certificate")
    sp.add_argument("cert")
    sp.add_argument("--graph", help="graph file (default: the one embedded in the certificate)")
    sp.add_argument("-g", "--gen", action="append", help="generators (default: embedded)")
    sp.set_defaults(fn=cmd_verify_cert)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args.format)
    try:
        RunConfig(args.command, getattr(args, "graph", None), [], args.budget, args.format, args.seed)
        return args.fn(args, out)
    except (InputError, HypothesisError) as exc:
        out.emit({"status": "error", "error": str(exc)}, f"error: {exc}")
        return EXIT_INPUT
    except BudgetExceeded as exc:
        out.emit({"status": "budget_exhausted", "error": str(exc)}, f"budget exhausted: {exc}")
        return EXIT_BUDGET


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
