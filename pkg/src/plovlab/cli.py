"""Command-line front end.

Exit status: 0 on success, 1 on input errors (including actions that are
not quasi-unipotent), 2 when a geometric model violates a proven bound.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import gallery
from .exact import format_rational
from .fuzz import random_torus_matrix
from .growth import HilbertRefusal, InfinitePlov, hilbert_degree, hilbert_sequence, oracle_plov, growth_polynomial, write_hilbert_csv
from .io import InputError, load_auto, load_h10, load_model, load_sequences
from .models import ModelError, build_torus
from .report import Analysis, analyze
from .verdict import bound_report


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PLOVLAB_THREADS", "1")))
    except ValueError:
        return 1


def _load_pair(args):
    model, auto = load_model(args.model)
    if args.auto is not None:
        auto = load_auto(args.auto, model)
    if auto is None:
        raise InputError(str(args.model), "--auto", "this model type needs an automorphism file")
    return model, auto


def _emit(analysis: Analysis, report_path: str | None) -> int:
    text = analysis.to_json()
    if report_path:
        Path(report_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for f in analysis.findings:
        print(f, file=sys.stderr)
    return analysis.exit_code


def _run_analysis(model, auto, args, name=None) -> int:
    seqs = []
    for path in args.sequence or ():
        seqs += load_sequences(path, model)
    a = analyze(
        model,
        auto,
        name=name,
        filtration=args.filtration,
        diagnostics=args.diagnostics,
        oracle=args.oracle,
        sequences=seqs,
    )
    return _emit(a, args.report)


def cmd_analyze(args) -> int:
    model, auto = _load_pair(args)
    return _run_analysis(model, auto, args, name=Path(args.model).stem)


def cmd_torus(args) -> int:
    model, auto = load_h10(args.h10_matrix)
    return _run_analysis(model, auto, args, name="torus")


def cmd_gallery(args) -> int:
    if args.action == "list":
        for e in gallery.GALLERY.values():
            exp = ", ".join(f"{k}={v}" for k, v in e.expected.items())
            print(f"{e.name:22s} {exp:40s} {e.citation}")
        return 0
    if args.action == "run":
        if not args.name:
            raise InputError("gallery", "NAME", "gallery run needs an entry name")
        entries = [gallery.get(args.name)]
    else:
        entries = list(gallery.GALLERY.values())

    def one(e):
        model, auto = e.build()
        a = analyze(model, auto, name=e.name, filtration=True, diagnostics=True, oracle=True)
        for key, want in e.expected.items():
            got = a.report.get(key)
            if got != want:
                a.findings.append(f"regression: {e.name}: {key} = {got}, expected {want} ({e.citation})")
        a.report["findings"] = a.findings
        a.report["expected"] = e.expected
        a.report["citation"] = e.citation
        return a

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(one, entries))
    status = 0
    if len(results) == 1:
        return _emit(results[0], args.report)
    combined = {e.name: a.report for e, a in zip(entries, results)}
    text = json.dumps(combined, indent=2) + "\n"
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    for e, a in zip(entries, results):
        mark = "ok" if a.exit_code == 0 else "FAIL"
        print(f"{mark:4s} {e.name:22s} plov={a.report.get('plov')} k={a.report.get('k')} gkdim={a.report.get('gkdim')}")
        for f in a.findings:
            print(f"     {f}", file=sys.stderr)
        status = max(status, a.exit_code)
    return status


def cmd_hilbert(args) -> int:
    model, auto = _load_pair(args)
    try:
        seq = hilbert_sequence(model, auto, args.n_max)
    except HilbertRefusal as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ModelError as exc:
        raise InputError(str(args.model), "type", str(exc)) from None
    if args.csv:
        write_hilbert_csv(seq, args.csv)
    else:
        print("m,dim")
        for m, v in enumerate(seq):
            print(f"{m},{format_rational(v)}")
    if len(seq) > 2:
        print(f"fitted degree of m -> dim B_m: {hilbert_degree(seq)}", file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    model, auto = _load_pair(args)
    closed = growth_polynomial(model, auto)
    poly, agreed = oracle_plov(model, auto, closed_form=closed)
    print(f"closed form:  P(n) = {closed.to_string('n')}")
    print(f"interpolated: P(n) = {poly.to_string('n')}")
    print(f"agreed: {str(agreed).lower()}")
    return 0 if agreed else 2


def cmd_fuzz(args) -> int:
    seeds = [args.seed + i for i in range(args.count)]

    def one(seed):
        A, part = random_torus_matrix(args.dim, seed)
        model, auto = build_torus(A)
        rep = bound_report(model, auto)
        return seed, part, A, rep

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(one, seeds))
    status = 0
    for seed, part, A, rep in results:
        want = sum(x * x for x in part)
        ok = rep.ok and rep.plov == want
        print(
            f"{'ok' if ok else 'FAIL':4s} seed={seed} partition={list(part)} plov={rep.plov} "
            f"sum_k2={want} k={rep.k} A={json.dumps([[format_rational(x) for x in r] for r in A.tolist()])}"
        )
        for f in rep.findings():
            print(f"     {f}", file=sys.stderr)
        if not ok:
            status = 2
    return status


def _analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.add_argument("--filtration", action="store_true", help="canonical quasi-nef sequence and filtration")
    p.add_argument("--diagnostics", action="store_true", help="vanishing diagnostics")
    p.add_argument("--oracle", action="store_true", help="cross-check P(n) by direct sampling")
    p.add_argument("--sequence", action="append", help="extra quasi-nef sequences to filter by (JSON file, repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plovlab", description="Polynomial log-volume growth of automorphism actions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze a model file with an automorphism file")
    p.add_argument("--model", required=True)
    p.add_argument("--auto")
    _analysis_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("torus", help="analyze the torus E^d with a given action on H^(1,0)")
    p.add_argument("--h10-matrix", required=True, help='inline JSON like "[[1,0],[1,1]]" or a file')
    _analysis_flags(p)
    p.set_defaults(func=cmd_torus)

    p = sub.add_parser("gallery", help="built-in models with known invariants")
    p.add_argument("action", choices=["list", "run", "run-all"])
    p.add_argument("name", nargs="?")
    p.add_argument("--report")
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("hilbert", help="dim B_m of the twisted coordinate ring (torus models)")
    p.add_argument("--model", required=True)
    p.add_argument("--auto")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("oracle", help="closed-form P(n) against interpolation of sampled volumes")
    p.add_argument("--model", required=True)
    p.add_argument("--auto")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("fuzz", help="random conjugated block-unipotent torus actions")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfinitePlov as exc:
        print(f"{exc}", file=sys.stderr)
        return 1
    except (InputError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
