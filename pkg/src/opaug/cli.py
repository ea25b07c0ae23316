"""Command-line interface.

Exit codes: 0 success, 1 verification failed, 2 input not outerplanar,
3 input disconnected, 4 parse or usage error, 5 size guard exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile

from .decomposition import (
    format_path_decomposition,
    parse_path_decomposition,
    parse_tree_decomposition,
    validate_path_decomposition,
    validate_tree_decomposition,
)
from .embed import check_outerplanar
from .errors import (
    DisconnectedGraphError,
    GraphParseError,
    GraphValidationError,
    NotOuterplanarError,
    SizeGuardError,
)
from .generate import ATTACH_MODES, GenSpec, generate
from .graph import Graph, format_graph, parse_graph
from .oracles import SUBDIVISION_LIMIT, exact_pathwidth, forbidden_subdivision_search
from .pipeline import augment, format_trace
from .verify import verify_pipeline

EXIT_OK, EXIT_VERIFY, EXIT_NOT_OUTERPLANAR, EXIT_DISCONNECTED, EXIT_PARSE, EXIT_SIZE = range(6)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory and rename over the target."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".opaug-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load_graph(path: str) -> Graph:
    return parse_graph(_read(path))


def _emit(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        write_atomic(path, text)


def _witness_text(g: Graph) -> str:
    if g.n > SUBDIVISION_LIMIT:
        return "no witness: graph too large for the subdivision search"
    w = forbidden_subdivision_search(g)
    if w is None:
        return "no witness found"
    lines = [f"witness {w['kind']} branch " + " ".join(map(str, w["branch"]))]
    lines += ["path " + " ".join(map(str, p)) for p in w["paths"]]
    return "\n".join(lines)


def _not_outerplanar(g: Graph, exc: NotOuterplanarError) -> int:
    print(f"error: {exc}", file=sys.stderr)
    print(_witness_text(g), file=sys.stderr)
    return EXIT_NOT_OUTERPLANAR


def cmd_augment(args) -> int:
    g = _load_graph(args.input)
    try:
        res = augment(g)
    except NotOuterplanarError as exc:
        return _not_outerplanar(g, exc)
    trace = format_trace(res)
    outputs = [(args.output, format_graph(res.g_final))]
    if args.emit_decomposition:
        outputs.append((args.emit_decomposition, format_path_decomposition(res.pd_final)))
    if args.trace:
        outputs.append((args.trace, trace))
    if args.report:
        report = verify_pipeline(g, trace)
        report.timings.update(res.timings)
        outputs.append((args.report, report.to_text(timings=args.timings)))
        if not report.ok:
            for path, text in outputs:
                _emit(path, text)
            print("error: pipeline verification failed", file=sys.stderr)
            return EXIT_VERIFY
    for path, text in outputs:
        _emit(path, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    if args.decomposition:
        text = _read(args.decomposition)
        if any(line.startswith("node ") for line in text.splitlines()):
            verdict = validate_tree_decomposition(g, parse_tree_decomposition(text))
        else:
            verdict = validate_path_decomposition(g, parse_path_decomposition(text))
        if verdict.ok:
            print("valid=yes")
            return EXIT_OK
        print(f"valid=no\ncondition={verdict.condition}\nwitness={verdict.witness}\nmessage={verdict.message}")
        return EXIT_VERIFY
    if args.trace:
        final = _load_graph(args.final_graph) if args.final_graph else None
        pd = parse_path_decomposition(_read(args.final_decomposition)) if args.final_decomposition else None
        report = verify_pipeline(g, _read(args.trace), final_graph=final, final_pd=pd)
        sys.stdout.write(report.to_text(timings=args.timings))
        if report.verdicts.get("connected") is False:
            return EXIT_DISCONNECTED
        if report.verdicts.get("outerplanar_input") is False:
            return EXIT_NOT_OUTERPLANAR
        return EXIT_OK if report.ok else EXIT_VERIFY
    cert = check_outerplanar(g)
    if cert.verdict:
        print("outerplanar=yes")
        return EXIT_OK
    print("outerplanar=no")
    print(_witness_text(g), file=sys.stderr)
    return EXIT_NOT_OUTERPLANAR


def cmd_decompose(args) -> int:
    from .embed import rooted_block_tree
    from .stage1 import run_stage1

    g = _load_graph(args.graph)
    try:
        bt = rooted_block_tree(g)
    except NotOuterplanarError as exc:
        return _not_outerplanar(g, exc)
    s1 = run_stage1(g, bt)
    _emit(args.output, format_path_decomposition(s1.pd))
    if args.sequence:
        lines = [
            f"block {b} attach {bt.attach[b]} first {bt.first[b]} last {bt.last[b]} seq {s}"
            for b, s in sorted(s1.npd.sequence.items())
        ]
        write_atomic(args.sequence, "".join(line + "\n" for line in lines))
    return EXIT_OK


def cmd_pathwidth(args) -> int:
    g = _load_graph(args.graph)
    if args.exact:
        print(exact_pathwidth(g))
        return EXIT_OK
    from .embed import rooted_block_tree
    from .stage1 import run_stage1

    try:
        bt = rooted_block_tree(g)
    except NotOuterplanarError as exc:
        return _not_outerplanar(g, exc)
    print(run_stage1(g, bt).pd.width)
    return EXIT_OK


def cmd_gen(args) -> int:
    for name in ("chord_density", "block_bias"):
        if not 0.0 <= getattr(args, name) <= 1.0:
            raise _UsageError(f"--{name.replace('_', '-')} must lie in [0, 1]")
    spec = GenSpec(
        seed=args.seed,
        n=args.n,
        block_count_bias=args.block_bias,
        chord_density=args.chord_density,
        max_block_size=args.max_block,
        attach_mode=args.attach,
    )
    _emit(args.output, format_graph(generate(spec)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opaug", description="Biconnect outerplanar graphs while keeping pathwidth small.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("augment", help="run the three-stage augmentation")
    a.add_argument("input")
    a.add_argument("output")
    a.add_argument("--emit-decomposition", metavar="PATH")
    a.add_argument("--trace", metavar="PATH")
    a.add_argument("--report", metavar="PATH")
    a.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    a.set_defaults(func=cmd_augment)

    v = sub.add_parser("verify", help="validate a decomposition or replay a trace")
    v.add_argument("graph")
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--decomposition", metavar="PATH")
    mode.add_argument("--trace", metavar="PATH")
    mode.add_argument("--outerplanar", action="store_true", help="only test outerplanarity (default)")
    v.add_argument("--final-graph", metavar="PATH", help="with --trace: also compare the augmented graph")
    v.add_argument("--final-decomposition", metavar="PATH", help="with --trace: also compare the final decomposition")
    v.add_argument("--timings", action="store_true")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", help="emit the stage-1 nice path decomposition")
    d.add_argument("graph")
    d.add_argument("-o", "--output", metavar="PATH")
    d.add_argument("--sequence", metavar="PATH", help="sidecar with per-block sequence numbers")
    d.set_defaults(func=cmd_decompose)

    w = sub.add_parser("pathwidth", help="exact pathwidth or the stage-1 upper bound")
    w.add_argument("graph")
    w.add_argument("--exact", action="store_true")
    w.set_defaults(func=cmd_pathwidth)

    gen = sub.add_parser("gen", help="generate a connected outerplanar graph")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--chord-density", type=float, default=0.5)
    gen.add_argument("--max-block", type=int, default=8)
    gen.add_argument("--block-bias", type=float, default=0.5)
    gen.add_argument("--attach", choices=ATTACH_MODES, default="uniform")
    gen.add_argument("-o", "--output", metavar="PATH")
    gen.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (GraphParseError, GraphValidationError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DisconnectedGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
