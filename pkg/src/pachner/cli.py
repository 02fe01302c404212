"""Command-line interface: ``pachner <command> ...``.

Exit codes: 0 success, 1 usage error, 2 signature parse error, 3 search
budget exhausted (a partial report is still printed).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import graphs
from .census import UNPROVEN, BudgetExceeded, enumerate_census, simplify, write_signatures
from .homology import homology_h1
from .isosig import SignatureError, decode, isosig
from .triangulation import Triangulation, is_orientable, validate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_PARTIAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; 2 is reserved for parse errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {v}")
    return v


def _non_negative(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {v}")
    return v


def _fmt_num(x):
    if x is None:
        return None
    if x == graphs.INF:
        return "inf"
    return x


def _emit(args, data, text_lines):
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        for line in text_lines:
            print(line)


def _read_lines(source):
    """(line number, stripped text) for non-blank lines of a file or stdin."""
    if source in (None, "-"):
        lines = sys.stdin.read().splitlines()
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc}")
    return [(i, ln.strip()) for i, ln in enumerate(lines, 1) if ln.strip()]


def _read_node_set(source):
    sigs = []
    for lineno, text in _read_lines(source):
        try:
            sigs.append(isosig(decode(text)))
        except SignatureError as exc:
            raise SignatureError(f"line {lineno}: {exc}")
    if not sigs:
        raise UsageError("empty node set")
    return sigs


# -- census -------------------------------------------------------------------


def cmd_census(args):
    cs = enumerate_census(args.size, one_vertex=args.one_vertex, s3_only=args.s3_only,
                          threads=args.threads, budget=args.budget_nodes)
    sigs = cs.signatures
    if args.output:
        write_signatures(args.output, sigs)
    else:
        for s in sigs:
            print(s)
    counts = cs.counts()
    unproven = sum(1 for e in cs.entries.values() if e.s3 is UNPROVEN)
    report = {"n": args.size, "one_vertex_filter": args.one_vertex, "s3_filter": args.s3_only,
              **counts, "unproven": unproven}
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = "n={}  {}\n".format(args.size, "  ".join(f"{k}={v}" for k, v in counts.items()))
        if unproven:
            text += f"unproven 3-sphere tags: {unproven}\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stderr.write(text)
    return EXIT_PARTIAL if unproven else EXIT_OK


# -- signatures ---------------------------------------------------------------


def _parse_gluing_line(text):
    # "n  t f t' p  t f t' p ..." with p a permutation index 0..23.
    try:
        nums = [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise SignatureError("gluing records must be integers")
    if not nums or (len(nums) - 1) % 4:
        raise SignatureError("expected a size followed by groups of four integers")
    n = nums[0]
    recs = [tuple(nums[k:k + 4]) for k in range(1, len(nums), 4)]
    for t, f, t2, p in recs:
        if not (0 <= t < n and 0 <= t2 < n and 0 <= f < 4 and 0 <= p < 24):
            raise SignatureError(f"gluing record out of range: {t} {f} {t2} {p}")
    try:
        return Triangulation.from_gluings(n, recs)
    except ValueError as exc:
        raise SignatureError(str(exc))


def describe(sig: str, tri: Triangulation) -> dict:
    report = validate(tri)
    out = {
        "signature": sig,
        "size": tri.size,
        "vertices": tri.skeleton.num_vertices,
        "valid": report.is_closed_3_manifold,
        "closed": tri.is_closed(),
    }
    if report.is_closed_3_manifold:
        out["orientable"] = is_orientable(tri)
        out["h1"] = str(homology_h1(tri))
    return out


def _describe_text(d):
    words = [f"size {d['size']}", f"{d['vertices']} vertices" if d["vertices"] != 1 else "1 vertex"]
    if d["valid"]:
        words.append("valid closed 3-manifold")
        words.append("orientable" if d["orientable"] else "non-orientable")
        words.append(f"H1 = {d['h1']}")
    else:
        words.append("not a valid closed 3-manifold")
    return f"{d['signature']}: " + ", ".join(words)


def cmd_sig(args):
    items = [(i, s) for i, s in enumerate(args.values, 1)] if args.values else _read_lines(args.input)
    results, errors = [], 0
    for lineno, text in items:
        try:
            if args.action == "encode":
                tri = _parse_gluing_line(text)
                results.append(isosig(tri))
            elif args.action == "canonical":
                results.append(isosig(decode(text)))
            else:
                results.append(describe(text, decode(text)))
        except SignatureError as exc:
            errors += 1
            print(f"line {lineno}: parse error: {exc}", file=sys.stderr)
        except ValueError as exc:
            errors += 1
            print(f"line {lineno}: {exc}", file=sys.stderr)
    if args.action == "decode":
        _emit(args, results, [_describe_text(d) for d in results])
    else:
        _emit(args, results, results)
    return EXIT_PARSE if errors else EXIT_OK


# -- simplification -----------------------------------------------------------


def cmd_simplify(args):
    out, status = [], EXIT_OK
    for sig in args.values:
        try:
            tri = decode(sig)
        except SignatureError as exc:
            print(f"{sig}: parse error: {exc}", file=sys.stderr)
            status = EXIT_PARSE
            continue
        try:
            end, moves, sigs = simplify(tri, budget=args.budget_nodes)
        except BudgetExceeded as exc:
            print(f"{sig}: {exc}", file=sys.stderr)
            status = max(status, EXIT_PARTIAL)
            continue
        out.append({
            "start": sig,
            "end": isosig(end),
            "size": end.size,
            "moves": [{"kind": m.kind, "locus": m.locus, "variant": m.variant, "signature": s}
                      for m, s in zip(moves, sigs)],
        })
    lines = []
    for r in out:
        lines.append(f"{r['start']} -> {r['end']} (size {r['size']}, {len(r['moves'])} moves)")
        for m in r["moves"]:
            lines.append(f"  {m['kind']} {m['locus']}/{m['variant']} -> {m['signature']}")
    _emit(args, out, lines)
    return status


# -- graph searches -----------------------------------------------------------


def cmd_height(args):
    nodes = _read_node_set(args.input)
    if args.two_phase:
        res = graphs.height_bound_two_phase(nodes, args.budget_nodes, args.threads)
    else:
        res = graphs.height_bound(nodes, args.budget_nodes, args.threads, args.max_height)
    data = {
        "level": res.level,
        "H": res.bound,
        "tight": res.tight,
        "trace": res.trace,
        "nodes_per_level": {str(k): v for k, v in res.nodes_per_level.items()},
        "partial": res.partial,
    }
    trace = " -> ".join(str(c) for c in res.trace)
    lines = [
        f"level {res.level}: {len(set(nodes))} nodes",
        f"H = {res.bound if res.bound is not None else 'no result'}" + (" (tight)" if res.tight else ""),
        f"components: {trace}",
        "stored nodes: " + "  ".join(f"{k}:{v}" for k, v in res.nodes_per_level.items()),
    ]
    if res.partial:
        lines.append("partial: node budget or height limit reached")
    _emit(args, data, lines)
    return EXIT_PARTIAL if res.partial else EXIT_OK


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _ceil2(num: int, den: int) -> str:
    # Averages are upper bounds, so round up to two decimals.
    hundredths = -(-100 * num // den)
    return f"{hundredths // 100}.{hundredths % 100:02d}"


def cmd_length(args):
    nodes = _read_node_set(args.input)
    res = graphs.length_bound(nodes, args.budget_nodes, args.threads)
    num, den = res.average_parts
    data = {
        "level": res.level,
        "L": _fmt_num(res.bound),
        "histogram": {str(k): v for k, v in res.histogram.items()},
        "sources": res.sources,
        "total": res.total,
        "missing": res.missing,
        "average_bound": f"{num}/{den}",
        "average_value": _ceil2(num, den) if den else None,
        "phi": _frac(res.phi) if res.total else None,
        "partial": res.partial,
    }
    lines = [
        f"level {res.level}: {res.total} nodes, {res.sources} with a 3-2 move (phi = {data['phi']})",
        f"L = {_fmt_num(res.bound)}",
        "steps: " + "  ".join(f"{k}:{v}" for k, v in res.histogram.items()),
    ]
    if res.missing:
        lines.append(f"unreached: {res.missing}")
    if den and not res.missing:
        lines.append(f"average bound = {num}/{den} <= {_ceil2(num, den)}")
    if res.partial:
        lines.append("partial: node budget reached")
    _emit(args, data, lines)
    return EXIT_PARTIAL if res.partial else EXIT_OK


def cmd_minjoin(args):
    nodes = _read_node_set(args.input)
    h = graphs.min_height(nodes, args.budget_nodes, args.threads, args.max_height)
    partial = h.partial
    ecc = {}
    l_min = None
    if not partial:
        m = graphs.min_length(nodes, args.budget_nodes, args.threads)
        partial = m.partial
        ecc, l_min = m.eccentricities, m.l_min
    data = {
        "level": h.level,
        "H_min": h.h_min,
        "L_min": _fmt_num(l_min),
        "trace": h.trace,
        "eccentricities": {k: _fmt_num(v) for k, v in ecc.items()},
        "partial": partial,
    }
    lines = [
        f"level {h.level}: {len(set(nodes))} nodes",
        f"H_min = {h.h_min if h.h_min is not None else 'no result'}",
        f"L_min = {_fmt_num(l_min) if l_min is not None else 'no result'}",
        "components: " + " -> ".join(str(c) for c in h.trace),
    ]
    lines += [f"  {k}: {_fmt_num(v)}" for k, v in ecc.items()]
    if partial:
        lines.append("partial: node budget or height limit reached")
    _emit(args, data, lines)
    return EXIT_PARTIAL if partial else EXIT_OK


def cmd_path(args):
    try:
        a, b = isosig(decode(args.start)), isosig(decode(args.end))
    except SignatureError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        path = graphs.find_path(a, b, args.cap, args.budget_nodes, args.threads)
    except BudgetExceeded as exc:
        print(f"{exc}; no path found so far", file=sys.stderr)
        return EXIT_PARTIAL
    if path is None:
        _emit(args, {"start": a, "end": b, "cap": args.cap, "moves": None},
              [f"no path from {a} to {b} within height cap {args.cap}"])
        return EXIT_OK
    path.replay()
    moves = [{"kind": m.kind, "locus": m.locus, "variant": m.variant, "signature": s}
             for m, s in zip(path.moves, path.signatures)]
    lines = [f"{a} -> {b}: {len(moves)} moves (replayed)"]
    lines += [f"  {m['kind']} {m['locus']}/{m['variant']} -> {m['signature']}" for m in moves]
    _emit(args, {"start": a, "end": b, "cap": args.cap, "moves": moves}, lines)
    return EXIT_OK


def cmd_classes(args):
    nodes = _read_node_set(args.input)
    classes = graphs.connectivity_classes(nodes, args.cap, args.budget_nodes, args.threads)
    lines = [" ".join(c) for c in classes]
    _emit(args, {"cap": args.cap, "classes": list(classes), "partial": classes.partial}, lines)
    return EXIT_PARTIAL if classes.partial else EXIT_OK


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive, default=1, help="worker threads")
    common.add_argument("--budget-nodes", type=_positive, default=graphs.DEFAULT_BUDGET,
                        help="maximum number of stored triangulations per search")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = _Parser(prog="pachner", description="Triangulations, Pachner moves and Pachner graph searches.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("census", parents=[common], help="enumerate closed triangulations of one size")
    c.add_argument("--size", type=_positive, required=True)
    c.add_argument("--one-vertex", action="store_true")
    c.add_argument("--s3-only", action="store_true")
    c.add_argument("--output", "-o", help="signature file (default: stdout)")
    c.add_argument("--report", help="counts report file (default: stderr)")
    c.set_defaults(func=cmd_census)

    s = sub.add_parser("sig", parents=[common], help="encode, decode or canonicalise signatures")
    s.add_argument("action", choices=("encode", "decode", "canonical"))
    s.add_argument("values", nargs="*", help="inputs (default: one per line from --input or stdin)")
    s.add_argument("--input", "-i")
    s.set_defaults(func=cmd_sig)

    m = sub.add_parser("simplify", parents=[common], help="reduce triangulations as far as possible")
    m.add_argument("values", nargs="+")
    m.set_defaults(func=cmd_simplify)

    for name, func, helptext in (("height", cmd_height, "height bound for a level set"),
                                 ("length", cmd_length, "length bound for a level set"),
                                 ("minjoin", cmd_minjoin, "minimal height and length joining a base set"),
                                 ("classes", cmd_classes, "partition a level set by bounded-height connectivity")):
        g = sub.add_parser(name, parents=[common], help=helptext)
        g.add_argument("input", nargs="?", default="-", help="signature file (default: stdin)")
        if name in ("height", "minjoin"):
            g.add_argument("--max-height", type=_non_negative)
        if name == "height":
            g.add_argument("--two-phase", action="store_true",
                           help="join level n + 1 with flips instead of storing level n + 2")
        if name == "classes":
            g.add_argument("--cap", type=_non_negative, required=True)
        g.set_defaults(func=func)

    q = sub.add_parser("path", parents=[common], help="find and replay a 2-3 / 3-2 path")
    q.add_argument("start")
    q.add_argument("end")
    q.add_argument("--cap", type=_non_negative, required=True)
    q.set_defaults(func=cmd_path)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pachner: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SignatureError as exc:
        print(f"pachner: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"pachner: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
