"""Command-line frontend.

Every command prints one JSON run report on stdout and logs to stderr.
Exit codes: 0 ok, 1 refused or failed, 2 violation (a result that would
contradict one of the theorems the engine relies on), 3 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import __version__
from .coloring import (
    DensityRefusal,
    ExtensionFailure,
    FormatError,
    ListTooSmall,
    TooLarge,
    chi_a_bruteforce,
    coloring_from_json,
    color_graph,
    list_size_bound,
    lists_from_json,
    read_json,
    uniform_lists,
    verify_coloring,
)
from .density import FOUR_NEGATIVE, LinearityParams, is_linear
from .embedding import (
    DrawingFormatError,
    InvalidDrawing,
    check_bounds,
    generate_one_planar,
    read_drawing,
    validate_drawing,
    write_drawing,
)
from .generators import FAMILIES, drawing_corpus, lemma_corpus, theorem_corpus
from .graph import Graph, GraphError, read_edge_list, write_edge_list
from .structure import LemmaViolation, discharging_audit, find_reducible

log = logging.getLogger("acyclic_choice")

EXIT = {"ok": 0, "refused": 1, "failed": 1, "violation": 2}
USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


class Run:
    """Accumulates one run report."""

    def __init__(self, command: str):
        self.command = command
        self.digest = hashlib.sha256()
        self.timings: dict[str, float] = {}
        self.artifacts: list[str] = []
        self.result: dict = {}
        self.outcome = "ok"

    def feed(self, path: Path) -> bytes:
        data = Path(path).read_bytes()
        self.digest.update(data)
        return data

    def timed(self, label: str, fn: Callable, *args, **kwargs):
        start = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        finally:
            self.timings[label] = round((time.perf_counter() - start) * 1000, 3)

    def report(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.digest.hexdigest(),
            "outcome": self.outcome,
            "timings_ms": self.timings,
            "artifacts": self.artifacts,
            "result": self.result,
        }


def _graph(run: Run, path: str) -> Graph:
    run.feed(Path(path))
    return read_edge_list(path)


def _dump(obj: dict, path: Path) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n", encoding="utf-8")


# -- commands ------------------------------------------------------------------------


def cmd_gen(args, run: Run) -> None:
    run.digest.update(f"{args.family}:{args.n}:{args.count}:{args.seed}:{args.max_n}".encode())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    items = []
    if args.family == "drawing":
        source = (
            drawing_corpus(args.count, args.seed, args.max_n)
            if args.n is None
            else ((f"drawing-n{args.n}-s{args.seed + i}", generate_one_planar(args.n, args.seed + i)) for i in range(args.count))
        )
        for name, d in source:
            path = out / f"{name}.json"
            write_drawing(d, path)
            run.artifacts.append(str(path))
            items.append({"name": name, "n": d.n, "m": len(d.edges), "crossings": d.crossing_count})
    else:
        if args.family == "theorem":
            source = ((i.name, i.graph) for i in theorem_corpus(args.count, args.seed, args.max_n))
        elif args.family == "lemma":
            source = ((i.name, i.graph) for i in lemma_corpus(args.count, args.seed, args.max_n))
        else:
            if args.n is None:
                raise UsageError(f"--n is required for family {args.family}")
            make = FAMILIES[args.family]
            source = ((f"{args.family}-n{args.n}-s{args.seed + i}", make(args.n, args.seed + i)) for i in range(args.count))
        for name, g in source:
            path = out / f"{name}.txt"
            write_edge_list(g, path, comment=name)
            run.artifacts.append(str(path))
            items.append({"name": name, "n": g.n, "m": g.m, "max_degree": g.max_degree()})
    run.result = {"family": args.family, "count": len(items), "instances": items}


def cmd_density(args, run: Run) -> None:
    g = _graph(run, args.graph)
    try:
        params = LinearityParams(Fraction(args.alpha), args.beta)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --alpha/--beta: {exc}") from None
    cert = run.timed("density", is_linear, g, params)
    run.result = cert.to_json()
    run.outcome = "ok" if cert.verdict else "refused"


def cmd_validate(args, run: Run) -> None:
    run.feed(Path(args.drawing))
    d = read_drawing(args.drawing)
    issues = validate_drawing(d)
    run.result = {"valid": not issues, "issues": [{"code": i.code, "message": i.message} for i in issues]}
    run.outcome = "ok" if not issues else "failed"


def cmd_bounds(args, run: Run) -> None:
    run.feed(Path(args.drawing))
    d = read_drawing(args.drawing)
    report = run.timed("bounds", check_bounds, d)
    run.result = report.to_json()
    if not report.crossing_ok or report.edge_ok is False:
        run.outcome = "violation"


def cmd_find_config(args, run: Run) -> None:
    g = _graph(run, args.graph)
    r = run.timed("scan", find_reducible, g)
    run.result = {"reducible": None if r is None else r.to_json()}


def cmd_audit(args, run: Run) -> None:
    g = _graph(run, args.graph)
    audit = run.timed("audit", discharging_audit, g)
    run.result = audit.to_json()


def cmd_color(args, run: Run) -> None:
    g = _graph(run, args.graph)
    if args.lists:
        run.feed(Path(args.lists))
        lists = lists_from_json(read_json(args.lists), g)
    else:
        run.digest.update(f"k={args.k}".encode())
        lists = uniform_lists(g, args.k)
    bound = list_size_bound(g.max_degree())
    run.result = {"n": g.n, "m": g.m, "max_degree": g.max_degree(), "list_bound": bound, "min_list": lists.min_size()}
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ListTooSmall)
            coloring = run.timed("color", color_graph, g, lists)
        for w in caught:
            log.warning("%s", w.message)
    except DensityRefusal as exc:
        run.outcome = "refused"
        run.result["certificate"] = exc.certificate.to_json()
        return
    except (ExtensionFailure, LemmaViolation) as exc:
        below = lists.min_size() < bound
        run.outcome = "failed" if below and isinstance(exc, ExtensionFailure) else "violation"
        run.result["error"] = str(exc)
        run.result["failure"] = exc.report
        if args.failure_out:
            _dump(exc.report, Path(args.failure_out))
            run.artifacts.append(args.failure_out)
        return
    check = run.timed("verify", verify_coloring, g, coloring)
    if not check.ok:
        run.outcome = "violation"
        run.result["verify"] = check.to_json()
        return
    run.result["colors_used"] = coloring.num_colors()
    run.result["verify"] = check.to_json()
    run.result["coloring"] = coloring.to_json()
    if args.out:
        _dump(coloring.to_json(), Path(args.out))
        run.artifacts.append(args.out)


def cmd_verify(args, run: Run) -> None:
    g = _graph(run, args.graph)
    run.feed(Path(args.coloring))
    coloring = coloring_from_json(read_json(args.coloring))
    report = run.timed("verify", verify_coloring, g, coloring)
    run.result = report.to_json()
    run.outcome = "ok" if report.ok else "failed"


def cmd_chi_a(args, run: Run) -> None:
    g = _graph(run, args.graph)
    res = run.timed("search", chi_a_bruteforce, g, args.k_max)
    run.result = {
        "chi_a": res.value,
        "exceeded": res.exceeded,
        "k_max": res.k_max,
        "coloring": None if res.coloring is None else res.coloring.to_json(),
    }
    if res.exceeded:
        run.outcome = "failed"


def _bench_one(item: tuple[str, str, str]) -> dict:
    name, digest, text = item
    from .graph import parse_edge_list

    g = parse_edge_list(text, source=name)
    row = {"name": name, "digest": digest, "n": g.n, "m": g.m, "max_degree": g.max_degree()}
    row["list_size"] = list_size_bound(row["max_degree"])
    t0 = time.perf_counter()
    cert = is_linear(g, FOUR_NEGATIVE)
    t1 = time.perf_counter()
    row["certify_ms"] = round((t1 - t0) * 1000, 3)
    row["colors_used"] = 0
    row["color_ms"] = row["verify_ms"] = 0.0
    if not cert.verdict:
        row["outcome"] = "refused"
        return row
    try:
        c = color_graph(g, certify=False)
    except (ExtensionFailure, LemmaViolation):
        row["outcome"] = "violation"
        return row
    t2 = time.perf_counter()
    ok = verify_coloring(g, c).ok
    t3 = time.perf_counter()
    row.update(
        colors_used=c.num_colors(),
        color_ms=round((t2 - t1) * 1000, 3),
        verify_ms=round((t3 - t2) * 1000, 3),
        outcome="ok" if ok else "violation",
    )
    return row


BENCH_COLUMNS = [
    "digest", "name", "n", "m", "max_degree", "list_size", "colors_used",
    "outcome", "certify_ms", "color_ms", "verify_ms",
]


def cmd_bench(args, run: Run) -> None:
    from .graph import format_edge_list

    items = []
    if args.corpus:
        for path in sorted(Path(args.corpus).glob("*.txt")):
            data = run.feed(path)
            items.append((path.stem, hashlib.sha256(data).hexdigest()[:16], data.decode("utf-8")))
    else:
        if args.seed is None:
            raise UsageError("bench needs --corpus DIR or --seed")
        run.digest.update(f"theorem:{args.count}:{args.seed}:{args.max_n}".encode())
        for inst in theorem_corpus(args.count, args.seed, args.max_n):
            text = format_edge_list(inst.graph)
            items.append((inst.name, hashlib.sha256(text.encode()).hexdigest()[:16], text))
    start = time.perf_counter()
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_one, items, chunksize=4))
    else:
        rows = [_bench_one(i) for i in items]
    run.timings["bench"] = round((time.perf_counter() - start) * 1000, 3)
    rows.sort(key=lambda r: (r["digest"], r["name"]))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = out / "bench.tsv"
    with table.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS, delimiter="\t", extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
    run.artifacts.append(str(table))
    if not args.no_figures:
        from .plotting import render_bench

        run.artifacts.extend(str(p) for p in render_bench(rows, out))
    counts: dict[str, int] = {}
    for r in rows:
        counts[r["outcome"]] = counts.get(r["outcome"], 0) + 1
    run.result = {
        "instances": len(rows),
        "outcomes": dict(sorted(counts.items())),
        "max_colors_over_bound": max((r["colors_used"] - r["list_size"] for r in rows if r["outcome"] == "ok"), default=None),
    }
    run.timings["color_total"] = round(sum(r["color_ms"] for r in rows), 3)
    for r in rows:
        log.info("%s\t%s\t%s\t%.1f ms", r["name"], r["outcome"], r["colors_used"], r["color_ms"])
    if counts.get("violation"):
        run.outcome = "violation"
    elif counts.get("refused"):
        run.outcome = "refused"


# -- wiring ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="acyclic-choice", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a seeded corpus of graphs or drawings")
    g.add_argument("--family", required=True, choices=sorted(FAMILIES) + ["drawing", "theorem", "lemma"])
    g.add_argument("--n", type=int, help="vertex count (per-instance sizes are random if omitted for corpora)")
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--max-n", type=int, default=150)
    g.add_argument("--out", required=True, help="output directory")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("density", help="certify (alpha, beta)-linearity")
    d.add_argument("graph")
    d.add_argument("--alpha", required=True, help="rational, e.g. 4 or 3/2")
    d.add_argument("--beta", required=True, type=int)
    d.set_defaults(func=cmd_density)

    v = sub.add_parser("validate", help="validate a drawing JSON file")
    v.add_argument("drawing")
    v.set_defaults(func=cmd_validate)

    b = sub.add_parser("bounds", help="crossing and edge bounds of a drawing")
    b.add_argument("drawing")
    b.set_defaults(func=cmd_bounds)

    f = sub.add_parser("find-config", help="first reducible configuration")
    f.add_argument("graph")
    f.set_defaults(func=cmd_find_config)

    a = sub.add_parser("audit", help="discharging ledger")
    a.add_argument("graph")
    a.set_defaults(func=cmd_audit)

    c = sub.add_parser("color", help="acyclic edge list-coloring")
    c.add_argument("graph")
    lists = c.add_mutually_exclusive_group()
    lists.add_argument("--k", type=int, help="uniform lists {0..k-1} (default 3*Delta+70)")
    lists.add_argument("--lists", help="list assignment JSON file")
    c.add_argument("--out", help="write the coloring JSON here")
    c.add_argument("--failure-out", help="write a failure report here")
    c.set_defaults(func=cmd_color)

    vf = sub.add_parser("verify", help="check a coloring")
    vf.add_argument("graph")
    vf.add_argument("coloring")
    vf.set_defaults(func=cmd_verify)

    x = sub.add_parser("chi-a", help="exact acyclic chromatic index (at most 20 edges)")
    x.add_argument("graph")
    x.add_argument("--k-max", type=int)
    x.set_defaults(func=cmd_chi_a)

    bn = sub.add_parser("bench", help="certify, color and verify a corpus; write a table and figures")
    bn.add_argument("--corpus", help="directory of edge-list .txt files")
    bn.add_argument("--count", type=int, default=50)
    bn.add_argument("--seed", type=int)
    bn.add_argument("--max-n", type=int, default=150)
    bn.add_argument("--jobs", type=int, default=1)
    bn.add_argument("--out", default="bench-out")
    bn.add_argument("--no-figures", action="store_true")
    bn.set_defaults(func=cmd_bench)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
    r = Run(args.command)
    try:
        args.func(args, r)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return USAGE
    except (GraphError, DrawingFormatError, FormatError, InvalidDrawing, TooLarge, OSError, ValueError) as exc:
        r.outcome = "failed"
        r.result = {"error": str(exc)}
        log.error("%s", exc)
    json.dump(r.report(), sys.stdout, sort_keys=True, indent=1)
    sys.stdout.write("\n")
    return EXIT[r.outcome]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
