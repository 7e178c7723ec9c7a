"""Command line driver for the embedding pipeline.

Three subcommands cover the batch workflow: `build` constructs the base and
twisted embeddings and writes them as PD-code files with a JSON metadata
sidecar, `report` evaluates the invariant suite over every cycle and emits
CSV and JSON artifacts, and `export-links` writes the associated links of
every (cycle, annulus) pair plus the three generic form templates for
external verification tools.

Exit codes are stable: 0 success, 2 invalid arguments, 3 I/O failure,
4 parse failure.  Progress goes to standard error, data to files and
standard output.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .construction import (
    ConstructionParams,
    TwistedEmbedding,
    assemble_gamma2,
    build_embedding,
    build_link_L,
    decompose_cycle,
    link_template,
)
from .diagrams import validate
from .errors import ConstructionError, ParseError
from .graphs import complete_graph, enumerate_cycles
from .pdcode import read_pd_file, write_pd
from .report import (
    DEFAULT_BUDGET,
    build_report,
    cycle_name,
    report_csv,
    report_json,
)

BASE_PD = "embedding_base.pd"
TWISTED_PD = "embedding_twisted.pd"
META_JSON = "construction.json"
META_VERSION = "hkf-construction/1"


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hkf",
        description="Spatial embeddings of complete graphs with exact knot invariants.",
    )
    ap.add_argument("--version", action="version", version="hkf %s" % __version__)
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct the base and twisted embeddings")
    b.add_argument("--n", type=int, default=5, help="vertex count, odd, at least 3")
    b.add_argument("--r", type=int, default=1, help="belt twist parameter, at least 1")
    b.add_argument("--q", type=int, default=1, help="filling twist parameter")
    b.add_argument("--out", default=".", help="output directory")
    b.set_defaults(func=cmd_build)

    r = sub.add_parser("report", help="invariant report over every cycle")
    r.add_argument(
        "path",
        nargs="?",
        default=".",
        help="build output directory or the twisted embedding PD file",
    )
    r.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    r.add_argument(
        "--budget", type=int, default=DEFAULT_BUDGET, help="simplification move budget"
    )
    r.add_argument(
        "--seed",
        type=int,
        default=None,
        help="reserved for fuzz tooling; no report stage is randomized",
    )
    r.add_argument("--out", default=None, help="output directory (default: input dir)")
    r.set_defaults(func=cmd_report)

    e = sub.add_parser(
        "export-links",
        help="write associated-link PD files for every (cycle, annulus) pair",
    )
    e.add_argument("--n", type=int, default=5, help="vertex count, odd, at least 3")
    e.add_argument("--r", type=int, default=1, help="belt twist parameter, at least 1")
    e.add_argument("--q", type=int, default=1, help="accepted for symmetry; links do not depend on q")
    e.add_argument("--out", default="links", help="output directory")
    e.set_defaults(func=cmd_export_links)
    return ap


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_build(args) -> int:
    params = ConstructionParams(args.n, args.r, args.q)
    gamma1 = build_embedding(params)
    gamma2 = assemble_gamma2(gamma1)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / BASE_PD).write_text(write_pd(gamma1.diagram))
    (out / TWISTED_PD).write_text(write_pd(gamma2.diagram))
    meta = {
        "version": META_VERSION,
        "params": {"n": params.n, "r": params.r, "q": params.q},
        "crossings": {
            "gamma1": len(gamma1.diagram.crossings),
            "gamma2": len(gamma2.diagram.crossings),
        },
        "edge_arcs": {
            "%d-%d" % e: sorted(arcs) for e, arcs in sorted(gamma2.edge_arcs.items())
        },
    }
    (out / META_JSON).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    _note(
        "built n=%d r=%d q=%d: %s (%d crossings), %s (%d crossings)"
        % (
            params.n,
            params.r,
            params.q,
            out / BASE_PD,
            len(gamma1.diagram.crossings),
            out / TWISTED_PD,
            len(gamma2.diagram.crossings),
        )
    )
    return 0


def _load_build(path: Path):
    if not path.exists():
        raise FileNotFoundError("report input not found: %s" % path)
    if path.is_dir():
        in_dir, pd_path = path, path / TWISTED_PD
    else:
        in_dir, pd_path = path.parent, path
    meta_path = in_dir / META_JSON
    try:
        meta = json.loads(meta_path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError("%s: line %d: %s" % (meta_path, exc.lineno, exc.msg)) from None
    if meta.get("version") != META_VERSION:
        raise ParseError("%s: unsupported metadata version %r" % (meta_path, meta.get("version")))
    diagram = read_pd_file(pd_path)
    problems = validate(diagram)
    if problems:
        raise ParseError("%s: diagram fails validation: %s" % (pd_path, problems[0]))
    params = ConstructionParams(**meta["params"])
    if len(diagram.crossings) != meta["crossings"]["gamma2"]:
        raise ParseError(
            "%s: crossing count %d does not match metadata %d"
            % (pd_path, len(diagram.crossings), meta["crossings"]["gamma2"])
        )
    gamma1 = build_embedding(params)
    edge_arcs = {
        tuple(int(v) for v in key.split("-")): frozenset(arcs)
        for key, arcs in meta["edge_arcs"].items()
    }
    return in_dir, gamma1, TwistedEmbedding(diagram, params, edge_arcs, gamma1)


def cmd_report(args) -> int:
    in_dir, gamma1, gamma2 = _load_build(Path(args.path))
    if args.jobs < 1:
        raise ConstructionError("invalid-params: --jobs must be at least 1")
    if args.budget < 0:
        raise ConstructionError("invalid-params: --budget must be nonnegative")
    cache_dir = os.environ.get("HKF_CACHE_DIR")
    rep = build_report(
        gamma1,
        gamma2,
        budget=args.budget,
        jobs=args.jobs,
        cache_dir=cache_dir,
        progress=_note,
    )
    out = Path(args.out) if args.out is not None else in_dir
    out.mkdir(parents=True, exist_ok=True)
    csv_text = report_csv(rep)
    (out / "report.csv").write_text(csv_text)
    (out / "report.json").write_text(report_json(rep))
    sys.stdout.write(csv_text)
    _note("report: %d rows -> %s" % (len(rep.rows), out / "report.csv"))
    return 0


def cmd_export_links(args) -> int:
    params = ConstructionParams(args.n, args.r, args.q)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for form in "abc":
        link = link_template(form)
        text = "# generic form-%s associated link template\n" % form
        (out / ("template-%s.pd" % form)).write_text(text + write_pd(link.diagram))
    gamma1 = build_embedding(params)
    count = 0
    for kappa in sorted(enumerate_cycles(complete_graph(params.n))):
        dec = decompose_cycle(gamma1, kappa)
        for i in range(1, params.n + 1):
            link = build_link_L(dec, i)
            head = [
                "# cycle %s annulus %d form %s" % (cycle_name(kappa), i, link.variant)
            ]
            if link.multiples:
                head.append(
                    "# twist multiples %s"
                    % " ".join("%s:%d" % (k, link.multiples[k]) for k in sorted(link.multiples))
                )
            name = "cycle-%s-W%d-%s.pd" % (cycle_name(kappa), i, link.variant)
            (out / name).write_text("\n".join(head) + "\n" + write_pd(link.diagram))
            count += 1
    _note("exported %d links and 3 templates -> %s" % (count, out))
    return 0


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print("hkf: parse error: %s" % exc, file=sys.stderr)
        return 4
    except ConstructionError as exc:
        msg = str(exc)
        print("hkf: %s" % msg, file=sys.stderr)
        if msg.startswith("invalid-params") or msg.startswith("unknown-cycle"):
            return 2
        return 4
    except OSError as exc:
        print("hkf: i/o error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
