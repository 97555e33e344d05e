"""Command line entry points: generate, run, inspect, serve.

Exit codes: 0 on success, 2 for usage or configuration problems (including
unreadable or malformed input files), 1 for unexpected runtime failures.
The VSEM_LOG environment variable sets the log level (DEBUG, INFO, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import dataset, snapshot
from .errors import VsemError
from .harness import RunConfig, run_experiment
from .memory import export_hierarchy
from .oracle import DEFAULT_BOOTSTRAP
from .perception import DEFAULT_STRIDE, DEFAULT_WINDOW

log = logging.getLogger("vsem")

DEFAULT_SMOOTHING = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vsem",
                                     description="Incremental visual concept learning: "
                                                 "datasets, experiments, inspection, serving.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic labelled dataset")
    gen.add_argument("--out", required=True, type=Path, help="output directory")
    gen.add_argument("--genera", type=int, default=5)
    gen.add_argument("--instances", type=int, default=2, help="instances per genus")
    gen.add_argument("--with-diff", type=int, default=5,
                     help="sequences per instance that show the discriminative view")
    gen.add_argument("--without-diff", type=int, default=5,
                     help="sequences per instance that do not")
    gen.add_argument("--frames", type=int, default=240, help="frames per sequence")
    gen.add_argument("--dim", type=int, default=16, help="embedding dimension")
    gen.add_argument("--spread", type=float, default=0.2, help="genus view spread")
    gen.add_argument("--offset", type=float, default=6.0, help="differentia offset")
    gen.add_argument("--noise", type=float, default=0.02, help="per-frame noise scale")
    gen.add_argument("--seed", type=int, default=0)

    run = sub.add_parser("run", help="run the shuffled experiment and write curves")
    run.add_argument("--dataset", required=True, type=Path, help="manifest.json path")
    run.add_argument("--alpha", type=float, action="append", required=True,
                     help="supervision rate; repeat the flag for a sweep")
    run.add_argument("--runs", type=int, default=200)
    run.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    run.add_argument("--stride", type=int, default=DEFAULT_STRIDE)
    run.add_argument("--bootstrap", type=int, default=DEFAULT_BOOTSTRAP,
                     help="always-supervised iterations at the start of each run")
    run.add_argument("--smoothing", type=int, default=DEFAULT_SMOOTHING,
                     help="moving-average window for the curves")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--jobs", type=int, default=1, help="worker processes")
    run.add_argument("--out", required=True, type=Path, help="output directory")
    run.add_argument("--no-figures", action="store_true",
                     help="skip rendering PNG figures next to the CSVs")

    ins = sub.add_parser("inspect", help="print the hierarchy stored in a snapshot")
    ins.add_argument("snapshot", type=Path)

    serve = sub.add_parser("serve", help="serve the interactive teaching API over HTTP")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--print-openapi", action="store_true",
                       help="print the OpenAPI schema and exit")
    return parser


def cmd_generate(args: argparse.Namespace) -> int:
    manifest = dataset.generate_synthetic(
        num_genera=args.genera, instances_per_genus=args.instances,
        sequences_with_differentia=args.with_diff,
        sequences_without_differentia=args.without_diff,
        frames_per_sequence=args.frames, dim=args.dim, genus_spread=args.spread,
        differentia_offset=args.offset, noise=args.noise, seed=args.seed,
        out_dir=args.out)
    print(f"wrote {len(manifest.sequences)} sequences to {args.out / 'manifest.json'}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    manifest = dataset.load_manifest(args.dataset)
    args.out.mkdir(parents=True, exist_ok=True)
    curves = []
    for alpha in args.alpha:
        config = RunConfig(alpha=alpha, runs=args.runs, window=args.window,
                           stride=args.stride, bootstrap=args.bootstrap,
                           smoothing=args.smoothing, seed=args.seed)
        log.info("running alpha=%s: %d runs over %d sequences",
                 alpha, config.runs, len(manifest.sequences))
        result = run_experiment(manifest, config, jobs=args.jobs)
        out_path = args.out / f"accuracy_alpha_{alpha:g}.csv"
        result.to_csv(out_path)
        curves.append(result)
        print(f"wrote {out_path}")
    if not args.no_figures:
        from .figures import render_accuracy_figures

        for path in render_accuracy_figures(curves, args.out):
            print(f"wrote {path}")
    return 0


def cmd_inspect(args: argparse.Namespace) -> int:
    memory = snapshot.load(args.snapshot)
    view = export_hierarchy(memory, memory.theta)
    print(f"snapshot: {args.snapshot}")
    print(f"iteration {memory.iteration} | objects {len(memory.objects)} | "
          f"edges {len(memory.sg_edges)} | supervision pairs {len(memory.supervision.pairs)} | "
          f"theta {memory.theta!r}")
    print(view.root)
    for group in view.groups:
        members = ", ".join(str(m) for m in group.members)
        print(f"  group: objects {members} | genus views {len(group.genus)}")
        for member in group.members:
            print(f"    object {member} ({view.object_sizes[member]} visual objects)")
    for oid in view.isolated:
        print(f"  object {oid} ({view.object_sizes[oid]} visual objects)")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import create_app

    app = create_app()
    if args.print_openapi:
        print(json.dumps(app.openapi(), indent=2, sort_keys=True))
        return 0
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "generate": cmd_generate,
    "run": cmd_run,
    "inspect": cmd_inspect,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    level = getattr(logging, os.environ.get("VSEM_LOG", "WARNING").upper(), None)
    logging.basicConfig(level=level if isinstance(level, int) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except VsemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        log.exception("unexpected failure")
        print(f"unexpected failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
