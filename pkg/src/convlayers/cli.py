"""Command-line entry point: generate, peel, sweep, verify, fit.

Exit codes: 0 success, 1 a verification check failed, 2 usage or
validation error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import metadata
from pathlib import Path

import numpy as np

from . import analysis, verify
from .constructions import KINDS, ConstructionSpec, ThresholdError, build
from .formats import (FormatError, SweepRow, dump_json, format_sweep, parse_sweep,
                      read_pset, write_layers, write_pset)
from .geom import EPS_GEOM, GeometryError, min_distance
from .peeling import peel

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover - source checkout
        return "0+unknown"


def write_manifest(out_path, args: argparse.Namespace, spec: dict | None = None,
                   inputs: list | None = None, outputs: list | None = None) -> Path:
    """Write ``<out_path>.manifest.json`` describing how the output was made."""
    path = Path(str(out_path) + ".manifest.json")
    dump_json(path, {
        "command": [Path(sys.argv[0]).name] + sys.argv[1:],
        "subcommand": args.command,
        "spec": spec,
        "inputs": [str(p) for p in inputs or []],
        "outputs": [str(p) for p in outputs or [out_path]],
        "seed": getattr(args, "seed", None),
        "eps": getattr(args, "eps", None),
        "version": _version(),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    })
    return path


# --- commands ------------------------------------------------------------------

def cmd_generate(args) -> int:
    spec = ConstructionSpec(args.kind, args.dim, args.n, args.seed)
    try:
        X, extra = build(spec)
    except ThresholdError as err:
        print(f"error: {err}; minimal admissible n is {err.min_n}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out)
    write_pset(out, X)
    outputs = [out]
    if extra is not None:
        side = out.with_suffix(out.suffix + ".json")
        dump_json(side, extra.to_json() if hasattr(extra, "to_json") else extra)
        outputs.append(side)
    write_manifest(out, args, spec.to_json(), outputs=outputs)
    print(f"wrote {len(X)} points to {out}")
    return EXIT_OK


def cmd_peel(args) -> int:
    X = read_pset(args.input)
    n = len(X)
    if n == 0:
        print("n=0 L=0 max_layer=0 mu=inf")
        return EXIT_OK
    layering = peel(X, args.eps)
    out = Path(args.out) if args.out else Path(str(args.input) + ".layers")
    write_layers(out, layering.layers, n)
    write_manifest(out, args, inputs=[args.input])
    mu = min_distance(X) if n > 1 else math.inf
    print(f"n={n} L={layering.count} max_layer={max(layering.sizes)} mu={mu:.6g}")
    return EXIT_OK


def _sweep_row(job) -> SweepRow:
    kind, dim, size, seed, eps = job
    try:
        spec = ConstructionSpec(kind, dim, size, seed)
        return analysis.measure(spec, eps).to_row()
    except GeometryError as err:
        return SweepRow(kind, dim, size, seed, 0, math.nan, -1, 0, 0.0,
                        note=str(err).replace(",", ";"))


def run_sweep(kind: str, dim: int, sizes, seeds, eps: float = EPS_GEOM,
              jobs: int = 1) -> list[SweepRow]:
    """One row per (size, seed), sorted by (size, seed); refusals get layers = -1."""
    work = [(kind, dim, s, seed, eps) for s in sorted(set(sizes)) for seed in sorted(set(seeds))]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, work))
    else:
        rows = [_sweep_row(w) for w in work]
    return sorted(rows, key=lambda r: (r.size_param, r.seed))


def _fit_rows(rows: list[SweepRow], discard: float) -> analysis.FitResult:
    return analysis.fit_exponent([(r.n, r.layers) for r in rows if r.layers > 0], discard)


def cmd_sweep(args) -> int:
    if not args.sizes:
        print("error: empty sizes list", file=sys.stderr)
        return EXIT_USAGE
    seeds = args.seeds if args.seeds else [args.seed]
    rows = run_sweep(args.kind, args.dim, args.sizes, seeds, args.eps, args.jobs)
    out = Path(args.out)
    out.write_text(format_sweep(rows), newline="\n")
    outputs = [out]
    good = [r for r in rows if r.layers > 0]
    if args.loglog:
        text = "".join(f"{math.log(r.n):.12g} {math.log(r.layers):.12g}\n" for r in good)
        Path(args.loglog).write_text("log_n log_L\n" + text, newline="\n")
        outputs.append(Path(args.loglog))
    if args.plot:
        from .plotting import plot_sweep

        fit = None
        if len({r.size_param for r in good}) >= 3:
            fit = _fit_rows(good, args.discard)
        plot_sweep(rows, args.plot, fit, title=f"{args.kind} d={args.dim}")
        outputs.append(Path(args.plot))
    write_manifest(out, args, {"kind": args.kind, "dim": args.dim, "sizes": args.sizes,
                               "seeds": seeds}, outputs=outputs)
    refused = len(rows) - len(good)
    print(f"wrote {len(rows)} rows to {out}" + (f" ({refused} refused)" if refused else ""))
    return EXIT_OK


def cmd_verify(args) -> int:
    suite = args.suite
    if suite == "nets":
        report = verify.nets_suite(args.dim, args.delta or [0.3, 0.2, 0.1], args.seed)
    elif suite == "tangent":
        report = verify.tangent_suite(args.dim, args.delta or [0.3, 0.2, 0.1], args.seed)
    elif suite == "push":
        dims = [args.dim] if args.dim_given else [2, 3, 4]
        report = verify.push_suite(dims, args.random, args.seed)
    elif suite == "shells":
        report = verify.shells_suite(args.dim, args.n, args.seed, args.eps)
    else:
        if args.input:
            rows = parse_sweep(Path(args.input).read_text())
        else:
            if not args.sizes:
                print("error: bounds needs --input or --sizes", file=sys.stderr)
                return EXIT_USAGE
            rows = run_sweep(args.kind, args.dim, args.sizes, args.seeds or [args.seed],
                             args.eps, args.jobs)
        records = [analysis.SweepRecord.from_row(r) for r in rows if r.layers > 0]
        if not records:
            print("error: no usable sweep rows", file=sys.stderr)
            return EXIT_USAGE
        report = verify.band_report(records)
    text = json.dumps(report, indent=2, default=_jsonable)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
        write_manifest(args.out, args, {"suite": suite})
    return EXIT_OK if report["pass"] else EXIT_CHECK


def _jsonable(o):
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    raise TypeError(type(o).__name__)


def cmd_fit(args) -> int:
    rows = parse_sweep(Path(args.input).read_text())
    fit = _fit_rows(rows, args.discard)
    print(json.dumps(fit.to_json()))
    if args.out:
        dump_json(args.out, fit.to_json())
        write_manifest(args.out, args, inputs=[args.input])
    return EXIT_OK


# --- parser ------------------------------------------------------------------------

class _DimAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.dim_given = True


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--dim", type=int, default=2, action=_DimAction,
                        help="ambient dimension (default 2)")
    shared.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    shared.add_argument("--eps", type=float, default=EPS_GEOM,
                        help=f"geometric tolerance (default {EPS_GEOM:g})")
    shared.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    shared.add_argument("--out", help="output path")

    parser = argparse.ArgumentParser(prog="convlayers",
                                     description="Convex layer peeling toolkit.")
    parser.add_argument("--version", action="version", version=_version())
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[shared], help="write a point set (PSET v1)")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("--n", type=int, required=True, help="size parameter of the family")

    p = sub.add_parser("peel", parents=[shared], help="peel a PSET file into LAYERS v1")
    p.add_argument("input")

    s = sub.add_parser("sweep", parents=[shared], help="measure a family over sizes")
    s.add_argument("kind", choices=KINDS)
    s.add_argument("--sizes", type=int, nargs="*", required=True)
    s.add_argument("--seeds", type=int, nargs="*")
    s.add_argument("--loglog", help="also write 'log_n log_L' pairs here")
    s.add_argument("--plot", help="also render a log-log PNG here")
    s.add_argument("--discard", type=float, default=analysis.FIT_DISCARD)

    v = sub.add_parser("verify", parents=[shared], help="run a verification suite")
    v.add_argument("suite", choices=verify.SUITES)
    v.add_argument("--delta", type=float, nargs="*", help="net spacings (nets, tangent)")
    v.add_argument("--n", type=int, default=256, help="size parameter (shells)")
    v.add_argument("--random", type=int, default=50, help="instances per dimension (push)")
    v.add_argument("--kind", choices=KINDS, default="recursive", help="family (bounds)")
    v.add_argument("--sizes", type=int, nargs="*", help="sizes (bounds)")
    v.add_argument("--seeds", type=int, nargs="*", help="seeds (bounds)")
    v.add_argument("--input", help="existing SWEEP v1 CSV (bounds)")

    f = sub.add_parser("fit", parents=[shared], help="fit log L against log n")
    f.add_argument("input")
    f.add_argument("--discard", type=float, default=analysis.FIT_DISCARD)
    return parser


COMMANDS = {"generate": cmd_generate, "peel": cmd_peel, "sweep": cmd_sweep,
            "verify": cmd_verify, "fit": cmd_fit}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.dim_given = getattr(args, "dim_given", False)
    if args.command in ("generate", "sweep") and not args.out:
        parser.error(f"{args.command} needs --out")
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    try:
        return COMMANDS[args.command](args)
    except FormatError as err:
        print(f"error: malformed input: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (GeometryError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
