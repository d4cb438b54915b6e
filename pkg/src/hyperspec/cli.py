"""Command-line entry point.

Subcommands: construct, spectrum, color, verify, extract, search. Every
JSON payload carries a "schema" version and, for randomized runs, the seed
that produced it; wall-clock numbers live under a separate "timings" key
so byte-level comparisons can exclude them. Exit codes: 0 success, 1
domain error (structured JSON on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import constructions
from .coloring import find_2_coloring, random_refute
from .core import (
    Hypergraph,
    intersection_spectrum,
    is_intersecting,
    is_uniform,
    parse_hypergraph,
    serialize_hypergraph,
)
from .errors import HypergraphError
from .extraction import ExtractionParams, density_increment_run
from .lemmas import run_lemma_suite
from .rng import DEFAULT_SEED
from .search import min_spectrum_search

SCHEMA = "1"


def _emit(payload: dict, stream=None) -> None:
    print(json.dumps(payload, sort_keys=True), file=stream or sys.stdout)


def _load(path: str) -> Hypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())


def _threads(args: argparse.Namespace) -> int:
    # Accepted for interface stability; kernels are sequential and results
    # do not depend on this value.
    env = os.environ.get("HYPERSPEC_THREADS")
    if args.threads is not None:
        return args.threads
    if env:
        return int(env)
    return os.cpu_count() or 1


def _parse_kv(pairs: Sequence[str]) -> dict[str, int]:
    out: dict[str, int] = {}
    for pair in pairs:
        if "=" not in pair:
            raise HypergraphError(f"--param expects key=value, got {pair!r}")
        key, _, value = pair.partition("=")
        try:
            out[key] = int(value)
        except ValueError:
            raise HypergraphError(f"--param value for {key!r} must be an integer") from None
    return out


def cmd_construct(args: argparse.Namespace) -> int:
    inputs = ()
    if args.family == "compose":
        if not (args.left and args.right):
            raise HypergraphError("compose needs --left and --right input files")
        inputs = (_load(args.left), _load(args.right))
    spec = constructions.ConstructionSpec(
        family=args.family,
        params=_parse_kv(args.param),
        seed=args.seed,
        inputs=inputs,
    )
    h = constructions.build_construction(spec, size_cap=args.size_cap)
    text = serialize_hypergraph(h)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    h = _load(args.file)
    spectrum = intersection_spectrum(h)
    _emit(
        {
            "schema": SCHEMA,
            "k": is_uniform(h),
            "intersecting": is_intersecting(h),
            "sizes": list(spectrum.sizes),
            "multiplicities": list(spectrum.multiplicities),
        }
    )
    return 0


def cmd_color(args: argparse.Namespace) -> int:
    h = _load(args.file)
    started = time.monotonic()
    result = find_2_coloring(h, budget_nodes=args.budget_nodes, budget_ms=args.budget_ms)
    payload = {
        "schema": SCHEMA,
        "status": result.status.value,
        "coloring": list(result.coloring) if result.coloring else None,
        "nodes": result.nodes,
        "mono_fraction": None,
        "seed": args.seed,
    }
    if args.trials:
        report = random_refute(h, args.trials, args.seed)
        payload["mono_fraction"] = report.mono_fraction
        payload["mean_mono_edges"] = report.mean_mono_edges
    payload["timings"] = {"elapsed_ms": (time.monotonic() - started) * 1000.0}
    _emit(payload)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    started = time.monotonic()
    if args.suite == "lemmas":
        results = run_lemma_suite(args.seed, args.instances)
    else:
        raise HypergraphError(f"unknown suite {args.suite!r}")
    payload = {"schema": SCHEMA, "suite": args.suite, **results}
    payload["timings"] = {"elapsed_ms": (time.monotonic() - started) * 1000.0}
    _emit(payload)
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    h = _load(args.file)
    started = time.monotonic()
    if args.paper_constants:
        k = is_uniform(h)
        if k is None:
            raise HypergraphError("asymptotic constants need a uniform input")
        params = ExtractionParams.paper_scale(k, seed=args.seed, budget_ms=args.budget_ms)
    else:
        params = ExtractionParams(
            t=args.t,
            x=args.x,
            d=Fraction(args.density) if args.density else None,
            seed=args.seed,
            budget_ms=args.budget_ms,
        )
    trace = density_increment_run(h, params)
    payload = {"schema": SCHEMA, **trace.to_json(include_timings=True)}
    payload["timings"] = {"elapsed_ms": (time.monotonic() - started) * 1000.0}
    _emit(payload)
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    report = min_spectrum_search(
        args.k,
        args.max_vertices,
        budget_ms=args.budget_ms,
        budget_nodes=args.budget_nodes,
        seed=args.seed,
    )
    if args.witness_out and report.witness is not None:
        with open(args.witness_out, "w", encoding="utf-8") as fh:
            fh.write(serialize_hypergraph(report.witness))
    _emit({"schema": SCHEMA, **report.to_json(include_timings=True)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperspec",
        description="Intersection spectra of small hypergraphs: constructions, "
        "coloring, inequality suites, extraction, and search.",
    )
    parser.add_argument("--threads", type=int, default=None, help="worker cap (results never depend on it)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="generate a named hypergraph family as .hg text")
    p.add_argument("--family", required=True, choices=constructions.ConstructionSpec._FAMILIES)
    p.add_argument("--param", action="append", default=[], metavar="K=V")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--size-cap", type=int, default=constructions.DEFAULT_SIZE_CAP)
    p.add_argument("--left", help="first input .hg (compose only)")
    p.add_argument("--right", help="second input .hg (compose only)")
    p.add_argument("-o", "--output", help="output path (stdout if omitted)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("spectrum", help="exact intersection spectrum of a .hg file")
    p.add_argument("file")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("color", help="decide 2-colorability; optionally sample random colorings")
    p.add_argument("file")
    p.add_argument("--budget-nodes", type=int, default=10**8)
    p.add_argument("--budget-ms", type=float, default=None)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", help="run a randomized inequality suite")
    p.add_argument("--suite", default="lemmas")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--instances", type=int, default=200)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extract", help="run the density-increment driver on a .hg file")
    p.add_argument("file")
    p.add_argument("--t", type=int, default=4)
    p.add_argument("--x", type=int, default=4)
    p.add_argument("--density", default=None, help="override the measured density (a fraction like 1/72)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--budget-ms", type=float, default=None)
    p.add_argument("--paper-constants", action="store_true", help="use the asymptotic tuning constants")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("search", help="minimize spectrum size over small witnesses")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--budget-ms", type=float, default=None)
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--witness-out", help="write the best witness as .hg")
    p.set_defaults(func=cmd_search)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _threads(args)
    try:
        return args.func(args)
    except HypergraphError as exc:
        _emit(
            {
                "schema": SCHEMA,
                "error": {"type": type(exc).__name__, "message": str(exc)},
            },
            stream=sys.stderr,
        )
        return 1
    except OSError as exc:
        _emit(
            {"schema": SCHEMA, "error": {"type": "OSError", "message": str(exc)}},
            stream=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
