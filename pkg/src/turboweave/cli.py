"""Command-line front end: search, analysis, extension, generation, simulation.

Every subcommand records a run manifest (JSON: command, parameters, seed,
artifacts written, tool version); `replay` re-executes a manifest and
reproduces its outputs byte for byte.  Exit codes: 0 success, 1 validation
failure, 2 resource or construction budget exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, ig, sim, spokes, turbo
from .errors import ConstructionError, ResourceLimitError, ValidationError
from .permutation import (
    Permutation,
    read_interleaver_file,
    write_interleaver_file,
)


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


@dataclasses.dataclass
class RunManifest:
    command: str
    params: dict
    master_seed: int | None
    artifacts: list[str]
    version: str = __version__

    def write(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            json.dump(dataclasses.asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _finish(args, artifacts: list[str], seed: int | None = None) -> None:
    params = {
        k: v for k, v in vars(args).items() if k not in ("func", "manifest")
    }
    if seed is not None:
        params["seed"] = seed
    manifest_path = args.manifest or f"{args.command}.manifest.json"
    RunManifest(args.command, params, seed, [str(a) for a in artifacts]).write(manifest_path)
    print(f"manifest: {manifest_path}")


def _parse_entries(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError:
        raise ValidationError(f"cannot parse entry list: {text!r}") from None


def _parse_grid(text: str) -> tuple[float, ...]:
    out = []
    for tok in text.replace(",", " ").split():
        out.append(math.inf if tok in ("inf", "noiseless") else float(tok))
    if not out:
        raise ValidationError("empty Eb/N0 grid")
    return tuple(out)


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    seed = int(np.random.SeedSequence().entropy % 2**63)
    print(f"seed: {seed} (generated)")
    return seed


# --- subcommand handlers ------------------------------------------------------


def _cmd_validate(args) -> int:
    entries = _parse_entries(args.c)
    verdict = spokes.validate_spoke_vector(args.n, args.s, entries, args.simple)
    if verdict.ok:
        print("ACCEPT")
        _finish(args, [])
        return 0
    print(f"REJECT: {verdict.reason}")
    _finish(args, [])
    return 1


def _cmd_count(args) -> int:
    formula = spokes.count_valid_formula(args.n, args.s)
    print(f"formula: {formula}")
    if args.brute_force:
        brute = spokes.count_valid_bruteforce(args.n, args.s)
        print(f"brute-force: {brute}")
        if brute != formula:
            print("note: counts differ; the closed form assumes 2s divides n")
    _finish(args, [])
    return 0


def _cmd_enumerate(args) -> int:
    for vec in spokes.enumerate_valid(
        args.n, args.s, simple_only=args.simple, max_candidates=args.max_candidates
    ):
        print(" ".join(str(c) for c in vec.entries))
    _finish(args, [])
    return 0


def _search_report_lines(report: spokes.SearchReport) -> list[str]:
    lines = [
        f"n={report.n}",
        f"s={report.s}",
        f"candidates={report.candidates_examined}",
        f"best_girth={report.best_girth}",
        f"winners={len(report.winners)}",
    ]
    if report.chosen is not None:
        lines.append("chosen=" + " ".join(str(c) for c in report.chosen.entries))
        lines.append(f"chosen_summary_distance={report.chosen_summary_distance}")
    else:
        lines.append("chosen=none")
    return lines


def _cmd_search(args) -> int:
    report = spokes.search_best_girth(
        args.n, args.s, tie_break=args.tie_break, workers=args.workers,
        max_candidates=args.max_candidates,
    )
    lines = _search_report_lines(report)
    if args.format == "csv":
        print(",".join(line.split("=", 1)[0] for line in lines))
        print(",".join(line.split("=", 1)[1] for line in lines))
    else:
        print(f"search over simple spoke vectors for n={report.n}, s={report.s}")
        if report.chosen is None:
            print("  no candidates")
        else:
            print(f"  candidates examined: {report.candidates_examined}")
            print(f"  best girth: {report.best_girth} ({len(report.winners)} winners)")
            print(f"  chosen: {report.chosen.label()}")
            print(f"  summary distance: {report.chosen_summary_distance}")
        for line in lines:
            print(line)
    artifacts = []
    if args.out_spokes:
        if report.chosen is None:
            raise ValidationError("empty search result, nothing to write")
        spokes.write_spoke_file(report.chosen, args.out_spokes)
        artifacts.append(args.out_spokes)
    _finish(args, artifacts)
    return 0


def _cmd_extend(args) -> int:
    entries = _parse_entries(args.c)
    vec = spokes.SpokeVector(args.n, entries)
    derived = spokes.extend_description(vec, args.k)
    print(f"{derived.n} {derived.s}")
    print(" ".join(str(c) for c in derived.entries))
    artifacts = []
    if args.out_spokes:
        spokes.write_spoke_file(derived, args.out_spokes)
        artifacts.append(args.out_spokes)
    _finish(args, artifacts)
    return 0


def _build_interleaver(kind, n, s, c, spoke_file, quad_k, spread, seed):
    if kind == "spoke":
        if spoke_file:
            vec = spokes.read_spoke_file(spoke_file)
        elif c:
            vec = spokes.SpokeVector(n, _parse_entries(c))
        else:
            report = spokes.search_best_girth(n, s)
            if report.chosen is None:
                raise ValidationError(f"search for n={n}, s={s} found no vector")
            vec = report.chosen
        return spokes.interleaver_from_spokes(vec)
    if kind == "quadratic":
        return turbo.quadratic_interleaver(n, quad_k)
    if kind == "srandom":
        return turbo.srandom_interleaver(n, spread=spread, seed=seed)
    raise ValidationError(f"unknown interleaver kind: {kind}")


def _cmd_gen(args) -> int:
    seed = _resolve_seed(args.seed) if args.kind == "srandom" else args.seed
    perm = _build_interleaver(
        args.kind, args.n, args.s, args.c, args.spoke_file, args.quad_k,
        args.spread, seed,
    )
    write_interleaver_file(perm, args.out)
    print(f"wrote {args.out} (n={perm.n}, kind={args.kind})")
    _finish(args, [args.out], seed=seed)
    return 0


def _cmd_analyze(args) -> int:
    perm = read_interleaver_file(args.interleaver)
    graph = ig.build_ig(perm)
    girth = ig.nonchain_girth(graph)
    dsum = ig.summary_distance_exact(graph)
    lo, hi = ig.dsum_bounds(girth)
    ceiling = 2.0 * math.log2(perm.n + 1)
    rows = [
        ("n", perm.n),
        ("involution", int(perm.is_involution())),
        ("nonchain_girth", girth),
        ("summary_distance", dsum),
        ("dsum_lower_bound", lo),
        ("dsum_upper_bound", hi),
        ("girth_ceiling", f"{ceiling:.4f}"),
        ("sandwich_ok", int(lo <= dsum <= hi)),
        ("ceiling_ok", int(girth <= ceiling)),
    ]
    if args.format == "csv":
        print(",".join(str(k) for k, _ in rows))
        print(",".join(str(v) for _, v in rows))
    else:
        for k, v in rows:
            print(f"{k}={v}")
    artifacts = []
    if args.export_edges:
        ig.write_ig_edge_list(graph, args.export_edges)
        artifacts.append(args.export_edges)
    _finish(args, artifacts)
    return 0


def _cmd_simulate(args) -> int:
    perm = read_interleaver_file(args.interleaver)
    seed = _resolve_seed(args.seed)
    cfg = sim.SimConfig(
        block_length=perm.n,
        interleaver=perm,
        ebn0_db_grid=_parse_grid(args.ebn0),
        iterations=args.iterations,
        master_seed=seed,
        min_bit_errors=args.min_errors,
        max_blocks=args.max_blocks,
    )
    points = sim.simulate_ber(cfg, workers=args.workers)
    sim.write_ber_csv(points, args.out_csv)
    script = args.out_csv + ".gnuplot"
    sim.write_gnuplot_script([(args.out_csv, Path(args.interleaver).stem)], script)
    for p in points:
        print(
            f"ebn0={p.ebn0_db:g} ber={p.ber:.4e} fer={p.fer:.4e} "
            f"(errors={p.bit_errors}, blocks={p.blocks})"
        )
    _finish(args, [args.out_csv, script], seed=seed)
    return 0


def _cmd_compare(args) -> int:
    seed = _resolve_seed(args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = _parse_grid(args.ebn0)
    curves = []
    artifacts = []
    for kind in ("spoke", "quadratic", "srandom"):
        perm = _build_interleaver(
            kind, args.n, args.s, None, None, args.quad_k, args.spread, seed
        )
        cfg = sim.SimConfig(
            block_length=args.n,
            interleaver=perm,
            ebn0_db_grid=grid,
            iterations=args.iterations,
            master_seed=seed,
            min_bit_errors=args.min_errors,
            max_blocks=args.max_blocks,
        )
        points = sim.simulate_ber(cfg, workers=args.workers)
        csv_path = str(out_dir / f"{kind}.csv")
        sim.write_ber_csv(points, csv_path)
        curves.append((csv_path, kind))
        artifacts.append(csv_path)
        for p in points:
            print(f"{kind} ebn0={p.ebn0_db:g} ber={p.ber:.4e} fer={p.fer:.4e}")
    script = str(out_dir / "compare.gnuplot")
    sim.write_gnuplot_script(curves, script, title=f"BER comparison, n={args.n}")
    artifacts.append(script)
    _finish(args, artifacts, seed=seed)
    return 0


def _cmd_replay(args) -> int:
    with open(args.manifest_file, "r", encoding="ascii") as fh:
        manifest = json.load(fh)
    command = manifest["command"]
    if command == "replay":
        raise ValidationError("cannot replay a replay manifest")
    argv = [command]
    for key, value in manifest["params"].items():
        if key == "command" or value is None:
            continue
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif value is False:
            if key == "brute_force":  # the only flag with an explicit off form
                argv.append("--no-brute-force")
        else:
            argv.extend([flag, str(value)])
    print(f"replaying: {' '.join(argv)}")
    return run_cli(argv)


# --- parser wiring ------------------------------------------------------------


def _add_common(p):
    p.add_argument("--manifest", default=None, help="run manifest path")


def build_parser() -> _Parser:
    parser = _Parser(prog="turboweave", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a spoke vector")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--c", required=True, help="comma-separated entries")
    p.add_argument("--simple", action="store_true", help="also require a simple graph")
    _add_common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("count", help="count valid spoke vectors")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--brute-force", action=argparse.BooleanOptionalAction, default=True)
    _add_common(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("enumerate", help="list all valid spoke vectors")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--simple", action="store_true")
    p.add_argument("--max-candidates", type=int, default=spokes.DEFAULT_CANDIDATE_BUDGET)
    _add_common(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("search", help="max-girth scan over simple spoke vectors")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--tie-break", choices=("summary-distance", "lex"), default="summary-distance")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--max-candidates", type=int, default=spokes.DEFAULT_CANDIDATE_BUDGET)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out-spokes", default=None, help="write the chosen vector to a spoke file")
    _add_common(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("extend", help="derive a longer-block spoke vector")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out-spokes", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("gen", help="write an interleaver file")
    p.add_argument("--kind", choices=("spoke", "quadratic", "srandom"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, default=4, help="spoke vector size for kind=spoke search")
    p.add_argument("--c", default=None, help="explicit spoke entries")
    p.add_argument("--spoke-file", default=None)
    p.add_argument("--quad-k", type=int, default=1)
    p.add_argument("--spread", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("analyze", help="girth / summary-distance report for an interleaver file")
    p.add_argument("--interleaver", required=True)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--export-edges", default=None, help="write the interleaver graph edge list")
    _add_common(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("simulate", help="BER sweep to CSV plus plot script")
    p.add_argument("--interleaver", required=True)
    p.add_argument("--ebn0", required=True, help="comma-separated dB values; 'inf' allowed")
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--min-errors", type=int, default=100)
    p.add_argument("--max-blocks", type=int, default=100_000)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out-csv", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="sweep spoke / quadratic / S-random side by side")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, default=4)
    p.add_argument("--ebn0", required=True)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--min-errors", type=int, default=100)
    p.add_argument("--max-blocks", type=int, default=100_000)
    p.add_argument("--quad-k", type=int, default=1)
    p.add_argument("--spread", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out-dir", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("replay", help="re-run a recorded manifest")
    p.add_argument("--manifest-file", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_replay)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ResourceLimitError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
