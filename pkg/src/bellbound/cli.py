"""Command-line front end: scan, analyze, simulate, verify.

Exit codes: 0 success, 2 usage or input error, 3 verification failure,
4 internal invariant breach.  Output is deterministic for a fixed
configuration: JSON uses a fixed key order and 12-significant-digit
decimals, and nothing carries a timestamp.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .infocore import InvariantBreach, binary_entropy
from .protocols import (
    AnalysisReport,
    ProtocolError,
    analyze,
    empirical_scores,
    exact_joint,
    resolve_protocol,
    sample_joint,
    SHIPPED_MC_SEED,
)
from .scores import ALL_VARIANTS, beta_score, classify_score
from .surfaces import (
    BoundTheoremError,
    format_sig12,
    resolve_workers,
    scan_surface,
    surface_rows,
    surface_summary,
    write_surface_csv,
)
from .verify import (
    DEFAULT_CORPUS_SIZE,
    DEFAULT_MC_TRIALS,
    DEFAULT_RESOLUTION,
    DEFAULT_SEED,
    VerifyReport,
    run_verification,
)


@dataclass(frozen=True)
class RunConfig:
    """One resolved CLI invocation."""

    command: str
    resolution: int = DEFAULT_RESOLUTION
    protocol_ref: str | None = None
    trials: int = DEFAULT_MC_TRIALS
    seed: int = DEFAULT_SEED
    output_path: Path | None = None
    format: str = "csv"
    figures_dir: Path | None = None
    no_figures: bool = False
    corpus_size: int = DEFAULT_CORPUS_SIZE
    inject_broken: bool = False


def _round12(obj):
    if isinstance(obj, float):
        return float(format_sig12(obj))
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def render_json(obj) -> str:
    return json.dumps(_round12(obj), indent=2) + "\n"


def _flat_rows(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flat_rows(v, f"{prefix}{k}.")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            yield from _flat_rows(v, f"{prefix}{i}.")
    else:
        key = prefix[:-1]
        if isinstance(obj, float):
            obj = format_sig12(obj)
        yield f"{key},{obj}"


def render_flat_csv(obj) -> str:
    return "key,value\n" + "\n".join(_flat_rows(obj)) + "\n"


def _write_or_print(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


# ---------------------------------------------------------------------------
# report serialisation
# ---------------------------------------------------------------------------


def analysis_to_jsonable(report: AnalysisReport) -> dict:
    score = report.score
    return {
        "protocol": report.protocol,
        "seed": report.seed,
        "score": {
            "p_match_a0": score.p_match_a0,
            "p_match_a1": score.p_match_a1,
            "beta_score": score.beta_score,
            "ic_alpha": score.ic_alpha,
            "ic_violated": score.ic_violated,
            "variant_scores": {v.label: score.variant_scores[v] for v in ALL_VARIANTS},
            "violations": [v.label for v in score.violations],
            "boundary": [
                v.label
                for v in ALL_VARIANTS
                if classify_score(score.variant_scores[v]) == "boundary"
            ],
            "chsh_conditionals": {
                f"a{a}b{b}": report.standard_conditionals[(a, b)]
                for a, b in sorted(report.standard_conditionals)
            },
        },
        "info": {
            "i_B": report.info.i_B,
            "i_b": report.info.i_b,
            "i_Bxorb": report.info.i_Bxorb,
            "h_B": report.info.h_B,
            "h_Bxorb": report.info.h_Bxorb,
            "delta_b": report.info.delta_b,
            "delta_B": report.info.delta_B,
            "j_B": report.info.j_B,
            "j_b": report.info.j_b,
        },
        "cells": [
            {
                "lam_index": c.lam_index,
                "lam_value": c.lam_value,
                "chi": c.chi,
                "weight": c.weight,
                "p1": c.p1,
                "p2": c.p2,
            }
            for c in report.cells
        ],
    }


def verify_to_jsonable(report: VerifyReport) -> dict:
    return {
        "seed": report.seed,
        "corpus_size": report.corpus_size,
        "resolution": report.resolution,
        "mc_trials": report.mc_trials,
        "passed": report.passed,
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.checks
        ],
    }


def verify_table(report: VerifyReport) -> str:
    width = max(len(c.name) for c in report.checks) + 2
    lines = [
        f"verification seed={report.seed} corpus={report.corpus_size} "
        f"resolution={report.resolution} trials={report.mc_trials}"
    ]
    for c in report.checks:
        lines.append(f"{c.name:<{width}}{'PASS' if c.passed else 'FAIL'}")
        if not c.passed:
            lines.append(f"  detail: {json.dumps(_round12(c.detail))}")
    lines.append(f"{'overall':<{width}}{'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_scan(config: RunConfig) -> int:
    workers = resolve_workers(None)
    try:
        surface = scan_surface(config.resolution, workers=workers)
    except BoundTheoremError as exc:
        print(f"bound theorem violated: {exc}", file=sys.stderr)
        return 3

    out = config.output_path or Path("surface.csv")
    try:
        with out.open("w") as stream:
            if config.format == "json":
                stream.write(render_json(list(surface_rows(surface))))
            else:
                write_surface_csv(surface, stream)
    except OSError as exc:
        print(f"cannot write {out}: {exc}", file=sys.stderr)
        return 2

    summary = surface_summary(surface)
    summary["csv_path"] = str(out)

    if not config.no_figures:
        from .figures import render_surface_figures

        fig_dir = config.figures_dir or out.parent
        try:
            paths = render_surface_figures(surface, fig_dir, stem=out.stem)
        except OSError as exc:
            print(f"cannot write figures to {fig_dir}: {exc}", file=sys.stderr)
            return 2
        summary["figure_paths"] = [str(p) for p in paths]

    sys.stdout.write(render_json(summary))
    if not (summary["theorem_beta_ok"] and summary["theorem_alpha_ok"]):
        return 3
    return 0


def _fano_sanity(report: AnalysisReport) -> None:
    m0 = binary_entropy(report.score.p_match_a0) - (report.info.h_B - report.info.i_B)
    m1 = binary_entropy(report.score.p_match_a1) - (report.info.h_Bxorb - report.info.i_Bxorb)
    if m0 < -1e-9 or m1 < -1e-9:
        raise InvariantBreach(
            f"Fano consistency violated on {report.protocol}: margins {m0!r}, {m1!r}"
        )


def cmd_analyze(config: RunConfig) -> int:
    protocol = resolve_protocol(config.protocol_ref)
    report = analyze(protocol)
    _fano_sanity(report)
    doc = analysis_to_jsonable(report)
    text = render_flat_csv(doc) if config.format == "csv" else render_json(doc)
    _write_or_print(text, config.output_path)
    return 0


def cmd_simulate(config: RunConfig) -> int:
    protocol = resolve_protocol(config.protocol_ref)
    empirical = empirical_scores(sample_joint(protocol, config.trials, config.seed))
    exact_frag = beta_score(exact_joint(protocol))
    doc = {
        "protocol": protocol.name,
        "trials": config.trials,
        "seed": config.seed,
        "empirical": {
            "p_match_a0": empirical["p_match_a0"],
            "p_match_a1": empirical["p_match_a1"],
            "beta_score": empirical["beta_score"],
            "ic_alpha": empirical["ic_alpha"],
            "variant_scores": empirical["variant_scores"],
        },
        "stderr": empirical["stderr"],
        "exact": {
            "p_match_a0": exact_frag.p_match_a0,
            "p_match_a1": exact_frag.p_match_a1,
            "beta_score": exact_frag.beta_score,
        },
        "beta_abs_gap": abs(empirical["beta_score"] - exact_frag.beta_score),
    }
    text = render_flat_csv(doc) if config.format == "csv" else render_json(doc)
    _write_or_print(text, config.output_path)
    return 0


def cmd_verify(config: RunConfig) -> int:
    workers = resolve_workers(None)
    report = run_verification(
        seed=config.seed,
        corpus_size=config.corpus_size,
        resolution=config.resolution,
        mc_trials=config.trials,
        inject_broken=config.inject_broken,
        workers=workers,
    )
    if config.format == "json":
        sys.stdout.write(render_json(verify_to_jsonable(report)))
    else:
        sys.stdout.write(verify_table(report))
    if config.output_path is not None:
        config.output_path.write_text(render_json(verify_to_jsonable(report)))
    return 0 if report.passed else 3


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellbound",
        description=(
            "Fano-inequality bound surfaces and exact information analysis of "
            "local-hidden-variable-plus-communication CHSH protocols."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="evaluate the bound surfaces on a grid")
    scan.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION, metavar="N")
    scan.add_argument("--out", type=Path, default=None, metavar="PATH",
                      help="surface data file (default surface.csv)")
    scan.add_argument("--format", choices=("csv", "json"), default="csv")
    scan.add_argument("--figures", type=Path, default=None, metavar="DIR",
                      help="directory for rendered surface images (default: next to --out)")
    scan.add_argument("--no-figures", action="store_true", help="skip image rendering")

    analyze_p = sub.add_parser("analyze", help="exact report for one protocol")
    analyze_p.add_argument("--protocol", required=True, metavar="NAME|PATH")
    analyze_p.add_argument("--out", type=Path, default=None, metavar="PATH")
    analyze_p.add_argument("--format", choices=("json", "csv"), default="json")

    simulate = sub.add_parser("simulate", help="Monte Carlo scores for one protocol")
    simulate.add_argument("--protocol", required=True, metavar="NAME|PATH")
    simulate.add_argument("--trials", type=int, default=DEFAULT_MC_TRIALS, metavar="N")
    simulate.add_argument("--seed", type=int, default=SHIPPED_MC_SEED, metavar="N")
    simulate.add_argument("--out", type=Path, default=None, metavar="PATH")
    simulate.add_argument("--format", choices=("json", "csv"), default="json")

    verify = sub.add_parser("verify", help="run the full verification suite")
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED, metavar="N")
    verify.add_argument("--corpus-size", type=int, default=DEFAULT_CORPUS_SIZE, metavar="N")
    verify.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION, metavar="N")
    verify.add_argument("--trials", type=int, default=DEFAULT_MC_TRIALS, metavar="N")
    verify.add_argument("--out", type=Path, default=None, metavar="PATH",
                        help="also write the JSON report here")
    verify.add_argument("--format", choices=("table", "json"), default="table")
    verify.add_argument("--inject-broken", action="store_true",
                        help="negative control: smuggle a setting-leaking protocol "
                             "into the setting-blind corpus")
    return parser


def _config_from_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> RunConfig:
    command = args.command
    if command in ("scan", "verify") and args.resolution < 2:
        parser.error(f"--resolution must be >= 2, got {args.resolution}")
    if command in ("simulate", "verify") and args.trials < 1:
        parser.error(f"--trials must be >= 1, got {args.trials}")
    if command == "verify" and args.corpus_size < 1:
        parser.error(f"--corpus-size must be >= 1, got {args.corpus_size}")
    return RunConfig(
        command=command,
        resolution=getattr(args, "resolution", DEFAULT_RESOLUTION),
        protocol_ref=getattr(args, "protocol", None),
        trials=getattr(args, "trials", DEFAULT_MC_TRIALS),
        seed=getattr(args, "seed", DEFAULT_SEED),
        output_path=getattr(args, "out", None),
        format=getattr(args, "format", "csv"),
        figures_dir=getattr(args, "figures", None),
        no_figures=getattr(args, "no_figures", False),
        corpus_size=getattr(args, "corpus_size", DEFAULT_CORPUS_SIZE),
        inject_broken=getattr(args, "inject_broken", False),
    )


COMMANDS = {
    "scan": cmd_scan,
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config_from_args(parser, args)
    try:
        return COMMANDS[config.command](config)
    except ProtocolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BoundTheoremError as exc:
        print(f"bound theorem violated: {exc}", file=sys.stderr)
        return 3
    except InvariantBreach as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
