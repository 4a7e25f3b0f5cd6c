"""Seeded verification suite tying every claim of the package together.

Each check reproduces one numerical statement: the two bound surfaces
stay under 3/4 and 1, exhaustive local strategies attain exactly 3/4,
the one-bit PR-box protocol wins always while leaking one bit of setting
information, random setting-blind protocols never violate, outcome-blind
unbiased protocols never violate, the biased construction violates with
zero outcome information, Fano's inequality holds on every analysed
joint, entropy inversion round-trips, and Monte Carlo agrees with exact
enumeration.  All randomness derives from one master seed, and per-case
seeds are embedded in the report so any failure is replayable.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .infocore import binary_entropy, condition, inv_binary_entropy_upper, relabel
from .protocols import (
    BUILTIN_PROTOCOLS,
    SHIPPED_MC_SEED,
    AnalysisReport,
    analyze,
    empirical_scores,
    enumerate_local_deterministic,
    exact_joint,
    make_biased_strategy,
    make_one_bit_pr,
    random_protocol,
    random_protocol_b_independent,
    random_protocol_outcome_masked,
    resolve_protocol,
    sample_joint,
)
from .scores import ALL_VARIANTS, VariantSpec, beta_score, chsh_variant_score
from .surfaces import THEOREM_ATOL, beta_max_point, scan_surface

DEFAULT_SEED = 42
DEFAULT_CORPUS_SIZE = 1000
DEFAULT_RESOLUTION = 201
DEFAULT_MC_TRIALS = 1_000_000

_BIT_FLIP = {0: 1, 1: 0}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: dict
    elapsed: float = field(compare=False, default=0.0)


@dataclass(frozen=True)
class VerifyReport:
    seed: int
    corpus_size: int
    resolution: int
    mc_trials: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _timed(fn: Callable[[], CheckResult]) -> CheckResult:
    start = time.perf_counter()
    result = fn()
    return CheckResult(result.name, result.passed, result.detail, time.perf_counter() - start)


def _check_beta_surface(surface) -> CheckResult:
    detail = {
        "max_beta_max": surface.max_beta_max,
        "min_beta_max": surface.min_beta_max,
        "argmax_count": len(surface.argmax_beta_max()),
    }
    ok = abs(surface.max_beta_max - 0.75) <= THEOREM_ATOL
    if (surface.resolution - 1) % 2 == 0:  # grid contains (0.5, 0.5)
        argmin = surface.argmin_beta_max()
        detail["center_attains_min"] = (0.5, 0.5) in argmin
        ok = ok and abs(surface.min_beta_max - 0.5) <= THEOREM_ATOL and (0.5, 0.5) in argmin
    return CheckResult("beta-bound-surface", ok, detail)


def _check_alpha_surface(surface) -> CheckResult:
    detail = {"max_alpha_max": surface.max_alpha_max, "min_alpha_max": surface.min_alpha_max}
    ok = abs(surface.max_alpha_max - 1.0) <= THEOREM_ATOL
    return CheckResult("alpha-bound-surface", ok, detail)


def _check_local_deterministic() -> CheckResult:
    best_beta = 0.0
    best_variant = {v: 0.0 for v in ALL_VARIANTS}
    count = 0
    for protocol in enumerate_local_deterministic():
        joint = exact_joint(protocol)
        best_beta = max(best_beta, beta_score(joint).beta_score)
        for v in ALL_VARIANTS:
            best_variant[v] = max(best_variant[v], chsh_variant_score(joint, v))
        count += 1
    detail = {
        "strategies": count,
        "max_beta": best_beta,
        "max_variant_scores": {v.label: s for v, s in sorted(best_variant.items())},
    }
    ok = count == 256 and best_beta == 0.75 and all(s == 0.75 for s in best_variant.values())
    return CheckResult("local-deterministic-bound", ok, detail)


def _check_one_bit_pr() -> CheckResult:
    report = analyze(make_one_bit_pr())
    conds = report.standard_conditionals
    detail = {
        "beta_score": report.score.beta_score,
        "chsh_conditionals": {f"a{a}b{b}": conds[(a, b)] for a, b in sorted(conds)},
        "i_b": report.info.i_b,
        "delta_b": report.info.delta_b,
        "ic_alpha": report.score.ic_alpha,
    }
    ok = (
        abs(report.score.beta_score - 1.0) <= 1e-12
        and all(abs(c - 1.0) <= 1e-12 for c in conds.values())
        and abs(report.info.i_b - 1.0) <= 1e-12
        and abs(report.info.delta_b - 1.0) <= 1e-12
        and abs(report.score.ic_alpha - 2.0) <= 1e-12
    )
    return CheckResult("one-bit-pr-box", ok, detail)


def _cell_bound_violations(report: AnalysisReport) -> list[dict]:
    """Per-cell Fano ceilings must dominate per-cell achieved scores."""
    bad = []
    ceilings = []
    for cell in report.cells:
        if cell.p1 is None or cell.p2 is None:
            bad.append({"cell": (cell.lam_index, cell.chi), "error": "setting unsupported in cell"})
            continue
        ceiling = beta_max_point(cell.p1, cell.p2).beta_max
        ceilings.append(ceiling)
        conditioned = condition(report.joint, {"lam": cell.lam_index, "chi": cell.chi})
        achieved = beta_score(conditioned).beta_score
        if achieved > ceiling + 1e-9:
            bad.append(
                {
                    "cell": (cell.lam_index, cell.chi),
                    "achieved": achieved,
                    "ceiling": ceiling,
                }
            )
    if ceilings and report.score.beta_score > max(ceilings) + 1e-9:
        bad.append({"overall_beta": report.score.beta_score, "max_ceiling": max(ceilings)})
    return bad


def _check_setting_necessity(reports: list[AnalysisReport]) -> CheckResult:
    failures = []
    max_i_b = 0.0
    max_beta = 0.0
    max_alpha = 0.0
    for report in reports:
        max_i_b = max(max_i_b, report.info.i_b)
        max_beta = max(max_beta, report.score.beta_score)
        max_alpha = max(max_alpha, report.score.ic_alpha)
        problems = []
        if report.info.i_b > 1e-12:
            problems.append(f"i_b={report.info.i_b!r}")
        if report.score.beta_score > 0.75 + 1e-12:
            problems.append(f"beta={report.score.beta_score!r}")
        if report.score.ic_alpha > 1.0 + 1e-12:
            problems.append(f"ic_alpha={report.score.ic_alpha!r}")
        problems.extend(str(v) for v in _cell_bound_violations(report))
        if problems:
            failures.append({"protocol": report.protocol, "seed": report.seed, "problems": problems})
    detail = {
        "protocols": len(reports),
        "max_i_b": max_i_b,
        "max_beta": max_beta,
        "max_ic_alpha": max_alpha,
        "failures": failures[:10],
    }
    return CheckResult("setting-info-necessity", not failures, detail)


def _check_outcome_necessity(reports: list[AnalysisReport]) -> CheckResult:
    kept = [
        r for r in reports if r.info.i_B <= 1e-9 and abs(r.info.h_B - 1.0) <= 1e-9
    ]
    failures = [
        {"protocol": r.protocol, "seed": r.seed, "beta": r.score.beta_score}
        for r in kept
        if r.score.beta_score > 0.75 + 1e-6
    ]
    detail = {
        "corpus": len(reports),
        "filtered": len(kept),
        "max_beta_filtered": max((r.score.beta_score for r in kept), default=0.0),
        "failures": failures[:10],
    }
    return CheckResult("outcome-info-necessity", bool(kept) and not failures, detail)


def _check_biased_violation() -> CheckResult:
    one = analyze(make_biased_strategy(0.8, "one"))
    zero = analyze(make_biased_strategy(0.8, "zero"))
    v000 = one.score.variant_scores[VariantSpec(0, 0, 0)]
    v101 = zero.score.variant_scores[VariantSpec(1, 0, 1)]
    relabelled = relabel(one.joint, {"A": _BIT_FLIP, "b": _BIT_FLIP})
    exact_match = relabelled.pmf == zero.joint.pmf and relabelled.variables == zero.joint.variables
    detail = {
        "one_i_B": one.info.i_B,
        "one_variant_000": v000,
        "zero_i_B": zero.info.i_B,
        "zero_variant_101": v101,
        "relabel_exact": exact_match,
        "one_violations": [v.label for v in one.score.violations],
        "zero_violations": [v.label for v in zero.score.violations],
    }
    ok = (
        one.info.i_B <= 1e-12
        and zero.info.i_B <= 1e-12
        and abs(v000 - 0.9) <= 1e-12
        and abs(v101 - 0.9) <= 1e-12
        and exact_match
        and VariantSpec(0, 0, 0) in one.score.violations
        and VariantSpec(1, 0, 1) in zero.score.violations
    )
    return CheckResult("biased-marginal-violation", ok, detail)


def _check_fano_consistency(reports: list[AnalysisReport]) -> CheckResult:
    worst = 0.0
    failures = []
    for report in reports:
        m0 = binary_entropy(report.score.p_match_a0) - (report.info.h_B - report.info.i_B)
        m1 = binary_entropy(report.score.p_match_a1) - (report.info.h_Bxorb - report.info.i_Bxorb)
        worst = min(worst, m0, m1)
        if m0 < -1e-9 or m1 < -1e-9:
            failures.append(
                {"protocol": report.protocol, "seed": report.seed, "margins": [m0, m1]}
            )
    detail = {"joints": len(reports), "worst_margin": worst, "failures": failures[:10]}
    return CheckResult("fano-consistency", not failures, detail)


def _check_inversion_roundtrip() -> CheckResult:
    worst = 0.0
    for i in range(1001):
        h = i / 1000
        worst = max(worst, abs(binary_entropy(inv_binary_entropy_upper(h)) - h))
    return CheckResult("entropy-inversion-roundtrip", worst <= 1e-10, {"max_gap": worst})


def _check_monte_carlo(mc_trials: int) -> CheckResult:
    rows = []
    ok = True
    for ref in BUILTIN_PROTOCOLS:
        protocol = resolve_protocol(ref)
        exact = beta_score(exact_joint(protocol)).beta_score
        emp = empirical_scores(sample_joint(protocol, mc_trials, SHIPPED_MC_SEED))
        gap = abs(emp["beta_score"] - exact)
        ok = ok and gap <= 0.005
        rows.append({"protocol": ref, "beta_exact": exact, "beta_emp": emp["beta_score"], "gap": gap})
    return CheckResult("monte-carlo-agreement", ok, {"trials": mc_trials, "results": rows})


def _broken_b_independent() -> AnalysisReport:
    # chi = b mislabelled as setting-blind: the negative control the
    # setting-necessity check must catch.
    p = make_one_bit_pr()
    report = analyze(p)
    return AnalysisReport(
        protocol="broken:chi-equals-b",
        seed=None,
        score=report.score,
        info=report.info,
        standard_conditionals=report.standard_conditionals,
        cells=report.cells,
        joint=report.joint,
    )


def run_verification(
    seed: int = DEFAULT_SEED,
    corpus_size: int = DEFAULT_CORPUS_SIZE,
    resolution: int = DEFAULT_RESOLUTION,
    mc_trials: int = DEFAULT_MC_TRIALS,
    inject_broken: bool = False,
    workers: int | None = 1,
) -> VerifyReport:
    """Run every check; all corpus seeds derive from the one master seed."""
    rng = np.random.default_rng(seed)
    seeds_b = [int(s) for s in rng.integers(0, 2**63, size=corpus_size)]
    seeds_o = [int(s) for s in rng.integers(0, 2**63, size=corpus_size)]

    surface = scan_surface(resolution, workers=workers)

    start_b = time.perf_counter()
    reports_b = [analyze(random_protocol_b_independent(s)) for s in seeds_b]
    corpus_b_elapsed = time.perf_counter() - start_b
    if inject_broken:
        reports_b.append(_broken_b_independent())

    start_o = time.perf_counter()
    reports_o = []
    for i, s in enumerate(seeds_o):
        if i % 3 == 0:
            protocol = random_protocol(s)
        elif i % 3 == 1:
            protocol = random_protocol_outcome_masked(s, xor_message=False)
        else:
            protocol = random_protocol_outcome_masked(s, xor_message=True)
        reports_o.append(analyze(protocol))
    corpus_o_elapsed = time.perf_counter() - start_o

    builtin_reports = [analyze(resolve_protocol(ref)) for ref in BUILTIN_PROTOCOLS]
    all_reports = builtin_reports + reports_b + reports_o

    def _plus(check: CheckResult, extra: float) -> CheckResult:
        return CheckResult(check.name, check.passed, check.detail, check.elapsed + extra)

    checks = (
        _timed(lambda: _check_beta_surface(surface)),
        _timed(lambda: _check_alpha_surface(surface)),
        _timed(_check_local_deterministic),
        _timed(_check_one_bit_pr),
        _plus(_timed(lambda: _check_setting_necessity(reports_b)), corpus_b_elapsed),
        _plus(_timed(lambda: _check_outcome_necessity(reports_o)), corpus_o_elapsed),
        _timed(_check_biased_violation),
        _timed(lambda: _check_fano_consistency(all_reports)),
        _timed(_check_inversion_roundtrip),
        _timed(lambda: _check_monte_carlo(mc_trials)),
    )
    return VerifyReport(seed, corpus_size, resolution, mc_trials, checks)
