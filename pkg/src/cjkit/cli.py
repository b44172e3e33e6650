"""Command-line front end.

Subcommands: ``fit`` (estimate log-strengths from a comparison CSV),
``simulate`` (write a simulated assessment), ``study`` (repeated-simulation
accuracy summaries), ``bootstrap`` (bias-corrected estimates with
intervals) and ``profiles`` (pair meeting probabilities next to penalty
profiles). Exit codes: 0 success, 2 usage, 3 malformed or inconsistent
data, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io as cjio
from .bootstrap import BootstrapConfig, BootstrapError, bias_correct
from .fitter import FitConfig, NonFiniteEstimateError, NotConvergedError, fit
from .metrics import empirical_comparison_probability, penalty_profile, profile_correlation
from .model import DisconnectedError, assessment_from_counts
from .penalties import PENALTY_KINDS, PenaltySpec
from .scheduling import SCHEDULER_KINDS, SchedulerSpec, derive_rng, resimulate_assessment, round_robin_rounds, simulate_assessment
from .strengths import DISTRIBUTION_KINDS, DistributionSpec, true_strengths
from .study import penalty_reports, simulate_ensemble
from .svg import write_heatmap

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

FORMAT_NOTE = (
    "comparison CSV: header round,winner,loser (round optional, judge column ignored); "
    "one row per comparison"
)


def _default_seed() -> int:
    raw = os.environ.get("CJ_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise cjio.ComparisonFormatError(f"CJ_SEED must be an integer, got {raw!r}") from None


def _labels_for(n: int) -> list[str]:
    width = len(str(n))
    return [f"item{k + 1:0{width}d}" for k in range(n)]


def _penalty_from(args) -> PenaltySpec:
    return PenaltySpec(args.penalty, args.constant)


def cmd_fit(args) -> int:
    labels, counts = cjio.read_comparisons(args.data)
    try:
        result = fit(counts, _penalty_from(args))
    except NonFiniteEstimateError as exc:
        named = ", ".join(labels[i] for i in exc.items)
        print(f"error: estimate is not finite for item(s): {named}; use a penalty", file=sys.stderr)
        return EXIT_NUMERIC
    except DisconnectedError as exc:
        groups = "; ".join(", ".join(labels[i] for i in g) for g in exc.components)
        print(f"error: comparison graph is disconnected: {groups}", file=sys.stderr)
        return EXIT_DATA
    cjio.write_fit(args.out, labels, result.log_strengths)
    print(
        f"fit: {counts.n_items} items, penalty {result.penalty.kind}, "
        f"{result.iterations} sweeps, max residual {result.max_score_residual:.2e} -> {args.out}"
    )
    return EXIT_OK


def cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    truth = true_strengths(DistributionSpec(args.distribution, args.n_items))
    assessment = simulate_assessment(truth, SchedulerSpec(args.scheduler, args.rounds), seed)
    cjio.write_comparisons(args.out, _labels_for(args.n_items), assessment)
    print(
        f"simulate: {args.distribution}/{args.scheduler}, {args.n_items} items, "
        f"{args.rounds} rounds, seed {seed} -> {args.out}"
    )
    return EXIT_OK


def cmd_study(args) -> int:
    config = cjio.load_run_config(args.config) if args.config else cjio.RunConfig()
    config = cjio.apply_overrides(
        config,
        distributions=args.distribution,
        schedulers=args.scheduler,
        penalties=args.penalty,
        n_items=args.n_items,
        rounds=args.rounds,
        n_sims=args.n_sims,
        seed=args.seed,
        out_dir=args.out,
        jobs=args.jobs,
    )
    os.makedirs(config.out_dir, exist_ok=True)
    for di, dist in enumerate(config.distributions):
        truth = true_strengths(DistributionSpec(dist, config.n_items))
        for si, sched in enumerate(config.schedulers):
            reports = penalty_reports(
                truth,
                SchedulerSpec(sched, config.rounds),
                config.penalties,
                config.n_sims,
                seed=(config.seed, di, si),
                jobs=config.jobs,
                meta={"distribution": dist, "master_seed": config.seed},
            )
            for kind, report in reports.items():
                stem = f"{dist}_{sched}_{kind}"
                cjio.write_study(os.path.join(config.out_dir, f"study_{stem}.csv"), report)
                cjio.write_sd_series(os.path.join(config.out_dir, f"sd_{stem}.csv"), report.per_sim_sd)
                mean_abs_bias = float(np.mean(np.abs(report.per_item_bias)))
                median_sd = float(np.median(report.per_sim_sd))
                print(
                    f"study: {dist}/{sched}/{kind}: mean |bias| {mean_abs_bias:.4f}, "
                    f"median sd {median_sd:.4f} ({config.n_sims} sims)"
                )
    return EXIT_OK


def cmd_bootstrap(args, parser: argparse.ArgumentParser) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if bool(args.data) == bool(args.simulate):
        parser.error("exactly one of --data or --simulate is required")
    if args.m < 10:
        print(f"warning: m={args.m} replicates give noisy corrections and wide intervals", file=sys.stderr)

    if args.data:
        if args.scheduler is None:
            parser.error("--scheduler is required with --data (how the schedule arose matters)")
        if args.scheduler == "swiss":
            labels, assessment = cjio.read_assessment(args.data)
        else:
            labels, counts = cjio.read_comparisons(args.data)
            assessment = assessment_from_counts(counts)
            print("note: random scheduling, replicates reuse the observed comparisons as scheduled")
        scheduler = args.scheduler
    else:
        scheduler = args.scheduler or "swiss"
        truth = true_strengths(DistributionSpec(args.distribution, args.n_items))
        assessment = simulate_assessment(truth, SchedulerSpec(scheduler, args.rounds), seed)
        labels = _labels_for(args.n_items)

    config = BootstrapConfig(m=args.m, penalty=_penalty_from(args), seed=seed, ci_level=args.ci_level)
    result = bias_correct(assessment, scheduler, config)
    cjio.write_bootstrap(args.out, labels, result)
    shift = float(np.mean(np.abs(result.corrected - result.original)))
    print(
        f"bootstrap: {len(labels)} items, {config.m} replicates, penalty {config.penalty.kind}, "
        f"mean |correction| {shift:.4f} -> {args.out}"
    )
    return EXIT_OK


def cmd_profiles(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    truth = true_strengths(DistributionSpec(args.distribution, args.n_items))
    if args.round_robin:
        # fixed all-pairs schedule: every pair meets, probabilities are all one
        rounds = round_robin_rounds(args.n_items)
        base_winners = tuple(tuple(i for i, _ in rnd) for rnd in rounds)
        from .model import Assessment, Tournament

        base = Assessment(Tournament(args.n_items, rounds), base_winners)
        rng = derive_rng(seed)
        ensemble = [resimulate_assessment(base, "random", truth, rng) for _ in range(args.n_sims)]
    else:
        ensemble = simulate_ensemble(
            truth, SchedulerSpec(args.scheduler, args.rounds), args.n_sims, seed, jobs=args.jobs
        )
    prob = empirical_comparison_probability(ensemble)
    profiles = {
        "comparison_probability": prob,
        "dummy_profile": penalty_profile(truth, "dummy"),
        "alpha_profile": penalty_profile(truth, "alpha"),
    }
    os.makedirs(args.out, exist_ok=True)
    for name, matrix in profiles.items():
        cjio.write_matrix(os.path.join(args.out, f"{name}.csv"), matrix)
        if args.svg:
            write_heatmap(os.path.join(args.out, f"{name}.svg"), matrix, name.replace("_", " "))
    r_alpha = profile_correlation(prob, profiles["alpha_profile"])
    r_dummy = profile_correlation(prob, profiles["dummy_profile"])
    print(
        f"profiles: {args.distribution}/{'round-robin' if args.round_robin else args.scheduler}, "
        f"{args.n_sims} sims; correlation with alpha profile {r_alpha:.3f}, "
        f"with dummy profile {r_dummy:.3f} -> {args.out}"
    )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cjkit", description=__doc__, epilog=FORMAT_NOTE)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_penalty(p, default="none"):
        p.add_argument("--penalty", choices=PENALTY_KINDS, default=default)
        p.add_argument("--constant", type=float, default=None, help="penalty constant (kind default if omitted)")

    def add_seed(p):
        p.add_argument("--seed", type=int, default=None, help="master seed (default: CJ_SEED or 0)")

    p_fit = sub.add_parser("fit", help="fit log-strengths from a comparison CSV", epilog=FORMAT_NOTE)
    p_fit.add_argument("--data", required=True)
    add_penalty(p_fit)
    p_fit.add_argument("--out", default="fit.csv")
    p_fit.set_defaults(func=cmd_fit)

    p_sim = sub.add_parser("simulate", help="simulate an assessment and write it as CSV")
    p_sim.add_argument("--distribution", choices=DISTRIBUTION_KINDS, default="normal")
    p_sim.add_argument("--scheduler", choices=SCHEDULER_KINDS, default="random")
    p_sim.add_argument("--n-items", type=int, default=100)
    p_sim.add_argument("--rounds", type=int, default=20)
    add_seed(p_sim)
    p_sim.add_argument("--out", default="assessment.csv")
    p_sim.set_defaults(func=cmd_simulate)

    p_study = sub.add_parser("study", help="repeated-simulation bias/MAE/SD summaries")
    p_study.add_argument("--config", help="JSON run configuration; flags override its fields")
    p_study.add_argument("--distribution", choices=DISTRIBUTION_KINDS, default=None)
    p_study.add_argument("--scheduler", choices=SCHEDULER_KINDS, default=None)
    p_study.add_argument("--penalty", choices=PENALTY_KINDS, default=None)
    p_study.add_argument("--n-items", type=int, default=None)
    p_study.add_argument("--rounds", type=int, default=None)
    p_study.add_argument("--n-sims", type=int, default=None)
    p_study.add_argument("--jobs", type=int, default=None)
    p_study.add_argument("--seed", type=int, default=None)
    p_study.add_argument("--out", default=None, help="output directory")
    p_study.set_defaults(func=cmd_study)

    p_boot = sub.add_parser("bootstrap", help="bootstrap bias correction with intervals")
    p_boot.add_argument("--data", help="comparison CSV (swiss needs the round column)")
    p_boot.add_argument("--simulate", action="store_true", help="simulate the assessment instead of reading one")
    p_boot.add_argument("--scheduler", choices=SCHEDULER_KINDS, default=None)
    p_boot.add_argument("--distribution", choices=DISTRIBUTION_KINDS, default="normal")
    p_boot.add_argument("--n-items", type=int, default=100)
    p_boot.add_argument("--rounds", type=int, default=20)
    p_boot.add_argument("--m", type=int, default=40, help="bootstrap replicates")
    add_penalty(p_boot, default="alpha")
    p_boot.add_argument("--ci-level", type=float, default=0.95)
    add_seed(p_boot)
    p_boot.add_argument("--out", default="bootstrap.csv")
    p_boot.set_defaults(func=cmd_bootstrap, needs_parser=True)

    p_prof = sub.add_parser("profiles", help="pair meeting probabilities and penalty profiles")
    p_prof.add_argument("--distribution", choices=DISTRIBUTION_KINDS, default="normal")
    p_prof.add_argument("--scheduler", choices=SCHEDULER_KINDS, default="swiss")
    p_prof.add_argument("--round-robin", action="store_true", help="fixed all-pairs schedule instead")
    p_prof.add_argument("--n-items", type=int, default=100)
    p_prof.add_argument("--rounds", type=int, default=20)
    p_prof.add_argument("--n-sims", type=int, default=200)
    p_prof.add_argument("--jobs", type=int, default=1)
    p_prof.add_argument("--svg", action="store_true", help="also write SVG heatmaps")
    add_seed(p_prof)
    p_prof.add_argument("--out", default="profiles", help="output directory")
    p_prof.set_defaults(func=cmd_profiles)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "needs_parser", False):
            return args.func(args, parser)
        return args.func(args)
    except NonFiniteEstimateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (NotConvergedError, BootstrapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DisconnectedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (cjio.ComparisonFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
