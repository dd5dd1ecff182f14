"""Command-line front door.

Subcommands: ``toy`` (exact toy-system table, self-checking), ``sweep``
(random-system search for the synergy-change sign structure), ``analyze``
(empirical pipeline on a CSV recording), ``simulate`` (write a trajectory CSV
from a toy system or TPM file).

Exit codes: 0 success, 1 usage error, 2 data error, 3 oracle mismatch (toy).
Human-readable tables go to stdout; machine-readable artifacts only to files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .errors import SynphiError
from .info import uniform_distribution
from .measures import (
    EstimatorConfig,
    delta_synergy,
    delta_synergy_closed_form,
    measure_bundle,
)
from .pipeline import (
    csv_mirror_path,
    load_csv,
    run_analysis,
    write_results_csv,
    write_results_jsonl,
)
from .surrogates import SurrogateConfig
from .systems import (
    DynamicalSystem,
    independent_twin,
    joint_past_future,
    make_system_x,
    make_system_y,
    read_tpm,
    simulate,
    with_stationary_input,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ORACLE = 3

ORACLE_TOLERANCE = 1e-9
SIGN_TOLERANCE = 1e-9

# Exact values for the toy table; the CLI is a regression gate against them.
TOY_ORACLES = {
    "X": {"tmi": 2.0, "phi_wms": 0.0, "red_mmi": 0.0, "syn_mmi": 1.0,
          "delta_syn": 0.0, "delta_syn_closed_form": 0.0},
    "Y": {"tmi": 1.0, "phi_wms": 1.0, "red_mmi": 0.0, "syn_mmi": 1.0,
          "delta_syn": -1.0, "delta_syn_closed_form": -1.0},
    "twin(X)": {"tmi": 2.0, "phi_wms": 0.0, "red_mmi": 0.0, "syn_mmi": 1.0,
                "delta_syn": 0.0, "delta_syn_closed_form": 0.0},
    "twin(Y)": {"tmi": 0.0, "phi_wms": 0.0, "red_mmi": 0.0, "syn_mmi": 0.0,
                "delta_syn": 0.0, "delta_syn_closed_form": 0.0},
}
TOY_COLUMNS = ("tmi", "phi_wms", "red_mmi", "syn_mmi", "delta_syn",
               "delta_syn_closed_form")


class _Parser(argparse.ArgumentParser):
    """argparse with the documented usage exit code (1, not argparse's 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _toy_row(system: DynamicalSystem) -> dict:
    bundle = measure_bundle(joint_past_future(system))
    row = {
        "tmi": bundle.temporal_mi,
        "phi_wms": bundle.phi_wms,
        "red_mmi": bundle.redundancy_mmi,
        "syn_mmi": bundle.synergy_mmi,
        "delta_syn": delta_synergy(system),
        "delta_syn_closed_form": delta_synergy_closed_form(joint_past_future(system)),
    }
    return row


def cmd_toy(args) -> int:
    systems = {
        "X": make_system_x(),
        "Y": make_system_y(),
    }
    systems["twin(X)"] = independent_twin(systems["X"])
    systems["twin(Y)"] = independent_twin(systems["Y"])
    rows = {label: _toy_row(system) for label, system in systems.items()}

    header = ["system"] + list(TOY_COLUMNS)
    widths = [max(len(h), 22) for h in header]
    widths[0] = max(len(label) for label in rows) + 2
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    mismatches = []
    for label, row in rows.items():
        cells = [label.ljust(widths[0])]
        for col, w in zip(TOY_COLUMNS, widths[1:]):
            cells.append(f"{row[col]:+.12f}".ljust(w))
            if abs(row[col] - TOY_ORACLES[label][col]) > ORACLE_TOLERANCE:
                mismatches.append((label, col, row[col], TOY_ORACLES[label][col]))
        print("  ".join(cells))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(",".join(header) + "\n")
            for label, row in rows.items():
                fh.write(label + "," + ",".join(repr(row[c]) for c in TOY_COLUMNS) + "\n")
        print(f"wrote {args.out}")
    if mismatches:
        for label, col, got, want in mismatches:
            print(
                f"ORACLE MISMATCH: {label} {col} = {got!r}, expected {want!r}",
                file=sys.stderr,
            )
        return EXIT_ORACLE
    print("all toy values match their oracles to 1e-9")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.count < 1:
        raise SynphiError(f"--count must be >= 1, got {args.count}")
    if not 0 < args.concentration_min <= args.concentration_max:
        raise SynphiError(
            "need 0 < --concentration-min <= --concentration-max, got "
            f"{args.concentration_min} and {args.concentration_max}"
        )
    from .systems import random_system

    log_lo = math.log(args.concentration_min)
    log_hi = math.log(args.concentration_max)
    n_positive = n_negative = n_zero = n_unstable = 0
    discrepancies = []
    with open(args.out, "w") as fh:
        for index in range(args.count):
            rng = np.random.default_rng(np.random.SeedSequence([args.seed, index]))
            concentration = math.exp(rng.uniform(log_lo, log_hi))
            system_seed = int(rng.integers(2**63))
            system = random_system((2, 2), system_seed, concentration)
            if args.input == "stationary":
                system = with_stationary_input(system)
            jpf = joint_past_future(system)
            bundle = measure_bundle(jpf)
            twin_bundle = measure_bundle(joint_past_future(independent_twin(system)))
            delta = twin_bundle.synergy_mmi - bundle.synergy_mmi
            closed = delta_synergy_closed_form(jpf)
            stable = bundle.argmax_source == twin_bundle.argmax_source
            record = {
                "index": index,
                "system_seed": system_seed,
                "concentration": concentration,
                "input": args.input,
            }
            record.update(bundle.to_record())
            record["delta_syn"] = delta
            record["delta_syn_closed_form"] = closed
            record["discrepancy"] = closed - delta
            record["argmax_stable"] = bool(stable)
            fh.write(json.dumps(record) + "\n")
            discrepancies.append(closed - delta)
            if delta > SIGN_TOLERANCE:
                n_positive += 1
            elif delta < -SIGN_TOLERANCE:
                n_negative += 1
            else:
                n_zero += 1
            if not stable:
                n_unstable += 1
        disc = np.asarray(discrepancies)
        summary = {
            "summary": {
                "count": args.count,
                "seed": args.seed,
                "input": args.input,
                "concentration_min": args.concentration_min,
                "concentration_max": args.concentration_max,
                "sign_tolerance": SIGN_TOLERANCE,
                "n_delta_positive": n_positive,
                "n_delta_negative": n_negative,
                "n_delta_zero": n_zero,
                "n_argmax_unstable": n_unstable,
                "discrepancy": {
                    "min": float(disc.min()),
                    "median": float(np.median(disc)),
                    "max": float(disc.max()),
                    "n_nonzero": int((np.abs(disc) > SIGN_TOLERANCE).sum()),
                },
            }
        }
        fh.write(json.dumps(summary) + "\n")
    print(f"swept {args.count} systems (input={args.input})")
    print(
        f"delta_syn > +{SIGN_TOLERANCE:g}: {n_positive}   "
        f"< -{SIGN_TOLERANCE:g}: {n_negative}   |delta| <= tol: {n_zero}"
    )
    print(f"argmax-unstable systems: {n_unstable}")
    print(f"wrote {args.out}")
    return EXIT_OK


def _parse_pairs(value):
    if value == "adjacent":
        return value
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--pairs must be an integer or 'adjacent', got {value!r}"
        ) from None


def _parse_min_shift(value):
    if value == "auto":
        return value
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--min-shift must be an integer or 'auto', got {value!r}"
        ) from None


def cmd_analyze(args) -> int:
    ts = load_csv(args.input)
    if args.pairs == "adjacent":
        pairs = [(i, i + 1) for i in range(0, ts.channel_count - 1, 2)]
    else:
        pairs = args.pairs
    min_shift = args.min_shift
    if min_shift == "auto":
        min_shift = max(1, math.ceil(0.05 * ts.sample_count))
    estimator = EstimatorConfig(
        kind=args.estimator,
        bins=args.bins if args.estimator == "discrete" else None,
        lag=args.lag,
    )
    surrogates = SurrogateConfig(
        n_permutations=args.surrogates,
        master_seed=args.seed,
        min_shift=min_shift,
        max_shift=args.max_shift,
        shift_both=args.shift_both,
    )
    results, summary = run_analysis(
        ts,
        pairs,
        estimator,
        surrogates,
        seed=args.seed,
        n_jobs=args.jobs,
    )
    write_results_jsonl(args.out, results, summary)
    write_results_csv(csv_mirror_path(args.out), results)
    print(
        f"analyzed {summary.pair_count} pairs "
        f"({summary.failed_pair_count} failed) with {estimator.tag} estimator"
    )
    print(f"fraction of pairs with increased temporal MI: "
          f"{summary.fraction_tmi_increase:.4f}")
    for c in summary.correlations:
        p = "nan" if not math.isfinite(c.p_value) else f"{c.p_value:.3g}"
        r = "nan" if not math.isfinite(c.r) else f"{c.r:+.4f}"
        print(f"r({c.x_field}, {c.y_field}) = {r}   p = {p}")
    print(f"wrote {args.out} and {csv_mirror_path(args.out)}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    name = args.system.lower()
    if name == "x":
        system = make_system_x()
    elif name == "y":
        system = make_system_y()
    else:
        model = read_tpm(args.system)
        names = tuple(f"x{i + 1}" for i in range(model.n_elements))
        system = DynamicalSystem(
            model, uniform_distribution(zip(names, model.element_cardinalities))
        )
    series = simulate(system, args.steps, args.seed)
    with open(args.out, "w") as fh:
        fh.write(",".join(system.element_names) + "\n")
        columns = np.column_stack([s.symbols for s in series])
        for row in columns:
            fh.write(",".join(str(int(v)) for v in row) + "\n")
    print(f"wrote {args.steps} samples of {len(series)} channels to {args.out}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="synphi",
        description=__doc__,
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    toy = sub.add_parser(
        "toy",
        help="print the exact toy-system table and self-check it",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    toy.add_argument("--out", default=None, help="optionally write the table as CSV")
    toy.set_defaults(func=cmd_toy)

    sweep = sub.add_parser(
        "sweep",
        help="search random 2-element systems for the synergy-change sign structure",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sweep.add_argument("--count", type=int, default=1000, help="number of systems")
    sweep.add_argument("--seed", type=int, default=0, help="master seed")
    sweep.add_argument("--concentration-min", type=float, default=0.05,
                       help="low end of the Dirichlet concentration range")
    sweep.add_argument("--concentration-max", type=float, default=5.0,
                       help="high end of the Dirichlet concentration range")
    sweep.add_argument("--input", choices=("stationary", "uniform"),
                       default="stationary",
                       help="input distribution for each sampled system")
    sweep.add_argument("--out", required=True, help="JSONL output path")
    sweep.set_defaults(func=cmd_sweep)

    analyze = sub.add_parser(
        "analyze",
        help="run the empirical pipeline on a CSV recording",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    analyze.add_argument("--input", required=True, help="CSV recording (header + numeric body)")
    analyze.add_argument("--out", required=True, help="JSONL output path (CSV mirror written alongside)")
    analyze.add_argument("--pairs", type=_parse_pairs, default=100,
                         help="number of random pairs, or 'adjacent' for columns (1,2),(3,4),...")
    analyze.add_argument("--surrogates", type=int, default=100,
                         help="circular-shift permutations per pair")
    analyze.add_argument("--seed", type=int, default=0, help="master seed")
    analyze.add_argument("--estimator", choices=("gaussian", "discrete"),
                         default="gaussian", help="measure estimator")
    analyze.add_argument("--bins", type=int, default=4,
                         help="bin count for the discrete estimator")
    analyze.add_argument("--lag", type=int, default=1, help="past-to-future lag in samples")
    analyze.add_argument("--min-shift", type=_parse_min_shift, default=1,
                         help="minimum circular shift, or 'auto' for ceil(0.05*T)")
    analyze.add_argument("--max-shift", type=int, default=None,
                         help="maximum circular shift (default T-1)")
    analyze.add_argument("--shift-both", action="store_true",
                         help="shift both channels instead of only the second")
    analyze.add_argument("--jobs", type=int, default=1, help="parallel workers")
    analyze.set_defaults(func=cmd_analyze)

    simulate_p = sub.add_parser(
        "simulate",
        help="simulate a trajectory CSV from a toy system or TPM file",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    simulate_p.add_argument("--system", required=True,
                            help="'x', 'y', or a path to a TPM file")
    simulate_p.add_argument("--steps", type=int, required=True, help="trajectory length")
    simulate_p.add_argument("--seed", type=int, default=0, help="simulation seed")
    simulate_p.add_argument("--out", required=True, help="CSV output path")
    simulate_p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SynphiError as exc:
        print(f"synphi: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"synphi: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
