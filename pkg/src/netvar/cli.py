"""Command-line front end.

Subcommands::

    netvar moments   --samples F                 empirical moments + diagnostics
    netvar stats     --samples F | --cov F       variability statistics
    netvar test      --samples F | --cov F --m N asymptotic significance tests
    netvar mc        --samples F | --cov F --m N Monte Carlo significance values
    netvar classify  --samples F                 entropy classification

Input is selected explicitly by flag (``--samples`` for the sample-set
text format, ``--cov`` for a covariance CSV), never sniffed.  JSON output
carries full float precision; the table view prints 7 significant digits.
Exit code is 0 only when no errors occurred; warnings do not affect it.
"""

import argparse
import json
import sys
from dataclasses import dataclass

from . import asymptotic, montecarlo
from .graphs import NodeSet, SampleSet, SampleSetError, parse_sample_set
from .moments import CovMatrix, MomentEstimate, estimate_moments, validate_covariance
from .variability import StatKind, classify_entropy, describe, frobenius_bounds

SCHEMA_VERSION = "1"
METHOD_NAMES = ("tt", "tg1", "tg2", "tn")
MC_STATS = {"vart": StatKind.TOTAL, "varg": StatKind.GENERALIZED, "varn": StatKind.FROBENIUS}


@dataclass
class Inputs:
    source: str
    path: str
    sigma: CovMatrix
    m: int | None
    k: int
    nodes: NodeSet | None
    samples: SampleSet | None
    estimate: MomentEstimate | None
    estimator: str | None
    warnings: list


def _csv_list(valid, flag):
    def convert(text):
        items = [t.strip() for t in text.split(",") if t.strip()]
        bad = [t for t in items if t not in valid]
        if bad or not items:
            raise argparse.ArgumentTypeError(
                f"{flag} takes a comma-separated subset of {','.join(valid)}"
            )
        return items

    return convert


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netvar",
        description="Variability statistics and significance tests for "
        "bootstrapped network structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, cov_input=True, need_m=False):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--samples", metavar="FILE", help="sample-set text file")
        if cov_input:
            src.add_argument("--cov", metavar="FILE", help="covariance CSV file")
            p.add_argument("--m", type=int, help="sample count behind a covariance CSV"
                           + (" (required with --cov)" if need_m else ""))
        p.add_argument("--directed", action="store_true",
                       help="treat sample-set edge lines as arcs")
        p.add_argument("--estimator", choices=("plugin", "unbiased"), default="plugin",
                       help="covariance estimator for sample-set input")
        p.add_argument("--format", choices=("json", "table"), default="table")
        p.add_argument("--force", action="store_true",
                       help="proceed when the covariance violates its bounds")

    p = sub.add_parser("moments", help="empirical edge moments")
    add_common(p, cov_input=False)

    p = sub.add_parser("stats", help="variability statistics")
    add_common(p)
    p.add_argument("--rank-policy", choices=("strict", "reduce"), default="reduce")

    p = sub.add_parser("test", help="asymptotic significance tests")
    add_common(p, need_m=True)
    p.add_argument("--methods", type=_csv_list(METHOD_NAMES, "--methods"),
                   default=list(METHOD_NAMES), metavar="tt,tg1,tg2,tn")
    p.add_argument("--adjusted", action="store_true",
                   help="accepted for compatibility; raw and corrected "
                        "significance are always both reported")

    p = sub.add_parser("mc", help="Monte Carlo significance values")
    add_common(p, need_m=True)
    p.add_argument("--mc-stat", type=_csv_list(tuple(MC_STATS), "--mc-stat"),
                   default=list(MC_STATS), metavar="vart,varg,varn")
    p.add_argument("--replicates", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None,
                   help="Monte Carlo worker threads (NETVAR_THREADS caps this)")

    p = sub.add_parser("classify", help="entropy classification of a sample set")
    add_common(p, cov_input=False)

    return parser


def _load(args, need_m: bool) -> Inputs:
    warnings: list = []
    if args.samples:
        with open(args.samples, "r", encoding="utf-8") as fh:
            samples = parse_sample_set(fh, directed=args.directed)
        est = estimate_moments(samples, args.estimator)
        return Inputs("samples", args.samples, est.sigma, samples.m, samples.k,
                      samples.nodes, samples, est, args.estimator, warnings)

    if need_m and args.m is None:
        raise ValueError("--m is required with --cov for this command")
    if args.m is not None and args.m < 1:
        raise ValueError(f"--m must be >= 1, got {args.m}")
    with open(args.cov, "r", encoding="utf-8") as fh:
        sigma = CovMatrix.from_csv_text(fh.read())
    return Inputs("covariance", args.cov, sigma, args.m, sigma.k,
                  None, None, None, None, warnings)


def _check_bounds(inputs: Inputs, force: bool):
    diag = validate_covariance(inputs.sigma)
    if not diag.valid:
        lines = "; ".join(
            f"{v.kind}{list(v.where)}: {v.value:.7g} vs bound {v.bound:.7g}"
            for v in diag.violations
        )
        if inputs.source == "samples":
            # estimated covariances only breach the bounds through the
            # bias-corrected estimator; report, do not refuse
            inputs.warnings.append(f"estimated covariance outside the bounds: {lines}")
        elif not force:
            raise ValueError(f"covariance violates its bounds ({lines}); use --force to proceed")
        else:
            inputs.warnings.append(f"covariance bounds violated, continuing under --force: {lines}")
    if inputs.sigma.clamped:
        inputs.warnings.append(
            f"eigenvalues within {abs(inputs.sigma.min_raw_eigenvalue):.3g} below 0 clamped to 0"
        )
    return diag


def _base_report(command: str, inputs: Inputs) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input": {
            "source": inputs.source,
            "path": inputs.path,
            "m": inputs.m,
            "k": inputs.k,
            "nodes": list(inputs.nodes.labels) if inputs.nodes else None,
            "estimator": inputs.estimator,
        },
        "warnings": inputs.warnings,
    }


def _diag_json(diag) -> dict:
    return {
        "valid": diag.valid,
        "violations": [
            {"kind": v.kind, "where": list(v.where), "value": v.value, "bound": v.bound}
            for v in diag.violations
        ],
    }


def _stat_json(sv) -> dict:
    return {
        "kind": sv.kind.value,
        "raw": sv.raw,
        "normalized": sv.normalized,
        "complemented": sv.complemented,
        "rank_deficient": sv.rank_deficient,
        "k_effective": sv.k_effective,
    }


def cmd_moments(args) -> dict:
    inputs = _load(args, need_m=False)
    est = inputs.estimate
    diag = _check_bounds(inputs, force=True)  # estimated covariances cannot fail
    report = _base_report("moments", inputs)
    report["moments"] = {
        "p_hat": est.p_hat.tolist(),
        "p_hat2": est.p_hat2.tolist(),
        "sigma": est.sigma.entries.tolist(),
        "eigenvalues": est.sigma.eigenvalues.tolist(),
    }
    report["diagnostics"] = _diag_json(diag)
    summary = classify_entropy(inputs.samples)
    report["entropy"] = {
        "classification": summary.classification,
        "structures": [{"edges": bits, "count": n} for bits, n in summary.frequencies],
    }
    return report


def cmd_stats(args) -> dict:
    inputs = _load(args, need_m=False)
    diag = _check_bounds(inputs, args.force)
    values = describe(inputs.sigma, args.rank_policy)
    for sv in values:
        if sv.rank_deficient:
            inputs.warnings.append(
                f"generalized variance rank-reduced to k_effective={sv.k_effective}"
            )
    lo, hi = frobenius_bounds(inputs.k)
    report = _base_report("stats", inputs)
    report["covariance"] = {
        "matrix": inputs.sigma.entries.tolist(),
        "eigenvalues": inputs.sigma.eigenvalues.tolist(),
    }
    report["diagnostics"] = _diag_json(diag)
    report["statistics"] = [_stat_json(sv) for sv in values]
    report["frobenius_bounds"] = {"min": lo, "max": hi}
    return report


def cmd_test(args) -> dict:
    inputs = _load(args, need_m=True)
    _check_bounds(inputs, args.force)
    report = _base_report("test", inputs)
    labels = {"tt": "t_T", "tg1": "t_G1", "tg2": "t_G2", "tn": "t_N"}
    results = []
    for name in args.methods:
        fn = asymptotic.METHODS[name]
        try:
            r = fn(inputs.sigma, inputs.m)
        except ValueError as exc:
            results.append({"method": labels[name], "error": str(exc)})
            continue
        results.append({
            "method": r.method,
            "statistic": r.statistic,
            "params": r.params,
            "p_raw": r.p_raw,
            "p_adjusted": r.p_adjusted,
            "m": r.m,
            "k": r.k,
        })
    report["tests"] = results
    return report


def cmd_mc(args) -> dict:
    inputs = _load(args, need_m=True)
    _check_bounds(inputs, args.force)
    kinds = tuple(MC_STATS[name] for name in args.mc_stat)
    estimates = montecarlo.mc_pvalues(
        inputs.sigma, kinds, args.replicates, inputs.m, args.seed, workers=args.workers
    )
    report = _base_report("mc", inputs)
    entries = []
    for est in estimates:
        entry = {
            "stat": est.stat.value,
            "p_value": est.p_value,
            "replicates": est.replicates,
            "stderr": est.stderr,
            "seed": est.seed,
            "observed_statistic": est.observed_statistic,
            "estimator": est.estimator,
            "p_value_upper_bound": 1.0 / est.replicates if est.below_resolution else None,
        }
        if est.below_resolution:
            inputs.warnings.append(
                f"{est.stat.value}: no replicate reached the observed statistic; "
                f"p < {1.0 / est.replicates:.7g}"
            )
        entries.append(entry)
    report["mc"] = entries
    return report


def cmd_classify(args) -> dict:
    inputs = _load(args, need_m=False)
    report = _base_report("classify", inputs)
    summary = classify_entropy(inputs.samples)
    values = describe(inputs.sigma, "reduce")
    report["entropy"] = {
        "classification": summary.classification,
        "structures": [
            {"edges": bits, "count": n, "frequency": n / inputs.m}
            for bits, n in summary.frequencies
        ],
        "distance_from_max_entropy": {
            sv.kind.value: sv.complemented for sv in values
        },
    }
    return report


COMMANDS = {
    "moments": cmd_moments,
    "stats": cmd_stats,
    "test": cmd_test,
    "mc": cmd_mc,
    "classify": cmd_classify,
}


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.7g}"
    return str(x)


def _emit_table(report, out):
    inp = report["input"]
    where = f"{inp['source']} {inp['path']}"
    print(f"netvar {report['command']}: {where} (m={inp['m']}, k={inp['k']})", file=out)
    if report.get("moments"):
        print("p_hat: " + " ".join(_fmt(v) for v in report["moments"]["p_hat"]), file=out)
        print("sigma:", file=out)
        for row in report["moments"]["sigma"]:
            print("  " + " ".join(f"{v:12.7g}" for v in row), file=out)
        print("eigenvalues: "
              + " ".join(_fmt(v) for v in report["moments"]["eigenvalues"]), file=out)
    if report.get("covariance"):
        print("eigenvalues: "
              + " ".join(_fmt(v) for v in report["covariance"]["eigenvalues"]), file=out)
    if report.get("diagnostics"):
        d = report["diagnostics"]
        print(f"covariance bounds: {'ok' if d['valid'] else 'VIOLATED'}", file=out)
        for v in d["violations"]:
            print(f"  {v['kind']}{v['where']}: {_fmt(v['value'])} vs {_fmt(v['bound'])}",
                  file=out)
    if report.get("statistics"):
        print(f"{'statistic':12s} {'raw':>14s} {'normalized':>14s} {'complemented':>14s}",
              file=out)
        for sv in report["statistics"]:
            flag = f" (rank-reduced, k_eff={sv['k_effective']})" if sv["rank_deficient"] else ""
            print(f"{sv['kind']:12s} {sv['raw']:14.7g} {sv['normalized']:14.7g} "
                  f"{sv['complemented']:14.7g}{flag}", file=out)
    if report.get("tests"):
        print(f"{'method':8s} {'statistic':>14s} {'p_raw':>14s} {'p_adjusted':>14s}", file=out)
        for r in report["tests"]:
            if "error" in r:
                print(f"{r['method']:8s} error: {r['error']}", file=out)
            else:
                print(f"{r['method']:8s} {r['statistic']:14.7g} {r['p_raw']:14.7g} "
                      f"{r['p_adjusted']:14.7g}", file=out)
    if report.get("mc"):
        print(f"{'statistic':12s} {'p_value':>12s} {'stderr':>12s} {'observed':>14s} "
              f"{'R':>9s} {'seed':>6s}", file=out)
        for e in report["mc"]:
            p = _fmt(e["p_value"]) if not e["p_value_upper_bound"] else \
                f"<{_fmt(e['p_value_upper_bound'])}"
            print(f"{e['stat']:12s} {p:>12s} {e['stderr']:12.7g} "
                  f"{e['observed_statistic']:14.7g} {e['replicates']:9d} {e['seed']:6d}",
                  file=out)
    if report.get("entropy"):
        ent = report["entropy"]
        print(f"entropy: {ent['classification']}", file=out)
        for s in ent["structures"]:
            freq = f" ({_fmt(s['frequency'])})" if "frequency" in s else ""
            print(f"  {s['edges']} x{s['count']}{freq}", file=out)
        if "distance_from_max_entropy" in ent:
            d = ent["distance_from_max_entropy"]
            print("distance from maximum entropy: "
                  + " ".join(f"{k}={_fmt(v)}" for k, v in d.items()), file=out)
    for w in report["warnings"]:
        print(f"warning: {w}", file=out)


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        json.dump(report, out, indent=2)
        out.write("\n")
    else:
        _emit_table(report, out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except (SampleSetError, ValueError, OSError) as exc:
        print(f"netvar: error: {exc}", file=sys.stderr)
        return 1
    emit(report, args.format)
    failed = any("error" in r for r in report.get("tests", ()))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
