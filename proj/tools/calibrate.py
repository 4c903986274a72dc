#!/usr/bin/env python3
"""Calibration run for the acceptance thresholds.

Runs every acceptance configuration through the jumpest CLI on three seeds
that the acceptance suite does not use, and prints a Markdown table of the
statistics each threshold is applied to.

    tools/calibrate.py --bin build/tools/jumpest --work /tmp/calibration
"""

import argparse
import json
import pathlib
import subprocess
import sys

HERE = pathlib.Path(__file__).resolve().parent
MODELS = HERE / "calibration"
SEEDS = (101, 102, 103)


def run(binary, work, name, seed, args):
    out = work / f"{name}_{seed}"
    cmd = [binary, "experiment", "--seed", str(seed), "--out", str(out), *args]
    subprocess.run(cmd, check=True, stdout=subprocess.DEVNULL)
    return json.loads((out / "summary.json").read_text())["aggregates"]


def model(name):
    return ["--model", str(MODELS / f"{name}.json")]


def calibrate(binary, work, seed):
    rows = []

    a = run(binary, work, "lamn_exact", seed,
            ["--kind", "lamn-exact", "--n", "1000", "--replicates", "1000", *model("compound_poisson")])
    rows.append(("1", "max abs LAMN residual, h in {-2,-1,1,2}", a["max_abs_residual"], "<= 1e-10"))

    a = run(binary, work, "info", seed, ["--kind", "info-identity", "--replicates", "100000"])
    rows.append(("2", "max relative error of 1/I split", a["max_rel_error"], "<= 1e-12"))

    a = run(binary, work, "consistency", seed,
            ["--kind", "consistency", "--n", "100,1000,10000", "--replicates", "2000", *model("compound_poisson")])
    for n in (100, 1000, 10000):
        rows.append(("3", f"alignment rate, n = {n}", a[f"detection_rate@n={n}"],
                     ">= 0.99" if n == 10000 else "increasing"))

    a = run(binary, work, "clt", seed,
            ["--kind", "clt", "--n", "4000", "--replicates", "5000", *model("compound_poisson")])
    rows.append(("4", "KS distance / 1% critical value", a["ks_distance@n=4000"] / a["ks_critical_1pct@n=4000"], "< 1"))

    a = run(binary, work, "rate", seed,
            ["--kind", "clt", "--n", "1000,4000", "--replicates", "5000", *model("compound_poisson")])
    rows.append(("5", "RMSE ratio n = 1e3 : 4e3", a["rmse_ratio@n=1000:4000"], "2 +/- 0.3"))

    for name in ("compound_poisson", "bounded_sine"):
        a = run(binary, work, f"efficiency_{name}", seed,
                ["--kind", "efficiency", "--n", "10000", "--replicates", "10000", *model(name)])
        rows.append(("6", f"{name}: max abs decile ratio - 1", a["max_abs_ratio_deviation@n=10000"], "<= 0.10"))
        rows.append(("6", f"{name}: x1.5 control, max abs ratio - 1",
                     a["control_inflated_max_abs_deviation@n=10000"], "> 0.10"))

    a = run(binary, work, "frac", seed,
            ["--kind", "frac-uniform", "--n", "10000", "--replicates", "10000", *model("three_jumps")])
    rows.append(("7", "frac KS distance / 1% critical value",
                 a["ks_distance_frac@n=10000"] / a["ks_critical_1pct@n=10000"], "< 1"))
    rows.append(("7", "max abs stratum var / midpoint - 1", a["max_stratum_ratio_deviation@n=10000"], "<= 0.10"))

    a = run(binary, work, "lamn_stats", seed,
            ["--kind", "lamn-stats", "--n", "1000,4000,10000,16000", "--replicates", "4000", *model("modulated")])
    rows.append(("8", "N_n KS distance / 1% critical value, n = 1e4",
                 a["ks_distance_n_n@n=10000"] / a["ks_critical_1pct@n=10000"], "< 1"))
    for n in (1000, 4000, 16000):
        rows.append(("8", f"median rel. error of I_n, n = {n}", a[f"median_rel_error_i@n={n}"], "decreasing"))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--bin", default="build/tools/jumpest")
    parser.add_argument("--work", default="calibration_out")
    args = parser.parse_args()
    work = pathlib.Path(args.work)
    work.mkdir(parents=True, exist_ok=True)

    per_seed = {}
    for seed in SEEDS:
        print(f"seed {seed} ...", file=sys.stderr)
        per_seed[seed] = calibrate(args.bin, work, seed)

    header = "| criterion | statistic | " + " | ".join(f"seed {s}" for s in SEEDS) + " | threshold |"
    print(header)
    print("|" + "---|" * (len(SEEDS) + 3))
    first = per_seed[SEEDS[0]]
    for i, (crit, label, _, threshold) in enumerate(first):
        values = " | ".join(f"{per_seed[s][i][2]:.4g}" for s in SEEDS)
        print(f"| {crit} | {label} | {values} | {threshold} |")


if __name__ == "__main__":
    main()
