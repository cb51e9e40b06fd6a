#!/usr/bin/env python3
"""Plot the CSV outputs of one or more `opo simulate` run directories.

usage: plot_runs.py RUN_DIR [RUN_DIR ...] [--out PREFIX]

Produces up to three figures per invocation (orientation variance, rotating
frame spectra, fixed-LO variance), overlaying all given runs together with the
closed-form curves evaluated at each run's parameters.
"""

import argparse
import csv
import json
import math
import os
import sys


def read_csv_cols(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    head, data = rows[0], rows[1:]
    return {name: [float(r[i]) for r in data] for i, name in enumerate(head)}


def v_yd(w):
    return 1.0 - 1.0 / (1.0 + 0.25 * w * w)


def load_run(d):
    with open(os.path.join(d, "manifest.json")) as f:
        man = json.load(f)
    out = {"dir": d, "manifest": man}
    for name in ("var_theta.csv", "spectra.csv", "fixedlo.csv"):
        p = os.path.join(d, name)
        if os.path.exists(p):
            out[name] = read_csv_cols(p)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("runs", nargs="+")
    ap.add_argument("--out", default="", help="save PREFIX_*.png instead of showing")
    args = ap.parse_args()

    try:
        import matplotlib

        if args.out:
            matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is not installed; try: pip install matplotlib")

    runs = [load_run(d) for d in args.runs]

    def finish(fig, name):
        if args.out:
            fig.savefig(f"{args.out}_{name}.png", dpi=150, bbox_inches="tight")
            print(f"wrote {args.out}_{name}.png")

    if any("var_theta.csv" in r for r in runs):
        fig, ax = plt.subplots()
        for r in runs:
            if "var_theta.csv" not in r:
                continue
            t = r["var_theta.csv"]
            D = r["manifest"]["results"]["diffusion_D"]
            ax.plot(t["tau"], [v / D for v in t["var_theta"]], label=r["dir"])
        lim = ax.get_xlim()
        ax.plot(lim, lim, "k--", lw=0.8, label="D tau")
        ax.set_xlabel("tau")
        ax.set_ylabel("V_theta / D")
        ax.legend()
        finish(fig, "vtheta")

    if any("spectra.csv" in r for r in runs):
        fig, ax = plt.subplots()
        for r in runs:
            if "spectra.csv" not in r:
                continue
            t = r["spectra.csv"]
            ax.errorbar(t["omega"], t["v_yd"], yerr=t["err_yd"], fmt="o", ms=3,
                        label=f'{r["dir"]} Y_d')
            ax.errorbar(t["omega"], t["v_xd"], yerr=t["err_xd"], fmt="s", ms=3,
                        label=f'{r["dir"]} X_d')
        w = [i * 0.05 for i in range(401)]
        ax.plot(w, [v_yd(x) for x in w], "k-", lw=0.8)
        ax.axhline(1.0, color="k", ls=":", lw=0.8)
        ax.set_xlabel("omega")
        ax.set_ylabel("V out")
        ax.legend()
        finish(fig, "spectra")

    if any("fixedlo.csv" in r for r in runs):
        fig, ax = plt.subplots()
        for r in runs:
            if "fixedlo.csv" not in r:
                continue
            t = r["fixedlo.csv"]
            for phi in sorted(set(t["phi"])):
                sel = [i for i, p in enumerate(t["phi"]) if p == phi]
                deg = math.degrees(phi)
                ax.errorbar([t["omega"][i] for i in sel], [t["v"][i] for i in sel],
                            yerr=[t["err"][i] for i in sel], fmt="o", ms=3,
                            label=f'{r["dir"]} phi={deg:.1f} deg')
        ax.set_xlabel("omega")
        ax.set_ylabel("V (windowed)")
        ax.legend()
        finish(fig, "fixedlo")

    if not args.out:
        plt.show()


if __name__ == "__main__":
    main()
