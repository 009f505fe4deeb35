#!/usr/bin/env python3
"""Plot p, u, theta, rho and alpha1 profiles from one or more qhmix final.csv files.

    python3 docs/plot_profiles.py out/b500/final.csv out/b2500/final.csv -o b.png
"""
import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

PANELS = [("p", "p, Pa"), ("u", "u, m/s"), ("theta", "theta, K"), ("rho", "rho, kg/m^3"),
          ("alpha1", "alpha1")]


def load(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return {k: [float(r[k]) for r in rows] for k in rows[0]}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv", nargs="+", help="final.csv or last_valid.csv files")
    ap.add_argument("-o", "--output", default="profiles.png")
    args = ap.parse_args()

    fig, axes = plt.subplots(len(PANELS), 1, figsize=(7, 2.2 * len(PANELS)), sharex=True)
    for path in args.csv:
        data = load(path)
        for ax, (key, label) in zip(axes, PANELS):
            ax.plot(data["x"], data[key], lw=1, label=path)
            ax.set_ylabel(label)
    axes[-1].set_xlabel("x, m")
    axes[0].legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
