#!/usr/bin/env python3
"""Plot swarmnet CSV output.

Understands the three CSV layouts written by `swarmnet simulate`:
  trajectory.csv (unstructured)  t,x_1..x_n,y_1..y_n
  trajectory.csv (clusters)      t,node,k,x,y
  moments.csv                    t,node,theta_x,theta_y
"""

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def plot_wide(df, ax):
    for col in df.columns[1:]:
        colour = "tab:blue" if col.startswith("x_") else "tab:orange"
        ax.plot(df["t"], df[col], color=colour, lw=0.6, alpha=0.5)
    ax.plot([], [], color="tab:blue", label="x_i")
    ax.plot([], [], color="tab:orange", label="y_i")
    ax.set_ylabel("committed fraction")


def plot_clusters(df, ax, ks, node):
    sub = df[df["node"] == node]
    for k in ks:
        series = sub[sub["k"] == k]
        if series.empty:
            continue
        ax.plot(series["t"], series["x"], label=f"x, k={k}")
        ax.plot(series["t"], series["y"], ls="--", label=f"y, k={k}")
    ax.set_ylabel(f"cluster fractions (node {node})")


def plot_moments(df, ax):
    for node, series in df.groupby("node"):
        ax.plot(series["t"], series["theta_x"], color="tab:blue", lw=0.6, alpha=0.5)
        ax.plot(series["t"], series["theta_y"], color="tab:orange", lw=0.6, alpha=0.5)
    ax.plot([], [], color="tab:blue", label="theta_x")
    ax.plot([], [], color="tab:orange", label="theta_y")
    ax.set_ylabel("first moments")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("csv", help="CSV written by swarmnet simulate")
    ap.add_argument("-o", "--output", help="image path (default: <csv>.png)")
    ap.add_argument("--clusters", default="1,10,40", help="cluster degrees to draw for cluster CSVs")
    ap.add_argument("--node", type=int, default=0, help="node whose clusters are drawn")
    ap.add_argument("--tmax", type=float, help="clip the time axis")
    args = ap.parse_args(argv)

    df = pd.read_csv(args.csv)
    if args.tmax is not None:
        df = df[df["t"] <= args.tmax]

    fig, ax = plt.subplots(figsize=(8, 4.5))
    cols = list(df.columns)
    if cols[:5] == ["t", "node", "k", "x", "y"]:
        plot_clusters(df, ax, [int(k) for k in args.clusters.split(",")], args.node)
    elif cols[:4] == ["t", "node", "theta_x", "theta_y"]:
        plot_moments(df, ax)
    elif cols[0] == "t" and len(cols) > 1 and cols[1] == "x_1":
        plot_wide(df, ax)
    else:
        sys.exit(f"unrecognised CSV header: {','.join(cols[:6])}")

    ax.set_xlabel("t")
    ax.legend(loc="best", fontsize="small")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    out = args.output or args.csv.rsplit(".", 1)[0] + ".png"
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
