#!/usr/bin/env python3
"""Maximal CHSH violation and tangle along the Werner family.

Writes a plot-ready CSV (gamma, max_violation, tangle, purity) and, when
matplotlib is importable, a companion PNG with the Bell limit and the
gamma = 0.9 reference point marked.

Usage: python scripts/sweep_figure.py [--step 0.01] [--out sweep.csv]
"""
import argparse
from pathlib import Path

from bellpair.bell import horodecki_max
from bellpair.states import werner


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--step", type=float, default=0.01)
    parser.add_argument("--out", type=Path, default=Path("sweep.csv"))
    args = parser.parse_args()

    rows = []
    n = round(1.0 / args.step)
    for k in range(n + 1):
        g = min(k * args.step, 1.0)
        report = horodecki_max(werner(g))
        rows.append((g, report.max_violation, report.tangle, report.purity))

    lines = ["gamma,max_violation,tangle,purity"]
    lines += [f"{g!r},{v!r},{t!r},{p!r}" for g, v, t, p in rows]
    args.out.write_text("\n".join(lines) + "\n")
    print(f"wrote {args.out} ({len(rows)} rows)")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available, skipping the PNG")
        return

    gammas = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(gammas, [r[1] for r in rows], "--", label="maximal CHSH mean")
    ax.plot(gammas, [r[2] for r in rows], "-", label="tangle")
    ax.axhline(2.0, linestyle=":", color="gray", label="Bell limit")
    ref = horodecki_max(werner(0.9))
    ax.plot([0.9], [ref.max_violation], "o", color="black", label="gamma = 0.9")
    ax.set_xlabel("mixing weight gamma")
    ax.set_ylabel("value")
    ax.legend(loc="upper left")
    fig.tight_layout()
    png = args.out.with_suffix(".png")
    fig.savefig(png, dpi=150)
    print(f"wrote {png}")


if __name__ == "__main__":
    main()
