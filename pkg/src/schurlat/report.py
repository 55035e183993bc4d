"""CSV and SVG writers with deterministic output."""

from __future__ import annotations

import csv
import io
import os
import re
from fractions import Fraction
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "schurlat"
plt.rcParams["svg.fonttype"] = "path"

COLORS = ["tab:red", "tab:blue", "tab:green", "tab:orange", "tab:purple", "tab:brown"]


def fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    return str(v)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def save_svg(fig, path: str) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    # drop the DOCTYPE so the file has no external DTD reference
    text = re.sub(r"<!DOCTYPE[^>]*>\s*", "", buf.getvalue())
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def plot_curves(curves, regions, path: str, chi_max: float | None = None) -> str:
    fig, ax = plt.subplots(figsize=(7, 4))
    for c in curves:
        s = np.array([(chi, kap) for _, chi, kap in c.samples])
        if len(s):
            # break the polyline where consecutive samples jump
            jumps = np.hypot(np.diff(s[:, 0]), np.diff(s[:, 1])) > 0.5
            pieces = np.split(s, np.nonzero(jumps)[0] + 1)
            for k, piece in enumerate(pieces):
                ax.plot(piece[:, 0], piece[:, 1], color=COLORS[(c.i - 1) % len(COLORS)], lw=1.2,
                        label=f"C{c.i}" if k == 0 else None)
    for r in regions:
        for a, b in (r.left, r.right):
            ax.plot([a, a + b], [0, 1], color="0.7", lw=0.6, ls="--")
    ax.axhline(0, color="k", lw=0.6)
    ax.axhline(1, color="k", lw=0.6)
    if chi_max is not None:
        ax.set_xlim(0, chi_max)
    ax.set_ylim(-0.05, 1.05)
    ax.set_xlabel("chi")
    ax.set_ylabel("kappa")
    ax.legend(loc="upper right", frameon=False)
    return save_svg(fig, path)


def plot_dual(duals: dict[int, list[tuple[float, float]]], path: str) -> str:
    fig, ax = plt.subplots(figsize=(5, 5))
    for i, pts in duals.items():
        p = np.array(pts)
        if len(p):
            ax.plot(p[:, 0], p[:, 1], ".", ms=1.5, color=COLORS[(i - 1) % len(COLORS)], label=f"dual C{i}")
    ax.plot([0], [-1], "kx")
    ax.set_xlim(-3, 3)
    ax.set_ylim(-4, 2)
    ax.legend(frameon=False)
    return save_svg(fig, path)


def plot_density(x: np.ndarray, f: np.ndarray, kappa: float, path: str) -> str:
    fig, ax = plt.subplots(figsize=(7, 3))
    ax.plot(x, f, lw=1.0, color="tab:blue")
    ax.set_ylim(-0.05, 1.05)
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.set_title(f"kappa = {kappa:g}")
    return save_svg(fig, path)


def plot_field(chis: np.ndarray, kaps: np.ndarray, values: np.ndarray, path: str, label: str) -> str:
    fig, ax = plt.subplots(figsize=(7, 4))
    mesh = ax.pcolormesh(chis, kaps, values, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=label)
    ax.set_xlabel("chi")
    ax.set_ylabel("kappa")
    return save_svg(fig, path)


def plot_measures(measures, path: str) -> str:
    fig, ax = plt.subplots(figsize=(7, 2.5))
    for i, m in enumerate(measures, start=1):
        for a, b in m.intervals:
            ax.fill_between([float(a), float(b)], i - 0.4, i + 0.4, color=COLORS[(i - 1) % len(COLORS)])
    ax.set_yticks(range(1, len(measures) + 1))
    ax.set_ylabel("class")
    ax.set_xlabel("t")
    return save_svg(fig, path)


def plot_points(points: np.ndarray, values: np.ndarray, path: str, label: str) -> str:
    fig, ax = plt.subplots(figsize=(6, 5))
    sc = ax.scatter(points[:, 0], points[:, 1], c=values, s=12, cmap="viridis")
    fig.colorbar(sc, ax=ax, label=label)
    ax.set_aspect("equal")
    ax.set_xlabel("X")
    ax.set_ylabel("row")
    return save_svg(fig, path)
