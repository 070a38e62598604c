"""Figures written next to the CLI's delimited output."""
from __future__ import annotations

import math
import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

OMEGA3 = complex(-0.5, math.sqrt(3.0) / 2)


def slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", text).strip("_")


def _lattice(radius: float):
    r = int(math.ceil(radius)) + 1
    pts = [a + b * OMEGA3 for a in range(-2 * r, 2 * r + 1) for b in range(-2 * r, 2 * r + 1)]
    return [p for p in pts if abs(p) <= radius + 0.5]


def plot_spectrum(entries, path, title: str = "", lattice: bool = True) -> Path:
    """Eigenvalues in the complex plane, marker area proportional to multiplicity.

    ``entries`` is a sequence of ``(value, multiplicity)`` pairs.  Eisenstein
    integers near the spectrum are drawn faintly for reference.
    """
    vals = np.array([complex(v) for v, _ in entries])
    mults = np.array([m for _, m in entries], dtype=float)
    radius = max(float(np.abs(vals).max(initial=0.0)), 1.0)
    fig, ax = plt.subplots(figsize=(5, 5))
    if lattice:
        pts = np.array(_lattice(radius))
        ax.scatter(pts.real, pts.imag, s=6, c="0.8", zorder=1, label="a + bω3")
    ax.scatter(vals.real, vals.imag, s=30 + 40 * np.sqrt(mults), zorder=2, alpha=0.8, label="eigenvalues")
    for v, m in zip(vals, mults):
        ax.annotate(f"{int(m)}", (v.real, v.imag), textcoords="offset points", xytext=(6, 6), fontsize=8)
    ax.axhline(0, color="0.6", lw=0.5)
    ax.axvline(0, color="0.6", lw=0.5)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title, fontsize=9)
    ax.legend(loc="upper right", fontsize=7)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_classification(summary: list[dict], path) -> Path:
    """Bar chart of normal sets, HS-integral sets and Eisenstein integral sets per group."""
    names = [s["group"] for s in summary]
    x = np.arange(len(names))
    width = 0.27
    fig, ax = plt.subplots(figsize=(max(5, 0.5 * len(names) + 2), 4))
    for i, (key, label) in enumerate((("sets", "normal sets"), ("hs_integral", "HS-integral"),
                                      ("eisenstein_integral", "Eisenstein integral"))):
        ax.bar(x + (i - 1) * width, [max(s[key], 0.8) for s in summary], width, label=label)
    ax.set_yscale("log")
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("count")
    ax.legend(fontsize=7)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_conjecture(records, path, tol: float) -> Path:
    """Distance of T_y(j)/3 to the nearest integer for every scanned pair."""
    d = np.array([max(r.t_over_3_distance, 1e-18) for r in records])
    fig, ax = plt.subplots(figsize=(6, 3.5))
    if len(d):
        ax.scatter(np.arange(len(d)), d, s=4)
    ax.axhline(tol, color="red", lw=1, label=f"tolerance {tol:g}")
    ax.set_yscale("log")
    ax.set_xlabel("(group, y, j) pair")
    ax.set_ylabel("|T/3 - round(T/3)|")
    ax.legend(fontsize=7)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
