"""Figures written next to the JSON reports: Hasse diagrams and check summaries."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .lattice import AmbientLattice, omega_count  # noqa: E402

PASS_COLOR = "#2e7d32"
FAIL_COLOR = "#c62828"


def hasse_positions(lattice: AmbientLattice) -> dict[int, tuple[float, float]]:
    """Rank by prime-factor count; spread each rank evenly and centred on x=0."""
    ranks: dict[int, list[int]] = {}
    for n in lattice.elements:
        ranks.setdefault(omega_count(n), []).append(n)
    pos = {}
    for r, row in ranks.items():
        width = len(row) - 1
        for i, n in enumerate(row):
            pos[n] = (i - width / 2, float(r))
    return pos


def plot_hasse(lattice: AmbientLattice, path, highlight=None, title=None):
    """Draw the Hasse diagram of D_N; ``highlight`` marks e.g. the members of a sieve."""
    highlight = set(highlight or ())
    pos = hasse_positions(lattice)
    depth = max(y for _, y in pos.values()) + 1
    width = max(x for x, _ in pos.values()) * 2 + 1
    fig, ax = plt.subplots(figsize=(max(4, 1.1 * width + 1), max(3, 1.1 * depth + 1)))
    for k, n in lattice.covering_edges():
        (x0, y0), (x1, y1) = pos[k], pos[n]
        ax.plot([x0, x1], [y0, y1], color="0.55", lw=1.2, zorder=1)
    for n, (x, y) in pos.items():
        face = "#90caf9" if n in highlight else "white"
        ax.scatter([x], [y], s=650, facecolor=face, edgecolor="0.2", zorder=2)
        ax.annotate(str(n), (x, y), ha="center", va="center", fontsize=9, zorder=3)
    ax.set_title(title or f"Divisor lattice of {lattice.modulus}")
    ax.set_axis_off()
    ax.margins(0.15)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_check_summary(results: list[dict], path, title="Verification summary"):
    """Horizontal bars of cases examined per check, coloured by outcome."""
    labels = [f"{r['id']}: {r['title']}" for r in results]
    cases = [max(r["cases"], 1) for r in results]
    colors = [PASS_COLOR if r["pass"] else FAIL_COLOR for r in results]
    fig, ax = plt.subplots(figsize=(8, 0.4 * len(results) + 1.5))
    ypos = range(len(results))
    ax.barh(ypos, cases, color=colors)
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(labels, fontsize=8)
    ax.invert_yaxis()
    ax.set_xscale("log")
    ax.set_xlim(left=0.8)
    ax.set_xlabel("cases examined")
    ax.set_title(title)
    for y, (c, r) in enumerate(zip(cases, results)):
        ax.annotate("pass" if r["pass"] else "FAIL", (c, y), xytext=(4, 0),
                    textcoords="offset points", va="center", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
