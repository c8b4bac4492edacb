"""Optional figure rendering for CLI runs (only with --plot)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def eigenvalue_map(records, path, *, curve=None, strip=None, title=""):
    """Scatter of eigenvalues in the lambda plane.

    curve: optional (C, exponent) pair drawing |Im| = C (Re+1)^exponent;
    strip: optional constant drawing |Im| = C.
    """
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    if records:
        re = np.array([r.lam.real for r in records])
        im = np.array([r.lam.imag for r in records])
        ms = np.array([r.m for r in records])
        sc = ax.scatter(re, im, c=ms, s=12, cmap="viridis", lw=0)
        fig.colorbar(sc, ax=ax, label="mode m")
        xs = np.linspace(re.min(), re.max(), 400)
    else:
        xs = np.linspace(0.5, 40.0, 400)
    if curve is not None:
        c, ex = curve
        ax.plot(xs, c * (xs + 1.0) ** ex, "r--", lw=1, label="calibrated parabola")
        ax.plot(xs, -c * (xs + 1.0) ** ex, "r--", lw=1)
        ax.legend(loc="upper left", fontsize=8)
    if strip is not None:
        ax.axhline(strip, color="r", ls=":", lw=1)
        ax.axhline(-strip, color="r", ls=":", lw=1)
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def staircase_plot(staircase, tau, path, *, title=""):
    """Counting staircase N(r) against the leading law tau r^2."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    if staircase:
        rs = [r for r, _ in staircase]
        ns = [n for _, n in staircase]
        ax.step(rs, ns, where="post", label="N(r)")
        xs = np.linspace(rs[0], rs[-1], 400)
        ax.plot(xs, tau * xs ** 2, "r--", lw=1, label=f"tau r^2 (tau={tau:.4g})")
        ax.legend(loc="upper left", fontsize=8)
    ax.set_xlabel("r")
    ax.set_ylabel("count")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
