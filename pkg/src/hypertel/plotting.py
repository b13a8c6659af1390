"""PNG rendering of normalized heights with fitted curves."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_STYLES = {"M1": "-", "M2": "--", "M3": (0, (5, 5)), "M4": ":"}


def plot_heights(records: Sequence, fits: Sequence, column: str, path) -> Path:
    path = Path(path)
    xs = [r.omega for r in records]
    ys = [getattr(r, column) for r in records]
    fig, ax = plt.subplots(figsize=(5.0, 3.5), dpi=100)
    ax.plot(xs, ys, "o", color="black", label="measured")
    if xs:
        lo, hi = min(xs), max(xs)
        grid = [lo + (hi - lo) * i / 200 for i in range(201)]
        for f in fits:
            ax.plot(grid, [f.model.evaluate(f.coefficients, w) for w in grid],
                    linestyle=_STYLES.get(f.model.value, "-"), color="gray", label=f.model.value)
    ax.set_xlabel("Omega")
    ax.set_ylabel(column)
    ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)
    return path
