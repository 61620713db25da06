"""Shared deterministic plotting style.

Import this module before pyplot anywhere in the viz scripts: it selects
the Agg backend and pins every rcParam that could make repeated renders of
the same CSV differ byte-for-byte (font, hash salt, no timestamps).
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

matplotlib.rcParams.update(
    {
        "figure.figsize": (6.0, 4.0),
        "figure.dpi": 120,
        "savefig.dpi": 120,
        "font.family": "DejaVu Sans",
        "font.size": 10,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "lines.linewidth": 1.4,
        "legend.fontsize": 8,
        "legend.framealpha": 0.9,
        "svg.hashsalt": "gravsim-viz",
        "svg.fonttype": "path",
        "path.simplify": False,
    }
)

# fixed series -> color assignment by order of first appearance
PALETTE = plt.rcParams["axes.prop_cycle"].by_key()["color"]


def series_color(index):
    return PALETTE[index % len(PALETTE)]


def save(fig, out_path):
    """Write PNG or SVG with timestamp metadata suppressed."""
    out_path = str(out_path)
    if out_path.endswith(".svg"):
        fig.savefig(out_path, metadata={"Date": None})
    elif out_path.endswith(".png"):
        fig.savefig(out_path)
    else:
        raise ValueError(f"unsupported output format: {out_path} (use .png or .svg)")
    plt.close(fig)
    return out_path
