"""Renderer for the per-series sensitivity heatmap (figure 7)."""

import numpy as np
from matplotlib import pyplot as plt

import style
from manifests import SchemaError


def render_heatmap(df, manifest, out_path):
    value = manifest.extra["value_column"]
    names = list(dict.fromkeys(df[manifest.series_column]))
    fig, axes = plt.subplots(1, len(names), figsize=(3.2 * len(names), 3.4),
                             sharey=True, constrained_layout=True)
    if len(names) == 1:
        axes = [axes]
    vmin = df[value].min()
    vmax = df[value].max()
    mesh = None
    for ax, name in zip(axes, names):
        grp = df[df[manifest.series_column] == name]
        xs = np.sort(grp["x"].unique())
        ys = np.sort(grp["y"].unique())
        if len(xs) < 2 or len(ys) < 2:
            raise SchemaError(f"series {name!r} does not form a 2-D grid")
        grid = grp.pivot_table(index="y", columns="x", values=value).to_numpy()
        mesh = ax.pcolormesh(xs, ys, grid, vmin=vmin, vmax=vmax, shading="nearest")
        ax.set_xscale(manifest.xscale)
        ax.set_yscale(manifest.yscale)
        ax.set_xlabel(manifest.xlabel)
        ax.set_title(str(name))
    axes[0].set_ylabel(manifest.ylabel)
    fig.colorbar(mesh, ax=axes, label=manifest.extra["colorbar"], shrink=0.85)
    return style.save(fig, out_path)
