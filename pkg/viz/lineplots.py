"""Renderers for the line-plot figures (1-4, 6) and the errorbar figure 5."""

from matplotlib import pyplot as plt

import style


def _grouped(df, manifest):
    # iterate series in order of first appearance for stable colors
    seen = []
    for s in df[manifest.series_column]:
        if s not in seen:
            seen.append(s)
    for i, s in enumerate(seen):
        yield i, s, df[df[manifest.series_column] == s]


def render_lines(df, manifest, out_path):
    fig, ax = plt.subplots()
    for i, name, grp in _grouped(df, manifest):
        ax.plot(grp["x"], grp["y"], color=style.series_color(i), label=str(name))
    ax.set_xscale(manifest.xscale)
    ax.set_yscale(manifest.yscale)
    ax.set_xlabel(manifest.xlabel)
    ax.set_ylabel(manifest.ylabel)
    ax.legend()
    return style.save(fig, out_path)


def render_errorbars(df, manifest, out_path):
    fig, ax = plt.subplots()
    for i, name, grp in _grouped(df, manifest):
        ax.errorbar(grp["x"], grp["y"], yerr=grp["std"], color=style.series_color(i),
                    label=str(name), marker="o", markersize=3, capsize=2)
    ax.set_xscale(manifest.xscale)
    ax.set_yscale(manifest.yscale)
    ax.set_xlabel(manifest.xlabel)
    ax.set_ylabel(manifest.ylabel)
    ax.legend()
    return style.save(fig, out_path)
