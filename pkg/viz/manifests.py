"""Figure manifests: the documented CSV schema for each figure.

A manifest records which columns the renderer consumes, the axis labels,
and the scale flags.  `load` validates an input CSV against the manifest
and fails with an explicit column diff; the renderers never compute
physics quantities, only the axis transforms declared here.
"""

from dataclasses import dataclass, field

import pandas as pd


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class FigureManifest:
    figure: int
    columns: tuple  # documented CSV schema, in order
    xlabel: str
    ylabel: str
    series_column: str = "series"
    xscale: str = "linear"
    yscale: str = "linear"
    extra: dict = field(default_factory=dict)


MANIFESTS = {
    1: FigureManifest(
        1, ("figure", "series", "x", "y", "kN"),
        xlabel="scaled time", ylabel="quantum Fisher information",
    ),
    2: FigureManifest(
        2, ("figure", "series", "x", "y", "kN"),
        xlabel="scaled time", ylabel="mechanical linear entropy",
    ),
    3: FigureManifest(
        3, ("figure", "series", "x", "y", "kN"),
        xlabel="scaled time", ylabel="spin CFI / QFI",
    ),
    4: FigureManifest(
        4, ("figure", "series", "x", "y", "kN", "qfi_sm", "y_standard", "cutoff"),
        xlabel="scaled time", ylabel="Fisher information", yscale="log",
    ),
    5: FigureManifest(
        5, ("figure", "series", "x", "y", "std", "delta_k", "k", "samples", "seed"),
        xlabel="number of spins N", ylabel="mean QFI",
        xscale="log", yscale="log",
    ),
    6: FigureManifest(
        6, ("figure", "series", "x", "y", "k"),
        xlabel="number of spins N", ylabel="QFI at the disentangling time",
        xscale="log", yscale="log",
    ),
    7: FigureManifest(
        7, ("figure", "series", "x", "y", "dg", "log10_dg", "N", "nu"),
        xlabel="mechanical frequency (rad/s)", ylabel="mass (kg)",
        xscale="log", yscale="log",
        extra={"value_column": "log10_dg", "colorbar": "log10 sensitivity (m/s^2)"},
    ),
}


def load(csv_path, manifest: FigureManifest) -> pd.DataFrame:
    """Read a harness CSV and validate it against the manifest schema."""
    df = pd.read_csv(csv_path, comment="#")
    got = list(df.columns)
    want = list(manifest.columns)
    if got != want:
        missing = [c for c in want if c not in got]
        unexpected = [c for c in got if c not in want]
        parts = [f"figure {manifest.figure} schema mismatch in {csv_path}"]
        if missing:
            parts.append(f"missing columns: {missing}")
        if unexpected:
            parts.append(f"unexpected columns: {unexpected}")
        if not missing and not unexpected:
            parts.append(f"column order differs: got {got}, expected {want}")
        raise SchemaError("; ".join(parts))
    if df.empty:
        raise SchemaError(f"{csv_path} contains no data rows")
    if df[manifest.series_column].isna().any():
        raise SchemaError(f"{csv_path} has rows with an empty series label")
    return df
