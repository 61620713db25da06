"""Reproducible sweep pipelines and CSV/JSON emission.

Produces long-format datasets for the seven standard figures: QFI vs time,
linear entropy, spin-CFI ratio, measurement-channel comparison, anisotropy
Monte Carlo, GHZ-vs-CSS scaling, and the SI sensitivity map.  Every
dataset is deterministic given its seed, carries numeric-method metadata
in both the header and per-row columns, and is emitted with 17 significant
digits for byte-stable regression files.
"""

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from . import fisher, oracles
from .branches import GHZ, ProbeConfig, evolve

FMT = "%.17g"
DEFAULT_SEED = 20260826
DEFAULT_G = 0.1  # scaled gravity used when a figure needs a working point
DEFAULT_ALPHA = 0.0

FIGURE_IDS = (1, 2, 3, 4, 5, 6, 7)


@dataclass
class SweepSpec:
    """Grids and controls for a figure pipeline."""

    figure: int
    tau_points: int = 601
    kn_list: tuple = (0.05, 0.5, 1.0, 2.0)
    n_list: tuple = (1, 2, 4, 8, 16)
    delta_k_list: tuple = (0.1, 0.3, 0.5)
    samples: int = 1000
    seed: int = DEFAULT_SEED
    g: float = DEFAULT_G
    alpha: complex = DEFAULT_ALPHA
    nu: float = 1e3
    # channel-comparison grid (figure 4) is coarser: each point runs
    # quadrature integrals with angle optimization
    channel_tau_points: int = 61
    channel_kn_list: tuple = (0.01, 0.1, 2.0)
    # sensitivity map (figure 7)
    omega_range: tuple = (1e3, 1e8)
    mass_range: tuple = (1e-15, 1e-3)
    map_points: int = 41
    map_n_list: tuple = (3, 10, 100)

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            raise ValueError(f"figure must be one of {FIGURE_IDS}, got {self.figure}")
        if self.tau_points < 2 or self.channel_tau_points < 2 or self.map_points < 2:
            raise ValueError("grids must be non-empty")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


@dataclass
class AnisotropyModel:
    """Uniform coupling disorder k_i = k (1 + U[-delta_k, delta_k])."""

    base_k: float
    delta_k: float
    N: int
    samples: int = 1000
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.delta_k < 0:
            raise ValueError("delta_k must be >= 0")
        if self.N < 1 or self.samples < 1:
            raise ValueError("N and samples must be >= 1")


@dataclass
class FigureData:
    figure: int
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)


def _tau_grid(points):
    return np.linspace(0.0, 2.0 * np.pi, points)


def _ghz_config(kn, g, alpha, N=1):
    # Q_sm for GHZ probes depends on the couplings only through kN
    return ProbeConfig(N=N, k=kn / N, g=g, alpha=alpha, initial_spin=GHZ())


# ---------------------------------------------------------------------------
# figure pipelines


def _fig1(spec: SweepSpec) -> FigureData:
    """Full-system QFI vs tau for several kN (numeric branch evolution)."""
    rows = []
    taus = _tau_grid(spec.tau_points)
    for kn in spec.kn_list:
        cfg = _ghz_config(kn, spec.g, spec.alpha)
        for tau in taus:
            q = fisher.qfi_pure(evolve(cfg, tau)).value
            rows.append((1, f"kN={kn:g}", tau, q, kn))
    return FigureData(1, ["figure", "series", "x", "y", "kN"], rows,
                      {"quantity": "Q_sm", "g": spec.g, "alpha": spec.alpha})


def _fig2(spec: SweepSpec) -> FigureData:
    """Mechanical linear entropy vs tau for several kN."""
    rows = []
    taus = _tau_grid(spec.tau_points)
    for kn in spec.kn_list:
        for tau in taus:
            rows.append((2, f"kN={kn:g}", tau, oracles.linear_entropy_ghz(kn, 1, tau), kn))
    return FigureData(2, ["figure", "series", "x", "y", "kN"], rows,
                      {"quantity": "S_L"})


def _fig3(spec: SweepSpec) -> FigureData:
    """Ratio of optimized spin CFI to full-system QFI vs tau."""
    rows = []
    taus = _tau_grid(spec.tau_points)
    for kn in spec.kn_list:
        for tau in taus:
            q = oracles.qfi_ghz(kn, 1, tau)
            f = oracles.qfi_spin_ghz(kn, 1, tau)
            rows.append((3, f"kN={kn:g}", tau, f / q if q > 0 else 1.0, kn))
    return FigureData(3, ["figure", "series", "x", "y", "kN"], rows,
                      {"quantity": "F_spin/Q_sm"})


def _fig4(spec: SweepSpec) -> FigureData:
    """Measurement-channel CFIs vs tau for the comparison kN values.

    Channels: optimized binary spin POVM plus the three mechanical
    channels (joint literal form as headline, standard variant carried in
    its own column).
    """
    rows = []
    taus = _tau_grid(spec.channel_tau_points)[1:-1]  # endpoints: no field info
    for kn in spec.channel_kn_list:
        cfg = _ghz_config(kn, spec.g, spec.alpha, N=2)
        for tau in taus:
            st = evolve(cfg, tau)
            q = fisher.qfi_pure(st).value
            spin = fisher.optimize_spin_angles(st)
            hom = fisher.cfi_homodyne(st)  # lambda = 0 quadrature
            het = fisher.cfi_heterodyne(st)
            pho = fisher.cfi_photocount(st)
            for res in (spin, hom, het, pho):
                rows.append(
                    (4, f"{res.channel}|kN={kn:g}", tau, res.value, kn, q,
                     res.value_standard if res.value_standard is not None else res.value,
                     res.numerics.get("cutoff", res.numerics.get("n_max", 0)))
                )
    return FigureData(
        4,
        ["figure", "series", "x", "y", "kN", "qfi_sm", "y_standard", "cutoff"],
        rows,
        {"quantity": "CFI by channel", "g": spec.g, "alpha": spec.alpha,
         "angle_grid": 181, "x_points": 2001, "het_points": 201},
    )


def anisotropy_mc(model: AnisotropyModel, tau, g=DEFAULT_G, xi=0.0):
    """Mean/std of the numeric GHZ QFI under coupling disorder.

    Each sample evolves the exact two-branch anisotropic state and
    evaluates the pure-state QFI; the RNG is the seeded numpy PCG64
    generator, so results are independent of worker scheduling.
    """
    rng = np.random.default_rng(model.seed)
    draws = rng.uniform(-model.delta_k, model.delta_k, size=(model.samples, model.N))
    values = np.empty(model.samples)
    for i in range(model.samples):
        ks = tuple(model.base_k * (1.0 + draws[i]))
        cfg = ProbeConfig(N=model.N, k=ks, g=g, xi=xi, initial_spin=GHZ())
        values[i] = fisher.qfi_pure(evolve(cfg, tau)).value
    return {
        "mean": float(np.mean(values)),
        "std": float(np.std(values)),
        "values": values,
    }


def _fig5(spec: SweepSpec) -> FigureData:
    """Anisotropy Monte Carlo: mean and relative spread of Q_sm vs N.

    The decoherence panels of the same figure are produced separately by
    the `lindblad` pipeline (minutes-long integrations).
    """
    rows = []
    tau = 2.0 * np.pi
    k = 0.1
    for dk in spec.delta_k_list:
        for N in spec.n_list:
            model = AnisotropyModel(base_k=k, delta_k=dk, N=N,
                                    samples=spec.samples, seed=spec.seed)
            out = anisotropy_mc(model, tau, g=spec.g)
            rows.append((5, f"dk={dk:g}", N, out["mean"], out["std"], dk, k,
                         spec.samples, spec.seed))
    return FigureData(
        5,
        ["figure", "series", "x", "y", "std", "delta_k", "k", "samples", "seed"],
        rows,
        {"quantity": "mean Q_sm under coupling disorder", "tau": tau,
         "rng": "numpy PCG64 (default_rng)"},
    )


def _fig6(spec: SweepSpec) -> FigureData:
    """GHZ vs CSS full-system QFI at the disentangling time vs N."""
    rows = []
    ns = np.arange(1, 33)
    for k in (0.05, 0.1, 0.2):
        for N in ns:
            rows.append((6, f"GHZ|k={k:g}", int(N), oracles.qfi_ghz(k, N, 2 * np.pi), k))
            rows.append((6, f"CSS|k={k:g}", int(N), oracles.qfi_css_2pi(k, N), k))
    return FigureData(6, ["figure", "series", "x", "y", "k"], rows,
                      {"quantity": "Q at tau=2pi"})


def sensitivity_map(omegas, masses, n_list, nu=1e3, k=1.0):
    """Rows (omega, M, N, dg_bar) over a log-log (omega, M) grid."""
    rows = []
    for N in n_list:
        for w in omegas:
            for m in masses:
                rows.append((float(w), float(m), int(N),
                             float(oracles.sensitivity(w, m, N, nu, k=k))))
    return rows


def _fig7(spec: SweepSpec) -> FigureData:
    omegas = np.logspace(np.log10(spec.omega_range[0]), np.log10(spec.omega_range[1]),
                         spec.map_points)
    masses = np.logspace(np.log10(spec.mass_range[0]), np.log10(spec.mass_range[1]),
                         spec.map_points)
    rows = [
        (7, f"N={N:d}", w, m, dg, np.log10(dg), N, spec.nu)
        for (w, m, N, dg) in sensitivity_map(omegas, masses, spec.map_n_list, nu=spec.nu)
    ]
    return FigureData(
        7,
        ["figure", "series", "x", "y", "dg", "log10_dg", "N", "nu"],
        rows,
        {"quantity": "sensitivity map", "x": "omega (rad/s)", "y": "M (kg)",
         "k": 1.0, "tau": 2 * np.pi},
    )


_PIPELINES = {1: _fig1, 2: _fig2, 3: _fig3, 4: _fig4, 5: _fig5, 6: _fig6, 7: _fig7}


def run_figure(figure: int, spec: Optional[SweepSpec] = None) -> FigureData:
    if figure not in _PIPELINES:
        raise ValueError(f"unknown figure id {figure}; valid: {sorted(_PIPELINES)}")
    if spec is None:
        spec = SweepSpec(figure=figure)
    return _PIPELINES[figure](spec)


# ---------------------------------------------------------------------------
# fits


def scaling_fit(pairs):
    """Least-squares power-law fit Q = C N^mu on log-log axes.

    Returns {"exponent", "prefactor", "r2"}; needs >= 3 strictly positive
    points.
    """
    pts = [(float(n), float(q)) for n, q in pairs]
    if len(pts) < 3:
        raise ValueError("scaling_fit needs at least 3 points")
    if any(n <= 0 or q <= 0 for n, q in pts):
        raise ValueError("scaling_fit needs positive inputs")
    x = np.log(np.array([n for n, _ in pts]))
    y = np.log(np.array([q for _, q in pts]))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return {"exponent": float(slope), "prefactor": float(np.exp(intercept)), "r2": r2}


# ---------------------------------------------------------------------------
# emission


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float) or isinstance(v, np.floating):
        return FMT % v
    return str(v)


def write_csv(data: FigureData, path, timestamp=True):
    """Long-format CSV with '#'-prefixed metadata header lines."""
    lines = [f"# figure={data.figure}"]
    for key in sorted(data.meta):
        lines.append(f"# {key}={_fmt(data.meta[key])}")
    if timestamp:
        lines.append(f"# created={datetime.now(timezone.utc).isoformat()}")
    lines.append(",".join(data.columns))
    for row in data.rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
    return path


def write_json(data: FigureData, path):
    payload = {
        "figure": data.figure,
        "meta": {k: (list(v) if isinstance(v, (tuple, list)) else v)
                 for k, v in data.meta.items()},
        "columns": data.columns,
        "rows": [[float(v) if isinstance(v, (int, float, np.floating, np.integer)) else v
                  for v in row] for row in data.rows],
    }
    with open(path, "w") as f:
        json.dump(payload, f, indent=1, sort_keys=True)
    return path


def read_csv(path):
    """Read a harness CSV back into a FigureData (metadata kept as strings)."""
    meta = {}
    columns = None
    rows = []
    with open(path) as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            parts = line.split(",")
            if columns is None:
                columns = parts
                continue
            parsed = []
            for p in parts:
                try:
                    parsed.append(float(p))
                except ValueError:
                    parsed.append(p)
            rows.append(tuple(parsed))
    if columns is None:
        raise ValueError(f"no header row found in {path}")
    figure = int(float(meta.get("figure", rows[0][0] if rows else 0)))
    return FigureData(figure, columns, rows, meta)
