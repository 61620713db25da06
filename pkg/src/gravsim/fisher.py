"""Quantum and classical Fisher information engines.

Pure/mixed QFI, the binary spin-POVM CFI with angle optimization, and the
joint spin (x) field CFI for homodyne, heterodyne and photocounting
channels.  The joint channels are computed in two variants: the
paper-literal functional with p(1-p) denominators (headline value) and the
standard joint CFI with p denominators; both are carried in FisherResult.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .branches import BranchedState, BranchTangent, d_dg, evolve, spin_reduced_dm
from .hilbert import DensityMatrix, FockSpace, coherent_state, fock_cutoff_for, quadrature_table


class GridCoverageError(Exception):
    def __init__(self, message, coverage):
        super().__init__(message)
        self.coverage = coverage


class NormDeficitError(Exception):
    pass


@dataclass(frozen=True)
class SpinPovm:
    """Binary projective POVM on the GHZ support subspace.

    |Y(Theta, Phi)> = cos(Theta/2)|N/2, N/2> + sin(Theta/2) e^{-i Phi}|N/2, -N/2>
    plus its orthogonal complement.
    """

    theta: float
    phi: float


@dataclass
class FisherResult:
    value: float
    channel: str
    angles: Optional[tuple] = None
    numerics: dict = field(default_factory=dict)
    value_standard: Optional[float] = None


# ---------------------------------------------------------------------------
# QFI


def qfi_pure(state: BranchedState, tangent: Optional[BranchTangent] = None) -> FisherResult:
    """4 Re[<d psi|d psi> - |<d psi|psi>|^2] from the exact branch tangent.

    Branch spin labels are orthogonal, so all inner products reduce to
    coherent-overlap algebra evaluated in closed form.
    """
    norm_def = abs(state.norm_squared - 1.0)
    if norm_def > 1e-8:
        raise NormDeficitError(f"state norm deficit {norm_def:.2e} exceeds 1e-8")
    if tangent is None:
        tangent = d_dg(state)
    dd = 0.0 + 0.0j  # <d psi|d psi>
    dp = 0.0 + 0.0j  # <d psi|psi>
    for b, dA, dphi in zip(state.branches, tangent.d_amplitude, tangent.d_phi):
        A, phi = b.amplitude, b.phi
        im = np.imag(np.conj(phi) * dphi)
        phi_dphi = 1j * im  # <phi|d phi>
        dphi_dphi = abs(dphi) ** 2 + im * im  # <d phi|d phi>
        dd += (
            abs(dA) ** 2
            + np.conj(dA) * A * phi_dphi
            + np.conj(A * phi_dphi) * dA
            + abs(A) ** 2 * dphi_dphi
        )
        dp += np.conj(dA) * A + abs(A) ** 2 * np.conj(phi_dphi)
    value = 4.0 * (np.real(dd) - abs(dp) ** 2)
    numerics = {"norm_deficit": norm_def}
    if value < 0:
        numerics["clamped_from"] = value
        if value < -1e-10:
            raise ValueError(f"pure QFI negative beyond round-off: {value}")
        value = 0.0
    return FisherResult(value=value, channel="QFI_pure", numerics=numerics)


def qfi_pure_vectors(psi, dpsi):
    """Dense-vector evaluation of 4 Re[<d psi|d psi> - |<d psi|psi>|^2]."""
    dd = np.vdot(dpsi, dpsi)
    dp = np.vdot(dpsi, psi)
    return float(4.0 * (np.real(dd) - abs(dp) ** 2))


def qfi_mixed(rho, drho, threshold=1e-12) -> FisherResult:
    """Spectral-decomposition QFI 2 sum |<m|d rho|n>|^2/(l_n + l_m).

    Eigenvalue pairs with l_n + l_m <= threshold are discarded.
    """
    r = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    dr = drho.matrix if isinstance(drho, DensityMatrix) else np.asarray(drho)
    herm = float(np.max(np.abs(r - r.conj().T)))
    if herm > 1e-8:
        raise ValueError(f"density matrix not Hermitian (defect {herm:.2e})")
    w, v = np.linalg.eigh(0.5 * (r + r.conj().T))
    mat = v.conj().T @ dr @ v
    lsum = w[:, None] + w[None, :]
    mask = lsum > threshold
    value = float(2.0 * np.sum((np.abs(mat) ** 2)[mask] / lsum[mask]))
    return FisherResult(
        value=value,
        channel="QFI_mixed",
        numerics={"eigenvalue_threshold": threshold, "retained_pairs": int(mask.sum())},
    )


def finite_diff_tangent(state_factory, g0, h):
    """Central-difference tangent of a dense state family with phase gauging.

    Each of psi(g0 +/- h) has its global phase fixed so the overlap with
    psi(g0) is real positive before differencing.
    """
    if h <= 0:
        raise ValueError("h must be > 0")
    psi0 = np.asarray(state_factory(g0))
    def gauge(psi):
        ov = np.vdot(psi0, psi)
        return psi * np.exp(-1j * np.angle(ov))

    plus = gauge(np.asarray(state_factory(g0 + h)))
    minus = gauge(np.asarray(state_factory(g0 - h)))
    return psi0, (plus - minus) / (2.0 * h)


# ---------------------------------------------------------------------------
# binary spin POVM


def cfi_binary(p, dp):
    """(dp)^2 / (p (1 - p)); zero with a boundary diagnostic at pinned p."""
    if p < 1e-12 or 1.0 - p < 1e-12:
        return 0.0
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability {p} outside (0, 1)")
    return dp * dp / (p * (1.0 - p))


def _ghz_support_dm(state: BranchedState):
    """Reduced spin matrix and derivative on the two GHZ-support labels.

    Returns matrices ordered [+N/2, -N/2] to match the POVM definition.
    """
    labels = sorted(b.label for b in state.branches)
    s = state.config.N / 2.0
    if len(labels) != 2 or abs(labels[0] + s) > 1e-12 or abs(labels[1] - s) > 1e-12:
        raise ValueError("spin POVM channels require a GHZ-family state (support on m = +/- N/2)")
    rho, drho = spin_reduced_dm(state, derivative=True)
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])  # ascending-m -> [+N/2, -N/2]
    return flip @ rho.matrix @ flip, flip @ drho.matrix @ flip


def _povm_bra(theta, phi):
    """Row coefficients of <Y| on the ordered basis [+N/2, -N/2]."""
    return np.array([np.cos(theta / 2.0), np.sin(theta / 2.0) * np.exp(1j * phi)])


def spin_outcome_probability(state: BranchedState, povm: SpinPovm):
    """p(Y|g) = <Y|rho_spin|Y> and its analytic g-derivative."""
    rho, drho = _ghz_support_dm(state)
    u = _povm_bra(povm.theta, povm.phi)
    p = float(np.real(u @ rho @ u.conj()))
    dp = float(np.real(u @ drho @ u.conj()))
    return p, dp


def cfi_spin(state: BranchedState, povm: SpinPovm) -> FisherResult:
    # the complementary probability comes from the orthogonal bra rather
    # than 1 - p: near-pinned outcomes would otherwise lose ~5 digits to
    # cancellation and the flat CFI landscape would grow spurious maxima
    rho, drho = _ghz_support_dm(state)
    u = _povm_bra(povm.theta, povm.phi)
    v = np.array([-np.conj(u[1]), np.conj(u[0])])
    p = float(np.real(u @ rho @ u.conj()))
    q = float(np.real(v @ rho @ v.conj()))
    dp = float(np.real(u @ drho @ u.conj()))
    if p < 1e-9 or q < 1e-9:
        # treat as pinned: below this the ~1e-17 roundoff in the outcome
        # probabilities dominates the ratio (the CFI landscape in Phi is
        # flat, so the optimizer loses nothing)
        value = 0.0
    else:
        value = dp * dp / (p * q)
    return FisherResult(
        value=value,
        channel="CFI_spin",
        angles=(povm.theta, povm.phi),
        numerics={"p": p, "dp": dp},
    )


def _golden_max(f, lo, hi, tol=1e-8):
    """Golden-section maximization of a unimodal scalar function."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _optimize_phi(objective, n_coarse=181, tol=1e-8):
    """Coarse periodic scan in Phi followed by golden-section refinement."""
    phis = np.linspace(0.0, 2.0 * np.pi, n_coarse, endpoint=False)
    vals = np.array([objective(p) for p in phis])
    i = int(np.argmax(vals))
    span = 2.0 * np.pi / n_coarse
    return _golden_max(objective, phis[i] - span, phis[i] + span, tol=tol)


def optimize_spin_angles(state: BranchedState, scan_theta=False) -> FisherResult:
    """Maximize the binary spin CFI over (Theta, Phi).

    Theta is fixed to pi/2 (its maximizer); with ``scan_theta=True`` the
    maximizer is re-verified on a 61 x 181 grid and refined in Theta too.
    """
    theta = np.pi / 2.0

    def obj_phi(phi, th=theta):
        return cfi_spin(state, SpinPovm(th, phi)).value

    if scan_theta:
        thetas = np.linspace(0.0, np.pi, 61)
        phis = np.linspace(0.0, 2.0 * np.pi, 181, endpoint=False)
        grid = np.array([[obj_phi(p, th) for p in phis] for th in thetas])
        it, ip = np.unravel_index(np.argmax(grid), grid.shape)
        theta, _ = _golden_max(
            lambda th: obj_phi(phis[ip], th),
            max(0.0, thetas[it] - 0.06),
            min(np.pi, thetas[it] + 0.06),
        )
    phi, val = _optimize_phi(lambda p: obj_phi(p, theta))
    return FisherResult(
        value=val, channel="CFI_spin", angles=(theta, phi), numerics={"scan_theta": scan_theta}
    )


# ---------------------------------------------------------------------------
# joint spin (x) field channels


@dataclass
class QuadratureGrid:
    """Field-outcome grids for the three mechanical measurement channels."""

    lam: float = 0.0
    x: Optional[np.ndarray] = None  # homodyne quadrature points
    het_halfwidth: float = 0.0
    het_points: int = 201
    n_max: int = 0

    @classmethod
    def for_state(cls, state: BranchedState, lam=0.0, x_points=2001, het_points=201):
        phi_max = state.max_phi
        half = np.sqrt(2.0) * phi_max + 6.0
        return cls(
            lam=lam,
            x=np.linspace(-half, half, x_points),
            het_halfwidth=phi_max + 5.0,
            het_points=het_points,
            n_max=fock_cutoff_for(phi_max),
        )


def _ghz_branch_data(state: BranchedState):
    """Branch amplitudes/fields ordered [+N/2, -N/2] with analytic tangents."""
    s = state.config.N / 2.0
    tan = d_dg(state)
    by_label = {}
    for b, dA, dphi in zip(state.branches, tan.d_amplitude, tan.d_phi):
        by_label[b.label] = (b.amplitude, b.phi, dA, dphi)
    if len(by_label) != 2 or s not in by_label or -s not in by_label:
        raise ValueError("joint channels require a GHZ-family state (support on m = +/- N/2)")
    plus, minus = by_label[s], by_label[-s]
    A = np.array([plus[0], minus[0]])
    phi = np.array([plus[1], minus[1]])
    dA = np.array([plus[2], minus[2]])
    dphi = np.array([plus[3], minus[3]])
    return A, phi, dA, dphi


def _coherent_and_derivative(phi, dphi, space: FockSpace):
    """Truncated coherent vector and its parameter derivative.

    d(coh)_n = dphi sqrt(n) coh_(n-1) - Re(conj(phi) dphi) coh_n.
    """
    vec, _ = coherent_state(phi, space, max_deficit=np.inf)
    shifted = np.zeros_like(vec)
    n = np.arange(1, space.dim)
    shifted[n] = np.sqrt(n) * vec[n - 1]
    dvec = dphi * shifted - np.real(np.conj(phi) * dphi) * vec
    return vec, dvec


def _channel_cfi_from_fields(A, dA, W, dW, weights, coverage_tol=1e-6):
    """Both CFI variants from per-branch field amplitude functions.

    W, dW: arrays (2, n_outcomes) of field matrix elements per branch;
    weights: quadrature weights (or ones for discrete sums).  Returns a
    closure over (theta, phi) plus the coverage diagnostic.
    """
    U = A[:, None] * W  # branch-resolved joint amplitudes
    dU = dA[:, None] * W + A[:, None] * dW

    # mass coverage: sum over both POVM outcomes is angle-independent
    coverage = float(np.sum((np.abs(U[0]) ** 2 + np.abs(U[1]) ** 2) * weights))
    if coverage < 1.0 - coverage_tol:
        raise GridCoverageError(
            f"outcome grid covers {coverage:.8f} < 1 - {coverage_tol:g} of probability mass",
            coverage,
        )

    def both(theta, phi):
        """(literal, standard) CFI at the given POVM angles.

        The literal functional integrates (dp)^2/(p(1-p)) for the Pi_Upsilon
        outcome alone (as the source expressions print it, with no outcome
        sum); the standard joint CFI sums (dp)^2/p over both outcomes.
        """
        u_bra = _povm_bra(theta, phi)
        lit = 0.0
        std = 0.0
        for j, bra in enumerate(
            (u_bra, np.array([-np.conj(u_bra[1]), np.conj(u_bra[0])]))
        ):
            amp = bra[0] * U[0] + bra[1] * U[1]
            damp = bra[0] * dU[0] + bra[1] * dU[1]
            p = np.abs(amp) ** 2
            dp = 2.0 * np.real(np.conj(amp) * damp)
            ok = (p > 1e-300) & (p < 1.0)
            if j == 0:
                lit = float(np.sum(dp[ok] ** 2 / (p[ok] * (1.0 - p[ok])) * weights[ok]))
            std += float(np.sum(dp[ok] ** 2 / p[ok] * weights[ok]))
        return lit, std

    return both, coverage


def _maximize_channel(both, angles, numerics, channel):
    if angles is not None:
        lit, std = both(*angles)
        return FisherResult(value=lit, channel=channel, angles=tuple(angles),
                            numerics=numerics, value_standard=std)
    theta = np.pi / 2.0
    phi, _ = _optimize_phi(lambda p: both(theta, p)[0])
    lit, std = both(theta, phi)
    return FisherResult(value=lit, channel=channel, angles=(theta, phi),
                        numerics=numerics, value_standard=std)


def cfi_homodyne(state: BranchedState, grid: Optional[QuadratureGrid] = None,
                 angles=None, sweep_lambda=False) -> FisherResult:
    """Joint spin + homodyne CFI on a rotated-quadrature grid.

    The field matrix elements <x_lambda|phi> are built through the dense
    Fock route (Hermite table times truncated coherent vector).  With
    ``sweep_lambda`` the quadrature phase is swept over {0, pi/4, pi/2,
    3pi/4} and the best headline value is reported.
    """
    if grid is None:
        grid = QuadratureGrid.for_state(state)
    lams = [0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4] if sweep_lambda else [grid.lam]
    A, phi, dA, dphi = _ghz_branch_data(state)
    space = FockSpace(grid.n_max)
    xs = grid.x
    dx = xs[1] - xs[0]
    weights = np.full(xs.size, dx)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    best = None
    for lam in lams:
        table = quadrature_table(space.cutoff, xs, lam)  # (n, x)
        W = np.empty((2, xs.size), dtype=complex)
        dW = np.empty_like(W)
        for i in range(2):
            vec, dvec = _coherent_and_derivative(phi[i], dphi[i], space)
            W[i] = vec @ table.conj()  # <x_lam|phi_i>
            dW[i] = dvec @ table.conj()
        both, coverage = _channel_cfi_from_fields(A, dA, W, dW, weights)
        numerics = {"lambda": lam, "x_points": xs.size, "cutoff": space.cutoff,
                    "coverage": coverage}
        res = _maximize_channel(both, angles, numerics, "CFI_homodyne")
        if best is None or res.value > best.value:
            best = res
    return best


def cfi_heterodyne(state: BranchedState, grid: Optional[QuadratureGrid] = None,
                   angles=None) -> FisherResult:
    """Joint spin + heterodyne CFI on a midpoint complex-plane grid.

    p = (1/pi) <psi|(Pi (x) |zeta><zeta|)|psi>; matrix elements <zeta|phi>
    are closed-form coherent overlaps.
    """
    if grid is None:
        grid = QuadratureGrid.for_state(state)
    A, phi, dA, dphi = _ghz_branch_data(state)
    half, npts = grid.het_halfwidth, grid.het_points
    step = 2.0 * half / npts
    axis = -half + step * (np.arange(npts) + 0.5)
    zr, zi = np.meshgrid(axis, axis, indexing="ij")
    zeta = (zr + 1j * zi).ravel()
    W = np.empty((2, zeta.size), dtype=complex)
    dW = np.empty_like(W)
    pref = np.pi ** (-0.5)  # fold 1/pi of the Husimi measure into |W|^2
    for i in range(2):
        ov = np.exp(-0.5 * np.abs(zeta) ** 2 - 0.5 * abs(phi[i]) ** 2 + np.conj(zeta) * phi[i])
        W[i] = pref * ov
        dW[i] = pref * ov * (np.conj(zeta) * dphi[i] - np.real(np.conj(phi[i]) * dphi[i]))
    weights = np.full(zeta.size, step * step)
    both, coverage = _channel_cfi_from_fields(A, dA, W, dW, weights)
    numerics = {"het_halfwidth": half, "het_points": npts, "coverage": coverage}
    return _maximize_channel(both, angles, numerics, "CFI_heterodyne")


def cfi_photocount(state: BranchedState, n_max: Optional[int] = None,
                   angles=None) -> FisherResult:
    """Joint spin + photocounting CFI over Fock outcomes 0..n_max."""
    if n_max is None:
        n_max = fock_cutoff_for(state.max_phi)
    A, phi, dA, dphi = _ghz_branch_data(state)
    space = FockSpace(n_max)
    W = np.empty((2, space.dim), dtype=complex)
    dW = np.empty_like(W)
    for i in range(2):
        W[i], dW[i] = _coherent_and_derivative(phi[i], dphi[i], space)
    weights = np.ones(space.dim)
    both, coverage = _channel_cfi_from_fields(A, dA, W, dW, weights, coverage_tol=1e-6)
    numerics = {"n_max": n_max, "coverage": coverage}
    return _maximize_channel(both, angles, numerics, "CFI_photocount")
