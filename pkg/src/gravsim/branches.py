"""Exact closed-form evolution as spin-labeled coherent branches.

The conditional-displacement unitary maps |label>|alpha> to a phase times
|label>|phi(label)>, so any initial state that is a superposition of
spin-z eigenstates with a single coherent field stays a finite list of
branches for all times.  All Fisher computations downstream reduce to
O(branches^2) coherent-overlap algebra with no truncation error.

Conventions:
  - eta(tau) = 1 - exp(-i tau)
  - displacement phase D(b)|c> = exp(i Im(b conj(c))) |c + b>
  - tilt enters only through g cos(xi)
  - product-basis bit 0 means spin up (sigma_z = +1)
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .hilbert import (
    DenseState,
    DensityMatrix,
    DickeSpace,
    FockSpace,
    coherent_overlap,
    coherent_state,
    fock_cutoff_for,
)


class UnsupportedInputError(ValueError):
    pass


class LabelMismatchError(ValueError):
    pass


# ---------------------------------------------------------------------------
# initial spin families


@dataclass(frozen=True)
class GHZ:
    """(|N/2, N/2> + |N/2, -N/2>)/sqrt(2)."""


@dataclass(frozen=True)
class CSS:
    """Product of |+> spins; Dicke amplitudes sqrt(binom(N, N/2+m)) 2^(-N/2)."""


@dataclass(frozen=True)
class DickeAmplitudes:
    """Arbitrary amplitudes c_m over |N/2, m>, ascending m, normalized."""

    c: tuple

    def __init__(self, c):
        object.__setattr__(self, "c", tuple(complex(x) for x in c))


@dataclass(frozen=True)
class ProductAmplitudes:
    """Amplitudes over the 2^N product basis, index bits: 0 = up, 1 = down.

    Index i encodes the bitstring of spins 1..N with spin 1 in the most
    significant bit; e.g. for N=2 the order is |00>, |01>, |10>, |11>.
    """

    R: tuple

    def __init__(self, R):
        object.__setattr__(self, "R", tuple(complex(x) for x in R))


SpinFamily = Union[GHZ, CSS, DickeAmplitudes, ProductAmplitudes]


def css_amplitudes(N):
    """Dicke-basis amplitudes of the coherent spin state, ascending m."""
    j = np.arange(N + 1)  # j = N/2 + m
    logc = 0.5 * (gammaln(N + 1) - gammaln(j + 1) - gammaln(N - j + 1)) - 0.5 * N * np.log(2.0)
    return np.exp(logc)


@dataclass(frozen=True)
class ProbeConfig:
    """Physical configuration of the spin-mechanical probe (scaled units)."""

    N: int
    k: Union[float, tuple]
    g: float
    xi: float = 0.0
    alpha: complex = 0.0
    initial_spin: SpinFamily = GHZ()

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not self.isotropic and len(self.couplings) != self.N:
            raise ValueError("anisotropic couplings must have length N")
        if isinstance(self.initial_spin, DickeAmplitudes):
            c = np.asarray(self.initial_spin.c)
            if c.size != self.N + 1:
                raise ValueError("DickeAmplitudes needs N+1 entries")
            if abs(np.sum(np.abs(c) ** 2) - 1.0) > 1e-10:
                raise ValueError("Dicke amplitudes must be normalized")
        if isinstance(self.initial_spin, ProductAmplitudes):
            R = np.asarray(self.initial_spin.R)
            if R.size != 2**self.N:
                raise ValueError("ProductAmplitudes needs 2^N entries")
            if abs(np.sum(np.abs(R) ** 2) - 1.0) > 1e-10:
                raise ValueError("product amplitudes must be normalized")

    @property
    def isotropic(self):
        return np.isscalar(self.k)

    @property
    def couplings(self):
        if self.isotropic:
            return np.full(self.N, float(self.k))
        return np.asarray(self.k, dtype=float)

    @property
    def coupling_sum(self):
        return float(np.sum(self.couplings))


@dataclass(frozen=True)
class CoherentBranch:
    label: object  # Dicke m (float) or product bitstring (tuple of 0/1)
    amplitude: complex
    phi: complex


@dataclass(frozen=True)
class BranchedState:
    branches: tuple
    tau: float
    config: ProbeConfig

    @property
    def norm_squared(self):
        return float(sum(abs(b.amplitude) ** 2 for b in self.branches))

    @property
    def max_phi(self):
        return float(max(abs(b.phi) for b in self.branches))


@dataclass(frozen=True)
class BranchTangent:
    """Per-branch analytic d/dg of amplitude and field amplitude."""

    d_amplitude: tuple
    d_phi: tuple


def eta(tau):
    return 1.0 - np.exp(-1j * tau)


def z_eigenvalue(label, config: ProbeConfig) -> float:
    """Eigenvalue of Z(k, g) = sum_i k_i sigma_i^z / 2 - g cos(xi) on ``label``."""
    gcos = config.g * np.cos(config.xi)
    if isinstance(label, tuple):
        if len(label) != config.N:
            raise LabelMismatchError(f"bitstring {label} inconsistent with N={config.N}")
        signs = 1.0 - 2.0 * np.asarray(label, dtype=float)  # bit 0 -> +1
        return float(np.sum(config.couplings * signs) / 2.0 - gcos)
    m = float(label)
    if abs(m) > config.N / 2.0 + 1e-12:
        raise LabelMismatchError(f"|m|={abs(m)} exceeds N/2={config.N / 2}")
    if not config.isotropic:
        # Dicke labels are only meaningful anisotropically on GHZ support,
        # where the effective coupling is the plain sum of the k_i.
        if abs(abs(m) - config.N / 2.0) > 1e-12:
            raise LabelMismatchError("anisotropic couplings require GHZ or product labels")
        return float(np.sign(m) * config.coupling_sum / 2.0 - gcos)
    return float(config.k) * m - gcos


def _initial_branches(config: ProbeConfig):
    """(label, initial amplitude) pairs for the configured spin family."""
    s = config.N / 2.0
    init = config.initial_spin
    if isinstance(init, GHZ):
        return [(s, 1.0 / np.sqrt(2.0)), (-s, 1.0 / np.sqrt(2.0))]
    if isinstance(init, CSS):
        if not config.isotropic:
            raise UnsupportedInputError("CSS requires isotropic couplings")
        amps = css_amplitudes(config.N)
        return [(m, amps[i]) for i, m in enumerate(np.arange(config.N + 1) - s)]
    if isinstance(init, DickeAmplitudes):
        if not config.isotropic:
            raise UnsupportedInputError("Dicke amplitudes require isotropic couplings")
        return [
            (m, c)
            for m, c in zip(np.arange(config.N + 1) - s, init.c)
            if c != 0
        ]
    if isinstance(init, ProductAmplitudes):
        out = []
        for idx, R in enumerate(init.R):
            if R == 0:
                continue
            bits = tuple((idx >> (config.N - 1 - i)) & 1 for i in range(config.N))
            out.append((bits, R))
        return out
    raise UnsupportedInputError(f"unknown spin family {init!r}")


def evolve(config: ProbeConfig, tau: float) -> BranchedState:
    """Exact evolved state as a list of coherent branches.

    Branch with eigenvalue z = z_eigenvalue(label) carries
        phi       = alpha exp(-i tau) + z eta(tau)
        amplitude = c exp(i z^2 (tau - sin tau))
                      exp(i Im(z eta(tau) conj(alpha exp(-i tau)))).
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    alpha = complex(config.alpha)
    e = eta(tau)
    rotated = alpha * np.exp(-1j * tau)
    branches = []
    for label, c in _initial_branches(config):
        z = z_eigenvalue(label, config)
        phase = z * z * (tau - np.sin(tau)) + np.imag(z * e * np.conj(rotated))
        branches.append(
            CoherentBranch(
                label=label,
                amplitude=c * np.exp(1j * phase),
                phi=rotated + z * e,
            )
        )
    return BranchedState(branches=tuple(branches), tau=tau, config=config)


def d_dg(state: BranchedState) -> BranchTangent:
    """Analytic d/dg of each branch amplitude and field amplitude.

    dz/dg = -cos(xi) for every branch, so d(phi)/dg = -cos(xi) eta(tau) and
    the amplitude derivative follows from the accumulated-phase derivative.
    """
    cfg = state.config
    tau = state.tau
    cosxi = np.cos(cfg.xi)
    e = eta(tau)
    rotated = complex(cfg.alpha) * np.exp(-1j * tau)
    d_amp = []
    d_phi = []
    for b in state.branches:
        z = z_eigenvalue(b.label, cfg)
        dtheta = -cosxi * (2.0 * z * (tau - np.sin(tau)) + np.imag(e * np.conj(rotated)))
        d_amp.append(1j * dtheta * b.amplitude)
        d_phi.append(-cosxi * e)
    return BranchTangent(d_amplitude=tuple(d_amp), d_phi=tuple(d_phi))


def _label_sort_key(label):
    return label if not isinstance(label, tuple) else label


def to_dense(state: BranchedState, space: FockSpace, max_deficit=1e-12) -> DenseState:
    """Densify onto spin (x) truncated Fock space (Dicke-labeled states only).

    Spin-major ordering, ascending m.  The reported norm deficit is the
    worst per-branch coherent truncation deficit.
    """
    for b in state.branches:
        if isinstance(b.label, tuple):
            raise UnsupportedInputError("to_dense supports Dicke-labeled branches only")
    spin_dim = state.config.N + 1
    s = state.config.N / 2.0
    vec = np.zeros(spin_dim * space.dim, dtype=complex)
    worst = 0.0
    for b in state.branches:
        idx = int(round(b.label + s))
        cvec, deficit = coherent_state(b.phi, space, max_deficit=max_deficit)
        worst = max(worst, deficit)
        vec[idx * space.dim : (idx + 1) * space.dim] += b.amplitude * cvec
    return DenseState(amplitudes=vec, spin_dim=spin_dim, fock_dim=space.dim, norm_deficit=worst)


def default_fock_space(state: BranchedState, margin=0.0) -> FockSpace:
    return FockSpace(fock_cutoff_for(state.max_phi, margin=margin))


def spin_reduced_dm(state: BranchedState, derivative=False):
    """Gram-weighted reduced spin density matrix over the branch labels.

    Entry (a, b) = amp_a conj(amp_b) <phi_b|phi_a>, labels ascending.  With
    ``derivative=True`` also returns the analytic d/dg of the matrix.
    """
    order = sorted(range(len(state.branches)), key=lambda i: _label_sort_key(state.branches[i].label))
    branches = [state.branches[i] for i in order]
    n = len(branches)
    amps = np.array([b.amplitude for b in branches])
    phis = np.array([b.phi for b in branches])
    overlap = np.empty((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            overlap[a, b] = coherent_overlap(phis[b], phis[a])
    rho = np.outer(amps, amps.conj()) * overlap
    dm = DensityMatrix(rho, [n])
    if not derivative:
        return dm
    tan = d_dg(state)
    damps = np.array([tan.d_amplitude[i] for i in order])
    dphis = np.array([tan.d_phi[i] for i in order])
    # d log <phi_b|phi_a> = -Re(conj(dphi_a) phi_a) - Re(conj(dphi_b) phi_b)
    #                       + conj(dphi_b) phi_a + conj(phi_b) dphi_a
    r = np.real(np.conj(dphis) * phis)
    dlog = (
        -r[None, :]
        - r[:, None]
        + np.conj(dphis)[None, :] * phis[:, None]
        + np.conj(phis)[None, :] * dphis[:, None]
    )
    drho = (
        np.outer(damps, amps.conj()) + np.outer(amps, damps.conj())
    ) * overlap + rho * dlog
    return dm, DensityMatrix(drho, [n])


# ---------------------------------------------------------------------------
# thermal initial field


def _field_unitary(z, tau, space: FockSpace):
    """Exact one-branch field propagator exp(i z^2 (tau - sin tau)) D(z eta) R(tau)."""
    n = np.arange(space.dim)
    rot = np.diag(np.exp(-1j * n * tau))
    beta = z * eta(tau)
    a = space.annihilation()
    disp = expm(beta * a.conj().T - np.conj(beta) * a)
    return np.exp(1j * z * z * (tau - np.sin(tau))) * (disp @ rot)


def thermal_occupations(n_bar, dim):
    if n_bar == 0:
        p = np.zeros(dim)
        p[0] = 1.0
        return p
    n = np.arange(dim)
    return np.exp(n * np.log(n_bar / (n_bar + 1.0)) - np.log(n_bar + 1.0))


def thermal_cutoff_for(n_bar, phi_max, tail=1e-12):
    """Cutoff covering the thermal tail plus the conditional displacement."""
    if n_bar > 0:
        n0 = int(np.ceil(np.log(tail) / np.log(n_bar / (n_bar + 1.0))))
    else:
        n0 = 0
    return n0 + fock_cutoff_for(phi_max)


def thermal_evolution_check(config: ProbeConfig, n_bar, tau=2 * np.pi, cutoff=None):
    """Evolve GHZ spins with an initially thermal field, exactly and densely.

    The Hamiltonian is diagonal in spin-z, so each spin block (s, s') of the
    density matrix evolves as U_s rho_field U_s'^dag with the closed-form
    field propagators.  Returns (spin DensityMatrix in ascending-m GHZ
    support order, field DensityMatrix).
    """
    if not isinstance(config.initial_spin, GHZ):
        raise UnsupportedInputError("thermal_evolution_check requires GHZ initial spins")
    zs = [
        z_eigenvalue(-config.N / 2.0, config),
        z_eigenvalue(config.N / 2.0, config),
    ]
    phi_max = max(abs(z * 2.0) for z in zs) + 0.0
    if cutoff is None:
        cutoff = thermal_cutoff_for(n_bar, phi_max)
    space = FockSpace(cutoff)
    rho_f = np.diag(thermal_occupations(n_bar, space.dim)).astype(complex)
    tail = 1.0 - float(np.real(np.trace(rho_f)))
    if tail > 1e-8:
        raise UnsupportedInputError(
            f"cutoff {cutoff} too small for thermal occupation n_bar={n_bar} (tail {tail:.2e})"
        )
    us = [_field_unitary(z, tau, space) for z in zs]
    dim = 2 * space.dim
    rho = np.zeros((dim, dim), dtype=complex)
    for a in range(2):
        for b in range(2):
            block = 0.5 * (us[a] @ rho_f @ us[b].conj().T)
            rho[a * space.dim : (a + 1) * space.dim, b * space.dim : (b + 1) * space.dim] = block
    full = DensityMatrix(rho, [2, space.dim])
    spin_dm = DensityMatrix(
        np.array(
            [
                [np.trace(rho[i * space.dim : (i + 1) * space.dim, j * space.dim : (j + 1) * space.dim])
                 for j in range(2)]
                for i in range(2)
            ]
        ),
        [2],
    )
    from .hilbert import partial_trace

    field_dm = partial_trace(full, keep=1)
    return spin_dm, field_dm


def ghz_phase_state(config: ProbeConfig, tau=2 * np.pi):
    """Pure GHZ-with-phase spin state reached at disentangling times.

    Ascending-m order (-N/2 first): (e^{i theta_-}| -N/2> + e^{i theta_+}|N/2>)/sqrt(2)
    with the exact branch phases; at tau = 2 pi the relative phase is
    exp(4 pi i k N g cos xi) on the |-N/2> component.
    """
    st = evolve(config, tau)
    branches = sorted(st.branches, key=lambda b: b.label)
    v = np.array([b.amplitude for b in branches])
    return v / np.linalg.norm(v)
