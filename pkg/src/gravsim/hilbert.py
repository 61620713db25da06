"""Finite-dimensional Hilbert-space primitives.

Truncated Fock space, collective-spin (Dicke) space, coherent states,
ladder operators, partial traces and quadrature wavefunctions.  Basis
ordering is fixed everywhere: Dicke labels ascending in m, Fock labels
ascending in n, and composite vectors are spin-major (spin index outer,
Fock index inner).  States are never silently renormalized; truncation
norm deficits are carried as diagnostics.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .kernels import hermite_table


class TruncationError(Exception):
    """Fock cutoff too small for the requested amplitude.

    Carries the norm deficit 1 - ||psi||^2 of the truncated expansion.
    """

    def __init__(self, message, norm_deficit):
        super().__init__(message)
        self.norm_deficit = norm_deficit


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class FockSpace:
    """Truncated bosonic mode with Fock states |0> .. |cutoff>."""

    cutoff: int

    def __post_init__(self):
        if self.cutoff < 0:
            raise ValueError("cutoff must be >= 0")

    @property
    def dim(self):
        return self.cutoff + 1

    def annihilation(self):
        a = np.zeros((self.dim, self.dim), dtype=complex)
        n = np.arange(1, self.dim)
        a[n - 1, n] = np.sqrt(n)
        return a

    def creation(self):
        return self.annihilation().conj().T

    def number(self):
        return np.diag(np.arange(self.dim, dtype=float)).astype(complex)

    def position_sum(self):
        """a + a^dagger (the conditional-displacement quadrature)."""
        a = self.annihilation()
        return a + a.conj().T


@dataclass(frozen=True)
class DickeSpace:
    """Symmetric collective-spin space for N spin-1/2 particles.

    Basis |s, m> with s = N/2 and m ascending from -N/2 to +N/2.
    """

    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")

    @property
    def dim(self):
        return self.N + 1

    @property
    def s(self):
        return self.N / 2.0

    @property
    def m_values(self):
        return np.arange(self.dim) - self.s


@dataclass(frozen=True)
class DickeOperators:
    S_z: np.ndarray
    S_plus: np.ndarray
    S_minus: np.ndarray


def dicke_operators(space: DickeSpace) -> DickeOperators:
    """Collective spin operators in the ascending-m Dicke basis."""
    s = space.s
    m = space.m_values
    S_z = np.diag(m).astype(complex)
    # S_+|s,m> = sqrt(s(s+1) - m(m+1)) |s,m+1>
    up = np.sqrt(s * (s + 1) - m[:-1] * (m[:-1] + 1))
    S_plus = np.zeros((space.dim, space.dim), dtype=complex)
    S_plus[np.arange(1, space.dim), np.arange(space.dim - 1)] = up
    return DickeOperators(S_z=S_z, S_plus=S_plus, S_minus=S_plus.conj().T)


def coherent_state(alpha, space: FockSpace, max_deficit=1e-12):
    """Truncated coherent-state vector and its norm deficit.

    Component n is exp(-|alpha|^2/2) alpha^n / sqrt(n!).  Raises
    TruncationError when the Poisson tail beyond the cutoff exceeds
    ``max_deficit`` (pass numpy.inf to disable the check).
    """
    n = np.arange(space.dim)
    alpha = complex(alpha)
    if alpha == 0:
        vec = np.zeros(space.dim, dtype=complex)
        vec[0] = 1.0
        return vec, 0.0
    # log-space magnitudes to stay finite for large cutoff
    logmag = -0.5 * abs(alpha) ** 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    vec = np.exp(logmag) * np.exp(1j * n * np.angle(alpha))
    deficit = max(0.0, 1.0 - float(np.sum(np.abs(vec) ** 2)))
    if deficit > max_deficit:
        raise TruncationError(
            f"coherent state |alpha|={abs(alpha):.3g} needs cutoff > {space.cutoff} "
            f"(norm deficit {deficit:.3e} > {max_deficit:.3e})",
            deficit,
        )
    return vec, deficit


def coherent_overlap(beta, gamma):
    """Closed-form overlap <beta|gamma> = exp(-|beta|^2/2 - |gamma|^2/2 + conj(beta) gamma)."""
    beta = complex(beta)
    gamma = complex(gamma)
    return np.exp(-0.5 * abs(beta) ** 2 - 0.5 * abs(gamma) ** 2 + np.conj(beta) * gamma)


@dataclass
class DenseState:
    """Dense spin (x) Fock vector, spin-major ordering.

    ``norm_deficit`` is a diagnostic of truncation loss accumulated while
    building the vector; the amplitudes themselves are left untouched.
    """

    amplitudes: np.ndarray
    spin_dim: int
    fock_dim: int
    norm_deficit: float = 0.0

    def __post_init__(self):
        if self.amplitudes.shape != (self.spin_dim * self.fock_dim,):
            raise DimensionMismatchError(
                f"expected vector of length {self.spin_dim * self.fock_dim}, "
                f"got {self.amplitudes.shape}"
            )

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def as_matrix(self):
        """Amplitudes reshaped to (spin_dim, fock_dim)."""
        return self.amplitudes.reshape(self.spin_dim, self.fock_dim)


@dataclass
class DensityMatrix:
    """Complex square matrix with subsystem dimensions attached."""

    matrix: np.ndarray
    dims: list = field(default_factory=list)

    def __post_init__(self):
        d = int(np.prod(self.dims)) if self.dims else self.matrix.shape[0]
        if self.matrix.shape != (d, d):
            raise DimensionMismatchError(
                f"matrix shape {self.matrix.shape} inconsistent with dims {self.dims}"
            )

    def hermiticity_defect(self):
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def trace_defect(self):
        return abs(complex(np.trace(self.matrix)) - 1.0)

    def min_eigenvalue(self):
        return float(np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))[0])


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Trace out all subsystems except index ``keep`` (bipartite only)."""
    if len(rho.dims) != 2:
        raise DimensionMismatchError("partial_trace expects a bipartite DensityMatrix")
    dA, dB = rho.dims
    t = rho.matrix.reshape(dA, dB, dA, dB)
    if keep == 0:
        out = np.einsum("ajbj->ab", t)
        return DensityMatrix(out, [dA])
    if keep == 1:
        out = np.einsum("jajb->ab", t)
        return DensityMatrix(out, [dB])
    raise DimensionMismatchError(f"keep must be 0 or 1, got {keep}")


def linear_entropy(rho: DensityMatrix) -> float:
    """S_L = 1 - Tr(rho^2), in [0, 1 - 1/d] for valid states."""
    return float(1.0 - np.real(np.trace(rho.matrix @ rho.matrix)))


def position_wavefunction(n, x, lam=0.0):
    """Rotated-quadrature wavefunction <n|x_lambda>.

    pi^(-1/4) 2^(-n/2) (n!)^(-1/2) exp(-x^2/2) H_n(x) exp(i n lambda),
    evaluated with the stable normalized Hermite recurrence.  ``x`` may be
    a scalar or an array.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    table = hermite_table(n, xs)
    out = table[n] * np.exp(1j * n * lam)
    return complex(out[0]) if np.isscalar(x) else out


def quadrature_table(n_max, x, lam=0.0):
    """Matrix of <n|x_lambda> for n = 0..n_max over a grid x, shape (n_max+1, len(x))."""
    xs = np.asarray(x, dtype=float)
    table = hermite_table(n_max, xs).astype(complex)
    if lam != 0.0:
        table = table * np.exp(1j * lam * np.arange(n_max + 1))[:, None]
    return table


def fock_cutoff_for(phi_max, margin=0.0):
    """Cutoff heuristic ceil(|phi|^2 + 8|phi| + 20) keeping Poisson-tail deficits < 1e-12."""
    p = abs(phi_max)
    return int(np.ceil(p * p + 8.0 * p + 20.0 + margin))


def state_fidelity(rho, sigma):
    """Uhlmann fidelity F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Accepts DensityMatrix or raw arrays; vectors are treated as pure states.
    """
    def as_mat(x):
        m = x.matrix if isinstance(x, DensityMatrix) else np.asarray(x)
        if m.ndim == 1:
            m = np.outer(m, m.conj())
        return m

    r, s = as_mat(rho), as_mat(sigma)
    w, v = np.linalg.eigh(0.5 * (r + r.conj().T))
    w = np.clip(w, 0.0, None)
    sq = (v * np.sqrt(w)) @ v.conj().T
    inner = sq @ s @ sq
    ev = np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T)), 0.0, None)
    return float(np.sum(np.sqrt(ev)) ** 2)


def conditional_displacement_hamiltonian(z_values, fock: FockSpace):
    """Dense scaled Hamiltonian a^dag a - Z (a + a^dag), spin-major.

    ``z_values`` are the eigenvalues of the spin operator Z(k, g) in the
    chosen (diagonal) spin basis, ascending.
    """
    z = np.asarray(z_values, dtype=float)
    ds = z.size
    eye = np.eye(ds)
    return np.kron(eye, fock.number()) - np.kron(np.diag(z), fock.position_sum())
