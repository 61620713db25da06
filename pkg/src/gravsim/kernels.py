"""Hot numeric kernels with optional numba acceleration.

Every kernel has a pure-numpy implementation and, when numba is importable
and not disabled, an @njit-compiled twin.  Set the environment variable
``GRAVSIM_DISABLE_NUMBA=1`` before import to force the numpy path (useful
for debugging and for the benchmark in benchmarks/bench_kernels.py).
"""

import os

import numpy as np

_DISABLED = os.environ.get("GRAVSIM_DISABLE_NUMBA", "0") not in ("", "0")

try:
    from numba import njit as _njit

    _NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _NUMBA_AVAILABLE = False

USE_NUMBA = _NUMBA_AVAILABLE and not _DISABLED


def optional_njit(*args, **kwargs):
    """Return njit(...) when the numba path is active, identity otherwise."""

    def decorator(func):
        if USE_NUMBA:
            return _njit(*args, **kwargs)(func)
        return func

    return decorator


@optional_njit(cache=True)
def hermite_table(n_max, x):
    """Harmonic-oscillator position wavefunctions <n|x> for n = 0..n_max.

    Returns a real array of shape (n_max+1, len(x)).  Uses the normalized
    three-term recurrence
        psi_0 = pi^(-1/4) exp(-x^2/2)
        psi_n = sqrt(2/n) x psi_(n-1) - sqrt((n-1)/n) psi_(n-2),
    which stays finite for large n where naive factorials overflow.
    The homodyne phase factor exp(i n lambda) is applied by the caller.
    """
    nx = x.shape[0]
    out = np.empty((n_max + 1, nx))
    out[0] = np.pi ** (-0.25) * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(2, n_max + 1):
        out[n] = np.sqrt(2.0 / n) * x * out[n - 1] - np.sqrt((n - 1.0) / n) * out[n - 2]
    return out


@optional_njit(cache=True, nogil=True)
def lindblad_rhs(rho, h_eff, jumps, rates):
    """d(rho)/dtau = -i(H_eff rho - rho H_eff^dag) + sum_j r_j L_j rho L_j^dag.

    ``h_eff`` already contains the -i/2 sum r_j L_j^dag L_j anti-Hermitian part,
    so the jump terms here are the refilling ("sandwich") pieces only.
    """
    out = -1j * (np.dot(h_eff, rho) - np.dot(rho, np.conj(h_eff.T)))
    for j in range(jumps.shape[0]):
        lj = jumps[j]
        out = out + rates[j] * np.dot(np.dot(lj, rho), np.conj(lj.T))
    return out


@optional_njit(cache=True, nogil=True)
def rk4_lindblad_steps(rho, h_eff, jumps, rates, dt, nsteps):
    """Advance a density matrix by ``nsteps`` classic RK4 steps of size ``dt``.

    The result is re-Hermitized after every step; truncation positivity is
    checked by the caller at output times, not here.
    """
    for _ in range(nsteps):
        k1 = lindblad_rhs(rho, h_eff, jumps, rates)
        k2 = lindblad_rhs(rho + 0.5 * dt * k1, h_eff, jumps, rates)
        k3 = lindblad_rhs(rho + 0.5 * dt * k2, h_eff, jumps, rates)
        k4 = lindblad_rhs(rho + dt * k3, h_eff, jumps, rates)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + np.conj(rho.T))
    return rho
