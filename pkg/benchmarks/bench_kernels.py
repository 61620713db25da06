"""Compare the numba and pure-numpy kernel paths.

Run twice:

    python benchmarks/bench_kernels.py            # numba (if installed)
    GRAVSIM_DISABLE_NUMBA=1 python benchmarks/bench_kernels.py

Each benchmark reports best-of-repeats wall time after a warmup call (the
warmup also absorbs JIT compilation on the numba path).
"""

import time

import numpy as np

from gravsim import kernels
from gravsim.branches import GHZ, ProbeConfig
from gravsim.hilbert import FockSpace
from gravsim.lindblad import LindbladParams, build_generator, initial_density_matrix


def best_of(fn, repeats=5):
    fn()  # warmup / JIT
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_hermite():
    x = np.linspace(-12.0, 12.0, 2001)
    return best_of(lambda: kernels.hermite_table(300, x))


def bench_rk4():
    cfg = ProbeConfig(N=2, k=0.5, g=0.1, initial_spin=GHZ())
    space = FockSpace(24)
    gen = build_generator(
        cfg, LindbladParams(gamma_d=1e-3, gamma=1e-3, kappa=1e-5, n_th=10.0), space
    )
    rho = np.ascontiguousarray(initial_density_matrix(cfg, space).matrix)
    return best_of(
        lambda: kernels.rk4_lindblad_steps(rho, gen.h_eff, gen.jumps, gen.rates, 1e-3, 50),
        repeats=3,
    )


def main():
    path = "numba" if kernels.USE_NUMBA else "numpy"
    print(f"kernel path: {path}")
    print(f"hermite_table(300, 2001 pts): {1e3 * bench_hermite():8.2f} ms")
    print(f"rk4_lindblad_steps(dim 75, 50 steps): {1e3 * bench_rk4():8.2f} ms")


if __name__ == "__main__":
    main()
