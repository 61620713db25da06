import numpy as np
import pytest

from gravsim import fisher, lindblad
from gravsim.branches import GHZ, ProbeConfig, evolve, to_dense
from gravsim.hilbert import FockSpace, state_fidelity


def ghz_config(N=1, k=0.5, g=0.1, alpha=0.0, xi=0.0):
    return ProbeConfig(N=N, k=k, g=g, xi=xi, alpha=alpha, initial_spin=GHZ())


class TestParams:
    def test_rejects_negative_rates(self):
        with pytest.raises(ValueError):
            lindblad.LindbladParams(gamma_d=-1e-3)
        with pytest.raises(ValueError):
            lindblad.LindbladParams(n_th=-0.1)

    def test_closed_flag(self):
        assert lindblad.LindbladParams().closed
        assert not lindblad.LindbladParams(kappa=1e-5).closed


class TestBuildGenerator:
    def test_jump_count_tracks_rates(self):
        space = FockSpace(5)
        gen = lindblad.build_generator(
            ghz_config(), lindblad.LindbladParams(gamma_d=0.1, kappa=0.2, n_th=1.0), space
        )
        assert gen.jumps.shape[0] == 3  # S_z, a^dag, a

    def test_rejects_anisotropy(self):
        cfg = ProbeConfig(N=2, k=(0.4, 0.6), g=0.1, initial_spin=GHZ())
        with pytest.raises(ValueError):
            lindblad.build_generator(cfg, lindblad.LindbladParams(), FockSpace(5))


class TestIntegrate:
    def test_closed_limit_matches_branch_evolution(self):
        cfg = ghz_config()
        space = FockSpace(25)
        for tau in (np.pi, 2 * np.pi):
            res = lindblad.integrate(cfg, lindblad.LindbladParams(), tau, space=space)
            psi = to_dense(evolve(cfg, tau), space).amplitudes
            fid = state_fidelity(res.rho.matrix, psi)
            assert fid >= 1 - 1e-6
            assert res.trace_defect < 1e-8

    def test_collective_dephasing_rate(self):
        # k = 0 decouples the field; the m=+1, m=-1 coherence of a two-spin
        # GHZ state decays as exp(-gamma_d (Delta m)^2 tau / 2) = exp(-2 gamma_d tau)
        gamma_d, tau = 0.4, 1.3
        cfg = ghz_config(N=2, k=0.0, g=0.0)
        space = FockSpace(3)
        res = lindblad.integrate(
            cfg, lindblad.LindbladParams(gamma_d=gamma_d), tau, space=space
        )
        rho = res.rho.matrix
        # spin-major, ascending m: coherence block (m=-1, m=+1) x vacuum
        coh = abs(rho[0 * space.dim, 2 * space.dim])
        assert abs(coh - 0.5 * np.exp(-2.0 * gamma_d * tau)) < 1e-8

    def test_thermal_refilling_occupation(self):
        # spin idle, vacuum start: <n>(tau) = n_th (1 - e^(-kappa tau))
        kappa, n_th, tau = 0.5, 1.0, 2.0
        cfg = ghz_config(N=1, k=0.0, g=0.0)
        space = FockSpace(22)
        res = lindblad.integrate(
            cfg, lindblad.LindbladParams(kappa=kappa, n_th=n_th), tau, space=space
        )
        n_full = np.kron(np.eye(2), np.diag(np.arange(space.dim, dtype=float)))
        got = np.trace(n_full @ res.rho.matrix).real
        assert abs(got - n_th * (1 - np.exp(-kappa * tau))) < 1e-6

    def test_default_space_accommodates_excursion(self):
        res = lindblad.integrate(
            ghz_config(k=1.0), lindblad.LindbladParams(kappa=1e-5, n_th=10.0), np.pi
        )
        assert res.trace_defect < 1e-6
        assert res.min_eigenvalue > -1e-6

    def test_zero_time_returns_initial(self):
        res = lindblad.integrate(ghz_config(), lindblad.LindbladParams(), 0.0)
        assert res.steps == 0
        assert abs(np.trace(res.rho.matrix) - 1.0) < 1e-12

    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            lindblad.integrate(ghz_config(), lindblad.LindbladParams(), -1.0)


class TestQfiLosses:
    def test_zero_rates_recover_pure_qfi(self):
        cfg = ghz_config()
        tau = np.pi
        got = lindblad.qfi_losses(cfg, lindblad.LindbladParams(), tau, space=FockSpace(25))
        want = fisher.qfi_pure(evolve(cfg, tau)).value
        assert abs(got.value - want) <= 1e-3 * want
        assert got.channel == "QFI_losses"

    def test_dephasing_reduces_qfi(self):
        cfg = ghz_config()
        space = FockSpace(25)
        ideal = lindblad.qfi_losses(cfg, lindblad.LindbladParams(), np.pi, space=space)
        lossy = lindblad.qfi_losses(
            cfg, lindblad.LindbladParams(gamma_d=0.05), np.pi, space=space
        )
        assert lossy.value < ideal.value

    def test_serial_matches_parallel(self):
        cfg = ghz_config()
        kw = dict(space=FockSpace(20), max_step=5e-3)
        a = lindblad.qfi_losses(cfg, lindblad.LindbladParams(gamma_d=0.02), 1.0, **kw)
        b = lindblad.qfi_losses(
            cfg, lindblad.LindbladParams(gamma_d=0.02), 1.0, parallel=False, **kw
        )
        assert abs(a.value - b.value) < 1e-12 * max(1.0, a.value)
