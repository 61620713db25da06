import numpy as np
import pytest

from gravsim import harness, oracles


def small_spec(figure, **kw):
    defaults = dict(tau_points=9, channel_tau_points=5, samples=20,
                    kn_list=(0.5,), n_list=(1, 2), delta_k_list=(0.3,),
                    channel_kn_list=(0.1,), map_points=3, map_n_list=(3,))
    defaults.update(kw)
    return harness.SweepSpec(figure=figure, **defaults)


class TestSweepSpec:
    def test_rejects_unknown_figure(self):
        with pytest.raises(ValueError):
            harness.SweepSpec(figure=9)

    def test_rejects_degenerate_grid(self):
        with pytest.raises(ValueError):
            harness.SweepSpec(figure=1, tau_points=1)


class TestFigurePipelines:
    def test_fig1_full_period_value(self):
        data = harness.run_figure(1, small_spec(1, kn_list=(0.5, 2.0)))
        for row in data.rows:
            if abs(row[2] - 2 * np.pi) < 1e-12:
                kn = row[4]
                assert row[3] == pytest.approx(16 * np.pi**2 * kn**2, rel=1e-8)

    def test_fig2_entropy_closes(self):
        data = harness.run_figure(2, small_spec(2))
        last = data.rows[-1]
        assert abs(last[2] - 2 * np.pi) < 1e-12 and abs(last[3]) < 1e-12

    def test_fig3_ratio_reaches_one(self):
        data = harness.run_figure(3, small_spec(3))
        assert data.rows[-1][3] == pytest.approx(1.0, abs=1e-9)

    def test_fig4_channels_and_bounds(self):
        data = harness.run_figure(4, small_spec(4, channel_tau_points=4))
        series = {r[1].split("|")[0] for r in data.rows}
        assert series == {"CFI_spin", "CFI_homodyne", "CFI_heterodyne", "CFI_photocount"}
        cols = data.columns
        iy, iq, istd = cols.index("y"), cols.index("qfi_sm"), cols.index("y_standard")
        for r in data.rows:
            assert r[istd] <= r[iq] + 1e-6  # standard joint CFI respects the QFI
            assert r[iy] >= -1e-12

    def test_fig6_ghz_beats_css(self):
        data = harness.run_figure(6, small_spec(6))
        ghz = {(r[1], r[2]): r[3] for r in data.rows if r[1].startswith("GHZ")}
        for (series, N), q in ghz.items():
            css = next(r[3] for r in data.rows
                       if r[1] == series.replace("GHZ", "CSS") and r[2] == N)
            assert q >= css - 1e-9

    def test_fig7_matches_sensitivity_oracle(self):
        data = harness.run_figure(7, small_spec(7))
        for r in data.rows:
            assert r[4] == pytest.approx(oracles.sensitivity(r[2], r[3], int(r[6]), r[7]),
                                         rel=1e-12)


class TestAnisotropyMc:
    def test_zero_disorder_collapses_to_oracle(self):
        model = harness.AnisotropyModel(base_k=0.1, delta_k=0.0, N=2, samples=5)
        out = harness.anisotropy_mc(model, np.pi)
        assert out["std"] == 0.0
        assert out["mean"] == pytest.approx(oracles.qfi_ghz(0.1, 2, np.pi), rel=1e-10)

    def test_seed_determinism(self):
        model = harness.AnisotropyModel(base_k=0.1, delta_k=0.3, N=3, samples=30, seed=5)
        a = harness.anisotropy_mc(model, 2 * np.pi)
        b = harness.anisotropy_mc(model, 2 * np.pi)
        np.testing.assert_array_equal(a["values"], b["values"])

    def test_spread_grows_with_disorder(self):
        taus = 2 * np.pi
        outs = [
            harness.anisotropy_mc(
                harness.AnisotropyModel(base_k=0.1, delta_k=dk, N=4, samples=60), taus
            )
            for dk in (0.1, 0.5)
        ]
        assert outs[1]["std"] / outs[1]["mean"] > outs[0]["std"] / outs[0]["mean"]

    def test_rejects_negative_disorder(self):
        with pytest.raises(ValueError):
            harness.AnisotropyModel(base_k=0.1, delta_k=-0.1, N=2)


class TestScalingFit:
    def test_exact_power_law(self):
        pairs = [(n, 3.5 * n**2) for n in (1, 2, 4, 8)]
        fit = harness.scaling_fit(pairs)
        assert fit["exponent"] == pytest.approx(2.0, abs=1e-12)
        assert fit["prefactor"] == pytest.approx(3.5, rel=1e-12)
        assert fit["r2"] == pytest.approx(1.0, abs=1e-12)

    def test_needs_three_points(self):
        with pytest.raises(ValueError):
            harness.scaling_fit([(1, 1.0), (2, 4.0)])

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            harness.scaling_fit([(1, 1.0), (2, 0.0), (3, 9.0)])


class TestEmission:
    def test_csv_roundtrip(self, tmp_path):
        data = harness.run_figure(2, small_spec(2))
        path = tmp_path / "fig2.csv"
        harness.write_csv(data, path)
        back = harness.read_csv(path)
        assert back.figure == 2
        assert back.columns == data.columns
        assert len(back.rows) == len(data.rows)
        for got, want in zip(back.rows, data.rows):
            assert got[3] == pytest.approx(want[3], rel=1e-16, abs=1e-300)

    def test_no_timestamp_is_byte_stable(self, tmp_path):
        data = harness.run_figure(3, small_spec(3))
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        harness.write_csv(data, p1, timestamp=False)
        harness.write_csv(harness.run_figure(3, small_spec(3)), p2, timestamp=False)
        assert p1.read_bytes() == p2.read_bytes()

    def test_timestamp_header_present(self, tmp_path):
        data = harness.run_figure(2, small_spec(2))
        path = tmp_path / "t.csv"
        harness.write_csv(data, path)
        assert any(line.startswith("# created=") for line in path.read_text().splitlines())

    def test_seventeen_digit_precision(self, tmp_path):
        data = harness.FigureData(1, ["figure", "series", "x", "y", "kN"],
                                  [(1, "s", np.pi, 1 / 3, 0.5)])
        path = tmp_path / "p.csv"
        harness.write_csv(data, path, timestamp=False)
        row = path.read_text().splitlines()[-1].split(",")
        assert float(row[2]) == np.pi  # round-trips exactly
        assert float(row[3]) == 1 / 3

    def test_json_mirror(self, tmp_path):
        import json

        data = harness.run_figure(7, small_spec(7))
        path = tmp_path / "fig7.json"
        harness.write_json(data, path)
        payload = json.loads(path.read_text())
        assert payload["figure"] == 7
        assert payload["columns"] == data.columns
        assert len(payload["rows"]) == len(data.rows)
