import os
import sys

import pytest

VIZ_DIR = os.path.join(os.path.dirname(__file__), "..", "viz")
GOLDEN = os.path.join(os.path.dirname(__file__), "golden")
sys.path.insert(0, os.path.abspath(VIZ_DIR))

import render_figure  # noqa: E402
from manifests import MANIFESTS, SchemaError, load  # noqa: E402


def golden(figure):
    return os.path.join(GOLDEN, f"fig{figure}.csv")


@pytest.mark.parametrize("figure", sorted(MANIFESTS))
def test_renders_golden_csv(figure, tmp_path):
    out = tmp_path / f"fig{figure}.png"
    code = render_figure.main(
        ["--figure", str(figure), "--in", golden(figure), "--out", str(out)]
    )
    assert code == 0
    assert out.stat().st_size > 5000


@pytest.mark.parametrize("figure,ext", [(2, "png"), (2, "svg"), (7, "png"), (7, "svg")])
def test_rerender_is_byte_stable(figure, ext, tmp_path):
    paths = [tmp_path / f"{i}.{ext}" for i in (1, 2)]
    for p in paths:
        render_figure.render(figure, golden(figure), str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_svg_has_no_date(tmp_path):
    out = tmp_path / "fig2.svg"
    render_figure.render(2, golden(2), str(out))
    assert "dc:date" not in out.read_text()


class TestSchemaValidation:
    def test_missing_column_diff(self, tmp_path):
        lines = open(golden(2)).read().splitlines()
        header = [ln for ln in lines if not ln.startswith("#")][0]
        idx = header.split(",").index("kN")
        bad = tmp_path / "bad.csv"
        bad.write_text("\n".join(
            ",".join(v for i, v in enumerate(ln.split(",")) if i != idx)
            if not ln.startswith("#") else ln
            for ln in lines
        ))
        with pytest.raises(SchemaError) as err:
            load(bad, MANIFESTS[2])
        assert "missing columns" in str(err.value) and "kN" in str(err.value)

    def test_unexpected_column_diff(self, tmp_path):
        lines = open(golden(2)).read().splitlines()
        bad = tmp_path / "bad.csv"
        bad.write_text("\n".join(
            ln if ln.startswith("#") else ln + (",extra" if "series" in ln else ",0")
            for ln in lines
        ))
        with pytest.raises(SchemaError) as err:
            load(bad, MANIFESTS[2])
        assert "unexpected columns" in str(err.value) and "extra" in str(err.value)

    def test_empty_rows_rejected(self, tmp_path):
        bad = tmp_path / "empty.csv"
        bad.write_text("figure,series,x,y,kN\n")
        with pytest.raises(SchemaError, match="no data rows"):
            load(bad, MANIFESTS[2])

    def test_empty_series_label_rejected(self, tmp_path):
        bad = tmp_path / "noseries.csv"
        bad.write_text("figure,series,x,y,kN\n2,,0.0,0.0,0.5\n")
        with pytest.raises(SchemaError, match="series"):
            load(bad, MANIFESTS[2])

    def test_wrong_figure_schema(self):
        with pytest.raises(SchemaError):
            load(golden(5), MANIFESTS[2])


class TestCli:
    def test_schema_error_exit_code(self, tmp_path, capsys):
        out = tmp_path / "x.png"
        code = render_figure.main(["--figure", "2", "--in", golden(5), "--out", str(out)])
        assert code == 2
        assert "mismatch" in capsys.readouterr().err

    def test_missing_input_exit_code(self, tmp_path):
        code = render_figure.main(
            ["--figure", "2", "--in", str(tmp_path / "nope.csv"), "--out",
             str(tmp_path / "x.png")]
        )
        assert code == 2

    def test_bad_extension_exit_code(self, tmp_path):
        code = render_figure.main(
            ["--figure", "2", "--in", golden(2), "--out", str(tmp_path / "x.pdf")]
        )
        assert code == 2

    def test_bad_figure_id(self, tmp_path):
        code = render_figure.main(
            ["--figure", "9", "--in", golden(2), "--out", str(tmp_path / "x.png")]
        )
        assert code == 2
