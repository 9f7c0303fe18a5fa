"""Tests for the figure regeneration tool (CSV -> image)."""

import pytest

matplotlib = pytest.importorskip("matplotlib")
matplotlib.use("Agg")

from heraldg2 import figgen
from heraldg2.cli import run


@pytest.fixture(scope="module")
def csvs(tmp_path_factory):
    """Small but real CSVs produced through the CLI."""
    d = tmp_path_factory.mktemp("csvs")
    paths = {}
    for basis in ("dd", "ad"):
        p = d / f"rcd_{basis}.csv"
        run(["rcd", "--alpha", "0.1", "--basis", basis, "--pmax", "4",
             "--tau", "-200:200:100", "--out", str(p)])
        paths[f"rcd_{basis}"] = str(p)
        p = d / f"g2_{basis}.csv"
        run(["g2", "--alpha", "0.1", "--basis", basis, "--pmax", "4",
             "--tau", "-200:200:100", "--out", str(p)])
        paths[f"g2_{basis}"] = str(p)
    p = d / "con.csv"
    run(["converge", "--alpha", "0.1", "--basis", "dd", "--pmax", "5",
         "--tau-fixed", "0", "--out", str(p)])
    paths["con"] = str(p)
    p = d / "map.csv"
    run(["map", "--alpha", "0.1", "--basis", "dd", "--pmax", "4",
         "--tau", "-100:100:100", "--tauc", "-100:100:100", "--out", str(p)])
    paths["map"] = str(p)
    return paths


class TestClassify:
    def test_kinds(self, csvs):
        for key, kind in [("rcd_dd", "rcd"), ("g2_dd", "g2"),
                          ("con", "converge"), ("map", "g2")]:
            rows = figgen.read_rows(csvs[key])
            assert figgen.classify(csvs[key], rows) == kind

    def test_empty_file_rejected(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(figgen.FigureInputError, match="empty"):
            figgen.read_rows(str(p))

    def test_header_only_rejected(self, tmp_path):
        p = tmp_path / "h.csv"
        p.write_text("tau_ns,alpha,basis,rcd,status\n")
        with pytest.raises(figgen.FigureInputError, match="no data"):
            figgen.read_rows(str(p))

    def test_missing_column_named(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("tau_ns,alpha,basis,status\n0,0.1,dd,ok\n")
        with pytest.raises(figgen.FigureInputError, match="rcd"):
            figgen.classify(str(p), figgen.read_rows(str(p)))


class TestRender:
    def test_fig2(self, csvs, tmp_path):
        out = tmp_path / "fig2.png"
        figgen.render("fig2", [csvs["rcd_dd"], csvs["rcd_ad"],
                               csvs["g2_dd"], csvs["g2_ad"]], str(out))
        assert out.stat().st_size > 0

    def test_fig3(self, csvs, tmp_path):
        out = tmp_path / "fig3.png"
        figgen.render("fig3", [csvs["con"]], str(out))
        assert out.stat().st_size > 0

    def test_fig4(self, csvs, tmp_path):
        out = tmp_path / "fig4.png"
        figgen.render("fig4", [csvs["map"]], str(out))
        assert out.stat().st_size > 0

    def test_fig2_requires_both_kinds(self, csvs, tmp_path):
        with pytest.raises(figgen.FigureInputError):
            figgen.render("fig2", [csvs["rcd_dd"]], str(tmp_path / "x.png"))

    def test_error_does_not_write_output(self, csvs, tmp_path):
        out = tmp_path / "x.png"
        with pytest.raises(figgen.FigureInputError):
            figgen.render("fig3", [csvs["rcd_dd"]], str(out))
        assert not out.exists()

    def test_unknown_figure(self, csvs, tmp_path):
        with pytest.raises(figgen.FigureInputError):
            figgen.render("fig9", [csvs["con"]], str(tmp_path / "x.png"))
