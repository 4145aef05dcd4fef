import csv
from pathlib import Path

import pytest

from transiplot import FigureSpec, PlotDataError, compute_group_means, render
from transiplot.figures import main, read_rows

DATA = Path(__file__).parent / "data"


class TestGroupMeans:
    def test_fig1_left_hand_computed(self):
        rows = read_rows(DATA / "fig1_left_golden.csv")
        series = compute_group_means(rows, "mu_target",
                                     ("transitivity_global",), "model")
        cm = dict(series["lfr-cm"])
        ba = dict(series["lfr-ba"])
        assert abs(cm[0.05] - (0.1 + 0.2 + 0.4) / 3) < 1e-9
        assert abs(cm[0.1] - 0.5) < 1e-9
        assert abs(ba[0.05] - (0.2 + 0.25) / 2) < 1e-9
        # x values come back ascending
        assert [x for x, _ in series["lfr-cm"]] == [0.05, 0.1]

    def test_fig2_hand_computed(self):
        rows = read_rows(DATA / "fig2_golden.csv")
        series = compute_group_means(
            rows, "tau", ("modularity_louvain", "modularity_infomap"), None)
        louvain = dict(series["modularity_louvain"])
        infomap = dict(series["modularity_infomap"])
        assert abs(louvain[0.0] - (0.45 + 0.44 + 0.46) / 3) < 1e-9
        assert abs(louvain[0.5] - (0.55 + 0.56 + 0.57) / 3) < 1e-9
        assert abs(infomap[0.0] - (0.40 + 0.39 + 0.41) / 3) < 1e-9
        assert abs(infomap[0.5] - (0.50 + 0.51 + 0.52) / 3) < 1e-9

    def test_blank_values_are_skipped(self, tmp_path):
        path = tmp_path / "holes.csv"
        path.write_text("tau,modularity_louvain\n0,0.5\n0,\n1,0.7\n")
        series = compute_group_means(read_rows(path), "tau",
                                     ("modularity_louvain",), None)
        assert dict(series["modularity_louvain"]) == {0.0: 0.5, 1.0: 0.7}

    def test_missing_column_rejected(self):
        rows = read_rows(DATA / "fig2_golden.csv")
        with pytest.raises(PlotDataError):
            compute_group_means(rows, "tau", ("no_such_metric",), None)


class TestRender:
    def test_fig1_left_renders(self, tmp_path):
        out = tmp_path / "fig1_left.png"
        spec = FigureSpec(input_csv=str(DATA / "fig1_left_golden.csv"),
                          x="mu_target", ys=("transitivity_global",),
                          group_by="model", out=str(out))
        assert render(spec) == out
        assert out.stat().st_size > 1000

    def test_fig2_renders(self, tmp_path):
        out = tmp_path / "fig2.pdf"
        spec = FigureSpec(input_csv=str(DATA / "fig2_golden.csv"),
                          x="tau",
                          ys=("modularity_louvain", "modularity_infomap"),
                          group_by=None, out=str(out))
        render(spec)
        assert out.stat().st_size > 0

    def test_single_row_csv_is_fine(self, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text("tau,transitivity_global,model\n0.5,0.12,nm\n")
        out = tmp_path / "one.png"
        render(FigureSpec(input_csv=str(path), x="tau",
                          ys=("transitivity_global",), group_by="model",
                          out=str(out)))
        assert out.exists()

    def test_empty_csv_raises(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("tau,transitivity_global\n")
        with pytest.raises(PlotDataError):
            render(FigureSpec(input_csv=str(path), x="tau",
                              ys=("transitivity_global",), group_by=None,
                              out=str(tmp_path / "never.png")))


class TestCli:
    def test_builtin_figure(self, tmp_path, capsys):
        out = tmp_path / "fig.png"
        code = main([str(DATA / "fig1_left_golden.csv"), "--figure",
                     "fig1-left", "--out", str(out)])
        assert code == 0
        assert out.exists()
        assert "wrote" in capsys.readouterr().out

    def test_custom_columns(self, tmp_path):
        out = tmp_path / "fig.png"
        code = main([str(DATA / "fig2_golden.csv"), "--x", "tau", "--y",
                     "transitivity_global", "--group-by",
                     "mean_degree_target", "--out", str(out)])
        assert code == 0 and out.exists()

    def test_empty_input_fails(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        path.write_text("tau,transitivity_global\n")
        code = main([str(path), "--figure", "fig2", "--out",
                     str(tmp_path / "x.png")])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_missing_args_fail(self, tmp_path, capsys):
        code = main([str(DATA / "fig2_golden.csv"), "--out",
                     str(tmp_path / "x.png")])
        assert code == 2
