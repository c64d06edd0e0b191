from pathlib import Path

import pytest

from longfair_plots.cli import main
from longfair_plots.render import MissingColumnError, PlotSpec, render

SAMPLE = str(Path(__file__).parent / "data" / "aggregate_sample.csv")


def _svg(tmp_path, kind, delta=None):
    out = tmp_path / f"{kind}.svg"
    render(PlotSpec(input_csv=SAMPLE, figure_kind=kind,
                    output_image=str(out), delta_line=delta))
    assert out.exists() and out.stat().st_size > 0
    return out.read_text()


class TestFigureKinds:
    def test_failure_rate_series_and_reference_line(self, tmp_path):
        svg = _svg(tmp_path, "failure_rate", delta=0.1)
        # two panels (one per constraint), one series per alpha
        for constraint in ("g0", "g1"):
            for alpha in ("0", "0.5", "0.9"):
                assert f'id="series-{constraint}-alpha-{alpha}"' in svg
        assert svg.count('id="delta-reference"') == 2

    def test_solution_rate_series_count(self, tmp_path):
        svg = _svg(tmp_path, "solution_rate")
        assert svg.count('id="series-solution-alpha-') == 3
        assert 'id="delta-reference"' not in svg

    def test_accuracy_gaps_do_not_crash(self, tmp_path):
        # alpha=0 has an empty accuracy cell at n=1024: series renders
        # from the remaining points
        svg = _svg(tmp_path, "accuracy")
        assert svg.count('id="series-accuracy-alpha-') == 3

    def test_rerender_identical_series_structure(self, tmp_path):
        a = _svg(tmp_path, "solution_rate")
        b = _svg(tmp_path, "solution_rate")
        keep = [ln for ln in a.splitlines() if "series-" in ln]
        keep_b = [ln for ln in b.splitlines() if "series-" in ln]
        assert keep == keep_b


class TestCli:
    def test_cli_renders(self, tmp_path, capsys):
        out = tmp_path / "fig.svg"
        code = main(["--csv", SAMPLE, "--kind", "failure_rate",
                     "--out", str(out), "--delta", "0.1"])
        assert code == 0
        assert out.exists()
        assert capsys.readouterr().out.strip() == str(out)

    def test_missing_column_named_in_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("alpha,n,solution_rate\n0.9,1024,0.5\n")
        code = main(["--csv", str(bad), "--kind", "solution_rate",
                     "--out", str(tmp_path / "x.svg")])
        assert code == 1
        assert "se_sol" in capsys.readouterr().err

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["--csv", SAMPLE, "--kind", "bogus",
                  "--out", str(tmp_path / "x.svg")])

    def test_missing_column_exception_type(self, tmp_path):
        partial = tmp_path / "partial.csv"
        partial.write_text("alpha,n,mean_acc\n0.9,1024,0.8\n")
        with pytest.raises(MissingColumnError) as exc:
            render(PlotSpec(input_csv=str(partial), figure_kind="accuracy",
                            output_image=str(tmp_path / "x.svg")))
        assert exc.value.column == "se_acc"
