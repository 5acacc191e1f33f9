import math
import pathlib
import subprocess
import sys

import numpy as np
import pytest

from modssd_figs import FigureRecipe, SchemaError, render

DATA = pathlib.Path(__file__).parent / "data"


@pytest.mark.parametrize("figure", ["fig2", "fig3", "fig4"])
def test_renders_golden_csvs(figure, tmp_path):
    out = tmp_path / f"{figure}.png"
    fig = render(FigureRecipe(figure, str(DATA / f"{figure}.csv"), str(out)))
    assert out.exists() and out.stat().st_size > 0
    assert fig is not None


def test_fig4_plus_curves_above_zero_curves(tmp_path):
    out = tmp_path / "fig4.png"
    fig = render(FigureRecipe("fig4", str(DATA / "fig4.csv"), str(out)))
    by_key = {}
    for line in fig.axes[0].get_lines():
        label = line.get_label()
        if not label.startswith("|"):
            continue
        state, _, rest = label.partition(", input ")
        by_key.setdefault(rest, {})[state] = np.asarray(line.get_ydata())
    assert by_key, "no labeled curves found"
    for rest, curves in by_key.items():
        assert set(curves) == {"|+>", "|0>"}
        assert np.all(curves["|+>"] > curves["|0>"]), rest


def test_rerender_is_byte_identical(tmp_path):
    a = tmp_path / "a.png"
    b = tmp_path / "b.png"
    render(FigureRecipe("fig2", str(DATA / "fig2.csv"), str(a)))
    render(FigureRecipe("fig2", str(DATA / "fig2.csv"), str(b)))
    assert a.read_bytes() == b.read_bytes()


def test_empty_csv_is_schema_error(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("db,bloch_x,bloch_z,fidelity_plus,fidelity_zero\n")
    out = tmp_path / "out.png"
    with pytest.raises(SchemaError):
        render(FigureRecipe("fig2", str(empty), str(out)))
    assert not out.exists()


def test_missing_column_named_in_error(tmp_path):
    broken = tmp_path / "broken.csv"
    broken.write_text("db,bloch_x\n0,0.5\n")
    with pytest.raises(SchemaError, match="bloch_z"):
        render(FigureRecipe("fig2", str(broken), str(tmp_path / "x.png")))


def test_unknown_figure_id():
    with pytest.raises(SchemaError):
        FigureRecipe("fig9", "whatever.csv", "out.png")


def test_cli_entry_point(tmp_path):
    out = tmp_path / "fig3.png"
    proc = subprocess.run(
        [sys.executable, "-m", "modssd_figs.render", "fig3",
         str(DATA / "fig3.csv"), str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert out.exists()


def test_cli_usage_error():
    proc = subprocess.run(
        [sys.executable, "-m", "modssd_figs.render", "fig2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
