import pandas as pd
import pytest

from app.domain.dot_model import DotParams
from app.domain.errors import EmptySweep
from app.services.export import CSV_COLUMNS, emit_csv, emit_plot_script, rows_to_frame, write_plot_script, write_table
from app.services.sweep import SweepRow, SweepService, SweepSpec, SweptParameter

HEADER = "param,concurrence,discord,mutual_information,lhs,berta_bound,adabi_bound,delta"


@pytest.fixture(scope="module")
def rows():
    spec = SweepSpec(
        swept_parameter=SweptParameter.TEMPERATURE,
        start=0.0,
        stop=5.0,
        steps=11,
        fixed=DotParams(k0=10.0, gamma=1.0, b0=1.0, temperature=0.0),
    )
    return SweepService().run_sweep(spec)


def test_csv_header_and_line_count(rows):
    """Tests the exact header and one line per row."""
    text = emit_csv(rows)
    lines = text.split("\n")
    assert lines[0] == HEADER
    assert lines[-1] == ""
    assert len(lines) == len(rows) + 2
    assert all(line.count(",") == 7 for line in lines[:-1])


def test_csv_uses_lf_line_endings(rows):
    """Tests that no carriage returns are emitted."""
    assert "\r" not in emit_csv(rows)


def test_csv_is_byte_identical_across_runs(rows):
    """Tests deterministic output."""
    assert emit_csv(rows) == emit_csv(list(rows))


def test_csv_number_format():
    """Tests 12 significant digits and compact integers."""
    row = SweepRow(
        param=0.5,
        concurrence=1.0,
        discord=0.123456789012345,
        mutual_information=0.0,
        lhs=2.0,
        berta_bound=1e-13,
        adabi_bound=1.5,
        delta=-0.25,
    )
    assert emit_csv([row]).split("\n")[1] == "0.5,1,0.123456789012,0,2,1e-13,1.5,-0.25"


def test_empty_sweep_is_refused():
    """Tests that every emitter refuses an empty row list."""
    with pytest.raises(EmptySweep):
        emit_csv([])
    with pytest.raises(EmptySweep):
        rows_to_frame([])
    with pytest.raises(EmptySweep):
        emit_plot_script([], "out.csv")


def test_plot_script_contents(rows):
    """Tests that the script reads the CSV and draws the five plotted columns."""
    script = emit_plot_script(rows, "fig.csv", xlabel="T", title="fig1_k0_10")
    assert 'set datafile separator ","' in script
    assert 'set output "fig.png"' in script
    assert 'set xlabel "T"' in script
    assert 'set title "fig1_k0_10"' in script
    assert "set xrange [0:5]" in script
    assert '"fig.csv" using 1:2 with lines' in script
    for column in (3, 5, 6, 7):
        assert f'"" using 1:{column} with lines' in script
    assert "using 1:4 " not in script
    assert script.endswith("\n")


def test_write_table_csv(tmp_path, rows):
    """Tests that the written file matches the emitted text and nested folders are created."""
    target = tmp_path / "nested" / "sweep.csv"
    write_table(rows, str(target))
    assert target.read_bytes() == emit_csv(rows).encode("utf-8")


def test_write_table_parquet(tmp_path, rows):
    """Tests the columnar output through pyarrow."""
    target = tmp_path / "sweep.parquet"
    write_table(rows, str(target))
    frame = pd.read_parquet(target)
    assert tuple(frame.columns) == CSV_COLUMNS
    assert len(frame) == len(rows)
    assert frame["concurrence"].iloc[0] == pytest.approx(rows[0].concurrence)


def test_write_plot_script_uses_relative_csv_path(tmp_path, rows):
    """Tests that the script refers to the CSV relative to its own folder."""
    data_dir = tmp_path / "data"
    data_dir.mkdir()
    csv_path = data_dir / "sweep.csv"
    write_table(rows, str(csv_path))
    script_path = tmp_path / "plot.gp"
    write_plot_script(rows, str(csv_path), str(script_path), xlabel="T")
    script = script_path.read_text(encoding="utf-8")
    assert '"data/sweep.csv" using 1:2' in script
    assert 'set output "data/sweep.png"' in script
    assert str(tmp_path) not in script
