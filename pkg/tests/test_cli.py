from tunneltime.cli import main
from tunneltime.experiments import read_rows


def test_single_success_and_output(tmp_path, capsys):
    out = tmp_path / "row.csv"
    code = main(
        ["single", "--lambda", "30", "--w-ratio", "1.0", "--out", str(out)]
    )
    assert code == 0
    rows = read_rows(out)
    assert len(rows) == 1 and rows[0].lam == 30.0
    assert "wrote 1 rows" in capsys.readouterr().out


def test_trace_flag_writes_companion_file(tmp_path):
    out = tmp_path / "row.csv"
    code = main(["single", "--lambda", "30", "--out", str(out), "--trace"])
    assert code == 0
    trace = tmp_path / "row_trace.csv"
    assert trace.exists()
    assert trace.read_text().startswith("tau[hbar/E_M],density[arb]")


def test_plot_script_emission(tmp_path):
    out = tmp_path / "fig2.csv"
    code = main(
        ["fig2", "--w-ratio", "1.0,1.5", "--out", str(out), "--plot-script"]
    )
    assert code == 0
    script = tmp_path / "fig2.csv.gnuplot"
    assert script.exists()
    assert "plot" in script.read_text()


def test_invalid_config_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no_such_key = 1\n")
    assert main(["table1", "--config", str(cfg)]) == 1
    assert "invalid config" in capsys.readouterr().err


def test_bad_flag_exit_code(capsys):
    assert main(["table1", "--definitely-not-a-flag"]) == 1


def test_unknown_subcommand_exit_code():
    assert main(["table9"]) == 1


def test_numerical_failure_exit_code(tmp_path):
    cfg = tmp_path / "tiny.cfg"
    cfg.write_text("max_panels = 4\nlambda = 30\n")
    out = tmp_path / "fail.csv"
    assert main(["single", "--config", str(cfg), "--out", str(out)]) == 2
    rows = read_rows(out)
    assert rows[0].note.startswith("failed:")


def test_partial_failure_exit_code(tmp_path):
    # window [15, 25] brackets the lam = 100 peak (21.4) but not lam = 30 (6.4)
    cfg = tmp_path / "window.cfg"
    cfg.write_text("tau_min = 15\ntau_max = 25\nlambda = 30, 100\ncoarse_points = 32\nworkers = 1\n")
    out = tmp_path / "partial.csv"
    assert main(["table1", "--config", str(cfg), "--out", str(out)]) == 3
    rows = read_rows(out)
    notes = [r.note for r in rows]
    assert any(n.startswith("window_hit") for n in notes)
    assert any(n == "" or n.startswith("tau_spm") for n in notes)


def test_default_output_name(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["single", "--lambda", "30"]) == 0
    assert (tmp_path / "single.csv").exists()
