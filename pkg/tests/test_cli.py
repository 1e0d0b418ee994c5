import csv
import io
import json
import subprocess
import sys
from dataclasses import replace

import numpy as np
import pytest

from wqed.cli import main
from wqed.config import SweepConfig, config_from_dict, preset
from wqed.errors import DegenerateFit, ValidationError
from wqed.config import GapFitConfig
from wqed.model import CouplingConfig
from wqed.parallel import ordered_map, worker_count
from wqed.sweep import render, run_bands, run_gapfit, run_spectrum


def test_fig2a_oc_spectrum_rows():
    cfg = replace(preset("fig2a-oc"), sweep=SweepConfig(0.5, 1.5, 11))
    rows = {round(r.omega, 12): r for r in run_spectrum(cfg)}
    assert rows[1.0].T == 1.0 and rows[1.0].R == 0.0
    assert rows[0.9].T == pytest.approx(0.04, abs=1e-12)
    assert rows[1.1].T == pytest.approx(0.04, abs=1e-12)


def test_chain_preset_lossless_is_transparent_at_resonance():
    cfg = preset("fig3-N10").lossless()
    rows = run_spectrum(replace(cfg, sweep=SweepConfig(0.5, 1.5, 2001)))
    T = np.array([r.T for r in rows])
    w = np.array([r.omega for r in rows])
    assert abs(T[np.argmin(np.abs(w - 1.0))] - 1) < 1e-10
    assert T.min() < 0.1  # oscillatory, band-like


def test_zero_width_sweep_rejected():
    doc = {"emitter": {"omega2": 1.0}, "coupling": {"gamma_L": 0.4, "gamma_R": 0.4},
           "sweep": {"omega_min": 1.0, "omega_max": 1.0, "n_points": 2}}
    with pytest.raises(ValidationError):
        run_spectrum(config_from_dict(doc))


def test_bands_report():
    cfg = preset("fig4")
    report = run_bands(cfg)
    ratio = report.gaps_above[0.045]["width_ratio"]
    assert 0.35 < ratio < 0.65
    empty = run_bands(replace(cfg, coupling=CouplingConfig(0.0, 0.0)))
    assert all(not row["forbidden"] for row in empty.rows)


def test_single_j_gapfit_degenerate():
    with pytest.raises(DegenerateFit):
        run_gapfit(replace(preset("fig4-inset"), gapfit=GapFitConfig(2.5, 2.5, 1)))


def test_csv_and_json_carry_same_values():
    cfg = replace(preset("fig2c"), sweep=SweepConfig(0.05, 1.5, 51, True))
    rows = run_spectrum(cfg)
    parsed = list(csv.DictReader(io.StringIO(render("spectrum", cfg, rows, "csv"))))
    payload = json.loads(render("spectrum", cfg, rows, "json"))
    assert payload["columns"] == ["omega", "T", "R", "dT_domega"]
    for a, b, r in zip(parsed, payload["rows"], rows):
        for col in payload["columns"]:
            assert float(a[col]) == b[col] == getattr(r, col)


def test_parallel_helpers(monkeypatch):
    monkeypatch.setenv("WQED_THREADS", "3")
    assert worker_count() == 3
    assert ordered_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]
    monkeypatch.setenv("WQED_THREADS", "1")
    assert worker_count() == 1


def test_cli_spectrum_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--preset", "fig2a-oc", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "omega,T,R" and len(lines) == 2002


def test_cli_plot_written(tmp_path):
    png = tmp_path / "c.png"
    assert main(["chain", "--preset", "fig3-N2", "--out", str(tmp_path / "c.csv"), "--plot", str(png)]) == 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["spectrum", "--config", str(bad)]) == 2
    assert main(["spectrum", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["chain", "--preset", "fig2a-oc"]) == 2
    assert main(["spectrum", "--preset", "fig2a-oc", "--out", str(tmp_path / "no" / "dir.csv")]) == 4
    bad.write_text(json.dumps({"emitter": {"omega2": 1.0}, "coupling": {"gamma_L": 0.0, "gamma_R": 0.0},
                               "sweep": {"omega_min": 0.5, "omega_max": 1.5, "n_points": 3}}))
    assert main(["spectrum", "--config", str(bad)]) == 3
    err = capsys.readouterr().err
    assert "omega" in err


def test_cli_phase_mode_and_lossless(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["chain", "--preset", "fig3-N5", "--out", str(a)])
    main(["chain", "--preset", "fig3-N5", "--lossless", "--phase-mode", "resonant", "--out", str(b)])
    assert a.read_bytes() != b.read_bytes()


def test_cli_presets_listing(capsys):
    assert main(["presets"]) == 0
    assert "fig4-inset" in capsys.readouterr().out
    assert main(["presets", "fig2a-oc"]) == 0
    assert json.loads(capsys.readouterr().out)["coupling"]["gamma_L"] == pytest.approx(0.4)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wqed", "presets"], capture_output=True, text=True)
    assert proc.returncode == 0 and "fig2a-oc" in proc.stdout
