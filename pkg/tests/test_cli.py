import math

import numpy as np
import pytest

from handshake import output
from handshake.cli import main, manifest_to_argv
from handshake.dynamics import analytic_two_atom


def run_cli(tmp_path, *argv):
    return main(["--output-dir", str(tmp_path), *argv])


def test_two_atom_matches_analytic(tmp_path):
    assert run_cli(tmp_path, "two-atom") == 0
    cols = output.read_csv(tmp_path / "two_atom.csv")
    ana = analytic_two_atom(cols["t"], 1.0)
    assert np.max(np.abs(cols["emitter_excited"]
                         - ana["emitter_excited"])) < 1e-6
    manifest = output.read_manifest(tmp_path / "two_atom_manifest.txt")
    assert manifest["command"] == "two-atom"
    assert "tau" in manifest


def test_deterministic_rerun_byte_identical(tmp_path):
    d1 = tmp_path / "r1"
    d2 = tmp_path / "r2"
    for d in (d1, d2):
        d.mkdir()
        assert run_cli(d, "two-atom", "--tau", "2.0") == 0
    assert (d1 / "two_atom.csv").read_bytes() == (d2 / "two_atom.csv").read_bytes()


def test_seeded_monte_carlo_byte_identical(tmp_path):
    d1 = tmp_path / "r1"
    d2 = tmp_path / "r2"
    for d in (d1, d2):
        d.mkdir()
        assert run_cli(d, "split", "--seed", "5", "--duration", "1e-4") == 0
    assert (d1 / "split_histogram.csv").read_bytes() == \
        (d2 / "split_histogram.csv").read_bytes()


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[two-atom]\ntau = 2.0\nt-end = 5\n")
    out1 = tmp_path / "a"
    out1.mkdir()
    assert main(["--output-dir", str(out1), "--config", str(cfg),
                 "two-atom"]) == 0
    m1 = output.read_manifest(out1 / "two_atom_manifest.txt")
    assert m1["tau"] == "2.0"
    assert m1["t_end"] == "5.0"

    out2 = tmp_path / "b"
    out2.mkdir()
    assert main(["--output-dir", str(out2), "--config", str(cfg),
                 "two-atom", "--tau", "1.0"]) == 0
    m2 = output.read_manifest(out2 / "two_atom_manifest.txt")
    assert m2["tau"] == "1.0"      # flag beats config
    assert m2["t_end"] == "5.0"    # config beats default


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[two-atom]\nbogus-knob = 3\n")
    code = main(["--output-dir", str(tmp_path), "--config", str(cfg),
                 "two-atom"])
    assert code == 2
    err = capsys.readouterr().err
    assert "bogus-knob" in err
    assert "tau" in err  # lists the accepted keys


def test_unknown_command_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["--output-dir", str(tmp_path), "warp-drive"])
    assert exc.value.code == 2


def test_unknown_format_rejected(tmp_path, capsys):
    code = run_cli(tmp_path, "two-atom", "--formats", "csv,vhs")
    assert code == 2
    assert "vhs" in capsys.readouterr().err


def test_numeric_failure_exit_code(tmp_path, capsys):
    # far-too-sparse path ensemble: the phasor sum refuses
    code = run_cli(tmp_path, "paths", "--n-paths", "9")
    assert code == 3
    assert "phase step" in capsys.readouterr().err


def test_enhancement_values(tmp_path, capsys):
    assert run_cli(tmp_path, "enhancement", "--r", "1", "--solid-angle",
                   "1") == 0
    out = capsys.readouterr().out
    factor = float(out.split("enhancement_factor = ")[1].splitlines()[0])
    assert factor == pytest.approx(2.1e7, rel=0.10)
    manifest = output.read_manifest(tmp_path / "enhancement_manifest.txt")
    assert float(manifest["transfer_time_with_optics_s"]) == pytest.approx(
        2.0e-9, rel=0.15)


def test_fc_perfect_crossed_polarizers_zero(tmp_path, capsys):
    assert run_cli(tmp_path, "fc", "--eff-major", "1", "--eff-minor", "0",
                   "--phi", "90") == 0
    out = capsys.readouterr().out
    locked = float(out.split("locked_axis = ")[1].splitlines()[0])
    assert locked == 0.0


def test_fc_curve_outputs(tmp_path):
    assert run_cli(tmp_path, "fc", "--phi-points", "19") == 0
    cols = output.read_csv(tmp_path / "fc_curve.csv")
    assert cols["locked_axis"][-1] == 0.0
    assert cols["shared_random_axis"][-1] > 0.1


def test_compete_command(tmp_path):
    assert run_cli(tmp_path, "compete", "--delta-omega", "0.3") == 0
    cols = output.read_csv(tmp_path / "compete.csv")
    assert cols["recipient1_excited"][-1] > 0.95
    assert cols["recipient2_excited"][-1] < 0.05


def test_cascade_command(tmp_path):
    assert run_cli(tmp_path, "cascade") == 0
    m = output.read_manifest(tmp_path / "cascade_manifest.txt")
    assert float(m["upper_envelope_peak_t"]) < float(m["lower_envelope_peak_t"])
    assert float(m["final_ground"]) > 0.999


def test_states_command(tmp_path):
    assert run_cli(tmp_path, "states", "--z-points", "201") == 0
    cols = output.read_csv(tmp_path / "mixed_density.csv")
    assert set(cols) == {"z", "ground_term", "excited_term", "cross_term",
                         "total"}
    m = output.read_manifest(tmp_path / "states_manifest.txt")
    assert float(m["norm_ground"]) == pytest.approx(1.0, abs=1e-8)
    assert float(m["dipole_strength_q_a0"]) == pytest.approx(1.48987, rel=1e-4)


def test_hbt_command(tmp_path):
    assert run_cli(tmp_path, "hbt") == 0
    m = output.read_manifest(tmp_path / "hbt_manifest.txt")
    assert float(m["rate_at_zero"]) == 2.0


def test_constants_command(tmp_path, capsys):
    assert run_cli(tmp_path, "constants") == 0
    body = (tmp_path / "constants.txt").read_text()
    assert "transition_energy_rydberg_eV" in body
    assert "transition_energy_discrepant = True" in body


def test_fieldmap_small_grid(tmp_path):
    assert run_cli(tmp_path, "fieldmap", "--nx", "80", "--ny", "40",
                   "--formats", "csv,binary-grid", "--contours") == 0
    x, y, vals = output.read_grid_binary(tmp_path / "fieldmap_000.grid")
    assert vals.shape == (80, 40)
    cols = output.read_csv(tmp_path / "fieldmap_000.csv")
    assert len(cols["value"]) == 80 * 40
    lines = output.read_polylines_csv(tmp_path / "zero_contours.csv")
    assert len(lines) > 0


def test_streamlines_command(tmp_path):
    assert run_cli(tmp_path, "streamlines", "--n-axis-seeds", "2") == 0
    m = output.read_manifest(tmp_path / "streamlines_manifest.txt")
    assert m["termination_0"] == "absorber_disc"
    assert m["termination_1"] == "absorber_disc"


def test_output_dir_env_override(tmp_path, monkeypatch):
    target = tmp_path / "env_out"
    monkeypatch.setenv("HANDSHAKE_OUTPUT_DIR", str(target))
    assert main(["constants"]) == 0
    assert (target / "constants.txt").exists()


def test_paths_scan_report(tmp_path):
    assert run_cli(tmp_path, "paths", "--scan", "--scan-points", "11",
                   "--n-paths", "4001") == 0
    m = output.read_manifest(tmp_path / "paths_manifest.txt")
    assert float(m["fit_slope"]) == pytest.approx(-1.0, abs=0.05)


def test_manifest_alone_replays_run(tmp_path):
    first = tmp_path / "first"
    first.mkdir()
    assert run_cli(first, "split", "--seed", "21", "--duration", "5e-5",
                   "--p-loss", "0.1") == 0
    manifest = output.read_manifest(first / "split_manifest.txt")
    argv = manifest_to_argv(manifest)
    replay = tmp_path / "replay"
    replay.mkdir()
    assert main(["--output-dir", str(replay), *argv]) == 0
    assert (first / "split_histogram.csv").read_bytes() == \
        (replay / "split_histogram.csv").read_bytes()


def test_experiment_csv_carries_parameter_header(tmp_path):
    assert run_cli(tmp_path, "split", "--seed", "4", "--duration",
                   "5e-5") == 0
    head = output.read_csv_header(tmp_path / "split_histogram.csv")
    assert head["seed"] == "4"
    assert head["duration"] == "5e-05"
    # the parameter block does not break the column reader
    cols = output.read_csv(tmp_path / "split_histogram.csv")
    assert "count" in cols
