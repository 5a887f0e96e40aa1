import json
import logging
import math
import os

import numpy as np
import pytest

import run
from modules.cli import EXIT_NUMERICAL, EXIT_SUCCESS, EXIT_VALIDATION, CommandDispatcher, file_digest
from modules.cli import command_registry
from modules.cli.command_registry import get_command
from modules.core.constants import constants
from modules.core.errors import ConfigValidationError, StepSizeError
from modules.utils.config_manager import DEFAULT_CONFIG, OUTPUT_ROOT_ENV, ConfigManager, parse_value
from modules.utils.data_writer import format_value, read_csv, write_csv, write_json


@pytest.fixture
def restore_logging():
    """run.main перевстановлює обробники кореневого логера; повертаємо їх після тесту."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


def _main(tmp_path, *argv):
    return run.main([*argv, "--out", str(tmp_path / "out"), "--log-dir", str(tmp_path / "logs")])


def _manifest(tmp_path, command, *parts):
    with open(os.path.join(tmp_path, "out", command, *parts, "manifest.json"), encoding="utf-8") as f:
        return json.load(f)


def test_default_config_is_valid():
    manager = ConfigManager()
    manager.validate()
    assert manager.get("params.hbar") == 1.0
    assert manager.get("kramers.p_extent") == 6.0
    assert manager.get("missing.key", "fallback") == "fallback"


def test_from_dict_merges_over_defaults():
    manager = ConfigManager.from_dict({"params": {"gamma": 2.0}, "noise": {"bands": 8}})
    assert manager.get("params.gamma") == 2.0
    assert manager.get("params.m") == DEFAULT_CONFIG["params"]["m"]
    assert manager.get("noise.realizations") == DEFAULT_CONFIG["noise"]["realizations"]
    assert DEFAULT_CONFIG["params"]["gamma"] == 1.0


def test_validate_reports_json_path():
    manager = ConfigManager.from_dict({"params": {"m": -1.0}})
    with pytest.raises(ConfigValidationError) as info:
        manager.validate()
    assert info.value.field == "$.params.m"
    assert info.value.exit_code == 1


def test_validate_rejects_unknown_parameter():
    manager = ConfigManager()
    manager.set("params.zeta", 1.0)
    with pytest.raises(ConfigValidationError) as info:
        manager.validate()
    assert info.value.field == "$.params"


def test_apply_overrides_parses_json_values():
    manager = ConfigManager()
    manager.apply_overrides(
        ["params.T=2.5", "smoluchowski.potential={\"kind\": \"free\"}", "units=reduced", "noise.cutoff=null"]
    )
    assert manager.get("params.T") == 2.5
    assert manager.get("smoluchowski.potential") == {"kind": "free"}
    assert manager.get("units") == "reduced"
    assert manager.get("noise.cutoff") is None
    assert parse_value("abc") == "abc"

    with pytest.raises(ConfigValidationError):
        manager.apply_overrides(["params.T"])


def test_config_file_round_trip(tmp_path):
    path = str(tmp_path / "config.json")
    manager = ConfigManager.from_dict({"params": {"tau": 0.01}})
    manager.save_config(path)

    loaded = ConfigManager(config_file=path)
    assert loaded.get("params.tau") == 0.01
    loaded.validate()


def test_missing_or_broken_config_file(tmp_path):
    with pytest.raises(ConfigValidationError):
        ConfigManager(config_file=str(tmp_path / "absent.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigValidationError):
        ConfigManager(config_file=str(broken))


def test_si_units_convert_temperature():
    manager = ConfigManager.from_dict(
        {"units": "SI", "params": {"m": 9.1093837015e-31, "gamma": 1e12, "T": 300.0, "hbar": 1.054571817e-34}}
    )
    params = manager.bath_params()
    assert params.T == pytest.approx(constants().kelvin_to_energy(300.0), rel=1e-12)


def test_output_root_precedence(monkeypatch):
    manager = ConfigManager()
    monkeypatch.delenv(OUTPUT_ROOT_ENV, raising=False)
    assert manager.output_root() == "out"
    monkeypatch.setenv(OUTPUT_ROOT_ENV, "/tmp/qbath-runs")
    assert manager.output_root() == "/tmp/qbath-runs"
    assert manager.output_root("explicit") == "explicit"


def test_build_run_config():
    manager = ConfigManager.from_dict({"time_grid": {"dt": 0.05, "n": 256}, "seed": 7})
    config = manager.build_run_config("noise", "somewhere")
    assert config.time_grid.n == 256
    assert config.seed == 7
    assert config.section["bands"] == 32
    assert config.output_dir == "somewhere"
    assert config.to_dict()["time_grid"]["dt"] == 0.05


def test_run_config_round_trip():
    manager = ConfigManager.from_dict({"params": {"tau": 0.02, "hbar": 0.5}, "space_grid": {"points": 64}})
    config = manager.build_run_config("smoluchowski", "dir")
    rebuilt = ConfigManager.from_dict(config.to_dict()).build_run_config("smoluchowski", "dir")
    assert rebuilt == config


def test_format_value():
    assert format_value(np.float64(0.1)) == "0.1"
    assert format_value(np.int64(3)) == "3"
    assert format_value(True) == "true"
    assert format_value(math.nan) == "nan"
    assert format_value(1e-300) == "1e-300"


def test_csv_metadata_and_rows(tmp_path):
    path = write_csv(
        str(tmp_path / "sub" / "table.csv"), ["a", "b"], [[1, 0.5], [2, np.float64(0.25)]], {"seed": 3, "dt": 0.01}
    )
    metadata, columns, rows = read_csv(path)
    assert metadata == {"seed": "3", "dt": "0.01"}
    assert columns == ["a", "b"]
    assert rows == [["1", "0.5"], ["2", "0.25"]]

    with pytest.raises(ValueError):
        write_csv(str(tmp_path / "bad.csv"), ["a", "b"], [[1]])


def test_json_handles_arrays_and_complex(tmp_path):
    path = write_json(str(tmp_path / "data.json"), {"array": np.arange(3), "root": complex(1.0, -2.0)})
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    assert data == {"array": [0, 1, 2], "root": [1.0, -2.0]}


def test_unknown_command_is_not_registered():
    with pytest.raises(KeyError):
        get_command("unknown")
    assert callable(get_command("kramers"))


def test_dispatcher_maps_errors_to_exit_codes(tmp_path, monkeypatch):
    def too_large_step(config):
        raise StepSizeError("крок завеликий", 0.01)

    def not_converged(config):
        path = write_csv(os.path.join(config.output_dir, "partial.csv"), ["x"], [[1.0]])
        return {"status": "failed", "message": "не зійшлося", "files": [path], "diagnostics": {}, "warnings": []}

    monkeypatch.setitem(command_registry._command_registry, "too_large_step", too_large_step)
    monkeypatch.setitem(command_registry._command_registry, "not_converged", not_converged)
    manager = ConfigManager()
    dispatcher = CommandDispatcher()

    error, code = dispatcher.dispatch(manager.build_run_config("too_large_step", str(tmp_path / "a")))
    assert code == EXIT_NUMERICAL
    assert error["suggested_dt"] == 0.01
    with open(tmp_path / "a" / "manifest.json", encoding="utf-8") as f:
        assert json.load(f)["status"] == "error"

    result, code = dispatcher.dispatch(manager.build_run_config("not_converged", str(tmp_path / "b")))
    assert code == EXIT_NUMERICAL
    with open(tmp_path / "b" / "manifest.json", encoding="utf-8") as f:
        manifest = json.load(f)
    assert manifest["status"] == "failed"
    assert manifest["outputs"] == {"partial.csv": file_digest(str(tmp_path / "b" / "partial.csv"))}

    _, code = dispatcher.dispatch(manager.build_run_config("unregistered", str(tmp_path / "c")))
    assert code == EXIT_VALIDATION


def test_constants_command(tmp_path, restore_logging):
    assert _main(tmp_path, "constants") == EXIT_SUCCESS
    manifest = _manifest(tmp_path, "constants")
    assert manifest["status"] == "success"
    assert manifest["tool"]["name"] == "quantum_bath_brownian"
    assert set(manifest["outputs"]) == {"universal_td.csv", "constants.json"}
    assert manifest["diagnostics"]["max_deviation"] < 1e-10
    assert os.path.exists(tmp_path / "logs" / "qbath.log")


def test_dispersion_command(tmp_path, restore_logging):
    assert _main(tmp_path, "dispersion", "--set", "dispersion.points=7", "--set", "params.tau=0.01") == EXIT_SUCCESS
    _, columns, rows = read_csv(str(tmp_path / "out" / "dispersion" / "dispersion.csv"))
    assert columns[0] == "omega"
    assert len(rows) == 7


def test_invalid_override_exits_with_validation_code(tmp_path, restore_logging):
    assert _main(tmp_path, "constants", "--set", "params.gamma=-2") == EXIT_VALIDATION
    assert _main(tmp_path, "constants", "--sweep", "params.gamma") == EXIT_VALIDATION


def test_cutoff_sweep_writes_one_directory_per_point(tmp_path, restore_logging):
    code = _main(tmp_path, "cutoff", "--set", "cutoff.theta_min=1", "--sweep", "cutoff.points=2:3:2")
    assert code == EXIT_SUCCESS
    for index, points in enumerate((2, 3)):
        manifest = _manifest(tmp_path, "cutoff", f"sweep_{index}")
        assert manifest["config"]["cutoff"]["points"] == points
        _, _, rows = read_csv(str(tmp_path / "out" / "cutoff" / f"sweep_{index}" / "cutoff_sweep.csv"))
        assert len(rows) == points


def test_default_cutoff_sweep_records_ratio_outside_band(tmp_path, restore_logging):
    assert _main(tmp_path, "cutoff") == EXIT_SUCCESS
    manifest = _manifest(tmp_path, "cutoff")
    diagnostics = manifest["diagnostics"]
    assert diagnostics["theta_outside_band"][0] == pytest.approx(0.01)
    assert max(diagnostics["theta_outside_band"]) < 1.0
    assert diagnostics["ratio_range"][1] > 10.0
    assert any("поза [0.5, 2.0]" in warning for warning in manifest["warnings"])

    _, columns, rows = read_csv(str(tmp_path / "out" / "cutoff" / "cutoff_sweep.csv"))
    table = {name: [row[index] for row in rows] for index, name in enumerate(columns)}
    assert table["in_band"][0] == "false"
    theta = np.array([float(value) for value in table["theta"]])
    ratio = np.array([float(value) for value in table["ratio"]])
    assert np.all(np.diff(ratio) < 0.0)
    assert all(flag == "true" for flag, t in zip(table["in_band"], theta) if t >= 1.0)
    assert ratio[0] == pytest.approx(float(table["weak_coupling_ratio"][0]), rel=0.02)


def test_noise_command_matches_force_variance(tmp_path, restore_logging):
    code = _main(
        tmp_path,
        "noise",
        "--set", "params.hbar=0",
        "--set", "time_grid.n=4096",
        "--set", "noise.bands=16",
        "--seed", "11",
    )
    assert code == EXIT_SUCCESS
    manifest = _manifest(tmp_path, "noise")
    assert manifest["seeds"] == [11]
    assert manifest["diagnostics"]["cutoff_source"] == "nyquist"
    assert manifest["diagnostics"]["variance_deviation"] < 0.05


def test_smoluchowski_mode_run(tmp_path, restore_logging):
    code = _main(
        tmp_path,
        "smoluchowski",
        "--set", "space_grid.points=32",
        "--set", "smoluchowski.potential={\"kind\": \"free\"}",
        "--set", "smoluchowski.initial={\"kind\": \"mode\", \"mode\": 1, \"amplitude\": 0.1}",
        "--set", "smoluchowski.t_end=0.5",
    )
    assert code == EXIT_SUCCESS
    manifest = _manifest(tmp_path, "smoluchowski")
    assert manifest["diagnostics"]["mode_rate"] < 0.0
    assert "smoluchowski_summary.csv" in manifest["outputs"]
    assert any(name.startswith("snapshots") for name in manifest["outputs"])


def test_kramers_equilibrium_run(tmp_path, restore_logging):
    code = _main(
        tmp_path,
        "kramers",
        "--set", "space_grid.points=32",
        "--set", "kramers.p_points=32",
        "--set", "kramers.t_end=0.05",
        "--set", "kramers.record_every=1",
    )
    assert code == EXIT_SUCCESS
    manifest = _manifest(tmp_path, "kramers")
    assert manifest["diagnostics"]["stationarity_residual_per_step"] < 1e-8
    assert "continuity_residual" in manifest["diagnostics"]
    assert "kramers_diagnostics.json" in manifest["outputs"]


def test_smoluchowski_equilibrium_run(tmp_path, restore_logging):
    code = _main(tmp_path, "smoluchowski", "--set", "smoluchowski.initial={\"kind\": \"boltzmann\"}")
    assert code == EXIT_SUCCESS
    assert _manifest(tmp_path, "smoluchowski")["diagnostics"]["boltzmann_deviation"] < 1e-6


def _mode_run(tmp_path, *overrides):
    return _main(
        tmp_path,
        "smoluchowski",
        "--set", "space_grid.points=64",
        "--set", "space_grid.length=6.283185307179586",
        "--set", "smoluchowski.potential={\"kind\": \"free\"}",
        "--set", "smoluchowski.initial={\"kind\": \"mode\", \"mode\": 1, \"amplitude\": 0.01}",
        "--set", "smoluchowski.t_end=6",
        "--set", "smoluchowski.quantum_correction=true",
        *overrides,
    )


def test_smoluchowski_quantum_mode_matches_root(tmp_path, restore_logging):
    assert _mode_run(tmp_path) == EXIT_SUCCESS
    diagnostics = _manifest(tmp_path, "smoluchowski")["diagnostics"]
    assert diagnostics["mode_rate_mismatch"] < 0.01
    assert diagnostics["mode_rate"] == pytest.approx(-0.9282, rel=0.01)


def test_smoluchowski_lagged_mode_fails_root_check(tmp_path, restore_logging):
    assert _mode_run(tmp_path, "--set", "smoluchowski.scheme=lagged") == EXIT_NUMERICAL
    manifest = _manifest(tmp_path, "smoluchowski")
    assert manifest["status"] == "failed"
    assert manifest["diagnostics"]["mode_rate_mismatch"] >= 0.01


def test_smoluchowski_equilibrium_gate(tmp_path, restore_logging, monkeypatch):
    from modules.cli import command_handlers

    monkeypatch.setattr(command_handlers, "EQUILIBRIUM_TOLERANCE", 0.0)
    code = _main(tmp_path, "smoluchowski", "--set", "smoluchowski.initial={\"kind\": \"boltzmann\"}")
    assert code == EXIT_NUMERICAL
    assert _manifest(tmp_path, "smoluchowski")["status"] == "failed"
