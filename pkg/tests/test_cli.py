import csv
import io
import json

import pytest
from click.testing import CliRunner

from pairphase.cli import EXIT_CONFIG, EXIT_OK, EXIT_VALIDATION, main


@pytest.fixture
def runner():
    return CliRunner()


def write(tmp_path, text):
    path = tmp_path / "exp.yaml"
    path.write_text(text)
    return str(path)


GOOD = """
env: {kind: boson, gamma0: 0.01}
state: {kind: werner, p: 0.25}
sweep:
  p: [0.25, 0.5]
outputs: [delta_phi, concurrence]
"""


def test_run_csv_to_stdout(runner, tmp_path):
    res = runner.invoke(main, ["run", write(tmp_path, GOOD)])
    assert res.exit_code == EXIT_OK, res.output
    rows = list(csv.reader(io.StringIO(res.stdout)))
    assert rows[0] == ["p", "delta_phi", "delta_phi_reduced", "concurrence", "status"]
    assert len(rows) == 3 and rows[1][-1] == "ok"
    assert float(rows[1][1]) == pytest.approx(0.963522783940517, rel=1e-9)


def test_run_json_to_file(runner, tmp_path):
    out = tmp_path / "out.json"
    res = runner.invoke(main, ["run", write(tmp_path, GOOD), "--format", "json", "--out", str(out), "--workers", "2"])
    assert res.exit_code == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1 and len(doc["rows"]) == 2


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("env: {kind: boson, gamma0: 0.01}\nstate: {kind: werner}\nextra: 1\n", "extra"),
        ("env: {kind: spin, n_spins: 2, h: 0.0}\nstate: {kind: werner}\n", "env.spin"),
        ("env: {kind: boson\n", "invalid YAML"),
    ],
)
def test_run_config_errors(runner, tmp_path, text, fragment):
    res = runner.invoke(main, ["run", write(tmp_path, text)])
    assert res.exit_code == EXIT_CONFIG
    assert fragment in res.stderr


def test_run_missing_file(runner, tmp_path):
    res = runner.invoke(main, ["run", str(tmp_path / "nope.yaml")])
    assert res.exit_code == EXIT_CONFIG


def test_failed_rows_are_reported(runner, tmp_path):
    text = "env: {kind: boson, gamma0: 0.01}\nstate: {kind: werner}\nsweep: {p: [0.5, 1.5]}\n"
    res = runner.invoke(main, ["run", write(tmp_path, text)])
    assert res.exit_code == EXIT_OK
    assert "1 of 2 rows failed" in res.stderr


def test_presets(runner):
    res = runner.invoke(main, ["presets", "list"])
    assert res.exit_code == EXIT_OK and "fig2" in res.output
    res = runner.invoke(main, ["presets", "run", "fig99"])
    assert res.exit_code == EXIT_CONFIG


def test_validate_filter(runner):
    res = runner.invoke(main, ["validate", "--filter", "mes"])
    assert res.exit_code == EXIT_OK
    assert res.output.startswith("[PASS]")
    res = runner.invoke(main, ["validate", "--filter", "no-such-check"])
    assert res.exit_code == EXIT_CONFIG


def test_validate_reports_failures(runner):
    res = runner.invoke(main, ["validate", "--filter", "spin_series"])
    assert res.exit_code == EXIT_VALIDATION
    assert "[FAIL]" in res.output
