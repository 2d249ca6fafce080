"""Command-line runs: exit codes, report shape, determinism."""

import json
import subprocess
import sys

import pytest

from complexaj.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, run


def report(tmp_path, *argv):
    out = tmp_path / "r.json"
    code = run([*argv, "--json", str(out), "--quiet"])
    return code, json.loads(out.read_text())


def test_selftest_dilog(tmp_path):
    code, rep = report(tmp_path, "selftest-dilog", "--N", "1", "--theta", "0.5236")
    assert code == EXIT_OK and rep["passed"]
    assert rep["result"]["max_residual"] < 1e-9
    assert rep["schema_version"] == 1
    assert rep["inputs"]["N"] == 1


def test_defaults_recorded(tmp_path):
    _, rep = report(tmp_path, "selftest-dilog", "--points", "5")
    assert rep["inputs"]["theta"] == pytest.approx(0.5235987755982988)


@pytest.mark.parametrize("knot", ["41", "52"])
def test_verify_cert(tmp_path, knot):
    code, rep = report(tmp_path, "verify-cert", "--knot", knot)
    assert code == EXIT_OK
    assert rep["result"]["valid"] or rep["result"]["fallback"]["source"] == "discovery"


def test_classical_forms(tmp_path):
    code, rep = report(tmp_path, "check-classical", "--knot", "52")
    assert code == EXIT_FAILED and not rep["result"]["match"]
    code, rep = report(tmp_path, "check-classical", "--knot", "52", "--form", "aj")
    assert code == EXIT_OK and rep["result"]["match_aj"]


def test_make_ahatc_and_eliminate(tmp_path):
    code, rep = report(tmp_path, "make-ahatc", "--knot", "41")
    assert code == EXIT_OK and "mx" in rep["result"]["ahat_c"]
    code, rep = report(tmp_path, "eliminate", "--knot", "41")
    assert code == EXIT_OK and rep["result"]["eliminants"][0]["unit_equal_to_transcribed"]


def test_bad_theta_is_config_error(tmp_path):
    code, rep = report(tmp_path, "selftest-dilog", "--theta", "2.0")
    assert code == EXIT_CONFIG and "theta" in rep["error"]


def test_even_level_is_config_error(tmp_path):
    assert report(tmp_path, "selftest-dilog", "--N", "2")[0] == EXIT_CONFIG


def test_unknown_command():
    with pytest.raises(SystemExit) as e:
        run(["frobnicate"])
    assert e.value.code == 2


def test_annihilate_integrand(tmp_path):
    code, rep = report(tmp_path, "annihilate-integrand", "--knot", "52", "--count", "5")
    assert code == EXIT_OK and rep["result"]["max_residual"] < 1e-8


def test_sample_chi_csv(tmp_path):
    csv_path = tmp_path / "chi.csv"
    code, _ = report(tmp_path, "sample-chi", "--knot", "41", "--count", "3", "--csv", str(csv_path))
    lines = csv_path.read_text().splitlines()
    assert code == EXIT_OK and lines[0] == "x,re,im,error,tail" and len(lines) == 4


def test_wgz_report_alias(tmp_path):
    out = tmp_path / "w.json"
    assert run(["wgz-check", "--report", str(out), "--quiet"]) == EXIT_OK
    assert json.loads(out.read_text())["passed"]


def test_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(["annihilate-integrand", "--knot", "41", "--count", "4", "--seed", "7", "--json", str(p), "--quiet"])
    assert a.read_bytes() == b.read_bytes()


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "complexaj.cli", "verify-cert", "--knot", "41", "--quiet"])
    assert r.returncode == 0
