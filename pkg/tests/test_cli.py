import json
from fractions import Fraction as F

import pytest

from heunladder import cli
from heunladder import heun_ladder as hl
from heunladder.poly_core import ExactPoly


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hp_example(capsys):
    code, out, _ = run(capsys, "hp", "--s", "1", "--t", "1", "--kappa", "1/2")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == "heun-ladder/1"
    assert doc["coefficients"] == ["1/2", "1/1"]
    assert doc["residual_ok"] is True and doc["zero_count"] == 0


def test_hp_factorized(capsys):
    code, out, _ = run(capsys, "hp", "--s", "2", "--t", "1", "--kappa", "3")
    assert code == 0
    assert json.loads(out)["coefficients"] == ["1/1", "3/1", "3/1", "1/1"]


@pytest.mark.parametrize("argv", [
    ("hp", "--s", "0", "--t", "1", "--kappa", "1"),
    ("hp", "--s", "1", "--t", "1", "--kappa", "0.5"),
    ("hp", "--s", "1", "--t", "-1", "--kappa", "1"),
    ("partner", "--s", "2", "--t", "3"),
    ("partner", "--s", "2", "--t", "3", "--kappa1", "2"),
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_heine_s1_unsupported(capsys):
    code, _, err = run(capsys, "heine", "--s", "1", "--t", "2", "--kappa", "1/2", "--kappa1", "3")
    assert code == 1
    assert "s >= 2" in err and "Restrictions" in err


def test_heine_output(capsys):
    code, out, _ = run(capsys, "heine", "--s", "2", "--t", "1", "--kappa", "1/2", "--kappa1", "3")
    doc = json.loads(out)
    assert doc["divisible_by_y"] is True
    assert doc["contract_degree"] == 6
    assert code == (0 if doc["contract_met"] else 2)


def test_potential_csv(capsys):
    code, out, _ = run(capsys, "potential", "--s", "2", "--t", "3", "--format", "csv", "--y", "1/2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "r,V"
    r, V = map(float, lines[1].split(","))
    assert abs(V + 9) < 1e-12


def test_potential_json_exact(capsys):
    code, out, _ = run(capsys, "potential", "--s", "2", "--t", "3", "--y", "1/2")
    row = json.loads(out)["rows"][0]
    assert row["V_exact"] == "-9/1" and "tol" in row


def test_potential_partner_columns(capsys):
    code, out, _ = run(capsys, "potential", "--s", "2", "--t", "3", "--kappa1", "3",
                       "--format", "csv", "--points", "5")
    lines = out.splitlines()
    assert lines[0] == "r,V,V1" and len(lines) == 6


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--s", "2", "--t", "3", "--N", "3000")
    doc = json.loads(out)
    assert code == 0
    assert doc["reference"] == ["-4/1"]
    assert doc["within_tol"] and doc["tol"] == 1e-3
    assert abs(doc["best"][0] + 4) < 1e-3


def test_partner_b(capsys):
    code, out, _ = run(capsys, "partner", "--s", "2", "--t", "3", "--kappa1", "3")
    doc = json.loads(out)
    assert code == 0
    (lv,) = doc["levels"]
    assert lv["energy"] == "-4/1" and lv["residual_ok"] and lv["residual_tol"] == 1e-8


def test_partner_a(capsys):
    code, out, _ = run(capsys, "partner", "--s", "2", "--t", "3", "--type", "a", "--m", "1", "--kappa", "5/2")
    doc = json.loads(out)
    assert code == 0 and all(doc["checks"].values())
    assert doc["scale"] == "-9/1"


def test_deterministic(capsys):
    argv = ("partner", "--s", "2", "--t", "5", "--kappa1", "9/2")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_output_file(tmp_path, capsys):
    path = tmp_path / "hp.json"
    code, out, _ = run(capsys, "hp", "--s", "2", "--t", "2", "--kappa", "3/4", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["n"] == 4


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "poly_core")
    doc = json.loads(out)
    assert code == 0
    assert all(g["status"] == "pass" for g in doc["suites"]["poly_core"])


def test_acceptance_subset_json(capsys):
    code, out, err = run(capsys, "acceptance", "--only", "7", "10")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] == 2 and doc["failed"] == 0
    assert "seconds" not in doc["criteria"][0]
    assert err.count("[PASS]") == 2


def _mutated_ladder_a(hp):
    # a = -(2n-2s+3)^-1 [y(1-y^2) d/dy - (n-2s+3) y^2 - kappa y + 1 - 2s] with one constant bumped
    s, n, k, H = hp.s, hp.n, hp.kappa, hp.poly
    Y1 = ExactPoly([0, 1]) * ExactPoly([1, 0, -1])
    op = Y1 * H.derivative() + ExactPoly([1 - 2 * s, -k, -(n - 2 * s + 4)]) * H
    return hl._hp(s + 1, hp.t, k, op * F(-1, 2 * n - 2 * s + 3), "ladder_a")


def test_mutation_is_detected(monkeypatch, capsys):
    hl._construct.cache_clear()
    monkeypatch.setattr(hl, "ladder_a", _mutated_ladder_a)
    try:
        code, out, _ = run(capsys, "acceptance", "--only", "3")
    finally:
        monkeypatch.undo()
        hl._construct.cache_clear()
    doc = json.loads(out)
    assert code == 2
    assert any("ladder_a" in a for a in doc["failing_anchors"])


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("HEUN_LADDER_THREADS", "3")
    code, out, _ = run(capsys, "acceptance", "--only", "7", "10", "15")
    assert code == 0
    assert [c["id"] for c in json.loads(out)["criteria"]] == [7, 10, 15]
