import csv
import io
import json
import math

import numpy as np
import pytest

from logspike import BracketError, __version__, cli
from oracles import GALERKIN_1600


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_perturb_default_table(capsys):
    code, out, _ = run(capsys, "perturb")
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 10
    assert list(rows[0]) == ["n", "parity", "E0", "E1_closed", "E1_quadrature",
                             "abs_difference"]
    assert float(rows[0]["E1_closed"]) == pytest.approx(3.178979744, abs=1e-9)
    assert [r["parity"] for r in rows[:3]] == ["even", "odd", "even"]
    assert all(float(r["abs_difference"]) <= 1e-8 for r in rows)


def test_perturb_single_row(capsys):
    code, out, _ = run(capsys, "perturb", "--n-max", "0")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 1 and rows[0]["n"] == "0"


def test_crossings_default(capsys):
    code, out, _ = run(capsys, "crossings")
    assert code == 0
    rows = csv_rows(out)
    got = {(int(r["m"]), int(r["n"])): r for r in rows}
    assert float(got[0, 1]["g_cross"]) == pytest.approx(4.540138798, abs=1e-6)
    assert float(got[0, 2]["g_cross"]) == pytest.approx(23.96744320, abs=1e-6)
    assert float(got[2, 3]["g_cross"]) == pytest.approx(29.13203044, abs=1e-6)
    assert got[0, 2]["spurious"] == "true" and got[0, 1]["spurious"] == "false"


def test_crossings_no_crossing_blank(capsys):
    code, out, _ = run(capsys, "crossings", "--pair", "1,2")
    row = csv_rows(out)[0]
    assert code == 0 and row["g_cross"] == "" and row["spurious"] == ""


@pytest.mark.parametrize("argv", [
    ["crossings", "--pair", "2,1"],
    ["crossings", "--pair", "x"],
    ["perturb", "--n-max", "51"],
    ["spectrum", "--g", "-1"],
    ["spectrum", "--format", "xml"],
    ["nonsense"],
    [],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
    capsys.readouterr()


def test_spectrum_g0_exact(capsys):
    code, out, _ = run(capsys, "spectrum", "--g", "0")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 5
    for n, r in enumerate(rows):
        exact = ((n + 1) * math.pi / 2) ** 2
        assert float(r["E_numeric"]) == pytest.approx(exact, rel=1e-9)
        assert r["status"] == "ok"
        assert abs(float(r["residual"])) < 1e-6


def test_spectrum_against_oracle(capsys):
    code, out, _ = run(capsys, "spectrum", "--g", "0.5", "--format", "json")
    data = json.loads(out)
    assert code == 0
    got = [r["E_numeric"] for r in data["rows"]]
    np.testing.assert_allclose(got, GALERKIN_1600[0.5], atol=1e-6)
    assert data["meta"]["command"] == "spectrum"
    assert data["meta"]["version"] == __version__
    assert data["meta"]["parameters"]["g"] == 0.5


def test_spectrum_bracket_failure(capsys, monkeypatch):
    real = cli.eigenvalue

    def flaky(n, params, e_tol):
        if n == 2:
            raise BracketError("no sign change", n=2)
        return real(n, params, e_tol)

    monkeypatch.setattr(cli, "eigenvalue", flaky)
    code, out, err = run(capsys, "spectrum", "--g", "1")
    rows = csv_rows(out)
    assert code == 1
    assert "no sign change" in err
    assert [r["status"] for r in rows] == ["ok", "ok", "bracket-failure"]
    assert rows[2]["E_numeric"] == ""


def test_compute_error_exit_one(capsys):
    code, out, err = run(capsys, "approx", "--g", "0")
    assert code == 1 and out == "" and "g > 0" in err
    code, _, _ = run(capsys, "wavefunction", "--points", "1")
    assert code == 1


def test_wavefunction_g10_ground(capsys):
    code, out, _ = run(capsys, "wavefunction", "--g", "10", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["rows"]) == 401
    psi = np.array([r["psi"] for r in data["rows"]])
    assert np.all(psi[1:-1] > 0)
    np.testing.assert_allclose(psi, psi[::-1], atol=1e-9)
    assert data["meta"]["energy"] == data["rows"][0]["energy"]


def test_wavefunction_g10_second_excited_nodes(capsys):
    code, out, _ = run(capsys, "wavefunction", "--g", "10", "--level", "2")
    psi = np.array([float(r["psi"]) for r in csv_rows(out)])
    inner = psi[1:-1]
    assert code == 0
    assert int(np.sum(np.sign(inner[1:]) != np.sign(inner[:-1]))) == 2


def test_wavefunction_g0_odd(capsys):
    code, out, _ = run(capsys, "wavefunction", "--g", "0", "--level", "1")
    rows = csv_rows(out)
    x = np.array([float(r["x"]) for r in rows])
    psi = np.array([float(r["psi"]) for r in rows])
    ref = np.sin(math.pi * x)
    sign = np.sign(psi @ ref)
    np.testing.assert_allclose(sign * psi, ref, atol=1e-7)


def test_wavefunction_l2(capsys):
    _, out, _ = run(capsys, "wavefunction", "--normalization", "l2",
                    "--points", "801", "--format", "json")
    rows = json.loads(out)["rows"]
    x = np.array([r["x"] for r in rows])
    psi = np.array([r["psi"] for r in rows])
    from scipy.integrate import simpson
    assert simpson(psi ** 2, x=x) == pytest.approx(1.0, abs=1e-9)


def test_approx_energy_table(capsys):
    code, out, _ = run(capsys, "approx", "--g", "1", "--n-max", "2")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 3
    assert float(rows[0]["E_rect"]) == pytest.approx(3.9412, abs=1e-3)
    d = float(rows[0]["d_rect"])
    assert d == pytest.approx(math.exp(-float(rows[0]["E_rect"]) / 2), rel=1e-10)


def test_approx_grid(capsys):
    code, out, _ = run(capsys, "approx", "--g", "1", "--level", "0",
                       "--points", "51", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["rows"]) == 51
    assert set(data["rows"][0]) == {"x", "psi_numeric", "psi_rect", "psi_wkb"}
    assert data["meta"]["d"] == pytest.approx(
        math.exp(-data["meta"]["energy"] / 2), rel=1e-10)


def test_transform_study_default(capsys):
    code, out, _ = run(capsys, "transform-study")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 8
    assert float(rows[0]["phi_at_zero"]) == pytest.approx(1.32264744764, rel=1e-8)
    assert rows[0]["difference"] == "" and rows[1]["difference"] != ""


def test_transform_study_single_cutoff(capsys):
    code, out, _ = run(capsys, "transform-study", "--lambda-max", "4",
                       "--energy", "5.5")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 1 and rows[0]["difference"] == ""


def test_transform_study_decreasing_cutoffs(capsys):
    code, _, err = run(capsys, "transform-study", "--lambda-max", "4",
                       "--lambda-max", "3")
    assert code == 1 and "increasing" in err


@pytest.mark.parametrize("argv", [
    ["perturb", "--n-max", "3"],
    ["crossings"],
    ["spectrum", "--g", "0.25", "--n-max", "2"],
    ["approx", "--g", "1", "--level", "1", "--points", "21"],
    ["transform-study"],
])
def test_format_parity(capsys, argv):
    _, text_csv, _ = run(capsys, *argv, "--format", "csv")
    _, text_json, _ = run(capsys, *argv, "--format", "json")
    from_csv = csv_rows(text_csv)
    from_json = json.loads(text_json)["rows"]
    assert len(from_csv) == len(from_json)
    for a, b in zip(from_csv, from_json):
        assert list(a) == list(b)
        for key, value in b.items():
            if value is None:
                assert a[key] == ""
            elif isinstance(value, bool):
                assert a[key] == str(value).lower()
            elif isinstance(value, float):
                assert float(a[key]) == value
                assert a[key] == format(value, ".12g")
            else:
                assert a[key] == str(value)


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_deterministic_files(tmp_path, capsys, fmt):
    paths = [tmp_path / f"run{i}.{fmt}" for i in range(2)]
    for p in paths:
        code = cli.main(["spectrum", "--g", "1", "--n-max", "2", "--format", fmt,
                         "--out", str(p)])
        assert code == 0
    assert capsys.readouterr().out == ""
    first, second = (p.read_bytes() for p in paths)
    assert first == second
    assert first.endswith(b"\n") and b"\r" not in first


def test_csv_has_no_locale_artifacts(capsys):
    _, out, _ = run(capsys, "perturb", "--n-max", "2")
    for line in out.splitlines()[1:]:
        assert len(next(csv.reader([line]))) == 6
