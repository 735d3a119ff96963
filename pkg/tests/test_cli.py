import csv
import io
import json
from fractions import Fraction

import pytest

from ringdensity import acceptance, cli


def run(capsys, *argv):
    status = cli.main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_constants_forwards_local_factors(capsys):
    status, out, _ = run(capsys, "constants", "--n", "2", "--p", "2")
    assert status == 0
    rows = {r["quantity"]: r for r in json.loads(out)["rows"]}
    assert rows["alpha"]["lo"] == rows["alpha"]["hi"] == "6/7"
    assert rows["beta"]["lo"] == "1/6"
    assert Fraction("0.7307629") >= Fraction(rows["zeta_ratio"]["lo"])


def test_density_xsize_csv(capsys):
    status, out, _ = run(capsys, "density-xsize", "--profile", "quadratic:-7", "--n", "2",
                         "--tmax", "6", "--tol", "1e-4", "--format", "csv")
    assert status == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 7
    for r in rows:
        assert Fraction(r["lo"]) <= Fraction(r["hi"])
        # decimals are rounded outward
        assert Fraction(r["lo_dec"]) <= Fraction(r["lo"])
        assert Fraction(r["hi_dec"]) >= Fraction(r["hi"])
    assert rows[1]["vs_next"] == "<"
    assert Fraction(rows[1]["hi"]) < Fraction(rows[2]["lo"])


def test_reports_are_byte_identical(capsys):
    args = ("enumerate", "--n", "2", "--H", "300", "--mode", "montecarlo", "--samples", "20000",
            "--seed", "9", "--profiles", "rational,quadratic:-7", "--disc-classes=-7")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    _, threaded, _ = run(capsys, *args, "--threads", "2")
    assert json.loads(threaded)["rows"] == json.loads(first)["rows"]


def test_timings_only_on_request(capsys):
    _, out, _ = run(capsys, "density-e", "--n", "2", "--k", "1,2")
    assert "timings" not in json.loads(out)
    _, out, _ = run(capsys, "density-e", "--n", "2", "--k", "1,2", "--timings")
    assert "total_seconds" in json.loads(out)["timings"]


def test_threads_default_from_environment(monkeypatch, capsys):
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    _, out, _ = run(capsys, "density-e", "--n", "2", "--k", "1")
    assert json.loads(out)["config"]["threads"] == 3


def test_config_error_exit_code(capsys):
    status, _, err = run(capsys, "enumerate", "--n", "2", "--H", "10", "--mode", "montecarlo",
                         "--samples", "10")
    assert status == 2 and "seed" in err
    status, _, _ = run(capsys, "density-e", "--n", "1")
    assert status == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["density-e", "--n", "2", "--tol", "-1"])
    assert info.value.code == 2


def test_budget_refusal_exit_code(capsys):
    status, _, err = run(capsys, "factor-census", "--m", "3", "--p", "101", "--budget", "1000")
    assert status == 3
    assert "1030301" in err


def test_verify_subset_and_failure(monkeypatch, capsys):
    status, out, _ = run(capsys, "verify", "--criteria", "9,16")
    assert status == 0
    assert [r["passed"] for r in json.loads(out)["rows"]] == [True, True]
    monkeypatch.setitem(acceptance.CRITERIA, 9, ("forced failure", lambda: (False, "no")))
    status, out, err = run(capsys, "verify", "--criteria", "9")
    assert status == 1
    assert "[FAIL]" in err


@pytest.mark.parametrize("argv", [
    ["density-ring", "--n", "2", "--k", "1,2,12"],
    ["moments", "--profile", "rational", "--n", "2", "--s", "2"],
    ["monotonicity", "--profile", "quadratic:-7", "--n", "2", "--tmax", "4"],
    ["enumerate", "--n", "2", "--H", "8", "--monic", "--split-primes", "5,7"],
    ["counts", "--H", "20", "--irreducible-n", "2", "--coprime-k", "3"],
    ["quad-class", "--d=-23,-4"],
    ["quad-torsion", "--d=-23", "--t", "3"],
    ["quad-products", "--d=-7", "--N", "100"],
    ["factor-census", "--m", "3", "--p", "7"],
    ["factor-limit", "--m", "4", "--p", "7"],
    ["split-sample", "--m", "2", "--p", "11", "--H", "50", "--samples", "2000", "--seed", "1"],
])
def test_subcommands_run(capsys, argv):
    status, out, _ = run(capsys, *argv)
    assert status == 0
    report = json.loads(out)
    assert report["command"] == argv[0]
    assert report["rows"]
    status, text, _ = run(capsys, *argv, "--format", "csv")
    assert status == 0 and len(text.splitlines()) == len(report["rows"]) + 1


def test_factor_census_rows(capsys):
    _, out, _ = run(capsys, "factor-census", "--m", "3", "--p", "7")
    rows = json.loads(out)["rows"]
    assert [r["squarefree"] for r in rows] == [112, 147, 35]
    assert sum(r["count"] for r in rows) == 343
