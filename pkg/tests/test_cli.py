import json

import pytest

from sawbound.bounds import PhiModel, quant_log_bound
from sawbound.cli import bounds_csv, main, parse_bounds_csv, parse_phi_csv, phi_csv
from sawbound.bounds import phi_empirical


@pytest.fixture(scope="module")
def census_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "c.json"
    assert main(["census", "-d", "2", "-N", "10", "-o", str(path)]) == 0
    return path


def test_mu(census_file, capsys):
    assert main(["mu", str(census_file)]) == 0
    out = capsys.readouterr().out
    assert "mu_low" in out and "mu_high" in out


def test_bounds_csv_roundtrip():
    rows = [quant_log_bound(PhiModel.power_law(1, 2), n, 2.7) for n in (0, 1, 5, 40)]
    assert parse_bounds_csv(bounds_csv(rows)) == rows


def test_phi_csv_roundtrip(census12):
    phi = phi_empirical(census12, 3)
    assert parse_phi_csv(phi_csv(phi)) == phi


def test_bounds_output_is_reproducible(tmp_path, census_file):
    outs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        assert main(["bounds", "--phi", "power-law:1:2", "-n", "50", "--step", "7",
                     "--census", str(census_file), "-o", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    lines = outs[0].decode().splitlines()
    assert lines[0].startswith("n,hw_log,quant_log")
    assert lines[-1].startswith("50,")


def test_phi_and_tabulated_input(tmp_path, census_file):
    table = tmp_path / "phi.csv"
    model = tmp_path / "phi.json"
    assert main(["phi", str(census_file), "--n-min", "4", "-o", str(table),
                 "--model-out", str(model), "--fit"]) == 0
    for spec in (f"tabulated:{table}", f"tabulated:{model}"):
        assert main(["bounds", "--phi", spec, "-n", "5", "-o", str(tmp_path / "x.csv")]) == 0


def test_verify_exit_codes(tmp_path, census_file):
    report = tmp_path / "r.json"
    assert main(["verify", str(census_file), "--phi-n-min", "4", "-o", str(report)]) == 0
    assert json.loads(report.read_text())["summary"]["fails"] == 0
    assert main(["verify", str(census_file), "--phi", "power-law:10:2", "--no-recount"]) == 1


def test_plot_data(tmp_path, census_file):
    b, p = tmp_path / "b.csv", tmp_path / "p.csv"
    assert main(["plot-data", str(census_file), "-n", "100", "--bounds-out", str(b),
                 "--phi-out", str(p)]) == 0
    assert len(b.read_text().splitlines()) == 12


@pytest.mark.parametrize("argv", [
    ["bounds", "--phi", "bogus", "-n", "3"],
    ["bounds", "--phi", "power-law:1", "-n", "3"],
    ["bounds", "--phi", "empirical", "-n", "3"],
    ["bounds", "-n", "5", "--step", "0"],
    ["census", "-d", "2", "-N", "40", "-o", "unused.json"],
    ["mu", "does-not-exist.json"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_corrupt_file_exit_2(tmp_path, census_file):
    doc = json.loads(census_file.read_text())
    doc["c"][3] = "37"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["mu", str(bad)]) == 2
