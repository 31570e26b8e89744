import json

import pytest

from oracles import HOROCYCLE_MU, KAPPA, PLANE_CONSTANT, RANGE_KAPPA0, RANGE_MU
from symradon.calibration import Constants
from symradon.checks import CSV_HEADER, ReportRow
from symradon.cli import ConfigError, RunConfig, main, run, write_report


@pytest.fixture
def constants_file(tmp_path):
    path = tmp_path / "constants.json"
    Constants(PLANE_CONSTANT, PLANE_CONSTANT, KAPPA, HOROCYCLE_MU, RANGE_KAPPA0, RANGE_MU).save(path)
    return path


def write_config(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


class TestConfig:
    def test_defaults(self):
        cfg = RunConfig.from_dict({})
        assert cfg.seed == 0 and cfg.phantom is None and cfg.params == {}

    def test_full(self):
        cfg = RunConfig.from_dict({
            "quadrature": {"gauss_order": 24},
            "phantom": {"kind": "compact-bump", "space": "H2xH2", "center": [[0.1, 0.0], [0.0, 0.2]],
                        "support_radius": 1.0},
            "params": {"probes": 4, "R": 1.5},
            "seed": 7,
        })
        assert cfg.quadrature.gauss_order == 24
        assert cfg.phantom.center == (0.1 + 0j, 0.2j)
        assert cfg.params == {"probes": 4, "R": 1.5}

    @pytest.mark.parametrize("data", [
        {"colour": 1},
        {"quadrature": {"gauss_ordr": 3}},
        {"phantom": {"space": "H2"}},
        {"phantom": {"kind": "blob"}},
        {"phantom": {"kind": "gaussian-of-distance", "radius": 2}},
        {"params": {"probes": 0}},
        {"params": {"probes": 2.5}},
        {"params": {"nonsense": 1}},
        {"seed": -1},
        [],
    ])
    def test_rejected(self, data):
        with pytest.raises(ConfigError):
            RunConfig.from_dict(data)

    def test_unreadable(self, tmp_path):
        with pytest.raises(ConfigError):
            RunConfig.load(tmp_path / "missing.json")
        (tmp_path / "bad.json").write_text("{")
        with pytest.raises(ConfigError):
            RunConfig.load(tmp_path / "bad.json")


class TestExitCodes:
    def test_missing_config(self, tmp_path):
        assert main(["support-scan", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2

    def test_unknown_key(self, tmp_path):
        cfg = write_config(tmp_path, {"phantoms": {}})
        assert main(["support-scan", "--config", cfg, "--out", str(tmp_path)]) == 2

    def test_constants_required(self, tmp_path):
        assert main(["horocycle-range", "--out", str(tmp_path / "out")]) == 2

    def test_phantom_on_wrong_space(self, tmp_path):
        cfg = write_config(tmp_path, {"phantom": {"kind": "gaussian-of-distance", "space": "R2"}})
        assert main(["horocycle-range", "--config", cfg, "--out", str(tmp_path)]) == 2

    def test_bad_jobs(self, tmp_path):
        assert main(["support-scan", "--jobs", "0", "--out", str(tmp_path)]) == 2

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit):
            main(["frobnicate"])

    def test_passing_run(self, tmp_path, capsys):
        assert main(["support-scan", "--out", str(tmp_path)]) == 0
        assert "checks passed" in capsys.readouterr().out

    def test_failing_run(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "phantom": {"kind": "compact-bump", "center": [0.5, 0.0], "support_radius": 1.0},
            "params": {"R": 1.0},
        })
        assert main(["support-scan", "--config", cfg, "--out", str(tmp_path)]) == 1
        assert "FAILED" in capsys.readouterr().out


class TestReports:
    def test_layout(self, tmp_path, constants_file):
        cfg = RunConfig.from_dict({"params": {"constants": str(constants_file)}})
        code, rows = run("horocycle-range", cfg, tmp_path)
        assert code == 0
        lines = (tmp_path / "horocycle-range.csv").read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == len(rows) + 1
        summary = json.loads((tmp_path / "horocycle-range.summary.json").read_text())
        assert summary["passed"] == len(rows) and summary["failed"] == []

    def test_byte_identical_reruns(self, tmp_path, constants_file):
        cfg = RunConfig.from_dict({"params": {"constants": str(constants_file)}, "seed": 11})
        run("horocycle-range", cfg, tmp_path / "a")
        run("horocycle-range", cfg, tmp_path / "b")
        assert (tmp_path / "a/horocycle-range.csv").read_bytes() == (tmp_path / "b/horocycle-range.csv").read_bytes()

    def test_threads_do_not_change_results(self, tmp_path, constants_file):
        cfg = RunConfig.from_dict({"params": {"constants": str(constants_file), "probes": 4}})
        run("horocycle-roundtrip", cfg, tmp_path / "serial", jobs=1)
        run("horocycle-roundtrip", cfg, tmp_path / "threads", jobs=3)
        for name in ("horocycle-roundtrip.csv", "horocycle_sinogram.csv"):
            assert (tmp_path / "serial" / name).read_bytes() == (tmp_path / "threads" / name).read_bytes()

    def test_fields_with_commas_are_quoted(self, tmp_path):
        write_report([ReportRow("x.y", "a, b", 1.0, 1.0, 0.1)], tmp_path / "r.csv")
        assert '"a, b"' in (tmp_path / "r.csv").read_text()

    def test_calibrate_writes_constants(self, tmp_path, monkeypatch):
        from symradon import cli

        fake = Constants(PLANE_CONSTANT, PLANE_CONSTANT, KAPPA, HOROCYCLE_MU, RANGE_KAPPA0, RANGE_MU)
        monkeypatch.setattr(cli, "calibrate", lambda quad: fake)
        code, _ = run("calibrate", RunConfig(), tmp_path)
        assert code == 0
        assert Constants.load(tmp_path / "constants.json") == fake
