import json

import pytest

from irsma.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_VIOLATION,
    main,
)
from irsma.config import ConfigError, parse_config, parse_methods
from irsma.solvers import Method

FAST_OVERRIDES = """
[irs]
num_elements = 12
num_subsurfaces = 3
phase_levels = 4

[run]
trials = 4
seed = 9
"""


class TestParseConfig:
    def test_defaults_match_baseline_setup(self):
        cfg = parse_config("")
        sc = cfg.scenario
        assert sc.irs.num_elements == 100
        assert sc.irs.num_subsurfaces == 5
        assert sc.irs.phase_levels == 8
        assert sc.noise.sigma2 == pytest.approx(1e-11)
        assert sc.trials == 100
        assert sc.solver.la_steps == 8
        assert sc.solver.ao_sweeps == 2
        assert sc.solver.rps_ao_sweeps == 10
        assert sc.geometry.ap_irs_distance == pytest.approx(50.0)
        assert cfg.methods == (Method.BRUTE_FORCE, Method.LA_AO, Method.RPS_AO)

    def test_dbm_conversion(self):
        cfg = parse_config('[noise]\nsigma2 = "-80 dBm"\n')
        assert cfg.scenario.noise.sigma2 == pytest.approx(1e-11, rel=1e-12)
        cfg = parse_config('[noise]\nsigma2 = 2e-12\n')
        assert cfg.scenario.noise.sigma2 == pytest.approx(2e-12)

    def test_unit_mismatch_names_field(self):
        with pytest.raises(ConfigError, match="noise.sigma2"):
            parse_config('[noise]\nsigma2 = "-80 m"\n')

    def test_indivisible_subsurfaces_rejected(self):
        with pytest.raises(ConfigError, match=r"\[irs\]"):
            parse_config("[irs]\nnum_elements = 100\nnum_subsurfaces = 7\n")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config("[irs]\nnum_element = 100\n")

    def test_explicit_geometry(self):
        cfg = parse_config(
            "[geometry]\nap = [0.0, 0.0]\nirs = [10.0, 0.0]\n"
            "user1 = [10.0, 2.0]\nuser2 = [10.0, -2.0]\n"
        )
        assert cfg.scenario.geometry.ap_irs_distance == pytest.approx(10.0)

    def test_geometry_case_and_positions_conflict(self):
        with pytest.raises(ConfigError):
            parse_config("[geometry]\ncase = 1\nap = [0.0, 0.0]\n")

    def test_methods_parsing(self):
        assert parse_methods("brute,la-ao") == (Method.BRUTE_FORCE, Method.LA_AO)
        with pytest.raises(ConfigError):
            parse_methods("gradient")

    def test_rates_with_units(self):
        cfg = parse_config('[rates]\nuser1 = "2 bps/Hz"\nuser2 = 0.5\n')
        assert cfg.scenario.rates.gamma1 == 2.0
        assert cfg.scenario.rates.gamma2 == 0.5


class TestCli:
    def _write_config(self, tmp_path, extra=""):
        path = tmp_path / "scenario.toml"
        path.write_text(FAST_OVERRIDES + extra)
        return path

    def test_unknown_subcommand_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_config_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text("[irs]\nnum_elements = 100\nnum_subsurfaces = 7\n")
        assert main(["validate", "--config", str(bad)]) == EXIT_CONFIG

    def test_conflicting_config_sources(self, tmp_path):
        cfg = self._write_config(tmp_path)
        assert main(["validate", "--config", str(cfg), "--case", "1"]) == EXIT_CONFIG

    def test_validate_violation_exit_code(self, tmp_path, monkeypatch):
        import irsma.cli as cli_mod
        from irsma.experiments import PropositionReport

        monkeypatch.setattr(
            cli_mod,
            "validate_propositions",
            lambda records: PropositionReport(
                checked=len(records), rel_tol=1e-12,
                violations=("fabricated",), equality_cases=(),
            ),
        )
        cfg = self._write_config(tmp_path)
        code = main(
            ["validate", "--config", str(cfg), "--trials", "2",
             "--out", str(tmp_path / "out")]
        )
        assert code == EXIT_VIOLATION

    def test_validate_passes_on_seeded_instances(self, tmp_path, capsys):
        cfg = self._write_config(tmp_path)
        code = main(
            ["validate", "--config", str(cfg), "--trials", "20",
             "--out", str(tmp_path / "out")]
        )
        assert code == EXIT_OK
        report = json.loads((tmp_path / "out" / "validation.json").read_text())
        assert report["passed"] is True and report["checked"] == 20
        assert "PASS" in (tmp_path / "out" / "validation.txt").read_text()

    def test_sweep_deterministic_csv(self, tmp_path):
        cfg = self._write_config(
            tmp_path, '[sweep]\nvariable = "common-rate"\ngrid = [1.0, 2.0]\n'
        )
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            code = main(
                ["sweep", "--config", str(cfg), "--out", str(out),
                 "--methods", "brute,la-ao"]
            )
            assert code == EXIT_OK
        assert (out1 / "sweep.csv").read_bytes() == (out2 / "sweep.csv").read_bytes()

    def test_sweep_csv_round_trip(self, tmp_path):
        from irsma.experiments import read_sweep_csv

        cfg = self._write_config(
            tmp_path, '[sweep]\nvariable = "common-rate"\ngrid = [1.0]\n'
        )
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
        rows = read_sweep_csv(out / "sweep.csv")
        assert {r.scheme for r in rows} == {"noma", "fdma", "tdma"}
        assert {r.method for r in rows} == {"brute", "la-ao", "rps-ao", "no-irs"}
        # re-serialize: byte-identical content proves lossless parsing
        from irsma.experiments import write_sweep_csv

        again = out / "again.csv"
        write_sweep_csv(rows, again)
        assert again.read_bytes() == (out / "sweep.csv").read_bytes()

    def test_seed_override_changes_output(self, tmp_path):
        cfg = self._write_config(
            tmp_path, '[sweep]\nvariable = "common-rate"\ngrid = [1.0]\n'
        )
        out1, out2 = tmp_path / "s1", tmp_path / "s2"
        main(["sweep", "--config", str(cfg), "--out", str(out1), "--seed", "1"])
        main(["sweep", "--config", str(cfg), "--out", str(out2), "--seed", "2"])
        assert (out1 / "sweep.csv").read_bytes() != (out2 / "sweep.csv").read_bytes()

    def test_solve_one_prints_all_schemes(self, tmp_path, capsys):
        cfg = self._write_config(tmp_path)
        assert main(["solve-one", "--config", str(cfg), "--trial", "1"]) == EXIT_OK
        captured = capsys.readouterr().out
        for token in ("noma", "fdma", "tdma", "brute", "la-ao", "rps-ao", "no-irs"):
            assert token in captured

    def test_case_presets_load(self):
        assert main(["solve-one", "--case", "2", "--methods", "la-ao"]) == EXIT_OK

    def test_split_rate_flag_filters_grid(self, tmp_path):
        cfg = self._write_config(
            tmp_path,
            '[sweep]\nvariable = "common-rate"\ngrid = [1.0, 3.0, 5.0]\n'
            'sum_rate = "4 bps/Hz"\n',
        )
        out = tmp_path / "o"
        code = main(
            ["sweep", "--config", str(cfg), "--out", str(out),
             "--sweep", "split-rate", "--methods", "brute"]
        )
        assert code == EXIT_OK
        from irsma.experiments import read_sweep_csv

        rows = read_sweep_csv(out / "sweep.csv")
        assert {r.sweep_var for r in rows} == {1.0, 3.0}
