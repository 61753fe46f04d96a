"""Preset table, INI loading, precedence, and validation messages."""

import pytest

from esdib import PRESETS, ConfigError, dump_config, load_config


class TestPresets:
    def test_table(self):
        assert sorted(PRESETS) == [1, 2, 3, 4, 5, 6]
        rows = {
            1: ("square", 20.0, 100, 30.0, 3.0, 2.0, 12.0),
            2: ("square", 30.0, 150, 66.0, 3.0, 1.0, 20.0),
            3: ("square", 20.0, 100, 62.0, 5.0, 2.0, 60.0),
            4: ("sphere", 3.0, 4, 30.0, 3.0, 2.0, 12.0),
            5: ("sphere", 10.0, 6, 66.0, 3.0, 1.0, 20.0),
            6: ("sphere", 5.0, 5, 62.0, 5.0, 2.0, 50.0),
        }
        for pid, (kind, size, res, B, C, rho, T) in rows.items():
            p = PRESETS[pid]
            assert p.preset_id == pid
            assert (p.domain.kind, p.domain.size, p.domain.resolution) == (
                kind, size, res,
            )
            assert (p.B, p.C, p.rho, p.T) == (B, C, rho, T)

    def test_preset_resolution_matches_target_edge(self):
        # flat sheets aim for edge length 0.2; spheres for the nearest level
        assert PRESETS[1].domain.size / PRESETS[1].domain.resolution == pytest.approx(
            0.2, rel=1e-12
        )


class TestLoadConfig:
    def test_preset_only(self):
        cfg = load_config(preset=1)
        assert cfg.preset_id == 1
        assert (cfg.domain.kind, cfg.domain.size, cfg.domain.resolution) == (
            "square", 20.0, 100,
        )
        assert (cfg.B, cfg.C, cfg.rho) == (30.0, 3.0, 2.0)
        assert (cfg.kappa, cfg.d, cfg.amplitude, cfg.seed) == (0.2, 20.0, 1e-4, 0)
        assert cfg.shared_noise is False
        assert (cfg.solver.tau, cfg.solver.T) == (1e-2, 12.0)
        assert (cfg.solver.cg_tol, cfg.solver.cg_maxiter) == (1e-10, 10000)
        assert cfg.solver.min_triangle_area is None
        assert cfg.solver.min_angle_deg == 0.5
        assert cfg.output.directory == "out"
        assert (cfg.output.sample_stride, cfg.output.snapshot_stride) == (10, 0)
        assert cfg.output.write_obj is False

    def test_empty_file_plus_preset_equals_preset(self, tmp_path):
        empty = tmp_path / "empty.ini"
        empty.write_text("")
        assert load_config(path=str(empty), preset=2) == load_config(preset=2)

    def test_file_overrides_preset(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[kinetics]\nB = 40.0\n\n[solver]\nT = 3.0\n")
        cfg = load_config(path=str(ini), preset=1)
        assert cfg.B == 40.0
        assert cfg.solver.T == 3.0
        assert cfg.C == 3.0  # untouched preset value

    def test_overrides_beat_file(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[kinetics]\nB = 40.0\n")
        cfg = load_config(path=str(ini), preset=1, overrides={"kinetics.B": 50.0})
        assert cfg.B == 50.0

    def test_resolution_recomputed_when_size_changes(self):
        cfg = load_config(preset=1, overrides={"domain.size": 10.0})
        assert cfg.domain.resolution == 50  # 10 / 0.2

    def test_explicit_resolution_wins(self):
        cfg = load_config(preset=1, overrides={"domain.resolution": 33})
        assert cfg.domain.resolution == 33

    def test_without_preset_requires_domain_and_kinetics(self):
        with pytest.raises(ConfigError, match="domain.kind"):
            load_config()
        with pytest.raises(ConfigError, match="kinetics.B"):
            load_config(
                overrides={"domain.kind": "square", "domain.size": 5.0,
                           "solver.T": 1.0}
            )

    def test_standalone_config_without_preset(self, tmp_path):
        ini = tmp_path / "solo.ini"
        ini.write_text(
            "[domain]\nkind = sphere\nsize = 2.0\nresolution = 3\n\n"
            "[kinetics]\nB = 66.0\nC = 3.0\nrho = 1.0\n\n"
            "[solver]\nT = 5.0\n"
        )
        cfg = load_config(path=str(ini))
        assert cfg.preset_id is None
        assert cfg.domain.kind == "sphere"
        assert cfg.solver.T == 5.0

    def test_inline_comments_and_booleans(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text(
            "[kinetics]\nB = 35.0  # boosted\nshared_noise = yes\n\n"
            "[output]\nwrite_obj = off\n"
        )
        cfg = load_config(path=str(ini), preset=1)
        assert cfg.B == 35.0
        assert cfg.shared_noise is True
        assert cfg.output.write_obj is False

    def test_min_triangle_area_auto_and_numeric(self):
        assert load_config(preset=1).solver.min_triangle_area is None
        cfg = load_config(
            preset=1, overrides={"solver.min_triangle_area": "1e-9"}
        )
        assert cfg.solver.min_triangle_area == 1e-9

    def test_kinetics_params_resolution(self):
        cfg = load_config(preset=3)
        params = cfg.kinetics_params()
        assert (params.B, params.C, params.rho) == (62.0, 5.0, 2.0)
        assert params.D == pytest.approx(45.0 / 11.0, rel=1e-15)
        assert params.d == 20.0
        custom = load_config(preset=3, overrides={"kinetics.d": 15.0})
        assert custom.kinetics_params().d == 15.0


class TestValidation:
    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match=r"\[1, 2, 3, 4, 5, 6\]"):
            load_config(preset=7)

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="not found"):
            load_config(path="/nonexistent/run.ini")

    def test_parse_error_reports_line(self, tmp_path):
        bad = tmp_path / "bad.ini"
        bad.write_text("orphan value without a section\n")
        with pytest.raises(ConfigError, match="line"):
            load_config(path=str(bad))

    def test_unknown_section(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[physics]\nB = 1\n")
        with pytest.raises(ConfigError, match=r"\[physics\]"):
            load_config(path=str(ini), preset=1)

    def test_unknown_key_named(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[domain]\nshape = square\n")
        with pytest.raises(ConfigError, match="domain.shape"):
            load_config(path=str(ini), preset=1)

    def test_keys_are_case_sensitive(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[kinetics]\nb = 30.0\n")
        with pytest.raises(ConfigError, match="kinetics.b"):
            load_config(path=str(ini), preset=1)

    @pytest.mark.parametrize(
        "override,fragment",
        [
            ({"solver.tau": "abc"}, "solver.tau must be a number"),
            ({"solver.tau": "-0.1"}, "solver.tau must be greater than"),
            ({"solver.T": "-1"}, "solver.T must be at least"),
            ({"kinetics.seed": "-1"}, "kinetics.seed must be at least"),
            ({"kinetics.seed": "1.5"}, "kinetics.seed must be an integer"),
            ({"kinetics.shared_noise": "maybe"}, "kinetics.shared_noise must be a boolean"),
            ({"domain.kind": "torus"}, "domain.kind must be square or sphere"),
            ({"output.sample_stride": "0"}, "output.sample_stride must be at least"),
            ({"kinetics.kappa": "-0.2"}, "kinetics.kappa must be at least"),
        ],
    )
    def test_bad_values_name_section_and_key(self, override, fragment):
        with pytest.raises(ConfigError, match=fragment.replace(".", r"\.")):
            load_config(preset=1, overrides=override)

    def test_bad_override_shape(self):
        with pytest.raises(ConfigError, match="section.key"):
            load_config(preset=1, overrides={"tau": "0.1"})
        with pytest.raises(ConfigError, match="unknown config key"):
            load_config(preset=1, overrides={"solver.step": "0.1"})


class TestDump:
    def test_dump_load_round_trip(self, tmp_path):
        cfg = load_config(
            preset=4,
            overrides={"kinetics.kappa": 0.15, "solver.tau": "0.005",
                       "output.write_obj": "true"},
        )
        text = dump_config(cfg)
        path = tmp_path / "echo.ini"
        path.write_text(text)
        again = load_config(path=str(path))
        assert again.domain == cfg.domain
        assert (again.B, again.C, again.rho, again.kappa) == (
            cfg.B, cfg.C, cfg.rho, cfg.kappa,
        )
        assert (again.d, again.amplitude, again.seed, again.shared_noise) == (
            cfg.d, cfg.amplitude, cfg.seed, cfg.shared_noise,
        )
        assert again.solver == cfg.solver
        assert again.output == cfg.output

    def test_dump_is_deterministic(self):
        a = dump_config(load_config(preset=5))
        b = dump_config(load_config(preset=5))
        assert a == b
        assert a.startswith("[domain]\n")
