import pytest

from cybermodels.numerics import Grid
from cybermodels.scenario import (
    ScenarioError,
    build_scenario,
    default_scenario,
    list_bundled,
    load_scenario,
    parse_scenario_text,
    resolve_scenario,
)


def parse(text):
    return build_scenario(parse_scenario_text(text, "test.scn"), "test.scn")


class TestDefaults:
    def test_empty_file_is_full_baseline(self, tmp_path):
        path = tmp_path / "empty.scn"
        path.write_text("", encoding="utf-8")
        scn = load_scenario(path)
        base = default_scenario()
        assert scn == base
        assert scn.phishing.p_click == 0.03
        assert scn.phishing.p_human_alert == 0.015
        assert scn.phishing.p_machine_alert == 0.01
        assert scn.tester.initial_rate == 6.0
        assert scn.tester.difficulty_exponent == 0.4
        assert scn.race.dev.shape == 0.57
        assert scn.race.dev.scale_days == 18.2
        assert scn.race.dep.rate_per_day == pytest.approx(1.0 / 144.0)
        assert scn.race.pre_disclosure_patch_fraction == 0.78
        assert scn.race.grid == Grid(0.0, 730.0, 0.25)
        assert scn.sim.workers == 1

    def test_comments_and_blanks_ignored(self):
        scn = parse("# comment\n\n[phishing]\n# another\np_click = 0.1\n")
        assert scn.phishing.p_click == 0.1
        assert scn.phishing.p_human_alert == 0.015  # default retained


class TestValidation:
    def test_negative_alpha_names_key_and_bound(self):
        with pytest.raises(ScenarioError, match="'alpha' must be >= 0"):
            parse("[vulndisc]\nalpha = -1\n")

    def test_unknown_key_named(self):
        with pytest.raises(ScenarioError, match="unknown key 'clickrate'"):
            parse("[phishing]\nclickrate = 0.5\n")

    def test_unknown_section_named(self):
        with pytest.raises(ScenarioError, match=r"unknown section \[ransomware\]"):
            parse("[ransomware]\nx = 1\n")

    def test_duplicate_key_reports_both_lines(self):
        text = "[phishing]\np_click = 0.1\np_click = 0.2\n"
        with pytest.raises(ScenarioError, match="lines 2 and 3"):
            parse(text)

    def test_key_before_section(self):
        with pytest.raises(ScenarioError, match="outside any"):
            parse("p_click = 0.5\n")

    def test_non_numeric_value_names_line(self):
        with pytest.raises(ScenarioError, match="line 2"):
            parse("[phishing]\np_click = lots\n")

    def test_bad_boolean(self):
        with pytest.raises(ScenarioError, match="boolean"):
            parse("[patchrace]\ninstant_dev = maybe\n")

    def test_probability_bound(self):
        with pytest.raises(ScenarioError, match=r"'p_click' must be in \[0, 1\]"):
            parse("[phishing]\np_click = 1.5\n")

    def test_deploy_speedup_bound(self):
        with pytest.raises(ScenarioError, match="'deploy_speedup' must be >= 1"):
            parse("[patchrace]\ndeploy_speedup = 0.2\n")

    def test_grid_keys_build_grid(self):
        scn = parse("[patchrace]\ngrid_stop_days = 400\ngrid_step_days = 0.5\n")
        assert scn.race.grid == Grid(0.0, 400.0, 0.5)

    def test_cross_field_violation_reported(self):
        # amplitude large enough that the exploit-curve peak exceeds 1
        with pytest.raises(ScenarioError, match="peak"):
            parse("[patchrace]\nA = 2.0\n")


class TestBundledPresets:
    def test_all_presets_load(self):
        names = list_bundled()
        assert len(names) >= 8
        for name in names:
            resolve_scenario(name)

    def test_ai_writer_preset_values(self):
        scn = resolve_scenario("table1_ai_writer.scn")
        assert scn.phishing.p_click == 0.3
        assert scn.phishing.p_human_alert == 0.005
        assert scn.phishing.p_machine_alert == 0.01

    def test_fuzzer_preset_values(self):
        scn = resolve_scenario("fuzzer.scn")
        assert scn.tester.initial_rate == 85.5
        assert scn.tester.difficulty_exponent == 3.0

    def test_file_path_wins_over_preset(self, tmp_path):
        path = tmp_path / "baseline.scn"
        path.write_text("[phishing]\np_click = 0.9\n", encoding="utf-8")
        assert load_scenario(path).phishing.p_click == 0.9

    def test_missing_scenario_lists_presets(self):
        with pytest.raises(ScenarioError, match="bundled presets"):
            resolve_scenario("nope.scn")

    def test_label_with_spaces(self):
        scn = resolve_scenario("human_bug_bounty.scn")
        assert scn.tester.label == "human bug bounty"
