import pytest

from crnoma.configfile import ConfigFileError, load_config, parse_config_text

VALID = """\
# reference setup
n_bs = 2
m_pu = 2
k_su = 2
d_p_m = 350
d_s_m = 250
epsilon = 3
noise_dbm = -70
gamma_p_th = 0.41421356237309515
gamma_s_th = 4.656854249492381
"""


class TestHappyPath:
    def test_distance_model(self):
        loaded = parse_config_text(VALID)
        assert loaded.system.omega_h == 350.0**3
        assert loaded.system.omega_g == 250.0**3
        assert loaded.system.n_bs == 2
        assert loaded.noise_dbm == -70.0
        assert loaded.raw["d_p_m"] == "350"

    def test_inline_comment_and_blank_lines(self):
        loaded = parse_config_text(
            "n_bs = 1  # single antenna\n\nm_pu=1\nk_su=1\nomega_h=2\nomega_g=3\n"
            "noise_dbm=-70\ngamma_p_th=1\ngamma_s_th=1\n")
        assert loaded.system.n_bs == 1
        assert loaded.system.omega_h == 2.0

    def test_omega_overrides_win_over_distances(self):
        text = VALID + "omega_h = 7\nomega_g = 9\n"
        loaded = parse_config_text(text)
        assert loaded.system.omega_h == 7.0
        assert loaded.system.omega_g == 9.0

    def test_db_threshold_conversion(self):
        text = VALID.replace("gamma_p_th = 0.41421356237309515",
                             "gamma_p_th_db = 3.0")
        loaded = parse_config_text(text)
        assert loaded.system.gamma_p_th == pytest.approx(10 ** 0.3, rel=1e-12)

    def test_load_from_file(self, reference_config_file, reference_config):
        loaded = load_config(reference_config_file)
        assert loaded.system == reference_config


class TestErrors:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigFileError, match="cannot read"):
            load_config(tmp_path / "nope.cfg")

    def test_unknown_key_reports_line(self):
        with pytest.raises(ConfigFileError, match="line 2: unknown key 'bogus'"):
            parse_config_text("n_bs = 2\nbogus = 1\n")

    def test_duplicate_key_reports_both_lines(self):
        with pytest.raises(ConfigFileError, match="line 3: duplicate key 'n_bs'.*line 1"):
            parse_config_text("n_bs = 2\nm_pu = 2\nn_bs = 3\n")

    def test_missing_equals_sign(self):
        with pytest.raises(ConfigFileError, match="line 1: expected key=value"):
            parse_config_text("n_bs 2\n")

    def test_empty_value(self):
        with pytest.raises(ConfigFileError, match="line 1: empty value"):
            parse_config_text("n_bs =\n")

    def test_bad_integer_reports_line(self):
        text = VALID.replace("n_bs = 2", "n_bs = two")
        with pytest.raises(ConfigFileError, match="line 2: n_bs must be an integer"):
            parse_config_text(text)

    def test_bad_float_reports_line(self):
        text = VALID.replace("epsilon = 3", "epsilon = fast")
        with pytest.raises(ConfigFileError, match="epsilon must be a number"):
            parse_config_text(text)

    def test_missing_required_key(self):
        with pytest.raises(ConfigFileError, match="missing required key noise_dbm"):
            parse_config_text("n_bs=1\nm_pu=1\nk_su=1\nomega_h=1\nomega_g=1\n"
                              "gamma_p_th=1\ngamma_s_th=1\n")

    def test_one_sided_omega_override(self):
        with pytest.raises(ConfigFileError, match="both omega_h and omega_g"):
            parse_config_text("n_bs=1\nm_pu=1\nk_su=1\nomega_h=1\nnoise_dbm=-70\n"
                              "gamma_p_th=1\ngamma_s_th=1\n")

    def test_linear_and_db_threshold_conflict(self):
        with pytest.raises(ConfigFileError, match="both gamma_p_th and gamma_p_th_db"):
            parse_config_text(VALID + "gamma_p_th_db = 3\n")

    def test_invalid_derived_values_wrapped(self):
        text = VALID.replace("epsilon = 3", "epsilon = -3")
        with pytest.raises(ConfigFileError):
            parse_config_text(text)

    def test_nonpositive_antenna_count(self):
        text = VALID.replace("n_bs = 2", "n_bs = 0")
        with pytest.raises(ConfigFileError, match="n_bs"):
            parse_config_text(text)
