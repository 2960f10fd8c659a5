import pytest

from movegrasp.config import ConfigError, RunConfig, dumps, from_dict, load_config, write_resolved
from movegrasp.environment import catalog_lookup


def write(tmp_path, text):
    path = tmp_path / "run.toml"
    path.write_text(text)
    return path


def test_empty_file_gives_defaults(tmp_path):
    assert load_config(write(tmp_path, "")) == RunConfig()


def test_overrides_by_table_and_dotted_key(tmp_path):
    run = load_config(write(tmp_path, "reward.R_s = 5\n[train]\ngamma2 = 0.95\nspeed_ratio_range = [0.2, 0.4]\n"))
    assert run.reward.R_s == 5.0 and isinstance(run.reward.R_s, float)
    assert run.train.gamma2 == 0.95
    assert run.train.speed_ratio_range == (0.2, 0.4)


def test_object_name_resolves_to_catalog_entry(tmp_path):
    run = load_config(write(tmp_path, '[env]\nobject = "power_drill"\n'))
    assert run.env.object == catalog_lookup("power_drill")


def test_negative_success_reward_rejected(tmp_path):
    with pytest.raises(ConfigError, match="R_s"):
        load_config(write(tmp_path, "[reward]\nR_s = -1\n"))


@pytest.mark.parametrize("text,key", [("[train]\nfoo = 1\n", "train.foo"), ("[bogus]\nx = 1\n", "bogus")])
def test_unknown_keys_are_named(tmp_path, text, key):
    with pytest.raises(ConfigError, match=key):
        load_config(write(tmp_path, text))


def test_parse_error_reports_line(tmp_path):
    with pytest.raises(ConfigError, match="line 3"):
        load_config(write(tmp_path, "[train]\nlr = 0.1\nworkers = = 2\n"))


def test_bool_fields_must_be_bool():
    with pytest.raises(ConfigError, match="adv_on"):
        from_dict({"train": {"adv_on": 1}})


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "nope.toml")


def test_resolved_config_round_trips(tmp_path):
    run = from_dict({"train": {"workers": 3, "adv_on": False}, "eval": {"bin_indices": [1, 2]},
                     "env": {"object": "mustard_bottle"}})
    path = write_resolved(run, tmp_path / "out")
    assert path.name == "config.toml"
    assert load_config(path) == run
    assert load_config(write(tmp_path, dumps(RunConfig()))) == RunConfig()
