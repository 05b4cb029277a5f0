import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gainterm.config import Config, config_hash, from_ini, load_config, to_ini
from gainterm.errors import ConfigError


def test_empty_file_gives_defaults(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("")
    assert load_config(str(p), {}) == Config()


def test_env_beats_file_beats_defaults(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("[grid]\nn = 16\nL = 6.0\n")
    cfg = load_config(str(p), {"GAINTERM_GRID_N": "32"})
    assert cfg.grid.n == 32 and cfg.grid.L == 6.0


def test_rejects_non_power_of_two(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("[grid]\nn = 20\n")
    with pytest.raises(ConfigError) as exc:
        load_config(str(p), {})
    assert exc.value.key == "grid.n"


@pytest.mark.parametrize("text, key", [
    ("[grid]\nbogus = 1\n", "grid.bogus"),
    ("[nosuch]\nx = 1\n", "nosuch"),
    ("[tolerance]\nmass = -1\n", "tolerance.mass"),
    ("[run]\nramp = linear\n", "run.ramp"),
    ("[grid]\nn = sixteen\n", "grid.n"),
])
def test_rejections_name_the_key(tmp_path, text, key):
    p = tmp_path / "c.ini"
    p.write_text(text)
    with pytest.raises(ConfigError) as exc:
        load_config(str(p), {})
    assert exc.value.key.startswith(key)


def test_unknown_env_key_rejected():
    with pytest.raises(ConfigError):
        load_config(None, {"GAINTERM_GRID_BOGUS": "1"})


def test_parse_failure_and_missing_file(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("not an ini")
    with pytest.raises(ConfigError):
        load_config(str(p), {})
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.ini"), {})


@given(st.sampled_from([8, 16, 32, 64]), st.floats(1.0, 50.0), st.integers(0, 2 ** 31),
       st.floats(1e-12, 1e-2), st.lists(st.floats(1.0, 1e5), min_size=1, max_size=4))
def test_roundtrip(n, L, seed, tol, lambdas):
    cfg = Config().replace(grid={"n": n, "L": L}, run={"seed": seed},
                           tolerance={"oracle": tol}, symbol={"lambdas": tuple(lambdas)})
    assert from_ini(to_ini(cfg)) == cfg
    assert config_hash(from_ini(to_ini(cfg))) == config_hash(cfg)


def test_hash_ignores_output_dir_only():
    a = Config()
    assert config_hash(a) == config_hash(a.replace(run={"output_dir": "elsewhere"}))
    assert config_hash(a) != config_hash(a.replace(run={"seed": 1}))


def test_config_is_frozen():
    with pytest.raises(dataclasses.FrozenInstanceError):
        Config().grid.n = 8
