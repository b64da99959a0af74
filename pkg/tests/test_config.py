from pathlib import Path

import pytest

from motzkin.config import ConfigError, _fallback, _is_true, load_params, resolve_settings
from motzkin.verify import DEFAULT_CAPS

REPO_PARAMS = Path(__file__).resolve().parents[1] / "params.yaml"


def test_missing_file_means_defaults(tmp_path):
    assert load_params(tmp_path / "nope.yaml") == {}
    s = resolve_settings({}, "verify")
    assert (s.mode, s.output_format, s.max_n, s.suite, s.workers) == ("checked", "plain", 10, "all", 1)
    assert (s.orders, s.order_max_n, s.max_failures, s.seed) == (20, 10, 100, 0)
    assert resolve_settings({}, "count").max_n == 12
    assert resolve_settings({}, "apply").max_n is None


def test_non_mapping_yaml_rejected(tmp_path):
    p = tmp_path / "params.yaml"
    p.write_text("[1, 2]\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_params(p)


def test_empty_yaml_is_empty_params(tmp_path):
    p = tmp_path / "params.yaml"
    p.write_text("# nothing here\n", encoding="utf-8")
    assert load_params(p) == {}


def test_precedence_cli_over_section_over_root():
    params = {"mode": "explicit", "workers": 3, "apply": {"mode": "recursive"}}
    assert resolve_settings(params, "apply").mode == "recursive"
    assert resolve_settings(params, "apply", {"mode": "checked"}).mode == "checked"
    assert resolve_settings(params, "enumerate").mode == "explicit"
    assert resolve_settings(params, "verify").workers == 3
    assert resolve_settings(params, "verify", {"workers": None}).workers == 3


def test_null_and_empty_values_fall_back():
    params = {"format": "json", "stats": {"format": None}, "enumerate": {"format": ""}}
    assert resolve_settings(params, "stats").output_format == "json"
    assert resolve_settings(params, "enumerate").output_format == "json"
    assert _fallback({"k": "null"}, {"k": 4}, "k") == 4
    assert _fallback({}, {}, "k", "d") == "d"


def test_bad_values_raise_config_error():
    with pytest.raises(ConfigError):
        resolve_settings({"workers": "many"}, "verify")
    with pytest.raises(ConfigError):
        resolve_settings({"verify": {"caps": [1, 2]}}, "verify")


@pytest.mark.parametrize("value, expected", [
    ("yes", True), ("Off", False), ("1", True), (0, False), (None, False), (True, True),
])
def test_is_true(value, expected):
    assert _is_true(value) is expected


def test_repo_params_match_built_in_caps():
    params = load_params(REPO_PARAMS)
    s = resolve_settings(params, "verify")
    assert s.max_n == 10
    assert s.suite == "all"
    assert {k: v for k, v in s.caps.items()} == {c.value: n for c, n in DEFAULT_CAPS.items()}
    assert s.quiet is False
