from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

try:
    import yaml  # type: ignore
except Exception:  # pragma: no cover
    yaml = None  # only needed once a params file is actually present


class ConfigError(RuntimeError):
    """params.yaml could not be read or has the wrong shape."""


# Built-in defaults; params.yaml and CLI flags override them.
DEFAULT_PARAMS: Dict[str, Any] = {
    'mode': 'checked',
    'format': 'plain',
    'seed': 0,
    'workers': 1,
    'max_failures': 100,
    'verify': {
        'max_n': 10,
        'suite': 'all',
        'orders': 20,
        'order_max_n': 10,
    },
    'count': {'max_n': 12},
}


def load_params(p: Optional[Path]) -> dict:
    """Load params.yaml; a missing file means built-in defaults only."""
    if p is None or not Path(p).exists():
        return {}
    if yaml is None:
        raise ConfigError("PyYAML is required to read params.yaml. Install 'pyyaml' or run via scripts/bin/run_venv.sh")
    try:
        data = yaml.safe_load(Path(p).read_text(encoding='utf-8'))
    except yaml.YAMLError as e:
        raise ConfigError(f"{p}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{p}: expected a mapping at the top level, got {type(data).__name__}")
    return data


def _is_true(v: object, default: bool = False) -> bool:
    """Normalize YAML booleans, 0/1 and yes/no/on/off strings."""
    if v is None:
        return default
    if isinstance(v, bool):
        return v
    if isinstance(v, (int, float)):
        return v != 0
    if isinstance(v, str):
        s = v.strip().lower()
        if s in {"1", "true", "yes", "y", "on"}:
            return True
        if s in {"0", "false", "no", "n", "off"}:
            return False
    return bool(v)


def _norm_none(v: object) -> object:
    """Empty strings and 'null' count as unset."""
    if isinstance(v, str) and v.strip().lower() in {"null", ""}:
        return None
    return v


def _fallback(section: Mapping[str, Any], root: Mapping[str, Any], key: str, default: object | None = None) -> object | None:
    """Return section[key] if set, else root[key], else default."""
    sv = _norm_none(section.get(key)) if isinstance(section, Mapping) else None
    if sv is not None:
        return sv
    rv = _norm_none(root.get(key)) if isinstance(root, Mapping) else None
    if rv is not None:
        return rv
    return default


@dataclass
class Settings:
    mode: str = 'checked'
    output_format: str = 'plain'
    max_n: Optional[int] = None
    suite: str = 'all'
    workers: int = 1
    seed: int = 0
    orders: int = 20
    order_max_n: int = 10
    max_failures: int = 100
    quiet: bool = False
    caps: Dict[str, int] = field(default_factory=dict)


def _as_int(key: str, value: object) -> int:
    try:
        return int(value)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None


def resolve_settings(params: Mapping[str, Any], command: str, overrides: Optional[Mapping[str, Any]] = None) -> Settings:
    """Layer CLI overrides > params[command] > params root > built-in defaults."""
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    section = params.get(command) if isinstance(params.get(command), Mapping) else {}
    builtin_section = DEFAULT_PARAMS.get(command, {})

    def pick(key: str, default: object = None) -> object:
        if key in overrides:
            return overrides[key]
        value = _fallback(section, params, key)
        if value is not None:
            return value
        return _fallback(builtin_section, DEFAULT_PARAMS, key, default)

    caps_raw = section.get('caps') if isinstance(section, Mapping) else None
    if caps_raw is not None and not isinstance(caps_raw, Mapping):
        raise ConfigError(f"{command}.caps must be a mapping of check name to max n")
    max_n = pick('max_n')
    return Settings(
        mode=str(pick('mode', 'checked')).lower(),
        output_format=str(pick('format', 'plain')).lower(),
        max_n=None if max_n is None else _as_int('max_n', max_n),
        suite=str(pick('suite', 'all')),
        workers=max(1, _as_int('workers', pick('workers', 1))),
        seed=_as_int('seed', pick('seed', 0)),
        orders=_as_int('orders', pick('orders', 20)),
        order_max_n=_as_int('order_max_n', pick('order_max_n', 10)),
        max_failures=_as_int('max_failures', pick('max_failures', 100)),
        quiet=_is_true(pick('quiet'), False),
        caps={str(k): _as_int(f"caps.{k}", v) for k, v in (caps_raw or {}).items()},
    )
