"""Preset and config-file loading.

Presets are flat key-value YAML files shipped under `uabs/plugins`. A file may
name a parent with `inherit: <relative path>`; keys of the child override the
parent's one by one.
"""

from os import path

import yaml

from uabs.core.data import ConfigKeyError, ConfigValueError

PLUGINS_DIR = path.join(path.dirname(__file__), "..", "plugins")
SCENARIO_PRESETS = {
    "toy": "1.toy.yaml",
    "urban": "2.urban.yaml",
}

def use_plugin(setting_fpath: str, known_keys: set[str]=None) -> dict:
    with open(setting_fpath, mode="r", encoding="utf8") as fp:
        setting = yaml.safe_load(fp) or {}
    if not isinstance(setting, dict):
        raise ConfigValueError(f"'{setting_fpath}' is not a key-value mapping")

    settings = {}
    if (inherit_rel_path:=setting.pop('inherit', None)) is not None:
        settings.update(use_plugin(path.join(path.dirname(setting_fpath), inherit_rel_path), known_keys))

    for k, v in setting.items():
        if isinstance(v, dict):
            raise ConfigValueError(f"Key '{k}' in '{setting_fpath}' is nested, config files are flat")
        if known_keys is not None and k not in known_keys:
            raise ConfigKeyError(f"Unknown key '{k}' in '{setting_fpath}'")
        settings[k] = v

    return settings

def load_scenario_settings(scenario: str, config_fpath: str=None, known_keys: set[str]=None) -> dict:
    if scenario not in SCENARIO_PRESETS:
        raise ConfigValueError(f"Unknown scenario '{scenario}'")
    settings = use_plugin(path.join(PLUGINS_DIR, SCENARIO_PRESETS[scenario]), known_keys)
    if config_fpath is not None:
        settings.update(use_plugin(config_fpath, known_keys))
    return settings
