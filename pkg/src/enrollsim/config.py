"""Config-file handling: INI sections mirror the parameter sections, every
key maps straight onto a SimulationParams field.

Unknown sections or keys are rejected; missing keys keep their defaults.
A resolved config written with :func:`save_config` reads back into an
identical parameter set, and runs echo their resolved config into the
output directory for provenance.
"""

from __future__ import annotations

import configparser
from dataclasses import fields
from pathlib import Path

from .params import ParamsError, SimulationParams, format_pair_table


class ConfigError(Exception):
    """Unreadable, malformed or unknown configuration input."""


def load_config(path: str | Path, base: SimulationParams | None = None) -> SimulationParams:
    params = (base or SimulationParams()).copy()
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc
    known_sections = {f.name for f in fields(SimulationParams)}
    for section in parser.sections():
        if section not in known_sections:
            raise ConfigError(f"unknown config section [{section}] in {path}")
        for key, raw in parser.items(section):
            try:
                params.set(f"{section}.{key}", raw)
            except ParamsError as exc:
                raise ConfigError(str(exc)) from exc
    try:
        params.validate()
    except ParamsError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
    return params


def save_config(params: SimulationParams, path: str | Path) -> None:
    parser = configparser.ConfigParser(interpolation=None)
    for sf in fields(SimulationParams):
        section = sf.name
        parser.add_section(section)
        sec = getattr(params, section)
        for f in fields(sec):
            value = getattr(sec, f.name)
            if isinstance(value, tuple):
                text = format_pair_table(value)
            elif isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, float):
                text = format(value, ".12g")
            else:
                text = str(value)
            parser.set(section, f.name, text)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        parser.write(handle)
