"""Flat key-value configuration files for the CLI.

Format: one ``key = value`` pair per line, ``#`` starts a comment, blank
lines ignored.  Keys mirror the physical parameter fields (the optical
wavelength uses the key ``lambda``); unknown or repeated keys are errors.
"""

from __future__ import annotations

from .errors import ConfigError, ParameterError
from .kicks import PhysicalParams

# config key -> PhysicalParams attribute
KEY_TO_FIELD = {
    "g": "g",
    "omega_m": "omega_m",
    "n_p": "n_p",
    "kappa": "kappa",
    "gamma": "gamma",
    "T": "T",
    "mass": "mass",
    "L": "L",
    "lambda": "wavelength",
    "R": "R",
}
FIELD_TO_KEY = {v: k for k, v in KEY_TO_FIELD.items()}


def parse_config(text: str) -> PhysicalParams:
    """Parse config text into validated physical parameters.

    Raises ConfigError with a line/field diagnostic on malformed input.
    """
    overrides: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KEY_TO_FIELD:
            raise ConfigError(f"unknown key {key!r}", line=lineno)
        field = KEY_TO_FIELD[key]
        if field in overrides:
            raise ConfigError(f"repeated key {key!r}", line=lineno)
        try:
            overrides[field] = float(value)
        except ValueError:
            raise ConfigError(f"field {key}: cannot parse {value!r} as a number", line=lineno)
    try:
        return PhysicalParams(**overrides)
    except ParameterError as exc:
        raise ConfigError(str(exc))


def load_config(path: str | None) -> PhysicalParams:
    """Read a config file, or return the built-in defaults when path is None."""
    if path is None:
        return PhysicalParams()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}")
    return parse_config(text)
