"""Flat key=value configuration files.

Format: one ``key = value`` pair per line, ``#`` starts a comment, blank
lines ignored.  Antenna counts and thresholds are required; the gain rates
come either from the distance model (``d_p_m``, ``d_s_m``, ``epsilon``) or
from direct ``omega_h``/``omega_g`` overrides, which win when both are
present.  Thresholds are linear by default; ``gamma_p_th_db`` /
``gamma_s_th_db`` variants convert as ``10**(x/10)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .channel import ConfigurationError, SystemConfig, path_loss_rate

__all__ = ["ConfigFileError", "LoadedConfig", "parse_config_text", "load_config"]

_INT_KEYS = {"n_bs", "m_pu", "k_su"}
_FLOAT_KEYS = {
    "d_p_m",
    "d_s_m",
    "epsilon",
    "noise_dbm",
    "gamma_p_th",
    "gamma_s_th",
    "gamma_p_th_db",
    "gamma_s_th_db",
    "omega_h",
    "omega_g",
}
_KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS


class ConfigFileError(ValueError):
    """Malformed configuration file; carries the offending line number."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class LoadedConfig:
    """Parsed configuration plus the raw key/value echo for manifests."""

    system: SystemConfig
    noise_dbm: float
    raw: dict[str, str]


def _parse_lines(text: str) -> dict[str, tuple[str, int]]:
    values: dict[str, tuple[str, int]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigFileError(f"expected key=value, got {body!r}", line_no)
        key, value = (part.strip() for part in body.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigFileError(f"unknown key {key!r}", line_no)
        if key in values:
            raise ConfigFileError(
                f"duplicate key {key!r} (first set on line {values[key][1]})", line_no
            )
        if not value:
            raise ConfigFileError(f"empty value for {key!r}", line_no)
        values[key] = (value, line_no)
    return values


def _convert(key: str, value: str, line_no: int) -> int | float:
    try:
        if key in _INT_KEYS:
            return int(value)
        return float(value)
    except ValueError:
        kind = "an integer" if key in _INT_KEYS else "a number"
        raise ConfigFileError(f"{key} must be {kind}, got {value!r}", line_no) from None


def _threshold(values: dict[str, tuple[str, int]], base: str) -> float:
    db_key = base + "_db"
    if base in values and db_key in values:
        raise ConfigFileError(
            f"both {base} and {db_key} given; use one", values[db_key][1]
        )
    if base in values:
        return float(_convert(base, *values[base]))
    if db_key in values:
        return 10.0 ** (float(_convert(db_key, *values[db_key])) / 10.0)
    raise ConfigFileError(f"missing required key {base} (or {db_key})")


def parse_config_text(text: str) -> LoadedConfig:
    values = _parse_lines(text)

    def require(key: str) -> int | float:
        if key not in values:
            raise ConfigFileError(f"missing required key {key}")
        return _convert(key, *values[key])

    try:
        if "omega_h" in values or "omega_g" in values:
            for key in ("omega_h", "omega_g"):
                if key not in values:
                    raise ConfigFileError("omega overrides need both omega_h and omega_g")
            omega_h = float(require("omega_h"))
            omega_g = float(require("omega_g"))
        else:
            epsilon = float(require("epsilon"))
            d_p = float(require("d_p_m"))
            d_s = float(require("d_s_m"))
            for name, value in (("epsilon", epsilon), ("d_p_m", d_p), ("d_s_m", d_s)):
                if not value > 0:
                    raise ConfigFileError(f"{name} must be > 0, got {value}",
                                          values[name][1])
            omega_h = path_loss_rate(d_p, epsilon)
            omega_g = path_loss_rate(d_s, epsilon)

        system = SystemConfig(
            n_bs=int(require("n_bs")),
            m_pu=int(require("m_pu")),
            k_su=int(require("k_su")),
            omega_h=omega_h,
            omega_g=omega_g,
            gamma_p_th=_threshold(values, "gamma_p_th"),
            gamma_s_th=_threshold(values, "gamma_s_th"),
        )
    except ConfigurationError as exc:
        raise ConfigFileError(str(exc)) from exc
    return LoadedConfig(
        system=system,
        noise_dbm=float(require("noise_dbm")),
        raw={key: value for key, (value, _) in values.items()},
    )


def load_config(path: str | Path) -> LoadedConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigFileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_config_text(text)
