"""Sweep configuration: scenario presets plus key = value config files.

Config files are UTF-8 text, one ``key = value`` per line; blank lines and
lines starting with ``#`` are ignored.  Recognized keys:

  scenario, theta_min, theta_max, theta_steps, u_list, electron_spin,
  impurity_state, output

plus the optional extras used by fixed-phase scenarios:

  theta (fixed phase for family/coupling sweeps), vartheta_steps,
  phi_steps, u_min, u_max, u_steps, sweep (theta | family | coupling)

Every scenario ships with complete defaults, so a config may be as short as
``scenario = fig3b``; explicit keys override the preset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DomainError
from . import states

GRID_CAP = 10**7

_TWO_PI = 2.0 * math.pi

_KNOWN_KEYS = {
    "scenario", "theta_min", "theta_max", "theta_steps", "u_list",
    "electron_spin", "impurity_state", "output",
    "theta", "vartheta_steps", "phi_steps", "u_min", "u_max", "u_steps",
    "sweep",
}

_THETA_DEFAULTS = {
    "theta_min": "0", "theta_max": repr(_TWO_PI), "theta_steps": "2001",
    "u_list": "1,2,10", "electron_spin": "u", "sweep": "theta",
}
_FAMILY_DEFAULTS = {
    "theta": repr(math.pi), "vartheta_steps": "161", "phi_steps": "41",
    "electron_spin": "u", "sweep": "family", "impurity_state": "family2",
}

SCENARIO_PRESETS: dict[str, dict[str, str]] = {
    "fig2a": {**_THETA_DEFAULTS, "impurity_state": "ud"},
    "fig2b": {**_THETA_DEFAULTS, "impurity_state": "du"},
    "fig3a": {**_THETA_DEFAULTS, "impurity_state": "psi+"},
    "fig3b": {**_THETA_DEFAULTS, "impurity_state": "psi-"},
    "fig4": {**_FAMILY_DEFAULTS, "u_list": "10"},
    "fig5": {**_FAMILY_DEFAULTS, "u_list": "2"},
    "fig6": {**_THETA_DEFAULTS,
             "impurity_state": f"uu_dd theta={math.pi / 4!r} phi=0.0"},
    "fig7": {"sweep": "coupling", "theta": repr(math.pi), "u_min": "0.01",
             "u_max": "10", "u_steps": "1000", "electron_spin": "u",
             "impurity_state": "dd"},
    "custom": dict(_THETA_DEFAULTS),
}


class ConfigError(Exception):
    """Invalid sweep configuration."""


@dataclass(frozen=True)
class SweepConfig:
    """Fully resolved sweep plan: scenario id, grids, states and output."""

    scenario: str
    kind: str                       # theta | family | coupling
    electron_spin: str
    impurity_state: str
    output: str
    u_values: tuple[float, ...]
    theta_values: tuple[float, ...]          # sweep grid (theta kind)
    fixed_theta: float | None                # family / coupling kinds
    vartheta_values: tuple[float, ...]
    phi_values: tuple[float, ...]
    echo: tuple[tuple[str, str], ...]        # resolved settings for the header

    def __post_init__(self):
        points = len(self.u_values) * max(
            1, len(self.theta_values), len(self.vartheta_values) * len(self.phi_values)
        )
        if points == 0:
            raise ConfigError("empty parameter grid")
        if points > GRID_CAP:
            raise ConfigError(f"grid of {points} points exceeds cap {GRID_CAP}")


def _parse_float(raw: str, key: str) -> float:
    try:
        value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad number for {key}: {raw!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite")
    return value


def _parse_int(raw: str, key: str) -> int:
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"bad integer for {key}: {raw!r}") from exc
    if value <= 0:
        raise ConfigError(f"{key} must be positive")
    return value


def _parse_u_list(raw: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in raw.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"bad u_list: {raw!r}") from exc
    if not values:
        raise ConfigError("u_list is empty")
    if any(v < 0 or not math.isfinite(v) for v in values):
        raise ConfigError("u values must be finite and >= 0")
    return values


def theta_grid(theta_min: float, theta_max: float, steps: int) -> tuple[float, ...]:
    """Evenly spaced phases; a zero lower edge means the open interval (0, max]."""
    if theta_max <= theta_min:
        raise ConfigError("theta_max must exceed theta_min")
    if theta_min < 0:
        raise ConfigError("theta_min must be >= 0")
    if theta_min == 0.0:
        pts = theta_max * np.arange(1, steps + 1) / steps
    else:
        pts = np.linspace(theta_min, theta_max, steps)
    return tuple(float(t) for t in pts)


def _closed_grid(upper: float, steps: int) -> tuple[float, ...]:
    return tuple(float(x) for x in np.linspace(0.0, upper, steps))


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines into a mapping."""
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key = key.strip().lower()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        mapping[key] = value.strip()
    return mapping


def build_config(settings: dict[str, str]) -> SweepConfig:
    """Resolve a raw mapping against its scenario preset and validate."""
    scenario = settings.get("scenario", "custom").lower()
    if scenario not in SCENARIO_PRESETS:
        raise ConfigError(
            f"unknown scenario {scenario!r}; choose from {sorted(SCENARIO_PRESETS)}"
        )
    resolved = dict(SCENARIO_PRESETS[scenario])
    resolved.update({k: v for k, v in settings.items() if k != "scenario"})
    resolved.setdefault("output", f"{scenario}.csv")

    kind = resolved.get("sweep", "theta")
    if kind not in ("theta", "family", "coupling"):
        raise ConfigError(f"sweep must be theta, family or coupling, got {kind!r}")

    electron = resolved.get("electron_spin")
    impurity = resolved.get("impurity_state")
    if not electron or not impurity:
        raise ConfigError("electron_spin and impurity_state are required")
    if kind != "family":
        try:  # fail early on unparseable states
            states.incident_state(electron, impurity)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
    else:
        try:
            states.electron_state(electron)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    theta_values: tuple[float, ...] = ()
    vartheta_values: tuple[float, ...] = ()
    phi_values: tuple[float, ...] = ()
    fixed_theta: float | None = None

    if kind == "theta":
        steps = _parse_int(resolved.get("theta_steps", "2001"), "theta_steps")
        if steps > GRID_CAP:
            raise ConfigError("theta_steps exceeds the sanity cap")
        theta_values = theta_grid(
            _parse_float(resolved.get("theta_min", "0"), "theta_min"),
            _parse_float(resolved.get("theta_max", repr(_TWO_PI)), "theta_max"),
            steps,
        )
        u_values = _parse_u_list(resolved.get("u_list", "1,2,10"))
    elif kind == "family":
        fixed_theta = _parse_float(resolved.get("theta", repr(math.pi)), "theta")
        if fixed_theta <= 0:
            raise ConfigError("theta must be > 0")
        vsteps = _parse_int(resolved.get("vartheta_steps", "161"), "vartheta_steps")
        psteps = _parse_int(resolved.get("phi_steps", "41"), "phi_steps")
        vartheta_values = _closed_grid(_TWO_PI, vsteps)
        phi_values = _closed_grid(math.pi, psteps)
        u_values = _parse_u_list(resolved.get("u_list", "10"))
        family = resolved["impurity_state"].split()[0]
        if family not in ("family2", "uu_dd"):
            raise ConfigError(
                f"family sweeps need impurity_state family2 or uu_dd, got {family!r}"
            )
    else:  # coupling sweep
        fixed_theta = _parse_float(resolved.get("theta", repr(math.pi)), "theta")
        if fixed_theta <= 0:
            raise ConfigError("theta must be > 0")
        if "u_list" in resolved:
            u_values = _parse_u_list(resolved["u_list"])
        else:
            lo = _parse_float(resolved.get("u_min", "0.01"), "u_min")
            hi = _parse_float(resolved.get("u_max", "10"), "u_max")
            steps = _parse_int(resolved.get("u_steps", "1000"), "u_steps")
            if not 0 <= lo < hi:
                raise ConfigError("need 0 <= u_min < u_max")
            if steps > GRID_CAP:
                raise ConfigError("u_steps exceeds the sanity cap")
            u_values = tuple(float(x) for x in np.linspace(lo, hi, steps))

    echo_keys = sorted(set(resolved) | {"scenario"})
    echo = tuple(
        (k, resolved[k] if k != "scenario" else scenario) for k in echo_keys
    )
    return SweepConfig(
        scenario=scenario,
        kind=kind,
        electron_spin=electron,
        impurity_state=impurity,
        output=resolved["output"],
        u_values=u_values,
        theta_values=theta_values,
        fixed_theta=fixed_theta,
        vartheta_values=vartheta_values,
        phi_values=phi_values,
        echo=echo,
    )


def load_config(path: str | Path) -> SweepConfig:
    """Read and resolve a sweep configuration file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return build_config(parse_config_text(text))
