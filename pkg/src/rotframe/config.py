"""JSON problem descriptions -> validated model objects.

A configuration names the spectral data and, optionally, the frame rate,
the state of interest, and grid overrides:

    {
      "n_channels": 2,
      "omega": 0.7,
      "nu": 0,
      "states": [
        {"energy": -0.81, "gammas": [0.9, -0.5]},
        {"energy": -2.25, "gammas": [0.7, 1.3], "kappas": [1.5, 1.5]}
      ],
      "grid": {"dx_target": 0.008}
    }

`grid` may instead carry explicit x_min / x_max / n_points.  Validation
walks the whole document and reports every violation at once, each tagged
with its field path (e.g. "states[1].gammas[0]"), so a config never has to
be fixed one error per run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .bargmann import BoundStateSpec, SpectralData
from .errors import ConfigError, QuadratureConfigError
from .grids import Grid

__all__ = ["ProblemConfig", "parse_config", "load_config", "config_to_dict"]

_TOP_KEYS = {"n_channels", "omega", "nu", "states", "grid"}
_STATE_KEYS = {"energy", "gammas", "kappas"}
_GRID_KEYS = {"dx_target", "x_min", "x_max", "n_points"}

DEFAULT_DX_TARGET = 0.008


def _is_num(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


@dataclass(frozen=True)
class ProblemConfig:
    """Validated problem description ready to build model objects from."""

    spec: SpectralData
    omega: float | None = None
    nu: int = 0
    grid: Grid | None = None  # explicit grid; None defers to default_grid
    dx_target: float = DEFAULT_DX_TARGET

    def require_omega(self) -> float:
        if self.omega is None:
            raise ConfigError([("omega", "this command needs a frame rate")])
        return self.omega


def parse_config(data) -> ProblemConfig:
    """Validate a decoded JSON document, collecting every violation."""
    bad: list[tuple[str, str]] = []
    if not isinstance(data, dict):
        raise ConfigError([("", "top level must be a JSON object")])

    for key in sorted(set(data) - _TOP_KEYS):
        bad.append((key, "unknown key"))

    n_channels = data.get("n_channels")
    if not isinstance(n_channels, int) or isinstance(n_channels, bool) or n_channels < 1:
        bad.append(("n_channels", "required positive integer"))
        n_channels = None

    omega = data.get("omega")
    if omega is not None and (not _is_num(omega) or omega <= 0):
        bad.append(("omega", "must be a positive number"))
        omega = None

    states_raw = data.get("states")
    states: list[BoundStateSpec] = []
    if not isinstance(states_raw, list):
        bad.append(("states", "required list of bound-state entries"))
        states_raw = []
    for i, entry in enumerate(states_raw):
        path = f"states[{i}]"
        if not isinstance(entry, dict):
            bad.append((path, "must be an object"))
            continue
        for key in sorted(set(entry) - _STATE_KEYS):
            bad.append((f"{path}.{key}", "unknown key"))
        energy = entry.get("energy")
        if not _is_num(energy) or energy >= 0:
            bad.append((f"{path}.energy", "required negative number"))
            energy = None
        gammas = entry.get("gammas")
        if not isinstance(gammas, list) or not gammas:
            bad.append((f"{path}.gammas", "required non-empty list"))
            gammas = None
        else:
            for k, g in enumerate(gammas):
                if not _is_num(g):
                    bad.append((f"{path}.gammas[{k}]", "must be a number"))
                    gammas = None
                    break
            if gammas is not None and n_channels is not None and len(gammas) != n_channels:
                bad.append(
                    (f"{path}.gammas", f"need {n_channels} weights, got {len(gammas)}")
                )
                gammas = None
            if gammas is not None and all(g == 0 for g in gammas):
                bad.append((f"{path}.gammas", "weights cannot all vanish"))
                gammas = None
        kappas = entry.get("kappas")
        if kappas is not None:
            if not isinstance(kappas, list) or (
                gammas is not None and len(kappas) != len(gammas)
            ):
                bad.append((f"{path}.kappas", "must match gammas in length"))
                kappas = None
            else:
                for k, kap in enumerate(kappas):
                    if not _is_num(kap) or kap <= 0:
                        bad.append((f"{path}.kappas[{k}]", "must be positive"))
                        kappas = None
                        break
        if energy is not None and gammas is not None:
            try:
                states.append(
                    BoundStateSpec(
                        energy=float(energy),
                        gammas=tuple(float(g) for g in gammas),
                        kappas=None if kappas is None else tuple(map(float, kappas)),
                    )
                )
            except ValueError as exc:
                bad.append((path, str(exc)))

    energies = [s.energy for s in states]
    if len(set(energies)) != len(energies):
        bad.append(("states", "energies must be distinct"))

    nu = data.get("nu", 0)
    if not isinstance(nu, int) or isinstance(nu, bool) or nu < 0:
        bad.append(("nu", "must be a non-negative integer"))
        nu = 0
    elif states_raw and nu >= len(states_raw):
        bad.append(("nu", f"state index {nu} out of range for {len(states_raw)} states"))
        nu = 0

    grid = None
    dx_target = DEFAULT_DX_TARGET
    grid_raw = data.get("grid")
    if grid_raw is not None:
        if not isinstance(grid_raw, dict):
            bad.append(("grid", "must be an object"))
        else:
            for key in sorted(set(grid_raw) - _GRID_KEYS):
                bad.append((f"grid.{key}", "unknown key"))
            explicit = {"x_min", "x_max", "n_points"} & set(grid_raw)
            if explicit and explicit != {"x_min", "x_max", "n_points"}:
                bad.append(("grid", "explicit grids need x_min, x_max and n_points"))
            elif explicit:
                try:
                    grid = Grid(
                        float(grid_raw["x_min"]),
                        float(grid_raw["x_max"]),
                        int(grid_raw["n_points"]),
                    )
                except (TypeError, ValueError, QuadratureConfigError) as exc:
                    bad.append(("grid", str(exc)))
            if "dx_target" in grid_raw:
                dx = grid_raw["dx_target"]
                if not _is_num(dx) or dx <= 0:
                    bad.append(("grid.dx_target", "must be a positive number"))
                else:
                    dx_target = float(dx)

    if bad:
        raise ConfigError(sorted(bad))

    spec = SpectralData(n_channels, states)
    return ProblemConfig(
        spec=spec,
        omega=None if omega is None else float(omega),
        nu=nu,
        grid=grid,
        dx_target=dx_target,
    )


def load_config(path) -> ProblemConfig:
    """Read and validate a JSON config file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError([(str(path), f"cannot read: {exc}")]) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([(str(path), f"invalid JSON: {exc}")]) from exc
    return parse_config(data)


def config_to_dict(cfg: ProblemConfig) -> dict:
    """Round-trippable plain-dict form of a validated config."""
    out: dict = {
        "n_channels": cfg.spec.n_channels,
        "states": [
            {
                "energy": s.energy,
                "gammas": list(s.gammas),
                "kappas": list(s.kappas),
            }
            for s in cfg.spec.states
        ],
        "nu": cfg.nu,
    }
    if cfg.omega is not None:
        out["omega"] = cfg.omega
    if cfg.grid is not None:
        out["grid"] = {
            "x_min": cfg.grid.x_min,
            "x_max": cfg.grid.x_max,
            "n_points": cfg.grid.n_points,
        }
    elif cfg.dx_target != DEFAULT_DX_TARGET:
        out["grid"] = {"dx_target": cfg.dx_target}
    return out
