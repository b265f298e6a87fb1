"""Scenario and grid-file ingestion.

Scenario files are JSON objects with snake_case keys.  Unknown keys are
rejected: silently substituting a default for a mistyped physics parameter
is dangerous in a numerics tool.  All rates are expressed in units of the
reference radiative rate; the cooperativity is derived from g, N and the
cavity loss, and echoed back so published values can be matched by fixing
g^2 N.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .analysis import DgczGrid
from .errors import ScenarioError
from .model import SqueezeSpec, SystemParams

_SCENARIO_KEYS = {
    "name", "gamma_rad_1", "gamma_rad_2", "gamma_cross", "kappa_1",
    "kappa_2", "g_1", "g_2", "n_atoms", "alpha_1", "alpha_2",
    "squeeze_1", "squeeze_2", "omega_min", "omega_max", "omega_count",
    "theta", "theta_pump", "stationarity_tol",
}
_SQUEEZE_KEYS = {"r", "theta"}
_GRID_KEYS = {
    "name", "c_min", "c_max", "c_count", "omega1_min", "omega1_max",
    "omega1_count", "omega2_min", "omega2_max", "omega2_count",
    "gamma_cavity", "r2", "omega_min", "omega_max", "omega_count",
    "theta_count",
}


@dataclass(frozen=True)
class Scenario:
    name: str
    params: SystemParams
    omega_min: float = 1e-3
    omega_max: float = 10.0
    omega_count: int = 4000
    theta: float = 0.0
    theta_pump: float | None = None
    stationarity_tol: float | None = None
    raw: dict | None = None

    @property
    def theta_probe(self) -> float:
        return self.theta

    @property
    def pump_theta(self) -> float:
        return self.theta if self.theta_pump is None else self.theta_pump

    def omega_grid(self) -> np.ndarray:
        """Symmetric frequency grid excluding exact zero.

        omega_count is rounded down to an even total; each sign carries
        omega_count // 2 linearly spaced samples of |omega| in
        [omega_min, omega_max].
        """
        half = self.omega_count // 2
        pos = np.linspace(self.omega_min, self.omega_max, half)
        return np.concatenate([-pos[::-1], pos])


def _num(obj: dict, key: str, kind=float, required=True, default=None):
    if key not in obj:
        if required:
            raise ScenarioError(f"missing required key '{key}'")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ScenarioError(f"key '{key}' must be a number, got {val!r}")
    return kind(val)


def _amplitude(obj: dict, key: str) -> complex:
    if key not in obj:
        raise ScenarioError(f"missing required key '{key}'")
    val = obj[key]
    if isinstance(val, (int, float)) and not isinstance(val, bool):
        return complex(val)
    if (isinstance(val, list) and len(val) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                    for x in val)):
        return complex(val[0], val[1])
    raise ScenarioError(
        f"key '{key}' must be a number or a [re, im] pair, got {val!r}")


def _squeeze(obj: dict, key: str) -> SqueezeSpec:
    if key not in obj:
        return SqueezeSpec()
    val = obj[key]
    if not isinstance(val, dict):
        raise ScenarioError(f"key '{key}' must be an object with r, theta")
    unknown = set(val) - _SQUEEZE_KEYS
    if unknown:
        raise ScenarioError(f"unknown keys in '{key}': {sorted(unknown)}")
    return SqueezeSpec(r=_num(val, "r", required=False, default=0.0),
                       theta=_num(val, "theta", required=False, default=0.0))


def parse_scenario(obj: dict) -> Scenario:
    if not isinstance(obj, dict):
        raise ScenarioError("scenario file must contain a JSON object")
    unknown = set(obj) - _SCENARIO_KEYS
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")
    params = SystemParams(
        gamma_rad_1=_num(obj, "gamma_rad_1"),
        gamma_rad_2=_num(obj, "gamma_rad_2"),
        gamma_cross=_num(obj, "gamma_cross", required=False, default=0.0),
        kappa_1=_num(obj, "kappa_1"),
        kappa_2=_num(obj, "kappa_2"),
        g_1=_num(obj, "g_1"),
        g_2=_num(obj, "g_2"),
        n_atoms=_num(obj, "n_atoms", kind=int),
        alpha_1=_amplitude(obj, "alpha_1"),
        alpha_2=_amplitude(obj, "alpha_2"),
        squeeze_1=_squeeze(obj, "squeeze_1"),
        squeeze_2=_squeeze(obj, "squeeze_2"),
    )
    count = _num(obj, "omega_count", kind=int, required=False, default=4000)
    if count < 2:
        raise ScenarioError("omega_count must be at least 2")
    omega_min = _num(obj, "omega_min", required=False, default=1e-3)
    omega_max = _num(obj, "omega_max", required=False, default=10.0)
    if not (0.0 < omega_min < omega_max):
        raise ScenarioError("need 0 < omega_min < omega_max")
    name = obj.get("name", "scenario")
    if not isinstance(name, str):
        raise ScenarioError("key 'name' must be a string")
    return Scenario(
        name=name, params=params,
        omega_min=omega_min, omega_max=omega_max, omega_count=count,
        theta=_num(obj, "theta", required=False, default=0.0),
        theta_pump=_num(obj, "theta_pump", required=False, default=None),
        stationarity_tol=_num(obj, "stationarity_tol", required=False,
                              default=None),
        raw=obj,
    )


def parse_dgcz_grid(obj: dict) -> DgczGrid:
    if not isinstance(obj, dict):
        raise ScenarioError("grid file must contain a JSON object")
    unknown = set(obj) - _GRID_KEYS
    if unknown:
        raise ScenarioError(f"unknown grid keys: {sorted(unknown)}")
    for axis in ("c", "omega1", "omega2"):
        if _num(obj, f"{axis}_count", kind=int) < 1:
            raise ScenarioError(f"{axis}_count must be at least 1")
    omega_count = _num(obj, "omega_count", kind=int)
    if omega_count < 1:
        raise ScenarioError("omega_count must be at least 1")
    omega_min = _num(obj, "omega_min", required=False, default=1e-3)
    omega_max = _num(obj, "omega_max")
    half = max(1, omega_count // 2)
    pos = np.linspace(omega_min, omega_max, half)
    omegas = np.concatenate([-pos[::-1], pos])
    return DgczGrid(
        c_values=np.linspace(_num(obj, "c_min"), _num(obj, "c_max"),
                             _num(obj, "c_count", kind=int)),
        omega1_values=np.linspace(_num(obj, "omega1_min"),
                                  _num(obj, "omega1_max"),
                                  _num(obj, "omega1_count", kind=int)),
        omega2_values=np.linspace(_num(obj, "omega2_min"),
                                  _num(obj, "omega2_max"),
                                  _num(obj, "omega2_count", kind=int)),
        gamma_cavity=_num(obj, "gamma_cavity"),
        r2=_num(obj, "r2"),
        omegas=omegas,
        theta_count=_num(obj, "theta_count", kind=int, required=False,
                         default=64),
    )


def _load_json(path: Path) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read '{path}': {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"invalid JSON in '{path}' at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}")


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(_load_json(Path(path)))


def load_dgcz_grid(path: str | Path) -> DgczGrid:
    return parse_dgcz_grid(_load_json(Path(path)))


def scenario_hash(obj: dict) -> str:
    """Content hash of a scenario object, stable under key reordering."""
    canon = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def bundled_scenario_names() -> list[str]:
    root = resources.files("eitnoise").joinpath("scenarios")
    return sorted(p.name[:-5] for p in root.iterdir()
                  if p.name.endswith(".json"))


def resolve_scenario_path(spec: str) -> Path:
    """Resolve a CLI --scenario argument: an existing file path wins,
    otherwise the name of a bundled scenario (with or without .json)."""
    path = Path(spec)
    if path.exists():
        return path
    name = spec[:-5] if spec.endswith(".json") else spec
    root = resources.files("eitnoise").joinpath("scenarios")
    candidate = root.joinpath(f"{name}.json")
    if candidate.is_file():
        return Path(str(candidate))
    raise ScenarioError(
        f"scenario '{spec}' is neither a file nor a bundled scenario "
        f"(bundled: {', '.join(bundled_scenario_names())})")
