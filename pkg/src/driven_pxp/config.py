"""Run configuration: strict parsing, per-scenario defaults, validation."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields

from .basis import L_MAX, lucas_number, fibonacci_number


class ConfigError(ValueError):
    """Invalid or unknown configuration content (CLI exit code 2)."""


@dataclass
class PhysicsConfig:
    L: int = 16
    bc: str = "periodic"
    omega: float = 1.0
    tau: float = 2 * math.pi / 1.3
    epsilon: float = -0.45
    gamma: float = 1.0
    theta: float = 0.15


@dataclass
class RuntimeConfig:
    n_cycles: int = 150
    samples_per_cycle: int = 33
    backend: str = "dense_eigen"
    dt: float | None = None
    w: float | None = None
    delta_mf: float = 0.09
    t_star: float | None = None
    quad_n: int = 96
    snapshot_stride: int = 0
    correlation_stride: int = 10
    start_site: int = 0
    echo_sign: float = -1.0
    gamma_grid: list[float] | None = None
    tau_grid: list[float] | None = None
    eps_grid: list[float] | None = None
    n0_grid: list[float] | None = None
    k_points: int = 181
    check_halving: bool = False


@dataclass
class OutputConfig:
    directory: str | None = None
    formats: list[str] = field(default_factory=lambda: ["csv", "json"])


@dataclass
class RunConfig:
    scenario: str
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    runtime: RuntimeConfig = field(default_factory=RuntimeConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    seed: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def _build_section(cls, data: dict, path: str):
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(
            f"unknown field(s) {sorted(unknown)} in {path}; known: {sorted(known)}")
    return cls(**data)


# scenario-specific defaults merged under the user's config (user wins)
SCENARIO_DEFAULTS: dict[str, dict] = {
    "fig1b-micromotion": {"runtime": {"n_cycles": 30, "samples_per_cycle": 33}},
    "fig2-entanglement": {"runtime": {"n_cycles": 150, "correlation_stride": 10}},
    "fig3a-domainwall": {},
    "fig3c-phase-diagram": {},
    "figS2-gamma-sweep": {"runtime": {"n_cycles": 150}},
    "figS3-distances": {"runtime": {"n_cycles": 150}},
    "fig4-hardware": {
        "physics": {"L": 12, "epsilon": 0.45, "gamma": -0.9, "theta": -0.45},
        "runtime": {"n_cycles": 30},
    },
    "figS4-coherence-sweep": {"physics": {"L": 16}},
    "effective-report": {"physics": {"L": 8}},
}

SCENARIOS = tuple(SCENARIO_DEFAULTS)


def _deep_merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = value
    return out


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    known_top = {"scenario", "physics", "runtime", "output", "seed"}
    unknown = set(data) - known_top
    if unknown:
        raise ConfigError(
            f"unknown top-level field(s) {sorted(unknown)}; known: {sorted(known_top)}")
    scenario = data.get("scenario")
    if not scenario:
        raise ConfigError("config must name a scenario")
    if scenario not in SCENARIO_DEFAULTS:
        raise ConfigError(
            f"unknown scenario {scenario!r}; available: {', '.join(SCENARIOS)}")
    merged = _deep_merge(SCENARIO_DEFAULTS[scenario], {
        k: v for k, v in data.items() if k in ("physics", "runtime", "output")})
    cfg = RunConfig(
        scenario=scenario,
        physics=_build_section(PhysicsConfig, merged.get("physics", {}), "physics"),
        runtime=_build_section(RuntimeConfig, merged.get("runtime", {}), "runtime"),
        output=_build_section(OutputConfig, merged.get("output", {}), "output"),
        seed=int(data.get("seed", 0)),
    )
    _check_physics(cfg.physics)
    return cfg


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    return config_from_dict(data)


def _check_physics(p: PhysicsConfig) -> None:
    if not 2 <= p.L <= L_MAX:
        raise ConfigError(f"physics.L must be in [2, {L_MAX}], got {p.L}")
    if p.bc not in ("periodic", "open"):
        raise ConfigError(f"physics.bc must be 'periodic' or 'open', got {p.bc!r}")
    if p.omega <= 0 or p.tau <= 0:
        raise ConfigError("physics.omega and physics.tau must be positive")


def validate_report(cfg: RunConfig) -> dict:
    """Parsed values, derived quantities and warnings, without running."""
    from .effective import closed_form_coefficients

    p = cfg.physics
    dim = lucas_number(p.L) if p.bc == "periodic" else fibonacci_number(p.L + 2)
    warnings_list = []
    if p.omega * p.tau / 4 > 1.0:
        warnings_list.append(
            f"Omega*tau/4 = {p.omega * p.tau / 4:.3f} > 1: closed-form "
            "coefficients outside their validity range")
    dense_bytes = 16 * dim * dim
    backend = cfg.runtime.backend
    if dim > 20000 and backend == "dense_eigen":
        warnings_list.append(
            f"dim = {dim}: dense eigendecomposition infeasible, switch "
            "runtime.backend to 'krylov'")
        backend = "krylov"
    import warnings as _w
    with _w.catch_warnings():
        _w.simplefilter("ignore")
        coeffs = closed_form_coefficients(p.omega, p.tau, p.epsilon, p.gamma, p.theta)
    report = {
        "scenario": cfg.scenario,
        "config": cfg.to_dict(),
        "derived": {
            "dim": dim,
            "predicted_coefficients": {"J": coeffs.J, "h": coeffs.h, "g": coeffs.g},
            "dense_matrix_bytes": dense_bytes,
            "recommended_backend": backend,
        },
        "warnings": warnings_list,
    }
    if cfg.scenario == "figS2-gamma-sweep" and cfg.runtime.gamma_grid:
        report["derived"]["gamma_points"] = [
            {"gamma": g,
             "J": closed_form_coefficients(p.omega, p.tau, p.epsilon, g, p.theta).J}
            for g in cfg.runtime.gamma_grid
        ]
    return report
