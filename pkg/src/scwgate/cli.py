"""Command-line entry point: plain-text config parsing, experiment dispatch,
and atomic CSV output.

Boundary units follow lab conventions (MHz, mK, ms, um) and are converted
once at parse time; everything downstream works in rad/us, K, us, um.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .experiments import QuadratureRule, SweepSpec, bell_fidelity, sweep
from .lindblad import EvolutionConfig
from .model import PositionNoise, SystemParams
from .protocols import ProtocolKind, coherent_demo, cz_truth_table, robustness_error

__all__ = [
    "ParseError",
    "ValidationError",
    "RunConfig",
    "parse_config",
    "run_command",
    "main",
]

COMMANDS = (
    "truth-table",
    "bell-fidelity",
    "sweep-q",
    "sweep-t",
    "sweep-sigma",
    "robustness",
    "coherent-demo",
)

TWO_PI = 2.0 * math.pi


class ParseError(ValueError):
    """Config text that cannot be read; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(ValueError):
    """A config key with an out-of-domain or unknown value."""

    def __init__(self, key: str, message: str = ""):
        super().__init__(f"{key}: {message}" if message else key)
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    """Validated run settings in boundary units."""

    omega_MHz: float = 1.0
    g_MHz: float = math.sqrt(3.0) / 2.0
    omega_c_MHz: float = 5037.0
    q_factor: float = 2.0e5
    temperature_mK: float = 50.0
    tau1_ms: float = 0.82
    tau2_ms: float = 1.97
    n_max: int = 5
    slope_MHz_per_um: float = 0.12
    sigma_um: float = 0.27
    steps_per_us: int = 20000
    record_every: int = 200
    positivity_check: bool = True
    self_test: bool = False
    quadrature_nodes: int = 11
    workers: int = 1
    demo_points: int = 201
    output_dir: str = "out"

    def system(self) -> SystemParams:
        return SystemParams(
            omega_laser=TWO_PI * self.omega_MHz,
            g=TWO_PI * self.g_MHz,
            omega_c=TWO_PI * self.omega_c_MHz,
            q_factor=self.q_factor,
            temperature=self.temperature_mK / 1000.0,
            tau1=self.tau1_ms * 1000.0,
            tau2=self.tau2_ms * 1000.0,
            n_max=self.n_max,
        )

    def noise(self) -> PositionNoise:
        return PositionNoise(slope=TWO_PI * self.slope_MHz_per_um, sigma=self.sigma_um)

    def solver(self) -> EvolutionConfig:
        return EvolutionConfig(
            steps_per_us=self.steps_per_us,
            record_every=self.record_every,
            positivity_check=self.positivity_check,
            self_test=self.self_test,
        )


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


# key -> (python type, domain predicate, domain description)
_KEY_SPECS: dict[str, tuple[type, object, str]] = {
    "omega_MHz": (float, lambda v: v > 0, "> 0"),
    "g_MHz": (float, lambda v: v > 0, "> 0"),
    "omega_c_MHz": (float, lambda v: v > 0, "> 0"),
    "q_factor": (float, lambda v: v >= 1, ">= 1"),
    "temperature_mK": (float, lambda v: v >= 0, ">= 0"),
    "tau1_ms": (float, lambda v: v > 0, "> 0"),
    "tau2_ms": (float, lambda v: v > 0, "> 0"),
    "n_max": (int, lambda v: v >= 1, ">= 1"),
    "slope_MHz_per_um": (float, lambda v: v >= 0, ">= 0"),
    "sigma_um": (float, lambda v: v >= 0, ">= 0"),
    "steps_per_us": (int, lambda v: v >= 1, ">= 1"),
    "record_every": (int, lambda v: v >= 1, ">= 1"),
    "positivity_check": (bool, lambda v: True, ""),
    "self_test": (bool, lambda v: True, ""),
    "quadrature_nodes": (int, lambda v: v >= 1, ">= 1"),
    "workers": (int, lambda v: v >= 1, ">= 1"),
    "demo_points": (int, lambda v: v >= 2, ">= 2"),
    "output_dir": (str, lambda v: bool(v), "non-empty"),
}

assert set(_KEY_SPECS) == {f.name for f in fields(RunConfig)}


def _convert(key: str, raw: str, line: int | None = None) -> object:
    kind, check, domain = _KEY_SPECS[key]
    try:
        if kind is bool:
            value = _parse_bool(raw)
        elif kind is int:
            value = int(raw.strip())
        elif kind is float:
            value = float(raw.strip())
        else:
            value = raw.strip()
    except ValueError as exc:
        if line is not None:
            raise ParseError(line, f"cannot parse value for {key}: {exc}") from exc
        raise ValidationError(key, str(exc)) from exc
    if not check(value):
        raise ValidationError(key, f"value {value!r} violates {domain}")
    return value


def parse_config(text: str) -> RunConfig:
    """Parse ``key = value`` lines with ``#`` comments; unknown keys and
    duplicates are rejected so typos cannot silently fall back to defaults."""
    values: dict[str, object] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(lineno, f"expected 'key = value', got {raw_line.strip()!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in _KEY_SPECS:
            raise ValidationError(key, f"unknown key (line {lineno})")
        if key in values:
            raise ValidationError(key, f"duplicate key (line {lineno})")
        values[key] = _convert(key, raw, lineno)
    return RunConfig(**values)


def _apply_overrides(cfg: RunConfig, overrides: dict[str, str]) -> RunConfig:
    changes = {}
    for key, raw in overrides.items():
        if key not in _KEY_SPECS:
            raise ValidationError(key, "unknown key")
        changes[key] = _convert(key, raw)
    return replace(cfg, **changes) if changes else cfg


def _format_cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(path: Path, header: tuple[str, ...], rows: list[tuple]) -> None:
    """Write to a temp file in the target directory, then atomically rename,
    so concurrent commands never interleave within one file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_format_cell(v) for v in row) + "\n")
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


_STATE_LABELS = ("0m0a", "0m1a", "1m0a", "1m1a")


def _cmd_truth_table(cfg: RunConfig, out: Path) -> str:
    table = cz_truth_table(cfg.system(), coherent_only=True)
    rows = [
        (label, pop, phase)
        for label, (pop, phase) in zip(_STATE_LABELS, table)
    ]
    write_csv(out / "truth-table.csv", ("state", "population", "phase_rad"), rows)
    phases = ", ".join(f"{phase:.6f}" for _, _, phase in rows)
    return f"phases (rad) = {phases}"


def _cmd_bell_fidelity(cfg: RunConfig, out: Path) -> str:
    res = bell_fidelity(cfg.system(), cfg.solver())
    rows = [(cfg.q_factor, cfg.temperature_mK, res.fidelity, 1.0 - res.fidelity)]
    write_csv(
        out / "bell-fidelity.csv",
        ("q_factor", "temperature_mK", "fidelity", "infidelity"),
        rows,
    )
    return f"F = {res.fidelity:.3f}"


def _cmd_sweep_q(cfg: RunConfig, out: Path) -> str:
    values = np.logspace(np.log10(1.0e5), np.log10(2.0e6), 25)
    spec = SweepSpec("Q", values, cfg.system())
    result = sweep(spec, cfg.solver(), workers=cfg.workers)
    write_csv(out / "sweep-q.csv", result.header, result.rows)
    return f"rows = {len(result.rows)}"


def _cmd_sweep_t(cfg: RunConfig, out: Path) -> str:
    values_k = np.linspace(0.010, 0.100, 20)
    spec = SweepSpec("T", values_k, cfg.system())
    result = sweep(spec, cfg.solver(), workers=cfg.workers)
    rows = [(v * 1000.0, *rest) for v, *rest in result.rows]
    write_csv(
        out / "sweep-t.csv",
        ("temperature_mK", "fidelity", "infidelity", "status"),
        rows,
    )
    return f"rows = {len(rows)}"


def _cmd_sweep_sigma(cfg: RunConfig, out: Path) -> str:
    values = np.linspace(0.0, 1.0, 21)
    spec = SweepSpec("sigma", values, cfg.system(), noise=cfg.noise())
    result = sweep(spec, cfg.solver(), nodes=cfg.quadrature_nodes, workers=cfg.workers)
    write_csv(out / "sweep-sigma.csv", result.header, result.rows)
    return f"rows = {len(result.rows)}"


def _cmd_robustness(cfg: RunConfig, out: Path, protocol: str, epsilon: float | None) -> str:
    params = cfg.system()
    if epsilon is not None:
        values = np.array([epsilon])
    else:
        values = np.linspace(-0.2, 0.2, 41)
    rows = []
    for eps in values:
        err_one = robustness_error(ProtocolKind.ONE_STEP, float(eps), params)
        err_three = robustness_error(ProtocolKind.THREE_STEP, float(eps), params)
        rows.append((float(eps), err_one, err_three, "ok"))
    write_csv(
        out / "robustness.csv",
        ("epsilon", "one_step_error", "three_step_error", "status"),
        rows,
    )
    if epsilon is not None:
        picked = rows[0][1] if protocol == "one-step" else rows[0][2]
        return f"error = {picked:.6f} ({protocol}, epsilon={epsilon:g})"
    return f"rows = {len(rows)}"


def _cmd_coherent_demo(cfg: RunConfig, out: Path) -> str:
    ts = coherent_demo(cfg.system(), n_points=cfg.demo_points)
    header = ("t", "pop_11", "pop_1r1", "pop_0r2", "phase_11", "phase_1r1", "phase_0r2")
    rows = [
        tuple(float(col[i]) for col in (ts.times, *(ts.columns[k] for k in header[1:])))
        for i in range(ts.times.size)
    ]
    write_csv(out / "coherent-demo.csv", header, rows)
    return f"rows = {len(rows)}"


def run_command(
    name: str,
    cfg: RunConfig,
    flags: dict[str, str] | None = None,
    protocol: str = "one-step",
    epsilon: float | None = None,
) -> int:
    """Execute one experiment command, write its CSV, print a one-line
    summary. Returns 0 on success, 1 on config errors, 2 on solver errors."""
    try:
        if name not in COMMANDS:
            raise ValidationError("command", f"unknown command {name!r}")
        cfg = _apply_overrides(cfg, flags or {})
        out = Path(cfg.output_dir)
        if name == "truth-table":
            summary = _cmd_truth_table(cfg, out)
        elif name == "bell-fidelity":
            summary = _cmd_bell_fidelity(cfg, out)
        elif name == "sweep-q":
            summary = _cmd_sweep_q(cfg, out)
        elif name == "sweep-t":
            summary = _cmd_sweep_t(cfg, out)
        elif name == "sweep-sigma":
            summary = _cmd_sweep_sigma(cfg, out)
        elif name == "robustness":
            summary = _cmd_robustness(cfg, out, protocol, epsilon)
        else:
            summary = _cmd_coherent_demo(cfg, out)
    except (ParseError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - solver / IO failures
        print(f"solver error: {exc}", file=sys.stderr)
        return 2
    print(summary)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="scwgate",
        description="Atom-photon controlled-Z gate simulator (coplanar-waveguide cavity).",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, help="key = value config file")
    parser.add_argument("--out", help="output directory for CSV files")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one config key (repeatable)",
    )
    parser.add_argument("--nodes", type=int, help="Gauss-Hermite node count")
    parser.add_argument("--steps", type=int, help="RK4 steps per microsecond")
    parser.add_argument(
        "--protocol",
        choices=[k.value for k in ProtocolKind],
        default="one-step",
        help="protocol for single-point robustness",
    )
    parser.add_argument("--epsilon", type=float, help="single relative coupling error")
    args = parser.parse_args(argv)

    try:
        text = args.config.read_text(encoding="utf-8") if args.config else ""
        cfg = parse_config(text)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    overrides: dict[str, str] = {}
    for item in args.set:
        if "=" not in item:
            print(f"error: --set expects KEY=VALUE, got {item!r}", file=sys.stderr)
            return 1
        key, _, value = item.partition("=")
        overrides[key.strip()] = value.strip()
    if args.out:
        overrides["output_dir"] = args.out
    if args.nodes is not None:
        overrides["quadrature_nodes"] = str(args.nodes)
    if args.steps is not None:
        overrides["steps_per_us"] = str(args.steps)

    return run_command(
        args.command, cfg, overrides, protocol=args.protocol, epsilon=args.epsilon
    )


if __name__ == "__main__":
    raise SystemExit(main())
