"""Command-line front end.

Reads a JSON run configuration, runs one subcommand and writes CSV tables
or ``key=value`` lines. Exit codes: 0 success, 1 configuration or usage
error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from . import formulary, solver, spectrum, sweep
from .constants import CONSTANTS
from .errors import ConfigError, IoError, MirrorPairError, ParseError, ValidationError
from .model import FreeFall, Harmonic, Mode, Scenario, make_scenario

THREADS_ENV = "MIRRORPAIR_THREADS"


# ---------------------------------------------------------------- config


@dataclass(frozen=True)
class SweepBlock:
    omega_min: float
    omega_max: float
    n_points: int
    scale: str = "linear"
    samples_per_period: int = sweep.DEFAULT_SAMPLES

    def check(self, path):
        if not 0 < self.omega_min < self.omega_max:
            raise ValidationError(f"{path}.omega_min", "need 0 < omega_min < omega_max")
        if self.n_points < 1:
            raise ValidationError(f"{path}.n_points", "must be >= 1")
        if self.scale not in ("linear", "log"):
            raise ValidationError(f"{path}.scale", "must be 'linear' or 'log'")
        if self.samples_per_period < 64:
            raise ValidationError(f"{path}.samples_per_period", "must be >= 64")

    def grid(self) -> np.ndarray:
        if self.n_points == 1:
            return np.array([self.omega_min])
        if self.scale == "log":
            return np.geomspace(self.omega_min, self.omega_max, self.n_points)
        return np.linspace(self.omega_min, self.omega_max, self.n_points)


@dataclass(frozen=True)
class TraceBlock:
    t_start: float
    t_end: float
    n_samples: int

    def check(self, path):
        if not self.t_end > self.t_start:
            raise ValidationError(f"{path}.t_end", "must exceed t_start")
        if self.n_samples < 2:
            raise ValidationError(f"{path}.n_samples", "must be >= 2")


@dataclass(frozen=True)
class SpectrumBlock:
    n_samples: int
    n_max: int
    trace_samples: int = 512
    resolution_bandwidth: Optional[float] = None

    def check(self, path):
        if self.n_samples < 2 or self.n_samples & (self.n_samples - 1):
            raise ValidationError(f"{path}.n_samples", "must be a power of two")
        if not 1 <= self.n_max < self.n_samples // 2:
            raise ValidationError(f"{path}.n_max", "must be in [1, n_samples/2)")
        if self.trace_samples < 64:
            raise ValidationError(f"{path}.trace_samples", "must be >= 64")
        if self.resolution_bandwidth is not None and not self.resolution_bandwidth > 0:
            raise ValidationError(f"{path}.resolution_bandwidth", "must be > 0")


@dataclass(frozen=True)
class GravityBlock:
    g: float
    L: float
    t_eval: float = 1.0

    def check(self, path):
        if not self.g >= 0:
            raise ValidationError(f"{path}.g", "must be >= 0")
        if not self.L > 0:
            raise ValidationError(f"{path}.L", "must be > 0")


@dataclass(frozen=True)
class LedgerBlock:
    n_photons: int
    M_frame: float
    epsilon: float = 0.0

    def check(self, path):
        if self.n_photons < 0:
            raise ValidationError(f"{path}.n_photons", "must be >= 0")
        if not self.M_frame > 0:
            raise ValidationError(f"{path}.M_frame", "must be > 0")
        if not 0 <= self.epsilon < 1:
            raise ValidationError(f"{path}.epsilon", "must be in [0, 1)")


_BLOCKS = {
    "sweep": SweepBlock,
    "trace": TraceBlock,
    "spectrum": SpectrumBlock,
    "gravity": GravityBlock,
    "ledger": LedgerBlock,
}
_INT_FIELDS = {"n_points", "samples_per_period", "n_samples", "n_max", "trace_samples", "n_photons"}


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario
    sweep: Optional[SweepBlock] = None
    trace: Optional[TraceBlock] = None
    spectrum: Optional[SpectrumBlock] = None
    gravity: Optional[GravityBlock] = None
    ledger: Optional[LedgerBlock] = None

    def block(self, name):
        value = getattr(self, name)
        if value is None:
            raise ValidationError(name, f"block required by the '{name}' command is missing")
        return value


def _number(path, value, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(path, f"expected a number, got {value!r}")
    if integer:
        if float(value) != int(value):
            raise ValidationError(path, f"expected an integer, got {value!r}")
        return int(value)
    if not math.isfinite(value):
        raise ValidationError(path, "must be finite")
    return float(value)


def _parse_block(name, raw):
    cls = _BLOCKS[name]
    if not isinstance(raw, dict):
        raise ValidationError(name, "must be a JSON object")
    names = {f.name for f in fields(cls)}
    unknown = set(raw) - names
    if unknown:
        raise ValidationError(f"{name}.{sorted(unknown)[0]}", "unknown key")
    kw = {}
    for key, value in raw.items():
        path = f"{name}.{key}"
        if key == "scale":
            kw[key] = value
        elif value is None and key == "resolution_bandwidth":
            kw[key] = None
        else:
            kw[key] = _number(path, value, integer=key in _INT_FIELDS)
    try:
        block = cls(**kw)
    except TypeError as exc:
        raise ValidationError(name, f"missing key ({exc})") from None
    block.check(name)
    return block


_SCENARIO_NUMERIC = ("L", "d0", "D", "omega0", "M")


def _parse_scenario(raw):
    if not isinstance(raw, dict):
        raise ValidationError("scenario", "must be a JSON object")
    for key in _SCENARIO_NUMERIC:
        if key not in raw:
            raise ValidationError(f"scenario.{key}", "missing")
        if _number(f"scenario.{key}", raw[key]) <= 0:
            raise ValidationError(f"scenario.{key}", f"must be > 0, got {raw[key]!r}")
    traj = raw.get("trajectory", {"kind": "static"})
    if not isinstance(traj, dict):
        raise ValidationError("scenario.trajectory", "must be a JSON object")
    for key, value in traj.items():
        if key != "kind":
            _number(f"scenario.trajectory.{key}", value)
    try:
        return make_scenario(raw)
    except ValueError as exc:
        raise ValidationError("scenario", str(exc)) from None


def parse_config(doc: Any) -> RunConfig:
    if not isinstance(doc, dict):
        raise ValidationError("<root>", "config must be a JSON object")
    unknown = set(doc) - {"scenario", *_BLOCKS}
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown key")
    if "scenario" not in doc:
        raise ValidationError("scenario", "missing")
    kw = {"scenario": _parse_scenario(doc["scenario"])}
    for name in _BLOCKS:
        if name in doc:
            kw[name] = _parse_block(name, doc[name])
    return RunConfig(**kw)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc.strerror or exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc.msg}", exc.lineno, exc.colno) from None
    return parse_config(doc)


# ---------------------------------------------------------------- output


@dataclass
class CsvTable:
    header: list[str]
    rows: list[list] = field(default_factory=list)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError(f"row length {len(row)} != header length {len(self.header)}")


def fmt(value) -> str:
    """Shortest round-trip decimal for floats; plain text otherwise."""
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _parse_cell(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def table_text(table: CsvTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.header)
    for row in table.rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(table: CsvTable, path) -> None:
    CsvTable(table.header, table.rows)  # re-check shape
    try:
        with open(path, "w", newline="") as fh:
            fh.write(table_text(table))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from None


def read_csv(path) -> CsvTable:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[_parse_cell(c) for c in row] for row in reader]
    return CsvTable(header, rows)


def kv_text(pairs) -> str:
    return "".join(f"{k}={fmt(v)}\n" for k, v in pairs)


# ---------------------------------------------------------------- commands


def _modes(args, cfg) -> list[Mode]:
    if args.mode is None:
        return [cfg.scenario.mode]
    if args.mode == "both":
        return [Mode.GEOMETRIC, Mode.LITERAL]
    return [Mode(args.mode)]


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise IoError(f"cannot write {out}: {exc.strerror or exc}") from None


def _mode_path(out: Optional[str], mode: Mode, several: bool) -> Optional[str]:
    if out is None or not several:
        return out
    p = Path(out)
    return str(p.with_name(f"{p.stem}_{mode.value}{p.suffix}"))


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(THREADS_ENV, f"not an integer: {env!r}") from None
    return 1


def sweep_table(points) -> CsvTable:
    return CsvTable(
        ["Omega", "tau_over_T", "pair_amp", "single_amp", "ratio"],
        [[p.Omega, p.tau_over_T, p.pair_amp, p.single_amp, p.ratio] for p in points],
    )


def cmd_sweep(args, cfg):
    block = cfg.block("sweep")
    modes = _modes(args, cfg)
    threads = _threads(args)
    for mode in modes:
        s = replace(cfg.scenario, mode=mode)
        points = sweep.sweep_signal_ratio(s, block.grid(), block.samples_per_period, threads=threads)
        text = table_text(sweep_table(points))
        if args.out is None and len(modes) > 1:
            text = f"# mode={mode.value}\n" + text
        _emit(text, _mode_path(args.out, mode, len(modes) > 1))
        bad = [p for p in points if not p.valid]
        for p in bad:
            print(f"warning: Omega={fmt(p.Omega)} skipped: {p.error}", file=sys.stderr)


def cmd_traverse(args, cfg):
    chunks = []
    for mode in _modes(args, cfg):
        s = replace(cfg.scenario, mode=mode)
        r = solver.traverse(s, args.t_emit)
        chunks.append(
            kv_text(
                [
                    ("mode", mode.value),
                    ("t_emit", args.t_emit),
                    ("t1", r.t1),
                    ("t2", r.t2),
                    ("t3", r.t3),
                    ("dt1", r.dt1),
                    ("dt2", r.dt2),
                    ("dt3", r.dt3),
                    ("phase", r.phase),
                    ("phase_perturbation", r.phase_perturbation),
                ]
            )
        )
    _emit("\n".join(chunks), args.out)


def cmd_trace(args, cfg):
    block = cfg.block("trace")
    modes = _modes(args, cfg)
    t = np.linspace(block.t_start, block.t_end, block.n_samples)
    for mode in modes:
        tr = solver.phase_trace(replace(cfg.scenario, mode=mode), t)
        table = CsvTable(["t_emit", "phase_perturbation"], [list(r) for r in zip(tr.t_emit, tr.phase_perturbation)])
        text = table_text(table)
        if args.out is None and len(modes) > 1:
            text = f"# mode={mode.value}\n" + text
        _emit(text, _mode_path(args.out, mode, len(modes) > 1))


def spectrum_table(s: Scenario, block: SpectrumBlock) -> tuple[CsvTable, float]:
    if not isinstance(s.trajectory, Harmonic):
        raise ValidationError("scenario.trajectory", "spectrum needs a harmonic trajectory")
    T = s.trajectory.period
    tr = solver.phase_trace(s, T * np.arange(block.trace_samples) / block.trace_samples)
    beta = spectrum.modulation_index(tr)
    field_ = spectrum.synthesize_baseband(tr, block.n_samples)
    lines = spectrum.line_spectrum(field_, block.n_max)
    weights = spectrum.bessel_line_weights(beta, block.n_max)
    rows = [[ln.n, ln.freq_offset, ln.power, w, abs(ln.power - w)] for ln, w in zip(lines, weights)]
    return CsvTable(["n", "freq_offset", "power", "bessel_weight", "deviation"], rows), beta


def cmd_spectrum(args, cfg):
    block = cfg.block("spectrum")
    modes = _modes(args, cfg)
    for mode in modes:
        s = replace(cfg.scenario, mode=mode)
        table, beta = spectrum_table(s, block)
        text = table_text(table)
        if args.out is None and len(modes) > 1:
            text = f"# mode={mode.value}\n" + text
        _emit(text, _mode_path(args.out, mode, len(modes) > 1))
        print(f"modulation_index={fmt(beta)}", file=sys.stderr)
        if block.resolution_bandwidth is not None:
            ratio = spectrum.line_spacing_over_resolution(s.trajectory.Omega, block.resolution_bandwidth)
            print(f"line_spacing_over_resolution={fmt(ratio)}", file=sys.stderr)


def gravity_report(s: Scenario, block: GravityBlock) -> list[tuple[str, Any]]:
    sh = formulary.gravity_shifts(s.omega0, block.g, s.D, block.L, s.M)
    dx = formulary.delay_displacement(s.D, s.omega0, s.M)
    lp = formulary.planck_length()
    falling = replace(s, trajectory=FreeFall(block.g), mode=Mode.GEOMETRIC)
    solved = solver.frequency_shift(falling, block.t_eval)
    return [
        ("omega0", s.omega0),
        ("g", block.g),
        ("D", s.D),
        ("L", block.L),
        ("M", s.M),
        ("d_omega_EP", sh.d_omega_EP),
        ("d_omega_displaced", sh.d_omega_displaced),
        ("d_omega_L", sh.d_omega_L),
        ("residual", sh.residual),
        ("d_omega_displaced_over_omega0", sh.d_omega_displaced / s.omega0),
        ("d_omega_displaced_via_energy", sh.d_omega_displaced_energy),
        ("solver_frequency_shift", solved),
        ("delay_displacement", dx),
        ("planck_length", lp),
        ("delay_over_planck", dx / lp),
        ("reported_displacement", formulary.REPORTED_HENE_DISPLACEMENT),
        ("reported_over_delay", formulary.REPORTED_HENE_DISPLACEMENT / dx),
    ]


def cmd_gravity(args, cfg):
    _emit(kv_text(gravity_report(cfg.scenario, cfg.block("gravity"))), args.out)


def cmd_ledger(args, cfg):
    b = cfg.block("ledger")
    s = cfg.scenario
    r = formulary.photon_stream_ledger(b.n_photons, s.omega0, s.D, s.M, b.M_frame, b.epsilon)
    pairs = [(f.name, getattr(r, f.name)) for f in fields(r)]
    pairs += [
        ("quantum_classical_gap", r.quantum_classical_gap),
        ("single_photon_rate", formulary.single_photon_rate(s.D)),
    ]
    _emit(kv_text(pairs), args.out)


def cmd_constants(args, cfg):
    pairs = [(f.name, getattr(CONSTANTS, f.name)) for f in fields(CONSTANTS)]
    pairs.append(("planck_length", formulary.planck_length()))
    _emit(kv_text(pairs), args.out)


# ---------------------------------------------------------------- entry


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mirrorpair", description="Photon transit through a moving rigid mirror pair.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, config=True):
        sp = sub.add_parser(name, help=help, description=help)
        if config:
            sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.set_defaults(func=func)
        return sp

    sp = add("traverse", cmd_traverse, "one crest traversal as key=value lines")
    sp.add_argument("--t-emit", type=float, default=0.0, help="emission time in s (default 0)")
    add("trace", cmd_trace, "phase perturbation vs emission time (CSV)")
    sp = add("sweep", cmd_sweep, "Signal Ratio vs oscillation frequency (CSV)")
    sp.add_argument("--threads", type=int, help=f"worker threads (fallback: ${THREADS_ENV}, default 1)")
    add("spectrum", cmd_spectrum, "sideband powers vs Bessel weights (CSV)")
    add("gravity", cmd_gravity, "gravitational frequency shifts and displacement numbers")
    add("ledger", cmd_ledger, "photon-stream centre-of-mass ledger")
    add("constants", cmd_constants, "physical constants in use", config=False)
    for name in ("traverse", "trace", "sweep", "spectrum"):
        sub.choices[name].add_argument(
            "--mode", choices=["geometric", "literal", "both"], help="second-leg equation (default: config, else geometric)"
        )
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config) if hasattr(args, "config") else None
        args.func(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (MirrorPairError, ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
