"""Command-line entry point: ``decorr sweep | verify | transitions``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__
from .channels import ChannelKind, dilate_and_evolve_global, make_channel
from .dynamics import SweepConfig, SweepError, find_transition, sweep, uniform_p_grid
from .measures import MEASURE_NAMES, OptimizerSettings
from .oracles import BipartitionLabel, closed_form_matrix
from .states import (
    BellDiagonalParams,
    GeneralTwoQubitParams,
    bell_diagonal_state,
    random_bell_diagonal,
    werner_params,
)
from .tensor import HERMITIAN_TOL, POSITIVITY_TOL, TRACE_TOL, InvalidStateError, partial_trace

log = logging.getLogger("decorr")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_STATE = 2
EXIT_ORACLE = 3

CSV_COLUMNS = ("p",) + MEASURE_NAMES
VERIFY_TOL = 1e-12


class ConfigError(ValueError):
    pass


def format_number(x: float) -> str:
    if math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def parse_initial(desc):
    """Scalar -> Werner alpha, 3-vector -> Bell-diagonal, 4x4 -> Pauli coefficients."""
    if isinstance(desc, dict):
        if len(desc) != 1:
            raise ConfigError(f"initial must have exactly one key, got {sorted(desc)}")
        key, value = next(iter(desc.items()))
        key = key.lower()
        if key in ("werner", "alpha"):
            return werner_params(float(value))
        if key in ("bell_diagonal", "c"):
            return parse_initial(value)
        if key in ("pauli", "general"):
            return GeneralTwoQubitParams.from_array(value)
        raise ConfigError(f"unknown initial-state key {key!r}")
    if isinstance(desc, bool):
        raise ConfigError("initial state must be a number, a 3-vector or a 4x4 matrix")
    if isinstance(desc, (int, float)):
        return werner_params(float(desc))
    arr = np.asarray(desc, dtype=float)
    if arr.shape == (3,):
        return BellDiagonalParams(*map(float, arr))
    if arr.shape == (4, 4):
        return GeneralTwoQubitParams.from_array(arr)
    raise ConfigError(f"cannot interpret initial state of shape {arr.shape}")


def load_sweep_config(path: Path, settings: OptimizerSettings) -> tuple[SweepConfig, Path, dict]:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    missing = {"channel", "initial"} - set(raw)
    if missing:
        raise ConfigError(f"config is missing {sorted(missing)}")
    try:
        config = SweepConfig(
            channel_kind=ChannelKind.parse(raw["channel"]),
            initial=parse_initial(raw["initial"]),
            p_grid=uniform_p_grid(int(raw.get("p_points", 101))),
            partitions=tuple(raw.get("partitions", [l.value for l in BipartitionLabel])),
            measures=tuple(raw.get("measures", MEASURE_NAMES)),
            optimizer=settings,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidStateError):
            raise
        raise ConfigError(str(exc)) from exc
    out_dir = Path(raw.get("out_dir", "out"))
    return config, out_dir, raw


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def trajectory_csv(trajectory) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for p, report in trajectory.rows:
        row = report.as_row()
        writer.writerow([format_number(p)] + [format_number(row[name]) for name in MEASURE_NAMES])
    return buf.getvalue()


def _settings_from_args(args) -> OptimizerSettings:
    return OptimizerSettings(
        grid_phi=args.grid_phi,
        grid_theta=args.grid_theta,
        two_side_grid_phi=args.two_side_grid_phi,
        two_side_grid_theta=args.two_side_grid_theta,
        maxiter=args.maxiter,
        fatol=args.fatol,
        xatol=args.xatol,
    )


def cmd_sweep(args) -> int:
    settings = _settings_from_args(args)
    try:
        config, out_dir, raw = load_sweep_config(args.config, settings)
    except InvalidStateError as exc:
        print(f"error: invalid initial state: {exc}", file=sys.stderr)
        return EXIT_STATE
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.out_dir is not None:
        out_dir = Path(args.out_dir)

    start = time.perf_counter()
    try:
        trajectories = sweep(config)
    except (SweepError, InvalidStateError) as exc:
        print(f"error: state validation failed {exc}", file=sys.stderr)
        return EXIT_STATE
    files = {}
    for traj in trajectories:
        path = out_dir / f"{traj.partition.value}.csv"
        _atomic_write(path, trajectory_csv(traj))
        files[traj.partition.value] = str(path)
    manifest = {
        "version": __version__,
        "config": raw,
        "optimizer": settings.__dict__,
        "tolerances": {
            "hermiticity": HERMITIAN_TOL,
            "trace": TRACE_TOL,
            "positivity": POSITIVITY_TOL,
        },
        "duration_seconds": time.perf_counter() - start,
        "files": files,
    }
    _atomic_write(out_dir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(json.dumps({"files": files}, sort_keys=True))
    return EXIT_OK


def _parse_fault(text: str | None):
    if not text:
        return None
    try:
        channel, part = text.split(":")
        return ChannelKind.parse(channel), BipartitionLabel.parse(part)
    except ValueError as exc:
        raise ConfigError(f"--inject-fault expects CHANNEL:PARTITION, got {text!r}") from exc


def oracle_deviation(kind, part, draws: int = 10, p_points: int = 11, seed: int = 2024, fault: bool = False) -> float:
    """Largest entry difference between dilation-and-trace and the closed form."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    params = [random_bell_diagonal(rng) for _ in range(draws)]
    for c in params:
        rho = bell_diagonal_state(c)
        for p in np.linspace(0.0, 1.0, p_points):
            ch = make_channel(kind, p)
            numeric = partial_trace(dilate_and_evolve_global(rho, ch, ch), part.indices).matrix
            expected = closed_form_matrix(kind, part, c, p)
            if fault:
                expected = expected.copy()
                for i in range(4):
                    expected[i, 3 - i] = -expected[i, 3 - i]
            worst = max(worst, float(np.max(np.abs(numeric - expected))))
    return worst


def cmd_verify(args) -> int:
    try:
        fault = _parse_fault(args.inject_fault)
        kinds = [ChannelKind.parse(args.channel)] if args.channel else list(ChannelKind)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    results = []
    for kind in kinds:
        for part in BipartitionLabel:
            dev = oracle_deviation(
                kind, part, draws=args.draws, p_points=args.p_points, seed=args.seed,
                fault=fault == (kind, part),
            )
            results.append(
                {"channel": kind.value, "partition": part.value, "max_deviation": dev, "pass": dev <= args.tol}
            )
    ok = all(r["pass"] for r in results)
    print(json.dumps({"tolerance": args.tol, "all_pass": ok, "checks": results}, indent=2))
    if not ok:
        for r in results:
            if not r["pass"]:
                print(f"oracle mismatch: {r['channel']} {r['partition']} ({r['max_deviation']:.3e})", file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


def cmd_transitions(args) -> int:
    try:
        kind = ChannelKind.parse(args.channel)
        part = BipartitionLabel.parse(args.partition)
        initial = werner_params(args.alpha)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    p_star = find_transition(kind, initial, part, args.event)
    print("none" if p_star is None else f"{p_star:.9f}")
    return EXIT_OK


def _add_optimizer_flags(parser: argparse.ArgumentParser) -> None:
    d = OptimizerSettings()
    g = parser.add_argument_group("optimizer")
    g.add_argument("--grid-phi", type=int, default=d.grid_phi)
    g.add_argument("--grid-theta", type=int, default=d.grid_theta)
    g.add_argument("--two-side-grid-phi", type=int, default=d.two_side_grid_phi)
    g.add_argument("--two-side-grid-theta", type=int, default=d.two_side_grid_theta)
    g.add_argument("--maxiter", type=int, default=d.maxiter)
    g.add_argument("--fatol", type=float, default=d.fatol)
    g.add_argument("--xatol", type=float, default=d.xatol)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="decorr", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_sweep = sub.add_parser("sweep", help="run a correlation sweep from a JSON config")
    p_sweep.add_argument("config", type=Path)
    p_sweep.add_argument("--out-dir", default=None, help="override out_dir from the config")
    _add_optimizer_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="compare numeric evolution with closed forms")
    p_verify.add_argument("--channel", default=None)
    p_verify.add_argument("--tol", type=float, default=VERIFY_TOL)
    p_verify.add_argument("--draws", type=int, default=10)
    p_verify.add_argument("--p-points", type=int, default=11)
    p_verify.add_argument("--seed", type=int, default=2024)
    p_verify.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    p_verify.set_defaults(func=cmd_verify)

    p_tr = sub.add_parser("transitions", help="locate entanglement sudden death or birth")
    p_tr.add_argument("--channel", default=ChannelKind.AMPLITUDE_DAMPING.value)
    p_tr.add_argument("--alpha", type=float, required=True)
    p_tr.add_argument("--partition", default="AB")
    p_tr.add_argument("--event", choices=("death", "birth"), default="death")
    p_tr.set_defaults(func=cmd_transitions)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
