"""Run orchestration: config parsing, subcommands, snapshot/report persistence.

Subcommands: solve | linear | evolve | verify | besov.  Exit codes: 0 success,
1 probe assertion failed, 2 invalid config, 3 non-contraction, 4 stepper
blow-up, 5 I/O failure.  Identical config + seed gives byte-identical
snapshots and metadata-stripped reports.
"""

from __future__ import annotations

import argparse
import configparser
import math
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dyadic import BesovSpec, besov_norm, besov_spectrum_rows, build_decomposition
from .grid import Field, Grid
from .iteration import ConfigError, IterationConfig, solve_periodic
from .periodic_linear import (
    ConstantProfile,
    CosineProfile,
    PeriodicForcing,
    TableProfile,
    duhamel_integral,
    estimate_u0_bound,
    periodic_initial_datum,
)
from .probes import (
    probe_bilinear,
    probe_commutator,
    probe_positivity,
    probe_product_semigroup,
    probe_semigroup_decay,
)
from .reports import dump_report, write_csv
from .samples import mode_sum, probe_corpus
from .snapshots import read_snapshot, write_snapshot
from .stepper import BlowupError, SelfAdvection, StepperConfig, solve_on_period
from . import __version__

EXIT_OK = 0
EXIT_PROBE_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_NON_CONTRACTION = 3
EXIT_BLOWUP = 4
EXIT_IO = 5

_MODE_RE = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*:\s*([-+0-9.eE]+)")


@dataclass
class RunConfig:
    """Validated union of every section of the flat key/value config file."""

    n: int
    length: float
    alpha: float
    p: float
    q: float
    r: float
    sigma: float | None
    period: float
    dt: float
    store_every: int
    amplitude: float
    temporal: str
    phase: float
    modes: list[tuple[int, int, float]]
    table_path: str | None
    max_iter: int
    tol_b: float
    out_dir: str
    snapshot_every: int
    seed: int
    threads: int
    duhamel_steps: int = 256
    evolve_periods: int = 2
    probe_names: list[str] = field(default_factory=list)
    probe_samples: int = 12

    def grid(self) -> Grid:
        return Grid(self.n, self.length)

    def iteration(self) -> IterationConfig:
        return IterationConfig(
            grid=self.grid(),
            alpha=self.alpha,
            p=self.p,
            q=self.q,
            r=self.r,
            period=self.period,
            sigma=self.sigma,
            max_iter=self.max_iter,
            tol_b=self.tol_b,
            stepper=StepperConfig(dt=self.dt, store_every=self.store_every),
        )

    def forcing(self) -> PeriodicForcing:
        spatial = mode_sum(self.grid(), self.modes)
        if self.temporal == "constant":
            temporal = ConstantProfile()
        elif self.temporal == "cosine":
            temporal = CosineProfile(self.period, self.phase)
        elif self.temporal == "table":
            if not self.table_path:
                raise ConfigError("temporal=table requires forcing.table = PATH")
            rows = np.loadtxt(self.table_path, delimiter=",", ndmin=2)
            temporal = TableProfile(rows[:, 0], rows[:, 1])
        else:
            raise ConfigError(f"unknown temporal profile {self.temporal!r} (constant|cosine|table)")
        return PeriodicForcing(self.period, spatial, temporal, self.amplitude)

    def content_hash(self) -> str:
        """Git-style content hash of the canonical config serialization."""
        import hashlib
        import json

        blob = json.dumps(self.echo(), sort_keys=True).encode()
        return hashlib.sha1(b"config %d\x00" % len(blob) + blob).hexdigest()

    def echo(self) -> dict:
        return {
            "n": self.n,
            "length": self.length,
            "alpha": self.alpha,
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "sigma": self.sigma if self.sigma is not None else self.alpha / 2.0,
            "period": self.period,
            "dt": self.dt,
            "store_every": self.store_every,
            "amplitude": self.amplitude,
            "temporal": self.temporal,
            "phase": self.phase,
            "modes": [[k1, k2, a] for k1, k2, a in self.modes],
            "max_iter": self.max_iter,
            "tol_b": self.tol_b,
            "seed": self.seed,
            "threads": self.threads,
            "snapshot_every": self.snapshot_every,
        }


def parse_modes(text: str) -> list[tuple[int, int, float]]:
    found = _MODE_RE.findall(text)
    if not found:
        raise ConfigError(f"could not parse forcing modes from {text!r}; expected '(k1,k2):amp ...'")
    return [(int(k1), int(k2), float(a)) for k1, k2, a in found]


def load_config(path: str | Path) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = cp.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")

    def get(section, key, cast, default=None, required=False):
        if cp.has_option(section, key):
            raw = cp.get(section, key)
            try:
                return cast(raw)
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from exc
        if required:
            raise ConfigError(f"missing required config key [{section}] {key}")
        return default

    cfg = RunConfig(
        n=get("grid", "n", int, required=True),
        length=get("grid", "length", float, default=2.0 * math.pi),
        alpha=get("model", "alpha", float, required=True),
        p=get("model", "p", float, required=True),
        q=get("model", "q", float, required=True),
        r=get("model", "r", float, required=True),
        sigma=get("model", "sigma", float, default=None),
        period=get("time", "period", float, required=True),
        dt=get("time", "dt", float, required=True),
        store_every=get("time", "store_every", int, default=1),
        amplitude=get("forcing", "amplitude", float, default=0.0),
        temporal=get("forcing", "temporal", str, default="constant"),
        phase=get("forcing", "phase", float, default=0.0),
        modes=parse_modes(get("forcing", "modes", str, default="(1,0):1.0")),
        table_path=get("forcing", "table", str, default=None),
        max_iter=get("iteration", "max_iter", int, default=40),
        tol_b=get("iteration", "tol_b", float, default=1e-9),
        out_dir=get("output", "dir", str, default="run_out"),
        snapshot_every=get("output", "snapshot_every", int, default=100),
        seed=get("run", "seed", int, default=0),
        threads=get("run", "threads", int, default=1),
        duhamel_steps=get("time", "duhamel_steps", int, default=256),
        evolve_periods=get("evolve", "periods", int, default=2),
        probe_names=get("probes", "names", str, default="").split(),
        probe_samples=get("probes", "samples", int, default=12),
    )
    cfg.iteration()  # rejects invalid exponents, naming the violated constraint
    if cfg.snapshot_every < 1:
        raise ConfigError(f"snapshot_every must be >= 1 (got {cfg.snapshot_every})")
    return cfg


def _write_trajectory_snapshots(out: Path, traj, stride: int) -> None:
    snaps = out / "snapshots"
    snaps.mkdir(parents=True, exist_ok=True)
    for i in range(0, len(traj), stride):
        write_snapshot(snaps / f"theta_{i:06d}.sqgf", traj.field_at(i), float(traj.times[i]))
    last = len(traj) - 1
    if last % stride:
        write_snapshot(snaps / f"theta_{last:06d}.sqgf", traj.field_at(last), float(traj.times[last]))


def cmd_solve(cfg: RunConfig, out: Path) -> int:
    start = time.perf_counter()
    result = solve_periodic(cfg.forcing(), cfg.iteration())
    report = result.report.to_dict()
    report["config"] = cfg.echo()
    report["config_hash"] = cfg.content_hash()
    dec = build_decomposition(cfg.grid())
    report["final"]["shell_range"] = [dec.j_min, dec.j_max]
    report["metadata"]["wall_s_total"] = time.perf_counter() - start
    report["metadata"]["created_utc"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    report["metadata"]["package_version"] = __version__

    out.mkdir(parents=True, exist_ok=True)
    write_snapshot(out / "theta0.sqgf", result.theta0, 0.0)
    _write_trajectory_snapshots(out, result.traj, cfg.snapshot_every)
    dump_report(report, out / "report.json")

    if result.converged:
        print(f"converged: {result.report.reason}")
        return EXIT_OK
    print(f"failed: {result.report.reason}", file=sys.stderr)
    if "blow-up" in result.report.reason:
        return EXIT_BLOWUP
    return EXIT_NON_CONTRACTION


def cmd_linear(cfg: RunConfig, out: Path) -> int:
    forcing = cfg.forcing()
    grid = cfg.grid()
    dec = build_decomposition(grid)
    it = cfg.iteration()
    u0 = periodic_initial_datum(forcing, cfg.alpha, cfg.duhamel_steps)

    traj = solve_on_period(u0, cfg.period, cfg.alpha, None, forcing, StepperConfig(cfg.dt, cfg.store_every))
    gap = grid.lp_norm(traj.values[-1] - traj.values[0], 2.0)
    scale = u0.lp_norm(2.0)
    residual = gap / scale if scale > 0 else gap

    f_T = duhamel_integral(forcing, cfg.period, cfg.alpha, cfg.duhamel_steps)
    ratios = []
    for s in (it.sigma_value, it.s_critical):
        spec = BesovSpec(s, cfg.p, cfg.q)
        measured, bound = estimate_u0_bound(f_T, cfg.period, cfg.alpha, spec, dec)
        ratios.append(
            {
                "s": s,
                "p": cfg.p,
                "q": cfg.q,
                "measured": measured,
                "bound": bound,
                "ratio": (measured / bound) if bound > 0 else None,
            }
        )

    report = {
        "schema_version": 1,
        "kind": "linear_report",
        "periodicity_residual_l2": residual,
        "datum_norms": {"l2": u0.lp_norm(2.0), "max_abs": u0.max_abs()},
        "datum_bound_ratios": ratios,
        "config": cfg.echo(),
        "config_hash": cfg.content_hash(),
        "metadata": {"created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())},
    }
    out.mkdir(parents=True, exist_ok=True)
    write_snapshot(out / "u0.sqgf", u0, 0.0)
    _write_trajectory_snapshots(out, traj, cfg.snapshot_every)
    dump_report(report, out / "linear_report.json")
    print(f"linear periodicity residual: {residual:.3e}")
    return EXIT_OK


def cmd_evolve(cfg: RunConfig, out: Path, theta0_path: str) -> int:
    theta0, _ = read_snapshot(theta0_path)
    if theta0.grid != cfg.grid():
        raise ConfigError(
            f"snapshot grid (n={theta0.grid.n}, L={theta0.grid.length:g}) does not match config"
        )
    duration = cfg.evolve_periods * cfg.period
    forcing = cfg.forcing() if cfg.amplitude > 0 else None
    traj = solve_on_period(
        theta0, duration, cfg.alpha, SelfAdvection(), forcing, StepperConfig(cfg.dt, cfg.store_every)
    )
    report = {
        "schema_version": 1,
        "kind": "evolve_report",
        "duration": duration,
        "final_l2": traj.final.lp_norm(2.0),
        "final_max_abs": traj.final.max_abs(),
        "config": cfg.echo(),
        "config_hash": cfg.content_hash(),
        "metadata": {"created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())},
    }
    out.mkdir(parents=True, exist_ok=True)
    _write_trajectory_snapshots(out, traj, cfg.snapshot_every)
    dump_report(report, out / "evolve_report.json")
    print(f"evolved {cfg.evolve_periods} periods, final L2 = {report['final_l2']:.6g}")
    return EXIT_OK


def _linear_decay_trajectory(f: Field, alpha: float, period: float, steps: int):
    """Freely decaying trajectory samples of f on an even uniform grid."""
    from .dyadic import Trajectory
    from .grid import forward_transform, inverse_values
    from .operators import dissipation_symbol

    grid = f.grid
    lam = dissipation_symbol(grid, alpha)
    times = np.linspace(0.0, period, steps + 1)
    fhat = forward_transform(f).coeffs
    vals = np.stack([inverse_values(grid, np.exp(-t * lam) * fhat) for t in times])
    return Trajectory(grid, times, vals)


def cmd_verify(cfg: RunConfig, out: Path) -> int:
    grid = cfg.grid()
    dec = build_decomposition(grid)
    fields = probe_corpus(grid, dec, cfg.seed, cfg.probe_samples)
    pairs = list(zip(fields[::2], fields[1::2]))
    names = cfg.probe_names or ["semigroup_decay", "positivity", "bilinear", "commutator", "product_semigroup"]
    two_p = 2.0 / cfg.p

    reports = []
    for name in names:
        if name == "semigroup_decay":
            rep = probe_semigroup_decay(fields, cfg.alpha, dec, p=2.0)
        elif name == "positivity":
            rep = probe_positivity(fields, cfg.alpha, 2.0, dec)
            reports.append(rep)
            rep = probe_positivity(fields[: max(2, len(fields) // 2)], cfg.alpha, 4.0, dec)
        elif name == "bilinear":
            rep = probe_bilinear(pairs, two_p / 2, two_p / 2, cfg.p, cfg.q, dec)
        elif name == "commutator":
            rep = probe_commutator(pairs, min(0.9 * (1 + two_p), 1.0), two_p / 2, cfg.p, cfg.q, dec)
        elif name == "product_semigroup":
            trajs = [
                (_linear_decay_trajectory(f, cfg.alpha, cfg.period, 16), g) for f, g in pairs[:3]
            ]
            rep = probe_product_semigroup(
                trajs, cfg.alpha / 2, cfg.alpha, two_p + cfg.alpha / 2, two_p / 2,
                cfg.p, cfg.q, cfg.period, dec,
            )
        else:
            raise ConfigError(f"unknown probe {name!r}")
        reports.append(rep)

    out.mkdir(parents=True, exist_ok=True)
    all_passed = all(r.passed for r in reports)
    suite = {
        "schema_version": 1,
        "kind": "probe_suite_report",
        "seed": cfg.seed,
        "all_passed": all_passed,
        "probes": [r.to_dict() for r in reports],
        "config": cfg.echo(),
        "metadata": {"created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())},
    }
    dump_report(suite, out / "probe_report.json")
    for r in reports:
        write_csv(
            out / f"probe_{r.name}_ratios.csv",
            ["sample", "ratio"],
            list(enumerate(r.ratios)),
        )
        print(f"probe {r.name}: {'pass' if r.passed else 'FAIL'} (max ratio {r.max_ratio:.4g})")
    return EXIT_OK if all_passed else EXIT_PROBE_FAILED


def cmd_besov(args, out: Path) -> int:
    f, t = read_snapshot(args.snapshot)
    dec = build_decomposition(f.grid)
    spec = BesovSpec(args.s, math.inf if args.p == "inf" else float(args.p),
                     math.inf if args.q == "inf" else float(args.q))
    norm = besov_norm(f, spec, dec)
    print(repr(norm))
    out.mkdir(parents=True, exist_ok=True)
    rows = besov_spectrum_rows(f, spec, dec)
    write_csv(out / "besov_spectrum.csv", ["j", "weighted_norm"], rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqgp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def shared(p):
        p.add_argument("--config", required=True, help="flat key/value config file")
        p.add_argument("--out", default=None, help="output directory (overrides [output] dir)")
        p.add_argument("--seed", type=int, default=None, help="override [run] seed")
        p.add_argument("--threads", type=int, default=None, help="pin the parallel width (recorded)")

    shared(sub.add_parser("solve", help="run the periodic construction"))
    shared(sub.add_parser("linear", help="periodic datum + linear evolution residual"))
    pe = sub.add_parser("evolve", help="plain initial-value solve with self-advection")
    shared(pe)
    pe.add_argument("theta0", help="initial-datum snapshot path")
    shared(sub.add_parser("verify", help="run analysis probes"))
    pb = sub.add_parser("besov", help="norm and per-shell spectrum of a snapshot")
    pb.add_argument("snapshot")
    pb.add_argument("--s", type=float, required=True)
    pb.add_argument("--p", default="2")
    pb.add_argument("--q", default="2")
    pb.add_argument("--out", default="besov_out")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "besov":
            return cmd_besov(args, Path(args.out))
        cfg = load_config(args.config)
        if args.out is not None:
            cfg.out_dir = args.out
        if args.seed is not None:
            cfg.seed = args.seed
        if args.threads is not None:
            cfg.threads = args.threads
        out = Path(cfg.out_dir)
        if args.command == "solve":
            return cmd_solve(cfg, out)
        if args.command == "linear":
            return cmd_linear(cfg, out)
        if args.command == "evolve":
            return cmd_evolve(cfg, out, args.theta0)
        if args.command == "verify":
            return cmd_verify(cfg, out)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except BlowupError as exc:
        print(f"blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except OSError as exc:
        print(f"I/O failure: {exc} (path: {getattr(exc, 'filename', '?')})", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
