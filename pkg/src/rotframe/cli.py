"""Command-line driver.

Every report subcommand writes delimited tables (and, unless --no-plots,
rendered PNG figures) into the output directory.  Exit codes:

    0  success
    1  runtime failure (numerical guard tripped, file I/O, internal error)
    2  verification ran and at least one check failed
    3  configuration or usage error

The output directory defaults to $ROTFRAME_OUT, falling back to the
current directory.
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback
from pathlib import Path

import numpy as np

from .bargmann import default_grid, potential_matrix
from .config import ProblemConfig, load_config
from .errors import ConfigError, RotframeError
from .evolution import ExactSolution, overlap_series, tracked_series
from .fields import bloch_vector, field_profile, rotating_coupling_sampler
from .grids import Grid, SpinorField
from .io_tables import (
    bloch_table,
    check_table,
    field_table,
    phase_table,
    potential_table,
    sweep_table,
    write_table,
)
from .oracle import propagate_grid
from .phases import phase_report
from .spinmodel import CrankedModel, adiabatic_sweep, berry_limit, spin_phases
from .verify import run_all

__all__ = ["build_parser", "main"]


class _Parser(argparse.ArgumentParser):
    """Parser whose usage failures exit 3 (2 means verification failure)."""

    def error(self, message):
        self.exit(3, f"{self.prog}: error: {message}\n")


def _add_output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--out",
        default=None,
        metavar="DIR",
        help="output directory (default: $ROTFRAME_OUT or current directory)",
    )
    p.add_argument(
        "--no-plots", action="store_true", help="skip figure rendering"
    )


def _add_config_option(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--config",
        required=True,
        metavar="PATH",
        help="JSON problem description",
    )


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get("ROTFRAME_OUT") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _grid_for(cfg: ProblemConfig) -> Grid:
    if cfg.grid is not None:
        return cfg.grid
    return default_grid(cfg.spec, cfg.dx_target)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_potential(args) -> int:
    cfg = load_config(args.config)
    grid = _grid_for(cfg)
    q, v = potential_matrix(cfg.spec, grid.x)
    out = _out_dir(args)
    header, rows = potential_table(grid.x, q, v.real)
    print(f"wrote {write_table(out / 'potential.csv', header, rows)}")
    print(
        f"{cfg.spec.n_channels} channel(s), {cfg.spec.n_states} bound state(s), "
        f"grid [{grid.x_min:g}, {grid.x_max:g}] with {grid.n_points} points"
    )
    if not args.no_plots:
        from . import plots

        print(f"wrote {plots.potential_figure(out / 'potential.png', grid.x, q, v.real)}")
    return 0


def cmd_field(args) -> int:
    cfg = load_config(args.config)
    omega = cfg.require_omega()
    grid = _grid_for(cfg)
    profile = field_profile(cfg.spec, grid.x, omega)
    out = _out_dir(args)

    header, rows = field_table(profile)
    print(f"wrote {write_table(out / 'field.csv', header, rows)}")

    # lab-field snapshots on a decimated mesh keep the table a sane size
    stride = max(1, grid.n_points // 200)
    xs = profile.x[::stride]
    od = profile.omega_dressed[::stride]
    td = profile.theta_dressed[::stride]
    t_values = np.linspace(0.0, np.pi / omega, 9)
    b = np.stack([bloch_vector(od, td, omega, t) for t in t_values])
    header, rows = bloch_table(t_values, xs, b)
    print(f"wrote {write_table(out / 'bfield.csv', header, rows)}")

    for note in profile.diagnostics:
        print(f"note: {note}")
    if not args.no_plots:
        from . import plots

        print(f"wrote {plots.field_figure(out / 'field.png', profile)}")
        center = int(np.argmax(profile.omega_dressed))
        t_dense = np.linspace(0.0, np.pi / omega, 201)
        b_center = np.stack(
            [
                bloch_vector(
                    profile.omega_dressed[center],
                    profile.theta_dressed[center],
                    omega,
                    t,
                )
                for t in t_dense
            ]
        )
        print(f"wrote {plots.bloch_figure(out / 'bfield.png', t_dense, b_center)}")
    return 0


def cmd_evolve(args) -> int:
    cfg = load_config(args.config)
    omega = cfg.require_omega()
    if cfg.nu >= cfg.spec.n_states:
        raise ConfigError(
            [("nu", f"state index {cfg.nu} needs {cfg.nu + 1} bound states")]
        )
    grid = _grid_for(cfg)
    sol = ExactSolution(cfg.spec, cfg.nu, omega, grid)
    ts, overlaps = overlap_series(sol, args.samples)
    tracked = tracked_series(overlaps)
    out = _out_dir(args)

    header = ["t", "overlap_re", "overlap_im", "tracked_phase"]
    rows = list(zip(ts, overlaps.real, overlaps.imag, tracked))
    print(f"wrote {write_table(out / 'evolve.csv', header, rows)}")

    norm0 = float(overlaps[0].real)
    print(f"state {cfg.nu}: energy {sol.energy:g}, period {sol.period:.12g}")
    print(f"total tracked phase over one period: {-tracked[-1]:.12f}")
    print(f"return fidelity: {abs(overlaps[-1]) / norm0:.12f}")

    if args.steps is not None:
        sampler = rotating_coupling_sampler(cfg.spec, omega, grid.x)
        prop = propagate_grid(
            sampler, grid.dx, sol.psi0.components, sol.period, n_steps=args.steps
        )
        final = SpinorField(grid, prop.psi_final)
        exact = sol.at_time(sol.period)
        fid = abs(exact.overlap(final)) / (exact.norm() * final.norm())
        print(
            f"independent grid propagation ({args.steps} steps): "
            f"fidelity {fid:.12f}, norm drift {prop.norm_drift:.3e}"
        )

    if not args.no_plots:
        from . import plots

        print(f"wrote {plots.evolve_figure(out / 'evolve.png', overlaps)}")
    return 0


def cmd_phases(args) -> int:
    cfg = load_config(args.config)
    omega = cfg.require_omega()
    grid = _grid_for(cfg)
    reports = [
        phase_report(ExactSolution(cfg.spec, nu, omega, grid))
        for nu in range(cfg.spec.n_states)
    ]
    out = _out_dir(args)
    header, rows = phase_table(reports)
    print(f"wrote {write_table(out / 'phases.csv', header, rows)}")
    for r in reports:
        print(
            f"state {r.state} (branch {r.branch:+d}): "
            f"total={r.total:.9f} dynamical={r.dynamical:.9f} "
            f"geometric={r.geometric:.9f} aa={r.anandan:.9f} "
            f"sigma3={r.sigma3:.9f}"
        )
    if not args.no_plots:
        from . import plots

        print(f"wrote {plots.phase_figure(out / 'phases.png', reports)}")
    return 0


def cmd_spin_model(args) -> int:
    try:
        m = args.m if args.m is not None else 2.0 * args.j
        model = CrankedModel(
            j=args.j,
            omega_bar=args.magnitude,
            theta_bar=args.theta,
            omega=args.omega,
        )
        family = spin_phases(model, m)
        ratios = [float(s) for s in args.ratios.split(",") if s.strip()]
        if not ratios:
            raise ValueError("--ratios needs at least one value")
        rows = adiabatic_sweep(m, args.magnitude, args.theta, ratios, j=args.j)
    except ValueError as exc:
        raise ConfigError([("spin-model", str(exc))]) from exc

    print(
        f"j={args.j:g} m={m:g}: energy={family.energy:.9f} "
        f"alignment={family.alignment:.9f}"
    )
    print(
        f"total={family.total:.9f} dynamical={family.dynamical:.9f} "
        f"geometric={family.geometric:.9f} "
        f"adiabatic limit={berry_limit(args.theta, m):.9f}"
    )
    out = _out_dir(args)
    header, table_rows = sweep_table(rows)
    print(f"wrote {write_table(out / 'sweep.csv', header, table_rows)}")
    for r in rows:
        print(
            f"ratio={r.omega_ratio:g}: geometric={r.geometric:.9f} "
            f"adiabatic={r.berry:.9f} deviation={r.deviation:.3e}"
        )
    if not args.no_plots:
        from . import plots

        print(f"wrote {plots.sweep_figure(out / 'sweep.png', rows)}")
    return 0


def cmd_verify(args) -> int:
    try:
        results = run_all(
            seed=args.seed,
            perturb_hamiltonian=args.perturb_hamiltonian,
            only=args.only,
        )
    except ValueError as exc:
        raise ConfigError([("--only", str(exc))]) from exc
    out = _out_dir(args)
    header, rows = check_table(results)
    path = write_table(out / "verify.csv", header, rows)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(
            f"{status}  {r.name:<{width}}  value={r.value:.6e}  "
            f"tolerance={r.tolerance:.6e}"
        )
    n_fail = sum(1 for r in results if not r.passed)
    print(f"{len(results) - n_fail}/{len(results)} checks passed; table at {path}")
    return 0 if n_fail == 0 else 2


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="rotframe",
        description=(
            "Exactly solvable driven two-channel models: reflectionless "
            "stationary couplings, rotating-frame evolution, and phase "
            "decompositions checked against brute-force propagation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("potential", help="tabulate the stationary coupling matrix")
    _add_config_option(p)
    _add_output_options(p)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser(
        "field", help="bare/dressed field parameters and lab-field snapshots"
    )
    _add_config_option(p)
    _add_output_options(p)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("evolve", help="overlap trajectory over one period")
    _add_config_option(p)
    _add_output_options(p)
    p.add_argument(
        "--samples",
        type=int,
        default=2048,
        metavar="N",
        help="overlap samples over one period (default 2048)",
    )
    p.add_argument(
        "--steps",
        type=int,
        default=None,
        metavar="N",
        help="also run the independent grid propagation with N time steps",
    )
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("phases", help="phase decomposition of every bound state")
    _add_config_option(p)
    _add_output_options(p)
    p.set_defaults(func=cmd_phases)

    p = sub.add_parser(
        "spin-model", help="finite-dimensional analog: phase family and sweep"
    )
    p.add_argument("--j", type=float, default=0.5, help="spin size (default 0.5)")
    p.add_argument(
        "--m",
        type=float,
        default=None,
        help="level label, an eigenvalue of the doubled projection (default 2j)",
    )
    p.add_argument(
        "--theta",
        type=float,
        default=np.pi / 3,
        help="field tilt angle in radians (default pi/3)",
    )
    p.add_argument(
        "--magnitude", type=float, default=1.0, help="field magnitude (default 1)"
    )
    p.add_argument(
        "--omega", type=float, default=0.5, help="frame rate (default 0.5)"
    )
    p.add_argument(
        "--ratios",
        default="0.1,0.01,0.001",
        help="comma-separated frame-rate/field-magnitude ratios for the sweep",
    )
    _add_output_options(p)
    p.set_defaults(func=cmd_spin_model)

    p = sub.add_parser("verify", help="run the verification battery")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument(
        "--only",
        default=None,
        metavar="PREFIX",
        help="run only check groups whose name starts with PREFIX",
    )
    p.add_argument(
        "--perturb-hamiltonian",
        action="store_true",
        help="inject a small coupling perturbation (control: checks must fail)",
    )
    _add_output_options(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 3
    except RotframeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
