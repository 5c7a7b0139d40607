"""Command-line front end.

Exit codes: 0 success, 1 an audit failed (or a computation raised),
2 usage error.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from zindler import boundary_tracer, period_engine, polygon_lab, rigidity_auditor, svg
from zindler.errors import CarouselError
from zindler.hexagon_flow import integrate_orbit
from zindler.scalar_kernel import CENTER, H0, H_MAX

log = logging.getLogger("zindler")

EDGE_GAP = 1e-6
DEFAULT_GRID = (H0 + 1e-3, H_MAX - 1e-3, 50)
DEFAULT_LEVELS = (H0 + 0.01, 2.45, 2.5, 2.55, H_MAX - 0.05)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    H_grid: tuple = DEFAULT_GRID
    step: float = 1e-3
    tolerances: dict = field(default_factory=lambda: {
        "audit_slack": -period_engine.AUDIT_SLACK,
        "angle_sum": polygon_lab.ANGLE_SUM_TOL,
        "closure": polygon_lab.CLOSURE_TOL,
    })
    output_dir: Path | None = None
    seed: int = 0

    def energies(self):
        lo, hi, count = self.H_grid
        if count == 1:
            return np.array([lo])
        return np.linspace(lo, hi, count)


def parse_grid(text):
    """``lo:hi:count`` or a single energy; clamps into (H0, H_max)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            lo = hi = float(parts[0])
            count = 1
        elif len(parts) == 3:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        else:
            raise ValueError
    except ValueError:
        raise UsageError(f"bad energy grid {text!r}; use lo:hi:count or a single value") from None
    if count < 1 or hi < lo:
        raise UsageError(f"bad energy grid {text!r}")
    clamped_lo = min(max(lo, H0 + EDGE_GAP), H_MAX - EDGE_GAP)
    clamped_hi = min(max(hi, H0 + EDGE_GAP), H_MAX - EDGE_GAP)
    if (clamped_lo, clamped_hi) != (lo, hi):
        log.warning("energy grid clamped to [%.9f, %.9f]", clamped_lo, clamped_hi)
    return clamped_lo, clamped_hi, count


def read_config(path):
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{n}: expected key=value")
        values[key.strip().replace("_", "-")] = value.strip()
    return values


def _add_common(p):
    p.add_argument("--config", help="key=value file mirroring the flags; flags win")
    p.add_argument("--step", type=float, default=1e-3, help="integration step")
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="zindler", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("period-scan", help="T(H), turning points, radii and margins on an H grid")
    p.add_argument("--h", default=None)

    for name, text in (("orbit", "phase portrait and hexagon snapshots"),
                       ("reconstruct", "vertex-flow reconstruction of the boundary")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--h", default=None, help="energy; start at (u_-(H), u_-(H))")
        p.add_argument("--x", type=float, default=None)
        p.add_argument("--y", type=float, default=None)
        p.add_argument("--frames", type=int, default=8)

    p = sub.add_parser("closure-scan", help="closure defect of reconstructed boundaries")
    p.add_argument("--h", default=None)

    p = sub.add_parser("verify-bounds", help="audit the parabolic bounds on Q_H")
    p.add_argument("--h", default=None)
    p.add_argument("--grid-points", type=int, default=1001)
    p.add_argument("--random-h", type=int, default=0, help="extra random energies drawn with --seed")

    p = sub.add_parser("verify-proof", help="feasibility scan over (k, m)")
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--mmax", type=int, default=10)

    p = sub.add_parser("levelsets", help="SVG of level curves of H")
    p.add_argument("--levels", default=None, help="comma-separated energies")

    p = sub.add_parser("carousel-defect", help="inscribed N-gon diagnostics on a curve")
    p.add_argument("--curve", default="circle:2")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--t", type=float, default=0.3)

    for p in sub.choices.values():
        _add_common(p)
    return parser


def _config_argv(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    extra = []
    for key, value in read_config(known.config).items():
        extra += [f"--{key}", value]
    # Config flags go right after the subcommand so explicit flags override them.
    return argv[:1] + extra + argv[1:]


def _emit(text, cfg, filename):
    if cfg.output_dir is None:
        sys.stdout.write(text)
        return
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    (cfg.output_dir / filename).write_text(text)


def _write(cfg, filename, text):
    out = cfg.output_dir or Path(".")
    out.mkdir(parents=True, exist_ok=True)
    path = out / filename
    path.write_text(text)
    print(path)


def _json(obj):
    return json.dumps(obj, separators=(",", ":")) + "\n"


def _csv(header, rows):
    lines = [header] + [",".join(_num(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _num(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(v)
    return f"{float(v):.12g}"


def cmd_period_scan(args, cfg):
    rows = [period_engine.scan_row(float(H)) for H in cfg.energies()]
    keys = period_engine.CSV_HEADER.split(",")
    if args.format == "json":
        mono = rigidity_auditor.monotonicity_scan([r["H"] for r in rows]) if len(rows) > 1 else []
        payload = {"rows": rows, "dT_signs": [s for _, _, s in mono[1:]]}
        _emit(_json(payload), cfg, "period_scan.json")
    else:
        _emit(_csv(period_engine.CSV_HEADER, [[r[k] for k in keys] for r in rows]), cfg, "period_scan.csv")
    return 0


def _start_state(args):
    if args.x is not None or args.y is not None:
        if args.x is None or args.y is None:
            raise UsageError("--x and --y must be given together")
        return args.x, args.y
    if args.h is None:
        um = period_engine.turning_points(2.5).u_minus
        return um, um
    H = float(args.h)
    if H >= H_MAX - period_engine.DEGENERATE_WINDOW:
        return CENTER, CENTER
    um = period_engine.turning_points(H).u_minus
    return um, um


def cmd_orbit(args, cfg):
    s0 = _start_state(args)
    H = float(np.sin(s0[0]) + np.sin(s0[1]) - np.sin(s0[0] + s0[1]))
    T = period_engine.period(H).T
    orbit = integrate_orbit(s0, T, step=cfg.step, record_every=10)
    rows = [(t, x, y) for t, (x, y) in zip(orbit.t, orbit.states)]
    _write(cfg, "orbit.csv", _csv("t,x,y", rows))
    _write(cfg, "orbit.svg", svg.orbit_svg(orbit))
    _write(cfg, "hexagon_frames.svg", svg.hexagon_frames_svg(s0, frames=args.frames, step=cfg.step))
    return 0


def cmd_reconstruct(args, cfg):
    s0 = _start_state(args)
    flow = boundary_tracer.trace(s0, step=cfg.step)
    _write(cfg, "trajectory.csv", flow.to_csv())
    _write(cfg, "reconstruct.svg", svg.vertex_paths_svg(flow))
    summary = {
        "H": flow.H,
        "closure_time": flow.closure_time,
        "closure_defect": flow.closure_defect,
        "return_time": flow.return_time,
        "radius_residual": flow.radius_residual,
    }
    sys.stdout.write(_json(summary))
    return 0


def cmd_closure_scan(args, cfg):
    rows = boundary_tracer.closure_scan(cfg.energies(), step=cfg.step)
    if args.format == "json":
        _emit(_json([r.__dict__ for r in rows]), cfg, "closure_scan.json")
    else:
        _emit(boundary_tracer.closure_csv(rows), cfg, "closure_scan.csv")
    return 0


AUDIT_HEADER = "H,lower_margin,upper_margin,curvature_margin,f_gap_margin,f_curvature_margin,g_margin,pass"


def cmd_verify_bounds(args, cfg):
    energies = list(cfg.energies())
    if args.random_h:
        rng = np.random.default_rng(cfg.seed)
        energies += list(rng.uniform(H0 + EDGE_GAP, H_MAX - EDGE_GAP, args.random_h))
    audits = [period_engine.audit_parabolic_bounds(float(H), args.grid_points) for H in energies]
    ok = all(a.all_hold for a in audits)
    if args.format == "json":
        payload = {
            "audits": [
                {**{k: getattr(a, k) for k in AUDIT_HEADER.split(",")[:-1]}, "pass": a.all_hold}
                for a in audits
            ],
            "pass": ok,
        }
        _emit(_json(payload), cfg, "verify_bounds.json")
    else:
        rows = [[getattr(a, k) for k in AUDIT_HEADER.split(",")[:-1]] + [a.all_hold] for a in audits]
        _emit(_csv(AUDIT_HEADER, rows), cfg, "verify_bounds.csv")
    if not ok:
        log.error("an inequality failed on the audited grid")
    return 0 if ok else 1


def cmd_verify_proof(args, cfg):
    report = rigidity_auditor.proof_report(args.kmax, args.mmax)
    _emit(rigidity_auditor.report_json(report) + "\n", cfg, "verify_proof.json")
    return 0 if report["conclusion"] == "empty_feasible_set" else 1


def cmd_levelsets(args, cfg):
    if args.levels:
        try:
            levels = [float(v) for v in args.levels.split(",")]
        except ValueError:
            raise UsageError(f"bad --levels {args.levels!r}") from None
    else:
        levels = list(DEFAULT_LEVELS)
    bad = [H for H in levels if not (H0 < H < H_MAX)]
    if bad:
        raise UsageError(f"levels outside ({H0:.6f}, {H_MAX:.6f}): {bad}")
    _write(cfg, "levelsets.svg", svg.levelsets_svg(levels))
    return 0


def cmd_carousel_defect(args, cfg):
    try:
        curve = polygon_lab.parse_curve(args.curve)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.n < 3:
        raise UsageError("--n must be at least 3")
    result = {
        "curve": args.curve,
        "n": args.n,
        "perimeter": curve.perimeter,
        "carousel_defect": polygon_lab.carousel_defect(curve, args.n, args.samples),
        "mean_side": polygon_lab.mean_side(curve, args.n, args.samples),
        "midpoint_parallel_defect": polygon_lab.midpoint_parallel_defect(curve, args.n, args.t),
    }
    if args.format == "json":
        sys.stdout.write(_json(result))
    else:
        keys = list(result)
        sys.stdout.write(",".join(keys) + "\n" + ",".join(
            v if isinstance(v, str) else _num(v) for v in result.values()) + "\n")
    if cfg.output_dir is not None:
        poly = polygon_lab.inscribed_polygon(curve, args.t, args.n).polygon
        _write(cfg, "polygon.csv", polygon_lab.polygon_csv(poly.vertices))
    return 0


COMMANDS = {
    "period-scan": cmd_period_scan,
    "orbit": cmd_orbit,
    "reconstruct": cmd_reconstruct,
    "closure-scan": cmd_closure_scan,
    "verify-bounds": cmd_verify_bounds,
    "verify-proof": cmd_verify_proof,
    "levelsets": cmd_levelsets,
    "carousel-defect": cmd_carousel_defect,
}


def run(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_config_argv(argv))
        grid = getattr(args, "h", None)
        cfg = RunConfig(
            subcommand=args.subcommand,
            H_grid=parse_grid(grid) if grid and args.subcommand not in ("orbit", "reconstruct") else DEFAULT_GRID,
            step=args.step,
            output_dir=args.out,
            seed=args.seed,
        )
        if cfg.step <= 0:
            raise UsageError("--step must be positive")
        return COMMANDS[args.subcommand](args, cfg)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (UsageError, OSError) as exc:
        print(f"zindler: error: {exc}", file=sys.stderr)
        return 2
    except CarouselError as exc:
        print(f"zindler: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main():
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
