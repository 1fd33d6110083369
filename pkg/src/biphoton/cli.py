"""Command-line interface.

Exit codes: 0 success, 1 schema, unit or other input errors, 2 unnormalizable
configuration, 3 validation failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from pathlib import Path

from .config import SweepSpec, parse_config, parse_figure
from .crystal import BBO, phase_matching_angle, phase_mismatch
from .errors import BiphotonError, UnnormalizableConfiguration
from .io import emit, output_path, write_bytes
from .model import FilterMask, SourceConfig
from .observables import DEFAULT_DOMAIN, EtaDomain, joint_spectrum_slice, report
from .sweep import run_sweep

log = logging.getLogger("biphoton")

EXIT_INPUT = 1
EXIT_UNNORMALIZABLE = 2
EXIT_VALIDATION = 3


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise BiphotonError(f"cannot read {path}: {exc.strerror}") from None


def _source_config(path) -> SourceConfig:
    obj = parse_config(_read(path) if path else "{}")
    if isinstance(obj, SweepSpec):
        raise BiphotonError(f"{path} is a sweep spec; expected a single configuration")
    return obj


def _sweep_spec(path) -> SweepSpec:
    obj = parse_config(_read(path))
    if not isinstance(obj, SweepSpec):
        raise BiphotonError(f"{path} has no 'axes'; expected a sweep spec")
    return obj


def _deliver(data: bytes, out):
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        log.info("wrote %s", write_bytes(out, data))


def _format(args):
    if args.format:
        return args.format
    if args.out and str(args.out).endswith(".json"):
        return "json"
    return "csv"


def cmd_pm_angle(args):
    lam = args.pump_nm * 1e-3
    theta = phase_matching_angle(BBO, lam)
    residual = 2.0 * math.pi * float(phase_mismatch(BBO, lam, theta))
    print(f"theta_deg {math.degrees(theta)!r}")
    print(f"theta_rad {theta!r}")
    print(f"delta_k_rad_per_um {residual!r}")


def cmd_coeffs(args):
    cfg = _source_config(args.config)
    d = cfg.dispersion
    print(f"theta_rad {cfg.crystal.theta!r}")
    print(f"rho_p_rad {d.rho_p!r}")
    print(f"rho_s_rad {d.rho_s!r}")
    print(f"d_s_fs_per_um {d.d_s!r}")
    print(f"d_i_fs_per_um {d.d_i!r}")


def cmd_report(args):
    rep = report(_source_config(args.config), EtaDomain(args.eta_domain))
    _deliver(emit(rep, _format(args)), args.out)


def cmd_slice(args):
    cfg = _source_config(args.config)
    grid = joint_spectrum_slice(cfg, FilterMask(args.mask), args.domain, args.range, args.points)
    _deliver(emit(grid, _format(args)), args.out)
    if args.plot:
        from .plotting import plot_slices

        path = output_path(args.plot)
        path.parent.mkdir(parents=True, exist_ok=True)
        log.info("wrote %s", plot_slices([grid], path))


def cmd_sweep(args):
    spec = _sweep_spec(args.spec)
    t0 = time.perf_counter()
    rows = run_sweep(spec, jobs=args.jobs)
    n_err = sum(1 for r in rows if r.error)
    log.info("%d points in %.2f s, %d with errors", len(rows), time.perf_counter() - t0, n_err)
    _deliver(emit(rows, _format(args), sweep=spec), args.out)
    if args.plot:
        from .plotting import plot_sweep

        path = output_path(args.plot)
        path.parent.mkdir(parents=True, exist_ok=True)
        log.info("wrote %s", plot_sweep(rows, spec, path, spec.label))


def cmd_figure(args):
    from .plotting import plot_slices, plot_sweep

    fig = parse_figure(_read(args.spec))
    name = fig["figure"]
    out_dir = output_path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for label, panel in fig["panels"]:
        t0 = time.perf_counter()
        stem = f"{name}{label}"
        title = f"{fig['title']} ({label})" if label else fig["title"]
        if isinstance(panel, SweepSpec):
            rows = run_sweep(panel, jobs=args.jobs)
            write_bytes(out_dir / f"{stem}.csv", emit(rows, "csv", sweep=panel))
            plot_sweep(rows, panel, out_dir / f"{stem}.png", title)
        else:
            grids = []
            for mask in panel["masks"]:
                grid = joint_spectrum_slice(
                    panel["config"], FilterMask(mask), panel["domain"], panel["half_range"], panel["points"]
                )
                write_bytes(out_dir / f"{stem}_{mask}.csv", emit(grid, "csv"))
                grids.append(grid)
            plot_slices(grids, out_dir / f"{stem}.png", title)
        log.info("panel %s done in %.2f s", stem, time.perf_counter() - t0)


def cmd_validate(args):
    from .validation import run_validation

    t0 = time.perf_counter()
    checks = run_validation(deep=args.deep)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    log.info("%d checks, %d failed, %.1f s", len(checks), len(failed), time.perf_counter() - t0)
    return EXIT_VALIDATION if failed else 0


def build_parser():
    p = argparse.ArgumentParser(prog="biphoton", description="Filtered type-II SPDC photon-pair source model.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pm-angle", help="degenerate type-II phase-matching angle of BBO")
    s.add_argument("--pump-nm", type=float, default=405.0)
    s.set_defaults(func=cmd_pm_angle)

    s = sub.add_parser("coeffs", help="walk-off angles and group-delay differences")
    s.add_argument("--config", help="JSON configuration (defaults when omitted)")
    s.set_defaults(func=cmd_coeffs)

    s = sub.add_parser("report", help="purities, heralding efficiencies and PEFs")
    s.add_argument("--config")
    s.add_argument("--out", help="output file (stdout when omitted)")
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--eta-domain", choices=[d.value for d in EtaDomain], default=DEFAULT_DOMAIN.value)
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("slice", help="two-dimensional slice of the mode function")
    s.add_argument("--config")
    s.add_argument("--domain", choices=("spectral", "spatial"), default="spectral")
    s.add_argument("--mask", choices=[m.value for m in FilterMask], default="both")
    s.add_argument("--range", type=float, help="half range of both axes (rad/fs or rad/um)")
    s.add_argument("--points", type=int, default=101)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--plot", help="also render a PNG to this path")
    s.set_defaults(func=cmd_slice)

    s = sub.add_parser("sweep", help="evaluate observables over a parameter grid")
    s.add_argument("--spec", required=True)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--plot", help="also render a PNG to this path")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("figure", help="run every panel of a figure spec, writing CSVs and PNGs")
    s.add_argument("--spec", required=True)
    s.add_argument("--out-dir", default="out")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_figure)

    s = sub.add_parser("validate", help="cross-check closed forms against quadrature oracles")
    s.add_argument("--deep", action="store_true", help="refined grids and direct density-matrix quadrature")
    s.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(message)s",
    )
    try:
        return args.func(args) or 0
    except UnnormalizableConfiguration as exc:
        print(f"biphoton: unnormalizable configuration: {exc}", file=sys.stderr)
        return EXIT_UNNORMALIZABLE
    except BiphotonError as exc:
        print(f"biphoton: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
