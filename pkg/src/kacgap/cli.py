"""Command line front end.

Subcommands: eigen (eigenvalue tables as CSV), bounds (per-sector
evidence as JSON), gap (assembled gap as JSON), simulate (entropy decay
runs with CSV/JSON artifacts), verify (the full check table).  Exit
codes: 0 success, 1 check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

from . import gapbounds, kspectrum, montecarlo
from .gapbounds import BoundViolated, Sector, TailNotDecreasing
from .verify import verify_all


def _fmt_float(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def _json_ready(obj):
    """Round floats to 12 significant digits and strip exotic types."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj) or math.isnan(obj):
            return _fmt_float(obj)
        return float(f"{obj:.12g}")
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Sector):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _json_ready(obj.item())
    if hasattr(obj, "tolist"):  # numpy array
        return _json_ready(obj.tolist())
    return str(obj)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _emit_json(payload, out: str | None) -> None:
    _emit(json.dumps(_json_ready(payload), indent=2), out)


def _sector_dict(sb) -> dict:
    return {
        "sector": sb.sector.value,
        "ell": sb.ell,
        "lambda_bound": sb.lambda_bound,
        "evidence": sb.evidence,
    }


# ---------------------------------------------------------------- eigen


def _cmd_eigen(args) -> int:
    ells = [args.ell] if args.ell is not None else list(range(args.ell_max + 1))
    rows = []
    for ell in ells:
        col = kspectrum.kappa_column(ell, args.n_max)
        for n in range(args.n_max + 1):
            rows.append(
                (
                    n,
                    ell,
                    float(col[n]),
                    kspectrum.kappa_hat(n, ell),
                    kspectrum.kappa_tilde(n, ell),
                )
            )
    if args.json:
        payload = [
            {"n": n, "ell": l, "kappa": k, "kappa_hat": h, "kappa_tilde": t}
            for n, l, k, h, t in rows
        ]
        _emit_json(payload, args.out)
    else:
        lines = ["n,ell,kappa,kappa_hat,kappa_tilde"]
        for n, l, k, h, t in rows:
            lines.append(f"{n},{l},{_fmt_float(k)},{_fmt_float(h)},{_fmt_float(t)}")
        _emit("\n".join(lines), args.out)
    return 0


def read_eigen_csv(path: str) -> list[dict]:
    """Parse an eigen CSV back into typed rows (round-trip helper)."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            out.append(
                {
                    "n": int(rec["n"]),
                    "ell": int(rec["ell"]),
                    "kappa": float(rec["kappa"]),
                    "kappa_hat": float(rec["kappa_hat"]),
                    "kappa_tilde": float(rec["kappa_tilde"]),
                }
            )
    return out


# --------------------------------------------------------------- bounds


def _cmd_bounds(args) -> int:
    try:
        if args.sector is None:
            report = gapbounds.assemble_gap_report()
            payload = [_sector_dict(s) for s in report.sectors]
        elif args.sector == "antisym":
            payload = _sector_dict(gapbounds.antisym_sector())
        elif args.sector == "large":
            if args.ell is not None:
                payload = _sector_dict(gapbounds.large_ell_bound(args.ell))
            else:
                payload = _sector_dict(gapbounds.large_ell_sector())
        elif args.sector == "mid":
            payload = _sector_dict(gapbounds.mid_ell_check())
        else:
            if args.ell is not None:
                payload = _sector_dict(gapbounds.small_ell_bound(args.ell))
            else:
                payload = [_sector_dict(gapbounds.small_ell_bound(l)) for l in range(6)]
    except (BoundViolated, TailNotDecreasing) as exc:
        print(f"bound check failed: {exc}", file=sys.stderr)
        return 1
    _emit_json(payload, args.out)
    return 0


def _cmd_gap(args) -> int:
    try:
        report = gapbounds.assemble_gap_report()
    except (BoundViolated, TailNotDecreasing) as exc:
        print(f"gap assembly failed: {exc}", file=sys.stderr)
        return 1
    payload = {
        "sectors": [_sector_dict(s) for s in report.sectors],
        "mu3": report.mu3,
        "gap": report.gap,
    }
    _emit_json(payload, args.out)
    return 0


# ------------------------------------------------------------- simulate


def _parse_frames(text: str) -> tuple[float, ...]:
    try:
        frames = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad frame list {text!r}")
    if not frames:
        raise argparse.ArgumentTypeError("frame list is empty")
    return frames


def write_histogram_csv(path: str, hist) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_left", "bin_right", "density"])
        for i in range(len(hist.density)):
            w.writerow(
                [
                    _fmt_float(float(hist.edges[i])),
                    _fmt_float(float(hist.edges[i + 1])),
                    _fmt_float(float(hist.density[i])),
                ]
            )


def read_histogram_csv(path: str) -> tuple[list[float], list[float], list[float]]:
    lefts, rights, dens = [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            lefts.append(float(rec["bin_left"]))
            rights.append(float(rec["bin_right"]))
            dens.append(float(rec["density"]))
    return lefts, rights, dens


def write_entropy_csv(path: str, result) -> None:
    times = result.entropy["sampled"].times
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["time", "H_sampled", "H_implied1", "H_implied2"])
        for i, t in enumerate(times):
            w.writerow(
                [_fmt_float(t)]
                + [
                    _fmt_float(result.entropy[m].values[i])
                    for m in montecarlo.MARGINALS
                ]
            )


def read_entropy_csv(path: str) -> list[dict]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            out.append({k: float(v) for k, v in rec.items()})
    return out


def _cmd_simulate(args) -> int:
    cfg = montecarlo.SimConfig(
        alpha=args.alpha,
        replicas=args.replicas,
        frames=args.frames,
        seed=args.seed,
        bins=args.bins,
        initial=args.initial,
    )
    result = montecarlo.simulate(cfg, backend=args.backend, threads=args.threads)
    summary = {
        "alpha": cfg.alpha,
        "replicas": cfg.replicas,
        "seed": cfg.seed,
        "bins": cfg.bins,
        "initial": cfg.initial,
        "frames": list(cfg.frames),
        "backend": result.backend,
        "threads": result.threads,
        "max_residual": result.max_residual,
        "rate": result.rate,
        "fit_points": result.fit_points,
        "entropy": {
            m: list(result.entropy[m].values) for m in montecarlo.MARGINALS
        },
    }
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        for fi, t in enumerate(cfg.frames):
            hist = result.histogram(fi, "sampled", cfg.bins)
            write_histogram_csv(
                os.path.join(args.out, f"hist_t{t:g}.csv"), hist
            )
        write_entropy_csv(os.path.join(args.out, "entropy.csv"), result)
        with open(
            os.path.join(args.out, "summary.json"), "w", encoding="utf-8"
        ) as fh:
            json.dump(_json_ready(summary), fh, indent=2)
            fh.write("\n")
        print(f"wrote {len(cfg.frames)} histograms + entropy.csv + summary.json to {args.out}")
    else:
        _emit_json(summary, None)
    return 0


# --------------------------------------------------------------- verify


def _cmd_verify(args) -> int:
    report = verify_all(seed=args.seed, quick=args.quick)
    if args.json:
        _emit_json(report.to_dict(), args.out)
    else:
        _emit(report.to_text(), args.out)
    return 0 if report.verdict == "pass" else 1


# ----------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")
    common.add_argument("--out", default=None, help="output file (directory for simulate)")
    common.add_argument("--quick", action="store_true", help="smaller statistical runs, widened tolerances")
    common.add_argument("--json", action="store_true", help="emit JSON instead of the default format")

    p = argparse.ArgumentParser(
        prog="kacgap",
        description="spectral gap toolkit for the three-particle conjugate process",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eigen", parents=[common], help="eigenvalue table as CSV")
    pe.add_argument("--ell", type=int, default=None, help="single angular index")
    pe.add_argument("--ell-max", type=int, default=10, help="angular range when --ell is absent")
    pe.add_argument("--n-max", type=int, default=50, help="radial range")
    pe.set_defaults(func=_cmd_eigen)

    pb = sub.add_parser("bounds", parents=[common], help="per-sector bound evidence as JSON")
    pb.add_argument(
        "--sector",
        choices=["antisym", "large", "mid", "small"],
        default=None,
        help="restrict to one sector (default: all)",
    )
    pb.add_argument("--ell", type=int, default=None, help="angular index for large/small sectors")
    pb.set_defaults(func=_cmd_bounds)

    pg = sub.add_parser("gap", parents=[common], help="assembled spectral gap as JSON")
    pg.set_defaults(func=_cmd_gap)

    ps = sub.add_parser("simulate", parents=[common], help="entropy decay simulation")
    ps.add_argument("--alpha", type=int, choices=[0, 2], default=2, help="collision rate exponent")
    ps.add_argument("--replicas", type=int, default=100_000, help="independent chains")
    ps.add_argument("--bins", type=int, default=100, help="histogram bins")
    ps.add_argument("--frames", type=_parse_frames, default=None, help="comma separated frame times")
    ps.add_argument(
        "--initial",
        choices=["linear", "equilibrium"],
        default="linear",
        help="radial law of the initial state",
    )
    ps.add_argument(
        "--backend",
        choices=["python", "compiled"],
        default=None,
        help="jump kernel implementation (default: compiled when available)",
    )
    ps.add_argument("--threads", type=int, default=None, help="worker threads (compiled backend)")
    ps.set_defaults(func=_cmd_simulate)

    pv = sub.add_parser("verify", parents=[common], help="replay every published numeric claim")
    pv.set_defaults(func=_cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
