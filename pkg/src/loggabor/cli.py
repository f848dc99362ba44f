"""Command line interface.

Exit codes: 0 success, 1 internal error or failed checks, 2 invalid input.
Every command validates its inputs completely before computing anything.
"""

import argparse
import csv
import importlib.resources
import json
import logging
from pathlib import Path
import sys
import time

import numpy as np

from . import __version__
from .apply import CIRCULAR, PADDED, apply_bank
from .bank import build_bank, coverage_sum, full_circle_spec, ring_centers
from .grid import GridShape
from .io import (ConfigError, TensorFileError, bank_mosaic, export_image,
                 load_bank_config, load_filter, load_filter_config, read_pgm,
                 read_tensor, save_filter, save_weights, write_pgm, write_tensor)
from .synth import GaussianSpec, build_weights
from .transform import idft_fast, idft_naive, sum_check

log = logging.getLogger("loggabor")


class UsageError(ValueError):
    pass


def _config_path(name):
    p = Path(name)
    if p.exists():
        return p
    packaged = importlib.resources.files("loggabor") / "configs" / p.name
    if packaged.is_file():
        return packaged
    raise UsageError(f"config file not found: {name}")


def _floats(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _emit_report(report, out_dir, target):
    text = json.dumps(report, indent=2, sort_keys=True)
    if target == "-":
        sys.stdout.write(text + "\n")
    else:
        path = Path(target) if target else out_dir / "report.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")


# --- filter -----------------------------------------------------------------

def _prepare_filter(args):
    if args.config:
        spec, shape = load_filter_config(_config_path(args.config))
    else:
        if args.n is None or args.mu is None or args.sigma is None:
            raise UsageError("filter needs --n, --mu and --sigma (or --config)")
        shape = GridShape(args.d, args.n)
        spec = GaussianSpec(args.mu, args.sigma)
        if spec.D != shape.D:
            raise UsageError(f"--mu has {spec.D} components but --d is {shape.D}")
    if shape.D != 2 and not args.no_images:
        log.info("images are only written for D=2")
    return spec, shape


def _run_filter(args, prepared):
    spec, shape = prepared
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    w = build_weights(spec, shape)
    f = (idft_naive if args.naive else idft_fast)(w)
    elapsed = time.perf_counter() - t0
    save_weights(out / "weights.lgfb", w)
    save_filter(out / "filter.lgfb", f)
    files = ["weights.lgfb", "filter.lgfb"]
    if shape.D == 2 and not args.no_images:
        export_image(w.values, out / "weights.pgm", "minmax")
        export_image(f.re, out / "re.pgm")
        export_image(f.im, out / "im.pgm")
        files += ["weights.pgm", "re.pgm", "im.pgm"]
        if not args.no_png:
            from .plotting import plot_filter_panels

            plot_filter_panels(w, f, out / "filter.png")
            files.append("filter.png")
    re_res, im_res = sum_check(f, w)
    return {
        "command": "filter",
        "parameters": {"N": shape.N, "D": shape.D, "mu": list(spec.mu), "sigma": spec.sigma,
                       "transform": "naive" if args.naive else "fast"},
        "weight_at_origin": float(w.values[shape.origin()]),
        "sum_check": {"real": re_res, "imag": im_res},
        "energy": {"re": float(np.sum(f.re**2)), "im": float(np.sum(f.im**2))},
        "re_im_inner_product": float(np.sum(f.re * f.im)),
        "files": files,
        "timings": {"synthesis_s": elapsed},
    }


# --- bank -------------------------------------------------------------------

def _filter_name(i, c):
    return f"{i:03d}_r{c.r:g}_theta{c.theta:.4f}.lgfb"


def _run_bank(args, prepared):
    spec, _ = prepared
    out = Path(args.out)
    (out / "filters").mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    bank = build_bank(spec, workers=args.workers)
    elapsed = time.perf_counter() - t0
    names = []
    for i, (c, f) in enumerate(zip(bank.centers, bank.filters)):
        name = _filter_name(i, c)
        save_filter(out / "filters" / name, f, r=c.r, theta=c.theta, index=i)
        names.append(name)
    write_pgm(out / "mosaic.pgm", bank_mosaic(bank))
    files = ["mosaic.pgm"]
    if not args.no_png:
        from .plotting import plot_bank

        plot_bank(bank, out / "bank.png")
        files.append("bank.png")
    report = {"command": "bank", **bank.report(), "filters": names, "files": files,
              "timings": {"build_s": elapsed}}
    return report


# --- coverage ---------------------------------------------------------------

def _run_coverage(args, prepared):
    spec, full_circle = prepared
    if args.full_circle is not None:
        full_circle = args.full_circle
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    used = full_circle_spec(spec) if full_circle else spec
    t0 = time.perf_counter()
    cov = coverage_sum(used)
    re = idft_fast(cov).re
    origin = cov.shape.origin()
    identity = re / re[origin]
    off = identity.copy()
    off[origin] = 0.0
    residual = float(np.max(np.abs(off)))
    elapsed = time.perf_counter() - t0
    save_weights(out / "coverage.lgfb", cov, semantic="coverage")
    export_image(cov.values, out / "coverage.pgm", "minmax")
    export_image(identity, out / "identity.pgm")
    files = ["coverage.lgfb", "coverage.pgm", "identity.pgm"]
    if not args.no_png:
        from .plotting import plot_coverage

        plot_coverage(cov, identity, out / "coverage.png", residual)
        files.append("coverage.png")
    kept, _ = ring_centers(used)
    return {
        "command": "coverage",
        "full_circle": full_circle,
        "radii": list(used.radii),
        "angle_count": len(used.angles()),
        "center_count": len(kept),
        "identity_residual": residual,
        "files": files,
        "timings": {"coverage_s": elapsed},
    }


# --- apply ------------------------------------------------------------------

def _prepare_apply(args):
    bank_dir = Path(args.bank)
    paths = sorted((bank_dir / "filters").glob("*.lgfb"))
    if not paths:
        raise UsageError(f"no filter tensors under {bank_dir / 'filters'}")
    filters = [load_filter(p) for p in paths]
    sig_path = Path(args.signal)
    if not sig_path.exists():
        raise UsageError(f"signal file not found: {sig_path}")
    if sig_path.suffix.lower() in (".pgm", ".pnm"):
        signal = read_pgm(sig_path)
    else:
        signal = read_tensor(sig_path, expect_dtype="f64").data
    D = {f.shape.D for f in filters}
    if D != {signal.ndim}:
        raise UsageError(f"signal is {signal.ndim}-D but filters are {sorted(D)}-D")
    if args.mode == CIRCULAR:
        N = max(f.shape.N for f in filters)
        if min(signal.shape) < N:
            raise UsageError(f"circular mode needs every signal axis >= {N}; got {signal.shape}")
    metas = [read_tensor(p).meta for p in paths]
    return paths, filters, metas, signal


def _run_apply(args, prepared):
    paths, filters, metas, signal = prepared
    out = Path(args.out)
    (out / "responses").mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    rs = apply_bank(signal, filters, args.mode, workers=args.workers)
    elapsed = time.perf_counter() - t0
    rows = []
    for i, (p, resp, e, meta) in enumerate(zip(paths, rs.responses, rs.energies, metas)):
        write_tensor(out / "responses" / f"{i:03d}.lgfb", resp, "response",
                     {"filter": p.name, "mode": args.mode})
        mu = meta.get("mu", [])
        rows.append({"index": i, "filter": p.name, "r": meta.get("r", ""),
                     "theta": meta.get("theta", ""),
                     "mu": " ".join(repr(v) for v in mu), "energy": repr(float(e))})
    with open(out / "energies.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    files = ["energies.csv", "responses/"]
    if not args.no_png:
        from .plotting import plot_energies

        plot_energies(rs.energies, out / "energies.png", [str(i) for i in range(len(rows))])
        files.append("energies.png")
    return {
        "command": "apply",
        "mode": args.mode,
        "signal_shape": list(signal.shape),
        "filter_count": len(filters),
        "energies": [float(e) for e in rs.energies],
        "files": files,
        "timings": {"apply_s": elapsed},
    }


# --- check ------------------------------------------------------------------

def _run_check(args, prepared):
    from .checks import run_checks

    results = run_checks()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}", file=sys.stderr)
    return {
        "command": "check",
        "passed": all(ok for _, ok, _ in results),
        "results": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results],
    }


def build_parser():
    p = argparse.ArgumentParser(prog="loggabor", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_default):
        sp.add_argument("--out", default=out_default, help="output directory")
        sp.add_argument("--report", default=None,
                        help="report path; '-' for stdout (default: OUT/report.json)")
        sp.add_argument("--no-png", action="store_true", help="skip matplotlib figures")

    sp = sub.add_parser("filter", help="synthesize one filter")
    sp.add_argument("--n", type=int)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--mu", type=_floats, help="center on log axes, e.g. 20,20")
    sp.add_argument("--sigma", type=float)
    sp.add_argument("--config", help="JSON with N, D, mu, sigma (e.g. paper-fig1.json)")
    sp.add_argument("--naive", action="store_true", help="use the direct O(N^2D) transform")
    sp.add_argument("--no-images", action="store_true")
    common(sp, "out/filter")

    sp = sub.add_parser("bank", help="build a filter bank from a config file")
    sp.add_argument("--config", required=True)
    sp.add_argument("--workers", type=int, default=None)
    common(sp, "out/bank")

    sp = sub.add_parser("coverage", help="coverage sum and identity residual")
    sp.add_argument("--config", required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--full-circle", dest="full_circle", action="store_true", default=None)
    g.add_argument("--no-full-circle", dest="full_circle", action="store_false")
    common(sp, "out/coverage")

    sp = sub.add_parser("apply", help="apply a saved bank to a signal")
    sp.add_argument("--bank", required=True, help="directory written by 'bank'")
    sp.add_argument("--signal", required=True, help=".pgm image or .lgfb real tensor")
    sp.add_argument("--mode", choices=(CIRCULAR, PADDED), default=PADDED)
    sp.add_argument("--workers", type=int, default=None)
    common(sp, "out/apply")

    sp = sub.add_parser("check", help="run the invariant suite")
    sp.add_argument("--report", default="-")
    sp.add_argument("--out", default=".")
    return p


_COMMANDS = {
    "filter": (_prepare_filter, _run_filter),
    "bank": (lambda a: load_bank_config(_config_path(a.config)), _run_bank),
    "coverage": (lambda a: load_bank_config(_config_path(a.config)), _run_coverage),
    "apply": (_prepare_apply, _run_apply),
    "check": (lambda a: None, _run_check),
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    prepare, run = _COMMANDS[args.command]
    try:
        prepared = prepare(args)
    except (UsageError, ConfigError, TensorFileError, ValueError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"loggabor {args.command}: error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run(args, prepared)
        _emit_report(report, Path(args.out), args.report)
    except Exception as exc:
        log.debug("internal error", exc_info=True)
        print(f"loggabor {args.command}: internal error: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 1
    if args.command == "check" and not report["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
