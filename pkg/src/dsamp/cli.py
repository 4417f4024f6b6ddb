"""Command-line front door: sampling, reconstruction, certificates, demos.

Exit codes: 0 success, 1 usage error, 2 computation error. Data goes to
files or stdout; diagnostics go to stderr. Identical argv on identical
files produces byte-identical outputs.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import corpus as corpus_mod
from . import reconstruct as rec_mod
from .bounds import kernel_sum_bound, tail_bound
from .kernels import sinc_array
from .lattice import Bandwidth, MultiIndex, TruncationWindow
from .sampleio import read_samples, write_field, write_samples


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _parse_float_token(tok: str) -> float:
    if tok.strip().lower() == "pi":
        return math.pi
    return float(tok)


def _parse_sigma(text: str) -> Bandwidth:
    try:
        return Bandwidth(tuple(_parse_float_token(t) for t in text.split(",")))
    except ValueError as exc:
        raise UsageError(f"bad --sigma {text!r}: {exc}") from None


def _parse_tau(text: str) -> TruncationWindow:
    try:
        return TruncationWindow(tuple(int(t) for t in text.split(",")))
    except ValueError as exc:
        raise UsageError(f"bad --tau {text!r}: {exc}") from None


def _parse_k(text: str) -> MultiIndex:
    try:
        return MultiIndex.from_string(text.strip())
    except ValueError as exc:
        raise UsageError(f"bad multi-index {text!r}: {exc}") from None


def _parse_axis(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) == 1:
        return [_parse_float_token(parts[0])]
    if len(parts) != 3:
        raise UsageError(f"grid axis must be 'start:stop:step' or a single number, got {text!r}")
    start, stop, step = (_parse_float_token(p) for p in parts)
    if step == 0.0 or not math.isfinite(step):
        raise UsageError(f"grid step must be nonzero and finite, got {text!r}")
    q = (stop - start) / step
    if q < -1e-9:
        raise UsageError(f"grid step walks away from stop in {text!r}")
    n = round(q) if abs(q - round(q)) <= 1e-9 else math.floor(q)
    return [start + i * step for i in range(int(n) + 1)]


def _parse_grid(text: str) -> list[list[float]]:
    return [_parse_axis(axis) for axis in text.split(",")]


def _corpus_from_args(args, sigma: Bandwidth):
    shift = None
    if getattr(args, "shift", None) is not None:
        shift = tuple(_parse_float_token(t) for t in args.shift.split(","))
    k_tilde = None
    if getattr(args, "k_tilde", None) is not None:
        k_tilde = _parse_k(args.k_tilde)
    return corpus_mod.named_corpus(args.corpus, sigma, shift=shift,
                                   bump_sharpness=getattr(args, "sharpness", 1.0),
                                   k_tilde=k_tilde)


def _oracle_grid(f, grid) -> np.ndarray:
    shape = tuple(len(a) for a in grid)
    out = np.empty(shape, dtype=float)
    it = np.ndindex(*shape)
    for idx in it:
        z = [grid[j][i] for j, i in enumerate(idx)]
        v = complex(f.value(z))
        out[idx] = v.real
    return out


def _add_corpus_flags(p, need_corpus=True):
    if need_corpus:
        p.add_argument("--corpus", required=True, choices=corpus_mod.CORPUS_NAMES,
                       help="corpus family name")
    p.add_argument("--shift", help="comma-separated shift for shifted-sinc")
    p.add_argument("--sharpness", type=float, default=1.0,
                   help="bump width fraction for the quadrature families (default 1)")
    p.add_argument("--k-tilde", dest="k_tilde", help="0/1 digits for the tilde-f channel")


def build_parser() -> _Parser:
    top = _Parser(prog="dsamp", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("sample", parents=[], help="sample a corpus family to a DSAMP file")
    _add_corpus_flags(p)
    p.add_argument("--sigma", required=True, help="comma-separated bandwidths ('pi' allowed)")
    p.add_argument("--tau", required=True, help="comma-separated window radii")
    p.add_argument("--theta", type=int, default=2, choices=(1, 2), help="lattice spacing factor")
    p.add_argument("--out", required=True, help="output DSAMP path")

    p = sub.add_parser("reconstruct", help="evaluate a sampling series on a grid, write CSV")
    p.add_argument("--samples", required=True, help="input DSAMP path")
    p.add_argument("--method", required=True, choices=rec_mod.METHODS)
    p.add_argument("--grid", required=True, help="per-axis start:stop:step, comma-separated")
    p.add_argument("--drop-channel", dest="drop_channel",
                   help="0/1 digits of a channel to zero out (hermite-nd only)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--plot", help="also render the field to this image path")

    p = sub.add_parser("compare", help="reconstruction vs corpus oracle error report")
    p.add_argument("--samples", required=True)
    p.add_argument("--method", required=True, choices=rec_mod.METHODS)
    p.add_argument("--grid", required=True)
    _add_corpus_flags(p)
    p.add_argument("--out", help="optional CSV of |error| per grid point")
    p.add_argument("--plot", help="also render reconstruction/oracle/difference")

    p = sub.add_parser("bound", help="emit a truncation tail-bound certificate")
    p.add_argument("--samples", required=True)
    p.add_argument("--k", required=True, help="0/1 digits of the channel")
    p.add_argument("--tau-inner", dest="tau_inner", required=True,
                   help="comma-separated kept-region radii")
    p.add_argument("--p1", type=float, default=2.0, help="Holder exponent (default 2)")
    p.add_argument("--probe-grid", dest="probe_grid", required=True,
                   help="per-axis start:stop:step for the probe points")

    p = sub.add_parser("demo-counterexample",
                       help="show the three-channel 2-D formula reconstructing zero from nonzero input")
    p.add_argument("--sigma", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--sharpness", type=float, default=1.0)
    p.add_argument("--grid", default="-2:2:0.25,-2:2:0.25")
    p.add_argument("--plot", help="render the failed reconstruction next to the truth")

    p = sub.add_parser("demo-tilde-f", help="full vs channel-dropped mixed-derivative series")
    p.add_argument("--sigma", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--k-tilde", dest="k_tilde", required=True)
    p.add_argument("--sharpness", type=float, default=1.0)
    p.add_argument("--grid", default="-2:2:0.25,-2:2:0.25")
    p.add_argument("--plot", help="render the full series next to the oracle")

    p = sub.add_parser("kernel-check", help="empirical audit of the uniform kernel sum bound")
    p.add_argument("--r", default="1.5,2,3", help="comma-separated exponents > 1")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--window", type=int, default=10000, help="summation radius |m| <= window")
    p.add_argument("--seed", type=int, default=0)

    return top


def _cmd_sample(args, out) -> int:
    sigma = _parse_sigma(args.sigma)
    tau = _parse_tau(args.tau)
    f = _corpus_from_args(args, sigma)
    samples = corpus_mod.sample_function(f, args.theta, tau)
    write_samples(samples, args.out)
    print(f"wrote {len(samples.records)} records to {args.out}", file=sys.stderr)
    return 0


def _cmd_reconstruct(args, out) -> int:
    samples = read_samples(args.samples)
    grid = _parse_grid(args.grid)
    drop = _parse_k(args.drop_channel) if args.drop_channel else None
    values = rec_mod.reconstruct_grid(samples, args.method, grid, drop_channel=drop)
    write_field(values, grid, args.out)
    if args.plot:
        from .plotting import plot_field
        plot_field(grid, values, args.plot, title=args.method)
    return 0


def _cmd_compare(args, out) -> int:
    samples = read_samples(args.samples)
    grid = _parse_grid(args.grid)
    f = _corpus_from_args(args, samples.sigma)
    values = rec_mod.reconstruct_grid(samples, args.method, grid)
    oracle = _oracle_grid(f, grid)
    err = np.abs(values - oracle)
    print(f"method {args.method}", file=out)
    print(f"points {err.size}", file=out)
    print(f"max_abs_error {_fmt(float(err.max()))}", file=out)
    print(f"mean_abs_error {_fmt(float(err.mean()))}", file=out)
    if args.out:
        write_field(err, grid, args.out)
    if args.plot:
        from .plotting import plot_comparison
        plot_comparison(grid, values, oracle, args.plot, labels=(args.method, "oracle"))
    return 0


def _cmd_bound(args, out) -> int:
    samples = read_samples(args.samples)
    k = _parse_k(args.k)
    tau_inner = _parse_tau(args.tau_inner)
    probe = _parse_grid(args.probe_grid)
    report = tail_bound(samples, k, tau_inner, args.p1, probe)
    print(f"k {report.k.to_string()}", file=out)
    print("tau_inner " + " ".join(str(t) for t in report.tau_inner), file=out)
    print(f"p1 {_fmt(report.p1)}", file=out)
    print(f"q1 {_fmt(report.q1)}", file=out)
    print(f"sample_tail_norm {_fmt(report.sample_tail_norm)}", file=out)
    print(f"kernel_factor {_fmt(report.kernel_factor)}", file=out)
    print(f"bound {_fmt(report.bound)}", file=out)
    return 0


def _cmd_demo_counterexample(args, out) -> int:
    sigma = _parse_sigma(args.sigma)
    if sigma.dim != 2:
        raise UsageError("demo-counterexample is 2-D; give two bandwidths")
    tau = _parse_tau(args.tau)
    grid = _parse_grid(args.grid)
    f = corpus_mod.make_counterexample(sigma, args.sharpness)
    samples = corpus_mod.sample_function(f, 2, tau)
    legacy = rec_mod.reconstruct_grid(samples, "legacy2d", grid)
    truth = _oracle_grid(f, grid)
    print(f"max_abs_legacy2d {_fmt(float(np.abs(legacy).max()))}", file=out)
    print(f"max_abs_true {_fmt(float(np.abs(truth).max()))}", file=out)
    if args.plot:
        from .plotting import plot_comparison
        plot_comparison(grid, legacy, truth, args.plot, labels=("legacy2d series", "true function"))
    return 0


def _cmd_demo_tilde_f(args, out) -> int:
    sigma = _parse_sigma(args.sigma)
    tau = _parse_tau(args.tau)
    kt = _parse_k(args.k_tilde)
    grid = _parse_grid(args.grid)
    f = corpus_mod.make_tilde_f(sigma, kt, args.sharpness)
    samples = corpus_mod.sample_function(f, 2, tau)
    full = rec_mod.reconstruct_grid(samples, "hermite-nd", grid)
    dropped = rec_mod.reconstruct_grid(samples, "hermite-nd", grid, drop_channel=kt)
    truth = _oracle_grid(f, grid)
    half = TruncationWindow(tuple(max(t // 2, 1) for t in tau))
    samples_half = corpus_mod.sample_function(f, 2, half)
    full_half = rec_mod.reconstruct_grid(samples_half, "hermite-nd", grid)
    print(f"k_tilde {kt.to_string()}", file=out)
    print(f"max_abs_full {_fmt(float(np.abs(full).max()))}", file=out)
    print(f"max_abs_dropped {_fmt(float(np.abs(dropped).max()))}", file=out)
    print("tau_half " + " ".join(str(t) for t in half), file=out)
    print(f"err_full_tau_half {_fmt(float(np.abs(full_half - truth).max()))}", file=out)
    print(f"err_full_tau {_fmt(float(np.abs(full - truth).max()))}", file=out)
    if args.plot:
        from .plotting import plot_comparison
        plot_comparison(grid, full, truth, args.plot, labels=("full series", "oracle"))
    return 0


def _cmd_kernel_check(args, out) -> int:
    rs = [float(t) for t in args.r.split(",")]
    if any(r <= 1.0 for r in rs):
        raise UsageError("--r entries must exceed 1")
    if args.trials < 1 or args.window < 1:
        raise UsageError("--trials and --window must be positive")
    rng = np.random.default_rng(args.seed)
    pairs = [(float(a), float(x)) for a, x in
             zip(rng.uniform(0.1, 4.0, args.trials), rng.uniform(-5.0, 5.0, args.trials))]
    m = np.arange(-args.window, args.window + 1, dtype=float)
    status = 0
    for r in rs:
        bound = kernel_sum_bound(r, 1)
        worst = 0.0
        for a, x in pairs:
            s = float(np.sum(np.abs(sinc_array(a * x - m)) ** r))
            worst = max(worst, s)
        ok = worst <= bound + 1e-6
        print(f"r {_fmt(r)} max_sum {_fmt(worst)} bound {_fmt(bound)} {'ok' if ok else 'EXCEEDED'}",
              file=out)
        if not ok:
            status = 2
    return status


_COMMANDS = {
    "sample": _cmd_sample,
    "reconstruct": _cmd_reconstruct,
    "compare": _cmd_compare,
    "bound": _cmd_bound,
    "demo-counterexample": _cmd_demo_counterexample,
    "demo-tilde-f": _cmd_demo_tilde_f,
    "kernel-check": _cmd_kernel_check,
}


# Flags whose values may begin with '-' (negative grid starts); fold the
# value into --flag=value form so argparse does not read it as an option.
_DASH_VALUE_FLAGS = ("--grid", "--probe-grid", "--shift")


def _merge_dash_values(argv):
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _DASH_VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def run(argv, out=None, err=None) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(_merge_dash_values(list(argv)))
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        parser.print_usage(err)
        return 1
    except SystemExit as exc:  # argparse --help
        return 0 if exc.code in (0, None) else 1
    if args.command is None:
        parser.print_usage(err)
        return 1
    try:
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return 1
    except (ValueError, KeyError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=err)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
