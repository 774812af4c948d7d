"""Command-line interface: ``renyi-maxent {profile,figure,threshold,report,verify}``.

Curves are written as CSV (header row, ``%.12e`` fields, LF line endings);
reports as JSON with a fixed key order.  Output goes to ``--out`` or stdout.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import diffusion, functionals, numerics, specfun, variational
from .errors import RenyiMaxentError
from .profiles import AlphaRegime, MaxEntProfile, RadialGaussian, ZkbProfile, derive_constants

SUITES = ("specfun", "properties", "variational", "diffusion")
FIGURE_DEFAULT_ALPHA = {1: 0.75, 2: 2.2}
FIGURE_SAMPLES = 1001
MIN_GRID_N = 64


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output helpers


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def _json_text(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def _csv_text(header, columns) -> str:
    rows = np.column_stack(columns)
    lines = [",".join(header)]
    lines.extend(",".join("%.12e" % v for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# commands


def _validated_regime(args) -> AlphaRegime:
    if args.grid_n is not None and args.grid_n < MIN_GRID_N:
        raise UsageError(f"--grid-n must be >= {MIN_GRID_N}, got {args.grid_n}")
    return AlphaRegime.from_alpha(args.alpha, args.dim)


def _maxent_from_args(args) -> MaxEntProfile:
    if args.time is not None:
        return MaxEntProfile.at_time(args.alpha, args.dim, args.time, args.mu1)
    return MaxEntProfile.create(args.alpha, args.dim, args.mu2, args.mu1)


def _envelope_length(shape) -> float:
    if isinstance(shape, RadialGaussian):
        return math.sqrt(shape.var)
    return 1.0 / math.sqrt(shape.b)


def auto_window(*shapes) -> float:
    """Half-width: the largest support radius, or six of the largest envelope lengths."""
    radii = [s.support_radius for s in shapes]
    if all(math.isfinite(r) for r in radii):
        return max(radii)
    return 6.0 * max(_envelope_length(s) for s in shapes)


def cmd_profile(args) -> int:
    regime = _validated_regime(args)
    prof = _maxent_from_args(args)
    c = derive_constants(regime)
    if args.format == "json":
        payload = {
            "alpha": prof.alpha,
            "d": prof.dimension,
            "regime": regime.regime.value,
            "mu1": prof.mu1,
            "mu2": prof.mu2,
            "time": prof.time,
            "constants": c._asdict(),
            "sup_norm": prof.sup_norm,
            "support_radius": prof.support_radius,
            "scale_length": prof.scale_length,
        }
        _emit(_json_text(payload), args.out)
        return 0
    shape = prof.shape()
    half = args.x_max if args.x_max is not None else auto_window(shape)
    n = args.grid_n or FIGURE_SAMPLES
    if prof.dimension == 1:
        x = np.linspace(prof.mu1 - half, prof.mu1 + half, n)
        _emit(_csv_text(["x", "f_maxent"], [x, prof(x)]), args.out)
    else:
        r = np.linspace(0.0, half, n)
        _emit(_csv_text(["r", "f_maxent"], [r, shape(r)]), args.out)
    return 0


def figure_data(which: int, alpha: float | None = None, d: int = 1, t: float = 1.0, x_max: float | None = None, n: int = FIGURE_SAMPLES):
    """x samples with the maxent profile and the source solution at time t."""
    if which not in FIGURE_DEFAULT_ALPHA:
        raise UsageError(f"figure must be 1 or 2, got {which!r}")
    alpha = FIGURE_DEFAULT_ALPHA[which] if alpha is None else alpha
    f = MaxEntProfile.at_time(alpha, d, t)
    u = ZkbProfile.create(alpha, d, t)
    half = x_max if x_max is not None else auto_window(f.shape(), u.shape())
    x = np.linspace(-half, half, n)
    if d == 1:
        return x, f(x), u(x)
    return x, f.radial(np.abs(x)), u.radial(np.abs(x))


def cmd_figure(args) -> int:
    alpha = args.alpha if args.alpha is not None else FIGURE_DEFAULT_ALPHA.get(args.which)
    if args.which not in FIGURE_DEFAULT_ALPHA:
        raise UsageError(f"figure must be 1 or 2, got {args.which!r}")
    args.alpha = alpha
    _validated_regime(args)
    t = 1.0 if args.time is None else args.time
    x, fv, uv = figure_data(args.which, alpha, args.dim, t, args.x_max, args.grid_n or FIGURE_SAMPLES)
    _emit(_csv_text(["x", "f_maxent", "u_zkb"], [x, fv, uv]), args.out)
    return 0


def cmd_threshold(args) -> int:
    if args.dim not in (1, 2, 3):
        raise UsageError(f"--dim must be 1, 2 or 3, got {args.dim}")
    res = diffusion.threshold_alpha(args.dim, args.tol)
    _emit(_json_text(res.to_dict()), args.out)
    return 0


def cmd_report(args) -> int:
    _validated_regime(args)
    prof = _maxent_from_args(args)
    n = args.grid_n or 2048
    f = functionals.profile_field(prof, n)
    rep = functionals.entropy_report(f, prof.alpha).to_dict()
    rep = {"mu1": prof.mu1, "mu2": prof.mu2, "time": prof.time, **rep}
    _emit(_json_text(rep), args.out)
    return 0


def _suite_specfun(seed):
    rep = specfun.verify_appendix_identities(1e-10)
    rep.extend(numerics.verify_integral_formulas())
    return rep


PROPERTY_BATTERY = (
    ("porous alpha=2", lambda: functionals.profile_field(MaxEntProfile.create(2.0, 1, 1.0)), (0.5, 0.8, 1.2, 2.0, 5.0)),
    ("fast alpha=0.8", lambda: functionals.profile_field(MaxEntProfile.create(0.8, 1, 1.0)), (0.7, 0.9, 1.5, 2.0, 5.0)),
    ("gaussian d=1", lambda: functionals.gaussian_field(1.0), (0.5, 0.8, 1.2, 2.0, 5.0)),
    ("gaussian d=3", lambda: functionals.gaussian_field(1.0, 3), (0.5, 0.8, 1.2, 2.0, 5.0)),
    ("uniform [0,3]", lambda: functionals.uniform_field(3.0), (0.5, 0.8, 1.2, 2.0, 5.0)),
)


def _suite_properties(seed):
    rep = functionals.verify_profile_family()
    rep.suite = "properties"
    for label, make, alphas in PROPERTY_BATTERY:
        sub = functionals.verify_entropy_properties(make(), alphas)
        for c in sub.checks:
            rep.add(type(c)(f"{c.name} [{label}]", c.passed, c.deviation, c.measured, c.expected, c.soft, c.note))
    return rep


def _suite_variational(seed):
    return variational.verify_variational(seed=seed)


def _suite_diffusion(seed):
    return diffusion.verify_diffusion()


SUITE_RUNNERS = {
    "specfun": _suite_specfun,
    "properties": _suite_properties,
    "variational": _suite_variational,
    "diffusion": _suite_diffusion,
}


def run_verify(suites=SUITES, seed: int = 42) -> dict:
    """Run the selected suites; ``ok`` is True iff every hard check passes."""
    out = {"seed": seed, "suites": {}}
    ok = True
    for name in suites:
        rep = SUITE_RUNNERS[name](seed)
        ok &= rep.ok
        out["suites"][name] = rep.to_dict()
    out["ok"] = ok
    return out


def _parse_suites(values) -> list[str]:
    if not values:
        return list(SUITES)
    names = []
    for v in values:
        names.extend(s.strip() for s in v.split(",") if s.strip())
    bad = [s for s in names if s not in SUITES]
    if bad:
        raise UsageError(f"unknown suite(s) {bad}; choose from {list(SUITES)}")
    return list(dict.fromkeys(names))


def cmd_verify(args) -> int:
    suites = _parse_suites(args.suite)
    result = run_verify(suites, args.seed)
    _emit(_json_text(result), args.out)
    return 0 if result["ok"] else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=None, help="order alpha")
    common.add_argument("--dim", type=int, default=1, help="dimension d in {1,2,3}")
    common.add_argument("--mu1", type=float, default=0.0, help="mean (every coordinate)")
    common.add_argument("--mu2", type=float, default=1.0, help="per-coordinate standard deviation")
    common.add_argument("--time", type=float, default=None, help="time t; sets mu2 = t^gamma")
    common.add_argument("--grid-n", type=int, default=None, help=f"samples or quadrature nodes (>= {MIN_GRID_N})")
    common.add_argument("--x-max", type=float, default=None, help="half-width of the sample window (default: auto)")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--seed", type=int, default=42)

    parser = argparse.ArgumentParser(prog="renyi-maxent", description="Rényi maximum-entropy profiles and checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("profile", parents=[common], help="sample the maximum-entropy profile")
    p.set_defaults(func=cmd_profile, fmt_default="csv")
    p = sub.add_parser("figure", parents=[common], help="maximizer vs source solution, CSV")
    p.add_argument("which", type=int, help="1 (alpha=3/4) or 2 (alpha=2.2)")
    p.set_defaults(func=cmd_figure, fmt_default="csv")
    p = sub.add_parser("threshold", parents=[common], help="order where C_alpha = A_alpha")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_threshold, fmt_default="json")
    p = sub.add_parser("report", parents=[common], help="entropy report for the maximizer, JSON")
    p.set_defaults(func=cmd_report, fmt_default="json")
    p = sub.add_parser("verify", parents=[common], help="run the conformance suites, JSON")
    p.add_argument("--suite", action="append", default=None, help=f"one of {', '.join(SUITES)}; repeatable or comma-separated")
    p.set_defaults(func=cmd_verify, fmt_default="json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.fmt_default
    if args.command in ("profile", "report") and args.alpha is None:
        parser.error("--alpha is required")
    if args.command in ("figure", "threshold", "report", "verify") and args.format != args.fmt_default:
        parser.error(f"{args.command} only writes {args.fmt_default}")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except RenyiMaxentError as exc:
        print(f"renyi-maxent: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"renyi-maxent: I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
