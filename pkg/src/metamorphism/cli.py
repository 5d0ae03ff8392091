"""Command-line entry point: ``metamorphism <command> [options]``.

Exit status is 0 on success, 1 when a verification or certification fails
and 2 when the input is invalid.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import io
from .fiducial import FiducialSpec, annihilation_residual, from_spec, gaussian
from .image_space import SliceStack, Tolerances, edge_fraction, residual_report
from .signals import Context, MeasureSpec
from .transform import contravariant, covariant_fast
from .verify import DEFAULT_SEED, SUITES, run_suites

CERTIFICATE_TOLERANCE = 1e-7


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    hbar: float = 1.0
    n: int = 512
    half_width: float = 8.0
    b: float = 0.0
    r: float = 1.0
    h_b: float = 1e-3
    h_r: float = 1e-3
    tolerances: dict = field(default_factory=dict)
    weight: str = "default"

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 2 and self.n & (self.n - 1) == 0):
            raise UsageError(f"grid size n must be a power of two, got {self.n}")
        for name in ("hbar", "half_width", "r", "h_b", "h_r"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise UsageError(f"{name} must be a positive number, got {value!r}")
        if not self.r - self.h_r > 0:
            raise UsageError(f"r - h_r must stay positive (r={self.r}, h_r={self.h_r})")
        if self.weight not in ("default", "paper"):
            raise UsageError(f"weight must be 'default' or 'paper', got {self.weight!r}")
        known = {f.name for f in fields(Tolerances)}
        unknown = set(self.tolerances) - known
        if unknown:
            raise UsageError(f"unknown tolerance keys {sorted(unknown)}; expected {sorted(known)}")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)}; expected {sorted(known)}")
        return cls(**data)

    @property
    def paper_weight(self) -> bool:
        return self.weight == "paper"

    def context(self) -> Context:
        return Context(self.hbar, self.n, self.half_width)

    def tolerance_set(self) -> Tolerances:
        return Tolerances(**self.tolerances)


def load_config(args) -> RunConfig:
    data = asdict(RunConfig())
    if getattr(args, "config", None):
        given = io.read_json(args.config)
        if not isinstance(given, dict):
            raise UsageError("config file must hold a JSON object")
        data.update(given)
    for key in ("hbar", "n", "half_width", "b", "r", "h_b", "h_r", "weight"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    return RunConfig.from_dict(data)


def load_fiducial(arg: str, ctx: Context):
    """``gaussian``, a fiducial spec JSON, or a signal JSON."""
    if arg == "gaussian":
        return gaussian(ctx)
    data = io.read_json(arg)
    if isinstance(data, dict) and "family" in data:
        return _built_signal(io.SignalDocument.from_dict(data), ctx)
    return from_spec(FiducialSpec.from_dict(data), ctx)


def _built_signal(doc: io.SignalDocument, ctx: Context):
    if not math.isclose(doc.hbar, ctx.hbar, rel_tol=1e-14):
        raise UsageError(f"signal hbar {doc.hbar} differs from the run's hbar {ctx.hbar}")
    return doc.build()


def _stack(f, phi, cfg: RunConfig, ctx: Context, scale: float = 1.0) -> SliceStack:
    return SliceStack.from_provider(
        lambda b, r: covariant_fast(f, phi, b, r, ctx), cfg.b, cfg.r, cfg.h_b * scale, cfg.h_r * scale
    )


def cmd_transform(args, cfg: RunConfig) -> int:
    ctx = cfg.context()
    f = _built_signal(io.read_signal(args.signal), ctx)
    phi = load_fiducial(args.fiducial, ctx)
    if args.out is None and args.stack is None:
        raise UsageError("give --out and/or --stack")
    result = covariant_fast(f, phi, cfg.b, cfg.r, ctx)
    if args.out:
        io.write_field_csv(args.out, result.field)
    if args.stack:
        io.write_stack(args.stack, _stack(f, phi, cfg, ctx))
        io.write_stack(Path(args.stack) / io.HALF_STEP_DIR, _stack(f, phi, cfg, ctx, 0.5))
    print(f"slice (b, r) = ({cfg.b}, {cfg.r}); norm = {result.norm(cfg.paper_weight):.17g} ({cfg.weight} weight)")
    edge = edge_fraction(result.field)
    if edge > cfg.tolerance_set().edge:
        # the frequency axis spans n / (2 * half_width); a coarse grid clips the image
        print(f"warning: {edge:.1e} of the field norm sits on the grid edge; raise --n or lower --half-width",
              file=sys.stderr)
    return 0


def cmd_reconstruct(args, cfg: RunConfig) -> int:
    if args.stack:
        stack = io.read_stack(args.stack)
        fld = stack.center
    elif args.field:
        fld = io.read_field_csv(args.field, cfg.b, cfg.r, cfg.hbar)
    else:
        raise UsageError("give --stack or --field")
    ctx = Context(fld.hbar, cfg.n, cfg.half_width)
    phi = load_fiducial(args.fiducial, ctx)
    f = contravariant(fld, phi, MeasureSpec.dirac(fld.b, fld.r, cfg.paper_weight), ctx)
    io.write_signal(args.out, io.SignalDocument.of(f, fld.hbar))
    print(f"reconstructed from slice (b, r) = ({fld.b}, {fld.r}); norm = {f.norm():.17g}")
    return 0


def cmd_analyze(args, cfg: RunConfig) -> int:
    stack = io.read_stack(args.stack)
    half_dir = Path(args.stack) / io.HALF_STEP_DIR
    half = io.read_stack(half_dir) if (half_dir / "meta.json").is_file() else None
    report = residual_report(stack, half)
    tol = cfg.tolerance_set()
    limits = {"c1": tol.spectral, "c2": tol.finite_difference, "s1": tol.finite_difference, "s2": tol.finite_difference}
    report["tolerances"] = limits
    report["within_tolerance"] = all(report[k] <= v for k, v in limits.items())
    if args.report:
        io.write_json(args.report, report)
    for key in ("c1", "c2", "s1", "s2", "parabolic"):
        line = f"{key:10s} {report[key]:.3e}"
        if "halving_ratio" in report and key in report["halving_ratio"]:
            line += f"  (halving ratio {report['halving_ratio'][key]:.3f})"
        print(line)
    if half is None:
        print("no half-step stack found; convergence was not checked")
    return 0 if report["within_tolerance"] or not args.strict else 1


def cmd_verify(args, cfg: RunConfig) -> int:
    report = run_suites(args.suite, args.seed)
    for name, suite in report["suites"].items():
        for c in suite["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            print(f"{mark} {name}.{c['name']}: {c['value']:.3e} {c['comparison']} {c['tolerance']:.1e}")
    print(f"seed {report['seed']}: {'all checks passed' if report['passed'] else 'some checks failed'}")
    if args.report:
        io.write_json(args.report, report)
    return 0 if report["passed"] else 1


def cmd_fiducial(args, cfg: RunConfig) -> int:
    ctx = cfg.context()
    spec = io.read_fiducial_spec(args.spec)
    phi = from_spec(spec, ctx)
    residual = annihilation_residual(spec, phi, ctx)
    ok = residual < CERTIFICATE_TOLERANCE
    certificate = {
        "norm": phi.norm(),
        "annihilation_residual": residual,
        "tolerance": CERTIFICATE_TOLERANCE,
        "passed": ok,
    }
    doc = io.SignalDocument.of(phi, ctx.hbar, spec=spec.to_dict(), certificate=certificate)
    io.write_signal(args.out, doc)
    print(f"norm {certificate['norm']:.17g}; annihilation residual {residual:.3e}")
    return 0 if ok else 1


def _positive_int(text):
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("must be at least 2")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with run settings")
    common.add_argument("--hbar", type=float)
    common.add_argument("--n", type=_positive_int, help="samples per axis (power of two)")
    common.add_argument("--half-width", dest="half_width", type=float, help="window is [-w, w)")
    common.add_argument("--weight", choices=("default", "paper"), help="slice weight normalisation")

    slice_opts = argparse.ArgumentParser(add_help=False)
    slice_opts.add_argument("--b", type=float)
    slice_opts.add_argument("--r", type=float)
    slice_opts.add_argument("--h-b", dest="h_b", type=float)
    slice_opts.add_argument("--h-r", dest="h_r", type=float)

    parser = argparse.ArgumentParser(prog="metamorphism", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", parents=[common, slice_opts], help="covariant transform of a signal")
    p.add_argument("--signal", required=True)
    p.add_argument("--fiducial", default="gaussian", help="'gaussian', a spec JSON or a signal JSON")
    p.add_argument("--out", help="field CSV for the (b, r) slice")
    p.add_argument("--stack", help="directory for the five-slice stencil (plus half/ at half steps)")
    p.set_defaults(run=cmd_transform)

    p = sub.add_parser("reconstruct", parents=[common, slice_opts], help="contravariant transform")
    p.add_argument("--stack")
    p.add_argument("--field")
    p.add_argument("--fiducial", default="gaussian")
    p.add_argument("--out", required=True)
    p.set_defaults(run=cmd_reconstruct)

    p = sub.add_parser("analyze", parents=[common], help="image-space residuals of a stack")
    p.add_argument("--stack", required=True)
    p.add_argument("--report")
    p.add_argument("--strict", action="store_true", help="exit 1 when a residual exceeds its tolerance")
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suites")
    p.add_argument("--suite", default="all", choices=("all",) + SUITES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--report")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("fiducial", parents=[common], help="build and certify a fiducial vector")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(run=cmd_fiducial)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        cfg = load_config(args)
        return args.run(args, cfg)
    except (OSError, ValueError, TypeError, KeyError) as exc:
        # InvalidSpecError, InvalidInputError, grid and window errors are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return 2


run = main

if __name__ == "__main__":
    sys.exit(main())
