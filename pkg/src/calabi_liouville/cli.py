"""Command-line front end.

Every flag can also be given in a flat ``key=value`` config file passed with
``--config``; keys are flag names without the leading dashes, lists are
comma-separated, and flags on the command line win.  Exit status is 0 on
success, 1 for a configuration error and 2 for a numerical failure.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import estimates, poisson, specfun
from .calabi_ode import HypergeomParams, Mode
from .errors import DomainError, NumericalError
from .logvalue import LogValue
from .spectral import CalabiParams, SpectrumTable, toy_spectrum

COMMANDS = ("specfun", "certify", "solve", "classify", "spectrum")
DEFAULT_TOL = 1e-12


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value file; flags override its entries")
    p.add_argument("--output", default="-", help="output path, '-' for stdout")
    p.add_argument("--jobs", type=_positive_int, default=1, help="worker processes (1 = serial reference)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)


def _add_geometry(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--z0", type=float, default=1.0)
    p.add_argument("--lambda-D", dest="lambda_D", type=float, default=None)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--j-max", dest="j_max", type=int, default=2)
    p.add_argument("--per-weight", dest="per_weight", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spectrum", help="spectrum file written by the spectrum command")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="calabi-liouville", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("specfun", help="evaluate a special function on a grid")
    _add_common(p)
    p.add_argument("--fn", choices=("I", "K", "M", "U", "T", "gamma"), required=True)
    p.add_argument("--nu", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=-1.0)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--y", type=_floats, required=True, help="comma-separated arguments")

    p = sub.add_parser("certify", help="envelope certificates")
    _add_common(p)
    p.add_argument(
        "--what", choices=("bessel", "caseA", "caseB", "product", "monotonicity", "all"), default="all"
    )
    p.add_argument("--nu", type=_floats, default=list(estimates.DEFAULT_NU))
    p.add_argument("--n", type=_floats, default=[2.0, 3.0], help="dimensions")
    p.add_argument("--q", type=_floats, default=None, help="Q values (default depends on --what)")
    p.add_argument("--ymin", type=float, default=1.0)
    p.add_argument("--ymax", type=float, default=100.0)
    p.add_argument("--npts", type=int, default=estimates.DEFAULT_POINTS)
    p.add_argument("--eta", type=_floats, default=None, help="default: 0, delta_b, 2 delta_b")
    p.add_argument("--lambda-D", dest="lambda_D", type=float, default=None)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--lam", type=float, default=None, help="mode eigenvalue for monotonicity")
    p.add_argument("--z-max", dest="z_max", type=float, default=4.0)

    p = sub.add_parser("solve", help="particular solution of one mode")
    _add_common(p)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--lam", type=float, default=2.0)
    p.add_argument("--xi-amp", dest="xi_amp", type=float, default=1.0)
    p.add_argument("--xi-rate", dest="xi_rate", type=float, default=-1.0)
    p.add_argument("--xi-power", dest="xi_power", type=float, default=0.0)
    p.add_argument("--z1", type=float, default=1.0)
    p.add_argument("--z-max", dest="z_max", type=float, default=4.0)
    p.add_argument("--npts", type=int, default=16)

    p = sub.add_parser("classify", help="Liouville classification for boundary data")
    _add_common(p)
    _add_geometry(p)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--neumann", action="store_true")
    kind.add_argument("--dirichlet", action="store_true")
    p.add_argument("--kappa0", type=float, default=0.0, help="Neumann slope")
    p.add_argument("--flux", type=float, default=None, help="Dirichlet slope normalization")
    p.add_argument("--mode-fluxes", dest="mode_fluxes", type=_floats, default=None)
    p.add_argument("--boundary-values", dest="boundary_values", type=_floats, default=None)
    p.add_argument("--growth-exponent", dest="growth_exponent", type=float, default=None)

    p = sub.add_parser("spectrum", help="write a synthetic spectrum table")
    _add_common(p)
    _add_geometry(p)
    p.add_argument("--jitter", type=float, default=0.0)
    return parser


# ------------------------------------------------------------- config ----


def read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    for num, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("_", "-")] = value
    return out


def _config_argv(subparser: argparse.ArgumentParser, config: dict[str, str]) -> list[str]:
    options = {}
    for action in subparser._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                options[opt[2:].replace("_", "-")] = action
    argv: list[str] = []
    for key, value in config.items():
        if key in ("config", "command"):
            continue
        action = options.get(key)
        if action is None:
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() in ("1", "true", "yes", "on"):
                argv.append(f"--{key}")
            elif value.lower() not in ("0", "false", "no", "off"):
                raise ConfigError(f"config key {key!r} expects a boolean")
        else:
            argv.append(f"--{key}={value}")
    return argv


def _config_path(argv: Sequence[str]) -> str | None:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    path = _config_path(argv)
    if path is None or not argv or argv[0] not in COMMANDS:
        return parser.parse_args(argv)
    config = read_config(path)
    command = argv[0]
    if "command" in config and config["command"] != command:
        raise ConfigError(f"config is for command {config['command']!r}, not {command!r}")
    sub = parser._subparsers._group_actions[0].choices[command]  # type: ignore[union-attr]
    # config entries go first so that repeated flags from argv take precedence
    return parser.parse_args([command, *_config_argv(sub, config), *argv[1:]])


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    params: CalabiParams | None = None
    tolerances: dict[str, float] = field(default_factory=dict)

    @property
    def output_path(self) -> str:
        return self.args.output


def validate(args: argparse.Namespace) -> RunConfig:
    """Check every field before any computation runs."""
    if not args.tol > 0:
        raise ConfigError("--tol must be positive")
    cfg = RunConfig(args.command, args, tolerances={"tol": args.tol})
    if args.command == "specfun":
        if not args.y:
            raise ConfigError("--y needs at least one value")
        if args.fn in ("I", "K") and any(y <= 0 for y in args.y):
            raise ConfigError("Bessel functions need y > 0")
        if args.fn == "U" and any(y <= 0 for y in args.y):
            raise ConfigError("U needs y > 0")
        if args.fn == "T" and any(y >= 0 for y in args.y):
            raise ConfigError("T needs y < 0")
    elif args.command == "certify":
        if not 1.0 <= args.ymin <= args.ymax:
            raise ConfigError("need 1 <= ymin <= ymax")
        if args.npts < 1:
            raise ConfigError("--npts must be positive")
        for n in args.n:
            if n != int(n) or n < 2:
                raise ConfigError(f"dimension {n} is not an integer >= 2")
        if args.lambda_D is not None and args.lambda_D <= 0:
            raise ConfigError("--lambda-D must be positive")
        if args.j < 1:
            raise ConfigError("--j must be >= 1 for certificates")
        if args.eta is not None and any(e < 0 for e in args.eta):
            raise ConfigError("--eta values must be non-negative")
    elif args.command == "solve":
        if args.n < 2 or args.z1 < 1.0 or not args.z_max > args.z1 or args.npts < 2:
            raise ConfigError("need n >= 2, z1 >= 1, z_max > z1 and npts >= 2")
        try:
            _solve_mode_of(args).check(args.n)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
    elif args.command in ("classify", "spectrum"):
        cfg.params = _params_of(args)
        if args.command == "classify" and not (args.neumann or args.dirichlet):
            raise ConfigError("classify needs --neumann or --dirichlet")
        if args.command == "spectrum" and not 0.0 <= args.jitter < 1.0:
            raise ConfigError("--jitter must lie in [0, 1)")
    return cfg


def _params_of(args: argparse.Namespace) -> CalabiParams:
    if args.spectrum:
        return _load_spectrum(args.spectrum).params
    lambda_d = float(args.n) if args.lambda_D is None else args.lambda_D
    try:
        return CalabiParams(args.n, args.z0, lambda_d, args.delta)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _load_spectrum(path: str) -> SpectrumTable:
    try:
        with open(path, encoding="utf-8") as fh:
            return SpectrumTable.from_text(fh.read())
    except (OSError, ValueError, KeyError, IndexError) as exc:
        raise ConfigError(f"cannot load spectrum {path}: {exc}") from exc


def _solve_mode_of(args: argparse.Namespace) -> Mode:
    return Mode(args.k, args.j, args.lam)


# --------------------------------------------------------- parallelism ----


def parallel_map(fn: Callable, items: Iterable, jobs: int) -> list:
    """Ordered map; ``jobs = 1`` runs in-process and is the determinism reference."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ------------------------------------------------------------ commands ----


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _specfun_point(task: tuple[str, float, float, float, float]) -> LogValue:
    fn, nu, beta, alpha, y = task
    if fn == "I":
        return specfun.log_bessel_I(nu, y)
    if fn == "K":
        return specfun.log_bessel_K(nu, y)
    if fn == "M":
        return specfun.log_kummer_M(beta, alpha, y)
    if fn == "U":
        return specfun.log_tricomi_U(beta, alpha, y)
    if fn == "T":
        return specfun.tri_T(beta, alpha, y)
    return specfun.log_gamma(y)


def _lv_float(v: LogValue) -> float:
    try:
        return v.to_float()
    except OverflowError:
        return v.sign * math.inf


def run_specfun(cfg: RunConfig, out: io.TextIOBase) -> None:
    a = cfg.args
    tasks = [(a.fn, a.nu, a.beta, a.alpha, y) for y in a.y]
    values = parallel_map(_specfun_point, tasks, a.jobs)
    out.write(f"# module=specfun tol={a.tol!r} fn={a.fn} nu={a.nu!r} beta={a.beta!r} alpha={a.alpha!r}\n")
    out.write("y,value,sign,log_abs\n")
    for y, v in zip(a.y, values):
        out.write(f"{_fmt(y)},{_fmt(_lv_float(v))},{v.sign},{_fmt(v.log_abs)}\n")


def _certify_task(task: tuple) -> list[str]:
    what = task[0]
    if what == "bessel":
        _, nu, ys, kind = task
        return [estimates.certify_bessel(nu, ys, kind).record()]
    if what == "monotonicity":
        _, n, j, lam, eta, zs = task
        return [estimates.check_monotonicity(Mode(1, j, lam), n, eta, zs).record()]
    _, n, q, ys = task
    params = HypergeomParams.from_q(n, q)
    fn = {
        "caseA": estimates.certify_tri_ku_caseA,
        "caseB": estimates.certify_caseB,
        "product": estimates.certify_product,
    }[what]
    return fn(params, ys).records()


def _certify_tasks(a: argparse.Namespace) -> list[tuple]:
    whats = ("bessel", "caseA", "caseB", "product", "monotonicity") if a.what == "all" else (a.what,)
    ys_pos = tuple(float(v) for v in np.geomspace(a.ymin, a.ymax, a.npts))
    ys_neg = tuple(-v for v in ys_pos)
    tasks: list[tuple] = []
    for what in whats:
        if what == "bessel":
            for nu in a.nu:
                tasks.append(("bessel", nu, ys_pos, "K"))
                tasks.append(("bessel", nu, ys_pos, "I"))
            continue
        for nf in a.n:
            n = int(nf)
            if what in ("caseA", "product"):
                for q in a.q if a.q is not None else estimates.DEFAULT_Q:
                    tasks.append((what, n, q, ys_neg))
            elif what == "caseB":
                for q in a.q if a.q is not None else (-1.0 / n, 0.0, 0.5, 1.0):
                    tasks.append((what, n, q, ys_neg))
            else:
                lambda_d = float(n) if a.lambda_D is None else a.lambda_D
                delta_b = 2.0 * math.sqrt(lambda_d / n)
                etas = a.eta if a.eta is not None else (0.0, delta_b, 2.0 * delta_b)
                # default eigenvalue puts the mode at Q = 2
                lam = a.lam if a.lam is not None else a.j * n * (3.0 - 0.5 * (1.0 - 1.0 / n))
                for eta in etas:
                    zs = tuple(float(z) for z in estimates.default_monotonicity_grid(n, eta, a.z_max, a.npts))
                    tasks.append(("monotonicity", n, a.j, lam, eta, zs))
    return tasks


def run_certify(cfg: RunConfig, out: io.TextIOBase) -> None:
    a = cfg.args
    tasks = _certify_tasks(a)
    results = parallel_map(_certify_task, tasks, a.jobs)
    out.write(f"# module=estimates tol={a.tol!r}\n")
    out.write("# name|grid_spec|lower|upper|pass\n")
    for lines in results:
        for line in lines:
            out.write(line + "\n")


def _solve_chunk(task: tuple) -> list[float]:
    n, k, j, lam, amp, rate, power, z1, z_max, zs = task
    xi = poisson.ModeCoefficient.exp_power(k, amp, rate, power)
    sol = poisson.solve_mode(Mode(k, j, lam), n, xi, z1, z_max)
    return [sol(z) for z in zs]


def run_solve(cfg: RunConfig, out: io.TextIOBase) -> None:
    a = cfg.args
    zs = [float(z) for z in np.linspace(a.z1, a.z_max, a.npts)]
    chunks = [zs[i:: a.jobs] for i in range(a.jobs)] if a.jobs > 1 else [zs]
    head = (a.n, a.k, a.j, a.lam, a.xi_amp, a.xi_rate, a.xi_power, a.z1, a.z_max)
    parts = parallel_map(_solve_chunk, [(*head, tuple(c)) for c in chunks], a.jobs)
    values = [0.0] * len(zs)
    for i, part in enumerate(parts):
        values[i:: len(parts)] = part
    out.write(
        f"# module=poisson tol={poisson.SOLVE_REL_TOL!r} n={a.n} k={a.k} j={a.j} lambda={a.lam!r} "
        f"xi={a.xi_amp!r}*z^{a.xi_power!r}*exp({a.xi_rate!r}*z^(n/2))\n"
    )
    poisson.export_field(out, zs, values)


def _spectrum_of(cfg: RunConfig) -> SpectrumTable:
    a = cfg.args
    if a.spectrum:
        return _load_spectrum(a.spectrum)
    jitter = getattr(a, "jitter", 0.0)
    return toy_spectrum(cfg.params, a.j_max, a.per_weight, a.seed, jitter)


def run_classify(cfg: RunConfig, out: io.TextIOBase) -> None:
    a = cfg.args
    spectrum = _spectrum_of(cfg)
    nonzero = len(spectrum) - 1
    if a.neumann:
        fluxes = a.mode_fluxes if a.mode_fluxes is not None else [0.0] * nonzero
        if len(fluxes) != nonzero:
            raise ConfigError(f"--mode-fluxes needs {nonzero} values")
        result = poisson.classify_neumann(
            spectrum, a.kappa0, fluxes, growth_exponent=a.growth_exponent
        )
        kind = "neumann"
    else:
        values = a.boundary_values if a.boundary_values is not None else [0.0] * len(spectrum)
        if len(values) != len(spectrum):
            raise ConfigError(f"--boundary-values needs {len(spectrum)} values")
        result = poisson.classify_dirichlet(
            spectrum, values, flux=a.flux, growth_exponent=a.growth_exponent
        )
        kind = "dirichlet"
    out.write(f"# module=poisson tol={a.tol!r} problem={kind}\n")
    out.write(spectrum.params.header() + "\n")
    out.write("field,value\n")
    out.write(f"verdict,{result.verdict}\n")
    for name in ("kappa0", "c0", "decay_exponent", "residual"):
        out.write(f"{name},{_fmt(getattr(result, name))}\n")
    for k, c in sorted(result.coefficients.items()):
        out.write(f"c_{k},{_fmt(c)}\n")


def run_spectrum(cfg: RunConfig, out: io.TextIOBase) -> None:
    out.write(f"# module=spectral tol={cfg.args.tol!r}\n")
    _spectrum_of(cfg).write(out)


RUNNERS = {
    "specfun": run_specfun,
    "certify": run_certify,
    "solve": run_solve,
    "classify": run_classify,
    "spectrum": run_spectrum,
}


def run(cfg: RunConfig) -> int:
    buf = io.StringIO()
    RUNNERS[cfg.command](cfg, buf)
    text = buf.getvalue()
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {cfg.output_path}: {exc.strerror}") from exc
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = validate(parse_args(argv))
        return run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, ArithmeticError) as exc:
        op = argv[0] if argv else "?"
        print(f"numerical failure in {op}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
