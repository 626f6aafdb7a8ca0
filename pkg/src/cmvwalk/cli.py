"""
Command-line interface.

    cmvwalk simulate --walk-type 1 --coin hadamard --init 1,0 --steps 1
    cmvwalk spectrum --family 1 --alpha 0.6
    cmvwalk limit --walk-type 1 --coin real:0.6
    cmvwalk limit --tree 3 --case B
    cmvwalk tree --kappa 3 --case B --steps 400
    cmvwalk verify --suite moments

CSV numbers carry 12 significant digits; JSON numbers are native floats.
Files are written to a temporary name and renamed on success, so a failed
run never leaves partial output.  Exit codes: 0 success, 1 failed
verification, 2 invalid configuration, 3 truncation overflow.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

from .coin import QuantumCoin, extract_params, parse_coin_spec, parse_complex, validate
from .errors import CmvWalkError, TruncationOverflow
from .limits import limit_dist_I, limit_dist_II, tree_coin, tree_limit
from .spectral import spectral_measure
from .verify import SUITES, format_report, run_suite
from .walk import distribution, evolve, initial_state, sites_for

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_OVERFLOW = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    walk_type: int
    coin: QuantumCoin
    gamma: float
    delta: float
    init: tuple[complex, complex]
    steps: int | None
    xmax: int | None
    sites: int | None
    samples: int
    output: str


def _num(v: float) -> str:
    return f"{v:.12g}"


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cmvwalk-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _csv(header: str, rows, footer=()) -> str:
    lines = [header]
    lines += [",".join(_num(v) if isinstance(v, float) else str(v) for v in row) for row in rows]
    lines += [f"# {f}" for f in footer]
    return "\n".join(lines) + "\n"


def _pair(text: str) -> tuple[complex, complex]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"--init expects two amplitudes 'alpha,beta', got {text!r}")
    return parse_complex(parts[0]), parse_complex(parts[1])


def _config(args) -> RunConfig:
    scale = math.pi / 180.0 if getattr(args, "degrees", False) else 1.0
    coin = validate(parse_coin_spec(getattr(args, "coin", "hadamard")))
    cfg = RunConfig(
        command=args.command,
        walk_type=getattr(args, "walk_type", 1),
        coin=coin,
        gamma=getattr(args, "gamma", 0.0) * scale,
        delta=getattr(args, "delta", 0.0) * scale,
        init=_pair(getattr(args, "init", "1,0")),
        steps=getattr(args, "steps", None),
        xmax=getattr(args, "xmax", None),
        sites=getattr(args, "sites", None),
        samples=getattr(args, "samples", 256),
        output=getattr(args, "output", "-"),
    )
    for name in ("steps", "xmax", "sites"):
        v = getattr(cfg, name)
        if v is not None and v < 0:
            raise ConfigError(f"--{name} must be nonnegative")
    return cfg


def cmd_simulate(cfg: RunConfig) -> int:
    """P(X_t = x) after ``steps`` steps; rows with exactly zero probability are omitted."""
    if cfg.steps is None:
        raise ConfigError("simulate needs --steps")
    n_sites = cfg.sites if cfg.sites is not None else sites_for(cfg.steps)
    alpha, beta = cfg.init
    init = initial_state(cfg.walk_type, n_sites, alpha, beta, cfg.delta)
    p = distribution(evolve(init, cfg.coin, cfg.gamma, cfg.steps))
    xmax = cfg.steps if cfg.xmax is None else min(cfg.xmax, p.size - 1)
    rows = [(x, float(p[x])) for x in range(min(xmax, p.size - 1) + 1) if p[x] != 0.0]
    _write(cfg.output, _csv("x,probability", rows))
    return EXIT_OK


def _spectral_target(args, cfg: RunConfig) -> tuple[int, complex]:
    if args.alpha is not None:
        family = args.family if args.family is not None else cfg.walk_type
        return family, parse_complex(args.alpha)
    prm = extract_params(cfg.coin, cfg.gamma)
    family = args.family if args.family is not None else cfg.walk_type
    return family, (prm.a if family == 1 else prm.b)


def cmd_spectrum(args, cfg: RunConfig) -> int:
    family, alpha = _spectral_target(args, cfg)
    if not abs(alpha) < 1.0:
        raise ConfigError(f"spectral measure needs |alpha| < 1, got {abs(alpha)}")
    measure = spectral_measure(family, alpha, cfg.samples)
    _write(cfg.output, json.dumps(measure.to_json(), indent=1) + "\n")
    return EXIT_OK


def _limit_csv(dist) -> str:
    footer = [f"escape_mass={_num(dist.escape_mass)}",
              f"parity_resolved={'true' if dist.parity_resolved else 'false'}"]
    if dist.parity_resolved:
        footer.append("probability is the limit along times with x+t even; "
                      "the time-averaged limit is probability/2")
    return _csv("x,probability", [(x, float(v)) for x, v in enumerate(dist.p)], footer)


def cmd_limit(args, cfg: RunConfig) -> int:
    xmax = 20 if cfg.xmax is None else cfg.xmax
    if args.tree is not None:
        dist = tree_limit(args.tree, args.case, xmax)
    else:
        prm = extract_params(cfg.coin, cfg.gamma)
        if cfg.walk_type == 1:
            alpha, beta = cfg.init
            dist = limit_dist_I(prm.a, prm.phi, alpha, beta, xmax)
        else:
            dist = limit_dist_II(prm.b, xmax)
    _write(cfg.output, _limit_csv(dist))
    return EXIT_OK


def cmd_tree(args, cfg: RunConfig) -> int:
    """Simulated distance-from-root distribution next to the closed-form limit."""
    steps = 400 if cfg.steps is None else cfg.steps
    xmax = 10 if cfg.xmax is None else cfg.xmax
    coin, gamma = tree_coin(args.kappa, args.case)
    init = initial_state(2, sites_for(steps))
    p = distribution(evolve(init, coin, gamma, steps))
    lim = tree_limit(args.kappa, args.case, xmax).at_time(steps)
    rows = [(x, float(p[x]) if x < p.size else 0.0, float(lim[x])) for x in range(xmax + 1)]
    _write(cfg.output, _csv("x,simulated,limit", rows, [f"kappa={args.kappa} case={args.case} t={steps}"]))
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_suite(args.suite, args.tol)
    print(format_report(checks))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmvwalk", description="Half-line quantum walks via CMV matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    walk = argparse.ArgumentParser(add_help=False)
    walk.add_argument("--walk-type", type=int, choices=(1, 2), default=1)
    walk.add_argument("--coin", default="hadamard",
                      help="hadamard | real:<alpha> | matrix:<re>,<im>;... (row-major, rows = outgoing R, L)")
    walk.add_argument("--gamma", type=float, default=0.0, help="Type II reflection phase")
    walk.add_argument("--delta", type=float, default=0.0, help="Type II initial phase")
    walk.add_argument("--degrees", action="store_true", help="angles are given in degrees")
    walk.add_argument("--init", default="1,0", help="Type I initial amplitudes on (0,S),(0,L)")
    walk.add_argument("--output", "-o", default="-", help="output file (default stdout)")

    p = sub.add_parser("simulate", parents=[walk], help="direct simulation")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--xmax", type=int)
    p.add_argument("--sites", type=int, help="truncation size in sites (default steps + 3)")

    p = sub.add_parser("spectrum", parents=[walk], help="spectral measure as JSON")
    p.add_argument("--family", type=int, choices=(1, 2),
                   help="1 = null-odd, 2 = null-even (default: the walk type)")
    p.add_argument("--alpha", help="Verblunsky parameter; default derived from the coin")
    p.add_argument("--samples", type=int, default=256, help="density samples per band arc")

    p = sub.add_parser("limit", parents=[walk], help="closed-form limit distribution")
    p.add_argument("--xmax", type=int)
    p.add_argument("--tree", type=int, metavar="K", help="tree degree; overrides the coin")
    p.add_argument("--case", choices=("A", "B"), default="B")

    p = sub.add_parser("tree", parents=[walk], help="tree walk: simulation vs limit")
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--case", choices=("A", "B"), default="B")
    p.add_argument("--steps", type=int)
    p.add_argument("--xmax", type=int)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all", choices=[*SUITES, "all"])
    p.add_argument("--tol", type=float, help="override the suite tolerance")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        cfg = _config(args)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "spectrum":
            return cmd_spectrum(args, cfg)
        if args.command == "limit":
            return cmd_limit(args, cfg)
        return cmd_tree(args, cfg)
    except TruncationOverflow as exc:
        print(f"cmvwalk: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except (ValueError, CmvWalkError) as exc:
        print(f"cmvwalk: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
