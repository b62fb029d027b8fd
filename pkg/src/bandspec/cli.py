"""Command-line front end.

Subcommands::

    bandspec classify --preset paper-ex1 --lambda 0
    bandspec region   --preset paper-ex2 --window -2,5,-3,4 --res 201,201 --format pgm --out ex2.pgm
    bandspec verify   --preset paper-ex1 --res 41,41
    bandspec norm     --params 1,1,-1,-1,0,0 --p 2

Exit codes: 0 success, 1 usage error, 2 verification disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .operator import ParameterError, as_space, norm_bounds_lp
from .presets import PRESET_NAMES, parse_complex, parse_params, preset
from .region import FORMATS, Window, emit, scan_region
from .spectrum import DEFAULT_TOL, fine_classify, membership_ratio
from .verify import DEFAULT_BAND, empirical_norm, kernel_rank_check, membership_oracle

EXIT_USAGE = 1
EXIT_DISAGREE = 2

DEFAULTS = {
    "p": 2.0,
    "tol": DEFAULT_TOL,
    "window": "-3,3,-3,3",
    "res": None,
    "seed": 0,
    "format": "csv",
    "n": None,
    "trials": 200,
    "band": DEFAULT_BAND,
}

CONFIG_KEYS = {"params", "preset", "p", "tol", "window", "res", "seed", "format",
               "out", "lambda", "n", "trials", "band", "figure"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("operator and space")
    g.add_argument("--params", help="r1,r2,s1,s2,t1,t2 as complex literals, e.g. 1,i,2,1,-i,1")
    g.add_argument("--preset", help="one of: " + ", ".join(PRESET_NAMES))
    g.add_argument("--p", type=float, help="exponent of l_p (default 2)")
    g.add_argument("--tol", type=float, help="boundary band on |ratio - 1| (default 1e-9)")
    g.add_argument("--window", help="re_min,re_max,im_min,im_max (default -3,3,-3,3)")
    g.add_argument("--res", help="nx,ny grid resolution (region 201,201; verify 41,41)")
    g.add_argument("--seed", type=int, help="random seed (default 0)")
    g.add_argument("--format", choices=FORMATS, help="region output format (default csv)")
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--config", help="key=value file; command-line flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bandspec", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"bandspec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="full classification of one lambda, as JSON")
    _common(c)
    c.add_argument("--lambda", dest="lambda_", metavar="LAMBDA", help="point to classify, e.g. 1+i")

    r = sub.add_parser("region", help="scan a window and write csv/json/pgm")
    _common(r)
    r.add_argument("--figure", help="also render a matplotlib figure to this path")

    v = sub.add_parser("verify", help="cross-check analytic predicates against finite sections")
    _common(v)
    v.add_argument("--n", type=int, help="section size for the membership oracle (default 400)")
    v.add_argument("--band", type=float, help="oracle growth band and ratio exclusion (default 0.05)")

    m = sub.add_parser("norm", help="norm bracket and empirical estimate")
    _common(m)
    m.add_argument("--n", type=int, help="vector support length (default 64)")
    m.add_argument("--trials", type=int, help="random trial vectors (default 200)")
    return parser


def read_config(path: str) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = val
    return out


def _merge(args: argparse.Namespace) -> dict:
    """Flags override config values, which override defaults."""
    conf = read_config(args.config) if args.config else {}
    merged = dict(DEFAULTS)
    merged.update(conf)
    for key, val in vars(args).items():
        key = "lambda" if key == "lambda_" else key
        if val is not None:
            merged[key] = val
    return merged


def _floats(text, count: int, name: str) -> list[float]:
    try:
        vals = [float(v) for v in str(text).split(",")]
    except ValueError:
        raise UsageError(f"--{name} expects {count} comma-separated numbers") from None
    if len(vals) != count:
        raise UsageError(f"--{name} expects {count} comma-separated numbers")
    return vals


def _ints(text, count: int, name: str) -> list[int]:
    vals = _floats(text, count, name)
    if any(v != int(v) for v in vals):
        raise UsageError(f"--{name} expects integers")
    return [int(v) for v in vals]


def _operator(opts: dict):
    if opts.get("params") and opts.get("preset"):
        raise UsageError("give either --params or --preset, not both")
    try:
        if opts.get("params"):
            return parse_params(str(opts["params"]))
        if opts.get("preset"):
            return preset(str(opts["preset"]))
    except (ValueError, ParameterError) as exc:
        raise UsageError(str(exc)) from None
    raise UsageError("an operator is required: --params or --preset")


def _space(opts: dict):
    try:
        return as_space(float(opts["p"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _tol(opts: dict) -> float:
    tol = float(opts["tol"])
    if not tol > 0:
        raise UsageError("--tol must be positive")
    return tol


def _window(opts: dict, default_res: str) -> Window:
    a, b, c, d = _floats(opts["window"], 4, "window")
    nx, ny = _ints(opts["res"] or default_res, 2, "res")
    try:
        return Window(a, b, c, d, nx, ny)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def cmd_classify(opts: dict) -> int:
    params = _operator(opts)
    if opts.get("lambda") is None:
        raise UsageError("classify needs --lambda")
    try:
        lam = parse_complex(str(opts["lambda"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = fine_classify(params, _space(opts), lam, _tol(opts))
    _write((json.dumps(result.to_dict(), sort_keys=True) + "\n").encode(), opts.get("out"))
    return 0


def cmd_region(opts: dict) -> int:
    params = _operator(opts)
    grid = scan_region(params, _space(opts), _window(opts, "201,201"), _tol(opts))
    _write(emit(grid, opts["format"]), opts.get("out"))
    if opts.get("figure"):
        from .plotting import save_region_figure

        save_region_figure(grid, opts["figure"])
    return 0


def cmd_verify(opts: dict) -> int:
    params = _operator(opts)
    space = _space(opts)
    band = float(opts["band"])
    n = int(opts["n"] or 400)
    window = _window(opts, default_res="41,41")
    lines = []
    disagreements = 0
    checked = 0
    for lam in window.centers().reshape(-1):
        lam = complex(lam)
        if lam in (params.r1, params.r2):
            continue
        if abs(membership_ratio(params, lam) - 1.0) <= band:
            continue
        verdict = membership_oracle(params, space, lam, n=n, band=band)
        checked += 1
        if not verdict.agrees:
            disagreements += 1
        lines.append({"check": "membership", **verdict.to_dict()})
    for name, lam in (("r1", params.r1), ("r2", params.r2)):
        rank = kernel_rank_check(params, lam, 8)
        if rank != 0:
            disagreements += 1
        lines.append({"check": "kernel", "at": name, "rank": rank})
    bounds = norm_bounds_lp(params, space)
    est = empirical_norm(params, space, 64, 200, seed=int(opts["seed"]))
    ok = bounds.lower - 1e-12 <= est <= bounds.upper + 1e-12
    if bounds.exact is not None:
        ok = ok and abs(est - bounds.exact) <= 1e-12
    if not ok:
        disagreements += 1
    lines.append({"check": "norm", "lower": bounds.lower, "upper": bounds.upper,
                  "exact": bounds.exact, "empirical": est, "ok": ok})
    text = "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in lines)
    _write(text.encode(), opts.get("out"))
    print(f"verify: {checked} oracle points, {disagreements} disagreement(s)", file=sys.stderr)
    return EXIT_DISAGREE if disagreements else 0


def cmd_norm(opts: dict) -> int:
    params = _operator(opts)
    space = _space(opts)
    n = int(opts["n"] or 64)
    trials = int(opts["trials"])
    bounds = norm_bounds_lp(params, space)
    try:
        est = empirical_norm(params, space, n, trials, seed=int(opts["seed"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rec = {"p": space.p, "lower": bounds.lower, "upper": bounds.upper, "exact": bounds.exact,
           "empirical": est, "n": n, "trials": trials, "seed": int(opts["seed"])}
    _write((json.dumps(rec, sort_keys=True) + "\n").encode(), opts.get("out"))
    return 0


# flags whose values may legitimately start with "-" (e.g. --window -2,5,-3,4)
_SIGNED_VALUE_FLAGS = {"--params", "--lambda", "--window", "--p", "--tol"}


def _glue_signed_values(argv: list[str]) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok in _SIGNED_VALUE_FLAGS and nxt.startswith("-") and not nxt.startswith("--"):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


COMMANDS = {"classify": cmd_classify, "region": cmd_region, "verify": cmd_verify, "norm": cmd_norm}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_signed_values(argv))
    try:
        opts = _merge(args)
        return COMMANDS[args.command](opts)
    except (UsageError, OSError) as exc:
        print(f"bandspec {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
