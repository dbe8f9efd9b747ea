"""``explicit-zeta`` command line front end.

Exit codes: 0 when everything reproduces or verifies, 2 when a bound or a
published constant is violated, 3 for precondition and configuration errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import harness
from .errors import ExplicitZetaError, IntegrityError

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG = 0, 2, 3
CONFIG_KEYS = {"format", "seed", "out", "precision", "quad_tol", "moment_tol", "afe_samples"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as a violation
    def error(self, message):
        raise UsageError(message)


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=harness.FORMATS, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--config", default=None, help="key = value file; flags override it")
    common.add_argument("--precision", type=int, default=None, help="oracle digits (>= 30)")

    p = _Parser(prog="explicit-zeta", description="Reproduce and verify explicit zeta bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("tables", parents=[common], help="AFE error tables")
    c = sub.add_parser("constants", parents=[common], help="published constant chains")
    c.add_argument("target", choices=harness.CONSTANT_TARGETS)
    v = sub.add_parser("verify", parents=[common], help="empirical property suites")
    v.add_argument("suite", choices=harness.SUITES + ("all",))
    m = sub.add_parser("moment", parents=[common], help="second moment on the critical line")
    m.add_argument("T", type=float)
    m.add_argument("--components", action="store_true",
                   help="emit the envelope component registry (name, value) instead")
    sub.add_parser("density", parents=[common], help="density coefficients and bound curve")
    z = sub.add_parser("zeros", parents=[common], help="zero counts against the RvM window")
    z.add_argument("T", type=float, nargs="*")
    return p


def _config(args) -> tuple[harness.RunConfig, str | None]:
    file_cfg = read_config(args.config) if args.config else {}
    fmt = args.format or file_cfg.get("format", "json")
    if fmt not in harness.FORMATS:
        raise UsageError(f"format must be one of {harness.FORMATS}")
    try:
        seed = args.seed if args.seed is not None else int(file_cfg.get("seed", 42))
        precision = args.precision if args.precision is not None else int(file_cfg.get(
            "precision", os.environ.get("EXPLICIT_ZETA_PRECISION", 30)))
        tolerances = {k: float(file_cfg[k]) for k in ("quad_tol", "moment_tol", "afe_samples") if k in file_cfg}
    except ValueError as exc:
        raise UsageError(f"bad config value: {exc}") from exc
    if precision < 30:
        raise UsageError("precision must be >= 30")
    out = args.out or file_cfg.get("out")
    cfg = harness.RunConfig(args.command, fmt, seed, tolerances, precision)
    return cfg, out


def run(args) -> tuple[str, bool]:
    cfg, _ = _config(args)
    fmt = cfg.output_format
    if args.command == "tables":
        rep = harness.table_report()
        return harness.render_report(rep, fmt), rep.ok
    if args.command == "constants":
        rep = harness.constants_report(args.target, cfg)
        return harness.render_report(rep, fmt), rep.ok
    if args.command == "verify":
        rep = harness.verify_report(args.suite, cfg)
        return harness.render_report(rep, fmt), rep.ok
    if args.command == "moment" and args.components:
        rows = harness.envelope_component_rows()
        return harness.render_table(("name", "value"), rows, fmt, "moment:components"), True
    if args.command == "moment":
        rep = harness.moment_report(args.T, cfg.tol("quad_tol", 1e-4))
        return harness.render_report(rep, fmt), rep.ok
    if args.command == "density":
        co, rows = harness.density_curve()
        extra = {"coefficients": harness.coefficients_dict(co)}
        return harness.render_table(("sigma", "T", "bound"), rows, fmt, "density", extra), True
    if args.command == "zeros":
        rows = harness.zero_rows(tuple(args.T) or None)
        ok = all(lo <= n <= hi for _, n, lo, hi in rows)
        return harness.render_table(("T", "N", "rvm_lo", "rvm_hi"), rows, fmt, "zeros"), ok
    raise UsageError(f"unknown command {args.command}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg, out = _config(args)
        previous = os.environ.get("EXPLICIT_ZETA_PRECISION")
        os.environ["EXPLICIT_ZETA_PRECISION"] = str(cfg.precision)
        try:
            text, ok = run(args)
        finally:
            if previous is None:
                del os.environ["EXPLICIT_ZETA_PRECISION"]
            else:
                os.environ["EXPLICIT_ZETA_PRECISION"] = previous
    except UsageError as exc:
        print(f"explicit-zeta: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrityError as exc:
        print(f"explicit-zeta: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ExplicitZetaError as exc:
        print(f"explicit-zeta: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
