"""lieflow command line.

Exit codes: 0 success or pass, 2 usage or config error, 3 numeric-domain error
(for example a quotient evaluation too close to a wall), 4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import jsonschema
import numpy as np

from lieflow import __version__, reports, verify
from lieflow.characters import SeriesPreconditionError, SeriesTruncationError, WallTooClose, character
from lieflow.forms import NotRationalMetric
from lieflow.kernel import METHODS, Cutoff, KernelSpec, TermBudgetExceeded, schrodinger_kernel
from lieflow.rootsys import InvalidCartanType, build_root_system, summary

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_FAIL = 0, 2, 3, 4
DOMAIN_ERRORS = (WallTooClose, SeriesPreconditionError, SeriesTruncationError, TermBudgetExceeded)
SCAN_COMMANDS = ("dispersive", "lp", "counting", "weylsum", "levelset")


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _system(args):
    try:
        return build_root_system(args.series, args.rank, args.normalization)
    except (InvalidCartanType, NotRationalMetric, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _turns(rs, values: list[float], units: str) -> np.ndarray:
    if len(values) != rs.rank:
        raise UsageError(f"--H needs {rs.rank} coordinate(s), got {len(values)}")
    if units == "turns":
        return rs.torus_point(values, canonical=False).turns
    if units == "root":
        return rs.torus_point(root_coords=values, canonical=False).turns
    return rs.torus_point(angles=values, canonical=False).turns


def cmd_rootsys_info(args) -> int:
    rs = _system(args)
    data = summary(rs)
    reports.validate(data, "rootsys_summary")
    print(json.dumps(data, indent=2, default=str))
    return EXIT_OK


def cmd_character(args) -> int:
    rs = _system(args)
    lam = _ints(args.weight)
    if len(lam) != rs.rank:
        raise UsageError(f"--weight needs {rs.rank} coordinate(s)")
    x = _turns(rs, _floats(args.H), args.units)
    value = complex(character(rs, tuple(lam), x, method=args.method))
    walls = rs.wall_distances(np.array(x))
    print(json.dumps({
        "value": [value.real, value.imag],
        "method": args.method,
        "wall_distances": [float(d) for d in walls],
    }))
    return EXIT_OK


def cmd_kernel(args) -> int:
    rs = _system(args)
    x = _turns(rs, _floats(args.H), args.units)
    spec = KernelSpec(args.N, Cutoff(), args.method)
    val = schrodinger_kernel(rs, spec, args.t, np.array(x))
    print(json.dumps({"value": [val.value.real, val.value.imag], "terms": val.terms_summed, "method": val.method_used}))
    return EXIT_OK


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    return cfg


def check_config(cfg: dict) -> None:
    try:
        reports.validate(cfg, "job_config")
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise UsageError(f"invalid config at {where}: {exc.message}") from exc


def _group_entry(text: str, normalization: str | None) -> dict:
    g = verify.parse_group(text, normalization)
    default = "unit_weight" if g.rs.label == "A1" else "standard"
    return {"series": g.rs.series, "rank": g.rs.rank, "normalization": normalization or default}


def merged_config(args) -> dict:
    """Config file first, then flags; flags win."""
    cfg = load_config(args.config)
    if args.command != "suite":
        cfg["scans"] = [args.command]
    if args.group:
        try:
            cfg["group"] = _group_entry(args.group, args.normalization)
        except (InvalidCartanType, ValueError, IndexError) as exc:
            raise UsageError(f"bad --group {args.group!r}: {exc}") from exc
        cfg.pop("product", None)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.threads is not None:
        cfg["threads"] = args.threads
    if args.qmax is not None:
        cfg["qmax"] = args.qmax
    if args.N:
        Ns = _ints(args.N)
        section = {"counting": "counting", "weylsum": "weylsum", "levelset": "levelset", "lp": "lp"}.get(args.command)
        if section:
            cfg.setdefault(section, {})["N"] = Ns
        else:
            cfg["N"] = Ns
    if args.p is not None:
        if args.command == "levelset":
            cfg.setdefault("levelset", {})["p"] = args.p
        else:
            cfg.setdefault("lp", {})["p"] = args.p
    if args.samples is not None:
        cfg.setdefault("counting", {})["samples"] = args.samples
    if args.trials is not None:
        cfg.setdefault("levelset", {})["trials"] = args.trials
    if args.out:
        cfg["output_dir"] = args.out
    check_config(cfg)
    return cfg


def cmd_verify(args) -> int:
    cfg = merged_config(args)
    out = Path(cfg.get("output_dir") or reports.default_output_dir())
    # output location and thread budget do not change results, so they stay out of the hash
    job = {k: v for k, v in cfg.items() if k not in ("output_dir", "threads")}
    try:
        result = verify.run_suite(job, out, threads=cfg.get("threads"))
    except (InvalidCartanType, NotRationalMetric, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    for name, rep in result["scans"].items():
        state = "PASS" if rep["passed"] else ("ERROR" if rep["status"] == "error" else "FAIL")
        extra = f" ({rep['error']})" if rep["status"] == "error" else ""
        print(f"{state} {name}{extra}")
    print(f"summary: {out / 'summary.json'} passed={str(result['passed']).lower()}")
    domain = [r for r in result["scans"].values() if r["status"] == "error" and _is_domain(r["error"])]
    if domain and len(domain) == len(result["scans"]):
        return EXIT_DOMAIN
    return EXIT_OK if result["passed"] else EXIT_FAIL


def _is_domain(message: str) -> bool:
    return message.split(":", 1)[0] in {e.__name__ for e in DOMAIN_ERRORS} | {"ResolutionError", "MonteCarloVarianceError"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lieflow", description="Root systems, characters, Schrodinger kernels and bound verification.")
    p.add_argument("--version", action="version", version=f"lieflow {__version__}")
    sub = p.add_subparsers(dest="area", required=True, parser_class=_Parser)

    def system_args(sp):
        sp.add_argument("series", help="Cartan series letter, A to G")
        sp.add_argument("rank", type=int)
        sp.add_argument("--normalization", default="standard", help="standard, killing, unit_weight or scale:<rational>")

    rsp = sub.add_parser("rootsys", help="root system data")
    rsub = rsp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    info = rsub.add_parser("info", help="print the root system summary as JSON")
    system_args(info)
    info.set_defaults(func=cmd_rootsys_info)

    ch = sub.add_parser("character", help="evaluate a Weyl character")
    system_args(ch)
    ch.add_argument("--weight", required=True, help="strictly dominant weight in fundamental coordinates, comma separated")
    ch.add_argument("--H", required=True, help="torus point, comma separated")
    units = ch.add_mutually_exclusive_group()
    units.add_argument("--angles", dest="units", action="store_const", const="angles", help="H as angles 2 pi x (default)")
    units.add_argument("--turns", dest="units", action="store_const", const="turns", help="H as turns x")
    units.add_argument("--root-coords", dest="units", action="store_const", const="root", help="H in simple-root coordinates")
    ch.add_argument("--method", default="auto", choices=["auto", "quotient", "stable", "series"])
    ch.set_defaults(func=cmd_character, units="angles")

    kp = sub.add_parser("kernel", help="evaluate the Schrodinger kernel K_N(t, H)")
    system_args(kp)
    kp.add_argument("--N", type=int, required=True)
    kp.add_argument("--t", type=float, required=True)
    kp.add_argument("--H", required=True)
    kunits = kp.add_mutually_exclusive_group()
    kunits.add_argument("--angles", dest="units", action="store_const", const="angles")
    kunits.add_argument("--turns", dest="units", action="store_const", const="turns")
    kp.add_argument("--method", default="weight_lattice", choices=list(METHODS))
    kp.set_defaults(func=cmd_kernel, units="angles")

    vp = sub.add_parser("verify", help="run bound verification scans")
    vp.add_argument("command", choices=SCAN_COMMANDS + ("suite",))
    vp.add_argument("--config", help="JSON job config; flags override its fields")
    vp.add_argument("--N", help="dyadic ladder, comma separated")
    vp.add_argument("--group", help="A1, A2, SU2, B2, ...")
    vp.add_argument("--normalization")
    vp.add_argument("--seed", type=int)
    vp.add_argument("--threads", type=int)
    vp.add_argument("--qmax", type=int)
    vp.add_argument("--p", type=float)
    vp.add_argument("--samples", type=int, help="counting: number of sampled t")
    vp.add_argument("--trials", type=int, help="levelset: number of random data")
    vp.add_argument("--out", help=f"output directory (default ${reports.OUTPUT_ENV} or ./lieflow-out)")
    vp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"lieflow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DOMAIN_ERRORS as exc:
        print(f"lieflow: numeric domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
