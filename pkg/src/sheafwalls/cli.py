"""Batch command-line front end.

    sheafwalls <command> --spec problem.json [--format json|text] [--out FILE]
               [--seed N] [--max-depth N] [--threads N] [--coords]

Exit codes: 0 success, 1 usage error, 2 domain error (JSON error object on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable

from . import report
from .errors import SheafWallsError, SpecError
from .numex import approximate_surd, pell_solutions, remark17_family
from .plot import build_slice, render_svg
from .problem import ProblemSpec, parse_spec
from .stability import classify_at_wall, twisted_verdict, xi
from .strata import chamber_path, flip_sequence, lemma36_threshold, twist_strata
from .walls import enumerate_walls, enumerate_walls_nef_heuristic

COMMANDS = ("walls", "chambers", "strata", "flipseq", "classify", "counterexample",
            "approx", "plot")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sheafwalls",
                     description="Exact wall and chamber computations for sheaves on surfaces.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--spec", required=True, help="JSON problem file")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--seed", type=int, default=0, help="seed for generic wall points")
    parser.add_argument("--max-depth", type=int, default=48, help="cone subdivision depth")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for enumeration")
    parser.add_argument("--coords", action="store_true",
                        help="annotate plot vertices with exact coordinates")
    return parser


def _walls(spec: ProblemSpec, args, lat=None):
    lat = lat or spec.lattice()
    e = spec.chern(lat)
    cone = spec.cone(lat)
    return lat, e, cone, enumerate_walls(e, cone, lat, args.max_depth, args.threads)


def cmd_walls(spec: ProblemSpec, args) -> dict:
    lat = spec.lattice()
    nef = spec.nef(lat)
    if nef is not None and "cone" not in spec.raw:
        gens, steps = nef
        res = enumerate_walls_nef_heuristic(spec.chern(lat), gens, lat, steps, args.max_depth)
        return {"command": "walls", "mode": "nef", **report.nef_result(res)}
    _, _, _, walls = _walls(spec, args, lat)
    return {"command": "walls", "mode": "cone", **report.wall_set(walls)}


def cmd_chambers(spec: ProblemSpec, args) -> dict:
    lat, e, cone, walls = _walls(spec, args)
    ends = spec.classes("path", ("start", "end"), lat)
    path = chamber_path(e, cone, walls, ends["start"], ends["end"], lat)
    return {"command": "chambers", "walls": report.wall_set(walls),
            "path": report.chamber_path(path)}


def cmd_strata(spec: ProblemSpec, args) -> dict:
    lat, e, cone, walls = _walls(spec, args)
    tw = spec.classes("twist", ("wall_point", "start", "end"), lat)
    strat = twist_strata(e, walls, tw["wall_point"], tw["start"], tw["end"], lat)
    out = {"command": "strata", "stratification": report.stratification(strat)}
    h = spec.optional_class("twist", "polarization", lat)
    if h is not None:
        out["lemma36_threshold"] = report.q(lemma36_threshold(e, walls, tw["wall_point"], h, lat))
    return out


def cmd_flipseq(spec: ProblemSpec, args) -> dict:
    lat, e, cone, walls = _walls(spec, args)
    ends = spec.classes("path", ("start", "end"), lat)
    n, n_prime = spec.thresholds()
    fs = flip_sequence(e, cone, ends["start"], ends["end"], lat, seed=args.seed,
                       n=n, n_prime=n_prime, walls=walls, max_depth=args.max_depth)
    return {"command": "flipseq", "seed": args.seed, **report.flip_sequence(fs)}


def cmd_classify(spec: ProblemSpec, args) -> dict:
    lat = spec.lattice()
    e = spec.chern(lat)
    pts = spec.classes("classify", ("wall_point", "polarization"), lat)
    a, h = pts["wall_point"], pts["polarization"]
    cands = spec.classify_candidates(lat)
    member = classify_at_wall(e, cands, a, h, lat)
    return {
        "command": "classify",
        "chern": report.chern(e),
        "wall_point": report.vec(a),
        "polarization": report.vec(h),
        "verdict_at_wall_point": report.verdict(twisted_verdict(e, cands, None, a, lat)),
        "candidates": [{"sub": report.chern(f), "xi_dot_H": report.q(lat.pair(xi(f, e), h))}
                       for f in cands],
        "member": member,
    }


def cmd_counterexample(spec: ProblemSpec, args) -> dict:
    count, probe = spec.counterexample()
    return {"command": "counterexample", **report.family(remark17_family(count, probe))}


def cmd_approx(spec: ProblemSpec, args) -> dict:
    d, count = spec.approx()
    return {"command": "approx",
            **report.approximation(approximate_surd(d, count), pell_solutions(d, count))}


def cmd_plot(spec: ProblemSpec, args) -> str:
    lat, e, cone, walls = _walls(spec, args)
    path = None
    if "path" in spec.raw:
        ends = spec.classes("path", ("start", "end"), lat)
        path = (ends["start"], ends["end"])
    basis = spec.plot_basis(lat)
    if basis is None:
        if len(cone.generators) == 2:
            basis = cone.generators
        elif path is not None:
            basis = path
        else:
            raise SpecError("plot basis needed when the cone does not have two generators",
                            "$.plot.basis")
    sl = build_slice(walls, basis[0], basis[1], lat, path)
    return render_svg(sl, coords=args.coords, title=f"walls of {e}")


HANDLERS: dict[str, Callable] = {
    "walls": cmd_walls, "chambers": cmd_chambers, "strata": cmd_strata,
    "flipseq": cmd_flipseq, "classify": cmd_classify, "counterexample": cmd_counterexample,
    "approx": cmd_approx, "plot": cmd_plot,
}


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Execute a command; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return 1, "", parser.format_usage() + str(exc) + "\n"
    except SystemExit as exc:  # --help
        return (0 if exc.code in (0, None) else 1), "", ""
    if args.max_depth < 1 or args.threads < 1:
        return 1, "", "sheafwalls: error: --max-depth and --threads must be positive\n"
    try:
        text = Path(args.spec).read_text(encoding="utf-8")
    except OSError as exc:
        return 1, "", f"sheafwalls: error: cannot read spec: {exc}\n"
    try:
        result = HANDLERS[args.command](parse_spec(text), args)
    except SheafWallsError as exc:
        return 2, "", json.dumps({"error": exc.to_dict()}, ensure_ascii=False) + "\n"
    except ValueError as exc:
        err = {"code": "domain_error", "message": str(exc)}
        return 2, "", json.dumps({"error": err}, ensure_ascii=False) + "\n"
    if isinstance(result, str):
        body = result
    elif args.format == "text":
        body = report.to_text(result)
    else:
        body = report.to_json(result)
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
        return 0, "", ""
    return 0, body, ""


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
