"""Command-line front end: ``teich <command> [options]``.

Exit codes: 0 success, 1 validation failure, 2 solver non-convergence,
3 I/O error.  Errors are reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from teich import io as tio
from teich.group import enumerate_classes, format_word, parse
from teich.gromov import (DualTree, HyperbolicPlane, NonConvergenceError, SpaceConfig,
                          degeneration_trajectory, min_distortion, minimax_center)
from teich.rep import fricke_triple, pinching_family, punctured_torus_from_traces
from teich.rtree import DualTreeModel, length_function
from teich.spectrum import fricke_embedding, projectivize, spectrum

EXIT_OK, EXIT_VALIDATION, EXIT_NONCONVERGENCE, EXIT_IO = 0, 1, 2, 3


def _fricke_arg(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 3):
        raise ValueError(f"--fricke expects x,y[,branch], got {text!r}")
    x, y = float(parts[0]), float(parts[1])
    branch = parts[2] if len(parts) == 3 else "-"
    return x, y, branch


def _rep_from_args(args):
    if args.fricke and args.rep:
        raise ValueError("give either --fricke or --rep, not both")
    if args.fricke:
        x, y, branch = _fricke_arg(args.fricke)
        return punctured_torus_from_traces(x, y, branch)
    if args.rep:
        return tio.load_rep(args.rep)
    raise ValueError("a representation is required (--fricke x,y[,branch] or --rep path.json)")


def _max_len(args, default: int) -> int:
    n = default if args.maxlen is None else args.maxlen
    if n < 1:
        raise ValueError("--maxlen must be >= 1")
    return n


def cmd_spectrum(args) -> str:
    rho = _rep_from_args(args)
    s = spectrum(rho, enumerate_classes(_max_len(args, 6)))
    if args.projective:
        return tio.projective_csv(projectivize(s))
    return tio.spectrum_csv(s)


def cmd_embed(args) -> str:
    rho = _rep_from_args(args)
    t = fricke_triple(rho)
    lengths = fricke_embedding(rho)
    obj = {"classes": ["a", "b", "ab"],
           "lengths": [tio.rounded(v) for v in lengths],
           "traces": [tio.rounded(abs(v)) for v in t.as_tuple()]}
    return tio.json_text(obj)


def cmd_tree_lengths(args) -> str:
    model = DualTreeModel.from_slope(args.slope, args.weight)
    return tio.spectrum_csv(length_function(model, enumerate_classes(_max_len(args, 6))))


def _pinch_config(args) -> tio.PinchConfig:
    obj = tio.load_json(args.config) if args.config else {}
    if args.slope is not None:
        obj["slope"] = args.slope
    if args.grid is not None:
        obj["epsGrid"] = list(tio.parse_grid(args.grid))
    if args.maxlen is not None:
        obj["maxLen"] = args.maxlen
    if args.weight is not None:
        obj["weightGuess"] = args.weight
    if args.distortion:
        obj["withDistortion"] = True
    return tio.pinch_config_from_json(obj)


def cmd_pinch(args) -> str:
    cfg = _pinch_config(args)
    target = DualTreeModel(cfg.slope, cfg.weight_guess)
    traj = degeneration_trajectory(cfg.eps_grid, cfg.slope, enumerate_classes(cfg.max_len),
                                   target=target, with_distortion=cfg.with_distortion,
                                   seed=args.seed)
    return tio.trajectory_csv(traj)


def _backend_from_json(obj):
    kind = obj.get("backend", "hyperbolic")
    if kind == "tree":
        return DualTree(DualTreeModel.from_slope(obj.get("slope", "0"), float(obj.get("weight", 1.0))))
    if kind != "hyperbolic":
        raise ValueError(f"unknown backend {kind!r}")
    if "rep" in obj:
        rho = tio.rep_from_json(obj["rep"])
    elif "fricke" in obj:
        x, y, branch = _fricke_arg(str(obj["fricke"]))
        rho = punctured_torus_from_traces(x, y, branch)
    elif "pinch" in obj:
        p = obj["pinch"]
        rho = pinching_family(float(p["eps"]), p.get("slope", "0"))
    else:
        raise ValueError("hyperbolic backend needs one of rep, fricke, pinch")
    return HyperbolicPlane(rho, float(obj.get("scale", 1.0)))


def _space_from_json(obj) -> SpaceConfig:
    if not isinstance(obj, dict):
        raise ValueError("space config must be a JSON object")
    backend = _backend_from_json(obj)
    P = [parse(w) for w in obj.get("P", ["a", "b", "ab"])]
    if "K" in obj:
        if not isinstance(backend, HyperbolicPlane):
            raise ValueError("explicit K points are supported for hyperbolic backends only")
        return SpaceConfig(backend, tuple(tio.point_from_json(p) for p in obj["K"]), P)
    if not isinstance(backend, HyperbolicPlane):
        raise ValueError("the source configuration must be hyperbolic")
    orbit = [str(w) for w in obj.get("orbit", ["", "a", "b"])]
    rho = backend.rep
    if obj.get("scaleByLambda"):
        mm = minimax_center(rho)
        backend = HyperbolicPlane(rho, 1.0 / mm.lam)
        center = mm.center
    else:
        center = minimax_center(rho).center
    return SpaceConfig.from_orbit(backend, center, orbit, P)


def cmd_gromov(args) -> str:
    source = _space_from_json(tio.load_json(args.source))
    target = _backend_from_json(tio.load_json(args.target))
    res = min_distortion(source, target, seed=args.seed, restarts=args.restarts)
    obj = {"epsilon": tio.rounded(res.epsilon), "evaluations": res.evaluations,
           "starts": res.starts, "note": res.note,
           "P": [format_word(w) for w in source.P]}
    return tio.json_text(obj)


def cmd_check(args) -> str:
    from teich import checks

    modules = set(args.module) if args.module else None
    results = checks.run_all(seed=args.seed, modules=modules)
    lines = []
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        extra = f"  [{r.detail}]" if r.detail else ""
        lines.append(f"{status} {r.module:9s} {r.passed}/{r.total}  {r.name}{extra}")
    n_ok = sum(r.ok for r in results)
    lines.append(f"{n_ok}/{len(results)} checks passed")
    args._check_failed = n_ok < len(results)
    return "\n".join(lines) + "\n"


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="teich", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, rep=False, maxlen=True):
        if rep:
            p.add_argument("--fricke", help="Fricke traces x,y[,branch]; branch is + or - (default -)")
            p.add_argument("--rep", help="representation JSON file")
        if maxlen:
            p.add_argument("--maxlen", type=int, help="longest class word")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("spectrum", help="length spectrum as CSV")
    common(p, rep=True)
    p.add_argument("--projective", action="store_true", help="max-normalized values")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("embed", help="lengths of a, b, ab")
    common(p, rep=True, maxlen=False)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("tree-lengths", help="dual-tree length function as CSV")
    common(p)
    p.add_argument("--slope", default="0")
    p.add_argument("--weight", type=float, default=1.0)
    p.set_defaults(func=cmd_tree_lengths)

    p = sub.add_parser("pinch", help="degeneration trajectory of a pinching family")
    common(p)
    p.add_argument("--slope")
    p.add_argument("--grid", help="eps range a:b, one point per decade")
    p.add_argument("--weight", type=float, help="edge weight of the target tree")
    p.add_argument("--config", help="pinch config JSON")
    p.add_argument("--distortion", action="store_true", help="add the tree distortion column")
    p.set_defaults(func=cmd_pinch)

    p = sub.add_parser("gromov", help="smallest distortion between two configurations")
    common(p, maxlen=False)
    p.add_argument("source", help="source space config JSON")
    p.add_argument("target", help="target backend JSON")
    p.add_argument("--restarts", type=int, default=64)
    p.set_defaults(func=cmd_gromov)

    p = sub.add_parser("check", help="run the invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--module", action="append", help="restrict to a module (repeatable)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)
    return ap


def render(argv) -> str:
    """Run a command and return its output text (no error handling)."""
    args = build_parser().parse_args(argv)
    return args.func(args)


def _fail(code: int, exc: BaseException) -> int:
    err = {"error": type(exc).__name__, "message": str(exc), "exitCode": code}
    sys.stderr.write(json.dumps(err) + "\n")
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_VALIDATION, exc)
    try:
        text = args.func(args)
        tio.emit(text, args.out)
    except NonConvergenceError as exc:
        return _fail(EXIT_NONCONVERGENCE, exc)
    except OSError as exc:
        return _fail(EXIT_IO, exc)
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        return _fail(EXIT_VALIDATION, exc)
    if getattr(args, "_check_failed", False):
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
