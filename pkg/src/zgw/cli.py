"""zgw command line: distances, bounds, landmark estimates, paths, ingestion, oracle, selftest.

Every command prints one JSON document with sorted keys and embeds a run manifest.
Exit codes: 2 parse error, 3 descriptor mismatch, 4 size cap, 5 non-geodesic space.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Any

import numpy as np

from . import __version__
from .approximation import landmark_fps, sandwich
from .bounds import bound_report
from .geometry import (
    contraction_coupling, contraction_holder_bound, contraction_path, geodesic_interpolate, mixture_coupling,
    mixture_holder_bound, mixture_holder_terms, mixture_path, verify_geodesic,
)
from .gw import SizeCapExceeded, SolveConfig, brute_force_gw, distortion, size_cap, solve_gw
from .metric_spaces import IncompatibleSpaces, NonGeodesicSpace, SpaceError
from .network import AttributedGraph, FusedParams, ZNetwork, from_attributed_graph_fused, from_edge_attributed_cone
from .transport import Coupling, check_p

EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_MISMATCH = 3
EXIT_SIZE = 4
EXIT_NONGEODESIC = 5


class InputError(Exception):
    """Input file or flag could not be parsed."""


def to_jsonable(obj: Any) -> Any:
    """Plain JSON types; non-finite numbers become strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_network(path: str) -> ZNetwork:
    obj = _read_json(path)
    try:
        net = ZNetwork.from_json(obj)
    except (SpaceError, ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    cap = size_cap()
    if net.n > cap:
        raise SizeCapExceeded(f"{path}: network has {net.n} points, cap is {cap}")
    return net


def _point(net: ZNetwork, text: str | None) -> Any:
    if text is None:
        return None
    try:
        return net.space.point_from_json(json.loads(text))
    except (json.JSONDecodeError, SpaceError, ValueError, TypeError) as exc:
        raise InputError(f"bad point literal {text!r}: {exc}") from exc


def _times(text: str) -> list[float]:
    try:
        times = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"bad time list {text!r}") from exc
    if not times or any(not 0 <= t <= 1 for t in times):
        raise InputError("times must be a nonempty list in [0, 1]")
    return sorted(times)


def _manifest(args: argparse.Namespace, started: float) -> dict:
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("command", "files", "func", "timing", "csv", "out") and v is not None}
    manifest = {"command": args.command, "inputs": list(getattr(args, "files", [])),
                "config": config, "version": __version__}
    if args.timing:
        manifest["wall_time"] = time.perf_counter() - started
    return manifest


def _solve_config(args, p: float | None = None) -> SolveConfig:
    return SolveConfig(p=args.p if p is None else p, restarts=args.restarts, tolerance=args.tol,
                       rng_seed=args.seed, verify=getattr(args, "verify", False))


def _coupling_json(c: Coupling) -> list:
    return c.matrix.tolist()


def _bounds_json(b) -> dict:
    return {"tlb": b.tlb, "flb": b.flb, "szlb": b.szlb, "slb": b.slb, "p": b.p, "direction": b.direction,
            "ordering_violations": list(b.ordering_violations)}


def cmd_dist(args) -> dict:
    X, Y = (load_network(f) for f in args.files)
    report = solve_gw(X, Y, _solve_config(args))
    out = {"value": report.value, "p": report.p, "exact": report.exact, "converged": report.converged,
           "heuristic": report.heuristic, "sparsity": report.sparsity,
           "restarts": [{"restart": t.restart, "init": t.init, "value": t.value, "iterations": t.iterations,
                         "converged": t.converged} for t in report.trace]}
    if args.coupling:
        out["coupling"] = _coupling_json(report.coupling)
    if report.bounds is not None:
        out["bounds"] = _bounds_json(report.bounds)
    return out


def cmd_bounds(args) -> dict:
    X, Y = (load_network(f) for f in args.files)
    if X.space != Y.space:
        raise IncompatibleSpaces("networks live over different spaces")
    z0 = _point(X, args.z0)
    b = bound_report(X, Y, args.p, z0, args.direction)
    out = _bounds_json(b)
    out["z0"] = X.space.point_to_json(b.z0)
    return out


def cmd_approx(args) -> dict:
    X, Y = (load_network(f) for f in args.files)
    if X.space != Y.space:
        raise IncompatibleSpaces("networks live over different spaces")
    values = X.kernel_values() + Y.kernel_values()
    k = min(args.landmarks, len(values))
    Q = landmark_fps(X.space, values, k, seed=args.seed)
    rep = sandwich(X, Y, Q, args.p, args.r, _solve_config(args))
    return {"rn_value": rep.rn_value, "rn_lower": rep.rn_lower, "lower": rep.lower, "upper": rep.upper,
            "empirical_hausdorff_term": rep.hausdorff_term, "r": rep.r, "landmarks": rep.n, "exact": rep.exact,
            "landmark_points": [X.space.point_to_json(q) for q in Q.points]}


def cmd_interp(args) -> tuple[dict, str]:
    nets = [load_network(f) for f in args.files]
    times = _times(args.times)
    p = args.p
    rows = []  # (s, t, distortion of the certifying coupling, upper bound on that distortion)
    if args.kind == "contraction":
        X = nets[0]
        z = _point(X, args.z0) if args.z0 is not None else X.kernel[0, 0]
        path = [contraction_path(X, z, t) for t in times]
        for (i, s), (j, t) in _time_pairs(times):
            c = contraction_coupling(X, s, t)
            rows.append((s, t, distortion(path[i], path[j], c, p), 2.0 * contraction_holder_bound(X, z, s, t, p)))
    else:
        if len(nets) != 2:
            raise InputError(f"--kind {args.kind} needs two networks")
        X, Y = nets
        if X.space != Y.space:
            raise IncompatibleSpaces("networks live over different spaces")
        if args.kind == "mixture":
            z = _point(X, args.z0) if args.z0 is not None else X.kernel[0, 0]
            pi = solve_gw(X, Y, _solve_config(args, p)).coupling
            path = [mixture_path(X, Y, z, t) for t in times]
            terms = mixture_holder_terms(X, Y, pi, z, p) if p < math.inf else None
            for (i, s), (j, t) in _time_pairs(times):
                c = mixture_coupling(X, Y, pi, s, t)
                bound = 2.0 * mixture_holder_bound(terms, s, t, p) if terms else math.nan
                rows.append((s, t, distortion(path[i], path[j], c, p), bound))
        else:
            if not X.space.geodesic_space:
                raise NonGeodesicSpace(f"{X.space.kind} spaces do not provide geodesics")
            pi = solve_gw(X, Y, _solve_config(args, p)).coupling
            full = p == math.inf
            path = [geodesic_interpolate(X, Y, pi, t, full_product=full) for t in times]
            rep = verify_geodesic(X, Y, pi, p, times)
            rows = [(r["s"], r["t"], r["distortion"], r["bound"]) for r in rep.rows if r["s"] < r["t"]]
    csv = "s,t,distortion,bound\n" + "".join(f"{s!r},{t!r},{d!r},{b!r}\n" for s, t, d, b in rows)
    out = {"kind": args.kind, "times": times, "networks": [net.to_json() for net in path],
           "estimates": [{"s": s, "t": t, "distortion": d, "bound": b} for s, t, d, b in rows]}
    return out, csv


def _time_pairs(times):
    return [((i, s), (j, t)) for i, s in enumerate(times) for j, t in enumerate(times) if i < j]


def cmd_ingest(args) -> dict:
    (path,) = args.files
    obj = _read_json(path)
    try:
        g = AttributedGraph.from_json(obj)
    except (SpaceError, ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if args.mode == "fused":
        if args.fill is None:
            raise InputError("--mode fused needs --fill")
        try:
            fill = g.edge_space.point_from_json(json.loads(args.fill))
            params = FusedParams(args.alpha, args.beta, args.q)
        except (json.JSONDecodeError, SpaceError, ValueError) as exc:
            raise InputError(str(exc)) from exc
        net = from_attributed_graph_fused(g, params, fill)
    else:
        base = None
        if args.fill is not None:
            base = g.edge_space.point_from_json(json.loads(args.fill))
        net = from_edge_attributed_cone(g, base)
    return net.to_json()


def cmd_oracle(args) -> dict:
    X, Y = (load_network(f) for f in args.files)
    value, coupling = brute_force_gw(X, Y, args.p, args.resolution, return_coupling=True)
    out = {"value": value, "p": args.p, "resolution": args.resolution}
    if args.coupling:
        out["coupling"] = _coupling_json(coupling)
    return out


def cmd_selftest(args) -> dict:
    from .selftest import run_selftest

    return run_selftest(seed=args.seed)


def _p_arg(text: str) -> float:
    try:
        return check_p(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zgw", description="Gromov-Wasserstein distances for Z-valued networks")
    parser.add_argument("--version", action="version", version=f"zgw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, nfiles, help_text):
        sp = sub.add_parser(name, help=help_text)
        if nfiles:
            sp.add_argument("files", nargs=nfiles, metavar="FILE")
        sp.add_argument("--p", type=_p_arg, default=2.0, help="exponent in [1, inf] (default 2)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--restarts", type=int, default=5)
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--timing", action="store_true", help="record wall time in the manifest")
        sp.set_defaults(func=func)
        return sp

    sp = add("dist", cmd_dist, 2, "upper bound on the distance from the solver")
    sp.add_argument("--verify", action="store_true", help="cross-check against the lower bounds")
    sp.add_argument("--coupling", action="store_true", help="include the coupling matrix")
    sp = add("bounds", cmd_bounds, 2, "lower-bound hierarchy")
    sp.add_argument("--z0", help="basepoint as a JSON point literal")
    sp.add_argument("--direction", choices=("out", "in"), default="out")
    sp = add("approx", cmd_approx, 2, "landmark R^n sandwich")
    sp.add_argument("--landmarks", type=int, default=4)
    sp.add_argument("--r", type=_p_arg, default=math.inf)
    sp = add("interp", cmd_interp, "+", "path samples and CSV of distance estimates")
    sp.add_argument("--kind", choices=("mixture", "contraction", "geodesic"), default="mixture")
    sp.add_argument("--times", default="0,0.5,1")
    sp.add_argument("--z0", help="fill point for mixture and contraction paths")
    sp.add_argument("--csv", help="write the estimates CSV to this path")
    sp = add("ingest", cmd_ingest, 1, "attributed graph to network")
    sp.add_argument("--mode", choices=("fused", "cone"), default="fused")
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--beta", type=float, default=0.5)
    sp.add_argument("--q", type=float, default=1.0)
    sp.add_argument("--fill", help="off-edge point (fused) or apex base (cone), JSON literal")
    sp = add("oracle", cmd_oracle, 2, "grid brute force over the coupling polytope")
    sp.add_argument("--resolution", type=int, default=1000)
    sp.add_argument("--coupling", action="store_true")
    add("selftest", cmd_selftest, 0, "quick invariant suites")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "files"):
        args.files = []
    started = time.perf_counter()
    csv = None
    try:
        result = args.func(args)
        if isinstance(result, tuple):
            result, csv = result
    except InputError as exc:
        print(f"zgw: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IncompatibleSpaces as exc:
        print(f"zgw: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except SizeCapExceeded as exc:
        print(f"zgw: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except NonGeodesicSpace as exc:
        print(f"zgw: {exc}", file=sys.stderr)
        return EXIT_NONGEODESIC
    except ValueError as exc:
        print(f"zgw: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    result["manifest"] = _manifest(args, started)
    sys.stdout.write(dumps(result))
    if csv is not None and getattr(args, "csv", None):
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(csv)
    if args.command == "selftest" and not result.get("passed", False):
        return EXIT_FAILURE
    return 0


if __name__ == "__main__":
    sys.exit(main())
