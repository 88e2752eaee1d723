"""Command-line surface: generators, checkers, engines, verifier, plots.

Every subcommand prints one JSON report to stdout (``gen`` and ``plot``
write their artifact instead when ``--out`` is given).  Exit codes:
0 definitive answer or Found, 2 inconclusive (ConsistentUpToResolution or
NotFound), 1 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .consistency import (
    PointAssignment,
    SamplingBudget,
    check_dependency_consistency,
    check_separation_consistency,
    find_hadwiger_order,
    hadwiger_order_check,
    subfamily_bound,
    witness_from_transversal,
)
from .engines import (
    EngineOpts,
    alternating_flat_fit,
    find_transversal_stiefel,
    verify_transversal,
)
from .errors import FlatstabError, ParseError
from .fields import field_from_tag
from .scenes import Scene, emit_scene, emit_svg, flat_from_dict, parse_scene

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _report(command, verdict, certificate=None, residuals=None, seed=None, t0=None, timing=False):
    doc = {
        "command": command,
        "verdict": verdict,
        "certificate": _jsonable(certificate),
        "residuals": _jsonable(residuals),
        "seed": seed,
        "timing": round(time.perf_counter() - t0, 6) if (timing and t0 is not None) else None,
    }
    print(json.dumps(doc, indent=1))


def _read_scene(path: str) -> Scene:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return parse_scene(text)


def _read_flat(path: str, scene: Scene):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return flat_from_dict(doc, scene.field, scene.d)


def _flat_dict(flat):
    return {
        "base": [float(v) for v in flat.basepoint],
        "dirs": [[float(v) for v in row] for row in flat.directions.vectors],
    }


def _scene_assignment(scene: Scene, seed: int) -> PointAssignment:
    """Use the scene's assignment, else sample a seeded Gaussian one."""
    if scene.assignment is not None:
        return scene.assignment
    rng = np.random.default_rng(seed)
    n = len(scene.sets)
    pts = rng.standard_normal((n, scene.k * scene.field.real_dim))
    return PointAssignment(scene.field, scene.k, pts, tuple(range(n)))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flatstab", description=__doc__)
    ap.add_argument("--timing", action="store_true", help="include wall time in reports")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a labeled scene")
    g.add_argument("--kind", required=True, choices=["planted", "singletons", "disjoint2d"])
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--field", default="R", choices=["R", "C"])
    g.add_argument("--vertices", type=int, default=5)
    g.add_argument("--spread", type=float, default=2.0)
    g.add_argument("--mode", default="random", choices=["random", "line", "corners"],
                   help="placement mode for disjoint2d")
    g.add_argument("--out", default=None)

    c = sub.add_parser("check-consistency", help="dependency-consistency checker")
    c.add_argument("scene")
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--samples", type=int, default=4096)
    c.add_argument("--restarts", type=int, default=32)

    s = sub.add_parser("check-separation", help="separation-consistency checker")
    s.add_argument("scene")

    f = sub.add_parser("find-transversal", help="search for a k-transversal")
    f.add_argument("scene")
    f.add_argument("--engine", default="stiefel", choices=["stiefel", "altfit"])
    f.add_argument("--seed", type=int, required=True)
    f.add_argument("--restarts", type=int, default=16)
    f.add_argument("--tol", type=float, default=1e-6)

    v = sub.add_parser("verify", help="re-validate a flat against a scene")
    v.add_argument("scene")
    v.add_argument("--flat", required=True)
    v.add_argument("--tol", type=float, default=1e-6)

    w = sub.add_parser("witness", help="per-set points and assignment from a transversal")
    w.add_argument("scene")
    w.add_argument("--flat", required=True)

    h = sub.add_parser("hadwiger", help="ordered-triple line-transversal checks")
    h.add_argument("scene")
    h.add_argument("--find-order", action="store_true")

    b = sub.add_parser("bound", help="subfamily size bound")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--field", default="R", choices=["R", "C"])

    p = sub.add_parser("plot", help="emit an SVG figure")
    p.add_argument("scene")
    p.add_argument("--flat", default=None)
    p.add_argument("--out", required=True)
    return ap


def _cmd_gen(args, t0, timing) -> int:
    from .scenes import GenSpec, gen_disjoint_2d, gen_planted, gen_singletons

    spec = GenSpec(
        seed=args.seed,
        d=args.d,
        k=args.k,
        n=args.n,
        vertices=args.vertices,
        spread=args.spread,
        field=field_from_tag(args.field),
    )
    if args.kind == "planted":
        scene = gen_planted(spec)
    elif args.kind == "singletons":
        scene = gen_singletons(spec)
    else:
        scene = gen_disjoint_2d(spec, mode=args.mode)
    text = emit_scene(scene)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        _report("gen", "Written", certificate={"out": args.out, "label": scene.label[0]},
                seed=args.seed, t0=t0, timing=timing)
    else:
        print(text)
    return EXIT_OK


def _cmd_check_consistency(args, t0, timing) -> int:
    scene = _read_scene(args.scene)
    assignment = _scene_assignment(scene, args.seed)
    budget = SamplingBudget(samples=args.samples, restarts=args.restarts, seed=args.seed)
    verdict = check_dependency_consistency(list(scene.sets), assignment, budget)
    if verdict.consistent:
        _report(
            "check-consistency",
            "ConsistentUpToResolution",
            certificate={"samples_used": verdict.samples_used},
            residuals={"max_merit": verdict.max_merit},
            seed=args.seed,
            t0=t0,
            timing=timing,
        )
        return EXIT_INCONCLUSIVE
    _report(
        "check-consistency",
        "Inconsistent",
        certificate={
            "subfamily": list(verdict.subfamily),
            "tuple": _jsonable(verdict.violating_tuple.components),
            "farkas": _jsonable(verdict.farkas),
        },
        residuals={"max_merit": verdict.max_merit},
        seed=args.seed,
        t0=t0,
        timing=timing,
    )
    return EXIT_OK


def _cmd_check_separation(args, t0, timing) -> int:
    scene = _read_scene(args.scene)
    if scene.assignment is None:
        raise ParseError("check-separation needs an assignment in the scene")
    bad = check_separation_consistency(list(scene.sets), scene.assignment)
    if bad is None:
        _report("check-separation", "Ok", t0=t0, timing=timing)
    else:
        _report("check-separation", "Counterexample",
                certificate={"first": list(bad.first), "second": list(bad.second)},
                t0=t0, timing=timing)
    return EXIT_OK


def _cmd_find_transversal(args, t0, timing) -> int:
    scene = _read_scene(args.scene)
    opts = EngineOpts(restarts=args.restarts, residual_tol=args.tol, seed=args.seed)
    engine = find_transversal_stiefel if args.engine == "stiefel" else alternating_flat_fit
    report = engine(list(scene.sets), scene.k, opts)
    if report.found:
        _report("find-transversal", "Found",
                certificate={"flat": _flat_dict(report.flat)},
                residuals={"stab": report.residual, "g": report.best_g},
                seed=args.seed, t0=t0, timing=timing)
        return EXIT_OK
    _report("find-transversal", "NotFound",
            certificate=None,
            residuals={"best_g": report.best_g},
            seed=args.seed, t0=t0, timing=timing)
    return EXIT_INCONCLUSIVE


def _cmd_verify(args, t0, timing) -> int:
    scene = _read_scene(args.scene)
    flat = _read_flat(args.flat, scene)
    ok, certs = verify_transversal(flat, list(scene.sets), args.tol)
    _report("verify", "Stabs" if ok else "Misses",
            certificate=[{"stabbed": bool(c[0]), "coefficients": _jsonable(c[1])} for c in certs],
            residuals=[float(c[2]) for c in certs],
            t0=t0, timing=timing)
    return EXIT_OK


def _cmd_witness(args, t0, timing) -> int:
    scene = _read_scene(args.scene)
    flat = _read_flat(args.flat, scene)
    wit = witness_from_transversal(list(scene.sets), flat)
    _report("witness", "Witness",
            certificate={
                "points": _jsonable(wit.points),
                "assignment": {
                    "points": _jsonable(wit.assignment.points),
                    "phi": list(wit.assignment.phi),
                },
            },
            t0=t0, timing=timing)
    return EXIT_OK


def _cmd_hadwiger(args, t0, timing) -> int:
    scene = _read_scene(args.scene)
    family = list(scene.sets)
    if args.find_order:
        order = find_hadwiger_order(family)
        if order is None:
            _report("hadwiger", "NoOrder", t0=t0, timing=timing)
        else:
            _report("hadwiger", "Order", certificate={"order": list(order)}, t0=t0, timing=timing)
        return EXIT_OK
    bad = hadwiger_order_check(family)
    if bad is None:
        _report("hadwiger", "Ok", t0=t0, timing=timing)
    else:
        _report("hadwiger", "BadTriple", certificate={"triple": list(bad)}, t0=t0, timing=timing)
    return EXIT_OK


def _cmd_bound(args, t0, timing) -> int:
    value = subfamily_bound(args.k, args.d, field_from_tag(args.field))
    _report("bound", "Bound", certificate={"bound": value}, t0=t0, timing=timing)
    return EXIT_OK


def _cmd_plot(args, t0, timing) -> int:
    scene = _read_scene(args.scene)
    flat = _read_flat(args.flat, scene) if args.flat else (scene.planted or None)
    svg = emit_svg(scene, flat=flat)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    _report("plot", "Written", certificate={"out": args.out}, t0=t0, timing=timing)
    return EXIT_OK


_DISPATCH = {
    "gen": _cmd_gen,
    "check-consistency": _cmd_check_consistency,
    "check-separation": _cmd_check_separation,
    "find-transversal": _cmd_find_transversal,
    "verify": _cmd_verify,
    "witness": _cmd_witness,
    "hadwiger": _cmd_hadwiger,
    "bound": _cmd_bound,
    "plot": _cmd_plot,
}


def run(argv) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    t0 = time.perf_counter()
    try:
        return _DISPATCH[args.command](args, t0, args.timing)
    except FlatstabError as exc:
        print(json.dumps({"command": args.command, "verdict": "Error",
                          "error": type(exc).__name__, "detail": str(exc)}), file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(json.dumps({"command": args.command, "verdict": "Error",
                          "error": "IOError", "detail": str(exc)}), file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
