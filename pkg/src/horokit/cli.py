"""Command-line front end: build spaces, run checks, emit reports.

Reports are deterministic JSON (sorted keys, no timestamps) embedding the
full run configuration; identical configurations produce identical bytes.
Exit codes: 0 all verdicts pass, 1 some verdict failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .covers import SCHEDULES, decompose, nerve
from .errors import vertex_budget
from .graphs import MetricGraph
from .homology import homology_type
from .hyperbolicity import four_point_delta
from .instances import BUILDERS, resolve_instance
from .mv import (
    assemble_mv,
    check_mv_exactness,
    cluster_check,
    milnor_counterexample_demo,
    y_vanishing_check,
)
from .opencone import band_cover_check, build_net, cone_cover_tower, cone_fixture
from .rips import remark_decomposition_check
from .spaces import Truncation, build_augmented
from .groups import GroupSpec

SCHEMA = "horokit-report/1"


def _dump(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(command: str, config: dict, body: dict) -> dict:
    return {"schema": SCHEMA, "command": command, "config": config, **body}


def _load_graph_or_instance(args):
    """--instance accepts a registered name, an instance config, or a graph file."""
    name = args.instance
    if name in BUILDERS:
        return resolve_instance(name)
    with open(name) as fh:
        data = json.load(fh)
    if data.get("format") == "horokit-graph":
        return MetricGraph.from_json(data)
    return resolve_instance(name)


def _cmd_build_augmented(args) -> int:
    if args.group is None and args.instance is None:
        print("horokit: build-augmented needs --instance or --group", file=sys.stderr)
        return 2
    if args.group is None:
        space = resolve_instance(args.instance)
    else:
        spec, peripherals = GroupSpec.from_config(args.group)
        trunc = Truncation(rg=args.rg, lmax=args.lmax, mmax=args.mmax)
        space = build_augmented(spec, peripherals, trunc, name=args.group)
    if args.format == "dot":
        text = space.graph.to_dot()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    report = _report(
        "build-augmented",
        {"instance": space.describe(), "budget": vertex_budget()},
        {
            "graph": space.graph.to_json(),
            "cosets": [[e.index, e.rep, e.slot] for e in space.table.entries],
        },
    )
    _dump(report, args.out)
    if args.cosets_out:
        space.table.to_csv(args.cosets_out)
    return 0


def _cmd_delta(args) -> int:
    obj = _load_graph_or_instance(args)
    graph = obj if isinstance(obj, MetricGraph) else obj.graph
    trunc = dict(graph.meta) if isinstance(obj, MetricGraph) else obj.trunc.as_dict()
    est = four_point_delta(
        graph, mode=args.mode, samples=args.samples, seed=args.seed, truncation=trunc
    )
    report = _report(
        "delta",
        {"instance": args.instance, "mode": args.mode, "seed": args.seed},
        {"result": est.as_dict()},
    )
    _dump(report, args.out)
    return 0


def _cmd_nerve(args) -> int:
    space = resolve_instance(args.instance)
    schedule = SCHEDULES[args.schedule]
    dec = decompose(space, args.stage, schedule)
    fam = {
        "whole": dec.whole,
        "thick": dec.thick,
        "cusp": dec.cusp,
        "interface": dec.interface,
    }[args.family]
    cx = nerve(fam, cap=args.dimcap)
    report = _report(
        "nerve",
        {
            "instance": args.instance,
            "stage": args.stage,
            "schedule": args.schedule,
            "family": args.family,
            "dimcap": args.dimcap,
        },
        {
            "columns": len(fam),
            "faces": [[list(f) for f in fs] for fs in cx.faces],
            "face_counts": [cx.n_faces(p) for p in range(args.dimcap + 1)],
        },
    )
    _dump(report, args.out)
    return 0


def _cmd_homology(args) -> int:
    space = resolve_instance(args.instance)
    schedule = SCHEDULES[args.schedule]
    dec = decompose(space, args.stage, schedule)
    fam = {
        "whole": dec.whole,
        "thick": dec.thick,
        "cusp": dec.cusp,
        "interface": dec.interface,
    }[args.family]
    cx = nerve(fam, cap=args.dimcap)
    groups = {
        str(p): homology_type(cx, p).as_dict() for p in range(args.degree + 1)
    }
    report = _report(
        "homology",
        {
            "instance": args.instance,
            "stage": args.stage,
            "schedule": args.schedule,
            "family": args.family,
            "dimcap": args.dimcap,
            "degree": args.degree,
        },
        {"homology": groups},
    )
    _dump(report, args.out)
    return 0


def _cmd_mv_verify(args) -> int:
    space = resolve_instance(args.instance)
    schedule = SCHEDULES[args.schedule]
    stage = assemble_mv(space, args.stage, schedule, cap=args.dimcap)
    verdict = check_mv_exactness(stage)
    cluster = cluster_check(space, args.stage, schedule, cap=args.dimcap)
    report = _report(
        "mv-verify",
        {
            "instance": args.instance,
            "stage": args.stage,
            "schedule": args.schedule,
            "dimcap": args.dimcap,
            "window": stage.window_size,
        },
        {"mv": verdict.as_dict(), "cluster": cluster.as_dict()},
    )
    _dump(report, args.out)
    return 0 if verdict.all_exact and cluster.ok else 1


def _cmd_y_vanish(args) -> int:
    space = resolve_instance(args.instance)
    schedule = SCHEDULES[args.schedule]
    rep = y_vanishing_check(space, args.stage, schedule)
    report = _report(
        "y-vanish",
        {"instance": args.instance, "stage": args.stage, "schedule": args.schedule},
        {"vanishing": rep.as_dict()},
    )
    _dump(report, args.out)
    return 0 if rep.all_zero else 1


def _cmd_rips_check(args) -> int:
    obj = _load_graph_or_instance(args)
    graph = obj if isinstance(obj, MetricGraph) else obj.graph
    res = remark_decomposition_check(
        graph, args.diameter, args.low, args.high, cap=args.dimcap
    )
    report = _report(
        "rips-check",
        {
            "instance": args.instance,
            "diameter": args.diameter,
            "low": args.low,
            "high": args.high,
            "dimcap": args.dimcap,
        },
        {"result": res.as_dict(), "hypothesis_holds": args.low + args.diameter <= args.high},
    )
    _dump(report, args.out)
    return 0 if res.ok else 1


def _cmd_opencone(args) -> int:
    if args.fixture.endswith(".json"):
        from .opencone import cone_from_json

        with open(args.fixture) as fh:
            cone = cone_from_json(json.load(fh))
    else:
        cone = cone_fixture(args.fixture, levels=args.levels)
    levels = cone.levels
    nets = [build_net(cone, n) for n in range(1, levels + 1)]
    bands = [band_cover_check(cone, nets[n - 1], n) for n in range(1, levels + 1)]
    tower = cone_cover_tower(cone, nets, args.imax)
    ok = all(n.covered for n in nets) and all(bands) and all(tower.covering)
    report = _report(
        "opencone",
        {"fixture": args.fixture, "levels": levels, "imax": args.imax},
        {
            "distortion": cone.distortion,
            "nets": [n.as_dict() for n in nets],
            "band_covering": bands,
            "tower": tower.as_dict(),
        },
    )
    _dump(report, args.out)
    return 0 if ok else 1


def _cmd_milnor_demo(args) -> int:
    report = milnor_counterexample_demo()
    _dump(report, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="horokit",
        description="horoball spaces, cover nerves, and homology-tower checks",
    )
    p.add_argument("--version", action="version", version=f"horokit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, instance=True):
        if instance:
            sp.add_argument("--instance", required=True, help="name or config path")
        sp.add_argument("--schedule", choices=sorted(SCHEDULES), default="paper")
        sp.add_argument("--dimcap", type=int, default=2)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("build-augmented", help="build a truncated augmented space")
    sp.add_argument("--instance", default=None, help="registered name or config path")
    sp.add_argument("--group", default=None, help="group config path (with --rg/--lmax)")
    sp.add_argument("--rg", type=int, default=2)
    sp.add_argument("--lmax", type=int, default=3)
    sp.add_argument("--mmax", type=int, default=None)
    sp.add_argument("--format", choices=["json", "dot"], default="json")
    sp.add_argument("--cosets-out", default=None, help="write the coset table as CSV")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_build_augmented)

    sp = sub.add_parser("delta", help="four-point hyperbolicity constant")
    common(sp)
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.set_defaults(func=_cmd_delta)

    sp = sub.add_parser("nerve", help="export a cover-family nerve")
    common(sp)
    sp.add_argument("--stage", type=int, default=0)
    sp.add_argument(
        "--family", choices=["whole", "thick", "cusp", "interface"], default="whole"
    )
    sp.set_defaults(func=_cmd_nerve)

    sp = sub.add_parser("homology", help="homology of a cover-family nerve")
    common(sp)
    sp.add_argument("--stage", type=int, default=0)
    sp.add_argument(
        "--family", choices=["whole", "thick", "cusp", "interface"], default="whole"
    )
    sp.add_argument("--degree", type=int, default=1)
    sp.set_defaults(func=_cmd_homology)

    sp = sub.add_parser("mv-verify", help="stage exactness and cluster verdicts")
    common(sp)
    sp.add_argument("--stage", type=int, default=0)
    sp.set_defaults(func=_cmd_mv_verify)

    sp = sub.add_parser("y-vanish", help="cusp tower vanishing verdict")
    common(sp)
    sp.add_argument("--stage", type=int, default=0)
    sp.set_defaults(func=_cmd_y_vanish)

    sp = sub.add_parser("rips-check", help="window decomposition of a Rips complex")
    common(sp)
    sp.add_argument("--diameter", type=int, required=True)
    sp.add_argument("--low", type=int, required=True)
    sp.add_argument("--high", type=int, required=True)
    sp.set_defaults(func=_cmd_rips_check)

    sp = sub.add_parser("opencone", help="cone nets, band covers, nerve tower")
    sp.add_argument("--fixture", default="two_rays")
    sp.add_argument("--levels", type=int, default=4)
    sp.add_argument("--imax", type=int, default=3)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_opencone)

    sp = sub.add_parser("milnor-demo", help="half-line tower demonstration report")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_milnor_demo)

    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0,) else 0
    try:
        return args.func(args)
    except (FileNotFoundError, KeyError, ValueError) as e:
        print(f"horokit: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
