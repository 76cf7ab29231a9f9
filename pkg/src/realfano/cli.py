"""Command-line entry point: ``realfano <group> <command> ...``.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 inconclusive
computation (non-generic pencil, exhausted box budget).  With ``--json``
exactly one JSON document is written to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from importlib import resources
from pathlib import Path

from . import __version__, atlas, bounds, locus, pencil, retraction

log = logging.getLogger("realfano")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3
SCHEMA = "realfano/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(doc: dict, as_json: bool, text: str) -> None:
    if as_json:
        out = {"schema": SCHEMA, **doc}
        sys.stdout.write(json.dumps(out, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _word_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _budget(text: str) -> int:
    try:
        value = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid budget {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("budget must be positive")
    return value


def shipped_systems() -> list[str]:
    root = resources.files("realfano").joinpath("data/systems")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_system(name: str) -> locus.PolynomialSystem:
    """A path on disk, or the name of a shipped system (``e1``, ``e1.json``)."""
    path = Path(name)
    if path.is_file():
        return locus.load_system(path)
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    res = resources.files("realfano").joinpath(f"data/systems/{stem}.json")
    if not res.is_file():
        raise FileNotFoundError(f"no system file {name!r} (shipped: {', '.join(shipped_systems())})")
    return locus.system_from_json(json.loads(res.read_text(encoding="utf-8")))


# -- pencil ----------------------------------------------------------------------


def cmd_pencil_classify(args) -> int:
    p = pencil.load_pencil(args.input)
    report = pencil.classification_report(p)
    text = f"class ({','.join(map(str, report['class']))}), k = {report['k']}"
    if report["verdict"]:
        text += f", real locus: {report['verdict']}"
    _emit({"command": "pencil classify", **report}, args.json, text)
    return EXIT_OK


def cmd_pencil_random(args) -> int:
    rng = random.Random(args.seed)
    p = pencil.random_generic_pencil(rng, args.n, congruence=not args.diagonal)
    _emit({"command": "pencil random", "seed": args.seed, **pencil.pencil_to_json(p)}, True, "")
    return EXIT_OK


# -- bounds ----------------------------------------------------------------------


def cmd_bounds(args) -> int:
    d = bounds.HodgeData(args.rho_c, args.h12, args.rho_r, args.lam)
    r = bounds.bound_report(d)
    text = f"Smith-Thom bound: {r.bound1}"
    if r.bound2 is not None:
        text += f"\nBorel-Swan bound: {r.bound2}" + (" (clamped)" if r.clamped else "")
    text += f"\nbest: {r.best}"
    doc = {"command": "bounds", "input": {"rho_c": d.rho_c, "h12": d.h12, "rho_r": d.rho_r, "lambda": d.lam}}
    _emit({**doc, **r.to_json()}, args.json, text)
    return EXIT_OK


# -- locus -----------------------------------------------------------------------


def cmd_locus_count(args) -> int:
    system = resolve_system(args.system)
    want_cover = args.export is not None
    result = locus.count_components(system, args.depths, budget=args.budget, threads=args.threads, keep_cover=want_cover)
    report, cover = result if want_cover else (result, None)
    if not report.stable:
        log.warning("estimate not stable across the last two depths: %s", report.history)
    if cover is not None:
        out = locus.export_cover(cover, args.export)
        log.info("wrote %s", out)
    hist = ", ".join(f"depth {d}: {c}" for d, c in report.history)
    text = (
        f"{system.name or args.system}: {report.component_estimate} component(s) at depth {report.depth}"
        f" ({report.retained_count} boxes), {'stable' if report.stable else 'NOT stable'}\n{hist}"
    )
    _emit({"command": "locus count", **report.to_json()}, args.json, text)
    return EXIT_OK


def cmd_locus_path(args) -> int:
    point = args.point
    if args.from_b:
        point = retraction.variety_point(point)
    pts, rows = [], []
    for t in args.t:
        pt = retraction.retract_path(point, t)
        enc = retraction.path_residual_enclosure(point, t)
        pts.append({"t": t, "point": list(pt), "residual_enclosures": [[e.lo, e.hi] for e in enc]})
        rows.append(f"t={t}: " + " ".join(f"{x:.6g}" for x in pt))
    _emit({"command": "locus path", "start": list(point), "path": pts}, args.json, "\n".join(rows))
    return EXIT_OK


# -- atlas -----------------------------------------------------------------------


def _record_text(r: atlas.FanoFamilyRecord) -> str:
    def show(x):
        return "-" if x is None else str(x)

    return (
        f"{r.id:>5}  iota={show(r.iota)} d={show(r.degree)} g={show(r.genus)} h12={r.h12} "
        f"-K^3={r.anticanonical_degree}  s in [{show(r.s_lower)}, {show(r.s_upper)}]  "
        f"geom. {r.geometric_rationality}  IC {r.exists_irrational_connected}  [{r.source}]"
    )


def cmd_atlas_lookup(args) -> int:
    r = atlas.lookup(args.family)
    text = _record_text(r) + (f"\n       {r.description}" if r.description else "")
    _emit({"command": "atlas lookup", "record": r.to_json()}, args.json, text)
    return EXIT_OK


def cmd_atlas_decide(args) -> int:
    evidence = [atlas.Certificate.parse(x) for x in args.evidence]
    negative = [atlas.Certificate.parse(x) for x in args.negative]
    v = atlas.decide(args.family, evidence, negative)
    doc = {
        "command": "atlas decide",
        "family": str(atlas.FamilyId.parse(args.family)),
        "evidence": sorted(str(c) for c in evidence),
        "negative": sorted(str(c) for c in negative),
        "verdict": v.to_json(),
    }
    _emit(doc, args.json, f"{doc['family']}: {v}")
    return EXIT_OK


def cmd_atlas_table(args) -> int:
    rows = atlas.table(s_gt=args.s_gt, m=args.m)
    _emit(
        {"command": "atlas table", "filter": {"s_gt": args.s_gt, "m": args.m}, "rows": [r.to_json() for r in rows]},
        args.json,
        "\n".join(_record_text(r) for r in rows) or "(no rows)",
    )
    return EXIT_OK


def cmd_atlas_check(args) -> int:
    violations = atlas.consistency_check()
    text = "no violations" if not violations else "\n".join(violations)
    _emit({"command": "atlas check", "violations": violations}, args.json, text)
    return EXIT_OK if not violations else EXIT_INPUT


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="realfano", description="Real pencils of quadrics, component bounds and real loci of Fano threefolds.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    groups = p.add_subparsers(dest="group", metavar="{pencil,bounds,locus,atlas}", parser_class=_Parser)
    groups.required = True

    pen = groups.add_parser("pencil", help="rigid isotopy classes of real pencils of quadrics")
    pen_cmds = pen.add_subparsers(dest="command", parser_class=_Parser)
    pen_cmds.required = True
    c = pen_cmds.add_parser(
        "classify",
        help="odd decomposition of a generic pencil",
        description="Classify a generic real pencil up to rigid isotopy by the runs of positive "
        "inertia jumps around the circle (Krasnov's classification of real intersections of two quadrics).",
    )
    c.add_argument("--input", required=True, help="pencil JSON file {n, q0, q1}")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_pencil_classify)
    c = pen_cmds.add_parser("random", help="seeded random generic pencil (JSON)", description="Generate a random generic pencil: a diagonal pencil with distinct roots moved by a random rational congruence.")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--n", type=int, default=6)
    c.add_argument("--diagonal", action="store_true", help="skip the random congruence")
    c.set_defaults(func=cmd_pencil_random)

    c = groups.add_parser(
        "bounds",
        help="Smith-Thom and Borel-Swan bounds on component counts",
        description="Upper bounds on the number of real components of a real Fano threefold: "
        "Smith-Thom 1 + h12 + rho_c, and the Borel-Swan refinement subtracting 2*lambda.",
    )
    c.add_argument("--rho-c", type=int, required=True, help="geometric Picard rank")
    c.add_argument("--h12", type=int, required=True, help="Hodge number h^{1,2}")
    c.add_argument("--lambda", dest="lam", type=int, help="rank of (1+sigma)Pic(X_C)")
    c.add_argument("--rho-r", type=int, help="real Picard rank")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_bounds)

    loc = groups.add_parser("locus", help="certified subdivision of real loci")
    loc_cmds = loc.add_subparsers(dest="command", parser_class=_Parser)
    loc_cmds.required = True
    c = loc_cmds.add_parser(
        "count",
        help="estimate the number of connected components",
        description="Subdivide the domain, discard boxes whose interval enclosure excludes zero, and count "
        "connected components of the retained cover (the explicit real models of the component-count results). "
        f"Shipped systems: {', '.join(shipped_systems())}.",
    )
    c.add_argument("--system", required=True, help="system JSON file or shipped name")
    c.add_argument("--depths", type=_int_list, required=True, help="comma-separated depths, e.g. 6,7,8")
    c.add_argument("--budget", type=_budget, default=locus.DEFAULT_BUDGET, help="maximum retained boxes (default %(default)s)")
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--export", help="write the finest cover (.json or .svg)")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_locus_count)
    c = loc_cmds.add_parser(
        "path",
        help="contraction of the cyclic six-variable system to the origin",
        description="Evaluate the explicit path contracting a real solution (a1,b1,a2,b2,a3,b3) of the cyclic "
        "system 2a_i = sqrt2 (a_j^2 + b_j^2) to the origin, with interval residual enclosures.",
    )
    c.add_argument("--point", type=_float_list, required=True, help="a1,b1,a2,b2,a3,b3 (or b1,b2,b3 with --from-b)")
    c.add_argument("--t", type=_float_list, default=[0.0, 0.25, 0.5, 0.75, 1.0], help="comma-separated times in [0, 1]")
    c.add_argument("--from-b", action="store_true", help="solve for the a-coordinates by fixed-point iteration")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_locus_path)

    at = groups.add_parser("atlas", help="Mori-Mukai families: bounds and rationality rules")
    at_cmds = at.add_subparsers(dest="command", parser_class=_Parser)
    at_cmds.required = True
    c = at_cmds.add_parser("lookup", help="one family record", description="Invariants and component-count bounds s_{m.n} of one Mori-Mukai family.")
    c.add_argument("family", help="family id m.n")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_atlas_lookup)
    c = at_cmds.add_parser(
        "decide",
        help="R-rationality verdict from certificates",
        description="Apply the R-rationality criteria for minimal Fano threefolds, the s=1 theorem and the "
        "product lemma to the given certificates.  Certificates: nonempty, connected, line, conic, cubic, "
        "picard-one, picard=N.",
    )
    c.add_argument("family", help="family id m.n")
    c.add_argument("--evidence", type=_word_list, default=[], help="comma-separated certificates that hold")
    c.add_argument("--negative", type=_word_list, default=[], help="comma-separated certificates known to fail")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_atlas_decide)
    c = at_cmds.add_parser("table", help="list records", description="List family records; --s-gt K gives the recap rows of families with s_{m.n} > K in table order.")
    c.add_argument("--s-gt", type=int)
    c.add_argument("--m", type=int, help="restrict to Picard rank m")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_atlas_table)
    c = at_cmds.add_parser("check", help="validate shipped data", description="Cross-check record invariants, Smith-Thom bounds, rule citations and rule agreement.")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_atlas_check)
    return p


def _configure_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except (pencil.NotGeneric, locus.BudgetExceeded) as exc:
        print(f"inconclusive: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (atlas.UnknownFamily, atlas.InconsistentEvidence, bounds.MissingLambda, pencil.PencilError,
            OSError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
