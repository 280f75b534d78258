"""Command-line front end: ``groupdyn COMMAND SPEC [SPEC] [options]``.

Each command loads one or two action specification files (or built-in
fixtures written ``fixture:NAME``), runs one analysis and writes a JSON
report with sorted keys. Exit status: 0 when the analysis completed
(whatever the verdict), 2 on input errors, 3 when a search budget cut the
analysis short (the report then carries the verified bounds).
"""

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import chain, covering, dynamics, gh
from . import fixtures as fx
from ._exact import format_fraction
from .errors import BudgetExceeded, GroupDynError, HorizonLimited, SpecError
from .group_core import cayley_ball, full_group
from .ladder import threshold_ladder
from .specfile import action_document, load

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3


def _q(v):
    return None if v is None else format_fraction(v)


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _ladder(text):
    return [_fraction(v) for v in text.split(",") if v.strip()]


def _pts(space, idx):
    return [space.points[i] for i in sorted(idx)]


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise SpecError(f"{args.command} needs --{', --'.join(missing)}")


class _Report:
    def __init__(self, command, specs, params):
        self.doc = {
            "schema_version": SCHEMA_VERSION,
            "analysis": command,
            "inputs": [{"name": s.name, "source": s.source, "sha256": hashlib.sha256(s.raw).hexdigest()} for s in specs],
            "input_digest": hashlib.sha256(b"".join(s.raw for s in specs)).hexdigest(),
            "parameters": params,
            "results": {},
            "certificates": {},
            "tool_version": __version__,
        }
        self.status = EXIT_OK

    def dump(self):
        return json.dumps(self.doc, sort_keys=True, indent=2) + "\n"


def _params(args):
    keys = ("delta", "epsilon", "horizon", "window", "budget", "seed", "radius", "eta", "c", "nontrivial", "method")
    out = {}
    for k in keys:
        v = getattr(args, k, None)
        if v is None:
            continue
        out[k] = _q(v) if isinstance(v, Fraction) else v
    if getattr(args, "ladder", None):
        out["ladder"] = [_q(v) for v in args.ladder]
    return out


def _ladder_of(args, action):
    return threshold_ladder(action, args.ladder) if args.ladder else None


# -- commands -----------------------------------------------------------------


def cmd_validate(args, specs, rep):
    a = specs[0].action
    res = rep.doc["results"]
    res.update(
        name=specs[0].name,
        points=len(a.space),
        generators=len(a.gens),
        kind=a.gens.kind,
        commutative=a.commutative,
        exact_metric=a.space.exact,
        resolution=_q(a.space.resolution),
        diameter=_q(a.space.diameter),
        relations=len(a.gens.relations),
    )
    try:
        g = full_group(a, args.horizon or 64)
        res["realized_elements"] = len(g)
        res["nonidentity_elements"] = len(g) - 1
        rep.doc["certificates"]["saturated_at"] = g.radius
    except HorizonLimited as exc:
        res["realized_elements"] = None
        rep.doc["certificates"]["horizon_limited"] = str(exc)


def cmd_ball(args, specs, rep):
    a = specs[0].action
    k = args.horizon if args.horizon is not None else 1
    ball = cayley_ball(a, k)
    rep.doc["results"] = {
        "radius": k,
        "size": len(ball),
        "elements": [
            {"witness": ".".join(e.witness) or "e", "map": [a.space.points[v] for v in e.map]}
            for e in ball.elements
        ],
    }
    rep.doc["certificates"]["saturated"] = ball.saturated


def cmd_expansive(args, specs, rep):
    a = specs[0].action
    table = dynamics.separation_table(a, budget=args.budget)
    exact = table.all_exact
    rep.doc["certificates"]["exact"] = exact
    if not exact:
        rep.status = EXIT_BUDGET
        lower = min((v for (x, y), v in table.sep.items() if x != y), default=None)
        rep.doc["results"] = {"min_separation_lower_bound": _q(lower)}
        return
    m = dynamics.expansive_constant(a, table)
    worst = [p for p, v in table.sep.items() if p[0] != p[1] and v == m]
    rep.doc["results"] = {
        "min_separation": _q(m),
        "expansive_below": _q(m),
        "pair_orbits": len(table.orbits()),
        "tightest_pair": _pts(a.space, worst[0]) if worst else None,
    }


def cmd_generator_check(args, specs, rep):
    _require(args, "radius")
    a = specs[0].action
    cover = dynamics.ball_cover(a.space, args.radius)
    chk = dynamics.is_generator(a, cover)
    m = dynamics.expansive_constant(a)
    rep.doc["results"] = {
        "generator": chk.verdict,
        "witness": list(chk.witness) if chk.witness else None,
        "cover_size": len(cover),
        "lebesgue_number": _q(dynamics.lebesgue_number(a.space, cover)),
        "min_separation": _q(m),
    }


def cmd_shadowing(args, specs, rep):
    _require(args, "epsilon")
    a = specs[0].action
    k = args.horizon or 1
    try:
        prof = dynamics.shadowing_profile(a, k, args.epsilon, ladder=_ladder_of(args, a), budget=args.budget)
    except BudgetExceeded as exc:
        prof = exc.partial
        rep.status = EXIT_BUDGET
        rep.doc["certificates"]["budget_exceeded"] = True
    rep.doc["results"] = {
        "delta": _q(prof.delta),
        "unbounded": prof.unbounded,
        "checked": [[_q(v), ok] for v, ok in prof.checked],
        "counterexample": prof.counterexample.as_table(a.space) if prof.counterexample else None,
    }
    rep.doc["certificates"].update(horizon_limited=prof.horizon_limited, nodes=prof.nodes)


def cmd_cr(args, specs, rep):
    a = specs[0].action
    kw = {"nontrivial": args.nontrivial, "budget": args.budget}
    try:
        if args.delta is not None:
            k = args.horizon or full_group(a).radius
            pts = chain.chain_recurrent_set(a, k, args.delta, **kw)
            rep.doc["results"] = {"chain_recurrent": _pts(a.space, pts), "horizon": k}
        else:
            pts = chain.cr_core(a, args.horizon, **kw)
            rep.doc["results"] = {"cr_core": _pts(a.space, pts)}
    except BudgetExceeded:
        rep.status = EXIT_BUDGET
        rep.doc["certificates"]["budget_exceeded"] = True


def _decomposition(a, dec):
    return {
        "classes": [_pts(a.space, c) for c in dec.classes],
        "invariant": list(dec.invariant),
        "transitive": list(dec.transitive),
        "delta": _q(dec.delta),
        "scale": _q(dec.scale),
    }


def cmd_weak_classes(args, specs, rep):
    _require(args, "delta")
    a = specs[0].action
    dec = chain.weak_chain_classes(a, args.delta, nontrivial=args.nontrivial, scale=args.epsilon)
    rep.doc["results"] = _decomposition(a, dec)


def cmd_ssp(args, specs, rep):
    _require(args, "epsilon")
    a = specs[0].action
    L, k = args.window or 2, args.horizon or 2
    try:
        prof = chain.ssp_profile(
            a, args.epsilon, L, k, nontrivial=args.nontrivial, ladder=_ladder_of(args, a), budget=args.budget
        )
    except BudgetExceeded as exc:
        prof = exc.partial
        rep.status = EXIT_BUDGET
        rep.doc["certificates"]["budget_exceeded"] = True
    rep.doc["results"] = {
        "delta": _q(prof.delta),
        "checked": [[_q(v), ok] for v, ok in prof.checked],
        "failing_center": a.space.points[prof.failing_center] if prof.failing_center is not None else None,
        "window": L,
        "horizon": k,
    }
    rep.doc["certificates"]["horizon_limited"] = prof.horizon_limited


def cmd_decompose(args, specs, rep):
    _require(args, "epsilon")
    a = specs[0].action
    L, k = args.window or 2, args.horizon or 2
    delta = args.delta
    if delta is None:
        prof = chain.ssp_profile(a, args.epsilon, L, k, nontrivial=args.nontrivial)
        delta = prof.delta if prof.delta > 0 else threshold_ladder(a).midpoints[0]
    sr = chain.spectral_decomposition(a, delta, args.epsilon, L, k, nontrivial=args.nontrivial)
    rep.doc["results"] = _decomposition(a, sr.decomposition)
    rep.doc["results"]["ssp_delta"] = _q(sr.ssp.delta)
    rep.doc["certificates"].update(
        hypothesis=sr.hypothesis,
        invariant=sr.invariant,
        transitive=sr.transitive,
        disjoint=sr.disjoint,
        covers=sr.covers,
        verified=sr.verified,
    )


def _gh_result(res, rep):
    if not res.exact:
        rep.status = EXIT_BUDGET
    rep.doc["certificates"].update(exact=res.exact, lower=_q(res.lower), upper=_q(res.upper), method=res.method)


def _map_table(m):
    return m.as_dict() if m is not None else None


def cmd_gh_space(args, specs, rep):
    X, Y = specs[0].action.space, specs[1].action.space
    res = gh.gh_space_distance(X, Y, args.budget, args.method)
    i, j = res.optimizer
    rep.doc["results"] = {"value": _q(res.value), "i": _map_table(i), "j": _map_table(j)}
    _gh_result(res, rep)


def cmd_gh_strong(args, specs, rep):
    phi, psi = specs[0].action, specs[1].action
    res = gh.strong_gh_distance(phi, psi, args.budget, args.method)
    rep.doc["results"] = {"value": _q(res.value), "i": _map_table(res.optimizer)}
    _gh_result(res, rep)


def cmd_gh_action(args, specs, rep):
    phi, psi = specs[0].action, specs[1].action
    res = gh.gh_action_distance(phi, psi, args.budget, args.method)
    rep.doc["results"] = {
        "value": _q(res.value),
        "forward": _q(res.forward.value),
        "backward": _q(res.backward.value),
        "two_map": _q(res.two_map),
        "i": _map_table(res.backward.optimizer),
        "j": _map_table(res.forward.optimizer),
    }
    rep.doc["certificates"].update(exact=res.exact, routes_agree=res.agree)
    if not res.exact:
        rep.status = EXIT_BUDGET


def _candidate(args, phi, psi):
    X, Y = phi.space, psi.space
    if args.map:
        ids = [t.strip() for t in args.map.split(",")]
        if len(ids) != len(Y):
            raise SpecError(f"--map needs {len(Y)} entries, got {len(ids)}")
        return gh.CandidateMap(Y, X, [X.index(t) for t in ids])
    if set(Y.points) <= set(X.points):
        return gh.CandidateMap(Y, X, [X.index(p) for p in Y.points])
    raise SpecError("spaces share no point names; pass --map")


def cmd_stability(args, specs, rep):
    _require(args, "epsilon", "eta")
    phi, psi = specs[0].action, specs[1].action
    i = _candidate(args, phi, psi)
    cert = gh.synthesize_semiconjugacy(phi, psi, i, args.epsilon, args.eta, args.delta, args.c, args.budget)
    rep.doc["results"] = {
        "h": cert.h.as_dict(),
        "residual": _q(cert.residual),
        "iso_defect": _q(cert.iso_defect),
        "hausdorff": _q(cert.hausdorff),
        "bound": _q(cert.bound),
        "delta": _q(cert.delta),
        "c": _q(cert.c),
        "profile": _q(cert.profile),
    }
    rep.doc["certificates"].update(
        equivariant=cert.equivariant,
        within_bounds=cert.within_bounds,
        nonunique=[psi.space.points[y] for y in cert.nonunique],
    )


def cmd_cover_check(args, specs, rep):
    base, cov = specs[0], specs[1]
    if cov.cover is None:
        raise SpecError(f"{cov.source}: no [cover] section")
    X, Y = base.action.space, cov.action.space
    proj = [X.index(p) for p in cov.cover["projection"]]
    pi = covering.CoveringMap(Y, X, proj, cov.cover["delta0"])
    report = covering.validate_cover(pi, base.action, cov.action)
    rep.doc["results"] = {
        "valid": report.valid,
        "violations": [{"kind": v.kind, "detail": v.detail} for v in report.violations],
        "delta0": _q(pi.delta0),
    }


COMMANDS = {
    "validate": (cmd_validate, 1, "check a spec file and summarize the action"),
    "ball": (cmd_ball, 1, "list the Cayley ball of radius --horizon"),
    "expansive": (cmd_expansive, 1, "minimum pair separation (expansive constants lie below it)"),
    "generator-check": (cmd_generator_check, 1, "is the cover by --radius balls a generator"),
    "shadowing": (cmd_shadowing, 1, "shadowing profile at --epsilon on the ball of radius --horizon"),
    "cr": (cmd_cr, 1, "chain recurrent set at --delta, or its small-delta core"),
    "weak-classes": (cmd_weak_classes, 1, "weak-chain classes at --delta"),
    "ssp": (cmd_ssp, 1, "sequential shadowing profile at --epsilon"),
    "decompose": (cmd_decompose, 1, "spectral decomposition with its checks"),
    "gh-space": (cmd_gh_space, 2, "Gromov-Hausdorff distance between the two spaces"),
    "gh-action": (cmd_gh_action, 2, "symmetric GH distance between two actions"),
    "gh-strong": (cmd_gh_strong, 2, "one-sided GH distance (maps from the second space to the first)"),
    "stability": (cmd_stability, 2, "synthesize a semiconjugacy from the second action to the first"),
    "cover-check": (cmd_cover_check, 2, "validate a covering (base file, then cover file)"),
}


def _add_options(p):
    p.add_argument("--delta", type=_fraction)
    p.add_argument("--epsilon", type=_fraction)
    p.add_argument("--horizon", type=int, help="Cayley ball radius k")
    p.add_argument("--window", type=int, help="half-length L of sequential windows")
    p.add_argument("--budget", type=int, help="search node budget")
    p.add_argument("--ladder", type=_ladder, help="comma-separated delta values replacing the ladder")
    p.add_argument("--seed", type=int, help="recorded in the report; all analyses are exhaustive")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--nontrivial", choices=("realized", "presented"), default="realized")
    p.add_argument("--radius", type=_fraction, help="ball radius for generator-check")
    p.add_argument("--eta", type=_fraction)
    p.add_argument("--c", type=_fraction, help="expansivity margin for stability")
    p.add_argument("--map", help="comma-separated target ids of the map from the second space")
    p.add_argument(
        "--method",
        choices=("branch-and-bound", "decision", "exhaustive"),
        default="branch-and-bound",
    )


def build_parser():
    parser = argparse.ArgumentParser(prog="groupdyn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"groupdyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, nspec, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("specs", nargs=nspec, metavar="SPEC")
        _add_options(p)
    p = sub.add_parser("fixtures", help="list built-in fixtures or export them as JSON specs")
    p.add_argument("--export", metavar="DIR")
    return parser


def _fixtures(args):
    if args.export:
        out = Path(args.export)
        out.mkdir(parents=True, exist_ok=True)
        for name, build in fx.FIXTURES.items():
            summary = (build.__doc__ or "").strip().split("\n")[0]
            doc = action_document(build(), summary)
            (out / f"{name}.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    for name, build in fx.FIXTURES.items():
        a = build()
        print(f"{name:12s} {len(a.space):3d} points  {len(a.gens)} generators")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "fixtures":
        return _fixtures(args)
    func, _, _ = COMMANDS[args.command]
    try:
        specs = [load(s) for s in args.specs]
        rep = _Report(args.command, specs, _params(args))
        func(args, specs, rep)
    except (SpecError, GroupDynError, OSError) as exc:
        print(f"groupdyn {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = rep.dump()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return rep.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
