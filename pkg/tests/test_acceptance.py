"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with its measurements and
then asserts. Run ``pytest tests/test_acceptance.py -s`` to see the lines, or
``python tests/test_acceptance.py`` for the lines alone.
"""

import itertools
import json
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import pytest

from groupdyn import cli
from groupdyn import fixtures as fx
from groupdyn.action import (
    affine_mod,
    conjugate_action,
    evaluate,
    generator_displacement,
    inverse_action,
    inverse_table,
    power_action,
)
from groupdyn.chain import (
    SPOWindow,
    chain_relation,
    cr_core,
    is_chain_transitive,
    is_isolated_cr,
    is_weak_chain_transitive,
    sequentially_traced,
    spectral_decomposition,
    spo_windows,
    ssp_profile,
    step_graph,
    weak_chain_classes,
    weak_related,
)
from groupdyn.covering import CoveringMap, lift_pseudo_orbit, project_pseudo_orbit, validate_cover
from groupdyn.dynamics import (
    PseudoOrbit,
    ball_cover,
    enumerate_pseudo_orbits,
    exact_orbit,
    expansive_constant,
    find_untraced,
    fixed_sets_and_periodic,
    is_generator,
    is_transitive,
    lebesgue_number,
    nonwandering_core,
    nonwandering_set,
    pseudo_orbit_defect,
    separation_table,
    shadowing_profile,
    trace_search,
)
from groupdyn.gh import (
    CandidateMap,
    distortion,
    equi_defect,
    gh_action_distance,
    gh_space_distance,
    iso_defect,
    lemma_4_5_horizon,
    strong_gh_distance,
    synthesize_semiconjugacy,
)
from groupdyn.group_core import cayley_ball, compose, full_group, word_length_constant
from groupdyn.ladder import threshold_ladder
from groupdyn.metric_space import (
    FiniteMetricSpace,
    cycle,
    discrete,
    hausdorff_distance,
    set_distance,
)

sys.path.insert(0, str(Path(__file__).resolve().parent))
import oracles as O  # noqa: E402

F = Fraction
SPECS = Path(__file__).resolve().parent.parent / "specs"


def report(number, title, ok, detail, seconds=None, limit=None):
    """Print the criterion line; a runtime limit counts toward the verdict."""
    if limit is not None and seconds is not None and seconds >= limit:
        ok = False
        detail += f"; runtime {seconds:.1f}s over the {limit}s limit"
    timing = f" [{seconds:.1f}s]" if seconds is not None else ""
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}: {detail}{timing}", flush=True)
    return ok


def _rotation(n):
    return fx.z_action(cycle(n, F(1, n)), affine_mod(1, 1, n), name=f"ROT{n}")


def _trivial(space, name):
    return fx.z_action(space, tuple(range(len(space))), name=name)


def small_actions():
    """Z-actions on at most six points, all with generators ``t``/``T``."""
    rot = fx.rot()
    return {
        "ROT": rot,
        "ROT^-1": power_action(rot, -1),
        "ROT^2": power_action(rot, 2),
        "ROT5": _rotation(5),
        "ROT4": _rotation(4),
        "REFL6": fx.z_action(cycle(6, F(1, 6)), tuple((-x) % 6 for x in range(6)), name="REFL6"),
        "TWOROT": fx.tworot(),
        "TRIV_CYCLE": fx.triv_cycle(),
        "TRIV3": _trivial(discrete(3), "TRIV3"),
        "TRIV_C5": _trivial(cycle(5, F(1, 5)), "TRIV_C5"),
        "TRIV_C4": _trivial(cycle(4, F(1, 4)), "TRIV_C4"),
        "TRIV_TWO": _trivial(fx.tworot().space, "TRIV_TWO"),
    }


# -- 1 ------------------------------------------------------------------------


def criterion_1():
    t0 = time.time()
    acts = small_actions()
    names = list(acts)
    D, S = {}, {}
    problems = []
    for a, b in itertools.combinations_with_replacement(names, 2):
        phi, psi = acts[a], acts[b]
        res = gh_action_distance(phi, psi, method="exhaustive")
        fwd, bwd = res.forward.value, res.backward.value
        S[a, b], S[b, a] = fwd, bwd
        D[a, b] = D[b, a] = res.value
        # (i) symmetric = larger strong direction, and the two-map route agrees
        if res.value != max(fwd, bwd) or not res.agree:
            problems.append(f"(i) {a},{b}")
        if strong_gh_distance(phi, psi).value != fwd:
            problems.append(f"routes {a},{b}")
        if max(len(phi.space), len(psi.space)) <= 4 and O.strong(phi, psi) != fwd:
            problems.append(f"oracle {a},{b}")
        if phi.space == psi.space and res.value > generator_displacement(phi, psi):
            problems.append(f"(i) displacement {a},{b}")
        # (ii) space distance below the action distance, equal for trivial actions
        space = gh_space_distance(phi.space, psi.space).value
        if space > res.value:
            problems.append(f"(ii) {a},{b}")
        if phi.is_trivial and psi.is_trivial and space != res.value:
            problems.append(f"(ii) trivial {a},{b}")
        # (iii) nonnegative and zero on the diagonal
        if res.value < 0 or fwd < 0 or bwd < 0 or (a == b and res.value != 0):
            problems.append(f"(iii) {a},{b}")
    # (iv) symmetry, computed in both orders on a sample
    for a, b in [("ROT", "TWOROT"), ("ROT5", "REFL6"), ("TRIV3", "ROT^2")]:
        if gh_action_distance(acts[b], acts[a]).value != D[a, b]:
            problems.append(f"(iv) {a},{b}")
    # (v) and (vii): 2-relaxed triangle inequalities over every ordered triple
    triples = 0
    for a, b, c in itertools.product(names, repeat=3):
        triples += 1
        if D[a, c] > 2 * (D[a, b] + D[b, c]):
            problems.append(f"(v) {a},{b},{c}")
        if S[a, c] > 2 * (S[a, b] + S[b, c]):
            problems.append(f"(vii) {a},{b},{c}")
    pairs = len(names) * (len(names) + 1) // 2
    dt = time.time() - t0
    detail = f"{pairs} pairs, {triples} triples, {len(problems)} violations" + (
        f" ({', '.join(problems[:5])})" if problems else ""
    )
    return report(1, "GH distance laws", not problems and pairs >= 10, detail, dt, 60)


# -- 2 ------------------------------------------------------------------------


def _bumped(action, tau):
    X = action.space
    Y = FiniteMetricSpace(
        X.points, [[v + tau if i != j else 0 for j, v in enumerate(row)] for i, row in enumerate(X.dist)]
    )
    return type(action)(action.gens, Y, action.maps, name=action.name)


def _translation(n, a, b):
    return tuple(((i + a) % n) * n + (j + b) % n for i in range(n) for j in range(n))


def stability_triples():
    eps = F(2, 5)
    out = []
    for n in (3, 5):
        phi = fx.cat(n)
        h = _translation(n, 1, 2)
        psi = conjugate_action(phi, h)
        out.append((f"CAT{n} conjugate", phi, psi, CandidateMap(psi.space, phi.space, inverse_table(h)), eps))
    rot = fx.rot()
    refl = tuple((-x) % 6 for x in range(6))
    out.append(("ROT reflected", rot, conjugate_action(rot, refl), CandidateMap(rot.space, rot.space, inverse_table(refl)), eps))
    for name in ("CAT5", "CAT3", "ROT", "TWOROT"):
        phi = fx.get(name)
        psi = _bumped(phi, F(1, 1000))
        out.append((f"{name} perturbed", phi, psi, CandidateMap(psi.space, phi.space, tuple(range(len(phi.space)))), eps))
    return out


def criterion_2():
    t0 = time.time()
    problems = []
    triples = stability_triples()
    for label, phi, psi, i, eps in triples:
        c = min(expansive_constant(phi), F(1, 2)) / 2
        eta = min(eps, c) / 8 * F(9, 10)
        cert = synthesize_semiconjugacy(phi, psi, i, eps, eta)
        worst = max(iso_defect(i), equi_defect(i, phi, psi))
        margins = cert.eta < min(eps, cert.c) / 8 and worst < cert.delta <= cert.profile
        chain_ok = cert.iso_defect <= 2 * cert.eta + cert.delta < eps
        commutes = all(
            compose(phi.maps[s], cert.h.table) == compose(cert.h.table, psi.maps[s]) for s in phi.gens.labels
        )
        if not (margins and cert.residual == 0 and commutes and chain_ok and cert.within_bounds):
            problems.append(label)
        if "conjugate" in label or "reflected" in label:
            if cert.h.table != i.table:
                problems.append(label + " (conjugacy not recovered)")
    dt = time.time() - t0
    detail = f"{len(triples)} triples, residual 0 and iso-defect <= 2*eta + delta < eps" + (
        f"; failed: {', '.join(problems)}" if problems else ""
    )
    return report(2, "stability construction", not problems and len(triples) >= 3, detail, dt, 60)


# -- 3 ------------------------------------------------------------------------


def _deltas(action):
    lad = threshold_ladder(action)
    return sorted(set(lad.positive) | set(lad.midpoints) | {lad.top * 2})


def criterion_3():
    t0 = time.time()
    problems = []
    checks = 0
    for name in fx.FIXTURES:
        a = fx.get(name)
        r = full_group(a).radius
        eps0 = threshold_ladder(a).midpoints[0]
        for mode in ("realized", "presented"):
            kw = {"nontrivial": mode, "kernel_horizon": 24}
            transitive = is_transitive(a, eps0, mode)
            for delta in _deltas(a):
                graph = step_graph(a, delta)
                for k in sorted({1, max(r, 1)}):
                    rel = chain_relation(a, k, delta, **kw)
                    for x, y in rel:
                        checks += 1
                        if not weak_related(a, delta, x, y, graph=graph):
                            problems.append(f"{name} {mode} k={k} d={delta} ({x},{y})")
                chain_tr = is_chain_transitive(a, max(r, 1), delta, **kw)
                weak_tr = is_weak_chain_transitive(a, delta, graph=graph)
                if transitive and not chain_tr:
                    problems.append(f"{name} {mode} transitive but not chain transitive at {delta}")
                if chain_tr and not weak_tr:
                    problems.append(f"{name} {mode} chain but not weak-chain transitive at {delta}")
            if a.commutative:
                core = cr_core(a, nontrivial=mode)
                for s in a.gens.labels:
                    if {a.maps[s][x] for x in core} != set(core):
                        problems.append(f"{name} {mode} core moved by {s}")
    dt = time.time() - t0
    detail = f"{len(fx.FIXTURES)} fixtures, {checks} related pairs checked, {len(problems)} violations" + (
        f" ({'; '.join(problems[:3])})" if problems else ""
    )
    return report(3, "chain and weak-chain laws", not problems, detail, dt, 120)


# -- 4 ------------------------------------------------------------------------


def criterion_4():
    t0 = time.time()
    problems = []
    rows = []
    for first, second in (("ROT", "ROT_WIDE"), ("FLIP", "FLIP_E1")):
        a, b = fx.get(first), fx.get(second)
        if O.group_maps(a) != O.group_maps(b):
            problems.append(f"{first}/{second} realize different groups")
        for mode in ("realized", "presented"):
            ca, cb = cr_core(a, nontrivial=mode), cr_core(b, nontrivial=mode)
            if ca != cb:
                problems.append(f"{first}/{second} {mode} cores differ")
            rows.append(f"{first}/{second} {mode} core {len(ca)}")
        # "for every delta" is decided at the smallest scale of either system
        delta = min(threshold_ladder(a).midpoints[0], threshold_ladder(b).midpoints[0])
        wa, wb = is_weak_chain_transitive(a, delta), is_weak_chain_transitive(b, delta)
        if wa != wb:
            problems.append(f"{first}/{second} weak-chain verdicts differ")
        rows.append(f"weak-chain transitive {wa}")
    dt = time.time() - t0
    detail = "; ".join(rows) + (f"; failed: {', '.join(problems)}" if problems else "")
    return report(4, "generating-set independence", not problems, detail, dt)


# -- 5 ------------------------------------------------------------------------


def criterion_5():
    t0 = time.time()
    problems = []
    passing = 0
    swept = 0
    for name in fx.FIXTURES:
        a = fx.get(name)
        n = len(a.space)
        r = full_group(a).radius
        # windows long enough to hold any weak chain, balls holding a kernel word
        for mode in ("realized", "presented"):
            for eps in threshold_ladder(a).positive:
                nw_ok = nonwandering_set(a, eps, mode) == frozenset(range(n))
                for L, k in ((n, 2 * r + 1), (n + 1, 2 * r + 2)):
                    swept += 1
                    prof = ssp_profile(a, eps, L, k, nontrivial=mode, budget=None)
                    if prof.delta <= 0:
                        continue
                    passing += 1
                    sr = spectral_decomposition(a, prof.delta, eps, L, k, nontrivial=mode, budget=None)
                    classes = sr.decomposition.classes
                    disjoint = all(not (p & q) for p, q in itertools.combinations(classes, 2))
                    covers = set().union(*classes) == set(range(n))
                    invariant = all({a.maps[s][x] for x in c} == set(c) for c in classes for s in a.gens.labels)
                    transitive = all(O.transitive(a, eps, c, with_identity=mode == "presented") for c in classes)
                    if not (disjoint and covers and invariant and transitive and sr.verified and nw_ok):
                        problems.append(f"{name} {mode} eps={eps} L={L} k={k}")
    dt = time.time() - t0
    detail = f"{passing} of {swept} swept settings have a positive profile; {len(problems)} violations" + (
        f" ({'; '.join(problems[:3])})" if problems else ""
    )
    return report(5, "spectral decomposition", not problems and passing > 0, detail, dt)


# -- 6 ------------------------------------------------------------------------


def _radii(space):
    """Every distance value, the midpoints between them and one value above."""
    vals = sorted({v for row in space.dist for v in row})
    mids = [(p + q) / 2 for p, q in zip(vals, vals[1:])]
    return sorted(set(vals[1:]) | set(mids) | {vals[-1] * 2})


def criterion_6():
    t0 = time.time()
    problems = []
    for name in ("CAT3", "CAT5", "FLIP"):
        a = fx.get(name)
        m = expansive_constant(a)
        radii = _radii(a.space)
        verdicts = []
        for r in radii:
            cover = ball_cover(a.space, r)
            v = is_generator(a, cover).verdict
            verdicts.append(v)
            if v != (O.inseparable_pairs(a, cover) == []):
                problems.append(f"{name} r={r} pair scan")
            if 2 * r <= m and not v:
                problems.append(f"{name} r={r} should separate")
            if r > m and v:
                problems.append(f"{name} r={r} should not separate")
            lam = lebesgue_number(a.space, cover)
            if v and lam is not None and lam > m:
                problems.append(f"{name} r={r} Lebesgue number above the constant")
        if any(verdicts) != (m is not None):
            problems.append(f"{name} generator/expansive mismatch")
    laws = 0
    for name in fx.FIXTURES:
        a = fx.get(name)
        if not a.commutative:
            continue
        sep = expansive_constant(a)
        if expansive_constant(inverse_action(a)) != sep:
            problems.append(f"{name} inverse changes the constant")
        for m in (-3, -2, -1, 1, 2, 3):
            laws += 1
            p = power_action(a, m)
            if power_action(p, -1).maps != power_action(a, -m).maps:
                problems.append(f"{name} power {m} inverse law")
            if expansive_constant(p) != O.min_separation(p) or expansive_constant(power_action(a, -m)) != expansive_constant(p):
                problems.append(f"{name} power {m} expansivity")
            if sep is not None and not expansive_constant(p) <= sep:
                problems.append(f"{name} power {m} constant grew")
    dt = time.time() - t0
    detail = f"ball covers on CAT3/CAT5/FLIP, {laws} power checks, {len(problems)} violations" + (
        f" ({'; '.join(problems[:3])})" if problems else ""
    )
    return report(6, "expansivity equivalence", not problems, detail, dt)


# -- 7 ------------------------------------------------------------------------


def criterion_7():
    t0 = time.time()
    base, cover, proj, delta0 = fx.double_cover()
    pi = CoveringMap(cover.space, base.space, proj, delta0)
    problems = []
    if not validate_cover(pi, base, cover).valid:
        problems.append("cover invalid")
    trips = 0
    for k in (1, 2):
        idx = cayley_ball(cover, k)
        for f in enumerate_pseudo_orbits(base, k, delta0, index=idx, budget=None):
            trips += 1
            t = lift_pseudo_orbit(pi, base, cover, f)
            if project_pseudo_orbit(pi, base, cover, t) != f or pseudo_orbit_defect(cover, t) != pseudo_orbit_defect(base, f):
                problems.append(f"round trip k={k} {f.assignment}")
    lad = sorted(set(threshold_ladder(base)) | set(threshold_ladder(cover)))
    compared = 0
    for k in (1, 2, 3):
        idx = cayley_ball(cover, k)
        for eps in (F(1, 12), F(1, 6), F(1, 4)):
            for d in (v for v in lad if 0 < v <= delta0):
                compared += 1
                vb = find_untraced(base, k, d, eps, index=idx) is None
                vc = find_untraced(cover, k, d, eps, index=idx) is None
                if vb != vc:
                    problems.append(f"verdicts k={k} eps={eps} d={d}")
            pb = shadowing_profile(base, k, eps, index=idx).delta
            pc = shadowing_profile(cover, k, eps, index=idx).delta
            if min(pb, delta0) != min(pc, delta0):
                problems.append(f"profiles k={k} eps={eps}")
    dt = time.time() - t0
    detail = f"{trips} pseudo-orbits round-tripped, {compared} shadowing verdicts compared" + (
        f"; failed: {'; '.join(problems[:3])}" if problems else ""
    )
    return report(7, "covering transport", not problems, detail, dt, 60)


# -- 8 ------------------------------------------------------------------------


def _torus(n, a, b):
    def wrap(u):
        u %= n
        return min(u, n - u)

    return F(max(wrap(a[0] - b[0]), wrap(a[1] - b[1])), n)


def _run_cli(*argv):
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "report.json"
        code = cli.main([str(v) for v in argv] + ["--out", str(out)])
        return code, json.loads(out.read_text())


def _presented_core(action):
    """All points when some word t^m (m != 0) acts trivially, else the exact-return scan."""
    n = len(action.space)
    e = tuple(range(n))
    labels = action.gens.labels
    for m in range(1, 25):
        for s in labels:
            if O.word_map(action.maps, (s,) * m, n) == e:
                return frozenset(range(n))
    return frozenset(x for x in range(n) if any(g[x] == x for g in O.group_maps(action) if g != e))


def derived_rows():
    """Pairs of (label, oracle value, library value)."""
    rows = []

    def row(label, oracle, library):
        rows.append((label, oracle(), library()))

    cat5, rot, flip = fx.cat(5), fx.rot(), fx.flip()
    X5 = cat5.space
    idx = X5.index

    # group_core
    row("CAT5 ball k=3 size", lambda: len(O.ball_maps(cat5, 3)), lambda: len(cayley_ball(cat5, 3)))
    wide, flip1 = fx.rot_wide(), fx.flip_two_generators()
    row(
        "ROT word-length constant",
        lambda: O.word_length_constant(rot, rot.gens.labels, rot.maps, wide.gens.labels, wide.maps),
        lambda: word_length_constant(rot, wide),
    )
    row(
        "FLIP word-length constant",
        lambda: O.word_length_constant(flip, flip.gens.labels, flip.maps, flip1.gens.labels, flip1.maps),
        lambda: word_length_constant(flip, flip1),
    )
    # metric_space
    row("torus distance (0,0),(2,2)", lambda: _torus(5, (0, 0), (2, 2)), lambda: X5.dist[idx("0,0")][idx("2,2")])
    row(
        "set distance",
        lambda: min(_torus(5, (0, 0), q) for q in ((1, 0), (3, 3))),
        lambda: set_distance(X5, ["0,0"], ["1,0", "3,3"]),
    )
    row(
        "Hausdorff minus one point",
        lambda: max(min(X5.dist[a][b] for b in range(1, 25)) for a in range(25)),
        lambda: hausdorff_distance(X5, range(25), range(1, 25)),
    )
    # action
    row("CAT5 t(1,1)", lambda: "%d,%d" % ((2 * 1 + 1) % 5, (1 + 1) % 5), lambda: X5.points[evaluate(cat5, ("t",), "1,1")])
    row("CAT5 inverse table", lambda: inverse_table(cat5.maps["t"]), lambda: power_action(cat5, -1).maps["t"])
    refl = tuple((-x) % 6 for x in range(6))
    row(
        "ROT conjugated by reflection",
        lambda: compose(refl, compose(rot.maps["t"], inverse_table(refl))),
        lambda: conjugate_action(rot, refl).maps["t"],
    )
    solv = fx.solv(7, 0)
    row("SOLV ba", lambda: tuple((2 * x) % 7 for x in range(7)), lambda: compose(solv.maps["b"], solv.maps["a"]))
    row("SOLV aab", lambda: tuple((2 * x) % 7 for x in range(7)), lambda: compose(solv.maps["a"], compose(solv.maps["a"], solv.maps["b"])))
    base, cover, proj, delta0 = fx.double_cover()
    pi = CoveringMap(cover.space, base.space, proj, delta0)
    row("double cover valid at 1/6", lambda: O.cover_ok(proj, base, cover, delta0), lambda: validate_cover(pi, base, cover).valid)
    cidx = cayley_ball(cover, 2)
    celems, cedges = O.ball_structure(cover, 2)
    orbit = exact_orbit(base, 2, cidx)
    row(
        "lift of an exact orbit",
        lambda: O.lifts(proj, base, cover, celems, cedges, orbit.assignment, delta0)[0],
        lambda: lift_pseudo_orbit(pi, base, cover, orbit).assignment,
    )
    # dynamics
    fidx = cayley_ball(flip, 1)
    _, fedges = O.ball_structure(flip, 1)
    zero = flip.space.index("0")
    row("FLIP constructed mismatch defect", lambda: O.defect(flip, fedges, (zero, zero)), lambda: pseudo_orbit_defect(flip, PseudoOrbit(fidx, (zero, zero))))
    c1 = cayley_ball(cat5, 1)
    f = list(exact_orbit(cat5, "1,1", c1).assignment)
    f[1] = idx("3,3")
    disp = PseudoOrbit(c1, f)
    celems5, cedges5 = O.ball_structure(cat5, 1)
    row("CAT5 displaced orbit defect", lambda: O.defect(cat5, cedges5, f), lambda: pseudo_orbit_defect(cat5, disp))
    fel, fed = O.ball_structure(flip, 1)
    row(
        "FLIP anchored enumeration count",
        lambda: len(O.all_pseudo_orbits(flip, fel, fed, F(1), {0: zero})),
        lambda: sum(1 for _ in enumerate_pseudo_orbits(flip, 1, 1, anchors={(): zero})),
    )

    def scan_tracer():
        radii = [O.trace_radius(cat5, celems5, f, x) for x in range(25)]
        best = min((x for x in range(25) if radii[x] < F(1, 2)), key=lambda x: (radii[x], x))
        return best, radii[best]

    row("CAT5 tracer and radius", scan_tracer, lambda: (lambda r: (r.tracer, r.radius))(trace_search(cat5, disp, F(1, 2))))
    row("ROT shadowing profile at 1/6", lambda: O.shadowing_profile(rot, 2, F(1, 6)), lambda: shadowing_profile(rot, 2, F(1, 6)).delta)
    row("CAT5 separation (0,0),(1,0)", lambda: O.separation(cat5, idx("0,0"), idx("1,0")), lambda: separation_table(cat5)(idx("0,0"), idx("1,0")))
    row("CAT5 expansive constant", lambda: O.min_separation(cat5), lambda: expansive_constant(cat5))
    row(
        "CAT5 radius-1/5 balls generate",
        lambda: O.inseparable_pairs(cat5, ball_cover(X5, F(1, 5))) == [],
        lambda: is_generator(cat5, ball_cover(X5, F(1, 5))).verdict,
    )
    row("ROT nonwandering core (presented)", lambda: frozenset(O.nonwandering(rot, F(1, 12), with_identity=True)), lambda: nonwandering_core(rot, "presented"))
    e25 = tuple(range(25))
    row(
        "CAT5 nonwandering core",
        lambda: frozenset(x for x in range(25) if any(g[x] == x for g in O.group_maps(cat5) if g != e25)),
        lambda: nonwandering_core(cat5),
    )
    row("ROT transitive below the scale (presented)", lambda: O.transitive(rot, F(1, 12), with_identity=True), lambda: is_transitive(rot, F(1, 12), "presented"))
    row("FLIP transitive", lambda: O.transitive(flip, F(1, 2)), lambda: is_transitive(flip, F(1, 2)))
    row(
        "FLIP fixed sets of powers 1, 2",
        lambda: (frozenset(O.fixed(flip)), frozenset(O.fixed(power_action(flip, 2)))),
        lambda: (lambda p: (p.fixed[1], p.fixed[2]))(fixed_sets_and_periodic(flip, range(1, 3))),
    )
    row(
        "ROT fixed sets of powers 1..6",
        lambda: tuple(frozenset(O.fixed(power_action(rot, m))) for m in range(1, 7)),
        lambda: (lambda p: tuple(p.fixed[m] for m in range(1, 7)))(fixed_sets_and_periodic(rot)),
    )
    # chain
    row("CAT5 step graph edges at 3/10", lambda: len(O.step_edges(cat5, F(3, 10))), lambda: step_graph(cat5, F(3, 10)).n_edges)
    row(
        "ROT weakly related pairs at 1/12",
        lambda: sum(1 for x in range(6) for y in range(6) if O.reach(6, O.step_edges(rot, F(1, 12)))[x][y]),
        lambda: sum(1 for x in range(6) for y in range(6) if weak_related(rot, F(1, 12), x, y)),
    )
    row("ROT weak classes", lambda: O.weak_classes(rot, F(1, 12)), lambda: list(weak_chain_classes(rot, F(1, 12)).classes))
    row("FLIP weak classes", lambda: O.weak_classes(flip, F(1, 2)), lambda: list(weak_chain_classes(flip, F(1, 2)).classes))
    row("ROT chain core (presented)", lambda: _presented_core(rot), lambda: cr_core(rot, nontrivial="presented"))

    def flip_neighbourhood():
        core = _presented_core(flip)
        gamma = is_isolated_cr(flip, nontrivial="presented").gamma
        d = flip.space.dist
        return frozenset(y for y in range(8) if min(d[y][x] for x in core) <= gamma)

    row("FLIP isolation neighbourhood", flip_neighbourhood, lambda: is_isolated_cr(flip, nontrivial="presented").neighbourhood)

    def cat5_invariant():
        rep = is_isolated_cr(cat5)
        U = rep.neighbourhood
        out = set(U)
        for g in O.group_maps(cat5):
            out &= {g[y] for y in U}
        return out

    row("CAT5 maximal invariant set", cat5_invariant, lambda: set(is_isolated_cr(cat5).maximal_invariant))
    row("CAT5 window count", lambda: O.walk_count(cat5, F(3, 10), 4), lambda: sum(1 for _ in spo_windows(cat5, F(3, 10), 2)))
    w = SPOWindow((0, 2, 3, 4, 5), ("t",) * 4)
    row("ROT perturbed window tracer", lambda: O.seq_traced(rot, w.points, F(1, 6), 3), lambda: sequentially_traced(rot, w, F(1, 6), 3).point)
    row("ROT sequential profile", lambda: O.ssp_profile(rot, F(1, 3), 3, 3), lambda: ssp_profile(rot, F(1, 3), 3, 3).delta)
    row(
        "ROT decomposition",
        lambda: O.weak_classes(rot, F(1, 3)),
        lambda: list(spectral_decomposition(rot, F(1, 3), F(1, 3), 2, 3).decomposition.classes),
    )
    row(
        "FLIP decomposition (presented)",
        lambda: O.weak_classes(flip, F(1, 2)),
        lambda: list(spectral_decomposition(flip, F(1, 2), F(1, 2), 2, 2, nontrivial="presented").decomposition.classes),
    )
    # gh
    two, one = discrete(2), discrete(1)
    row("constant map 2 points to 1", lambda: O.iso_defect(two, one, (0, 0)), lambda: distortion(CandidateMap(two, one, (0, 0))))
    x, y = idx("1,1"), idx("1,2")
    swap = list(range(25))
    swap[x], swap[y] = y, x
    psi = type(cat5)(cat5.gens, X5, {"t": compose(tuple(swap), cat5.maps["t"])})
    row("equivariance defect of a swap", lambda: O.equi(cat5, psi, tuple(range(25))), lambda: equi_defect(CandidateMap(X5, X5, tuple(range(25))), cat5, psi))
    row("GH distance 2 points vs 1", lambda: O.gh_space(two, one), lambda: gh_space_distance(two, one).value)
    h = _translation(5, 1, 2)
    conj = conjugate_action(cat5, h)
    row(
        "CAT5 vs translated copy",
        lambda: max(O.iso_defect(conj.space, X5, inverse_table(h)), O.equi(cat5, conj, inverse_table(h))),
        lambda: gh_action_distance(cat5, conj).value,
    )
    cat3 = fx.cat(3)
    h3 = _translation(3, 1, 2)
    conj3 = conjugate_action(cat3, h3)
    cert = synthesize_semiconjugacy(cat3, conj3, CandidateMap(conj3.space, cat3.space, inverse_table(h3)), F(2, 5), F(1, 50))
    row("semiconjugacy recovers the conjugacy", lambda: (inverse_table(h3), F(0)), lambda: (cert.h.table, cert.residual))
    bumped = _bumped(cat5, F(1, 1000))
    eta = F(1, 5) / 8 * F(9, 10)
    cert5 = synthesize_semiconjugacy(cat5, bumped, CandidateMap(bumped.space, X5, tuple(range(25))), F(2, 5), eta)
    row(
        "perturbed CAT5 residual and iso-defect",
        lambda: (F(0), O.iso_defect(bumped.space, X5, tuple(range(25)))),
        lambda: (cert5.residual, cert5.iso_defect),
    )
    row("CAT5 closeness horizon at 1/5", lambda: O.horizon(cat5, 0, F(1, 5), O.min_separation(cat5) / 2), lambda: lemma_4_5_horizon(cat5, "0,0", F(1, 5)))
    tc = fx.triv_cycle()
    row("trivial cycle horizon", lambda: O.horizon(tc, 0, F(1, 8), O.min_separation(tc) / 2), lambda: lemma_4_5_horizon(tc, 0, F(1, 8)))
    # cli
    row(
        "validate FLIP",
        lambda: (len(flip.space), len(flip.gens), len(O.group_maps(flip))),
        lambda: (lambda r: (r["points"], r["generators"], r["realized_elements"]))(_run_cli("validate", SPECS / "flip.toml")[1]["results"]),
    )
    row(
        "decompose ROT classes",
        lambda: len(O.weak_classes(rot, F(1, 3))),
        lambda: len(_run_cli("decompose", SPECS / "rot.toml", "--epsilon", "1/3", "--window", "2", "--horizon", "3")[1]["results"]["classes"]),
    )
    return rows


def criterion_8():
    t0 = time.time()
    rows = derived_rows()
    bad = [label for label, o, lib in rows if o != lib]
    dt = time.time() - t0
    detail = f"{len(rows) - len(bad)} of {len(rows)} derived values match their oracles" + (
        f"; mismatched: {', '.join(bad)}" if bad else ""
    )
    return report(8, "oracle equivalence", not bad, detail, dt)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion, capsys):
    with capsys.disabled():
        ok = criterion()
    assert ok


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
