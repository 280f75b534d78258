"""Gromov-Hausdorff distances between spaces and between actions.

A candidate map is any function table between finite spaces. Its isometry
defect combines the Hausdorff gap between its image and the target with its
metric distortion; its equivariance defect measures how far it is from
intertwining two actions over the generators. All quantities use the
bounded metrics ``min(d, 1)``.

Distances are minima over candidate maps, found by depth-first
branch-and-bound in lexicographic order (source index, then target index).
A threshold decision search and, for small instances, a vectorized
exhaustive sweep compute the same numbers by other routes.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._exact import ONE, ZERO, common_scale
from .dynamics import (
    PseudoOrbit,
    expansive_constant,
    pseudo_orbit_defect,
    shadowing_profile,
    trace_radii,
)
from .errors import BudgetExceeded, GeneratorMismatch, HorizonLimited, ShadowingMarginTooSmall
from .group_core import full_group, joint_ball

__all__ = [
    "CandidateMap",
    "iso_defect",
    "distortion",
    "image_gap",
    "equi_defect",
    "GHResult",
    "ActionGHResult",
    "gh_space_distance",
    "strong_gh_distance",
    "gh_action_distance",
    "SemiconjugacyCertificate",
    "synthesize_semiconjugacy",
    "lemma_4_5_horizon",
]

DEFAULT_BUDGET = 5_000_000
PROBE_BUDGET = 20_000
EXHAUSTIVE_LIMIT = 200_000


@dataclass(frozen=True)
class CandidateMap:
    """``table[y]`` is the target index of source point ``y``."""

    source: object
    target: object
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if len(self.table) != len(self.source):
            raise ValueError("candidate map needs one entry per source point")
        if any(not 0 <= v < len(self.target) for v in self.table):
            raise ValueError("candidate map points outside the target space")

    def __call__(self, y):
        return self.table[self.source.index(y)]

    def then(self, other):
        """``other`` after ``self``."""
        return CandidateMap(self.source, other.target, [other.table[v] for v in self.table])

    def as_dict(self):
        return {self.source.points[y]: self.target.points[x] for y, x in enumerate(self.table)}


def distortion(i):
    ds, dt = i.source.bounded, i.target.bounded
    t = i.table
    n = len(t)
    return max(
        (abs(dt[t[a]][t[b]] - ds[a][b]) for a in range(n) for b in range(a + 1, n)),
        default=ZERO,
    )


def image_gap(i):
    """Hausdorff distance between the image and the whole target."""
    dt = i.target.bounded
    img = set(i.table)
    return max(min(dt[x][y] for y in img) for x in range(len(i.target)))


def iso_defect(i):
    return max(image_gap(i), distortion(i))


def _check_labels(phi, psi):
    if phi.gens.labels != psi.gens.labels:
        raise GeneratorMismatch(
            f"generator labels differ: {phi.gens.labels} vs {psi.gens.labels}"
        )


def equi_defect(i, phi, psi):
    """``max_{s,y} d(Phi_s(i y), i(Psi_s y))`` for ``i`` from Psi's space to Phi's."""
    _check_labels(phi, psi)
    db = i.target.bounded
    t = i.table
    return max(
        db[phi.maps[s][t[y]]][t[psi.maps[s][y]]]
        for s in phi.gens.labels
        for y in range(len(i.source))
    )


# -- one-direction search ------------------------------------------------------


class _Direction:
    """Integer-scaled data for maps ``source -> target``.

    With ``src_maps``/``tgt_maps`` the cost includes the equivariance term
    ``d(T_s(i y), i(S_s y))``; otherwise it is the plain isometry defect.
    """

    def __init__(self, source, target, src_maps=None, tgt_maps=None):
        self.source, self.target = source, target
        self.den = common_scale(source.bounded, target.bounded)
        self.ds = [[int(v * self.den) for v in row] for row in source.bounded]
        self.dt = [[int(v * self.den) for v in row] for row in target.bounded]
        self.ns, self.nt = len(source), len(target)
        self.src_maps = src_maps or []
        self.tgt_maps = tgt_maps or []
        # equivariance terms that become checkable once y is assigned
        self.equi_at = [[] for _ in range(self.ns)]
        for S, T in zip(self.src_maps, self.tgt_maps):
            for y in range(self.ns):
                z = S[y]
                self.equi_at[max(y, z)].append((y, z, T))

    def value(self, scaled):
        return Fraction(scaled, self.den)

    def step_cost(self, table, y, x):
        """Largest new term when ``y -> x`` extends ``table[:y]``."""
        ds, dt = self.ds, self.dt
        worst = 0
        row_s, row_t = ds[y], dt[x]
        for a in range(y):
            v = abs(row_t[table[a]] - row_s[a])
            if v > worst:
                worst = v
        table[y] = x
        for a, z, T in self.equi_at[y]:
            v = dt[T[table[a]]][table[z]]
            if v > worst:
                worst = v
        return worst

    def gap(self, table):
        dt = self.dt
        img = set(table)
        return max(min(dt[x][y] for y in img) for x in range(self.nt))

    def cost(self, table):
        table = list(table)
        worst = 0
        for y in range(self.ns):
            worst = max(worst, self.step_cost(table, y, table[y]))
        return max(worst, self.gap(table))

    def lower_bound(self):
        """Best possible distortion of each source pair taken alone."""
        vals = sorted({v for row in self.dt for v in row})
        lb = 0
        for a in range(self.ns):
            for b in range(a + 1, self.ns):
                t = self.ds[a][b]
                lb = max(lb, min(abs(v - t) for v in vals))
        return lb

    def _bfs_order(self):
        """Source points in breadth-first order along the source maps, nearest-first otherwise."""
        seen, order = set(), []
        for root in range(self.ns):
            if root in seen:
                continue
            seen.add(root)
            queue = [root]
            while queue:
                y = queue.pop(0)
                order.append(y)
                nxt = [S[y] for S in self.src_maps] + sorted(range(self.ns), key=lambda z: (self.ds[y][z], z))
                for z in nxt:
                    if z not in seen:
                        seen.add(z)
                        queue.append(z)
        return order

    def relabelled(self, order):
        """Copy with source point ``order[k]`` renamed to ``k``."""
        pos = {y: k for k, y in enumerate(order)}
        out = object.__new__(_Direction)
        out.source, out.target, out.den = self.source, self.target, self.den
        out.ds = [[self.ds[a][b] for b in order] for a in order]
        out.dt = self.dt
        out.ns, out.nt = self.ns, self.nt
        out.src_maps = [[pos[S[y]] for y in order] for S in self.src_maps]
        out.tgt_maps = self.tgt_maps
        out.equi_at = [[] for _ in range(self.ns)]
        for S, T in zip(out.src_maps, out.tgt_maps):
            for y in range(self.ns):
                z = S[y]
                out.equi_at[max(y, z)].append((y, z, T))
        return out

    # branch-and-bound
    def search(self, budget):
        order = self._bfs_order()
        rel = self.relabelled(order)
        # a cheap probe at the lower bound settles the common exact case
        floor = rel.lower_bound()
        try:
            t = rel._feasible(floor, min(PROBE_BUDGET, budget) if budget is not None else PROBE_BUDGET)
        except BudgetExceeded:
            t = None
        if t is not None:
            v, exact, nodes = floor, True, 0
        else:
            v, t, exact, nodes = rel._search(budget)
        if t is not None:
            table = [None] * self.ns
            for k, y in enumerate(order):
                table[y] = t[k]
            t = tuple(table)
        return v, t, exact, nodes

    def _search(self, budget):
        best = [None, None]
        nodes = [0]
        table = [None] * self.ns
        floor = self.lower_bound()

        class _Done(Exception):
            pass

        def rec(y, partial):
            nodes[0] += 1
            if budget is not None and nodes[0] > budget:
                raise BudgetExceeded("branch-and-bound budget exhausted")
            if y == self.ns:
                c = max(partial, self.gap(table))
                if best[0] is None or c < best[0]:
                    best[0], best[1] = c, tuple(table)
                    if c <= floor:
                        raise _Done
                return
            # cheapest extensions first, ties by index
            order = sorted((max(partial, self.step_cost(table, y, x)), x) for x in range(self.nt))
            for c, x in order:
                if best[0] is not None and c >= best[0]:
                    break
                self.step_cost(table, y, x)
                rec(y + 1, c)
            table[y] = None

        try:
            rec(0, 0)
            exact = True
        except _Done:
            exact = True
        except BudgetExceeded:
            exact = False
        return best[0], best[1], exact, nodes[0]

    # decision route
    def feasible(self, bound, budget):
        """A map with every term ``<= bound``, or None."""
        order = self._bfs_order()
        t = self.relabelled(order)._feasible(bound, budget)
        if t is None:
            return None
        table = [None] * self.ns
        for k, y in enumerate(order):
            table[y] = t[k]
        return tuple(table)

    def _feasible(self, bound, budget):
        table = [None] * self.ns
        nodes = [0]
        dt = self.dt

        def covered():
            img = set(table)
            return all(any(dt[x][y] <= bound for y in img) for x in range(self.nt))

        def rec(y):
            nodes[0] += 1
            if budget is not None and nodes[0] > budget:
                raise BudgetExceeded("decision search budget exhausted")
            if y == self.ns:
                return covered()
            for x in range(self.nt):
                if self.step_cost(table, y, x) <= bound and rec(y + 1):
                    return True
            table[y] = None
            return False

        return tuple(table) if rec(0) else None

    def candidates(self):
        vals = {0}
        tv = {v for row in self.dt for v in row}
        sv = {v for row in self.ds for v in row}
        vals |= tv
        vals |= {abs(a - b) for a in tv for b in sv}
        return sorted(vals)

    def decide(self, budget):
        cand = self.candidates()
        lo, hi = 0, len(cand) - 1
        witness = self.feasible(cand[hi], budget)
        while lo < hi:
            mid = (lo + hi) // 2
            w = self.feasible(cand[mid], budget)
            if w is not None:
                hi, witness = mid, w
            else:
                lo = mid + 1
        if witness is None:
            witness = self.feasible(cand[lo], budget)
        return cand[lo], witness

    # vectorized sweep over every map
    def exhaustive(self):
        ns, nt = self.ns, self.nt
        if nt**ns > EXHAUSTIVE_LIMIT:
            raise BudgetExceeded(f"{nt}^{ns} maps exceed the exhaustive limit")
        M = np.array(list(itertools.product(range(nt), repeat=ns)), dtype=np.int64).reshape(-1, ns)
        dt = np.array(self.dt, dtype=np.int64)
        ds = np.array(self.ds, dtype=np.int64)
        cost = np.abs(dt[M[:, :, None], M[:, None, :]] - ds[None]).reshape(len(M), -1).max(axis=1)
        for S, T in zip(self.src_maps, self.tgt_maps):
            S = np.array(S)
            T = np.array(T)
            cost = np.maximum(cost, dt[T[M], M[:, S]].max(axis=1))
        gap = dt[:, M].min(axis=2).max(axis=0)
        cost = np.maximum(cost, gap)
        k = int(np.argmin(cost))
        return int(cost[k]), tuple(int(v) for v in M[k])


@dataclass(frozen=True)
class GHResult:
    """Optimum of a map search; ``lower``/``upper`` bracket it when not exact."""

    value: Fraction
    optimizer: tuple
    exact: bool
    lower: Fraction
    upper: Fraction
    nodes: int = 0
    method: str = "branch-and-bound"


def _run(direction, budget, method):
    if method == "exhaustive":
        v, t = direction.exhaustive()
        val = direction.value(v)
        return GHResult(val, CandidateMap(direction.source, direction.target, t), True, val, val, 0, method)
    if method == "decision":
        v, t = direction.decide(budget)
        val = direction.value(v)
        return GHResult(val, CandidateMap(direction.source, direction.target, t), True, val, val, 0, method)
    if method != "branch-and-bound":
        raise ValueError(f"unknown method {method!r}")
    v, t, exact, nodes = direction.search(budget)
    lb = direction.lower_bound()
    ub = v if v is not None else direction.den
    opt = CandidateMap(direction.source, direction.target, t) if t is not None else None
    val = direction.value(ub)
    lower = val if exact else direction.value(min(lb, ub))
    return GHResult(val, opt, exact, lower, val, nodes, method)


def _combine(a, b):
    """The larger of two independent one-direction optima."""
    return GHResult(
        max(a.value, b.value),
        (a.optimizer, b.optimizer),
        a.exact and b.exact,
        max(a.lower, b.lower),
        max(a.upper, b.upper),
        a.nodes + b.nodes,
        a.method,
    )


def gh_space_distance(X, Y, budget=DEFAULT_BUDGET, method="branch-and-bound"):
    """``d_GH(X, Y)``: the best pair of maps ``X -> Y``, ``Y -> X`` under the isometry defect.

    The optimizer is the pair ``(i, j)``.
    """
    return _combine(_run(_Direction(X, Y), budget, method), _run(_Direction(Y, X), budget, method))


def strong_gh_distance(phi, psi, budget=DEFAULT_BUDGET, method="branch-and-bound"):
    """One-sided distance: maps ``i`` from Psi's space into Phi's space,
    scored by ``max(iso_defect(i), equi_defect(i, phi, psi))``."""
    _check_labels(phi, psi)
    labels = phi.gens.labels
    d = _Direction(
        psi.space,
        phi.space,
        [psi.maps[s] for s in labels],
        [phi.maps[s] for s in labels],
    )
    return _run(d, budget, method)


@dataclass(frozen=True)
class ActionGHResult:
    """Symmetric distance with both one-sided values and the two-map cross-check."""

    value: Fraction
    forward: GHResult
    backward: GHResult
    two_map: Fraction
    exact: bool

    @property
    def agree(self):
        return self.two_map is None or self.two_map == self.value

    @property
    def optimizer(self):
        return (self.backward.optimizer, self.forward.optimizer)


def _two_map_value(phi, psi, budget):
    """Smallest threshold admitting both maps at once, by decision search."""
    labels = phi.gens.labels
    fwd = _Direction(psi.space, phi.space, [psi.maps[s] for s in labels], [phi.maps[s] for s in labels])
    bwd = _Direction(phi.space, psi.space, [phi.maps[s] for s in labels], [psi.maps[s] for s in labels])
    cand = sorted({fwd.value(v) for v in fwd.candidates()} | {bwd.value(v) for v in bwd.candidates()})

    def ok(v):
        return (
            fwd.feasible(int(v * fwd.den), budget) is not None
            and bwd.feasible(int(v * bwd.den), budget) is not None
        )

    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(cand[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cand[lo]


def gh_action_distance(phi, psi, budget=DEFAULT_BUDGET, method="branch-and-bound", cross_check=True):
    """Symmetric action distance.

    Computed as the larger of the two one-sided distances and, with
    ``cross_check``, again as the least threshold at which a map each way
    exists simultaneously.
    """
    _check_labels(phi, psi)
    f = strong_gh_distance(phi, psi, budget, method)
    b = strong_gh_distance(psi, phi, budget, method)
    two = None
    if cross_check:
        try:
            two = _two_map_value(phi, psi, budget)
        except BudgetExceeded:
            two = None
    return ActionGHResult(max(f.value, b.value), f, b, two, f.exact and b.exact)


# -- stability construction --------------------------------------------------


@dataclass(frozen=True)
class SemiconjugacyCertificate:
    """The synthesized ``h`` with its defects and the proof's bounds.

    ``residual`` is ``max_{s,y} d(Phi_s(h y), h(Psi_s y))``; ``bound`` is
    ``2*eta + delta``; ``nonunique`` lists the points whose tracer was not
    unique below ``c/2``.
    """

    h: CandidateMap
    residual: Fraction
    iso_defect: Fraction
    distortion: Fraction
    hausdorff: Fraction
    bound: Fraction
    hausdorff_bound: Fraction
    epsilon: Fraction
    eta: Fraction
    delta: Fraction
    c: Fraction
    profile: Fraction
    nonunique: tuple = field(default_factory=tuple)

    @property
    def equivariant(self):
        return self.residual == 0

    @property
    def within_bounds(self):
        return self.iso_defect <= self.bound and self.hausdorff <= self.hausdorff_bound and self.bound < self.epsilon


def _open_half(name, v):
    if not ZERO < v < ONE / 2:
        raise ShadowingMarginTooSmall(f"{name} = {v} must lie in (0, 1/2)")


def synthesize_semiconjugacy(phi, psi, i, eps, eta, delta=None, c=None, budget=None):
    """Build ``h: Y -> X`` with ``Phi_s h = h Psi_s`` by tracing transported orbits.

    ``i`` maps Psi's space into Phi's space with small isometry and
    equivariance defects. For each ``y`` the pseudo-orbit
    ``g -> i(Psi_g(y))`` over the whole group is ``eta``-traced, and ``h(y)``
    is the tracer. Margins are validated first:

    * ``eps``, ``eta``, ``delta``, ``c`` in ``(0, 1/2)``;
    * ``c`` below the minimum separation of ``phi``;
    * ``eta < min(eps, c) / 8`` and ``delta < eta``;
    * ``delta`` at most the shadowing profile of ``phi`` at ``eta``;
    * both defects of ``i`` below ``delta``.

    ``c`` defaults to half of ``min(sep, 1/2)``; ``delta`` defaults to the
    largest admissible value, capped just below ``eta``.
    """
    _check_labels(phi, psi)
    eps, eta = Fraction(eps), Fraction(eta)
    sep = expansive_constant(phi)
    if sep is None:
        raise ShadowingMarginTooSmall("a one-point space has no expansive constant")
    c = Fraction(c) if c is not None else min(sep, ONE / 2) / 2
    for name, v in (("eps", eps), ("eta", eta), ("c", c)):
        _open_half(name, v)
    if not c < sep:
        raise ShadowingMarginTooSmall(f"c = {c} is not below the minimum separation {sep}")
    if not eta < min(eps, c) / 8:
        raise ShadowingMarginTooSmall(f"eta = {eta} is not below min(eps, c)/8 = {min(eps, c) / 8}")
    index = joint_ball([phi, psi])
    kw = {} if budget is None else {"budget": budget}
    prof = shadowing_profile(phi, index.radius, eta, index=index, **kw).delta
    iso = iso_defect(i)
    equi = equi_defect(i, phi, psi)
    worst = max(iso, equi)
    if delta is None:
        cap = min(prof, eta)
        delta = cap if cap < eta else (worst + eta) / 2
    delta = Fraction(delta)
    _open_half("delta", delta)
    if not delta < eta:
        raise ShadowingMarginTooSmall(f"delta = {delta} is not below eta = {eta}")
    if not delta <= prof:
        raise ShadowingMarginTooSmall(
            f"delta = {delta} exceeds the shadowing profile {prof} at eta = {eta}"
        )
    if not worst < delta:
        raise ShadowingMarginTooSmall(
            f"defects of i (iso {iso}, equivariance {equi}) are not below delta = {delta}"
        )
    ptab = index.tables_for(psi)
    h = []
    nonunique = []
    for y in range(len(psi.space)):
        f = PseudoOrbit(index, [i.table[t[y]] for t in ptab])
        assert pseudo_orbit_defect(phi, f) < delta
        radii = trace_radii(phi, f)
        good = [x for x, r in enumerate(radii) if r < eta]
        if not good:
            raise ShadowingMarginTooSmall(f"no {eta}-tracer for the orbit of {psi.space.points[y]}")
        x = min(good, key=lambda z: (radii[z], z))
        if sum(1 for r in radii if r < c / 2) != 1:
            nonunique.append(y)
        h.append(x)
    hmap = CandidateMap(psi.space, phi.space, h)
    return SemiconjugacyCertificate(
        hmap,
        equi_defect(hmap, phi, psi),
        iso_defect(hmap),
        distortion(hmap),
        image_gap(hmap),
        2 * eta + delta,
        eta + delta,
        eps,
        eta,
        delta,
        c,
        prof,
        tuple(nonunique),
    )


def lemma_4_5_horizon(phi, x, eps, c=None, max_radius=64):
    """Smallest ``n`` such that staying ``c``-close to ``x`` along ``G_n`` forces ``d < eps``.

    Scans ``n = 0, 1, ...`` over the Cayley balls; ``c`` defaults to half the
    minimum separation.
    """
    eps = Fraction(eps)
    x = phi.space.index(x)
    if c is None:
        sep = expansive_constant(phi)
        c = sep / 2 if sep is not None else ONE
    c = Fraction(c)
    group = full_group(phi, max_radius)
    d = phi.space.dist
    n_pts = len(phi.space)
    close = [ZERO] * n_pts
    lengths = sorted({e.length for e in group.elements})
    by_len = {L: [e for e in group.elements if e.length == L] for L in lengths}
    for n in range(group.radius + 1):
        for e in by_len.get(n, ()):
            for y in range(n_pts):
                v = d[e.map[x]][e.map[y]]
                if v > close[y]:
                    close[y] = v
        if all(d[x][y] < eps for y in range(n_pts) if close[y] <= c):
            return n
    raise HorizonLimited(f"no horizon up to {group.radius} works for eps = {eps}")
