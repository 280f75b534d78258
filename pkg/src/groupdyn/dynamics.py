"""Pseudo-orbits on Cayley balls, tracing, shadowing and expansivity.

A pseudo-orbit is an assignment of points to the elements of a Cayley ball.
The ball may come from a different (finer) action than the one whose
defect is measured, which is how covers and joint constructions share one
index set. Enumeration is a backtracking search over ball elements in their
canonical order, with bitmask forward checking along Cayley edges.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from ._exact import ZERO
from .action import power_action
from .errors import BudgetExceeded, IncompleteAssignment, InexactSeparation, NotACover
from .group_core import cayley_ball, full_group, nonidentity_elements
from .ladder import threshold_ladder

__all__ = [
    "PseudoOrbit",
    "TraceResult",
    "ShadowingProfile",
    "SeparationTable",
    "GeneratorCheck",
    "PeriodicReport",
    "exact_orbit",
    "pseudo_orbit_defect",
    "enumerate_pseudo_orbits",
    "trace_radii",
    "trace_search",
    "find_untraced",
    "shadowing_profile",
    "separation_table",
    "expansive_constant",
    "ball_cover",
    "is_generator",
    "lebesgue_number",
    "nonwandering_set",
    "nonwandering_core",
    "is_transitive",
    "fixed_sets_and_periodic",
]

DEFAULT_BUDGET = 2_000_000


# -- pseudo-orbits ------------------------------------------------------------


class PseudoOrbit:
    """A point (index) for every element of a Cayley ball.

    ``assignment[i]`` is the point attached to ``index.elements[i]``;
    ``None`` marks an unassigned entry.
    """

    __slots__ = ("index", "assignment")

    def __init__(self, index, assignment):
        self.index = index
        self.assignment = tuple(assignment)
        if len(self.assignment) != len(index):
            raise IncompleteAssignment(
                f"assignment has {len(self.assignment)} entries, ball has {len(index)}"
            )

    @property
    def horizon(self):
        return self.index.radius

    @property
    def complete(self):
        return all(p is not None for p in self.assignment)

    def __getitem__(self, g):
        return self.assignment[self.index.position(g)]

    def __eq__(self, other):
        return (
            isinstance(other, PseudoOrbit)
            and self.index is other.index
            and self.assignment == other.assignment
        )

    def __hash__(self):
        return hash(self.assignment)

    def __repr__(self):
        return f"PseudoOrbit(k={self.horizon}, {self.assignment})"

    def as_table(self, space):
        """Witness word (joined labels, ``e`` for the identity) to point id."""
        return {
            (".".join(e.witness) or "e"): space.points[p]
            for e, p in zip(self.index.elements, self.assignment)
        }


def exact_orbit(action, x, index=None, k=1):
    """The orbit ``g -> Phi_g(x)`` on ``index`` (default: the ball of radius k)."""
    index = index if index is not None else cayley_ball(action, k)
    x = action.space.index(x)
    return PseudoOrbit(index, [t[x] for t in index.tables_for(action)])


def pseudo_orbit_defect(action, f):
    """Largest ``d(Phi_s(f(g)), f(sg))`` over Cayley edges inside the ball."""
    if not f.complete:
        raise IncompleteAssignment("pseudo-orbit has unassigned entries")
    d = action.space.dist
    a = f.assignment
    worst = ZERO
    for i, s, j in f.index.edge_list():
        v = d[action.maps[s][a[i]]][a[j]]
        if v > worst:
            worst = v
    return worst


class _Counter:
    __slots__ = ("nodes", "budget")

    def __init__(self, budget):
        self.nodes = 0
        self.budget = budget

    def tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes")


class _EdgeCSP:
    """Constraint network of ``d(Phi_s f(g), f(sg)) < delta`` over a ball."""

    def __init__(self, action, index, delta, counter):
        space = action.space
        n = len(space)
        d = space.dist
        self.n = n
        self.m = len(index)
        self.counter = counter
        fwd = {}
        bwd = {}
        loop = {}
        for s in action.gens.labels:
            phi = action.maps[s]
            f = [0] * n
            b = [0] * n
            lp = 0
            for p in range(n):
                row = d[phi[p]]
                for q in range(n):
                    if row[q] < delta:
                        f[p] |= 1 << q
                        b[q] |= 1 << p
                if row[p] < delta:
                    lp |= 1 << p
            fwd[s], bwd[s], loop[s] = f, b, lp
        full = (1 << n) - 1
        self.unary = [full] * self.m
        # later[i]: constraints from element i onto elements after it
        self.later = [[] for _ in range(self.m)]
        for i, s, j in index.edge_list():
            if i == j:
                self.unary[i] &= loop[s]
            elif i < j:
                self.later[i].append((j, fwd[s]))
            else:
                self.later[j].append((i, bwd[s]))

    def initial(self, anchors):
        doms = list(self.unary)
        for i, p in anchors.items():
            doms[i] &= 1 << p
        return doms

    def assign(self, pos, p, doms):
        new = list(doms)
        for j, table in self.later[pos]:
            v = new[j] & table[p]
            if not v:
                return None
            new[j] = v
        return new

    def solutions(self, pos, doms, assign):
        self.counter.tick()
        if pos == self.m:
            yield tuple(assign)
            return
        dom = doms[pos]
        while dom:
            low = dom & -dom
            dom ^= low
            p = low.bit_length() - 1
            new = self.assign(pos, p, doms)
            if new is None:
                continue
            assign[pos] = p
            yield from self.solutions(pos + 1, new, assign)
        assign[pos] = None

    def untraced(self, pos, doms, assign, cand, masks):
        """First solution no point traces, or None.

        ``cand`` holds the points still tracing the partial assignment;
        once it is empty, any completion is a counterexample.
        """
        if not cand:
            for sol in self.solutions(pos, doms, assign):
                return sol
            return None
        self.counter.tick()
        if pos == self.m:
            return None
        dom = doms[pos]
        mk = masks[pos]
        while dom:
            low = dom & -dom
            dom ^= low
            p = low.bit_length() - 1
            new = self.assign(pos, p, doms)
            if new is None:
                continue
            assign[pos] = p
            hit = self.untraced(pos + 1, new, assign, cand & mk[p], masks)
            if hit is not None:
                return hit
        assign[pos] = None
        return None


def _anchor_positions(action, index, anchors):
    out = {}
    for g, p in (anchors or {}).items():
        out[index.position(g)] = action.space.index(p)
    return out


def _index(action, k, index):
    return index if index is not None else cayley_ball(action, k)


def enumerate_pseudo_orbits(action, k, delta, anchors=None, *, index=None, budget=DEFAULT_BUDGET):
    """Yield every ``delta``-pseudo-orbit on the ball, in lexicographic order.

    ``anchors`` maps ball elements (positions, realized elements or witness
    words) to points the pseudo-orbit must take there.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    index = _index(action, k, index)
    csp = _EdgeCSP(action, index, delta, _Counter(budget))
    doms = csp.initial(_anchor_positions(action, index, anchors))
    if not all(doms):
        return
    for sol in csp.solutions(0, doms, [None] * csp.m):
        yield PseudoOrbit(index, sol)


# -- tracing ------------------------------------------------------------------


@dataclass(frozen=True)
class TraceResult:
    tracer: int
    radius: Fraction
    unique_at: Fraction = None
    n_tracers: int = 1


def trace_radii(action, f):
    """``max_g d(Phi_g(x), f(g))`` for every point ``x``."""
    tables = f.index.tables_for(action)
    d = action.space.dist
    a = f.assignment
    out = []
    for x in range(len(action.space)):
        out.append(max(d[t[x]][p] for t, p in zip(tables, a)))
    return out


def trace_search(action, f, eps):
    """Best ``eps``-tracer of ``f`` (min radius, then smallest index), or None."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    radii = trace_radii(action, f)
    good = [x for x, r in enumerate(radii) if r < eps]
    if not good:
        return None
    best = min(good, key=lambda x: (radii[x], x))
    return TraceResult(best, radii[best], eps if len(good) == 1 else None, len(good))


def _trace_masks(action, index, eps):
    """``masks[i][p]``: points ``x`` with ``d(Phi_g x, p) < eps`` for ``g = elements[i]``."""
    d = action.space.dist
    n = len(action.space)
    close = [sum(1 << q for q in range(n) if d[y][q] < eps) for y in range(n)]
    masks = []
    for t in index.tables_for(action):
        mk = [0] * n
        for x in range(n):
            bit = 1 << x
            c = close[t[x]]
            while c:
                low = c & -c
                c ^= low
                mk[low.bit_length() - 1] |= bit
        masks.append(mk)
    return masks


def find_untraced(action, k, delta, eps, *, index=None, budget=DEFAULT_BUDGET, _counter=None):
    """A ``delta``-pseudo-orbit that no point ``eps``-traces, or None."""
    delta, eps = Fraction(delta), Fraction(eps)
    index = _index(action, k, index)
    counter = _counter or _Counter(budget)
    csp = _EdgeCSP(action, index, delta, counter)
    doms = csp.initial({})
    if not all(doms):
        return None
    masks = _trace_masks(action, index, eps)
    full = (1 << csp.n) - 1
    sol = csp.untraced(0, doms, [None] * csp.m, full, masks)
    return PseudoOrbit(index, sol) if sol is not None else None


@dataclass(frozen=True)
class ShadowingProfile:
    """Largest ladder ``delta`` whose pseudo-orbits on the ball are all traced.

    ``unbounded`` means even arbitrary assignments are traced. ``checked``
    lists ``(delta, passed)`` pairs in the order examined; ``counterexample``
    is the first untraced pseudo-orbit found above ``delta``.
    """

    delta: Fraction
    epsilon: Fraction
    radius: int
    horizon_limited: bool
    unbounded: bool
    checked: tuple
    counterexample: PseudoOrbit = field(default=None, compare=False)
    nodes: int = 0


def shadowing_profile(action, k, eps, *, index=None, ladder=None, budget=DEFAULT_BUDGET):
    """Sweep the threshold ladder upward until some pseudo-orbit escapes tracing.

    Raises BudgetExceeded with ``partial`` set to the profile verified so
    far (a lower bound) when the node budget runs out.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    index = _index(action, k, index)
    ladder = ladder if ladder is not None else threshold_ladder(action)
    counter = _Counter(budget)
    checked = []
    best = ZERO
    hit = None
    for v in ladder.positive:
        try:
            hit = find_untraced(action, k, v, eps, index=index, _counter=counter)
        except BudgetExceeded as exc:
            partial = ShadowingProfile(
                best, eps, index.radius, not index.saturated, False, tuple(checked), None, counter.nodes
            )
            raise BudgetExceeded(str(exc), partial=partial) from None
        checked.append((v, hit is None))
        if hit is not None:
            break
        best = v
    unbounded = False
    if hit is None:
        top = ladder.top + max(action.space.diameter, 1)
        unbounded = find_untraced(action, k, top, eps, index=index, _counter=counter) is None
    return ShadowingProfile(
        best, eps, index.radius, not index.saturated, unbounded, tuple(checked), hit, counter.nodes
    )


# -- separation and expansivity -----------------------------------------------


def _pair(x, y):
    return (x, y) if x <= y else (y, x)


@dataclass(frozen=True)
class SeparationTable:
    """``sep(x, y)``: the largest distance along the pair orbit of ``{x, y}``.

    ``orbit[pair]`` labels the pair's orbit under the generators.
    """

    n: int
    sep: dict
    exact: dict
    orbit: dict

    def __call__(self, x, y):
        return self.sep[_pair(x, y)]

    @property
    def all_exact(self):
        return all(self.exact.values())

    def orbits(self):
        groups = {}
        for p, c in self.orbit.items():
            groups.setdefault(c, []).append(p)
        return [sorted(v) for _, v in sorted(groups.items())]


def separation_table(action, budget=None):
    """Pair-orbit closure by breadth-first search from every unordered pair.

    With a ``budget`` on visited pairs per orbit, an unfinished search
    reports its running maximum as a lower bound with ``exact`` False.
    """
    n = len(action.space)
    d = action.space.dist
    maps = [action.maps[s] for s in action.gens.labels]
    sep, exact, orbit = {}, {}, {}
    cid = 0
    for x in range(n):
        for y in range(x, n):
            start = (x, y)
            if start in orbit:
                continue
            seen = {start}
            queue = deque([start])
            best = d[x][y]
            done = True
            while queue:
                a, b = queue.popleft()
                for m in maps:
                    q = _pair(m[a], m[b])
                    if q not in seen:
                        if budget is not None and len(seen) >= budget:
                            done = False
                            queue.clear()
                            break
                        seen.add(q)
                        queue.append(q)
                        v = d[q[0]][q[1]]
                        if v > best:
                            best = v
            if done:
                for p in seen:
                    sep[p], exact[p], orbit[p] = best, True, cid
            else:
                sep[start], exact[start], orbit[start] = best, False, cid
            cid += 1
    return SeparationTable(n, sep, exact, orbit)


def expansive_constant(action, table=None):
    """Minimum separation ``m`` over distinct pairs; every ``e < m`` is expansive.

    Returns None on a one-point space (nothing to separate).
    """
    table = table or separation_table(action)
    if not table.all_exact:
        raise InexactSeparation("separation table has unfinished pair orbits")
    vals = [v for (x, y), v in table.sep.items() if x != y]
    return min(vals) if vals else None


@dataclass(frozen=True)
class GeneratorCheck:
    verdict: bool
    witness: tuple = None

    def __bool__(self):
        return self.verdict


def ball_cover(space, r):
    """Open balls of radius ``r`` around every point (duplicates removed)."""
    sets = []
    seen = set()
    for x in range(len(space)):
        b = frozenset(j for j, v in enumerate(space.dist[x]) if v < r)
        if b not in seen:
            seen.add(b)
            sets.append(b)
    return sets


def _normalize_cover(space, cover):
    sets = [space.indices(U) for U in cover]
    covered = frozenset().union(*sets) if sets else frozenset()
    if covered != frozenset(range(len(space))):
        missing = sorted(set(range(len(space))) - covered)
        raise NotACover(f"points {[space.points[i] for i in missing]} are not covered")
    return sets


def _jointly_covered(space, sets):
    n = len(space)
    bits = [sum(1 << i for i in U) for U in sets]
    ok = set()
    for x in range(n):
        for y in range(x, n):
            m = (1 << x) | (1 << y)
            if any(b & m == m for b in bits):
                ok.add((x, y))
    return ok


def is_generator(action, cover, weak=False, table=None):
    """Whether every pair of distinct points is separated by the cover.

    A pair is inseparable when its whole pair orbit stays jointly inside
    cover members. Closures are trivial on a finite space, so ``weak``
    gives the same verdict.
    """
    space = action.space
    sets = _normalize_cover(space, cover)
    ok = _jointly_covered(space, sets)
    table = table or separation_table(action)
    for members in table.orbits():
        if members[0][0] == members[0][1]:
            continue
        if all(p in ok for p in members):
            x, y = members[0]
            return GeneratorCheck(False, (space.points[x], space.points[y]))
    return GeneratorCheck(True)


def lebesgue_number(space, cover):
    """Supremum of ``r`` such that every pair closer than ``r`` shares a member.

    None when every pair is jointly covered.
    """
    sets = _normalize_cover(space, cover)
    ok = _jointly_covered(space, sets)
    n = len(space)
    bad = [space.dist[x][y] for x in range(n) for y in range(x + 1, n) if (x, y) not in ok]
    return min(bad) if bad else None


# -- recurrence ---------------------------------------------------------------


def _nonid_tables(action, nontrivial, max_radius):
    ball = full_group(action, max_radius)
    return [e.map for e in nonidentity_elements(action, ball, nontrivial)]


def _balls(space, eps):
    n = len(space)
    return [sum(1 << j for j in range(n) if space.dist[x][j] < eps) for x in range(n)]


def _image_mask(table, mask):
    out = 0
    while mask:
        low = mask & -mask
        mask ^= low
        out |= 1 << table[low.bit_length() - 1]
    return out


def nonwandering_set(action, eps, nontrivial="realized", max_radius=64):
    """Points whose ``eps``-ball meets its image under a non-identity element."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    tables = _nonid_tables(action, nontrivial, max_radius)
    balls = _balls(action.space, eps)
    return frozenset(
        x for x, U in enumerate(balls) if any(_image_mask(t, U) & U for t in tables)
    )


def nonwandering_core(action, nontrivial="realized", max_radius=64):
    """Points fixed by some non-identity element (the small-``eps`` limit)."""
    tables = _nonid_tables(action, nontrivial, max_radius)
    return frozenset(x for x in range(len(action.space)) if any(t[x] == x for t in tables))


def is_transitive(action, eps, nontrivial="realized", subset=None, max_radius=64):
    """Every ordered pair of ``eps``-balls is linked by some non-identity element.

    With ``subset`` the check runs on the balls of the subspace (the action
    must leave it invariant).
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    tables = _nonid_tables(action, nontrivial, max_radius)
    space = action.space
    pts = sorted(space.indices(subset)) if subset is not None else list(range(len(space)))
    inside = sum(1 << x for x in pts)
    balls = [b & inside for b in _balls(space, eps)]
    for x in pts:
        images = [_image_mask(t, balls[x]) for t in tables]
        for y in pts:
            V = balls[y]
            if not any(im & V for im in images):
                return False
    return True


@dataclass(frozen=True)
class PeriodicReport:
    """``fixed[m]`` is the common fixed set of the ``m``-th power action."""

    fixed: dict
    orbit_sizes: tuple
    least_period: tuple


def fixed_sets_and_periodic(action, m_range=range(1, 7), max_radius=64):
    n = len(action.space)
    fixed = {}
    least = [None] * n
    for m in m_range:
        if m == 0:
            continue
        ball = full_group(power_action(action, m), max_radius)
        F = frozenset(x for x in range(n) if all(e.map[x] == x for e in ball.elements))
        fixed[m] = F
        if m > 0:
            for x in F:
                if least[x] is None:
                    least[x] = m
    ball = full_group(action, max_radius)
    sizes = tuple(len({e.map[x] for e in ball.elements}) for x in range(n))
    return PeriodicReport(fixed, sizes, tuple(least))
