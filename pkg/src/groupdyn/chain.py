"""Chain and weak-chain recurrence, sequential shadowing, spectral classes.

Everything parameterized by ``delta`` is evaluated exactly: the step graph
``x -> y iff d(Phi_s(x), y) < delta for some generator s`` only changes at
threshold-ladder values.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ._exact import ZERO
from .action import restrict
from .dynamics import (
    DEFAULT_BUDGET,
    _Counter,
    _EdgeCSP,
    expansive_constant,
    is_transitive,
    shadowing_profile,
)
from .errors import BudgetExceeded, SSPNotEstablished
from .group_core import cayley_ball, full_group, kernel_witness, nonidentity_elements
from .ladder import threshold_ladder

__all__ = [
    "StepGraph",
    "step_graph",
    "WeakRelation",
    "weak_related",
    "Decomposition",
    "weak_chain_classes",
    "is_weak_chain_transitive",
    "chain_related",
    "chain_relation",
    "chain_recurrent_set",
    "cr_core",
    "is_chain_transitive",
    "IsolationReport",
    "is_isolated_cr",
    "SPOWindow",
    "spo_windows",
    "SequentialTrace",
    "sequentially_traced",
    "SSPProfile",
    "ssp_profile",
    "SpectralReport",
    "spectral_decomposition",
]


def _bits(mask):
    while mask:
        low = mask & -mask
        mask ^= low
        yield low.bit_length() - 1


# -- step graph and weak chains -----------------------------------------------


@dataclass(frozen=True)
class StepGraph:
    """``succ[x]`` is a bitmask of targets; ``witnesses[(x, y)]`` the generators."""

    delta: Fraction
    n: int
    succ: tuple
    pred: tuple
    witnesses: dict = field(repr=False)

    def has_edge(self, x, y):
        return bool(self.succ[x] >> y & 1)

    def successors(self, x):
        return list(_bits(self.succ[x]))

    def predecessors(self, x):
        return list(_bits(self.pred[x]))

    def edge_list(self):
        return [(x, y, self.witnesses[(x, y)]) for x in range(self.n) for y in _bits(self.succ[x])]

    @property
    def n_edges(self):
        return sum(bin(m).count("1") for m in self.succ)

    def adjacency(self):
        rows, cols = [], []
        for x in range(self.n):
            for y in _bits(self.succ[x]):
                rows.append(x)
                cols.append(y)
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))


def step_graph(action, delta):
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    n = len(action.space)
    d = action.space.dist
    succ = [0] * n
    pred = [0] * n
    wit = {}
    for s in action.gens.labels:
        phi = action.maps[s]
        for x in range(n):
            row = d[phi[x]]
            for y in range(n):
                if row[y] < delta:
                    succ[x] |= 1 << y
                    pred[y] |= 1 << x
                    wit.setdefault((x, y), []).append(s)
    wit = {k: tuple(v) for k, v in wit.items()}
    return StepGraph(delta, n, tuple(succ), tuple(pred), wit)


def _chain(graph, x, y, nonempty=False):
    """Shortest step-graph path from x to y as ``[(point, label), ..., (y, None)]``."""
    prev = {}
    queue = deque()
    if nonempty:
        for z in graph.successors(x):
            prev[z] = x
            queue.append(z)
    elif x == y:
        return [(x, None)]
    else:
        prev[x] = None
        queue.append(x)
    while queue and y not in prev:
        z = queue.popleft()
        for w in graph.successors(z):
            if w not in prev:
                prev[w] = z
                queue.append(w)
    if y not in prev:
        return None
    path = [y]
    while True:
        path.append(prev[path[-1]])
        if path[-1] == x:
            break
    path.reverse()
    return [(p, graph.witnesses[(p, q)][0]) for p, q in zip(path, path[1:])] + [(y, None)]


@dataclass(frozen=True)
class WeakRelation:
    related: bool
    forward: list = None
    backward: list = None

    def __bool__(self):
        return self.related


def weak_related(action, delta, x, y, mode="cycle", graph=None):
    """Weak ``delta``-chains from ``x`` to ``y`` and back.

    ``mode="cycle"`` asks for an actual chain with at least one step when
    ``x == y``; ``mode="reflexive"`` relates every point to itself. The two
    agree here because ``{x, Phi_s(x), x}`` (steps ``s`` then its inverse) is
    always a chain.
    """
    if mode not in ("cycle", "reflexive"):
        raise ValueError(f"unknown mode {mode!r}")
    g = graph or step_graph(action, delta)
    x, y = action.space.index(x), action.space.index(y)
    if x == y:
        if mode == "reflexive":
            return WeakRelation(True, [(x, None)], [(x, None)])
        loop = _chain(g, x, x, nonempty=True)
        return WeakRelation(loop is not None, loop, loop)
    fwd = _chain(g, x, y)
    bwd = _chain(g, y, x)
    return WeakRelation(fwd is not None and bwd is not None, fwd, bwd)


@dataclass(frozen=True)
class Decomposition:
    """Disjoint classes with per-class invariance and transitivity flags."""

    classes: tuple
    delta: Fraction
    invariant: tuple
    transitive: tuple
    scale: Fraction = None

    def __len__(self):
        return len(self.classes)

    def class_of(self, x):
        for i, c in enumerate(self.classes):
            if x in c:
                return i
        raise KeyError(x)

    @property
    def disjoint(self):
        seen = set()
        for c in self.classes:
            if seen & c:
                return False
            seen |= c
        return True

    def covers(self, n):
        return frozenset().union(*self.classes) == frozenset(range(n))


def _class_flags(action, classes, scale, nontrivial):
    inv, trans = [], []
    for c in classes:
        inv.append(all(action.maps[s][x] in c for s in action.gens.labels for x in c))
        if inv[-1]:
            sub = restrict(action, c)
            trans.append(is_transitive(sub, scale, nontrivial))
        else:
            trans.append(False)
    return tuple(inv), tuple(trans)


def weak_chain_classes(action, delta, mode="cycle", nontrivial="realized", scale=None, graph=None):
    """Strongly connected components of the step graph, as point classes.

    A point on no cycle of the graph forms its own class (this never happens
    for symmetric generating sets, but the rule is kept for either mode).
    Transitivity of each class is checked at ``scale`` (default ``delta``).
    """
    g = graph or step_graph(action, delta)
    _, labels = connected_components(g.adjacency(), directed=True, connection="strong")
    groups = {}
    for x, c in enumerate(labels):
        groups.setdefault(int(c), set()).add(x)
    classes = sorted((frozenset(v) for v in groups.values()), key=min)
    scale = Fraction(scale) if scale is not None else g.delta
    inv, trans = _class_flags(action, classes, scale, nontrivial)
    return Decomposition(tuple(classes), g.delta, inv, trans, scale)


def is_weak_chain_transitive(action, delta, graph=None):
    g = graph or step_graph(action, delta)
    n_comp, _ = connected_components(g.adjacency(), directed=True, connection="strong")
    return n_comp == 1


# -- the chain relation -------------------------------------------------------


def _chain_search(action, index, delta, counter):
    return _EdgeCSP(action, index, delta, counter)


def _first(csp, anchors):
    doms = csp.initial(anchors)
    if not all(doms):
        return None
    for sol in csp.solutions(0, doms, [None] * csp.m):
        return sol
    return None


def _kernel_loop(action, horizon, nontrivial):
    return nontrivial == "presented" and kernel_witness(action, max(horizon, 1)) is not None


def chain_related(
    action, k, delta, x, y, *, nontrivial="realized", kernel_horizon=None, index=None, budget=DEFAULT_BUDGET
):
    """A ``delta``-pseudo-orbit on the ball taking ``x`` and ``y`` at distinct elements.

    On a saturated ball right translation lets the ``x`` anchor sit at the
    identity. With ``nontrivial="presented"`` a word of length at most
    ``kernel_horizon`` (default ``k``) that acts trivially but is nontrivial
    in the group relates every point to itself.
    """
    delta = Fraction(delta)
    space = action.space
    x, y = space.index(x), space.index(y)
    if x == y and _kernel_loop(action, kernel_horizon or k, nontrivial):
        return True
    index = index if index is not None else cayley_ball(action, k)
    csp = _chain_search(action, index, delta, _Counter(budget))
    hs = [0] if index.saturated else range(len(index))
    for h in hs:
        for h2 in range(len(index)):
            if h2 != h and _first(csp, {h: x, h2: y}) is not None:
                return True
    return False


def chain_relation(
    action, k, delta, *, nontrivial="realized", kernel_horizon=None, index=None, budget=DEFAULT_BUDGET
):
    """The full relation as a set of ordered pairs ``(x, y)``.

    Every pseudo-orbit found certifies all pairs it visits at distinct
    elements, so most pairs never need their own search.
    """
    delta = Fraction(delta)
    n = len(action.space)
    index = index if index is not None else cayley_ball(action, k)
    csp = _chain_search(action, index, delta, _Counter(budget))
    rel = set()
    if _kernel_loop(action, kernel_horizon or k, nontrivial):
        rel.update((x, x) for x in range(n))
    m = len(index)
    hs = [0] if index.saturated else range(m)
    for x in range(n):
        for y in range(n):
            if (x, y) in rel:
                continue
            found = None
            for h in hs:
                for h2 in range(m):
                    if h2 == h:
                        continue
                    found = _first(csp, {h: x, h2: y})
                    if found is not None:
                        break
                if found is not None:
                    break
            if found is not None:
                for a in range(m):
                    for b in range(m):
                        if a != b:
                            rel.add((found[a], found[b]))
    return frozenset(rel)


def chain_recurrent_set(action, k, delta, **kw):
    rel = chain_relation(action, k, delta, **kw)
    return frozenset(x for x, y in rel if x == y)


def _smallest_scale(action):
    lad = threshold_ladder(action)
    return lad.midpoints[0]


def cr_core(action, k=None, *, nontrivial="realized", kernel_horizon=24, budget=DEFAULT_BUDGET):
    """Points chain-recurrent at every scale.

    The relation only grows with ``delta``, so the core is the chain
    recurrent set at the first ladder midpoint. ``k`` defaults to the
    saturation radius of the realized group; kernel words for the presented
    reading are searched up to ``kernel_horizon``.
    """
    index = full_group(action) if k is None else cayley_ball(action, k)
    k = index.radius if k is None else k
    n = len(action.space)
    delta = _smallest_scale(action)
    if _kernel_loop(action, kernel_horizon, nontrivial):
        return frozenset(range(n))
    out = set()
    for x in range(n):
        if chain_related(action, k, delta, x, x, index=index, budget=budget):
            out.add(x)
    return frozenset(out)


def is_chain_transitive(action, k, delta, **kw):
    n = len(action.space)
    return len(chain_relation(action, k, delta, **kw)) == n * n


@dataclass(frozen=True)
class IsolationReport:
    """Outcome of the isolating-neighbourhood construction around the core."""

    isolated: bool
    core: frozenset
    neighbourhood: frozenset = None
    maximal_invariant: frozenset = None
    expansive: Fraction = None
    beta: Fraction = None
    alpha: Fraction = None
    gamma: Fraction = None
    note: str = ""


def is_isolated_cr(action, k=None, *, nontrivial="realized", budget=DEFAULT_BUDGET):
    """Build ``U`` around the chain recurrent core and compare ``cap_g Phi_g(U)`` with it.

    The expansive value ``c`` fixes ``beta = c/4``; ``alpha`` is the
    shadowing profile of the restriction to the core at ``beta``; ``gamma``
    is the largest halving of ``min(alpha, c)/4`` whose ``gamma``-close pairs
    stay ``alpha/2``-close under every generator.
    """
    group = full_group(action)
    n = len(action.space)
    core = cr_core(action, k, nontrivial=nontrivial, budget=budget)
    if len(nonidentity_elements(action, group, nontrivial)) == 0:
        return IsolationReport(True, core, note="no non-identity element; vacuous")
    if not core:
        return IsolationReport(True, core, note="empty core is trivially isolated")
    c = expansive_constant(action)
    beta = c / 4
    sub = restrict(action, core)
    alpha = shadowing_profile(sub, k if k is not None else full_group(sub).radius, beta, budget=budget).delta
    if alpha <= 0:
        return IsolationReport(False, core, expansive=c, beta=beta, alpha=alpha, note="restriction has no shadowing")
    d = action.space.dist
    gamma = min(alpha, c) / 4

    def continuous(gm):
        return all(
            d[action.maps[s][x]][action.maps[s][y]] < alpha / 2
            for s in action.gens.labels
            for x in range(n)
            for y in range(n)
            if d[x][y] < gm
        )

    while not continuous(gamma):
        gamma /= 2
    U = frozenset(y for y in range(n) if min(d[y][x] for x in core) <= gamma)
    inside = U
    for e in group.elements:
        inside = inside & frozenset(e.map[y] for y in U)
    return IsolationReport(inside == core, core, U, inside, c, beta, alpha, gamma)


# -- sequential shadowing -----------------------------------------------------


@dataclass(frozen=True)
class SPOWindow:
    """Points ``x_{-L}..x_L`` of a step-graph walk and one witnessing label per step."""

    points: tuple
    labels: tuple

    @property
    def L(self):
        return len(self.points) // 2

    @property
    def center(self):
        return self.points[self.L]

    def defect(self, action):
        d = action.space.dist
        return max(
            (d[action.maps[s][a]][b] for a, s, b in zip(self.points, self.labels, self.points[1:])),
            default=ZERO,
        )


def spo_windows(action, delta, L, graph=None):
    """All walks with ``2L`` steps in the step graph, in lexicographic order."""
    if L < 1:
        raise ValueError("L must be at least 1")
    g = graph or step_graph(action, delta)

    def walk(prefix):
        if len(prefix) == 2 * L + 1:
            labels = tuple(g.witnesses[(a, b)][0] for a, b in zip(prefix, prefix[1:]))
            yield SPOWindow(tuple(prefix), labels)
            return
        for y in g.successors(prefix[-1]):
            prefix.append(y)
            yield from walk(prefix)
            prefix.pop()

    for x in range(g.n):
        yield from walk([x])


@dataclass(frozen=True)
class SequentialTrace:
    point: int
    elements: tuple


def sequentially_traced(action, window, eps, k, *, nontrivial="realized", elements=None):
    """A point ``eps``-close to ``x_0`` whose orbit visits near every other ``x_i``.

    Each ``g_i`` (``i != 0``) is the first non-identity ball element, in
    canonical order, that works; ``g_0`` is the identity (``None``).
    """
    eps = Fraction(eps)
    d = action.space.dist
    if elements is None:
        ball = cayley_ball(action, k)
        elements = nonidentity_elements(action, ball, nontrivial, kernel_horizon=max(k, 1))
    c = window.L
    for x in range(len(action.space)):
        if not d[x][window.center] < eps:
            continue
        chosen = []
        for i, p in enumerate(window.points):
            if i == c:
                chosen.append(None)
                continue
            g = next((e for e in elements if d[e.map[x]][p] < eps), None)
            if g is None:
                break
            chosen.append(g)
        else:
            return SequentialTrace(x, tuple(chosen))
    return None


@dataclass(frozen=True)
class SSPProfile:
    """Largest ladder ``delta`` whose length-``L`` windows are all traced.

    ``failing_center`` is the centre of an untraceable window one ladder
    step above ``delta`` (None when every value passed).
    """

    delta: Fraction
    epsilon: Fraction
    L: int
    k: int
    checked: tuple
    failing_center: int = None
    horizon_limited: bool = False


def _reach_masks(action, eps, k, nontrivial):
    d = action.space.dist
    n = len(action.space)
    ball = cayley_ball(action, k)
    elems = nonidentity_elements(action, ball, nontrivial, kernel_horizon=max(k, 1))
    close = [sum(1 << q for q in range(n) if d[y][q] < eps) for y in range(n)]
    reach = [0] * n
    for e in elems:
        for x in range(n):
            reach[x] |= close[e.map[x]]
    killed = [sum(1 << x for x in range(n) if not reach[x] >> p & 1) for p in range(n)]
    return close, killed, ball.saturated


def _walk_masks(x0, L, nxt, killed, C, counter):
    states = {(x0, 0)}
    for _ in range(L):
        new = set()
        for x, m in states:
            for y in _bits(nxt[x]):
                new.add((y, m | (killed[y] & C)))
                counter.tick()
        states = new
    masks = {m for _, m in states}
    # keep only maximal masks
    return [m for m in masks if not any(o != m and o & m == m for o in masks)]


def _window_fails(x0, L, g, killed, C, counter):
    fwd = _walk_masks(x0, L, g.succ, killed, C, counter)
    bwd = _walk_masks(x0, L, g.pred, killed, C, counter)
    return any(f | b == C for f in fwd for b in bwd)


def ssp_profile(action, eps, L, k, *, nontrivial="realized", ladder=None, budget=DEFAULT_BUDGET):
    """Sweep the ladder upward while every ``delta``-window is sequentially traced.

    A window centred at ``x_0`` fails exactly when the points its other
    entries rule out (those ``x`` with no non-identity ``g`` bringing
    ``Phi_g(x)`` near the entry) cover the ``eps``-ball of ``x_0``. Forward
    and backward halves of the walk are independent, so the search runs over
    reachable (endpoint, ruled-out set) states instead of whole windows.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if L < 1:
        raise ValueError("L must be at least 1")
    close, killed, saturated = _reach_masks(action, eps, k, nontrivial)
    ladder = ladder if ladder is not None else threshold_ladder(action)
    counter = _Counter(budget)
    checked = []
    best = ZERO
    failing = None
    n = len(action.space)
    for v in ladder.positive:
        g = step_graph(action, v)
        try:
            bad = next((x0 for x0 in range(n) if _window_fails(x0, L, g, killed, close[x0], counter)), None)
        except BudgetExceeded as exc:
            partial = SSPProfile(best, eps, L, k, tuple(checked), None, not saturated)
            raise BudgetExceeded(str(exc), partial=partial) from None
        checked.append((v, bad is None))
        if bad is not None:
            failing = bad
            break
        best = v
    return SSPProfile(best, eps, L, k, tuple(checked), failing, not saturated)


# -- spectral decomposition ---------------------------------------------------


@dataclass(frozen=True)
class SpectralReport:
    decomposition: Decomposition
    ssp: SSPProfile
    hypothesis: bool
    invariant: bool
    transitive: bool
    disjoint: bool
    covers: bool

    @property
    def verified(self):
        return self.hypothesis and self.invariant and self.transitive and self.disjoint and self.covers


def spectral_decomposition(
    action, delta, eps, L, k, *, nontrivial="realized", strict=False, budget=DEFAULT_BUDGET
):
    """Weak-chain classes at ``delta`` with the checks expected under sequential shadowing.

    The hypothesis holds when ``0 < delta <= ssp_profile(eps, L, k)``. With
    ``strict`` a failed hypothesis raises SSPNotEstablished carrying the
    report.
    """
    delta, eps = Fraction(delta), Fraction(eps)
    prof = ssp_profile(action, eps, L, k, nontrivial=nontrivial, budget=budget)
    ok = prof.delta > 0 and delta <= prof.delta
    dec = weak_chain_classes(action, delta, nontrivial=nontrivial, scale=eps)
    report = SpectralReport(
        dec,
        prof,
        ok,
        all(dec.invariant),
        all(dec.transitive),
        dec.disjoint,
        dec.covers(len(action.space)),
    )
    if strict and not ok:
        raise SSPNotEstablished(
            f"sequential shadowing not established at delta={delta}, eps={eps}", report=report
        )
    return report
