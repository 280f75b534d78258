"""Group actions on finite metric spaces.

An action stores one permutation table per generator label. Group elements
act through words (see :mod:`groupdyn.group_core`); the identity and
composition axioms hold by construction.
"""

from math import gcd

from .errors import InvalidAction, NotBijective, UnknownLabel, ZeroPower
from .group_core import GeneratorSystem, RealizedElement, compose, realize_word
from .metric_space import FiniteMetricSpace

__all__ = [
    "GroupAction",
    "evaluate",
    "power_action",
    "inverse_action",
    "conjugate_action",
    "restrict",
    "generator_displacement",
    "affine_mod",
    "matrix_mod",
    "flip_1_minus_x",
    "identity_map",
    "inverse_table",
]


def inverse_table(table):
    inv = [None] * len(table)
    for x, y in enumerate(table):
        inv[y] = x
    return tuple(inv)


def _check_bijection(table, n, what):
    table = tuple(int(v) for v in table)
    if len(table) != n:
        raise NotBijective(f"{what}: table has {len(table)} entries, space has {n} points")
    if sorted(table) != list(range(n)):
        raise NotBijective(f"{what}: not a bijection of the point set")
    return table


class GroupAction:
    """Generator-indexed permutations of a finite metric space.

    ``maps`` sends labels to permutation tables (``table[x]`` is the index
    of ``Phi_s(x)``). A label whose map is missing is filled in as the
    inverse table of its partner.
    """

    def __init__(self, gens, space, maps, name=None):
        if not isinstance(gens, GeneratorSystem):
            raise TypeError("gens must be a GeneratorSystem")
        if not isinstance(space, FiniteMetricSpace):
            raise TypeError("space must be a FiniteMetricSpace")
        self.gens = gens
        self.space = space
        self.name = name
        n = len(space)
        unknown = set(maps) - set(gens.labels)
        if unknown:
            raise UnknownLabel(f"maps given for unknown labels {sorted(unknown)}")
        filled = {}
        for s in gens.labels:
            if maps.get(s) is not None:
                filled[s] = _check_bijection(maps[s], n, f"generator {s!r}")
        for s in gens.labels:
            if s not in filled:
                t = gens.inverse(s)
                if t not in filled:
                    raise InvalidAction(f"no map for {s!r} or its inverse {t!r}")
                filled[s] = inverse_table(filled[t])
        for s in gens.labels:
            t = gens.inverse(s)
            if compose(filled[s], filled[t]) != tuple(range(n)):
                raise InvalidAction(f"map of {t!r} is not the inverse of the map of {s!r}")
        self.maps = filled
        for lhs, rhs in gens.relations:
            if self.realize(lhs) != self.realize(rhs):
                raise InvalidAction(
                    f"relation {''.join(lhs) or 'e'} = {''.join(rhs) or 'e'} does not hold"
                )
        if gens.kind == "abelian" and not self.commutative:
            raise InvalidAction("abelian presentation requires commuting generator maps")

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<GroupAction{label}: {len(self.gens)} generators on {len(self.space)} points>"

    @property
    def commutative(self):
        labels = self.gens.labels
        return all(
            compose(self.maps[a], self.maps[b]) == compose(self.maps[b], self.maps[a])
            for i, a in enumerate(labels)
            for b in labels[i + 1:]
        )

    @property
    def is_trivial(self):
        ident = tuple(range(len(self.space)))
        return all(m == ident for m in self.maps.values())

    def realize(self, word):
        self.gens.check_word(word)
        return realize_word(self.maps, word, len(self.space))

    def with_generators(self, gens, maps):
        return GroupAction(gens, self.space, maps, name=self.name)


def evaluate(action, w, x):
    """Image of point ``x`` under a word or realized element."""
    i = action.space.index(x)
    if isinstance(w, RealizedElement):
        return w.map[i]
    return action.realize(tuple(w))[i]


def power_action(action, m):
    """Each generator map raised to the ``m``-th power (inverted for m < 0).

    Declared relations are dropped: they need not survive the power.
    """
    if m == 0:
        raise ZeroPower("power must be nonzero")
    n = len(action.space)
    maps = {}
    for s in action.gens.labels:
        base = action.maps[s] if m > 0 else action.maps[action.gens.inverse(s)]
        table = tuple(range(n))
        for _ in range(abs(m)):
            table = compose(base, table)
        maps[s] = table
    gens = GeneratorSystem(
        action.gens.labels, dict(action.gens.inverse_of), (), action.gens.kind, _weights(action.gens)
    )
    suffix = f"^{m}"
    return GroupAction(gens, action.space, maps, name=(action.name or "action") + suffix)


def _weights(gens):
    return dict(gens.weights) if gens.weights is not None else None


def inverse_action(action):
    return power_action(action, -1)


def conjugate_action(action, h, target_space=None):
    """Transport ``action`` along the bijection ``h`` (a table into ``target_space``)."""
    target_space = target_space if target_space is not None else action.space
    n = len(action.space)
    if len(target_space) != n:
        raise NotBijective("h must map onto a space of the same size")
    h = _check_bijection(h, n, "conjugating map")
    hinv = inverse_table(h)
    maps = {s: tuple(h[action.maps[s][hinv[y]]] for y in range(n)) for s in action.gens.labels}
    return GroupAction(action.gens, target_space, maps, name=action.name)


def restrict(action, subset):
    """The action on an invariant subset, as its own subspace."""
    idx = sorted(action.space.indices(subset))
    pos = {x: i for i, x in enumerate(idx)}
    maps = {}
    for s in action.gens.labels:
        try:
            maps[s] = tuple(pos[action.maps[s][x]] for x in idx)
        except KeyError:
            raise InvalidAction(f"subset is not invariant under {s!r}") from None
    return GroupAction(action.gens, action.space.subspace(idx), maps, name=action.name)


def generator_displacement(phi, psi):
    """``sup_{s,x} d^X(Phi_s x, Psi_s x)`` for two actions on one space."""
    if phi.space != psi.space:
        raise ValueError("actions must share a space")
    if phi.gens.labels != psi.gens.labels:
        from .errors import GeneratorMismatch

        raise GeneratorMismatch("generator labels differ")
    db = phi.space.bounded
    return max(
        db[phi.maps[s][x]][psi.maps[s][x]]
        for s in phi.gens.labels
        for x in range(len(phi.space))
    )


# -- map constructors ---------------------------------------------------------


def identity_map(n):
    return tuple(range(n))


def affine_mod(a, b, n):
    """``x -> a*x + b (mod n)`` on points ``0..n-1``."""
    if gcd(a, n) != 1:
        raise NotBijective(f"{a}x+{b} is not invertible mod {n}")
    return tuple((a * x + b) % n for x in range(n))


def matrix_mod(M, n):
    """``v -> M v (mod n)`` on the ``n x n`` grid, point ``(i, j)`` at index ``i*n + j``."""
    (a, b), (c, d) = M
    if gcd((a * d - b * c) % n, n) != 1:
        raise NotBijective(f"matrix {M} is not invertible mod {n}")
    return tuple(((a * i + b * j) % n) * n + (c * i + d * j) % n for i in range(n) for j in range(n))


def flip_1_minus_x(space):
    """``x -> 1 - x`` on a space whose point identifiers are integers."""
    try:
        values = [int(p) for p in space.points]
    except ValueError:
        raise InvalidAction("flip_1_minus_x needs integer point identifiers") from None
    pos = {v: i for i, v in enumerate(values)}
    try:
        return tuple(pos[1 - v] for v in values)
    except KeyError as exc:
        raise NotBijective(f"point set is not closed under x -> 1-x (missing {exc})") from None
