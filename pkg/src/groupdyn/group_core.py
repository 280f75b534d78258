"""Generators, words and Cayley balls of a realized group.

A group element is identified with the transformation it induces on the
acting space (its *realized map*). Cayley balls are enumerated by BFS over
words, deduplicated by map table, so every element carries a shortest
witness word (ties broken lexicographically in declared label order).

Words read like products: ``("a", "b")`` is ``ab`` and acts as
``Phi_a(Phi_b(x))``.
"""

from dataclasses import dataclass, field
from collections import deque

from .errors import HorizonExhausted, HorizonLimited, IndexNotFiner, InvalidGenerators, UnknownLabel

__all__ = [
    "GeneratorSystem",
    "RealizedElement",
    "CayleyBall",
    "cayley_ball",
    "full_group",
    "joint_ball",
    "compose",
    "realize_word",
    "word_length_constant",
    "kernel_witness",
    "nonidentity_elements",
]


@dataclass(frozen=True)
class GeneratorSystem:
    """A finite symmetric generating set.

    ``inverse_of`` pairs every label with its inverse (a label may be its
    own inverse). ``relations`` are pairs of words declared equal; they are
    checked against an action but never used for rewriting.

    ``kind`` selects how :meth:`presented_nontrivial` decides whether a
    word is the identity of the abstract group: ``"free"`` uses free
    reduction, ``"abelian"`` uses exponent sums (optionally through
    ``weights``, a label -> integer-vector homomorphism).
    """

    labels: tuple
    inverse_of: tuple
    relations: tuple = ()
    kind: str = "free"
    weights: tuple = None

    def __init__(self, labels, inverse_of, relations=(), kind="free", weights=None):
        labels = tuple(str(s) for s in labels)
        inv = dict(inverse_of.items() if hasattr(inverse_of, "items") else inverse_of)
        # accept one-sided pairings
        for a, b in list(inv.items()):
            inv.setdefault(b, a)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "inverse_of", tuple((s, inv.get(s)) for s in labels))
        object.__setattr__(
            self,
            "relations",
            tuple((tuple(lhs), tuple(rhs)) for lhs, rhs in relations),
        )
        object.__setattr__(self, "kind", kind)
        if weights is not None:
            weights = tuple((s, tuple(int(c) for c in weights[s])) for s in labels)
        object.__setattr__(self, "weights", weights)
        self._validate(inv)

    def _validate(self, inv):
        if not self.labels:
            raise InvalidGenerators("need at least one generator")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidGenerators("generator labels must be distinct")
        extra = set(inv) - set(self.labels)
        if extra:
            raise InvalidGenerators(f"inverse pairing names unknown labels {sorted(extra)}")
        for s in self.labels:
            t = inv.get(s)
            if t is None:
                raise InvalidGenerators(f"generator {s!r} has no inverse; the set must be symmetric")
            if inv.get(t) != s:
                raise InvalidGenerators(f"inverse pairing is not an involution at {s!r}")
        for lhs, rhs in self.relations:
            for w in (lhs, rhs):
                self.check_word(w)
        if self.kind not in ("free", "abelian"):
            raise InvalidGenerators(f"unknown group kind {self.kind!r}")
        if self.weights is not None:
            dims = {len(v) for _, v in self.weights}
            if len(dims) != 1:
                raise InvalidGenerators("weights must all have the same length")
            w = dict(self.weights)
            for s in self.labels:
                if tuple(-c for c in w[s]) != w[self.inverse(s)]:
                    raise InvalidGenerators(f"weight of {s!r} is not minus that of its inverse")

    def __len__(self):
        return len(self.labels)

    def inverse(self, label):
        for s, t in self.inverse_of:
            if s == label:
                return t
        raise UnknownLabel(label)

    def inverse_word(self, word):
        return tuple(self.inverse(s) for s in reversed(word))

    def check_word(self, word):
        known = set(self.labels)
        for s in word:
            if s not in known:
                raise UnknownLabel(s)
        return tuple(word)

    def normal_form(self, word):
        """Canonical form of ``word`` in the abstract group of this kind."""
        self.check_word(word)
        if self.kind == "free":
            out = []
            for s in word:
                if out and out[-1] == self.inverse(s):
                    out.pop()
                else:
                    out.append(s)
            return tuple(out)
        if self.weights is not None:
            w = dict(self.weights)
            dim = len(next(iter(w.values())))
            total = [0] * dim
            for s in word:
                for i, c in enumerate(w[s]):
                    total[i] += c
            return tuple(total)
        # one coordinate per inverse pair; self-inverse letters count mod 2
        pairs = []
        for s in self.labels:
            t = self.inverse(s)
            if s not in {p for pr in pairs for p in pr}:
                pairs.append((s, t))
        total = []
        for s, t in pairs:
            if s == t:
                total.append(sum(1 for a in word if a == s) % 2)
            else:
                total.append(sum(1 for a in word if a == s) - sum(1 for a in word if a == t))
        return tuple(total)

    def presented_nontrivial(self, word):
        """Is ``word`` a non-identity element of the abstract group?"""
        nf = self.normal_form(word)
        return any(nf) if self.kind == "abelian" else bool(nf)


class RealizedElement:
    """A group element as its map table, with a minimal witness word.

    Equality and hashing go through the map only.
    """

    __slots__ = ("map", "witness")

    def __init__(self, map, witness=()):
        self.map = tuple(map)
        self.witness = tuple(witness)

    @property
    def length(self):
        return len(self.witness)

    @property
    def is_identity(self):
        return all(i == x for i, x in enumerate(self.map))

    def __eq__(self, other):
        return isinstance(other, RealizedElement) and self.map == other.map

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        w = "".join(self.witness) if self.witness else "e"
        return f"RealizedElement({w})"


def compose(outer, inner):
    """Table of ``outer o inner``."""
    return tuple(outer[x] for x in inner)


def realize_word(maps, word, n):
    """Map table of a word; the rightmost letter acts first."""
    table = list(range(n))
    for s in reversed(word):
        m = maps[s]
        table = [m[x] for x in table]
    return tuple(table)


@dataclass
class CayleyBall:
    """Realized elements of word length at most ``radius``.

    ``elements[0]`` is the identity; elements are ordered by (length,
    witness) so the index order is the canonical order. ``edges[i][s]`` is
    the index of ``s * elements[i]`` or None when it leaves the ball.
    """

    gens: GeneratorSystem
    radius: int
    elements: tuple
    edges: tuple
    saturated: bool
    _tables: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, element):
        return element in self._position

    @property
    def _position(self):
        pos = self._tables.get("_position")
        if pos is None:
            pos = {e.map: i for i, e in enumerate(self.elements)}
            self._tables["_position"] = pos
        return pos

    def position(self, element):
        if isinstance(element, int):
            return element
        if isinstance(element, RealizedElement):
            return self._position[element.map]
        # a witness word
        for i, e in enumerate(self.elements):
            if e.witness == tuple(element):
                return i
        raise KeyError(element)

    def edge_list(self):
        """All ``(g, s, sg)`` index triples with both ends in the ball."""
        out = []
        for i, row in enumerate(self.edges):
            for s in self.gens.labels:
                j = row[s]
                if j is not None:
                    out.append((i, s, j))
        return out

    def tables_for(self, action):
        """Map table of every element under ``action``, evaluated on witnesses.

        Raises IndexNotFiner if two ball elements related by an edge do not
        act compatibly, i.e. the ball's group does not determine ``action``.
        """
        key = id(action)
        cached = self._tables.get(key)
        if cached is not None and cached[0] is action:
            return cached[1]
        n = len(action.space)
        tables = [realize_word(action.maps, e.witness, n) for e in self.elements]
        for i, s, j in self.edge_list():
            if compose(action.maps[s], tables[i]) != tables[j]:
                raise IndexNotFiner(
                    f"edge {self.elements[i]!r} -{s}-> {self.elements[j]!r} is not respected"
                )
        self._tables[key] = (action, tables)
        return tables


def _bfs(labels, maps, n, k):
    identity = tuple(range(n))
    elements = [RealizedElement(identity, ())]
    seen = {identity: 0}
    frontier = [0]
    depth = 0
    saturated = False
    while True:
        nxt = []
        for s in labels:
            sm = maps[s]
            for idx in frontier:
                table = tuple(sm[x] for x in elements[idx].map)
                if table not in seen:
                    if depth + 1 > k:
                        # a new element one step outside: the ball is not saturated
                        return elements, False
                    seen[table] = len(elements)
                    elements.append(RealizedElement(table, (s,) + elements[idx].witness))
                    nxt.append(seen[table])
        if not nxt:
            saturated = True
            break
        frontier = nxt
        depth += 1
    return elements, saturated


def _edges(labels, maps, elements):
    seen = {e.map: i for i, e in enumerate(elements)}
    out = []
    for e in elements:
        row = {}
        for s in labels:
            sm = maps[s]
            row[s] = seen.get(tuple(sm[x] for x in e.map))
        out.append(row)
    return tuple(out)


def cayley_ball(action, k):
    """All realized elements reachable by words of length at most ``k``."""
    if k < 0:
        raise ValueError("radius must be nonnegative")
    labels = action.gens.labels
    n = len(action.space)
    elements, saturated = _bfs(labels, action.maps, n, k)
    return CayleyBall(action.gens, k, tuple(elements), _edges(labels, action.maps, elements), saturated)


def full_group(action, max_radius=64):
    """The saturated Cayley ball; raises HorizonLimited past ``max_radius``."""
    ball = cayley_ball(action, max_radius)
    if not ball.saturated:
        raise HorizonLimited(f"group did not saturate within radius {max_radius}")
    # shrink the reported radius to the actual word-length bound
    radius = max(e.length for e in ball.elements)
    return CayleyBall(ball.gens, radius, ball.elements, ball.edges, True)


class _Joint:
    """The diagonal action on a disjoint union; only used to build balls."""

    def __init__(self, actions):
        self.gens = actions[0].gens
        for a in actions[1:]:
            if a.gens.labels != self.gens.labels:
                from .errors import GeneratorMismatch

                raise GeneratorMismatch("joint balls need identical generator labels")
        offsets = []
        total = 0
        for a in actions:
            offsets.append(total)
            total += len(a.space)
        self.maps = {
            s: tuple(off + a.maps[s][x] for a, off in zip(actions, offsets) for x in range(len(a.space)))
            for s in self.gens.labels
        }
        self.space = range(total)


def joint_ball(actions, k=None, max_radius=64):
    """Cayley ball of the diagonal action of several actions of the same group.

    The ball indexes every one of ``actions`` (see ``CayleyBall.tables_for``).
    ``k=None`` saturates.
    """
    joint = _Joint(list(actions))
    if k is None:
        return full_group(joint, max_radius)
    return cayley_ball(joint, k)


def word_length_constant(action, other, horizon=16):
    """Smallest ``C >= 1`` bounding each system's generators in the other's word length.

    ``action`` and ``other`` act on the same space with (possibly different)
    generating sets; each generator map of one is searched for in the
    Cayley ball of the other.
    """
    if len(action.space) != len(other.space):
        raise ValueError("both actions must act on the same space")
    best = 1
    for src, dst in ((action, other), (other, action)):
        ball = cayley_ball(dst, horizon)
        lengths = {e.map: e.length for e in ball.elements}
        for s in src.gens.labels:
            table = tuple(src.maps[s])
            if table not in lengths:
                raise HorizonExhausted(
                    f"generator {s!r} is not a word of length <= {horizon} in the other system"
                )
            best = max(best, lengths[table])
    return best


def kernel_witness(action, horizon=24, max_states=200_000):
    """Shortest word acting as the identity but nontrivial in the abstract group.

    Searches breadth-first over (map, normal form) states. Returns None when
    no such word exists within ``horizon`` letters (or ``max_states``
    distinct states).
    """
    gens = action.gens
    n = len(action.space)
    identity = tuple(range(n))
    start = (identity, gens.normal_form(()))
    seen = {start}
    queue = deque([(identity, (), 0)])
    while queue:
        table, word, depth = queue.popleft()
        if depth == horizon:
            continue
        for s in gens.labels:
            nw = (s,) + word
            nt = tuple(action.maps[s][x] for x in table)
            key = (nt, gens.normal_form(nw))
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > max_states:
                return None
            if nt == identity and gens.presented_nontrivial(nw):
                return nw
            queue.append((nt, nw, depth + 1))
    return None


def nonidentity_elements(action, ball=None, nontrivial="realized", kernel_horizon=24):
    """Realized elements that count as ``g != e``.

    ``"realized"``: every element whose map is not the identity.
    ``"presented"``: additionally the identity map, carried by a kernel word,
    when some word acts trivially yet is nontrivial in the abstract group
    (see :meth:`GeneratorSystem.presented_nontrivial`).
    """
    if ball is None:
        ball = full_group(action)
    out = [e for e in ball.elements if not e.is_identity]
    if nontrivial == "realized":
        return out
    if nontrivial != "presented":
        raise ValueError(f"unknown non-identity semantics {nontrivial!r}")
    word = kernel_witness(action, kernel_horizon)
    if word is not None:
        out.insert(0, RealizedElement(ball.elements[0].map, word))
    return out
