"""Finite metric spaces, the bounded metric and Hausdorff distance.

Distances are stored as :class:`fractions.Fraction`, so every comparison
made downstream is exact. Points carry string identifiers; their position
in ``points`` is the tie-break order used everywhere else.
"""

from fractions import Fraction
from itertools import combinations

from ._exact import ONE, ZERO, as_fraction
from .errors import EmptySet, InvalidMetric, UnknownPoint

__all__ = [
    "FiniteMetricSpace",
    "bounded_distance",
    "bounded_view",
    "set_distance",
    "hausdorff_distance",
    "open_ball",
    "discrete",
    "cycle",
    "torus_grid",
    "disjoint_union",
]


class FiniteMetricSpace:
    """A validated finite metric space.

    Parameters
    ----------
    points : sequence of str
        Point identifiers, distinct.
    dist : square table
        Raw distances. Entries may be ints, Fractions, decimal/fraction
        strings, or floats; floats switch the triangle-inequality check to a
        relative tolerance of ``rtol``.
    """

    def __init__(self, points, dist, *, rtol=1e-9):
        self.points = tuple(str(p) for p in points)
        n = len(self.points)
        if n == 0:
            raise InvalidMetric("a metric space needs at least one point")
        if len(set(self.points)) != n:
            raise InvalidMetric("point identifiers must be distinct")
        if len(dist) != n or any(len(row) != n for row in dist):
            raise InvalidMetric(f"distance table must be {n}x{n}")
        exact = True
        table = []
        for row in dist:
            out = []
            for v in row:
                q, ok = as_fraction(v)
                exact = exact and ok
                out.append(q)
            table.append(tuple(out))
        self.dist = tuple(table)
        self.exact = exact
        self._validate(rtol)
        self._index = {p: i for i, p in enumerate(self.points)}
        self.bounded = tuple(tuple(min(v, ONE) for v in row) for row in self.dist)
        positive = [self.dist[i][j] for i, j in combinations(range(n), 2)]
        self.resolution = min(positive) if positive else None
        self.diameter = max(positive) if positive else ZERO

    def _validate(self, rtol):
        d = self.dist
        n = len(d)
        for i in range(n):
            if d[i][i] != 0:
                raise InvalidMetric(f"d({self.points[i]},{self.points[i]}) must be 0")
            for j in range(i + 1, n):
                if d[i][j] != d[j][i]:
                    raise InvalidMetric(f"asymmetric entry at ({self.points[i]},{self.points[j]})")
                if d[i][j] <= 0:
                    raise InvalidMetric(
                        f"distinct points {self.points[i]},{self.points[j]} at distance {d[i][j]}"
                    )
        slack = Fraction(rtol) if not self.exact else ZERO
        for i in range(n):
            for j in range(n):
                dij = d[i][j]
                for k in range(n):
                    bound = d[i][k] + d[k][j]
                    if dij > bound + slack * bound:
                        raise InvalidMetric(
                            "triangle inequality fails for "
                            f"({self.points[i]},{self.points[k]},{self.points[j]})"
                        )

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"FiniteMetricSpace({len(self)} points)"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteMetricSpace)
            and self.points == other.points
            and self.dist == other.dist
        )

    def __hash__(self):
        return hash((self.points, self.dist))

    def index(self, p):
        """Index of ``p``; ints are taken as indices, strings as identifiers."""
        if isinstance(p, int) and not isinstance(p, bool):
            if 0 <= p < len(self.points):
                return p
            raise UnknownPoint(p)
        try:
            return self._index[str(p)]
        except KeyError:
            raise UnknownPoint(p) from None

    def indices(self, ps):
        return frozenset(self.index(p) for p in ps)

    def distance_values(self):
        """Sorted distinct raw distance values, including 0."""
        return sorted({v for row in self.dist for v in row})

    def subspace(self, indices):
        idx = sorted(set(indices))
        return FiniteMetricSpace(
            [self.points[i] for i in idx],
            [[self.dist[i][j] for j in idx] for i in idx],
        )


def bounded_distance(space, p, q):
    return space.bounded[space.index(p)][space.index(q)]


def bounded_view(space):
    """The same points under ``min(d, 1)``."""
    return FiniteMetricSpace(space.points, space.bounded)


def _nonempty(space, A, name):
    idx = space.indices(A)
    if not idx:
        raise EmptySet(f"{name} is empty")
    return idx


def set_distance(space, A, B):
    """Infimum of the bounded metric over ``A x B``."""
    a = _nonempty(space, A, "A")
    b = _nonempty(space, B, "B")
    db = space.bounded
    return min(db[i][j] for i in a for j in b)


def hausdorff_distance(space, A, B):
    a = _nonempty(space, A, "A")
    b = _nonempty(space, B, "B")
    db = space.bounded
    forward = max(min(db[i][j] for j in b) for i in a)
    backward = max(min(db[i][j] for i in a) for j in b)
    return max(forward, backward)


def open_ball(space, center, radius):
    """Indices within raw distance strictly less than ``radius``."""
    c = space.index(center)
    row = space.dist[c]
    return frozenset(j for j, v in enumerate(row) if v < radius)


# -- constructors ------------------------------------------------------------


def discrete(n, names=None):
    """``n`` points, all at distance 1."""
    names = list(names) if names is not None else [str(i) for i in range(n)]
    if len(names) != n:
        raise InvalidMetric("need one name per point")
    return FiniteMetricSpace(names, [[0 if i == j else 1 for j in range(n)] for i in range(n)])


def _wrap(a, n):
    a %= n
    return min(a, n - a)


def cycle(n, scale=1):
    """Points ``0..n-1`` on a cycle; distance is ``scale`` times the hop count."""
    s, _ = as_fraction(scale)
    return FiniteMetricSpace(
        [str(i) for i in range(n)],
        [[s * _wrap(i - j, n) for j in range(n)] for i in range(n)],
    )


def torus_grid(n, scale=1):
    """The ``n x n`` grid on the torus with wrap-around L-infinity metric.

    Point ``(i, j)`` is named ``"i,j"`` and sits at index ``i*n + j``.
    """
    s, _ = as_fraction(scale)
    cells = [(i, j) for i in range(n) for j in range(n)]
    return FiniteMetricSpace(
        [f"{i},{j}" for i, j in cells],
        [
            [s * max(_wrap(a[0] - b[0], n), _wrap(a[1] - b[1], n)) for b in cells]
            for a in cells
        ],
    )


def disjoint_union(first, second, gap, prefixes=("a", "b")):
    """Place two spaces at mutual distance ``gap`` (must dominate both diameters / 2)."""
    g, _ = as_fraction(gap)
    pts = [f"{prefixes[0]}{p}" for p in first.points] + [f"{prefixes[1]}{p}" for p in second.points]
    n1 = len(first)
    n = n1 + len(second)
    table = [[g] * n for _ in range(n)]
    for i in range(n1):
        for j in range(n1):
            table[i][j] = first.dist[i][j]
    for i in range(len(second)):
        for j in range(len(second)):
            table[n1 + i][n1 + j] = second.dist[i][j]
    return FiniteMetricSpace(pts, table)
