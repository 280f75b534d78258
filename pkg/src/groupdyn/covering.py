"""Locally isometric covering maps and pseudo-orbit transport.

A covering map is a surjection ``pi`` from a cover space onto a base space
that preserves distances inside every open ball of radius ``delta0``.
Pseudo-orbits of the cover action project to pseudo-orbits of the base
action with the same defect; below ``delta0`` they also lift.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .dynamics import PseudoOrbit, pseudo_orbit_defect
from .errors import DeltaTooLarge, GeneratorMismatch, LiftObstruction, NotBijective

__all__ = [
    "CoveringMap",
    "Violation",
    "CoverReport",
    "validate_cover",
    "project_pseudo_orbit",
    "lift_pseudo_orbit",
]


@dataclass(frozen=True)
class CoveringMap:
    """``projection[y]`` is the base index of cover point ``y``."""

    cover: object
    base: object
    projection: tuple
    delta0: Fraction

    def __post_init__(self):
        object.__setattr__(self, "projection", tuple(int(v) for v in self.projection))
        object.__setattr__(self, "delta0", Fraction(self.delta0))
        if len(self.projection) != len(self.cover):
            raise NotBijective("projection needs one entry per cover point")
        if any(not 0 <= v < len(self.base) for v in self.projection):
            raise NotBijective("projection points outside the base space")
        if self.delta0 <= 0:
            raise ValueError("delta0 must be positive")

    def __call__(self, y):
        return self.projection[self.cover.index(y)]

    def fibre(self, x):
        x = self.base.index(x)
        return tuple(y for y, v in enumerate(self.projection) if v == x)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass(frozen=True)
class CoverReport:
    violations: tuple = field(default_factory=tuple)

    @property
    def valid(self):
        return not self.violations

    def __bool__(self):
        return self.valid

    def kinds(self):
        return sorted({v.kind for v in self.violations})


def validate_cover(pi, phi, psi):
    """Check surjectivity, isometry on ``delta0``-balls, ball images and equivariance.

    ``phi`` acts on the base, ``psi`` on the cover. Every failure is listed;
    nothing is raised.
    """
    out = []
    Y, X = pi.cover, pi.base
    if phi.space != X or psi.space != Y:
        out.append(Violation("SpaceMismatch", "actions do not live on the covering spaces"))
        return CoverReport(tuple(out))
    p = pi.projection
    missing = sorted(set(range(len(X))) - set(p))
    if missing:
        out.append(Violation("NotSurjective", f"base points {[X.points[i] for i in missing]} have no preimage"))
    dy, dx = Y.dist, X.dist
    r = pi.delta0
    n = len(Y)
    for c in range(n):
        ball = [y for y in range(n) if dy[c][y] < r]
        for i, a in enumerate(ball):
            for b in ball[i + 1:]:
                if dx[p[a]][p[b]] != dy[a][b]:
                    out.append(
                        Violation(
                            "LocalIsometryViolation",
                            f"d({Y.points[a]},{Y.points[b]})={dy[a][b]} but images at {dx[p[a]][p[b]]}",
                        )
                    )
        for x in range(len(X)):
            v = dx[p[c]][x]
            if v < r and not any(p[y] == x and dy[c][y] == v for y in ball):
                out.append(
                    Violation(
                        "BallNotOnto",
                        f"{X.points[x]} in the base ball of {Y.points[c]} has no matching preimage",
                    )
                )
    if phi.gens.labels != psi.gens.labels:
        out.append(Violation("GeneratorMismatch", "actions use different generator labels"))
    else:
        for s in phi.gens.labels:
            bad = [y for y in range(n) if p[psi.maps[s][y]] != phi.maps[s][p[y]]]
            if bad:
                out.append(
                    Violation("EquivarianceViolation", f"generator {s!r} fails at {Y.points[bad[0]]}")
                )
    return CoverReport(tuple(dict.fromkeys(out)))


def _check_labels(phi, psi):
    if phi.gens.labels != psi.gens.labels:
        raise GeneratorMismatch("base and cover actions use different generators")


def project_pseudo_orbit(pi, phi, psi, f):
    """Push a pseudo-orbit of the cover action down along ``pi``."""
    _check_labels(phi, psi)
    delta = pseudo_orbit_defect(psi, f)
    if delta >= pi.delta0:
        raise DeltaTooLarge(f"defect {delta} is not below delta0 = {pi.delta0}")
    return PseudoOrbit(f.index, [pi.projection[y] for y in f.assignment])


def _parents(index):
    parent = {}
    for i, s, j in index.edge_list():
        if i < j and j not in parent:
            parent[j] = (i, s)
    return parent


def lift_pseudo_orbit(pi, phi, psi, f):
    """Lift a base pseudo-orbit through ``pi`` to one of the cover action.

    The index of ``f`` must determine the cover action (use the cover's
    ball or a joint ball). Each entry is the preimage closest to the image of
    its parent entry; the lift starts at the first preimage of ``f(e)`` that
    closes up consistently. Raises LiftObstruction when no start does.
    """
    _check_labels(phi, psi)
    delta = pseudo_orbit_defect(phi, f)
    if delta >= pi.delta0:
        raise DeltaTooLarge(f"defect {delta} is not below delta0 = {pi.delta0}")
    index = f.index
    index.tables_for(psi)
    dy, dx = pi.cover.dist, pi.base.dist
    a = f.assignment
    parent = _parents(index)
    edges = index.edge_list()
    for root in pi.fibre(a[0]):
        t = [None] * len(index)
        t[0] = root
        ok = True
        for j in range(1, len(index)):
            i, s = parent[j]
            c = psi.maps[s][t[i]]
            choices = [y for y in pi.fibre(a[j]) if dy[c][y] < pi.delta0]
            if not choices:
                ok = False
                break
            t[j] = choices[0]
        if ok and all(
            dy[psi.maps[s][t[i]]][t[j]] == dx[phi.maps[s][a[i]]][a[j]] for i, s, j in edges
        ):
            return PseudoOrbit(index, t)
    raise LiftObstruction("no lift closes up around every cycle of the ball")
