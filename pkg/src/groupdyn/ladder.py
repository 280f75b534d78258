"""The finite set of thresholds on which strict-inequality predicates change.

Every predicate of the form ``d(Phi_s(x), y) < delta`` is constant for
``delta`` in a half-open interval ``(v_i, v_{i+1}]`` between consecutive
realized distance values, so "for each delta > 0" reduces to a sweep over
the ladder.
"""

from dataclasses import dataclass
from fractions import Fraction

from ._exact import ONE, ZERO

__all__ = ["ThresholdLadder", "threshold_ladder"]


@dataclass(frozen=True)
class ThresholdLadder:
    values: tuple

    @property
    def positive(self):
        return tuple(v for v in self.values if v > 0)

    @property
    def midpoints(self):
        v = self.values
        return tuple((a + b) / 2 for a, b in zip(v, v[1:]))

    @property
    def top(self):
        return self.values[-1]

    def representative(self, delta):
        """The ladder value ``v`` with ``d < delta`` iff ``d < v`` for realized distances."""
        delta = Fraction(delta)
        above = [v for v in self.values if v >= delta]
        return above[0] if above else None

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def threshold_ladder(action, override=None):
    """Ladder for ``action``: all values ``d(Phi_s(x), y)``, plus 0 and 1.

    ``override`` replaces the computed values (0 is always kept).
    """
    if override is not None:
        vals = {Fraction(v) for v in override} | {ZERO}
        return ThresholdLadder(tuple(sorted(vals)))
    d = action.space.dist
    n = len(action.space)
    vals = {ZERO, ONE}
    for s in action.gens.labels:
        m = action.maps[s]
        for x in range(n):
            row = d[m[x]]
            vals.update(row)
    return ThresholdLadder(tuple(sorted(vals)))
