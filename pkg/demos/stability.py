"""Compare two actions and rebuild a semiconjugacy between them.

The second action runs the same maps on a slightly stretched metric, so the
identity is a near-isometry. Tracing its transported orbits recovers an
exact semiconjugacy. Run with ``python demos/stability.py``.
"""

from fractions import Fraction as F

from groupdyn import fixtures as fx
from groupdyn.action import GroupAction
from groupdyn.dynamics import expansive_constant
from groupdyn.gh import CandidateMap, gh_action_distance, gh_space_distance, synthesize_semiconjugacy
from groupdyn.metric_space import FiniteMetricSpace


def stretched(action, tau):
    X = action.space
    dist = [[v + tau if i != j else 0 for j, v in enumerate(row)] for i, row in enumerate(X.dist)]
    return GroupAction(action.gens, FiniteMetricSpace(X.points, dist), action.maps, name=action.name + "'")


def main():
    phi = fx.cat(3)
    psi = stretched(phi, F(1, 1000))

    print(f"GH distance of the spaces:  {gh_space_distance(phi.space, psi.space).value}")
    res = gh_action_distance(phi, psi)
    print(f"GH distance of the actions: {res.value} (two-map route agrees: {res.agree})")

    i = CandidateMap(psi.space, phi.space, tuple(range(len(phi.space))))
    eps = F(2, 5)
    c = min(expansive_constant(phi), F(1, 2)) / 2
    eta = min(eps, c) / 8 * F(9, 10)
    cert = synthesize_semiconjugacy(phi, psi, i, eps, eta)

    print(f"\neps = {eps}, c = {c}, eta = {eta}, delta = {cert.delta}")
    print(f"equivariance residual of h: {cert.residual}")
    print(f"iso-defect of h: {cert.iso_defect} <= 2 eta + delta = {cert.bound} < eps")
    print(f"h is the identity: {cert.h.table == i.table}")


if __name__ == "__main__":
    main()
