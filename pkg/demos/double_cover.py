"""Lift pseudo-orbits through the 12-point cover of the 6-point rotation.

Short pseudo-orbits lift and project back unchanged. One that winds once
too often around the base has no lift. Run with ``python demos/double_cover.py``.
"""

from groupdyn import fixtures as fx
from groupdyn.covering import CoveringMap, lift_pseudo_orbit, project_pseudo_orbit, validate_cover
from groupdyn.dynamics import PseudoOrbit, pseudo_orbit_defect
from groupdyn.errors import LiftObstruction
from groupdyn.group_core import cayley_ball, joint_ball


def exponent(e):
    return sum(1 if s == "t" else -1 for s in e.witness)


def main():
    base, cover, proj, delta0 = fx.double_cover()
    pi = CoveringMap(cover.space, base.space, proj, delta0)
    print(f"cover valid with delta0 = {delta0}: {validate_cover(pi, base, cover).valid}")

    idx = cayley_ball(cover, 2)
    f = PseudoOrbit(idx, (2, 4, 1, 4, 0))
    t = lift_pseudo_orbit(pi, base, cover, f)
    print(f"\npseudo-orbit {f.assignment} (defect {pseudo_orbit_defect(base, f)})")
    print(f"  lift {t.assignment}, projects back: {project_pseudo_orbit(pi, base, cover, t) == f}")

    # six steps of 2 and six of 1 go round the base three times in twelve steps
    idx = joint_ball([base, cover])
    pos = [0]
    for step in [2] * 6 + [1] * 5:
        pos.append(pos[-1] + step)
    g = PseudoOrbit(idx, [pos[exponent(e) % 12] % 6 for e in idx.elements])
    print(f"\nwinding pseudo-orbit with defect {pseudo_orbit_defect(base, g)}")
    try:
        lift_pseudo_orbit(pi, base, cover, g)
    except LiftObstruction as exc:
        print(f"  no lift: {exc}")


if __name__ == "__main__":
    main()
