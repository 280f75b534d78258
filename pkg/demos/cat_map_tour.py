"""A walk through the cat map on the 5 x 5 torus grid.

Run with ``python demos/cat_map_tour.py``.
"""

from fractions import Fraction as F

from groupdyn import fixtures as fx
from groupdyn.chain import cr_core, spectral_decomposition, ssp_profile
from groupdyn.dynamics import ball_cover, expansive_constant, is_generator, shadowing_profile
from groupdyn.group_core import cayley_ball, full_group


def main():
    a = fx.cat(5)
    print(f"{a.name}: {len(a.space)} points, generators {a.gens.labels}")

    # the matrix has order 10 mod 5, so balls stop growing at radius 5
    for k in range(6):
        print(f"  |G_{k}| = {len(cayley_ball(a, k))}")
    print(f"  realized group order {len(full_group(a))}")

    sep = expansive_constant(a)
    print(f"\nminimum pair separation: {sep}")
    for r in (F(1, 5), F(2, 5)):
        chk = is_generator(a, ball_cover(a.space, r))
        print(f"  balls of radius {r} form a generator: {chk.verdict}")

    prof = shadowing_profile(a, 1, F(2, 5))
    print(f"\nshadowing on G_1 at eps = 2/5: every pseudo-orbit with defect < {prof.delta} is traced")

    core = sorted(a.space.points[x] for x in cr_core(a))
    print(f"points with an exact nontrivial return: {core}")

    # a window shorter than the space cannot hold a whole weak chain
    eps = F(2, 5)
    for L, k in ((3, 2), (25, 3)):
        sp = ssp_profile(a, eps, L, k, budget=10**8)
        print(f"\nsequential shadowing at eps = {eps}, L = {L}, k = {k}: delta = {sp.delta}")
    rep = spectral_decomposition(a, sp.delta, eps, 25, 3, budget=10**8)
    sizes = [len(c) for c in rep.decomposition.classes]
    print(f"  {len(sizes)} classes of sizes {sizes}; all checks pass: {rep.verified}")

if __name__ == "__main__":
    main()
