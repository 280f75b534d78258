"""Small named actions used by the tests, demos and the CLI.

Each builder returns a fresh :class:`GroupAction`; ``FIXTURES`` maps the
names to the builders.
"""

from fractions import Fraction

from .action import GroupAction, affine_mod, flip_1_minus_x, identity_map, matrix_mod
from .group_core import GeneratorSystem
from .metric_space import cycle, discrete, disjoint_union, torus_grid

__all__ = [
    "CAT_MATRIX",
    "z_action",
    "flip",
    "flip_two_generators",
    "cat",
    "cat3",
    "cat5",
    "rot",
    "rot_wide",
    "triv",
    "triv_cycle",
    "solv",
    "double_cover",
    "tworot",
    "FIXTURES",
    "get",
]

CAT_MATRIX = ((2, 1), (1, 1))
CAT_INVERSE = ((1, -1), (-1, 2))


def z_action(space, table, name=None, labels=("t", "T")):
    """A Z-action generated by one bijection (``t``) and its inverse (``T``)."""
    t, T = labels
    gens = GeneratorSystem((t, T), {t: T}, kind="abelian")
    return GroupAction(gens, space, {t: table}, name=name)


def flip():
    """Z^2 acting on the discrete space {-3..4} with both axes acting by x -> 1-x."""
    space = discrete(8, [str(v) for v in range(-3, 5)])
    f = flip_1_minus_x(space)
    gens = GeneratorSystem(
        ("e1", "e2", "e3", "e4"),
        {"e1": "e3", "e2": "e4"},
        relations=[(("e1", "e2"), ("e2", "e1"))],
        kind="abelian",
    )
    return GroupAction(gens, space, {"e1": f, "e2": f}, name="FLIP")


def flip_two_generators():
    """The FLIP space and map with only the first axis as generators."""
    base = flip()
    gens = GeneratorSystem(("e1", "e3"), {"e1": "e3"}, kind="abelian")
    return GroupAction(gens, base.space, {"e1": base.maps["e1"]}, name="FLIP_E1")


def cat(n=5):
    """The cat map ``[[2,1],[1,1]]`` on the ``n x n`` torus grid with spacing ``1/n``."""
    return z_action(torus_grid(n, Fraction(1, n)), matrix_mod(CAT_MATRIX, n), name=f"CAT{n}")


def cat3():
    """The cat map on the 3 x 3 torus grid."""
    return cat(3)


def cat5():
    """The cat map on the 5 x 5 torus grid."""
    return cat(5)


def rot(n=6):
    """Rotation by one step on a cycle of ``n`` points spaced ``1/n`` apart."""
    return z_action(cycle(n, Fraction(1, n)), affine_mod(1, 1, n), name="ROT")


def rot_wide(n=6):
    """The ROT group generated by rotations by one and by two steps."""
    gens = GeneratorSystem(("t", "T", "u", "U"), {"t": "T", "u": "U"}, kind="abelian")
    maps = {"t": affine_mod(1, 1, n), "u": affine_mod(1, 2, n)}
    return GroupAction(gens, cycle(n, Fraction(1, n)), maps, name="ROT_WIDE")


def triv(n=3):
    """Z acting trivially on a discrete space."""
    return z_action(discrete(n), identity_map(n), name="TRIV")


def triv_cycle(n=6):
    """Z acting trivially on a cycle of ``n`` points."""
    return z_action(cycle(n, Fraction(1, n)), identity_map(n), name="TRIV_CYCLE")


def solv(n=7, c=1):
    """``a: x -> x+c`` and ``b: x -> 2x`` mod ``n`` (odd), satisfying ``ba = aab``."""
    gens = GeneratorSystem(
        ("a", "A", "b", "B"),
        {"a": "A", "b": "B"},
        relations=[(("b", "a"), ("a", "a", "b"))],
    )
    maps = {"a": affine_mod(1, c, n), "b": affine_mod(2, 0, n)}
    return GroupAction(gens, cycle(n, Fraction(1, n)), maps, name="SOLV")


def double_cover():
    """Rotation on 12 points covering rotation on 6 by ``y -> y mod 6``.

    Returns ``(base, cover, projection, delta0)``; both cycles use spacing
    ``1/12`` so the projection is isometric on balls of radius below ``1/6``.
    """
    step = Fraction(1, 12)
    base = z_action(cycle(6, step), affine_mod(1, 1, 6), name="ROT6")
    cover = z_action(cycle(12, step), affine_mod(1, 1, 12), name="ROT12")
    return base, cover, tuple(y % 6 for y in range(12)), 2 * step


def tworot():
    """Two 3-point cycles at distance 1/2, each rotated by one step."""
    c = cycle(3, Fraction(1, 6))
    space = disjoint_union(c, c, Fraction(1, 2))
    table = (1, 2, 0, 4, 5, 3)
    return z_action(space, table, name="TWOROT")


FIXTURES = {
    "FLIP": flip,
    "FLIP_E1": flip_two_generators,
    "CAT3": cat3,
    "CAT5": cat5,
    "ROT": rot,
    "ROT_WIDE": rot_wide,
    "TRIV": triv,
    "TRIV_CYCLE": triv_cycle,
    "SOLV": solv,
    "TWOROT": tworot,
}


def get(name):
    try:
        return FIXTURES[name.upper()]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
