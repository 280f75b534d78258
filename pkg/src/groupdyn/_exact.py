"""Exact rational helpers shared by every module."""

from fractions import Fraction
from math import lcm

ONE = Fraction(1)
ZERO = Fraction(0)


def as_fraction(value):
    """Convert ``value`` to a Fraction.

    Returns ``(fraction, exact)`` where ``exact`` is False only for float
    inputs (which are converted bit-exactly, but whose source was already
    rounded).
    """
    if isinstance(value, Fraction):
        return value, True
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, int):
        return Fraction(value), True
    if isinstance(value, float):
        return Fraction(value), False
    if isinstance(value, str):
        return Fraction(value.strip()), True
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def frac(value):
    return as_fraction(value)[0]


def format_fraction(q):
    """Decimal string when the expansion terminates, ``p/q`` otherwise."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = abs(q.numerator) * 10**digits // q.denominator
    sign = "-" if q < 0 else ""
    whole, part = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{part:0{digits}d}"


def common_scale(*tables):
    """Least common denominator over nested iterables of Fractions."""
    den = 1
    stack = list(tables)
    while stack:
        item = stack.pop()
        if isinstance(item, Fraction):
            den = lcm(den, item.denominator)
        elif isinstance(item, int):
            continue
        else:
            stack.extend(item)
    return den


def scale_table(table, den):
    return [[int(v * den) for v in row] for row in table]


def midpoint(a, b):
    return (Fraction(a) + Fraction(b)) / 2
