"""Helpers around fractions.Fraction."""

from fractions import Fraction


def to_fraction(value, limit=1000):
    return Fraction(value).limit_denominator(limit)


def mixed(fraction):
    whole, rest = divmod(fraction.numerator, fraction.denominator)
    return whole, Fraction(rest, fraction.denominator)
