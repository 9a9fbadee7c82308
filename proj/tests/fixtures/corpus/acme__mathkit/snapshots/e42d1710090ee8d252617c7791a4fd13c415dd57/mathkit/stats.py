"""Basic descriptive statistics."""

import math


def mean(values):
    if not values:
        raise ValueError("mean of empty sequence")
    return sum(values) / len(values)


def median(values):
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    if n % 2 == 0:
        return (ordered[mid - 1] + ordered[mid]) / 2
    return ordered[mid]


def variance(values, ddof=0):
    m = mean(values)
    return sum((v - m) ** 2 for v in values) / (len(values) - ddof)


class Summary:
    """Summary of a numeric sample."""

    def __init__(self, values):
        self.values = list(values)

    def describe(self):
        return {
            "mean": mean(self.values),
            "median": median(self.values),
        }

    @property
    def spread(self):
        return math.sqrt(variance(self.values))
