"""Points and distances in the plane."""

import math

TOLERANCE = 1e-9


class Point:
    def __init__(self, x, y):
        self.x = x
        self.y = y

    def __repr__(self):
        return f"Point({self.x}, {self.y})"


def distance(a, b):
    return math.hypot(a.x - b.x, a.y - b.y)


def closest_pair(points):
    def key(pair):
        return distance(*pair)

    best = None
    for i, p in enumerate(points):
        for q in points[i + 1:]:
            if best is None or key((p, q)) < key(best):
                best = (p, q)
    return best


def centroid(points,
             weights=None):
    if weights is None:
        weights = [1] * len(points)
    total = sum(weights)
    x = sum(p.x * w for p, w in zip(points, weights)) / total
    y = sum(p.y * w for p, w in zip(points, weights)) / total
    return Point(x, y)
