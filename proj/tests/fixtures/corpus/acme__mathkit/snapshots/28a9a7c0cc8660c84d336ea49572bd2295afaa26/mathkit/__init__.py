from mathkit.stats import mean, median, variance, Summary
from mathkit.geometry import Point, distance

__all__ = ["mean", "median", "variance", "Summary", "Point", "distance"]
