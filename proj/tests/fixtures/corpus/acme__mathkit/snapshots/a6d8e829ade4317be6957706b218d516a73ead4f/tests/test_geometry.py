from mathkit.geometry import Point, closest_pair


def test_closest_pair():
    pts = [Point(0, 0), Point(5, 5), Point(0, 1)]
    assert closest_pair(pts) == (pts[0], pts[2])
