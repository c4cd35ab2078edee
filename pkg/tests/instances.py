"""Random lower bound curves and nondominated fronts for bound-set checks."""
from ndtree import NdList, point, segment
from ndtree.bound_sets import LowerBoundCurve


def random_curve(rng):
    n = rng.randint(1, 5)
    xs = sorted(rng.sample(range(0, 40), n))
    # convex and decreasing: slopes increase toward zero
    slopes = sorted(-rng.uniform(0.1, 4) for _ in range(n - 1))
    y = rng.uniform(5, 30)
    pts = [(xs[0] / 2, y)]
    for i in range(1, n):
        y += slopes[i - 1] * (xs[i] - xs[i - 1]) / 2
        pts.append((xs[i] / 2, y))
    return LowerBoundCurve(pts)


def random_front(rng):
    lst = NdList()
    for _ in range(rng.randint(1, 8)):
        x, y = rng.uniform(0, 20), rng.uniform(-5, 25)
        if rng.random() < 0.5:
            lst.insert(point(x, y))
        else:
            lst.insert(segment(x, y + rng.uniform(0.5, 5), x + rng.uniform(0.5, 5), y))
    return lst.nondominated_set()
