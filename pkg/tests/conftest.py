import pytest

from horocenter import IdealPoint, Space

# Shared desk-scale tree: B is a branch vertex (degree 3); C and E are
# marked ends, D is a plain leaf.
TREE_EDGES = [("A", "B", 2.0), ("B", "C", 3.0), ("B", "D", 1.5), ("A", "E", 1.0)]
TREE_LEAVES = ["C", "E"]


@pytest.fixture(scope="session")
def euclid2():
    return Space.euclidean(2)


@pytest.fixture(scope="session")
def euclid3():
    return Space.euclidean(3)


@pytest.fixture(scope="session")
def hyp2():
    return Space.hyperbolic(2)


@pytest.fixture(scope="session")
def hyp3():
    return Space.hyperbolic(3)


@pytest.fixture(scope="session")
def tree_space():
    return Space.tree_space(TREE_EDGES, TREE_LEAVES)


@pytest.fixture(params=["euclid2", "euclid3", "hyp2", "tree"], scope="session")
def any_space(request, euclid2, euclid3, hyp2, tree_space):
    return {
        "euclid2": euclid2,
        "euclid3": euclid3,
        "hyp2": hyp2,
        "tree": tree_space,
    }[request.param]


def ideal_for(space) -> IdealPoint:
    """A fixed, valid ideal point for any of the fixture spaces."""
    if space.kind == "euclidean":
        return IdealPoint.direction((1.0,) + (0.0,) * (space.dim - 1))
    if space.kind == "hyperbolic":
        return IdealPoint.null_vector((1.0, 1.0) + (0.0,) * (space.dim - 1))
    return IdealPoint.end(sorted(space.tree.ideal_leaves)[0])
