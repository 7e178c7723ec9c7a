"""Shared fixtures: small diagrams with known invariants."""

import pytest

from hkf.diagrams import PlanarDiagram


@pytest.fixture
def unknot_free():
    return PlanarDiagram(components=((1,),))


@pytest.fixture
def positive_kink():
    # one-crossing unknot, writhe +1
    return PlanarDiagram(crossings=((1, 1, 2, 2),), components=((1, 2),))


@pytest.fixture
def negative_kink():
    # one-crossing unknot, writhe -1
    return PlanarDiagram(crossings=((1, 2, 2, 1),), components=((1, 2),))


@pytest.fixture
def left_trefoil():
    # standard alternating picture, all three crossings negative
    return PlanarDiagram(
        crossings=((1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)),
        components=((1, 2, 3, 4, 5, 6),),
        labels=("k",),
    )


@pytest.fixture
def figure_eight():
    return PlanarDiagram(
        crossings=((4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)),
        components=((1, 2, 3, 4, 5, 6, 7, 8),),
        labels=("k",),
    )


@pytest.fixture
def hopf_plus():
    # positive Hopf link, linking number +1
    return PlanarDiagram(
        crossings=((2, 4, 1, 3), (4, 2, 3, 1)),
        components=((1, 2), (3, 4)),
        labels=("a", "b"),
    )
