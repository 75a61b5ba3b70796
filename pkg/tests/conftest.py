import numpy as np
import pytest

from atomcolor.embedding import Register
from atomcolor.graphs import Graph, worked_example_graph


@pytest.fixture
def worked_graph() -> Graph:
    return worked_example_graph()


@pytest.fixture
def worked_ud_register() -> Register:
    """Hand unit-disk realization of the worked-example graph.

    Edges (0,2), (0,4), (2,3) sit at 5.5-7 um, all other pairs at 11+ um,
    so the edge/non-edge interaction window is wide.
    """
    positions = np.array([
        [0.0, 0.0],     # 0: hub
        [5.0, 14.0],    # 1: isolated
        [6.5, 0.0],     # 2
        [13.0, 0.5],    # 3
        [-2.7, 4.8],    # 4
    ])
    return Register(positions, (0, 1, 2, 3, 4))


def pytest_addoption(parser):
    parser.addoption("--skip-slow", action="store_true", default=False,
                     help="skip the long-running acceptance criteria")


def pytest_collection_modifyitems(config, items):
    if not config.getoption("--skip-slow"):
        return
    marker = pytest.mark.skip(reason="--skip-slow given")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(marker)
