import pytest

from models.world import World
from services.world_service import WorldService

SQUARE_ROOM = {
    'name': 'square',
    'bounds': [[-2.0, -2.0], [2.0, -2.0], [2.0, 2.0], [-2.0, 2.0]],
    'spawn_region': [-0.5, -0.5, 0.5, 0.5],
    'goal_region': [-1.5, -1.5, 1.5, 1.5]
}


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='run long acceptance tests (training runs, overestimation study)')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def square_world() -> World:
    """Empty 4 m x 4 m room centred on the origin"""
    return WorldService.world_from_dict(dict(SQUARE_ROOM))


@pytest.fixture
def stage_worlds():
    return [WorldService.builtin_scenario(i) for i in (1, 2, 3)]
