import pytest

from mrmlearn.envs import build_cookie_domain, build_treasure_map, treasure_machine


@pytest.fixture
def treasure():
    return treasure_machine()


@pytest.fixture
def treasure_env():
    return build_treasure_map(1.0)


@pytest.fixture
def cookie_env():
    return build_cookie_domain()
