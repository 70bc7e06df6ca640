from pathlib import Path

import pytest

from fibered_lrc.gf import make_field


@pytest.fixture(scope="session")
def golden_dir():
    return Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def f5():
    return make_field(5, 1)


@pytest.fixture(scope="session")
def f13():
    return make_field(13, 1)


@pytest.fixture(scope="session")
def f49():
    return make_field(7, 2)


@pytest.fixture(scope="session")
def f81():
    return make_field(3, 4)


@pytest.fixture(scope="session")
def f121():
    return make_field(11, 2)


@pytest.fixture(scope="session")
def f169():
    return make_field(13, 2)


@pytest.fixture(scope="session")
def f625():
    return make_field(5, 4)


@pytest.fixture(scope="session")
def field_cache():
    cache = {}

    def get(p, m):
        if (p, m) not in cache:
            cache[(p, m)] = make_field(p, m)
        return cache[(p, m)]

    return get
