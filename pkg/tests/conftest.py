import numpy as np
import pytest

from h0quartic import numfield

TABLE_NAMES = [f"f{i:02d}" for i in range(1, 20)]


@pytest.fixture(scope="session")
def table_fields():
    return numfield.table_fields()


@pytest.fixture(scope="session")
def field_maps(table_fields):
    return {fd.name: (fd, numfield.embeddings(fd)) for fd in table_fields}


@pytest.fixture(scope="session")
def f01():
    fd = numfield.load_field("f01")
    return fd, numfield.embeddings(fd)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs for more than a few seconds")
