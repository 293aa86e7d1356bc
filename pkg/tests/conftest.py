import numpy as np
import pytest

from thzlink.tablegen import generate_table


@pytest.fixture(scope="session")
def default_table():
    return generate_table()


@pytest.fixture(scope="session")
def table_csv(tmp_path_factory, default_table):
    path = tmp_path_factory.mktemp("tables") / "default_table.csv"
    default_table.to_csv(path)
    return path


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
