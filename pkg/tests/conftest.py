import pytest

from covertsim import average_rate, load_config


@pytest.fixture(scope="session")
def cfg():
    return load_config({"defaults": "table1"})


@pytest.fixture(scope="session")
def r_bar(cfg):
    return average_rate(cfg, trials=200_000, seed=7).mean_rate
