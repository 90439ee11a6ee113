import numpy as np
import pytest

from tinet.instances import random_instance
from tinet.io import example_path, load_config, load_spec


@pytest.fixture(scope="session")
def instances():
    return [random_instance(seed) for seed in range(20)]


@pytest.fixture(scope="session")
def spec0(instances):
    return instances[0]


@pytest.fixture(scope="session")
def example():
    return load_spec(example_path())


@pytest.fixture(scope="session")
def example_config():
    return load_config(example_path("single_mode_descent.json"))


@pytest.fixture(scope="session")
def example_descent(example, example_config):
    from tinet.synthesis import descend
    return descend(example, example_config)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
