import numpy as np
import pytest
from hypothesis import settings

from nullwave.constitutive import standard_materials
from nullwave.tensors import material_tensors

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def materials():
    return standard_materials()


@pytest.fixture(scope="session")
def null_model(materials):
    return materials["null_unit"]


@pytest.fixture(scope="session")
def witness(materials):
    return materials["witness_h0"]


@pytest.fixture(scope="session")
def tensors_cache(materials):
    cache = {}

    def get(name, lam=1.5):
        key = (name, lam)
        if key not in cache:
            cache[key] = material_tensors(materials[name], lam)
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
