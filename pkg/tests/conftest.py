import numpy as np
import pytest

from chairsearch.dataset import build_dataset, reference_shapes
from chairsearch.dictionary import default_dictionary
from chairsearch.geometry import StyleParams, generate_parametric_shape
from chairsearch.index import build_index


@pytest.fixture(scope="session")
def dictionary():
    return default_dictionary()


@pytest.fixture(scope="session")
def small_shapes():
    rng = np.random.default_rng(99)
    shapes = []
    for shape_id in range(3):
        levels = rng.integers(0, 5, size=20)
        levels[0] = 4  # arms present
        shapes.append(generate_parametric_shape(StyleParams.from_levels(levels), shape_id))
    return shapes


@pytest.fixture(scope="session")
def small_manifest(small_shapes, dictionary):
    return build_dataset(small_shapes, dictionary)


@pytest.fixture(scope="session")
def small_index(small_manifest, dictionary):
    return build_index(small_manifest, dictionary)


@pytest.fixture(scope="session")
def full_manifest(dictionary):
    return build_dataset(reference_shapes(), dictionary)


@pytest.fixture(scope="session")
def full_index(full_manifest, dictionary):
    return build_index(full_manifest, dictionary)
