"""Shared fixtures: tiny datasets sized for fast unit tests."""
import numpy as np
import pytest

from signpipe import datagen, forest
from signpipe.rng import substream


@pytest.fixture(scope="session")
def tiny_landmarks():
    """3 well-separated classes, 20 samples each."""
    spec = datagen.LandmarkDatasetSpec(per_class=20, seed=7, classes=("A", "B", "C"))
    X, y = datagen.frames_to_arrays(datagen.synth_landmarks(spec), classes=("A", "B", "C"))
    return X, y


@pytest.fixture(scope="session")
def tiny_forest(tiny_landmarks):
    X, y = tiny_landmarks
    hp = forest.ForestHyperparams(n_estimators=15, max_depth=8)
    return forest.train_forest(X, y, hp, seed=3), X, y


@pytest.fixture()
def rng():
    return substream(123, "test")


def random_images(n: int, size: int, seed: int) -> np.ndarray:
    return substream(seed, "img").integers(0, 256, size=(n, size, size)).astype(np.uint8)
