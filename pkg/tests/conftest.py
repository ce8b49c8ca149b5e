"""Session-wide fixtures: the default chaotic-series pipeline used by the
fitting, correction, bench, and acceptance tests."""

import pytest

import polycast as pc

TRAIN_RANGE = (0, 140)
EMBED = pc.EmbeddingParams(lag=6, dimension=3)


@pytest.fixture(scope="session")
def default_series():
    return pc.lorenz_series()


@pytest.fixture(scope="session")
def default_space(default_series):
    return pc.reconstruct(default_series, EMBED)


@pytest.fixture(scope="session")
def default_map(default_series, default_space):
    config = pc.FitConfig(
        degree=2, include_constant=False, folds=10, training_range=TRAIN_RANGE
    )
    return pc.fit_kfold(default_series, default_space, config)


@pytest.fixture(scope="session")
def pipeline(default_series, default_space, default_map):
    return default_series, default_space, default_map
