import pathlib
import sys

import numpy as np
import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from synth import (  # noqa: E402
    four_gaussian_image,
    gray_to_rgb,
    halves_image,
    two_population_image,
    two_spike_image,
)

from histoseg import Histogram, build_histogram  # noqa: E402


@pytest.fixture(scope="session")
def uniform_hist() -> Histogram:
    return Histogram(np.ones(256, dtype=np.int64))


@pytest.fixture(scope="session")
def two_spike_hist() -> Histogram:
    counts = np.zeros(256, dtype=np.int64)
    counts[50] = 1000
    counts[200] = 1000
    return Histogram(counts)


@pytest.fixture(scope="session")
def two_spike_rgb():
    return gray_to_rgb(two_spike_image().values)


@pytest.fixture(scope="session")
def halves_rgb():
    return halves_image()


@pytest.fixture(scope="session")
def two_population():
    return two_population_image()


@pytest.fixture(scope="session")
def four_gaussian():
    return four_gaussian_image()


@pytest.fixture(scope="session")
def rich_fixture_images(two_population, four_gaussian):
    """Fixture images whose histograms populate enough bins for every
    method up to n=7."""
    return {
        "two_population": gray_to_rgb(two_population[0].values),
        "four_gaussian": four_gaussian,
    }


@pytest.fixture(scope="session")
def all_fixture_images(rich_fixture_images, two_spike_rgb, halves_rgb):
    images = dict(rich_fixture_images)
    images["two_spike"] = two_spike_rgb
    images["halves"] = halves_rgb
    return images
