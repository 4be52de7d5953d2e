"""Shared fixtures: the small family instances most tests revolve around."""

import pytest

from ingleton import build_polynomial_graph, build_projective_plane, uniform_pair


@pytest.fixture(scope="session")
def fano():
    return build_projective_plane(2)


@pytest.fixture(scope="session")
def fano_pair(fano):
    return uniform_pair(fano)


@pytest.fixture(scope="session")
def poly21():
    return build_polynomial_graph(2, 1)


@pytest.fixture(scope="session")
def poly21_pair(poly21):
    return uniform_pair(poly21)
