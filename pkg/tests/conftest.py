import numpy as np
import pytest

from knotforge import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load from cache) the jitted kernels once."""
    kernels.warmup()


@pytest.fixture()
def hopf_link():
    from knotforge.catalogue import build
    return build("2.2.1")


@pytest.fixture()
def trefoil():
    from knotforge.construct import torus
    return torus(2, 3, 60)


@pytest.fixture()
def square_link():
    from knotforge.polylink import Component, PolyLink
    verts = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                      [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]])
    return PolyLink([Component(verts, closed=True)])
