from pathlib import Path

import pytest

from corecov import WeightedGraph

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def triangle() -> WeightedGraph:
    return WeightedGraph({("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 1})


@pytest.fixture
def path3() -> WeightedGraph:
    return WeightedGraph({("a", "b"): 1, ("b", "c"): 1})


@pytest.fixture
def triangle_pendant() -> WeightedGraph:
    return WeightedGraph({("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 1, ("c", "d"): 1})


@pytest.fixture
def two_triangles() -> WeightedGraph:
    return WeightedGraph(
        {("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 1,
         ("d", "e"): 1, ("e", "f"): 1, ("d", "f"): 1}
    )


@pytest.fixture
def barbell() -> WeightedGraph:
    """Two triangles joined by the bridge (c, d)."""
    return WeightedGraph(
        {("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 1,
         ("d", "e"): 1, ("e", "f"): 1, ("d", "f"): 1,
         ("c", "d"): 1}
    )
