import os
from pathlib import Path

import pytest

from src.graphs.graph_io import read_graph_file
from src.gic.structure import read_gic_file

FIXTURES = Path(__file__).resolve().parent / "fixtures"

SUITE_SIZE = int(os.getenv("ICW_SUITE_SIZE", "200"))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def six_vertex():
    return read_graph_file(FIXTURES / "six_vertex.graph")


@pytest.fixture
def k3():
    return read_graph_file(FIXTURES / "k3.graph")


@pytest.fixture
def empty3():
    return read_graph_file(FIXTURES / "empty3.graph")


@pytest.fixture
def c5():
    return read_graph_file(FIXTURES / "c5_bidirectional.graph")


@pytest.fixture
def six_cycle():
    return read_gic_file(FIXTURES / "six_cycle.gic")


@pytest.fixture
def shared_fan():
    return read_gic_file(FIXTURES / "shared_fan.gic")


@pytest.fixture
def suite_size() -> int:
    return SUITE_SIZE
