import pathlib

import pytest

from atria.model import parse_trace

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def ex1_bytes():
    return (DATA / "ex1.json").read_bytes()


@pytest.fixture()
def ex1(ex1_bytes):
    return parse_trace(ex1_bytes)


@pytest.fixture()
def ex1_pair(ex1):
    from helpers import ex1_variant_b
    return ex1, ex1_variant_b(ex1)


@pytest.fixture(scope="session")
def gen10():
    return parse_trace((DATA / "gen10.json").read_bytes())
