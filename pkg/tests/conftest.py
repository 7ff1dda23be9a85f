import pathlib

import pytest

from src.app_api.ingestion import load_morse_data
from src.knot_algebra.relations import Window, build_quotient


TEST_CASES = pathlib.Path(__file__).resolve().parents[1] / "MyData" / "TestCases"


@pytest.fixture(scope="session")
def test_cases() -> pathlib.Path:
    return TEST_CASES


@pytest.fixture(scope="session")
def quotient_deg1():
    """Degree-1 nullhomotopic quotient on window 5, wide enough for every degree-1 check."""
    return build_quotient(Window(1, 5, nh_only=True))


@pytest.fixture(scope="session")
def quotient_deg1_k3():
    return build_quotient(Window(1, 3, nh_only=True))


@pytest.fixture(scope="session")
def quotient_deg2():
    return build_quotient(Window(2, 1, nh_only=True))


@pytest.fixture(scope="session")
def s2xs1():
    return load_morse_data(TEST_CASES / "s2xs1.json")


@pytest.fixture(scope="session")
def genus1():
    return load_morse_data(TEST_CASES / "genus1.json")


@pytest.fixture(scope="session")
def selfevent():
    return load_morse_data(TEST_CASES / "selfevent.json")
