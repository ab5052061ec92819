import pytest

from xalgo import build_hdag, create_session, load_algorithm, run
from xalgo.session import resolve_algorithm, resolve_concepts


@pytest.fixture(scope="session")
def quicksort_def():
    return load_algorithm(resolve_algorithm("quicksort"))


@pytest.fixture(scope="session")
def quicksort_hdag(quicksort_def):
    return build_hdag(quicksort_def)


@pytest.fixture(scope="session")
def golden_trace(quicksort_def, quicksort_hdag):
    """The [3, 8, 2] run; expected values for it live in tests/data."""
    return run(quicksort_def, quicksort_hdag, [3, 8, 2])


@pytest.fixture(scope="session")
def concept_kb():
    return resolve_concepts("quicksort")


@pytest.fixture
def session382():
    return create_session("quicksort", [3, 8, 2])
