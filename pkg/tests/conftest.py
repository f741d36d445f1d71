import os

import pytest

from xmlauthz.paths import build_allpaths_from_document, load_allpaths_from_list

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def fixture(name: str) -> str:
    return os.path.join(FIXTURES, name)


@pytest.fixture(scope="session")
def department_universe():
    return build_allpaths_from_document(fixture("department.xml"))


@pytest.fixture(scope="session")
def department_universe_from_list():
    return load_allpaths_from_list(fixture("department_paths.txt"))
