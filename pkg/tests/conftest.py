import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from triplemorph.assets import load_case_study
from triplemorph.engine import apply_rules

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def case_study():
    return load_case_study()


@pytest.fixture(scope="session")
def transformed(case_study):
    return apply_rules(case_study.source, case_study.rules)


@pytest.fixture(scope="session")
def data_dir():
    return DATA
