from pathlib import Path

import pytest

from vfxcontrol.catalog import load_catalog

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN_DIR
