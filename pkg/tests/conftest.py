import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hyperspec import fano, iterated_fano


@pytest.fixture(scope="session")
def fano_h():
    return fano()


@pytest.fixture(scope="session")
def itf2():
    """The 9-uniform composed instance; built once, spectrum cache shared."""
    return iterated_fano(2)
