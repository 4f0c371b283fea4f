import sys
from fractions import Fraction as Fr
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from axrel.model import ObserverSpec, galilean_structure, standard_minkowski


@pytest.fixture(scope="session")
def minkowski():
    """The acceptance structure: rest, two boosts, one rotated+translated."""
    return standard_minkowski([
        ObserverSpec("rest"),
        ObserverSpec("boosted", velocity=(Fr(3, 5), 0, 0)),
        ObserverSpec("updown", velocity=(0, Fr(4, 5), 0)),
        ObserverSpec("skew", velocity=(Fr(3, 5), 0, 0),
                     rotations=((1, 2, Fr(3, 5), Fr(4, 5)),),
                     translation=(1, 0, 0, 2)),
    ])


@pytest.fixture(scope="session")
def two_observer():
    return standard_minkowski([
        ObserverSpec("rest"),
        ObserverSpec("boosted", velocity=(Fr(3, 5), 0, 0)),
    ])


@pytest.fixture(scope="session")
def galilean():
    return galilean_structure([
        ObserverSpec("lab"),
        ObserverSpec("train", velocity=(Fr(3, 5), 0, 0)),
    ])
