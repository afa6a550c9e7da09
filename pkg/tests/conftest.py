import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lieder import (
    AlgebraSpec,
    close_and_grade,
    constant_field,
    diagonal_field,
    euler,
)
from util import mono


@pytest.fixture(scope="session")
def diag2():
    """Plane algebra with the split diagonal torus: <dx, dy, x dx, y dy>."""
    return close_and_grade(
        AlgebraSpec(
            2,
            (
                constant_field(2, 1),
                constant_field(2, 2),
                diagonal_field(2, 1),
                diagonal_field(2, 2),
            ),
        )
    )


@pytest.fixture(scope="session")
def shear2():
    """<dx, dy, E, x dy>: Euler torus plus one nilpotent linear shear."""
    return close_and_grade(
        AlgebraSpec(
            2,
            (
                constant_field(2, 1),
                constant_field(2, 2),
                euler(2),
                mono(2, 1, (1, 0), 2),
            ),
        )
    )


@pytest.fixture(scope="session")
def euler2():
    """Translations plus the Euler field only."""
    return close_and_grade(
        AlgebraSpec(2, (constant_field(2, 1), constant_field(2, 2), euler(2)))
    )


@pytest.fixture(scope="session")
def pentad2():
    """Closure of <dx, dy, E, x^2 dx>; the closure adjoins x dx."""
    return close_and_grade(
        AlgebraSpec(
            2,
            (
                constant_field(2, 1),
                constant_field(2, 2),
                euler(2),
                mono(2, 1, (2, 0), 1),
            ),
        )
    )


@pytest.fixture(scope="session")
def shear3():
    """<dx, dy, dz, E, x dz, x^2 dz> on R^3."""
    return close_and_grade(
        AlgebraSpec(
            3,
            (
                constant_field(3, 1),
                constant_field(3, 2),
                constant_field(3, 3),
                euler(3),
                mono(3, 1, (1, 0, 0), 3),
                mono(3, 1, (2, 0, 0), 3),
            ),
        )
    )


@pytest.fixture(scope="session")
def tower2():
    """<dx, dy, x dx, y dy, y dx, ..., y^5 dx> closed at degree cap 4."""
    gens = (
        constant_field(2, 1),
        constant_field(2, 2),
        diagonal_field(2, 1),
        diagonal_field(2, 2),
    ) + tuple(mono(2, 1, (0, k), 1) for k in range(1, 6))
    return close_and_grade(AlgebraSpec(2, gens, degree_cap=4))
