import pytest

from twostage.core import GroundSet, ObjectiveFamily


def modular_family(*weight_rows):
    """Family of modular functions from explicit per-element weights."""
    n = len(weight_rows[0])
    ground = GroundSet(n)

    def make(w):
        return lambda ids: float(sum(w[e] for e in ids))

    return ObjectiveFamily(ground, [make(tuple(r)) for r in weight_rows])


@pytest.fixture
def worked_instance():
    """The 3-element two-function instance every hand-trace uses.

    f1 weights (3, 2, 1), f2 weights (1, 2, 3); with ell=2, k=1 the optimum
    is S={0, 2}, T1={0}, T2={2}, value 3.
    """
    return modular_family((3.0, 2.0, 1.0), (1.0, 2.0, 3.0))
