import hypothesis.strategies as st
import pytest
from hypothesis import HealthCheck, settings

from quotient_brown.group_ring import GroupRingElement, GroupRingMatrix
from quotient_brown.groups import AbelianGroupSpec, HeisenbergGroup

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

Z = AbelianGroupSpec(1)
Z2 = AbelianGroupSpec(2)
ZxZ3 = AbelianGroupSpec(1, (3,))
H = HeisenbergGroup()

small_int = st.integers(-3, 3)


def elements_of(group):
    return st.tuples(*[st.integers(-4, 4)] * group.ncoords).map(group.element) if isinstance(group, AbelianGroupSpec) \
        else st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)).map(H.element)


def ring_elements(group, max_terms=4):
    return st.lists(st.tuples(elements_of(group), small_int), max_size=max_terms).map(
        lambda items: GroupRingElement(group, items)
    )


def ring_matrices(group, n):
    return st.lists(ring_elements(group, 3), min_size=n * n, max_size=n * n).map(
        lambda es: GroupRingMatrix(group, [es[i * n : (i + 1) * n] for i in range(n)])
    )


@pytest.fixture
def intro():
    from quotient_brown.verification import intro_matrix

    return intro_matrix()
