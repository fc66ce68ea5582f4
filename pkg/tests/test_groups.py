import pytest
from hypothesis import given
import hypothesis.strategies as st

from quotient_brown.errors import MismatchedGroup, QuotientTooLarge
from quotient_brown.groups import (
    AbelianGroupSpec,
    Family,
    HeisenbergElement,
    HeisenbergGroup,
    QuotientSpec,
    enumerate_quotient,
    project,
)

from conftest import H, Z, Z2, ZxZ3, elements_of


def test_heisenberg_generators_commutator_is_central():
    a, b, c = H.a, H.b, H.c
    assert a * b == c * b * a
    assert a * b * a.inverse() * b.inverse() == c
    assert c * a == a * c and c * b == b * c


@given(elements_of(H), elements_of(H), elements_of(H))
def test_heisenberg_associative(g, h, k):
    assert (g * h) * k == g * (h * k)


@given(elements_of(H))
def test_heisenberg_inverse(g):
    assert (g * g.inverse()).is_identity()
    assert (g.inverse() * g).is_identity()


@given(elements_of(H))
def test_canonical_factorization(g):
    x, y, z = g.coords
    assert (H.a**x) * (H.b**y) * (H.c ** (z - x * y)) == g


def test_heisenberg_matrix_model():
    # (x, y, z) <-> [[1, x, z], [0, 1, y], [0, 0, 1]]
    import numpy as np

    def mat(g):
        return np.array([[1, g.x, g.z], [0, 1, g.y], [0, 0, 1]])

    g, h = HeisenbergElement(2, -1, 3), HeisenbergElement(-1, 4, 0)
    assert np.array_equal(mat(g) @ mat(h), mat(g * h))


def test_modular_reduction_and_mismatch():
    g = HeisenbergElement(5, -1, 7, 3)
    assert g.coords == (2, 2, 1)
    with pytest.raises(MismatchedGroup):
        g * HeisenbergElement(1, 0, 0)


@given(elements_of(ZxZ3), elements_of(ZxZ3))
def test_abelian_commutative_with_torsion(g, h):
    assert g * h == h * g
    assert g.torsion_residues[0] in range(3)


def test_abelian_str_and_validation():
    assert str(AbelianGroupSpec(2, (3,))) == "Z^2xZ/3"
    assert str(Z) == "Z"
    with pytest.raises(ValueError):
        AbelianGroupSpec(0)
    with pytest.raises(ValueError):
        AbelianGroupSpec(1, (1,))
    with pytest.raises(QuotientTooLarge):
        Z.elements()


def test_quotient_orders():
    assert QuotientSpec.heisenberg(3, 2).order == 729
    assert QuotientSpec.abelian(Z2, [4, 6]).order == 24
    assert QuotientSpec.abelian(ZxZ3, [5]).order == 15
    assert QuotientSpec.abelian(Z, [1]).order == 1
    assert QuotientSpec.heisenberg(3, 1).family is Family.HEISENBERG
    with pytest.raises(ValueError):
        QuotientSpec.abelian(Z2, [4])
    with pytest.raises(ValueError):
        QuotientSpec.heisenberg(3, 0)


@pytest.mark.parametrize(
    "q",
    [QuotientSpec.heisenberg(3, 1), QuotientSpec.abelian(Z2, [2, 3]), QuotientSpec.abelian(ZxZ3, [4]),
     QuotientSpec.abelian(Z, [1])],
    ids=["H3/3", "Z2/(2,3)", "ZxZ3/4", "trivial"],
)
def test_enumeration_is_the_whole_quotient(q):
    elems = enumerate_quotient(q)
    assert len(elems) == len(set(elems)) == q.order
    assert elems[0].is_identity()


@given(elements_of(H), elements_of(H))
def test_projection_is_a_homomorphism_heisenberg(g, h):
    q = QuotientSpec.heisenberg(3, 1)
    assert project(g * h, q) == project(g, q) * project(h, q)


@given(elements_of(ZxZ3), elements_of(ZxZ3), st.integers(1, 6))
def test_projection_is_a_homomorphism_abelian(g, h, m):
    q = QuotientSpec.abelian(ZxZ3, [m])
    assert project(g * h, q) == project(g, q) * project(h, q)


def test_projection_rejects_foreign_elements():
    with pytest.raises(MismatchedGroup):
        project(HeisenbergElement(1, 0, 0, 3), QuotientSpec.heisenberg(3, 1))
    with pytest.raises(MismatchedGroup):
        project(Z2.generator(0), QuotientSpec.abelian(Z, [3]))


def test_enumeration_cap():
    with pytest.raises(QuotientTooLarge):
        enumerate_quotient(QuotientSpec.heisenberg(3, 3), cap=1000)
    assert HeisenbergGroup(3).order == 27
