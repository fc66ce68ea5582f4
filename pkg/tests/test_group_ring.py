import pytest
from hypothesis import given

from quotient_brown.errors import MismatchedGroup, ParseError
from quotient_brown.group_ring import (
    GroupRingElement,
    GroupRingMatrix,
    format_element,
    format_matrix,
    matrix_star_moment,
    parse_element,
    parse_group,
    parse_matrix,
    star,
    star_moment,
    trace_G,
)
from quotient_brown.groups import AbelianGroupSpec, HeisenbergGroup

from conftest import H, Z, ZxZ3, ring_elements, ring_matrices


@given(ring_elements(H), ring_elements(H), ring_elements(H))
def test_ring_axioms_heisenberg(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert u * (v + w) == u * v + u * w
    assert (u + v) * w == u * w + v * w


@given(ring_elements(H), ring_elements(H))
def test_star_is_an_anti_involution(u, v):
    assert star(u * v) == star(v) * star(u)
    assert star(star(u)) == u


@given(ring_elements(H), ring_elements(H))
def test_trace_is_tracial_and_positive(u, v):
    assert trace_G(u * v) == pytest.approx(trace_G(v * u))
    assert trace_G(u * star(u)) == pytest.approx(sum(abs(c) ** 2 for _, c in u.items()))


def test_a_minus_b_moments():
    u = parse_element("a - b", H)
    assert star_moment(u, "1*") == 2
    assert star_moment(u, "*1") == 2
    assert star_moment(u, "1") == 0
    assert star_moment(u, ["plain", "star"]) == 2


def test_generator_moments_count_balanced_words():
    g = GroupRingElement.basis(Z.generator(0))
    assert star_moment(g, "1*1*") == 1
    assert star_moment(g, "11*") == 0


@given(ring_elements(ZxZ3))
def test_format_parse_round_trip_abelian(u):
    assert parse_element(format_element(u), ZxZ3) == u


@given(ring_elements(H))
def test_format_parse_round_trip_heisenberg(u):
    assert parse_element(format_element(u), H) == u


@given(ring_matrices(Z, 2))
def test_matrix_round_trip(A):
    assert parse_matrix(format_matrix(A), Z) == A


def test_parse_intro_matrix(intro):
    assert intro.n == 2
    g = Z.generator(0)
    assert intro[0, 0] == GroupRingElement(Z, {g**2: 1, g: 3})
    assert intro[1, 1] == GroupRingElement(Z, {g**4: -1, g: 1})
    assert intro.is_integral


def test_parse_variants():
    g = Z.generator(0)
    assert parse_element("t - t^-1", Z) == GroupRingElement(Z, {g: 1, g**-1: -1})
    assert parse_element("2*g^2", Z) == parse_element("2g^2", Z)
    assert parse_element("(0,1)*g", Z) == GroupRingElement(Z, {g: 1j})
    assert parse_element("h1^4", ZxZ3) == parse_element("h1", ZxZ3)
    assert parse_element("a*b", H) == parse_element("c*b*a", H)
    assert not parse_element("0.5*g", Z).is_integral


@pytest.mark.parametrize("text", ["g +", "g^", "[[g, 1], [2]]", "x", "g^1.5", "(1,2"])
def test_parse_errors_carry_position(text):
    with pytest.raises(ParseError) as err:
        parse_matrix(text, Z)
    assert err.value.position >= 0
    assert "position" in str(err.value)


def test_parse_error_lists_expected_tokens():
    with pytest.raises(ParseError) as err:
        parse_element("g +", Z)
    assert "g" in err.value.expected


def test_parse_group():
    assert parse_group("Z") == AbelianGroupSpec(1)
    assert parse_group("Z^2 x Z/3") == AbelianGroupSpec(2, (3,))
    assert parse_group("Z/4") == AbelianGroupSpec(0, (4,))
    assert parse_group("H3") == HeisenbergGroup()
    with pytest.raises(ParseError):
        parse_group("Q")


def test_matrix_operations(intro):
    I = GroupRingMatrix.identity(Z, 2)
    assert intro @ I == intro
    assert intro**2 == intro @ intro
    assert intro.star().star() == intro
    assert intro.trace() == 0
    assert intro.coefficient_l1_rows() == [8.0, 3.0]
    # Tr(A A*) = sum of squared coefficients
    assert (intro @ intro.star()).trace() == pytest.approx(1 + 9 + 16 + 1 + 1 + 1)
    assert matrix_star_moment(intro, "1*") == pytest.approx(29)


def test_mixed_groups_rejected():
    with pytest.raises(MismatchedGroup):
        parse_element("g", Z) + parse_element("a", H)
