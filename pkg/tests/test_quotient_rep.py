import itertools

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from quotient_brown.errors import InvalidParams, MismatchedGroup, NotPrime, QuotientTooLarge
from quotient_brown.group_ring import GroupRingElement, parse_element, star
from quotient_brown.groups import QuotientSpec, enumerate_quotient
from quotient_brown.quotient_rep import (
    IrrepSpec,
    apply_irrep,
    heisenberg_irrep,
    irrep_census,
    irrep_parameters,
    matrix_from_bytes,
    matrix_from_csv,
    matrix_to_bytes,
    matrix_to_csv,
    nilpotent_jordan,
    regular_rep_matrix,
    shift_matrix,
)

from conftest import H, Z, Z2, ZxZ3, ring_elements, ring_matrices

H3_MOD3 = QuotientSpec.heisenberg(3, 1)


@pytest.mark.parametrize("m", [1, 2, 5, 8])
def test_generator_acts_as_the_cyclic_shift(m):
    g = GroupRingElement.basis(Z.generator(0))
    assert np.array_equal(regular_rep_matrix(g, QuotientSpec.abelian(Z, [m])), shift_matrix(m))


def test_right_regular_convention():
    # (P_g)[h, h*g] = 1
    g = H.a
    P = regular_rep_matrix(GroupRingElement.basis(g), H3_MOD3)
    elems = enumerate_quotient(H3_MOD3)
    index = {h: i for i, h in enumerate(elems)}
    for h in elems:
        gq = elems[0].group.a
        assert P[index[h], index[h * gq]] == 1
    assert np.array_equal(P.sum(axis=0), np.ones(27))


@given(ring_elements(H), ring_elements(H))
def test_regular_rep_is_multiplicative_heisenberg(u, v):
    Mu, Mv = regular_rep_matrix(u, H3_MOD3), regular_rep_matrix(v, H3_MOD3)
    assert np.allclose(regular_rep_matrix(u * v, H3_MOD3), Mu @ Mv)
    assert np.allclose(regular_rep_matrix(u + v, H3_MOD3), Mu + Mv)


@given(ring_matrices(ZxZ3, 2), ring_matrices(ZxZ3, 2), st.integers(1, 4))
def test_regular_rep_is_multiplicative_matrices(A, B, m):
    q = QuotientSpec.abelian(ZxZ3, [m])
    assert np.allclose(regular_rep_matrix(A @ B, q), regular_rep_matrix(A, q) @ regular_rep_matrix(B, q))


@given(ring_elements(H))
def test_star_is_conjugate_transpose(u):
    assert np.allclose(regular_rep_matrix(star(u), H3_MOD3), regular_rep_matrix(u, H3_MOD3).conj().T)


@given(ring_elements(Z2))
def test_normalized_trace_counts_identity_coefficients(u):
    q = QuotientSpec.abelian(Z2, [3, 4])
    M = regular_rep_matrix(u, q)
    expected = sum(c for g, c in u.items() if g.free_exponents[0] % 3 == 0 and g.free_exponents[1] % 4 == 0)
    assert np.trace(M) / q.order == pytest.approx(expected)


def test_complex_coefficients_give_complex_matrix():
    u = parse_element("(0,1)*g", Z)
    M = regular_rep_matrix(u, QuotientSpec.abelian(Z, [3]))
    assert np.iscomplexobj(M)
    assert np.allclose(M, 1j * shift_matrix(3))


def test_errors():
    with pytest.raises(QuotientTooLarge):
        regular_rep_matrix(parse_element("a", H), QuotientSpec.heisenberg(3, 3))
    with pytest.raises(MismatchedGroup):
        regular_rep_matrix(parse_element("g", Z), H3_MOD3)


def test_nilpotent_jordan():
    M = nilpotent_jordan(4)
    assert np.array_equal(np.linalg.matrix_power(M, 4), np.zeros((4, 4)))
    assert nilpotent_jordan(4, 1e-8)[3, 0] == 1e-8


# ---------------------------------------------------------------------------
# irreducibles


@pytest.mark.parametrize("n", [3, 4, 6, 9])
def test_irrep_relations(n):
    for spec in irrep_parameters(n):
        ra, rb, rc = heisenberg_irrep(spec)
        eye = np.eye(spec.d2)
        assert np.allclose(ra @ rb, rc @ rb @ ra)
        assert np.allclose(np.linalg.matrix_power(ra, n), eye)
        assert np.allclose(np.linalg.matrix_power(rb, n), eye)
        assert np.allclose(np.linalg.matrix_power(rc, n), eye)
        for r in (ra, rb, rc):
            assert np.allclose(r @ r.conj().T, eye)


def _characters(n):
    specs = list(irrep_parameters(n))
    elems = list(itertools.product(range(n), repeat=3))
    chi = np.empty((len(specs), len(elems)), dtype=complex)
    for i, spec in enumerate(specs):
        ra, rb, rc = heisenberg_irrep(spec)
        pa = [np.linalg.matrix_power(ra, e) for e in range(n)]
        pb = [np.diag(rb) ** e for e in range(n)]
        c = rc[0, 0]
        for j, (x, y, z) in enumerate(elems):
            chi[i, j] = np.trace(pa[x] * pb[y][None, :]) * c ** ((z - x * y) % n)
    return specs, chi


@pytest.mark.parametrize("n", [3, 4, 9])
def test_irreps_are_a_complete_inequivalent_family(n):
    specs, chi = _characters(n)
    assert sum(s.d2**2 for s in specs) == n**3
    gram = chi @ chi.conj().T / n**3
    assert np.allclose(gram, np.eye(len(specs)), atol=1e-9)


@pytest.mark.parametrize("p,m", [(3, 1), (3, 2), (5, 1), (2, 2)])
def test_census_matches_enumeration(p, m):
    n = p**m
    counts = {}
    for spec in irrep_parameters(n):
        counts[spec.d2] = counts.get(spec.d2, 0) + 1
    census = irrep_census(p, m)
    assert {e.dimension: e.count for e in census} == counts
    assert sum(e.count * e.dimension * e.multiplicity for e in census) == n**3


def test_census_rejects_composites():
    with pytest.raises(NotPrime):
        irrep_census(9, 1)


@given(ring_elements(H, 3))
def test_regular_rep_decomposes_into_irreps(u):
    q = H3_MOD3
    ev = np.linalg.eigvals(regular_rep_matrix(u, q))
    blocks = []
    for spec in irrep_parameters(3):
        blocks += list(np.linalg.eigvals(apply_irrep(u, spec))) * spec.d2
    # compare power sums, which are insensitive to the conditioning of repeated eigenvalues
    for j in range(1, 4):
        assert np.sum(ev**j) == pytest.approx(np.sum(np.array(blocks) ** j), abs=1e-6 * (1 + np.sum(np.abs(ev) ** j)))


def test_apply_irrep_checks_modulus():
    u = GroupRingElement.basis(H.a)
    assert apply_irrep(u, IrrepSpec(3, 1)).shape == (3, 3)
    from quotient_brown.groups import HeisenbergGroup

    u9 = GroupRingElement.basis(HeisenbergGroup(9).a)
    assert apply_irrep(u9, IrrepSpec(3, 1)).shape == (3, 3)
    with pytest.raises(MismatchedGroup):
        apply_irrep(GroupRingElement.basis(HeisenbergGroup(3).a), IrrepSpec(9, 1))


@pytest.mark.parametrize("args", [(3, 3), (3, -1), (3, 0, 3, 0), (9, 3, 0, 3), (0, 0)])
def test_invalid_irrep_params(args):
    with pytest.raises(InvalidParams):
        IrrepSpec(*args)


# ---------------------------------------------------------------------------
# export

matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e6),
                       min_size=n * n, max_size=n * n).map(lambda v: np.array(v).reshape(n, n))
)


@given(matrices)
def test_csv_round_trip(M):
    assert np.array_equal(matrix_from_csv(matrix_to_csv(M)), M)


@given(matrices)
def test_bytes_round_trip(M):
    data = matrix_to_bytes(M)
    assert len(data) == 16 + 16 * M.size
    assert np.array_equal(matrix_from_bytes(data), M)


def test_bytes_truncated():
    with pytest.raises(ValueError):
        matrix_from_bytes(matrix_to_bytes(np.eye(3))[:-16])
