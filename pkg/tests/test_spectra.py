import json
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st
from hypothesis.extra import numpy as hnp

from quotient_brown.errors import DimensionTooLarge, GapWarning, NonSquare, NotIntegral
from quotient_brown.quotient_rep import nilpotent_jordan, shift_matrix
from quotient_brown.spectra import (
    AtomicMeasure,
    brown_measure,
    eigenvalue_measure,
    eigenvalues,
    eigenvalues_deflated,
    fk_determinant,
    generalized_kernel_dimension,
    holomorphic_moments,
    kernel_and_power,
    log_fk_determinant,
    luck_product_check,
    match_spectra,
    matrix_rank,
    merge_clusters,
    small_eigenvalue_profile,
    zero_atom_numeric,
    zero_atom_rank,
)


def test_cyclic_shift_gives_cube_roots():
    lam = eigenvalues(shift_matrix(3))
    roots = np.exp(2j * np.pi * np.arange(3) / 3)
    assert match_spectra(lam, roots) < 1e-12


def test_nilpotent_block_has_only_zero():
    assert np.array_equal(eigenvalues(nilpotent_jordan(4)), np.zeros(4))
    assert zero_atom_numeric(nilpotent_jordan(4), 4, tau=1e-12) == 1


def test_corner_perturbation_gives_circle():
    lam = eigenvalues(nilpotent_jordan(4, 1e-8))
    assert np.allclose(np.abs(lam), 1e-2, atol=1e-6)
    assert match_spectra(lam, 1e-2 * 1j ** np.arange(4)) < 1e-6
    assert np.allclose(np.abs(eigenvalues(nilpotent_jordan(2, 1.0))), 1.0)


def test_eigenvalue_errors():
    with pytest.raises(NonSquare):
        eigenvalues(np.ones((2, 3)))
    with pytest.raises(DimensionTooLarge):
        eigenvalues(np.eye(5), max_dim=4)
    with pytest.raises(ValueError):
        eigenvalues(np.array([[np.nan]]))


@given(st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_trace_consistency(dim, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    lam = eigenvalues(M)
    assert lam.size == dim
    assert abs(lam.sum() - np.trace(M)) <= 1e-8 * dim * np.linalg.norm(M, 2)


@given(st.integers(2, 30), st.integers(0, 2**32 - 1))
def test_fk_determinant_is_root_of_abs_det(dim, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(dim, dim)) + 3 * np.eye(dim)
    expected = math.exp(np.linalg.slogdet(M)[1] / dim)
    assert fk_determinant(M) == pytest.approx(expected, rel=1e-8)


def test_fk_determinant_examples():
    assert fk_determinant(np.eye(4)) == pytest.approx(1.0)
    assert fk_determinant(np.diag([2.0, 0.5])) == pytest.approx(1.0)
    assert fk_determinant(nilpotent_jordan(3)) == 0.0
    assert log_fk_determinant(nilpotent_jordan(3)) == -math.inf
    assert fk_determinant(nilpotent_jordan(3), eps=1e-6) > 0
    with pytest.raises(ValueError):
        fk_determinant(np.eye(2), eps=-1)


def test_luck_product_examples():
    assert luck_product_check(shift_matrix(5)) == (pytest.approx(1.0), True)
    assert luck_product_check(np.eye(3)) == (pytest.approx(1.0), True)
    product, passed = luck_product_check(np.array([[2.0, 1.0], [0.0, 0.0]]))
    assert product == pytest.approx(2.0) and passed
    with pytest.raises(NotIntegral):
        luck_product_check(0.5 * np.eye(2))


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_luck_product_of_random_integer_matrices(dim, seed):
    M = np.random.default_rng(seed).integers(-3, 4, size=(dim, dim)).astype(float)
    product, passed = luck_product_check(M, tau=1e-6, power=dim)
    assert passed


@pytest.mark.parametrize("seed, dim, det", [(70578, 4, -1), (10865, 6, -3), (3818, 4, 0)])
def test_luck_product_regressions(seed, dim, det):
    # |det| = 1 with a small eigenvalue; a large power hiding an eigenvalue
    # of modulus 0.14; a simple zero deflated from range(M^dim)
    M = np.random.default_rng(seed).integers(-3, 4, size=(dim, dim)).astype(float)
    assert round(np.linalg.det(M)) == det
    assert kernel_and_power(M, power=dim)[0] == (det == 0)
    assert luck_product_check(M, tau=1e-6, power=dim)[1]


def test_kernel_stops_at_first_plateau():
    D = np.diag([0.0, 1.0, 2.0])
    M = np.block([[nilpotent_jordan(2), np.zeros((2, 3))], [np.zeros((3, 2)), D]])
    assert kernel_and_power(M, power=50) == (3, 2)
    assert generalized_kernel_dimension(np.diag([0.05, 1.0]), power=12) == 0


# ---------------------------------------------------------------------------
# rank and deflation


def _jordan_plus(blocks, nonzero):
    """Block diagonal matrix of nilpotent Jordan blocks and given eigenvalues, conjugated."""
    parts = [nilpotent_jordan(b) for b in blocks] + [np.array([[z]]) for z in nonzero]
    dim = sum(p.shape[0] for p in parts)
    D = np.zeros((dim, dim), dtype=complex)
    i = 0
    for p in parts:
        k = p.shape[0]
        D[i : i + k, i : i + k] = p
        i += k
    rng = np.random.default_rng(dim)
    S = rng.normal(size=(dim, dim)) + np.eye(dim) * 4
    return S @ D @ np.linalg.inv(S)


def test_rank_counts_generalized_kernel():
    M = _jordan_plus([3, 2], [1.0, -2.0, 0.5j])
    assert generalized_kernel_dimension(M, power=3) == 5
    assert generalized_kernel_dimension(M) == 5
    assert kernel_and_power(M)[1] == 3
    assert zero_atom_rank(M, 8, power=3) == Fraction(5, 8)


def test_deflated_eigenvalues_resolve_defective_zero():
    nonzero = [1.0, -2.0, 0.5j]
    M = _jordan_plus([3, 2], nonzero)
    plain = eigenvalues(M)
    assert np.sort(np.abs(plain))[4] > 1e-10  # the plain solve smears the zeros out
    lam = eigenvalues_deflated(M, power=3)
    assert np.count_nonzero(lam == 0) == 5
    assert match_spectra(lam[:3], nonzero) < 1e-10


def test_deflated_without_zeros_is_plain():
    M = np.diag([1.0, 2.0])
    assert match_spectra(eigenvalues_deflated(M), [1, 2]) < 1e-14
    assert np.array_equal(eigenvalues_deflated(np.zeros((3, 3))), np.zeros(3))


def test_matrix_rank_warns_without_gap():
    with pytest.warns(GapWarning):
        assert matrix_rank(np.diag([1.0, 1e-10 * 1.5, 1e-10 * 0.5])) == 2
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert matrix_rank(np.diag([1.0, 1.0, 1e-14])) == 2
        assert matrix_rank(np.zeros((2, 2))) == 0


def test_zero_atom_numeric_validation():
    with pytest.raises(ValueError):
        zero_atom_numeric(np.eye(2), 2, tau=0)


# ---------------------------------------------------------------------------
# measures


def test_eigenvalue_measure_mass():
    mu = eigenvalue_measure(shift_matrix(6), 3)
    assert mu.total_mass * 3 == 6
    assert np.allclose(mu.weights, 1 / 3)
    assert brown_measure(shift_matrix(6)).total_mass == pytest.approx(1.0)


def test_atomic_measure_validation():
    with pytest.raises(ValueError):
        AtomicMeasure([0, 1], [1, -1])
    with pytest.raises(ValueError):
        AtomicMeasure([0], [1], total_mass=2)
    mu = AtomicMeasure.dirac(0.5, 2.0)
    assert mu.mass_in_disk(0, 0.6) == 2.0
    assert mu.normalized().total_mass == 1.0
    with pytest.raises(ValueError):
        mu.locations[0] = 1


atoms = st.lists(
    st.tuples(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
              st.floats(1e-6, 10.0)),
    min_size=1, max_size=20,
)


@given(atoms)
def test_csv_and_json_round_trip(items):
    mu = AtomicMeasure([z for z, _ in items], [w for _, w in items])
    for back in (AtomicMeasure.from_csv(mu.to_csv()), AtomicMeasure.from_dict(json.loads(mu.to_json()))):
        assert np.array_equal(back.locations, mu.locations)
        assert np.array_equal(back.weights, mu.weights)
        assert back.total_mass == pytest.approx(mu.total_mass, rel=1e-15)


def test_csv_header_is_checked():
    with pytest.raises(ValueError):
        AtomicMeasure.from_csv("x,y,w\n0,0,1\n")


def test_moments_of_roots_of_unity():
    mu = brown_measure(shift_matrix(5))
    mom = holomorphic_moments(mu, 6)
    assert np.allclose(mom, [0, 0, 0, 0, 1, 0], atol=1e-12)
    with pytest.raises(ValueError):
        holomorphic_moments(mu, 0)


def test_small_eigenvalue_profile():
    mu = AtomicMeasure([0, 1e-3j, 0.1, 1], [1, 1, 1, 1])
    prof = small_eigenvalue_profile(mu, [0.01, 0.5], tau=1e-6)
    assert prof[0] == pytest.approx(abs(math.log(0.01)))
    assert prof[1] == pytest.approx(2 * abs(math.log(0.5)))


# ---------------------------------------------------------------------------
# matching


@given(hnp.arrays(complex, st.integers(1, 12), elements=st.complex_numbers(max_magnitude=100, allow_nan=False)),
       st.randoms())
def test_matching_is_permutation_invariant(x, rnd):
    y = list(x)
    rnd.shuffle(y)
    assert match_spectra(x, y) == 0.0


def test_matching_size_mismatch():
    with pytest.raises(ValueError):
        match_spectra([1, 2], [1])


def test_merge_clusters():
    lam = np.array([-2 + 3e-8j, -2 - 3e-8j, 1.0, 1.5])
    merged = merge_clusters(lam, 1e-6)
    assert np.allclose(merged[:2], -2, atol=1e-15)
    assert np.array_equal(merged[2:], lam[2:])
    assert np.array_equal(merge_clusters(lam, 0), lam)


@pytest.mark.parametrize("dim", [3, 64, 200])
def test_planted_spectrum_recovery(dim):
    from scipy.stats import unitary_group

    rng = np.random.default_rng(dim)
    lam = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    Q = unitary_group.rvs(dim, random_state=rng)
    M = (Q * lam) @ Q.conj().T
    assert match_spectra(eigenvalues(M), lam) <= 1e-8 * np.linalg.norm(M, 2)
