"""Tests for Gram factorization, admissible functions and shadows.

A sample with a parallel pair |2z> = 2|z> in the Klauder space has an exact
one-dimensional null space, which the admissibility and shadow tests use.
"""

import sys

import numpy as np
import pytest

import kernel_spaces
import quantum_realization as qr
from errors import (DimensionError, NotAdmissibleError, NotPositiveError,
                    NotShadowError)
from models import FinitePoint, KlauderPoint, SampleSet


def _parallel_sample():
    space = kernel_spaces.klauder_space(1)
    z1 = KlauderPoint(-0.1 + 0j, (0.4 + 0.1j,))
    z2 = KlauderPoint(-0.2 + 0j, (-0.3 + 0.5j,))
    return SampleSet(space, [z1, z2, space.scalar_multiply(2.0, z1)])


# ==========================================================================
# Factorization
# ==========================================================================
def test_factor_reproduces_gram():
    rng = np.random.default_rng(0)
    sample = kernel_spaces.random_sample(kernel_spaces.klauder_space(2), 6, rng)
    fact = qr.factor_gram(sample)
    assert fact.rank == 6, f"6 distinct Glauber states are independent, rank {fact.rank}"
    defect = np.linalg.norm(fact.R.conj().T @ fact.R - fact.G)
    assert defect < 1e-12, f"R* R should reproduce G, defect {defect:.3e}"
    assert np.allclose(fact.R @ fact.R_pinv, np.eye(fact.rank), atol=1e-10), "R_pinv is a right inverse"
    print("  PASS: test_factor_reproduces_gram")


def test_parallel_pair_drops_rank():
    fact = qr.factor_gram(_parallel_sample())
    assert fact.n == 3 and fact.rank == 2, f"parallel pair leaves rank 2, got {fact.rank}"
    assert fact.null_basis.shape == (3, 1), f"one null vector expected, got {fact.null_basis.shape}"
    print("  PASS: test_parallel_pair_drops_rank")


def test_indefinite_gram_is_rejected():
    space = kernel_spaces.finite_space([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(NotPositiveError):
        qr.factor_gram(SampleSet(space, [FinitePoint(0), FinitePoint(1)]))
    print("  PASS: test_indefinite_gram_is_rejected")


# ==========================================================================
# Admissible functions
# ==========================================================================
def test_coherent_function_is_admissible():
    fact = qr.factor_gram(_parallel_sample())
    f = fact.G[:, 0]
    assert qr.is_admissible(fact, f), "k -> <z_k|z_0> is admissible"
    psi = qr.vector_from_admissible(fact, f)
    assert np.allclose(fact.R.conj().T @ psi, f, atol=1e-10), "psi must reproduce f"
    print("  PASS: test_coherent_function_is_admissible")


def test_inconsistent_function_is_not_admissible():
    fact = qr.factor_gram(_parallel_sample())
    f = np.array([1.0, 0.0, 0.0], dtype=complex)
    assert qr.admissibility_defect(fact, f) > 0.1, "f(2z) must equal 2 f(z) to be admissible"
    with pytest.raises(NotAdmissibleError):
        qr.vector_from_admissible(fact, qr.FunctionOnSample(f))
    with pytest.raises(DimensionError):
        qr.admissibility_defect(fact, np.ones(2))
    print("  PASS: test_inconsistent_function_is_not_admissible")


def test_admissibility_on_duplicated_and_full_rank_samples():
    space = kernel_spaces.klauder_space(1)
    z = KlauderPoint(-0.125 + 0j, (0.5 + 0j,))
    w = KlauderPoint(-0.125 + 0j, (-0.5j,))
    fact = qr.factor_gram(SampleSet(space, [z, w, z]))
    assert fact.rank == 2, f"a repeated point adds no direction, rank {fact.rank}"
    assert qr.is_admissible(fact, np.array([1.5 - 1j, 0.25, 1.5 - 1j])), "equal values on the repeat are admissible"
    assert not qr.is_admissible(fact, np.array([1.5 - 1j, 0.25, 1.0])), "different values on the repeat are not"

    rng = np.random.default_rng(2)
    fact = qr.factor_gram(kernel_spaces.separated_sample(kernel_spaces.klauder_space(2), 8, rng))
    assert fact.rank == 8 and fact.null_basis.shape[1] == 0, f"separated sample has full rank, got {fact.rank}"
    for _ in range(100):
        f = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        assert qr.is_admissible(fact, f), "every function is admissible on a full-rank sample"
        psi = qr.vector_from_admissible(fact, f)
        assert np.allclose(fact.R.conj().T @ psi, f, atol=1e-9), "psi must reproduce f"
    print("  PASS: test_admissibility_on_duplicated_and_full_rank_samples")


# ==========================================================================
# Shadows
# ==========================================================================
def test_gram_is_shadow_of_identity():
    fact = qr.factor_gram(_parallel_sample())
    op = qr.operator_from_kernel(fact, fact.G)
    assert np.allclose(op.M, np.eye(fact.rank), atol=1e-10), "shadow G belongs to the identity"
    back = op.shadow().X
    assert np.allclose(back, fact.G, atol=1e-10), "shadow of the recovered operator is G"
    print("  PASS: test_gram_is_shadow_of_identity")


def test_shadow_round_trip_of_random_operator():
    rng = np.random.default_rng(1)
    sample = kernel_spaces.random_sample(kernel_spaces.klauder_space(1), 4, rng)
    fact = qr.factor_gram(sample)
    M = rng.standard_normal((fact.rank, fact.rank)) + 1j * rng.standard_normal((fact.rank, fact.rank))
    X = qr.shadow_of_operator(fact, M)
    op = qr.operator_from_kernel(fact, X)
    assert np.allclose(op.M, M, atol=1e-8), "operator_from_kernel inverts shadow_of_operator"
    adj = op.adjoint().shadow().X
    assert np.allclose(adj, X.X.conj().T, atol=1e-8), "shadow of M* is the conjugate transpose"
    print("  PASS: test_shadow_round_trip_of_random_operator")


def test_identity_is_exact_on_large_samples():
    spaces = [kernel_spaces.szego_space(), kernel_spaces.moebius_space(),
              kernel_spaces.klauder_space(1), kernel_spaces.klauder_space(2)]
    for space in spaces:
        for seed in range(5):
            sample = kernel_spaces.random_sample(space, 20, np.random.default_rng(seed))
            fact = qr.factor_gram(sample)
            op = qr.operator_from_kernel(fact, kernel_spaces.gram_matrix(sample))
            defect = np.linalg.norm(op.M - np.eye(fact.rank))
            assert defect <= 1e-8, (f"{space.kind} seed {seed}: rank {fact.rank}, "
                                    f"|M - I| = {defect:.3e}")
            assert op.residual <= qr.SHADOW_TOL * (1.0 + np.linalg.norm(fact.G)), \
                f"{space.kind} seed {seed}: shadow residual {op.residual:.3e}"
    print("  PASS: test_identity_is_exact_on_large_samples")


def test_kernel_off_the_span_is_not_a_shadow():
    fact = qr.factor_gram(_parallel_sample())
    with pytest.raises(NotShadowError):
        qr.operator_from_kernel(fact, np.eye(3))
    with pytest.raises(DimensionError):
        qr.shadow_of_operator(fact, np.eye(3))
    print("  PASS: test_kernel_off_the_span_is_not_a_shadow")


# ==========================================================================
# Runner
# ==========================================================================
def run_all():
    print("Running quantum realization tests...\n")
    tests = [
        test_factor_reproduces_gram,
        test_parallel_pair_drops_rank,
        test_indefinite_gram_is_rejected,
        test_coherent_function_is_admissible,
        test_inconsistent_function_is_not_admissible,
        test_admissibility_on_duplicated_and_full_rank_samples,
        test_gram_is_shadow_of_identity,
        test_shadow_round_trip_of_random_operator,
        test_identity_is_exact_on_large_samples,
        test_kernel_off_the_span_is_not_a_shadow,
    ]
    passed = 0
    failed = 0
    for test in tests:
        try:
            test()
            passed += 1
        except AssertionError as e:
            print(f"  FAIL: {test.__name__}: {e}")
            failed += 1
        except Exception as e:
            print(f"  ERROR: {test.__name__}: {type(e).__name__}: {e}")
            failed += 1

    print(f"\n{'='*50}")
    print(f"Results: {passed} passed, {failed} failed out of {len(tests)} tests")
    if failed == 0:
        print("All tests passed!")
    return failed == 0


if __name__ == '__main__':
    success = run_all()
    sys.exit(0 if success else 1)
