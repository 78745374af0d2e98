"""Tests for the truncated Fock space: basis layout, ladder operators,
coherent vectors, the oscillator representation and the Gaussian
realization in one mode.
"""

import math
import sys

import numpy as np
import pytest

import fock_space as fs
import kernel_spaces
import oscillator_algebra as osc
from errors import DegreeError, DimensionError, QuadratureError, TruncationWarning
from models import KlauderPoint, glauber_point


# ==========================================================================
# Basis and ladder operators
# ==========================================================================
def test_basis_order_and_size():
    basis = fs.fock_basis(2, 12)
    assert basis.size == math.comb(14, 2), f"d=2, cutoff 12 has 91 states, got {basis.size}"
    first = [mi.alpha for mi in basis.indices[:6]]
    assert first == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)], f"unexpected order {first}"
    assert basis.block(2) == slice(3, 6), f"degree 2 block, got {basis.block(2)}"
    with pytest.raises(DegreeError):
        basis.index_of((7, 6))
    with pytest.raises(DimensionError):
        fs.fock_basis(0, 4)
    print("  PASS: test_basis_order_and_size")


def test_ladder_action():
    a = fs.annihilator(1, 1, 5)
    v = fs.basis_vector(1, 5, (3,))
    lowered = a @ v
    assert abs(lowered.coeffs[2] - math.sqrt(3)) < 1e-15, "a|3> = sqrt(3)|2>"
    top = fs.creator(1, 1, 5) @ fs.basis_vector(1, 5, (5,))
    assert top.norm() == 0.0, "creation on the top degree leaves the truncation"
    with pytest.raises(IndexError):
        fs.annihilator(0, 1, 5)
    print("  PASS: test_ladder_action")


def test_canonical_commutation_relations():
    for d, cutoff in ((1, 30), (2, 12), (3, 6)):
        report = fs.ccr_check(d, cutoff)
        assert report['passed'], f"CCR failed for d={d}, cutoff {cutoff}: {report}"
    defect = fs.smeared_commutator_defect([0.3 + 0.1j, -0.2j], [0.5, 0.25 + 0.5j], 10, 9)
    assert defect < 1e-12, f"[p*a, a*q] = p*q below the cutoff, defect {defect:.3e}"
    with pytest.raises(DegreeError):
        fs.smeared_commutator_defect([1.0], [1.0], 10, 10)
    print("  PASS: test_canonical_commutation_relations")


# ==========================================================================
# Coherent vectors
# ==========================================================================
def test_glauber_overlap_within_tail():
    rng = np.random.default_rng(0)
    for d, cutoff in ((1, 30), (2, 12)):
        space = kernel_spaces.klauder_space(d)
        points = kernel_spaces.random_points(space, 20, rng)
        for z, w in zip(points[::2], points[1::2]):
            report = fs.glauber_overlap(z.zeta, w.zeta, cutoff)
            assert report['passed'], f"truncation error above the tail bound: {report}"
            if d == 1:
                assert report['error'] <= 1e-10, f"d=1, cutoff 30 overlap error {report['error']:.3e}"
    print("  PASS: test_glauber_overlap_within_tail")


def test_coherent_vector_matches_kernel():
    space = kernel_spaces.klauder_space(1)
    z = KlauderPoint(0.1 - 0.3j, (0.4 + 0.2j,))
    w = KlauderPoint(-0.2 + 0.1j, (-0.5 + 0.1j,))
    value = fs.matrix_element(fs.identity(1, 30), z, w)
    exact = kernel_spaces.eval_kernel(space, z, w)
    assert abs(value - exact) < 1e-12 * abs(exact), f"<z|w> = {value}, kernel gives {exact}"
    print("  PASS: test_coherent_vector_matches_kernel")


def test_large_argument_warns():
    with pytest.warns(TruncationWarning):
        fs.coherent_vector(glauber_point([3.0]), 20)
    assert fs.exp_tail(0.0, 5) == 0.0
    assert abs(fs.exp_tail(1.0, 0) - (math.e - 1.0)) < 1e-14, "sum_{m >= 1} 1/m! = e - 1"
    print("  PASS: test_large_argument_warns")


# ==========================================================================
# Oscillator representation
# ==========================================================================
def test_symmetric_power_is_multiplicative():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    B = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    A, B = 0.5 * A / np.linalg.norm(A, 2), 0.5 * B / np.linalg.norm(B, 2)
    lhs = fs.sym_power_operator(A @ B, 8).matrix
    rhs = (fs.sym_power_operator(A, 8) @ fs.sym_power_operator(B, 8)).matrix
    assert np.allclose(lhs, rhs, atol=1e-12), "Lambda(AB) = Lambda(A) Lambda(B)"

    zeta = np.array([0.3 + 0.1j, -0.2 + 0.4j])
    image = fs.sym_power_operator(A, 8) @ fs.glauber_point_vector(zeta, 8)
    assert np.allclose(image.coeffs, fs.glauber_point_vector(A @ zeta, 8).coeffs, atol=1e-12), \
        "Lambda(A)|zeta> = |A zeta> degree by degree"
    with pytest.raises(DimensionError):
        fs.sym_power_operator(np.ones((2, 3)), 4)
    print("  PASS: test_symmetric_power_is_multiplicative")


def test_gamma_of_identity():
    gamma = fs.gamma_osc(osc.identity(2), 6)
    assert np.allclose(gamma.matrix, np.eye(gamma.basis.size), atol=1e-14), "Gamma(1) = 1"
    print("  PASS: test_gamma_of_identity")


def test_gamma_acts_on_coherent_vectors():
    rng = np.random.default_rng(2)
    for d, cutoff in ((1, 30), (2, 12)):
        space = kernel_spaces.klauder_space(d)
        for _ in range(5):
            x = osc.random_element(rng, d, 0.5)
            z = kernel_spaces.random_points(space, 1, rng, 0.5)[0]
            report = fs.gamma_action_check(x, z, cutoff)
            assert report['passed'], f"Gamma(x)|z> != |xz> for d={d}: {report}"
    print("  PASS: test_gamma_acts_on_coherent_vectors")


def test_gamma_homomorphism_below_cutoff():
    rng = np.random.default_rng(3)
    x = osc.random_element(rng, 1, 0.5)
    y = osc.random_element(rng, 1, 0.5)
    defect = fs.gamma_homomorphism_defect(x, y, 30, 5)
    assert defect < 1e-8, f"Gamma(xy) = Gamma(x) Gamma(y) on low degrees, defect {defect:.3e}"
    print("  PASS: test_gamma_homomorphism_below_cutoff")


# ==========================================================================
# Weyl relations, normal ordering
# ==========================================================================
def test_weyl_relation():
    report = fs.weyl_check([0.5], [0.5], 40, 10)
    assert report['passed'], f"Weyl relation failed: {report}"
    assert abs(report['vacuum_expectation'] - report['expected_vacuum']) < 1e-8, \
        "<0|e^{p*a} e^{a*q}|0> = e^{p*q}"
    report = fs.weyl_check([0.2j, 0.3], [0.1, -0.4j], 12, 3)
    assert report['passed'], f"two-mode Weyl relation failed: {report}"
    with pytest.raises(DegreeError):
        fs.weyl_check([0.5], [0.5], 20, 11)
    print("  PASS: test_weyl_relation")


def test_normal_ordered_monomials_are_independent():
    report = fs.normal_order_rank(1, 6)
    assert report['passed'] and report['monomials'] == 16, f"16 independent monomials expected: {report}"
    with pytest.raises(DegreeError):
        fs.normal_ordered_monomial((4,), (3,), 6)
    print("  PASS: test_normal_ordered_monomials_are_independent")


def test_normal_ordered_matrix_elements():
    rng = np.random.default_rng(6)
    for d, cutoff in ((1, 30), (2, 20)):
        space = kernel_spaces.klauder_space(d)
        zetas = [z.zeta for z in kernel_spaces.random_points(space, 4, rng, 1.0 / math.sqrt(d))]
        pairs = [(glauber_point(zetas[0]), glauber_point(zetas[1])),
                 (glauber_point(zetas[2]), glauber_point(zetas[3]))]
        exponents = [mi.alpha for mi in fs.fock_basis(d, 4).indices]
        for beta in exponents:
            for alpha in exponents:
                if sum(beta) + sum(alpha) > 4:
                    continue
                monomial = fs.normal_ordered_monomial(beta, alpha, cutoff)
                for z, w in pairs:
                    zeta, zeta2 = np.array(z.zeta), np.array(w.zeta)
                    expected = (np.prod(zeta.conj() ** np.array(beta)) * np.prod(zeta2 ** np.array(alpha))
                                * np.exp(np.vdot(zeta, zeta2)))
                    value = fs.matrix_element(monomial, z, w)
                    assert abs(value - expected) <= 1e-8 * max(1.0, abs(expected)), \
                        f"d={d} beta={beta} alpha={alpha}: {value} != {expected}"
    print("  PASS: test_normal_ordered_matrix_elements")


# ==========================================================================
# Gaussian realization
# ==========================================================================
def test_gauss_hermite_reproduces_kernel():
    rng = np.random.default_rng(4)
    space = kernel_spaces.klauder_space(1)
    points = kernel_spaces.random_points(space, 20, rng)
    for z, w in zip(points[::2], points[1::2]):
        value = fs.gauss_hermite_overlap(z, w)
        exact = kernel_spaces.eval_kernel(space, z, w)
        assert abs(value - exact) <= 1e-8 * abs(exact), f"quadrature {value} vs kernel {exact}"
    with pytest.raises(QuadratureError):
        fs.gauss_hermite_overlap(points[0], points[1], nodes=8)
    two = KlauderPoint(0j, (0j, 0j))
    with pytest.raises(DimensionError):
        fs.gauss_hermite_overlap(two, two)
    print("  PASS: test_gauss_hermite_reproduces_kernel")


def test_time_frequency_point():
    tau, omega = 0.7, -1.3
    t = np.linspace(-3.0, 3.0, 13)
    values = fs.gaussian_coherent_function(fs.time_frequency_point(tau, omega), t)
    expected = np.exp(1j * omega * t - 0.5 * (t - tau) ** 2)
    assert np.allclose(values, expected, atol=1e-13), "f(t) = e^{i omega t} e^{-(t - tau)^2 / 2}"
    print("  PASS: test_time_frequency_point")


# ==========================================================================
# Runner
# ==========================================================================
def run_all():
    print("Running Fock space tests...\n")
    tests = [
        test_basis_order_and_size,
        test_ladder_action,
        test_canonical_commutation_relations,
        test_glauber_overlap_within_tail,
        test_coherent_vector_matches_kernel,
        test_large_argument_warns,
        test_symmetric_power_is_multiplicative,
        test_gamma_of_identity,
        test_gamma_acts_on_coherent_vectors,
        test_gamma_homomorphism_below_cutoff,
        test_weyl_relation,
        test_normal_ordered_monomials_are_independent,
        test_normal_ordered_matrix_elements,
        test_gauss_hermite_reproduces_kernel,
        test_time_frequency_point,
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
