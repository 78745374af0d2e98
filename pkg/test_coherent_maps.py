"""Tests for coherent maps and their quantization on orbit samples.

Orbits are kept small (three or four base points, depth one). Checks repeated
over many seeds start from separated samples so their Gram matrices keep full
numerical rank; eps_rank is lowered to 1e-13 where random orbits are factored.
"""

import sys

import numpy as np
import pytest

import coherent_maps as cm
import fock_space as fs
import kernel_spaces
import oscillator_algebra as osc
from errors import (DomainError, IllConditionedError, InvalidMapError,
                    MissingAdjointError, NotProjectiveError, NotShadowError,
                    OrbitNotClosedError)
from models import IDENTITY_MAP, EmbeddedPoint, KlauderPoint, MapSpec, MultiplierSpec, SampleSet

WRONG_ADJOINT_MATRIX = np.array([[2.0, 0.3], [0.1j, 0.2]])


def _klauder_sample(count, seed, dim=1, radius=0.8):
    space = kernel_spaces.klauder_space(dim)
    return kernel_spaces.random_sample(space, count, np.random.default_rng(seed), radius)


def _circle_sample(count=5, radius=0.8):
    space = kernel_spaces.klauder_space(1)
    points = []
    for k in range(count):
        zeta = radius * np.exp(2j * np.pi * k / count)
        points.append(KlauderPoint(complex(-0.5 * radius ** 2), (complex(zeta),)))
    return SampleSet(space, points)


def _zeta_kernel(z, w):
    return 1.0 + sum(a.conjugate() * b for a, b in zip(z.zeta, w.zeta))


# ==========================================================================
# Moebius maps
# ==========================================================================
def test_gu11_sigma_is_inverse():
    rng = np.random.default_rng(0)
    for _ in range(10):
        U = cm.random_gu11(rng)
        assert cm.is_gu11(U), f"random_gu11 left GU(1,1): {cm.moebius_invariants(U)}"
        assert cm.in_moebius_semigroup(U), "GU(1,1) lies on the semigroup boundary"
        assert np.allclose(cm.moebius_sigma(U), np.linalg.inv(U), atol=1e-12), "U^sigma = U^-1"
    print("  PASS: test_gu11_sigma_is_inverse")


def test_moebius_coherence_and_wrong_adjoint():
    space = kernel_spaces.moebius_space()
    sample = kernel_spaces.random_sample(space, 8, np.random.default_rng(0))

    good = cm.check_coherence(space, cm.moebius_map(WRONG_ADJOINT_MATRIX), sample)
    assert good['passed'], f"A^sigma is the adjoint of A: {good}"

    wrong = cm.moebius_map(WRONG_ADJOINT_MATRIX, adjoint_matrix=WRONG_ADJOINT_MATRIX.conj().T)
    bad = cm.check_coherence(space, wrong, sample)
    assert not bad['passed'], "the conjugate transpose is not the Moebius adjoint"
    assert bad['max_residual'] > 1e-3, f"residual should be large, got {bad['max_residual']}"
    print("  PASS: test_moebius_coherence_and_wrong_adjoint")


def test_invalid_moebius_matrix():
    with pytest.raises(InvalidMapError):
        cm.moebius_map([[0.1, 0.0], [0.0, 1.0]])
    with pytest.raises(InvalidMapError):
        cm.moebius_map(np.eye(3))
    print("  PASS: test_invalid_moebius_matrix")


def test_moebius_homomorphism_and_unitarity():
    space = kernel_spaces.moebius_space()
    for seed in range(10):
        rng = np.random.default_rng(seed)
        base = kernel_spaces.separated_sample(space, 4, rng)
        a = cm.moebius_map(cm.random_moebius_matrix(rng), label='A')
        b = cm.moebius_map(cm.random_moebius_matrix(rng), label='B')
        orbit = cm.build_orbit(base, [b, cm.compose(a, b)], depth=1)
        assert len(orbit.closed_points) == 12, \
            f"seed {seed}: 4 base points and two images each, got {len(orbit.closed_points)}"
        report = cm.verify_homomorphism(orbit, a, b)
        assert report['passed'], f"seed {seed}: Gamma(AB) = Gamma(A) Gamma(B) failed: {report}"

        u = cm.moebius_map(cm.random_gu11(rng), label='U')
        assert u.inverse is not None, "GU(1,1) maps are invertible in the semigroup"
        unitary = cm.verify_unitary(cm.build_orbit(base, [u], depth=1), u)
        assert unitary['passed'], f"seed {seed}: GU(1,1) acts unitarily: {unitary}"
    print("  PASS: test_moebius_homomorphism_and_unitarity")


# ==========================================================================
# Quantization
# ==========================================================================
def test_scalar_quantization():
    rng = np.random.default_rng(3)
    for space, c, expected in ((kernel_spaces.klauder_space(1), 2.0, 2.0),
                               (kernel_spaces.moebius_space(), 2.0, 0.5)):
        base = kernel_spaces.random_sample(space, 4, rng, 0.8 if space.kind == 'klauder' else None)
        spec = cm.scalar_map(space, c)
        orbit = cm.build_orbit(base, [spec], depth=1, eps_rank=1e-13)
        gamma = cm.quantize(orbit, spec)
        assert np.allclose(gamma.M, expected * np.eye(orbit.factorization.rank), atol=1e-6), \
            f"scaling by {c} on {space.kind} quantizes to {expected} times the identity"
    print("  PASS: test_scalar_quantization")


def test_quantize_certifies_shadow():
    rng = np.random.default_rng(4)
    base = _klauder_sample(3, 5)
    spec = cm.klauder_map(osc.random_element(rng, 1))
    orbit = cm.build_orbit(base, [spec], depth=1)
    gamma = cm.quantize(orbit, spec)
    assert gamma.residual <= cm.QUANTIZE_TOL, f"fit residual {gamma.residual:.3e}"

    R, G = orbit.factorization.R, orbit.factorization.G
    for k in gamma.support:
        image = orbit.lookup(spec(orbit.closed_points.points[k]))
        lhs = R.conj().T @ gamma.M @ R[:, k]
        assert np.allclose(lhs, G[:, image], atol=1e-8), f"<z|Gamma(A)|z_{k}> != K(z, A z_{k})"
    print("  PASS: test_quantize_certifies_shadow")


def test_orbit_without_images_is_not_closed():
    base = _klauder_sample(3, 6)
    spec = cm.klauder_map(osc.random_element(np.random.default_rng(6), 1))
    orbit = cm.build_orbit(base, [], depth=1)
    with pytest.raises(OrbitNotClosedError):
        cm.quantize(orbit, spec)
    print("  PASS: test_orbit_without_images_is_not_closed")


def test_klauder_homomorphism():
    rng = np.random.default_rng(7)
    base = _klauder_sample(3, 7)
    x = cm.klauder_map(osc.random_element(rng, 1), label='x')
    y = cm.klauder_map(osc.random_element(rng, 1), label='y')
    orbit = cm.build_orbit(base, [y, cm.compose(x, y)], depth=1, eps_rank=1e-13)
    report = cm.verify_homomorphism(orbit, x, y)
    assert report['passed'], f"Gamma(xy) = Gamma(x) Gamma(y) failed: {report}"
    assert report['points'] >= 3, f"every base point is determined, got {report['points']}"
    print("  PASS: test_klauder_homomorphism")


def test_heisenberg_pair_homomorphism():
    w1 = osc.HeisenbergElement(0.0, np.array([1.0 + 0j]))
    w2 = osc.HeisenbergElement(0.0, np.array([1j]))
    product = osc.heisenberg_multiply(w1, w2)
    assert product.lam == 2.0 and product.q[0] == 1 + 1j, f"W_0(1) W_0(i) = W_2(1+i), got {product}"

    x = cm.klauder_map(osc.heisenberg_embed(w1), label='W(1)')
    y = cm.klauder_map(osc.heisenberg_embed(w2), label='W(i)')
    xy = cm.klauder_map(osc.heisenberg_embed(product), label='W_2(1+i)')
    space = kernel_spaces.klauder_space(1)
    base = SampleSet(space, [KlauderPoint(0j, (0j,)), KlauderPoint(-2 + 0j, (2 + 0j,)),
                             KlauderPoint(-2 + 0j, (-2j,))])
    orbit = cm.build_orbit(base, [y, xy], depth=1)
    assert len(orbit.closed_points) == 9, f"three base points and two images each, got {len(orbit.closed_points)}"
    report = cm.verify_homomorphism(orbit, x, y, product=xy)
    assert report['passed'] and report['points'] == 3, f"group law product is Gamma(x) Gamma(y): {report}"
    print("  PASS: test_heisenberg_pair_homomorphism")


def test_unitary_and_non_unitary_elements():
    space = kernel_spaces.klauder_space(1)
    for seed in range(10):
        rng = np.random.default_rng(100 + seed)
        base = kernel_spaces.separated_sample(space, 3, rng)
        u = cm.klauder_map(osc.embed_unitary(osc.random_unitary_element(rng, 1)), label='U')
        report = cm.verify_unitary(cm.build_orbit(base, [u], depth=1), u)
        assert report['passed'], f"seed {seed}: unitary element should act unitarily: {report}"

    base = _klauder_sample(3, 8)
    shift = osc.OscElement(0.0, [0.0], [0.25], [[1.0]])
    x = cm.klauder_map(shift, label='X')
    report = cm.verify_unitary(cm.build_orbit(base, [x], depth=1), x)
    assert not report['passed'], f"a bare translation is not unitary: {report}"
    assert report['kernel_residual'] > 1e-3, f"kernel residual too small: {report}"
    print("  PASS: test_unitary_and_non_unitary_elements")


def test_adjoint_exchange():
    rng = np.random.default_rng(9)
    base = _klauder_sample(3, 9)
    spec = cm.klauder_map(osc.random_element(rng, 1), label='A')
    orbit = cm.build_orbit(base, [spec, cm.adjoint_map(spec)], depth=1, eps_rank=1e-13)
    report = cm.verify_adjoint_exchange(orbit, spec)
    assert report['passed'], f"Gamma(A)* = Gamma(A*) failed: {report}"
    print("  PASS: test_adjoint_exchange")


# ==========================================================================
# Composition, adjoints, inverses
# ==========================================================================
def test_composition_is_coherent():
    rng = np.random.default_rng(10)
    sample = _klauder_sample(5, 10, dim=2)
    x = cm.klauder_map(osc.random_element(rng, 2))
    y = cm.klauder_map(osc.random_element(rng, 2))
    report = cm.check_coherence(sample.space, cm.compose(x, y), sample)
    assert report['passed'], f"composition of coherent maps is coherent: {report}"
    report = cm.check_strong_homogeneity(sample.space, x, sample, kernel_spaces.random_scalars(rng, 3))
    assert report['passed'], f"oscillator maps commute with scaling: {report}"
    print("  PASS: test_composition_is_coherent")


def test_missing_adjoint_and_inverse():
    bare = MapSpec(forward=lambda z: z, label='bare')
    with pytest.raises(MissingAdjointError):
        cm.adjoint_map(bare)
    with pytest.raises(MissingAdjointError):
        cm.compose(IDENTITY_MAP, bare, require_adjoint=True)
    assert cm.compose(IDENTITY_MAP, bare).adjoint is None, "adjoint is dropped without require_adjoint"
    with pytest.raises(InvalidMapError):
        cm.inverse_map(bare)

    singular = cm.klauder_map(osc.OscElement(0.0, [0.0], [0.1], [[0.0]]))
    assert singular.inverse is None, "A = 0 has no inverse"
    with pytest.raises(NotProjectiveError):
        cm.check_strong_homogeneity(kernel_spaces.szego_space(), IDENTITY_MAP, [], [2.0])
    print("  PASS: test_missing_adjoint_and_inverse")


# ==========================================================================
# Separable maps and multipliers
# ==========================================================================
def test_separable_algebra():
    sample = _klauder_sample(4, 11)
    space = sample.space
    s = kernel_spaces.scalar_separable(space, 1.5 + 0.5j)
    t = kernel_spaces.scalar_separable(space, -0.7j)
    for sep in (s, cm.compose_separable(s, t), cm.adjoint_separable(s), cm.inverse_separable(t)):
        report = cm.check_separable(space, sep, sample)
        assert report['passed'], f"{sep.label} should be separable with its chi: {report}"
    assert abs(cm.compose_separable(s, t).chi - (1.5 + 0.5j) * -0.7j) < 1e-15

    wrong = cm.check_separable(space, cm.SeparableSpec(alpha=s.alpha, chi=1.0), sample)
    assert not wrong['passed'], "chi = 1 is wrong for scaling by 1.5 + 0.5i"
    print("  PASS: test_separable_algebra")


def test_multiplier_on_parallel_pair():
    rng = np.random.default_rng(12)
    base = _klauder_sample(3, 12)
    space = base.space
    sample = SampleSet(space, list(base) + [space.scalar_multiply(2.0, base.points[0])])
    u = cm.klauder_map(osc.embed_unitary(osc.random_unitary_element(rng, 1)))

    report = cm.check_multiplier(space, MultiplierSpec(lambda z: 1.0, u), sample)
    assert report['parallel_pairs'] == 1, f"one parallel pair expected: {report}"
    assert report['passed'], f"constant multiplier is consistent: {report}"

    report = cm.check_multiplier(space, MultiplierSpec(lambda z: z.z0, u), sample)
    assert not report['passed'], "m(z) = z0 differs on parallel states"
    print("  PASS: test_multiplier_on_parallel_pair")


def test_multiplier_quantization_moves_points():
    rng = np.random.default_rng(16)
    base = kernel_spaces.separated_sample(kernel_spaces.klauder_space(1), 4, rng)
    u = cm.klauder_map(osc.embed_unitary(osc.random_unitary_element(rng, 1)), label='U')
    orbit = cm.build_orbit(base, [u], depth=1)
    R, G = orbit.factorization.R, orbit.factorization.G

    def m(z):
        return 1.0 + 0.5j * z.zeta[0]

    gamma = cm.quantize_with_multiplier(orbit, MultiplierSpec(m, u))
    assert len(gamma.support) == 4, f"every base point has its image in the orbit: {gamma.support}"
    for k in gamma.support:
        point = orbit.closed_points.points[k]
        image = orbit.lookup(u(point))
        lhs = R.conj().T @ gamma.M @ R[:, k]
        assert np.allclose(lhs, m(point) * G[:, image], atol=1e-8), \
            f"<w|Gamma_m(U)|z_{k}> != m(z_{k}) K(w, U z_{k})"

    plain = cm.quantize_with_multiplier(orbit, MultiplierSpec(lambda z: 1.0, u))
    assert np.allclose(plain.M, cm.quantize(orbit, u).M, atol=1e-10), "m = 1 gives Gamma(U)"
    print("  PASS: test_multiplier_quantization_moves_points")


def test_annihilator_matches_fock_smeared():
    sample = _circle_sample()
    orbit = cm.build_orbit(sample, [IDENTITY_MAP], depth=1)
    R = orbit.factorization.R
    p = 0.3 - 0.4j
    a = cm.diag_operator(orbit, lambda z: p.conjugate() * z.zeta[0])
    smeared = fs.smeared([p], 30)
    expected = np.array([[fs.matrix_element(smeared, z, w) for w in sample] for z in sample])
    assert np.allclose(R.conj().T @ a.M @ R, expected, atol=1e-8), \
        "a(m) for m(z) = p* zeta has the matrix elements of p* a"
    print("  PASS: test_annihilator_matches_fock_smeared")


def test_diag_operator_shadow():
    sample = _circle_sample()
    orbit = cm.build_orbit(sample, [IDENTITY_MAP], depth=1)
    G = orbit.factorization.G
    R = orbit.factorization.R
    m = np.array([z.zeta[0] for z in sample])

    a = cm.diag_operator(orbit, lambda z: z.zeta[0])
    assert np.allclose(R.conj().T @ a.M @ R, G * m[None, :], atol=1e-8), "<w|a(m)|z> = m(z) K(w, z)"
    a_star = cm.diag_operator_adjoint(orbit, lambda z: z.zeta[0])
    assert np.allclose(R.conj().T @ a_star.M @ R, m[:, None] * G, atol=1e-8), "<w|a*(m)|z> = m(w) K(w, z)"
    print("  PASS: test_diag_operator_shadow")


def test_slenderness():
    sample = _klauder_sample(4, 13, dim=1)
    report = cm.slenderness_probe(sample.space, sample)
    assert report['passed'] and report['classes'] == 4, f"generic sample is slender: {report}"

    space = sample.space
    doubled = SampleSet(space, list(sample) + [space.scalar_multiply(2.0, sample.points[1])])
    report = cm.slenderness_probe(space, doubled)
    assert report['passed'] and report['parallel_pairs'] == 1, f"parallel pair explains the rank: {report}"

    flat = SampleSet(kernel_spaces.embedded_space(2),
                     [EmbeddedPoint((1 + 0j, 0j)), EmbeddedPoint((0j, 1 + 0j)), EmbeddedPoint((1 + 0j, 1 + 0j))])
    report = cm.slenderness_probe(flat.space, flat)
    assert not report['passed'] and report['rank'] == 2, f"three vectors in C^2 are not slender: {report}"
    with pytest.raises(IllConditionedError):
        cm.diag_operator(cm.build_orbit(flat, [IDENTITY_MAP], depth=1), lambda z: 1.0)
    print("  PASS: test_slenderness")


def test_separated_samples_are_slender():
    for space in (kernel_spaces.moebius_space(), kernel_spaces.klauder_space(1)):
        for seed in range(5):
            sample = kernel_spaces.separated_sample(space, 15, np.random.default_rng(seed))
            report = cm.slenderness_probe(space, sample)
            assert report['passed'] and report['rank'] == 15 and report['parallel_pairs'] == 0, \
                f"{space.kind} seed {seed}: 15 separated points have full rank: {report}"

            doubled = SampleSet(space, list(sample) + [space.scalar_multiply(2.0, sample.points[seed])])
            report = cm.slenderness_probe(space, doubled)
            assert report['parallel_pairs'] == 1 and report['rank'] == 15, \
                f"{space.kind} seed {seed}: a parallel pair drops the rank by one: {report}"
            assert report['passed'], f"{space.kind} seed {seed}: the pair explains the rank: {report}"
    print("  PASS: test_separated_samples_are_slender")


# ==========================================================================
# Normal kernels
# ==========================================================================
def test_normal_kernel_recovery():
    sample = _circle_sample()
    orbit = cm.build_orbit(sample, [], depth=0)
    op = cm.normal_kernel_operator(orbit, _zeta_kernel)
    expected = np.array([[_zeta_kernel(z, w) for w in sample] for z in sample])
    assert np.allclose(cm.recover_normal_kernel(orbit.factorization, op), expected, atol=1e-8), \
        "shadow / K should give back X"

    with pytest.raises(NotShadowError):
        cm.normal_kernel_operator(orbit, lambda z, w: z.z0.conjugate() + w.z0)
    print("  PASS: test_normal_kernel_recovery")


def test_normal_kernel_of_constants_and_products():
    sample = _circle_sample()
    orbit = cm.build_orbit(sample, [IDENTITY_MAP], depth=1)
    fact = orbit.factorization
    R = fact.R
    one = cm.normal_kernel_operator(orbit, lambda z, w: 1.0)
    assert np.allclose(one.M, np.eye(fact.rank), atol=1e-12), "N(1) is the identity"
    constant = cm.normal_kernel_operator(orbit, lambda z, w: 3.0 - 1j)
    assert np.allclose(constant.M, (3.0 - 1j) * np.eye(fact.rank), atol=1e-8), "N(c) = c"

    def m(z):
        return z.zeta[0] + 0.5

    def m2(z):
        return 2.0 * z.zeta[0] - 0.3j

    law = cm.normal_kernel_operator(orbit, lambda z, w: m(z) * _zeta_kernel(z, w) * m2(w))
    composed = (cm.diag_operator_adjoint(orbit, m).M @ cm.normal_kernel_operator(orbit, _zeta_kernel).M
                @ cm.diag_operator(orbit, m2).M)
    expected = R.conj().T @ composed @ R
    assert np.allclose(R.conj().T @ law.M @ R, expected, atol=1e-8), \
        "N(m X m') = a*(m) N(X) a(m') with m(z) taken as is"

    conjugated = cm.normal_kernel_operator(
        orbit, lambda z, w: complex(m(z)).conjugate() * _zeta_kernel(z, w) * m2(w))
    assert not np.allclose(R.conj().T @ conjugated.M @ R, expected, atol=1e-4), \
        "conj(m(z)) on the left is a different operator"
    print("  PASS: test_normal_kernel_of_constants_and_products")


def test_normal_kernel_conjugation():
    rng = np.random.default_rng(14)
    base = _klauder_sample(3, 14)
    for spec in (cm.scalar_map(base.space, 1.5 + 0.5j),
                 cm.klauder_map(osc.embed_unitary(osc.random_unitary_element(rng, 1)))):
        orbit = cm.build_orbit(base, [cm.adjoint_map(spec), cm.inverse_map(spec)], depth=1,
                               eps_rank=1e-13)
        report = cm.conjugate_normal_kernel(orbit, spec, _zeta_kernel)
        assert report['passed'], f"N(AX) = Gamma(A) N(X) Gamma(A)^-1 failed for {spec.label}: {report}"
    print("  PASS: test_normal_kernel_conjugation")


# ==========================================================================
# Lifts to the projective extension
# ==========================================================================
def test_projective_lifts_are_coherent():
    rng = np.random.default_rng(15)
    klauder = kernel_spaces.klauder_space(1)
    space = kernel_spaces.projective_extension(klauder, 1)
    sample = kernel_spaces.random_sample(space, 5, rng, 0.8)

    lift = cm.projective_lift(0.5 - 1j, cm.klauder_map(osc.random_element(rng, 1)))
    report = cm.check_coherence(space, lift, sample)
    assert report['passed'], f"[alpha, A] is coherent with adjoint [conj alpha, A*]: {report}"

    sep = kernel_spaces.scalar_separable(klauder, 1.5 + 0.5j)
    for spec in cm.separable_lifts(sep, degree=1):
        report = cm.check_coherence(space, spec, sample)
        assert report['passed'], f"{spec.label} should be adjoint to its partner: {report}"

    with pytest.raises(NotProjectiveError):
        cm.separable_lifts(sep, degree=2)
    with pytest.raises(DomainError):
        cm.projective_lift(0.0, IDENTITY_MAP)
    print("  PASS: test_projective_lifts_are_coherent")


# ==========================================================================
# Runner
# ==========================================================================
def run_all():
    print("Running coherent map tests...\n")
    tests = [
        test_gu11_sigma_is_inverse,
        test_moebius_coherence_and_wrong_adjoint,
        test_invalid_moebius_matrix,
        test_moebius_homomorphism_and_unitarity,
        test_scalar_quantization,
        test_quantize_certifies_shadow,
        test_orbit_without_images_is_not_closed,
        test_klauder_homomorphism,
        test_heisenberg_pair_homomorphism,
        test_unitary_and_non_unitary_elements,
        test_adjoint_exchange,
        test_composition_is_coherent,
        test_missing_adjoint_and_inverse,
        test_separable_algebra,
        test_multiplier_on_parallel_pair,
        test_multiplier_quantization_moves_points,
        test_annihilator_matches_fock_smeared,
        test_diag_operator_shadow,
        test_slenderness,
        test_separated_samples_are_slender,
        test_normal_kernel_recovery,
        test_normal_kernel_of_constants_and_products,
        test_normal_kernel_conjugation,
        test_projective_lifts_are_coherent,
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
