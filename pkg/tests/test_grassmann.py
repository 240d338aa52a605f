import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from artifact.grassmann import (
    DomainError,
    OrbitSignature,
    SignatureTriple,
    SubspaceSample,
    angle_density,
    complement_spectrum,
    degenerate_limit,
    density_exponents,
    ellipsoid_projection_volume,
    flattened_shadow,
    haar_sample,
    haar_spectra,
    lambda1_cdf,
    orbit_signature,
    projection_mc_oracle,
    unit_ball_volume,
)


def test_signature_triple_derived_sizes():
    sig = SignatureTriple(3, 2, 4)
    assert (sig.n, sig.N, sig.N_q, sig.N_p) == (5, 1, 2, 1)
    assert sig.complement() == SignatureTriple(3, 2, 1)
    with pytest.raises(ValueError):
        SignatureTriple(1, 2, 1)


def test_sampling_is_deterministic():
    sig = SignatureTriple(3, 2, 2)
    a, b = haar_sample(sig, seed=17), haar_sample(sig, seed=17)
    assert np.array_equal(a.basis, b.basis) and np.array_equal(a.spectrum, b.spectrum)
    assert not np.array_equal(a.basis, haar_sample(sig, seed=18).basis)


def test_spectrum_in_range_and_ordered():
    sig = SignatureTriple(4, 3, 3)
    for seed in range(20):
        lam = haar_sample(sig, seed).spectrum
        assert lam.shape == (sig.N,)
        assert np.all(np.diff(lam) <= 0) and np.all(np.abs(lam) <= 1)


def test_line_at_angle():
    sig = SignatureTriple(1, 1, 1)
    theta = 0.3
    E = SubspaceSample.from_rows([[math.cos(theta), math.sin(theta)]], sig)
    assert E.spectrum[0] == pytest.approx(math.cos(2 * theta), abs=1e-14)


def test_positive_block_has_spectrum_one():
    sig = SignatureTriple(3, 2, 2)
    E = SubspaceSample.from_rows(np.eye(5)[:2], sig)
    assert np.allclose(E.spectrum, 1.0)
    assert orbit_signature(E) == OrbitSignature(2, 0, False)


def test_null_line_is_near_degenerate():
    sig = SignatureTriple(2, 1, 1)
    E = SubspaceSample.from_rows([[1, 0, 1]], sig)
    assert orbit_signature(E).near_degenerate


def test_complement_examples():
    sig = SignatureTriple(1, 1, 1)
    E = SubspaceSample.from_rows([[1, 0]], sig)
    assert complement_spectrum(E) == pytest.approx([-1.0])
    iso = SubspaceSample.from_rows([[1, 0, 1]], SignatureTriple(2, 1, 1))
    assert complement_spectrum(iso) == pytest.approx([0.0], abs=1e-12)


@pytest.mark.parametrize("sig", [(2, 2, 2), (3, 2, 2), (4, 3, 2), (3, 3, 4)])
def test_complement_relation(sig):
    sig = SignatureTriple(*sig)
    for seed in range(50):
        E = haar_sample(sig, seed)
        assert np.allclose(complement_spectrum(E), -E.spectrum[::-1], atol=1e-10)


def test_symmetric_mean_vanishes():
    lam = haar_spectra(SignatureTriple(2, 2, 2), 100_000, seed=4)
    total = lam.sum(axis=1)
    assert abs(total.mean()) <= 3 * total.std() / math.sqrt(total.size)


def test_orbit_frequencies_match_density():
    sig = SignatureTriple(2, 2, 2)

    # lambda = cos(phi) removes the endpoint singularities
    def chamber(lo, hi):
        val, _ = integrate.dblquad(
            lambda p1, p2: angle_density(sig, [math.cos(p1), math.cos(p2)]) * math.sin(p1) * math.sin(p2),
            lo, hi, lo, lambda p2: p2, epsabs=1e-11,
        )
        return val

    positive = chamber(0, math.pi / 2)
    assert positive == pytest.approx((2 - math.pi / 2) / 4, rel=1e-8)
    count = 100_000
    counts = {(2, 0): 0, (1, 1): 0, (0, 2): 0}
    lam = haar_spectra(sig, count, seed=9)
    for l1, l2 in lam:
        key = (2, 0) if l2 > 0 else (0, 2) if l1 < 0 else (1, 1)
        counts[key] += 1
    expected = {(2, 0): positive, (0, 2): positive, (1, 1): 1 - 2 * positive}
    for key, prob in expected.items():
        sd = math.sqrt(count * prob * (1 - prob))
        assert abs(counts[key] - count * prob) <= 3 * sd
    # the tag from the Gram matrix agrees with the spectral chamber
    for seed in range(30):
        E = haar_sample(sig, seed)
        tag = orbit_signature(E)
        l1, l2 = E.spectrum
        assert (tag.a, tag.b) == ((2, 0) if l2 > 0 else (0, 2) if l1 < 0 else (1, 1))


def test_arcsine_density():
    sig = SignatureTriple(1, 1, 1)
    for lam in (-0.7, 0.0, 0.4):
        expected = 1 / (math.pi * math.sqrt(1 - lam * lam))
        assert angle_density(sig, [lam]) == pytest.approx(expected, rel=1e-12)
    total, _ = integrate.quad(lambda p: angle_density(sig, [math.cos(p)]) * math.sin(p), 0, math.pi)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_density_exponents():
    assert density_exponents(SignatureTriple(2, 1, 1)) == (-0.5, 0.0)
    assert density_exponents(SignatureTriple(3, 2, 2)) == (-0.5, 0.0)


@pytest.mark.parametrize("sig", [(2, 1, 1), (4, 1, 1), (2, 2, 2), (3, 2, 2), (4, 3, 2)])
def test_density_is_normalized(sig):
    sig = SignatureTriple(*sig)
    if sig.N == 1:
        total, _ = integrate.quad(lambda p: angle_density(sig, [math.cos(p)]) * math.sin(p), 0, math.pi)
    else:
        total, _ = integrate.dblquad(
            lambda p1, p2: angle_density(sig, [math.cos(p1), math.cos(p2)]) * math.sin(p1) * math.sin(p2),
            0, math.pi, 0, lambda p2: p2, epsabs=1e-11,
        )
    assert total == pytest.approx(1.0, abs=1e-8)


def test_density_rejects_unordered():
    sig = SignatureTriple(2, 2, 2)
    with pytest.raises(DomainError):
        angle_density(sig, [0.1, 0.5])
    with pytest.raises(DomainError):
        angle_density(sig, [1.5, 0.5])
    assert angle_density(sig, [0.5, 0.1]) >= 0


@pytest.mark.parametrize("sig", [(2, 1, 1), (2, 2, 2), (3, 2, 2)])
def test_cdf_endpoints_and_monotone(sig):
    sig = SignatureTriple(*sig)
    grid = np.linspace(-1, 1, 41)
    F = lambda1_cdf(sig, grid)
    assert F[0] == pytest.approx(0.0, abs=1e-12)
    assert F[-1] == pytest.approx(1.0, abs=1e-10)
    assert np.all(np.diff(F) >= -1e-12)


def test_unit_ball_and_sphere():
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    sig = SignatureTriple(3, 2, 3)
    E = haar_sample(sig, 1)
    assert ellipsoid_projection_volume(E, 1.0, 1.0) == pytest.approx(unit_ball_volume(3))


def test_full_space_projection():
    sig = SignatureTriple(3, 2, 5)
    E = haar_sample(sig, 2)
    assert ellipsoid_projection_volume(E, 2.0, 0.5) == pytest.approx(unit_ball_volume(5) * 2**3 * 0.5**2)


def test_projection_line_example():
    theta, a, b = 0.7, 1.8, 0.6
    E = SubspaceSample.from_rows([[math.cos(theta), 0, math.sin(theta)]], SignatureTriple(2, 1, 1))
    width = 2 * math.sqrt(a * a * math.cos(theta) ** 2 + b * b * math.sin(theta) ** 2)
    assert ellipsoid_projection_volume(E, a, b) == pytest.approx(width, rel=1e-13)
    vol, err = projection_mc_oracle(E, a, b, 200_000, seed=1)
    assert vol == pytest.approx(width, rel=0.01)


def test_projection_mc_unit_disc():
    E = haar_sample(SignatureTriple(2, 2, 2), 5)
    vol, err = projection_mc_oracle(E, 1.0, 1.0, 400_000, seed=3)
    assert abs(vol - math.pi) <= 4 * err


def test_projection_mc_workers_do_not_change_result():
    E = haar_sample(SignatureTriple(3, 2, 3), 7)
    assert projection_mc_oracle(E, 1.3, 0.4, 40_000, seed=2) == projection_mc_oracle(
        E, 1.3, 0.4, 40_000, seed=2, workers=3
    )


axes = st.floats(min_value=0.1, max_value=5.0)


@given(st.integers(0, 10_000), axes, axes, st.floats(min_value=1.01, max_value=2.0))
@settings(max_examples=50)
def test_volume_monotone(seed, a, b, factor):
    E = haar_sample(SignatureTriple(3, 2, 2), seed)
    v = ellipsoid_projection_volume(E, a, b)
    assert ellipsoid_projection_volume(E, a * factor, b) >= v * (1 - 1e-12)
    assert ellipsoid_projection_volume(E, a, b * factor) >= v * (1 - 1e-12)


@given(st.integers(0, 10_000), axes, axes)
@settings(max_examples=50)
def test_volume_swap_symmetry(seed, a, b):
    sig = SignatureTriple(2, 2, 2)
    E = haar_sample(sig, seed)
    swapped = SubspaceSample(np.concatenate([E.basis[:, 2:], E.basis[:, :2]], axis=1), sig)
    assert np.allclose(swapped.spectrum, -E.spectrum[::-1], atol=1e-12)
    assert ellipsoid_projection_volume(swapped, b, a) == pytest.approx(
        ellipsoid_projection_volume(E, a, b), rel=1e-12
    )


@pytest.mark.parametrize("m", [1, 2])
def test_degenerate_limit(m):
    sig = SignatureTriple(2 * m, 2 * m - 1, 2 * m - 1)
    for seed in range(5):
        E = haar_sample(sig, seed)
        limit = degenerate_limit(E)
        assert flattened_shadow(E, 1e-6, "negative") == pytest.approx(limit, rel=1e-5)
        # flattening the positive block instead and dividing by eps gives the (1 + lambda) product
        other = unit_ball_volume(2 * m) * 2.0 ** (0.5 - m) * np.prod(np.sqrt(1 + E.spectrum))
        assert flattened_shadow(E, 1e-6, "positive") / 1e-6 == pytest.approx(other, rel=1e-5)
