import math

import numpy as np
import pytest

from ringwalk import configurations as cfg
from ringwalk import harmonic as hm
from ringwalk import spectral


def random_measure(sd, seed):
    rng = np.random.default_rng(seed)
    w = rng.random(sd.num_vertices)
    return hm.HMeasure(sd, w / w.sum())


def test_dirac_transform_is_all_ones(sd_cache):
    sd = sd_cache(2, 6)
    coeffs = hm.fourier(hm.dirac(cfg.root_configuration(2, 6), sd), sd)
    assert np.abs(coeffs.values - 1.0).max() < 1e-12


def test_transform_normalization_and_modulus_bound(sd_cache):
    sd = sd_cache(2, 6)
    for seed in range(3):
        mu = random_measure(sd, seed)
        coeffs = hm.fourier(mu, sd)
        assert coeffs.values[sd.root_index] == pytest.approx(1.0)
        assert np.abs(coeffs.values).max() <= 1.0 + 1e-12


def test_k1_transform_matches_classical_formula():
    n = 8
    sd = spectral.build_spectral(1, n)
    mu = random_measure(sd, 5)
    x = mu.e_coeffs
    got = hm.fourier(mu, sd).values
    expected = np.array([
        sum(np.exp(2j * math.pi * I * J / n) * x[J] for J in range(n)) / n
        for I in range(n)])
    assert np.abs(got - expected).max() < 1e-12


def test_inverse_roundtrip(sd_cache):
    sd = sd_cache(2, 6)
    for seed in range(4):
        mu = random_measure(sd, seed)
        back = hm.inverse_fourier(hm.fourier(mu, sd), sd)[1]
        assert back is not None
        assert np.abs(back.weights - mu.weights).max() < 1e-10


def test_inverse_of_root_indicator_is_invariant_measure(sd_cache):
    sd = sd_cache(2, 6)
    c = np.zeros(sd.num_vertices, dtype=complex)
    c[sd.root_index] = 1.0
    x, measure = hm.inverse_fourier(hm.FourierCoeffs(sd, c), sd)
    assert np.abs(x - 1.0).max() < 1e-12
    assert np.abs(measure.weights - sd.mu_h).max() < 1e-12


def test_inverse_flags_signed_results(sd_cache):
    sd = sd_cache(2, 4)
    rng = np.random.default_rng(9)
    c = rng.normal(size=sd.num_vertices) + 1j * rng.normal(size=sd.num_vertices)
    c[sd.root_index] = 1.0
    x, measure = hm.inverse_fourier(hm.FourierCoeffs(sd, c), sd)
    assert measure is None


def test_convolution_unit(sd_cache):
    sd = sd_cache(2, 6)
    mu = random_measure(sd, 1)
    unit = hm.dirac(cfg.root_configuration(2, 6), sd)
    assert np.abs(hm.convolve(mu, unit, sd).weights - mu.weights).max() < 1e-12


def test_step_dirac_acts_as_kernel(sd_cache):
    sd = sd_cache(2, 6)
    step = hm.dirac(cfg.step_configuration(2, 6), sd)
    mu = random_measure(sd, 2)
    got = hm.convolve(step, mu, sd).e_coeffs
    expected = spectral.step_kernel(sd).matrix @ mu.e_coeffs
    assert np.abs(got - expected).max() < 1e-10


def test_k1_convolution_is_cyclic():
    n = 12
    sd = spectral.build_spectral(1, n)
    mu, nu = random_measure(sd, 3), random_measure(sd, 4)
    got = hm.convolve(mu, nu, sd).e_coeffs
    x, y = mu.e_coeffs, nu.e_coeffs
    cyc = np.array([sum(x[i] * y[(j - i) % n] for i in range(n)) / n
                    for j in range(n)])
    assert np.abs(got - cyc).max() < 1e-12


def test_transform_diagonalizes_convolution(sd_cache):
    for k, n in [(2, 6), (3, 6)]:
        sd = sd_cache(k, n)
        mu, nu = random_measure(sd, 5), random_measure(sd, 6)
        lhs = hm.fourier(hm.convolve(mu, nu, sd), sd).values
        rhs = hm.fourier(mu, sd).values * hm.fourier(nu, sd).values
        assert np.abs(lhs - rhs).max() < 1e-10


def test_convolution_commutes_and_associates(sd_cache):
    sd = sd_cache(2, 6)
    a, b, c = (random_measure(sd, s) for s in (7, 8, 9))
    ab = hm.convolve(a, b, sd)
    ba = hm.convolve(b, a, sd)
    assert np.abs(ab.weights - ba.weights).max() < 1e-12
    left = hm.convolve(ab, c, sd).weights
    right = hm.convolve(a, hm.convolve(b, c, sd), sd).weights
    assert np.abs(left - right).max() < 1e-11


def test_closure_under_convolution(sd_cache):
    sd = sd_cache(3, 6)
    out = hm.convolve(random_measure(sd, 10), random_measure(sd, 11), sd)
    assert out.weights.min() >= 0.0
    assert out.weights.sum() == pytest.approx(1.0)


def test_direct_definition_oracle(sd_cache):
    sd = sd_cache(2, 5)
    mu, nu = random_measure(sd, 12), random_measure(sd, 13)
    direct = hm.convolve_direct(mu, nu, sd)
    fast = hm.convolve(mu, nu, sd).weights
    assert np.abs(direct - fast).max() < 1e-9


def test_convolve_sequence_matches_pairwise(sd_cache):
    sd = sd_cache(2, 5)
    ms = [random_measure(sd, s) for s in (14, 15, 16)]
    base = hm.dirac(cfg.root_configuration(2, 5), sd)
    seq = hm.convolve_sequence(ms, base, sd)
    step = base
    for m in ms:
        step = hm.convolve(step, m, sd)
    assert np.abs(seq.weights - step.weights).max() < 1e-11


def test_moments_of_root_dirac(sd_cache):
    sd = sd_cache(3, 7)
    stats = hm.moments(hm.dirac(cfg.root_configuration(3, 7), sd))
    assert stats.mean == pytest.approx(3.0)       # k(k-1)/2
    assert stats.var2 == pytest.approx(0.0)
    assert stats.k_stat == pytest.approx(0.0)
    assert stats.hat_shift3 == pytest.approx(0.0)


def test_step_rows_have_deterministic_size_class(sd_cache):
    """One kernel step moves the total position by exactly one, mod n.

    The integer size itself varies inside a row whenever the step wraps
    the circle, so only the size class is deterministic; rows whose
    support avoids the wrap have vanishing size variance outright.
    """
    sd = sd_cache(2, 8)
    n = sd.n
    kern = spectral.step_kernel(sd)
    sizes = np.array([v.size for v in sd.vertices])
    for i, v in enumerate(sd.vertices):
        support = sizes[kern.matrix[i] > 1e-14]
        assert len({s % n for s in support}) == 1
        assert (support[0] - v.size) % n == n - 1
        if support.max() == support.min():
            row = hm.HMeasure(sd, kern.matrix[i])
            assert hm.moments(row).var2 < 1e-20


def test_hat_shift_moment_bound(sd_cache):
    # E (size(hat I) - size(root))^3 <= 2 sqrt(2) k^3 E ||centered I||^3
    for k, n in [(2, 7), (3, 6)]:
        sd = sd_cache(k, n)
        for seed in range(4):
            stats = hm.moments(random_measure(sd, seed))
            assert stats.hat_shift3 <= 2 * math.sqrt(2) * k ** 3 * stats.tilde_norm3 + 1e-12


def test_k_stat_is_centered_norm_gap(sd_cache):
    sd = sd_cache(2, 6)
    stats = hm.moments(random_measure(sd, 20))
    root_sq = 0.5
    assert stats.k_stat == pytest.approx(stats.tilde_norm2 - root_sq)


def test_aggregate_subtracts_root(sd_cache):
    sd = sd_cache(2, 6)
    root = hm.dirac(cfg.root_configuration(2, 6), sd)
    agg = hm.aggregate([root, root])
    assert agg.mean == pytest.approx(0.0)
    assert agg.k_stat == pytest.approx(0.0)
    step = hm.dirac(cfg.step_configuration(2, 6), sd)
    agg2 = hm.aggregate([step] * 3)
    assert agg2.mean == pytest.approx(1.0)
    assert agg2.k_stat == pytest.approx(1.5)


def test_measure_json_roundtrip(sd_cache):
    sd = sd_cache(2, 5)
    mu = random_measure(sd, 21)
    back = hm.measure_from_json(hm.measure_to_json(mu), sd)
    assert np.abs(back.weights - mu.weights).max() < 1e-15


def test_measure_validation(sd_cache):
    sd = sd_cache(2, 4)
    with pytest.raises(ValueError):
        hm.HMeasure(sd, np.full(6, 0.5))
    with pytest.raises(ValueError):
        hm.HMeasure(sd, np.array([1.5, -0.5, 0, 0, 0, 0]))
