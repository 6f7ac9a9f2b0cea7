"""Fourier-side basics: densities, decay checks, synthesis/analysis round trips."""
import math

import numpy as np
import pytest

from shiftdecon.errors import (AliasingError, InvalidParameterError,
                               InvariantViolationError)
from shiftdecon.spectral import (DecayProfile, ShiftDensity, Template, analyze,
                                 gaussian_density, laplace_density,
                                 point_mass_density, synthesize,
                                 uniform_density, verify_polynomial_decay)

SIGMA = 0.1
N_SAMPLER = 10_000

# Frozen: 1 / (1 + 2 * 0.1**2 * pi**2 * 25) for the Laplace(0.1) density at k=5.
GAMMA5_LAPLACE = 0.16849761225542156


# ---------------------------------------------------------------------------
# characteristic functions


def test_gamma_zero_is_one_for_every_density():
    for d in (laplace_density(SIGMA), gaussian_density(SIGMA),
              uniform_density(0.25), point_mass_density()):
        assert d.gamma(0) == 1.0 + 0.0j


def test_laplace_gamma_closed_form():
    d = laplace_density(SIGMA)
    k = np.arange(-12, 13)
    expected = 1.0 / (1.0 + 2.0 * SIGMA**2 * math.pi**2 * k.astype(float) ** 2)
    assert np.allclose(d.gamma(k), expected, rtol=1e-14, atol=0.0)
    assert abs(d.gamma(5).real - GAMMA5_LAPLACE) < 1e-15
    assert d.gamma(5).imag == 0.0


def test_laplace_gamma_against_quadrature():
    # Independent oracle: gamma_k = int p(x) cos(2 pi k x) dx with the Laplace
    # pdf p(x) = exp(-sqrt(2)|x|/sigma) / (sqrt(2) sigma), via QUADPACK's
    # oscillatory weight on the half line.
    quad = pytest.importorskip("scipy.integrate").quad
    d = laplace_density(SIGMA)
    b = math.sqrt(2.0) / SIGMA
    for k in (1, 2, 5, 9):
        val, err = quad(lambda x: b / 2.0 * math.exp(-b * x), 0.0, np.inf,
                        weight="cos", wvar=2.0 * math.pi * k)
        assert err < 1e-8
        assert abs(2.0 * val - d.gamma(k).real) < 1e-9


def test_gamma_is_even_in_k():
    for d in (laplace_density(SIGMA), gaussian_density(0.2), uniform_density(0.25)):
        pos = d.gamma(np.arange(1, 11))
        neg = d.gamma(-np.arange(1, 11))
        assert np.array_equal(pos, neg)


def test_gaussian_gamma_strictly_decreasing():
    g = gaussian_density(0.15).gamma(np.arange(0, 20)).real
    assert np.all(np.diff(g) < 0.0)
    assert g[0] == 1.0


def test_uniform_gamma_quarter_width_values():
    d = uniform_density(0.25)
    # sinc(1/2) = 2/pi
    assert abs(d.gamma(1).real - 2.0 / math.pi) < 1e-14
    # sin(pi)/pi: zero up to rounding of sin(pi)
    assert abs(d.gamma(2).real) < 1e-15


def test_point_mass_sampler_and_gamma():
    d = point_mass_density()
    rng = np.random.default_rng(0)
    assert np.all(d.sample(rng, 50) == 0.0)
    assert np.all(d.gamma(np.arange(-7, 8)) == 1.0)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_density_scale_must_be_positive(bad):
    with pytest.raises(InvalidParameterError):
        laplace_density(bad)
    with pytest.raises(InvalidParameterError):
        gaussian_density(bad)
    with pytest.raises(InvalidParameterError):
        uniform_density(bad)


# ---------------------------------------------------------------------------
# sampler vs characteristic function (Monte Carlo)


@pytest.mark.parametrize("density,seed", [
    (laplace_density(SIGMA), 11),
    (gaussian_density(0.1), 12),
    (uniform_density(0.25), 13),
])
def test_sampler_matches_gamma(density, seed):
    """Empirical char. function of n draws ~= gamma_k within 5 sigma."""
    rng = np.random.default_rng(seed)
    tau = density.sample(rng, N_SAMPLER)
    k = np.arange(1, 11)
    emp = np.exp(-2j * np.pi * np.outer(tau, k)).mean(axis=0)
    # |e^{-2 pi i k tau}| = 1, so each complex mean has stderr <= 1/sqrt(n)
    assert np.all(np.abs(emp - density.gamma(k)) < 5.0 / math.sqrt(N_SAMPLER))


def test_laplace_sample_variance():
    rng = np.random.default_rng(7)
    tau = laplace_density(SIGMA).sample(rng, N_SAMPLER)
    # Var = sigma^2; the sample variance of a Laplace has stdev ~ sigma^2*sqrt(5/n)
    assert abs(np.var(tau) - SIGMA**2) < 5.0 * SIGMA**2 * math.sqrt(5.0 / N_SAMPLER)
    assert abs(np.mean(tau)) < 5.0 * SIGMA / math.sqrt(N_SAMPLER)


# ---------------------------------------------------------------------------
# decay verification


def test_laplace_decay_profile_holds():
    d = laplace_density(SIGMA)
    check = verify_polynomial_decay(d, 200)
    assert check.ok and check.violating_k is None
    assert d.decay.beta == 2.0


def test_point_mass_decay_profile_holds():
    assert verify_polynomial_decay(point_mass_density(), 50).ok


def test_wrong_exponent_is_caught_at_first_bad_frequency():
    # Same gamma as Laplace(0.1) but advertised with beta=0.5: k=1 passes
    # (envelope is scale-free there), k=2 already violates the lower bound.
    lap = laplace_density(SIGMA)
    wrong = ShiftDensity(gamma_fn=lap.gamma_fn, sampler=lap.sampler,
                         decay=DecayProfile(beta=0.5, c_min=lap.decay.c_min,
                                            c_max=lap.decay.c_max),
                         label="mislabeled")
    check = verify_polynomial_decay(wrong, 50)
    assert not check.ok
    assert check.violating_k == 2


def test_decay_check_requires_a_profile():
    with pytest.raises(InvalidParameterError):
        verify_polynomial_decay(gaussian_density(0.1), 10)
    with pytest.raises(InvalidParameterError):
        verify_polynomial_decay(laplace_density(0.1), 0)


def test_decay_profile_validation():
    with pytest.raises(InvalidParameterError):
        DecayProfile(beta=-1.0, c_min=0.5, c_max=1.0)
    with pytest.raises(InvalidParameterError):
        DecayProfile(beta=1.0, c_min=0.0, c_max=1.0)
    with pytest.raises(InvalidParameterError):
        DecayProfile(beta=1.0, c_min=2.0, c_max=1.0)


# ---------------------------------------------------------------------------
# Template container


def test_template_coeff_accessor_and_band():
    t = Template.from_harmonics(0.5, [1.0, 0.0], [0.0, -2.0], k_max=3)
    assert t.coeff(0) == 0.5
    assert t.coeff(1) == 0.5 + 0.0j          # cos -> (a - i b)/2
    assert t.coeff(-2) == np.conj(t.coeff(2))
    assert t.coeff(2) == 0.0 + 1.0j          # sine amplitude -2 -> -i*(-2)/2
    assert np.array_equal(t.k_values, np.arange(-3, 4))
    with pytest.raises(InvalidParameterError):
        t.coeff(4)


def test_template_requires_exact_hermitian_symmetry():
    coeffs = np.zeros(5, dtype=complex)
    coeffs[3] = 1.0 + 1.0j  # k=+1 set, k=-1 left at 0
    with pytest.raises(InvariantViolationError):
        Template(coeffs=coeffs, k_max=2)
    # same data is fine when not flagged real-valued
    t = Template(coeffs=coeffs, k_max=2, real_valued=False)
    assert t.coeff(1) == 1.0 + 1.0j


def test_template_shape_and_finiteness_checks():
    with pytest.raises(InvalidParameterError):
        Template(coeffs=np.zeros(4, dtype=complex), k_max=2)
    with pytest.raises(InvalidParameterError):
        Template(coeffs=np.zeros(3, dtype=complex), k_max=0)
    bad = np.zeros(5, dtype=complex)
    bad[0] = np.nan
    with pytest.raises(InvalidParameterError):
        Template(coeffs=bad, k_max=2, real_valued=False)


def test_template_coeffs_are_frozen():
    t = Template.from_harmonics(0.0, [1.0], [0.0], k_max=1)
    with pytest.raises(ValueError):
        t.coeffs[0] = 1.0


def test_norms():
    t = Template.from_harmonics(0.5, [2.0], [0.0], k_max=1)
    # coeffs: (1, 0.5, 1) at k=-1,0,1 -> sum |.|^2 = 2.25
    assert abs(t.norm_squared - 2.25) < 1e-15
    # Sobolev s=1: (1+1)*1 + 1*0.25 + (1+1)*1 = 4.25
    assert abs(t.sobolev_norm_squared(1.0) - 4.25) < 1e-15


def test_from_harmonics_validation():
    with pytest.raises(InvalidParameterError):
        Template.from_harmonics(0.0, [1.0, 2.0], [0.0], k_max=3)
    with pytest.raises(InvalidParameterError):
        Template.from_harmonics(0.0, [1.0] * 5, [0.0] * 5, k_max=4)


# ---------------------------------------------------------------------------
# synthesis / analysis


def test_synthesize_single_cosine():
    t = Template.from_harmonics(0.25, [1.0], [0.0], k_max=1)
    grid = 8
    x = np.arange(grid) / grid
    f = synthesize(t, grid)
    assert np.allclose(f, 0.25 + np.cos(2.0 * np.pi * x), atol=1e-13)


def test_synthesize_single_sine():
    t = Template.from_harmonics(0.0, [0.0, 0.0], [0.0, 1.0], k_max=2)
    grid = 16
    x = np.arange(grid) / grid
    f = synthesize(t, grid)
    assert np.allclose(f, np.sin(4.0 * np.pi * x), atol=1e-13)


def test_synthesize_grid_too_small():
    t = Template.from_harmonics(0.0, [1.0] * 4, [0.0] * 4, k_max=4)
    with pytest.raises(AliasingError):
        synthesize(t, 8)  # needs 2*4+1 = 9
    assert synthesize(t, 9).shape == (9,)


def test_synthesize_rejects_complex_template():
    coeffs = np.zeros(5, dtype=complex)
    coeffs[3] = 1.0j
    t = Template(coeffs=coeffs, k_max=2, real_valued=False)
    with pytest.raises(InvalidParameterError):
        synthesize(t, 16)


def _random_real_template(rng, k_max):
    return Template.from_harmonics(
        float(rng.normal()),
        rng.normal(size=k_max),
        rng.normal(size=k_max),
        k_max=k_max,
    )


@pytest.mark.parametrize("seed,k_max,grid", [
    (0, 1, 3), (1, 3, 7), (2, 3, 12), (3, 8, 17), (4, 8, 64),
    (5, 15, 31), (6, 15, 100), (7, 25, 51), (8, 25, 128), (9, 40, 81),
])
def test_round_trip_analyze_synthesize(seed, k_max, grid):
    """analyze(synthesize(t)) recovers the band exactly when grid >= 2K+1."""
    t = _random_real_template(np.random.default_rng(seed), k_max)
    back = analyze(synthesize(t, grid), k_max)
    assert np.allclose(back.coeffs, t.coeffs, atol=1e-12)
    # mirroring makes the result exactly Hermitian, not just approximately
    assert np.array_equal(np.conj(back.coeffs[::-1]), back.coeffs)


@pytest.mark.parametrize("seed,k_max,grid", [(10, 6, 13), (11, 6, 40), (12, 17, 35)])
def test_parseval_on_the_grid(seed, k_max, grid):
    # for a trig polynomial and grid >= 2K+1 the grid mean of f^2 is exact
    t = _random_real_template(np.random.default_rng(seed), k_max)
    f = synthesize(t, grid)
    assert abs(np.mean(f**2) - t.norm_squared) < 1e-11 * max(1.0, t.norm_squared)


def test_analyze_nyquist_limit():
    samples = np.zeros(16)
    with pytest.raises(AliasingError):
        analyze(samples, 8)  # (16-1)//2 == 7
    assert analyze(samples, 7).k_max == 7
    with pytest.raises(InvalidParameterError):
        analyze(samples, 0)
    with pytest.raises(InvalidParameterError):
        analyze(np.zeros((4, 4)), 1)


def test_analyze_constant_function():
    out = analyze(np.full(11, 3.5), 2)
    assert abs(out.coeff(0) - 3.5) < 1e-14
    assert np.all(np.abs(np.delete(out.coeffs, 2)) < 1e-14)
