import numpy as np
import pytest

from bayesindices import (
    CredibleInterval,
    DensityGrid,
    ReferenceFunction,
    SampleSet,
    hpd_interval,
    kde_density,
    level_set_mass,
    map_estimate,
    mass_in_interval,
    normalize_grid,
    sample_from_grid,
    silverman_bandwidth,
)
from bayesindices.errors import (
    DegenerateDensityError,
    InsufficientSamplesError,
    InvalidArgumentError,
    MultimodalHpdError,
)

INV_SQRT_2PI = 1.0 / np.sqrt(2 * np.pi)


# ---------------------------------------------------------------- types

def test_sample_set_validation():
    with pytest.raises(InvalidArgumentError):
        SampleSet([])
    with pytest.raises(InvalidArgumentError):
        SampleSet([1.0, np.nan])
    with pytest.raises(InvalidArgumentError):
        SampleSet([[1.0, 2.0]])
    ss = SampleSet([1.0, 2.0], seed=7)
    assert len(ss) == 2 and ss.seed == 7
    with pytest.raises(ValueError):
        ss.values[0] = 5.0  # immutable


def test_density_grid_validation():
    x = np.linspace(0, 1, 64)
    DensityGrid(x, np.ones(64))
    with pytest.raises(InvalidArgumentError):
        DensityGrid(x[:32], np.ones(32))  # too few points
    with pytest.raises(InvalidArgumentError):
        DensityGrid(x[::-1], np.ones(64))  # decreasing
    with pytest.raises(InvalidArgumentError):
        DensityGrid(x, -np.ones(64))  # negative densities
    with pytest.raises(InvalidArgumentError):
        DensityGrid(x, np.ones(63))  # length mismatch


def test_credible_interval_validation():
    CredibleInterval(0.0, 1.0, 0.95)
    with pytest.raises(InvalidArgumentError):
        CredibleInterval(1.0, 0.0, 0.95)
    with pytest.raises(InvalidArgumentError):
        CredibleInterval(0.0, 1.0, 1.2)


def test_reference_function_validation():
    flat = ReferenceFunction.flat()
    assert flat.prior is None
    with pytest.raises(InvalidArgumentError):
        ReferenceFunction("prior", None)
    with pytest.raises(InvalidArgumentError):
        ReferenceFunction("banana")


# ---------------------------------------------------------------- kde

def test_kde_matches_normal_pdf_at_zero():
    rng = np.random.default_rng(101)
    draws = SampleSet(rng.standard_normal(10_000))
    grid = kde_density(draws)
    assert float(grid.density_at(0.0)) == pytest.approx(INV_SQRT_2PI, abs=0.02)


def test_kde_normalized():
    rng = np.random.default_rng(5)
    grid = kde_density(SampleSet(rng.exponential(size=2_000)))
    assert grid.total_mass() == pytest.approx(1.0, abs=1e-6)


def test_kde_insufficient_samples():
    with pytest.raises(InsufficientSamplesError):
        kde_density(SampleSet(np.arange(50, dtype=float)))


def test_kde_bad_bandwidth():
    rng = np.random.default_rng(5)
    with pytest.raises(InvalidArgumentError):
        kde_density(SampleSet(rng.standard_normal(200)), bandwidth=0.0)


def test_silverman_bandwidth_formula():
    rng = np.random.default_rng(99)
    values = rng.standard_normal(4_000)
    sd = np.std(values)
    iqr = np.subtract(*np.percentile(values, [75, 25]))
    expected = 0.9 * min(sd, iqr / 1.34) * 4_000 ** (-0.2)
    assert silverman_bandwidth(values) == pytest.approx(expected, rel=1e-12)


# ---------------------------------------------------------------- normalize

def test_normalize_uniform():
    x = np.linspace(0, 1, 101)
    grid = normalize_grid(DensityGrid(x, np.full(101, 2.0)))
    assert np.allclose(grid.densities, 1.0)


def test_normalize_idempotent(normal_grid):
    once = normalize_grid(normal_grid)
    twice = normalize_grid(once)
    assert np.max(np.abs(once.densities - twice.densities)) < 1e-12


def test_normalize_zero_grid():
    x = np.linspace(0, 1, 64)
    with pytest.raises(DegenerateDensityError):
        normalize_grid(DensityGrid(x, np.zeros(64)))


# ---------------------------------------------------------------- hpd

def test_hpd_samples_standard_normal(normal_draws_100k):
    got = hpd_interval(normal_draws_100k, 0.95)
    assert got.lower == pytest.approx(-1.96, abs=0.03)
    assert got.upper == pytest.approx(1.96, abs=0.03)


def test_hpd_grid_standard_normal(normal_grid):
    got = hpd_interval(normalize_grid(normal_grid), 0.95)
    assert got.lower == pytest.approx(-1.959964, abs=2e-4)
    assert got.upper == pytest.approx(1.959964, abs=2e-4)


def test_hpd_samples_matches_exhaustive_scan():
    rng = np.random.default_rng(7)
    values = np.sort(rng.gamma(3.0, 1.0, size=5_000))
    got = hpd_interval(SampleSet(values), 0.9)
    m = int(np.ceil(0.9 * values.size))
    best = None
    for i in range(values.size - m + 1):
        width = values[i + m - 1] - values[i]
        if best is None or width < best[0]:
            best = (width, values[i], values[i + m - 1])
    assert (got.lower, got.upper) == (best[1], best[2])


def test_hpd_mass_validation(normal_draws_100k):
    with pytest.raises(InvalidArgumentError):
        hpd_interval(normal_draws_100k, 1.2)


def test_hpd_insufficient_samples():
    with pytest.raises(InsufficientSamplesError):
        hpd_interval(SampleSet(np.arange(99, dtype=float)), 0.95)


def test_hpd_multimodal_grid_raises():
    x = np.linspace(-6, 6, 1201)
    dens = np.exp(-0.5 * (x - 3) ** 2) + np.exp(-0.5 * (x + 3) ** 2)
    grid = normalize_grid(DensityGrid(x, dens))
    with pytest.raises(MultimodalHpdError) as excinfo:
        hpd_interval(grid, 0.5)
    segments = excinfo.value.segments
    assert len(segments) == 2
    assert segments[0][1] < segments[1][0]


# ---------------------------------------------------------------- mass in interval

def test_mass_full_support(normal_grid):
    grid = normalize_grid(normal_grid)
    lo, hi = grid.support
    assert mass_in_interval(grid, lo, hi) == pytest.approx(1.0, abs=1e-6)


def test_mass_zero_width(normal_grid):
    assert mass_in_interval(normalize_grid(normal_grid), 0.3, 0.3) == 0.0


def test_mass_order_validation(normal_grid):
    with pytest.raises(InvalidArgumentError):
        mass_in_interval(normal_grid, 1.0, -1.0)


def test_mass_samples_counts():
    ss = SampleSet(np.arange(10, dtype=float))
    assert mass_in_interval(ss, 2.0, 5.0) == pytest.approx(0.4)


def test_mass_partial_segment_matches_analytic(normal_grid):
    from scipy.stats import norm
    grid = normalize_grid(normal_grid)
    got = mass_in_interval(grid, -0.777, 1.234)
    assert got == pytest.approx(norm.cdf(1.234) - norm.cdf(-0.777), abs=1e-6)


# ---------------------------------------------------------------- map estimate

def test_map_symmetric_grid(normal_grid):
    est = map_estimate(normal_grid)
    assert est.location == pytest.approx(0.0, abs=16 / 4096)
    assert not est.at_boundary


def test_map_quadratic_refinement():
    # density sampled from a parabola peaked off-grid: refinement recovers it
    x = np.linspace(0, 1, 101)
    peak = 0.5037
    dens = 2.0 - (x - peak) ** 2
    est = map_estimate(DensityGrid(x, dens))
    assert est.location == pytest.approx(peak, abs=1e-12)
    assert est.density == pytest.approx(2.0, abs=1e-12)


def test_map_monotone_grid_flags_boundary():
    x = np.linspace(0, 1, 64)
    est = map_estimate(DensityGrid(x, np.linspace(0.5, 1.5, 64)))
    assert est.location == 1.0
    assert est.at_boundary


def test_map_tie_takes_smallest_location():
    x = np.linspace(0, 1, 64)
    dens = np.ones(64)
    est = map_estimate(DensityGrid(x, dens))
    assert est.location == 0.0


# ---------------------------------------------------------------- level set mass

def test_level_set_zero_threshold(normal_grid):
    assert level_set_mass(normalize_grid(normal_grid), 0.0) == 0.0


def test_level_set_at_max(normal_grid):
    grid = normalize_grid(normal_grid)
    thr = float(grid.densities.max())
    assert level_set_mass(grid, thr) == pytest.approx(1.0, abs=1e-6)


def test_level_set_negative_threshold(normal_grid):
    with pytest.raises(InvalidArgumentError):
        level_set_mass(normal_grid, -0.1)


def test_level_set_matches_fine_grid_oracle():
    # brute-force integration on a 10x finer grid
    rng = np.random.default_rng(42)
    for _ in range(5):
        mu = rng.uniform(-1, 1)
        sd = rng.uniform(0.5, 2.0)
        x = np.linspace(-8, 8, 801)
        grid = normalize_grid(DensityGrid(x, np.exp(-0.5 * ((x - mu) / sd) ** 2)))
        thr = rng.uniform(0.2, 0.8) * grid.densities.max()
        fine = np.linspace(-8, 8, 8001)
        fine_dens = np.interp(fine, grid.points, grid.densities)
        oracle = np.trapezoid(np.where(fine_dens <= thr, fine_dens, 0.0), fine)
        assert level_set_mass(grid, thr) == pytest.approx(oracle, abs=1e-3)


def test_level_set_monotone_in_threshold(normal_grid):
    grid = normalize_grid(normal_grid)
    thresholds = np.linspace(0, grid.densities.max() * 1.1, 40)
    masses = [level_set_mass(grid, t) for t in thresholds]
    assert all(b >= a for a, b in zip(masses, masses[1:]))


# ---------------------------------------------------------------- sampling

def test_sample_from_grid_moments(normal_grid):
    ss = sample_from_grid(normalize_grid(normal_grid), 100_000, seed=11)
    assert ss.values.mean() == pytest.approx(0.0, abs=0.02)
    assert ss.values.std() == pytest.approx(1.0, abs=0.02)
    assert ss.seed == 11


def test_sample_from_grid_deterministic(normal_grid):
    a = sample_from_grid(normal_grid, 1_000, seed=3)
    b = sample_from_grid(normal_grid, 1_000, seed=3)
    assert np.array_equal(a.values, b.values)


def test_sample_from_grid_zero_count(normal_grid):
    with pytest.raises(InvalidArgumentError):
        sample_from_grid(normal_grid, 0, seed=1)


def test_sample_values_inside_support(normal_grid):
    ss = sample_from_grid(normal_grid, 10_000, seed=2)
    lo, hi = normal_grid.support
    assert ss.values.min() >= lo and ss.values.max() <= hi
