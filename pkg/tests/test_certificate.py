import math
import random

import numpy as np
import pytest

from reinhardt.certificate import (
    Window,
    certificate_ladder,
    certified_lower_bound,
    check_subharmonic,
    critical_point,
    density_mass,
    density_values,
    find_window,
    index_window,
    lambda_alpha,
    log_ratio_R,
)
from reinhardt.domains import DomainSpec, MultiIndex
from reinhardt.errors import InvalidInputError
from reinhardt.hankel import s_alpha_partial
from reinhardt.profiles import RadialProfile, profile_family

ZERO = profile_family("zero")
NEG_LOG = profile_family("neg_log_one_minus_r2")
INV_POW = profile_family("inv_one_minus_pow", {"p": 1})

CONCAVE = RadialProfile(
    name="synthetic_concave_r2",
    phi=lambda r: -np.square(np.asarray(r, dtype=float)),
    dphi=lambda r: -2.0 * np.asarray(r, dtype=float),
    d2phi=lambda r: -2.0 + 0.0 * np.asarray(r, dtype=float),
    unbounded=False,
)


def test_subharmonicity_of_built_ins():
    # neg_log: laplacian is 4/(1-r^2)^2, minimum 4 at r -> 0
    check = check_subharmonic(NEG_LOG, 1000)
    assert check.passed
    assert check.worst_margin == pytest.approx(4.0, rel=1e-3)
    assert check_subharmonic(INV_POW, 500).passed
    assert check_subharmonic(ZERO, 200).passed


def test_subharmonicity_failure_margin():
    check = check_subharmonic(CONCAVE, 1000)
    assert not check.passed
    assert check.worst_margin == pytest.approx(-4.0, rel=1e-9)


def test_subharmonicity_needs_enough_points():
    with pytest.raises(InvalidInputError):
        check_subharmonic(NEG_LOG, 99)


def test_find_window_neg_log():
    # r phi'(r) = 2 r^2/(1-r^2) reaches 0.1 at r = sqrt(1/21)
    window = find_window(NEG_LOG)
    assert window.a == pytest.approx(math.sqrt(0.1 / 2.1), abs=2e-4)
    assert window.A >= 0.1
    assert window.b == pytest.approx(0.5 * (window.a + 1.0), rel=1e-12)
    assert window.B > window.A


def test_find_window_inv_pow():
    # r/(1-r)^2 = 0.1 at r = 6 - sqrt(35)
    window = find_window(INV_POW)
    assert window.a == pytest.approx(6.0 - math.sqrt(35.0), abs=2e-4)
    assert window.A >= 0.1


def test_find_window_rejects_flat_profile():
    with pytest.raises(InvalidInputError):
        find_window(ZERO)


def test_window_validation():
    with pytest.raises(InvalidInputError):
        Window(a=0.5, b=0.4, A=1.0, B=2.0)
    with pytest.raises(InvalidInputError):
        Window(a=0.2, b=0.5, A=1.0, B=1.0)


def test_log_ratio_examples():
    got = log_ratio_R(ZERO, 1.0, 3.0, MultiIndex(1, 0))
    assert got.log == pytest.approx(math.log(0.5), abs=1e-12)
    got = log_ratio_R(NEG_LOG, 1.0, 2.0, MultiIndex(0, 1))
    assert got.log == pytest.approx(math.log(3.0 / 5.0), abs=1e-12)
    assert log_ratio_R(NEG_LOG, 3.0, 5.0, MultiIndex(0, 0)).log == 0.0


def test_critical_point_closed_form():
    # for phi = -log(1-r^2): x - y r phi' = 0 at r = sqrt(x/(x+2y))
    window = find_window(NEG_LOG)
    got = critical_point(NEG_LOG, 1.0, 1.0, window)
    assert got == pytest.approx(math.sqrt(1.0 / 3.0), abs=1e-9)
    # a wider hand-built window admits the steeper ratio x/y = 2
    wide = Window(a=0.3, b=0.9, A=2 * 0.09 / 0.91, B=2 * 0.81 / 0.19)
    got = critical_point(NEG_LOG, 2.0, 1.0, wide)
    assert got == pytest.approx(math.sqrt(0.5), abs=1e-9)


def test_critical_point_requires_window_condition():
    window = find_window(NEG_LOG)
    with pytest.raises(InvalidInputError):
        critical_point(NEG_LOG, 100.0, 1.0, window)


def test_root_bracketing_inside_window():
    rng = random.Random(99)
    for profile in (NEG_LOG, INV_POW):
        window = find_window(profile)
        for _ in range(30):
            ratio = window.A + (window.B - window.A) * rng.uniform(0.01, 0.99)
            y = rng.uniform(1.0, 300.0)
            x = ratio * y
            f_a = x - y * float(profile.dphi(window.a)) * window.a
            f_b = x - y * float(profile.dphi(window.b)) * window.b
            assert f_a > 0.0 > f_b


def test_density_mass_normalization_and_zero_profile():
    assert density_mass(NEG_LOG, 3.0, 5.0, (0.0, 1.0)) == 1.0
    assert density_mass(ZERO, 1.0, 0.0, (0.0, 0.5)) == pytest.approx(0.25, abs=1e-12)


def test_density_mass_window_inequality_sample():
    rng = random.Random(5)
    for profile in (NEG_LOG, INV_POW):
        window = find_window(profile)
        interval = (window.inner_lo, window.inner_hi)
        for _ in range(10):
            ratio = window.A + (window.B - window.A) * rng.uniform(0.01, 0.99)
            y = rng.uniform(1.0, 500.0)
            mass = density_mass(profile, ratio * y, y, interval)
            assert mass >= 0.5 - 1e-6


def test_density_unimodality_on_grid():
    window = find_window(NEG_LOG)
    x, y = 41.0, 62.0
    assert window.A < x / y < window.B
    grid = np.linspace(1e-6, 1.0 - 1e-6, 1000)
    values = density_values(NEG_LOG, x, y, grid)
    peak = int(np.argmax(values))
    rising = np.diff(values[: peak + 1])
    falling = np.diff(values[peak:])
    assert (rising >= -1e-6).all()
    assert (falling <= 1e-6).all()
    rho = critical_point(NEG_LOG, x, y, window)
    assert abs(grid[peak] - rho) <= 2.0 * (grid[1] - grid[0])


def test_index_window_enumeration():
    window = Window(a=0.5, b=0.9, A=1.0, B=3.0)
    count, lo, hi = index_window(window, 100)
    assert (count, lo, hi) == (25, pytest.approx(50.25), pytest.approx(75.625))
    count, lo, hi = index_window(window, 10)
    assert count == 3
    # every counted k satisfies the ratio condition
    for n in (10, 100):
        _, lo, hi = index_window(window, n)
        for k in range(math.floor(max(lo, 0.0)) + 1, math.ceil(min(hi, n))):
            if lo < k < hi:
                ratio = (2 * k + 1) / (2 * n - 2 * k + 2)
                assert window.A < ratio < window.B


def test_index_window_count_linearity():
    window = find_window(NEG_LOG)
    density = window.B / (window.B + 1.0) - window.A / (window.A + 1.0)
    for n in (50, 100, 200, 400, 800):
        count, _, _ = index_window(window, n)
        assert abs(count / n - density) <= 2.0 / n


def test_lambda_alpha_closed_cases():
    window = find_window(NEG_LOG)
    assert lambda_alpha(NEG_LOG, MultiIndex(0, 0), window) == pytest.approx(0.5, rel=1e-12)
    # alpha = (1,0): the factor r^2 increases, so the minimum sits at a/2
    want = 0.5 * (window.a / 2.0) ** 2
    assert lambda_alpha(NEG_LOG, MultiIndex(1, 0), window) == pytest.approx(want, rel=1e-9)
    # alpha = (0,1): exp(-2 phi) decreases, so the minimum sits at (1+b)/2
    hi = window.inner_hi
    want = 0.25 * math.exp(-2.0 * float(NEG_LOG.phi(hi)))
    assert lambda_alpha(NEG_LOG, MultiIndex(0, 1), window) == pytest.approx(want, rel=1e-9)


def test_certificate_soundness_small():
    spec = DomainSpec.profile_domain(NEG_LOG)
    for alpha in (MultiIndex(1, 0), MultiIndex(1, 1)):
        entry = certified_lower_bound(NEG_LOG, alpha, 50)
        partial = s_alpha_partial(spec, alpha, 50)
        assert entry.bound <= partial + 1e-9
        assert entry.bound > 0
        assert entry.prefactor_min >= 1.0 / (1.0 + alpha.g2) - 1e-12
        assert min(m for _, m in entry.mass_checks) >= 0.5 - 1e-6


def test_certificate_rejects_zero_alpha_and_concave_profiles():
    with pytest.raises(InvalidInputError):
        certified_lower_bound(NEG_LOG, MultiIndex(0, 0), 50)
    with pytest.raises(InvalidInputError):
        certified_lower_bound(CONCAVE, MultiIndex(1, 0), 50)


def test_certificate_counts_are_nearly_affine():
    ladder = certificate_ladder(NEG_LOG, MultiIndex(1, 1), (40, 80, 120, 160))
    ns = np.array([n for n, _ in ladder.counts], dtype=float)
    counts = np.array([c for _, c in ladder.counts], dtype=float)
    slope, intercept = np.polyfit(ns, counts, 1)
    assert (np.abs(counts - (intercept + slope * ns)) <= 1.0 + 1e-9).all()
