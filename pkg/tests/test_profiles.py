import math
import random

import pytest

from reinhardt.errors import InvalidInputError
from reinhardt.profiles import profile_family

FAMILIES = [
    profile_family("zero"),
    profile_family("neg_log_one_minus_r2"),
    profile_family("inv_one_minus_pow", {"p": 1}),
    profile_family("inv_one_minus_pow", {"p": 2.5}),
]


def test_zero_family_values():
    zero = profile_family("zero")
    assert float(zero.phi(0.5)) == 0.0
    assert float(zero.dphi(0.5)) == 0.0
    assert float(zero.d2phi(0.5)) == 0.0
    assert not zero.unbounded


def test_neg_log_family_values():
    prof = profile_family("neg_log_one_minus_r2")
    assert float(prof.phi(0.5)) == pytest.approx(-math.log(0.75), rel=1e-15)
    assert float(prof.dphi(0.5)) == pytest.approx(1.0 / 0.75, rel=1e-15)


def test_inv_pow_family_values():
    prof = profile_family("inv_one_minus_pow", {"p": 1})
    assert float(prof.phi(0.5)) == pytest.approx(2.0, rel=1e-15)
    assert float(prof.dphi(0.5)) == pytest.approx(4.0, rel=1e-15)
    assert float(prof.d2phi(0.5)) == pytest.approx(16.0, rel=1e-15)


def test_unknown_family_and_bad_params():
    with pytest.raises(InvalidInputError):
        profile_family("cosh")
    with pytest.raises(InvalidInputError):
        profile_family("inv_one_minus_pow")
    with pytest.raises(InvalidInputError):
        profile_family("inv_one_minus_pow", {"p": -1})
    with pytest.raises(InvalidInputError):
        profile_family("zero", {"p": 1})


def test_identity_is_name_and_params():
    a = profile_family("inv_one_minus_pow", {"p": 1})
    b = profile_family("inv_one_minus_pow", {"p": 1})
    c = profile_family("inv_one_minus_pow", {"p": 2})
    assert a == b and hash(a) == hash(b)
    assert a != c


@pytest.mark.parametrize("profile", FAMILIES, ids=lambda p: repr(p))
def test_derivatives_match_finite_differences(profile):
    # 100 random interior points; centered differences against the
    # analytic first and second derivatives, relative 1e-5.
    rng = random.Random(20240613)
    for _ in range(100):
        r = 0.05 + 0.90 * rng.random()
        h1 = 1e-6 * min(r, 1.0 - r)
        fd1 = (float(profile.phi(r + h1)) - float(profile.phi(r - h1))) / (2.0 * h1)
        d1 = float(profile.dphi(r))
        assert fd1 == pytest.approx(d1, rel=1e-5, abs=1e-9)
        h2 = 1e-4 * min(r, 1.0 - r)
        fd2 = (
            float(profile.phi(r + h2)) - 2.0 * float(profile.phi(r)) + float(profile.phi(r - h2))
        ) / (h2 * h2)
        d2 = float(profile.d2phi(r))
        assert fd2 == pytest.approx(d2, rel=1e-5, abs=1e-9)


@pytest.mark.parametrize("profile", FAMILIES, ids=lambda p: repr(p))
def test_profiles_are_finite_on_their_domain(profile):
    for r in (1e-9, 0.1, 0.5, 0.9, 1.0 - 1e-9):
        assert math.isfinite(float(profile.phi(r)))
    for r in (1e-9, 0.5, 1.0 - 1e-9):
        assert math.isfinite(float(profile.dphi(r)))
        assert math.isfinite(float(profile.d2phi(r)))
