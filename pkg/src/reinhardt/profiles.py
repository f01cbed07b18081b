"""Radial weight profiles for Hartogs-type Reinhardt domains in C^2.

A profile phi : [0,1) -> R defines the domain

    { (z1, z2) : |z1| < 1, |z2| < exp(-phi(|z1|)) }.

First and second derivatives are carried analytically because the
divergence certificate needs r*phi'(r) and the subharmonicity margin
phi'' + phi'/r pointwise.  All callables are numpy-vectorized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidInputError

FAMILIES = ("zero", "neg_log_one_minus_r2", "inv_one_minus_pow")


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """A C^2 radial weight with analytic derivatives.

    ``unbounded`` records whether phi(r) -> +inf as r -> 1-; the window
    search and the quadrature pre-split rely on it.  Identity for
    caching purposes is (name, params), so distinct profiles must carry
    distinct names.
    """

    name: str
    phi: Callable
    dphi: Callable
    d2phi: Callable
    params: tuple = field(default=())
    unbounded: bool = True

    def __eq__(self, other):
        if not isinstance(other, RadialProfile):
            return NotImplemented
        return (self.name, self.params) == (other.name, other.params)

    def __hash__(self):
        return hash((self.name, self.params))

    def __repr__(self):
        ps = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"RadialProfile({self.name}{':' if ps else ''}{ps})"


def profile_family(name: str, params: dict | None = None) -> RadialProfile:
    """Instantiate one of the built-in profile families.

    zero                  phi(r) = 0
    neg_log_one_minus_r2  phi(r) = -log(1 - r^2)
    inv_one_minus_pow     phi(r) = (1 - r)^(-p),  p > 0

    Only these families are accepted: the certificate pipeline needs
    trustworthy derivatives, which a free-form user function cannot
    supply.
    """
    params = dict(params or {})
    if name == "zero":
        _reject_params(name, params)
        return RadialProfile(
            name="zero",
            phi=lambda r: 0.0 * np.asarray(r, dtype=float),
            dphi=lambda r: 0.0 * np.asarray(r, dtype=float),
            d2phi=lambda r: 0.0 * np.asarray(r, dtype=float),
            unbounded=False,
        )
    if name == "neg_log_one_minus_r2":
        _reject_params(name, params)
        return RadialProfile(
            name="neg_log_one_minus_r2",
            phi=lambda r: -np.log1p(-np.square(np.asarray(r, dtype=float))),
            dphi=lambda r: 2.0 * r / (1.0 - np.square(r)),
            d2phi=lambda r: (2.0 + 2.0 * np.square(r)) / np.square(1.0 - np.square(r)),
        )
    if name == "inv_one_minus_pow":
        p = params.pop("p", None)
        _reject_params(name, params)
        if p is None or not np.isfinite(p) or p <= 0:
            raise InvalidInputError("inv_one_minus_pow requires a parameter p > 0")
        p = float(p)
        return RadialProfile(
            name="inv_one_minus_pow",
            phi=lambda r: np.power(1.0 - np.asarray(r, dtype=float), -p),
            dphi=lambda r: p * np.power(1.0 - r, -p - 1.0),
            d2phi=lambda r: p * (p + 1.0) * np.power(1.0 - r, -p - 2.0),
            params=(("p", p),),
        )
    raise InvalidInputError(f"unknown profile family {name!r}; choose from {FAMILIES}")


def _reject_params(name, params):
    if params:
        raise InvalidInputError(f"unexpected parameters for family {name!r}: {sorted(params)}")
