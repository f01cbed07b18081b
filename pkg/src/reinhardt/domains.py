"""Domain descriptions, basis lattices and radial shadows.

Every domain here is a complete Reinhardt domain in C^2, described by
its radial shadow: the image in the (r1, r2) quarter-plane.  Volume
integrals of |z^gamma|^2 reduce to 4*pi^2 times a double integral of
r1^(2*g1+1) * r2^(2*g2+1) over the shadow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidInputError
from .profiles import RadialProfile, profile_family

_E = math.e


@dataclass(frozen=True)
class MultiIndex:
    """A pair of monomial exponents (g1, g2) >= 0."""

    g1: int
    g2: int

    def __post_init__(self):
        if self.g1 != int(self.g1) or self.g2 != int(self.g2):
            raise InvalidInputError(f"multi-index components must be integers: {self}")
        if self.g1 < 0 or self.g2 < 0:
            raise InvalidInputError(f"multi-index components must be >= 0: {self}")
        object.__setattr__(self, "g1", int(self.g1))
        object.__setattr__(self, "g2", int(self.g2))

    @property
    def order(self) -> int:
        return self.g1 + self.g2

    def add(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(self.g1 + other.g1, self.g2 + other.g2)

    def sub(self, other: "MultiIndex") -> "MultiIndex | None":
        """Componentwise difference, or None if it leaves the quadrant."""
        g1, g2 = self.g1 - other.g1, self.g2 - other.g2
        if g1 < 0 or g2 < 0:
            return None
        return MultiIndex(g1, g2)

    def swap(self) -> "MultiIndex":
        return MultiIndex(self.g2, self.g1)

    def __iter__(self):
        return iter((self.g1, self.g2))

    def __repr__(self):
        return f"({self.g1},{self.g2})"


FULL_QUADRANT = "full_quadrant"
DIAGONAL = "diagonal"
DIAGONAL_TRUNCATED = "diagonal_truncated"


@dataclass(frozen=True)
class BasisLattice:
    """Which monomials z^gamma span the Bergman space of a domain."""

    kind: str
    k: int | None = None

    def __post_init__(self):
        if self.kind not in (FULL_QUADRANT, DIAGONAL, DIAGONAL_TRUNCATED):
            raise InvalidInputError(f"unknown lattice kind {self.kind!r}")
        if (self.kind == DIAGONAL_TRUNCATED) != (self.k is not None):
            raise InvalidInputError("truncated lattice needs k; others must not carry one")

    def contains(self, gamma: MultiIndex) -> bool:
        if self.kind == FULL_QUADRANT:
            return True
        if gamma.g1 != gamma.g2:
            return False
        return self.k is None or gamma.g1 <= self.k

    @staticmethod
    def full() -> "BasisLattice":
        return BasisLattice(FULL_QUADRANT)

    @staticmethod
    def diagonal() -> "BasisLattice":
        return BasisLattice(DIAGONAL)

    @staticmethod
    def diagonal_truncated(k: int) -> "BasisLattice":
        return BasisLattice(DIAGONAL_TRUNCATED, k)


# --------------------------------------------------------------------------
# Region pieces.  A piece lives on the r1 axis unless ``transposed``, in
# which case its geometry is stated with the axes swapped (the moment
# engine swaps gamma accordingly, and fiber queries invert numerically).
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BoxPiece:
    """An axis-aligned rectangle [r1_lo, r1_hi] x [r2_lo, r2_hi]."""

    r1_lo: float
    r1_hi: float
    r2_lo: float
    r2_hi: float

    def __post_init__(self):
        if not (0 <= self.r1_lo < self.r1_hi and 0 <= self.r2_lo < self.r2_hi):
            raise InvalidInputError(f"degenerate box {self}")

    bounded = True

    def fiber_at(self, r1: float):
        if self.r1_lo <= r1 <= self.r1_hi:
            return (self.r2_lo, self.r2_hi)
        return None


@dataclass(frozen=True, eq=False)
class FiberPiece:
    """A bounded piece r1 in [r1_lo, r1_hi], r2 in [lo(r1), hi(r1)].

    Fiber bounds are supplied as vectorized log-height callables so the
    moment engine can integrate without leaving the log domain.
    """

    r1_lo: float
    r1_hi: float
    log_hi: Callable
    log_lo: Callable | None = None
    label: str = ""

    bounded = True

    def hi(self, r1):
        return np.exp(self.log_hi(np.asarray(r1, dtype=float)))

    def lo(self, r1):
        if self.log_lo is None:
            return 0.0 * np.asarray(r1, dtype=float)
        return np.exp(self.log_lo(np.asarray(r1, dtype=float)))

    def fiber_at(self, r1: float):
        if self.r1_lo <= r1 <= self.r1_hi:
            return (float(self.lo(r1)), float(self.hi(r1)))
        return None


@dataclass(frozen=True)
class TailPiece:
    """An unbounded piece r1 in [r1_lo, inf), 0 <= r2 < coef * r1^r_pow * (log r1)^log_pow.

    The power/log exponents are the analytic tail description: they
    decide convergence of moments and bound truncation remainders.  When
    ``transposed`` the same geometry is meant with the axes swapped.
    """

    r1_lo: float
    coef: float = 1.0
    r_pow: float = -1.0
    log_pow: float = -1.0
    transposed: bool = False

    bounded = False

    def __post_init__(self):
        if self.r1_lo <= 1.0:
            raise InvalidInputError("tail pieces must start at r1 > 1 (log factor)")
        if self.coef <= 0:
            raise InvalidInputError("tail fiber coefficient must be positive")
        if self.log_pow > 0:
            raise InvalidInputError("growing log factors are not supported")

    def height(self, r: float) -> float:
        return self.coef * r ** self.r_pow * math.log(r) ** self.log_pow

    def fiber_at(self, r1: float):
        if self.transposed:
            # r2 ranges over { s >= r1_lo : height(s) > r1 }; the height is
            # decreasing, so the set is [r1_lo, H) for a numerically
            # inverted H (empty when even the left edge is too thin).
            if r1 <= 0 or self.height(self.r1_lo) <= r1:
                return None
            return (self.r1_lo, _invert_decreasing(self.height, self.r1_lo, r1))
        if r1 >= self.r1_lo:
            return (0.0, self.height(r1))
        return None


@dataclass(frozen=True)
class StripPiece:
    """The unbounded diagonal strip r1, r2 > 1, |r1 - r2| < (r1 + r2)^(-m).

    Carries no power/log tail description, so moments over it cannot be
    integrated; it exists to make the truncated Wiegerinck shadows
    geometrically faithful.
    """

    m: int

    bounded = False

    def __post_init__(self):
        if self.m < 1:
            raise InvalidInputError("strip exponent must be a positive integer")

    def fiber_at(self, r1: float):
        if r1 <= 1.0:
            return None
        lo = _bisect_root(lambda s: (r1 - s) - (r1 + s) ** (-self.m), 0.0, r1)
        hi = _bisect_root(lambda s: (s - r1) - (r1 + s) ** (-self.m), r1, 2.0 * r1 + 2.0)
        return (max(1.0, lo), hi)


RegionPiece = BoxPiece | FiberPiece | TailPiece | StripPiece


def _bisect_root(f, lo: float, hi: float, iters: int = 200) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise InvalidInputError("fiber bound bracketing failed")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _invert_decreasing(h, lo: float, target: float) -> float:
    hi = lo
    for _ in range(2000):
        hi *= 2.0
        if h(hi) <= target:
            break
    else:
        raise InvalidInputError("fiber inversion did not bracket")
    return _bisect_root(lambda s: h(s) - target, lo, hi)


@dataclass(frozen=True, eq=False)
class RadialRegion:
    """A union of pieces in the (r1, r2) quarter-plane.

    Pieces sharing an axis must have r1-intervals with disjoint
    interiors; pieces on opposite axes may only meet along boundaries of
    measure zero (the built-in shadows are constructed that way).
    """

    pieces: tuple
    bounded: bool = field(init=False)

    def __post_init__(self):
        if not self.pieces:
            raise InvalidInputError("a region needs at least one piece")
        spans = sorted(
            _r1_span(p) for p in self.pieces
            if not (isinstance(p, TailPiece) and p.transposed) and not isinstance(p, StripPiece)
        )
        for (alo, ahi), (blo, bhi) in zip(spans, spans[1:]):
            if blo < ahi - 1e-15:
                raise InvalidInputError("piece r1-intervals overlap")
        object.__setattr__(self, "bounded", all(p.bounded for p in self.pieces))

    def fiber_at(self, r1: float):
        """Merged list of r2-intervals of the region above r1."""
        fibers = [f for f in (p.fiber_at(r1) for p in self.pieces) if f is not None]
        fibers.sort()
        merged = []
        for lo, hi in fibers:
            if merged and lo <= merged[-1][1] + 1e-15:
                merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
            else:
                merged.append((lo, hi))
        return merged

    def contains(self, r1: float, r2: float) -> bool:
        return any(lo <= r2 < hi for lo, hi in self.fiber_at(r1))


def _r1_span(piece) -> tuple:
    if isinstance(piece, (BoxPiece, FiberPiece)):
        return (piece.r1_lo, piece.r1_hi)
    if isinstance(piece, TailPiece):
        return (piece.r1_lo, math.inf)
    raise InvalidInputError(f"piece without r1 span: {piece}")


# --------------------------------------------------------------------------
# Domain specifications.
# --------------------------------------------------------------------------

PROFILE = "profile"
REGION = "region"
POLYDISC = "polydisc"
BALL = "ball"
OMEGA0 = "omega0"
OMEGA_K = "omega_k"


@dataclass(frozen=True)
class DomainSpec:
    """A tagged complete Reinhardt domain in C^2.

    Use the classmethod constructors; the basis lattice is determined by
    the variant (diagonal monomials for the Wiegerinck domains, the full
    quadrant otherwise).
    """

    kind: str
    profile: RadialProfile | None = None
    radius2: float | None = None
    k: int | None = None
    region: RadialRegion | None = None

    @classmethod
    def profile_domain(cls, profile: RadialProfile) -> "DomainSpec":
        return cls(PROFILE, profile=profile)

    @classmethod
    def region_domain(cls, region: RadialRegion) -> "DomainSpec":
        return cls(REGION, region=region)

    @classmethod
    def polydisc(cls, radius2: float = 1.0) -> "DomainSpec":
        if not (radius2 > 0 and math.isfinite(radius2)):
            raise InvalidInputError("polydisc needs a positive finite second radius")
        return cls(POLYDISC, radius2=float(radius2))

    @classmethod
    def ball(cls) -> "DomainSpec":
        return cls(BALL)

    @classmethod
    def wiegerinck_omega0(cls) -> "DomainSpec":
        return cls(OMEGA0)

    @classmethod
    def wiegerinck_omega_k(cls, k: int) -> "DomainSpec":
        if k != int(k) or k < 1:
            raise InvalidInputError("the truncated Wiegerinck domain needs integer k >= 1")
        return cls(OMEGA_K, k=int(k))

    @property
    def lattice(self) -> BasisLattice:
        if self.kind == OMEGA0:
            return BasisLattice.diagonal()
        if self.kind == OMEGA_K:
            return BasisLattice.diagonal_truncated(self.k)
        return BasisLattice.full()

    def describe(self) -> str:
        if self.kind == PROFILE:
            ps = "".join(f":{k}={v:g}" for k, v in self.profile.params)
            return f"profile:{self.profile.name}{ps}"
        if self.kind == POLYDISC:
            return f"polydisc(radius2={self.radius2:g})"
        if self.kind == OMEGA_K:
            return f"omega_k(k={self.k})"
        return self.kind


def radial_shadow(spec: DomainSpec) -> RadialRegion:
    """The region in the (r1, r2) quarter-plane whose rotation recovers the domain."""
    if spec.kind == PROFILE:
        phi = spec.profile.phi
        return RadialRegion(pieces=(
            FiberPiece(0.0, 1.0, log_hi=lambda r: -phi(r), label=f"exp(-phi), {spec.profile!r}"),
        ))
    if spec.kind == REGION:
        return spec.region
    if spec.kind == POLYDISC:
        return RadialRegion(pieces=(BoxPiece(0.0, 1.0, 0.0, spec.radius2),))
    if spec.kind == BALL:
        return RadialRegion(pieces=(
            FiberPiece(0.0, 1.0, log_hi=lambda r: 0.5 * np.log1p(-np.square(r)), label="sqrt(1-r^2)"),
        ))
    if spec.kind == OMEGA0:
        return RadialRegion(pieces=_omega0_pieces())
    if spec.kind == OMEGA_K:
        return RadialRegion(pieces=_omega0_pieces() + (StripPiece(m=4 * spec.k),))
    raise InvalidInputError(f"unknown domain kind {spec.kind!r}")


def _omega0_pieces() -> tuple:
    # Square [0,e]^2 plus two hyperbola-like tails r2 < 1/(r1 log r1)
    # (one per axis), meeting the square along its outer edges.
    return (
        BoxPiece(0.0, _E, 0.0, _E),
        TailPiece(r1_lo=_E),
        TailPiece(r1_lo=_E, transposed=True),
    )


def builtin_domain(name: str, **kwargs) -> DomainSpec:
    """Convenience constructor used by the CLI config parser."""
    if name == POLYDISC:
        return DomainSpec.polydisc(kwargs.pop("radius", kwargs.pop("radius2", 1.0)))
    if name == BALL:
        return DomainSpec.ball()
    if name == OMEGA0:
        return DomainSpec.wiegerinck_omega0()
    if name == OMEGA_K:
        if "k" not in kwargs:
            raise InvalidInputError("omega_k needs k")
        return DomainSpec.wiegerinck_omega_k(kwargs.pop("k"))
    if name == PROFILE:
        family = kwargs.pop("family", None)
        if family is None:
            raise InvalidInputError("profile domain needs a family name")
        return DomainSpec.profile_domain(profile_family(family, kwargs.pop("params", kwargs)))
    raise InvalidInputError(f"unknown domain {name!r}")
