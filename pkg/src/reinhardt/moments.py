"""Log-domain monomial moments over complete Reinhardt domains.

The central quantities are the radial integrals

    M(x, y) = integral_0^1 r^x exp(-y phi(r)) dr

and the squared monomial norms c_gamma^2, which reduce to M via

    c_gamma^2 = 2 pi^2 / (g2 + 1) * M(2 g1 + 1, 2 g2 + 2)

on profile domains and to piecewise shadow integrals otherwise.  Closed
forms are used where a family admits one; everything else goes through
the adaptive log-domain quadrature.  Results are memoized keyed by
(domain identity, arguments, settings); the cache never changes values.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .domains import (
    BoxPiece,
    DomainSpec,
    FiberPiece,
    MultiIndex,
    RadialRegion,
    TailPiece,
    radial_shadow,
)
from .errors import InvalidInputError
from .logdomain import LOG_ZERO, LogValue, log_add_exp, log_sub_exp, log_sum_exp
from .profiles import RadialProfile
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings, log_integrate
from .wiegerinck import omega0_log_ck_sq

_LOG_4PI2 = math.log(4.0 * math.pi**2)
_LOG_2PI2 = math.log(2.0 * math.pi**2)


class Divergent:
    """Sentinel for moments of monomials that are not square-integrable."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Divergent"


DIVERGENT = Divergent()


def _log_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


# --------------------------------------------------------------------------
# Radial integrals M(x, y) for profile domains.
# --------------------------------------------------------------------------


def log_radial_moment(
    profile: RadialProfile,
    x: float,
    y: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> LogValue:
    """log of M(x, y) = integral_0^1 r^x exp(-y phi(r)) dr.

    Families with a closed form bypass quadrature entirely:
    phi = 0 gives 1/(x+1); phi = -log(1-r^2) gives B((x+1)/2, y+1)/2
    via log-gamma (substitute u = r^2).
    """
    return log_profile_interval_moment(profile, x, y, 0.0, 1.0, settings)


def log_profile_interval_moment(
    profile: RadialProfile,
    x: float,
    y: float,
    lo: float,
    hi: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> LogValue:
    """log of integral_lo^hi r^x exp(-y phi(r)) dr."""
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInputError(f"moment exponents must be finite, got x={x}, y={y}")
    if x < 0 or y < 0:
        raise InvalidInputError(f"moment exponents must be >= 0, got x={x}, y={y}")
    if not (0.0 <= lo < hi <= 1.0):
        raise InvalidInputError(f"interval [{lo}, {hi}] must sit inside [0, 1]")
    return LogValue(
        _cached_interval_moment(profile, float(x), float(y), float(lo), float(hi), settings)
    )


@lru_cache(maxsize=None)
def _cached_interval_moment(profile, x, y, lo, hi, settings) -> float:
    full = lo == 0.0 and hi == 1.0
    if full and profile.name == "zero":
        return -math.log(x + 1.0)
    if full and profile.name == "neg_log_one_minus_r2":
        return math.log(0.5) + _log_beta(0.5 * (x + 1.0), y + 1.0)
    log_f = _profile_log_integrand(profile, x, y)
    presplit = _auto_presplit(profile, x, y, lo, hi, settings)
    return log_integrate(log_f, lo, hi, settings, presplit=presplit)


def _profile_log_integrand(profile, x, y):
    phi = profile.phi

    def log_f(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            out = np.zeros_like(r)
            if x != 0.0:
                out = out + x * np.log(r)
            if y != 0.0:
                out = out - y * phi(r)
        return out

    return log_f


def _auto_presplit(profile, x, y, lo, hi, settings):
    """Initial panel cuts: a graded mesh around the integrand peak plus a
    split where y*phi has already killed the integrand.

    The cut separating the decayed right end sits at the first grid
    point where y*phi(r) exceeds log(1/rel_tol) + |max of the
    log-integrand|; the graded mesh halves toward the peak so that
    sharply concentrated integrands resolve in one or two rounds.
    """
    if settings.endpoint_split is not None:
        return (settings.endpoint_split,)
    grid = np.linspace(lo, hi, 258)[1:-1]
    log_f = _profile_log_integrand(profile, x, y)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        values = np.asarray(log_f(grid), dtype=float)
    finite = np.isfinite(values)
    if not finite.any():
        return ()
    peak = float(grid[int(np.argmax(np.where(finite, values, -np.inf)))])
    width = hi - lo
    cuts = {peak + sign * width * 0.5 ** j for j in range(1, 10) for sign in (-1.0, 1.0)}

    if y != 0.0 and profile.unbounded:
        with np.errstate(over="ignore"):
            phis = y * np.asarray(profile.phi(grid), dtype=float)
        threshold = math.log(1.0 / settings.rel_tol) + abs(float(np.max(values[finite])))
        exceeded = np.nonzero(phis >= threshold)[0]
        if exceeded.size:
            cuts.add(float(grid[exceeded[0]]))
    return tuple(c for c in cuts if lo < c < hi)


# --------------------------------------------------------------------------
# Shadow-region moments: c_gamma^2 = 4 pi^2 * double integral over the
# shadow of r1^(2g1+1) r2^(2g2+1).
# --------------------------------------------------------------------------


def log_region_moment(
    region: RadialRegion,
    gamma: MultiIndex,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
):
    """log c_gamma^2 over a shadow region, or DIVERGENT.

    Convergence on unbounded pieces is decided from their recorded
    power/log tail exponents, never from runaway quadrature; pieces
    without a tail description are rejected.
    """
    for piece in region.pieces:
        if isinstance(piece, TailPiece):
            if not _tail_converges(piece, gamma):
                return DIVERGENT
        elif not piece.bounded:
            raise InvalidInputError(
                f"cannot integrate over unbounded piece without a tail description: {piece!r}"
            )
    parts = [_piece_log_moment(piece, gamma, settings) for piece in region.pieces]
    return LogValue(_LOG_4PI2 + log_sum_exp(parts))


def _tail_exponents(piece: TailPiece, gamma: MultiIndex):
    g = gamma.swap() if piece.transposed else gamma
    y_exp = 2.0 * g.g2 + 2.0
    x_exp = 2.0 * g.g1 + 1.0 + piece.r_pow * y_exp
    m_exp = piece.log_pow * y_exp
    return x_exp, m_exp, y_exp


def _tail_converges(piece: TailPiece, gamma: MultiIndex) -> bool:
    x_exp, m_exp, _ = _tail_exponents(piece, gamma)
    return x_exp < -1.0 or (x_exp == -1.0 and m_exp < -1.0)


def _piece_log_moment(piece, gamma: MultiIndex, settings) -> float:
    if isinstance(piece, BoxPiece):
        return _axis_log_moment(piece.r1_lo, piece.r1_hi, 2 * gamma.g1 + 1) + \
            _axis_log_moment(piece.r2_lo, piece.r2_hi, 2 * gamma.g2 + 1)
    if isinstance(piece, FiberPiece):
        return _fiber_log_moment(piece, gamma, settings)
    if isinstance(piece, TailPiece):
        return _tail_log_moment(piece, gamma, settings)
    raise InvalidInputError(f"cannot integrate piece {piece!r}")


def _axis_log_moment(lo: float, hi: float, power: int) -> float:
    # integral_lo^hi r^power dr, in log form
    p1 = power + 1.0
    top = p1 * math.log(hi)
    bottom = p1 * math.log(lo) if lo > 0.0 else LOG_ZERO
    return log_sub_exp(top, bottom) - math.log(p1)


def _fiber_log_moment(piece: FiberPiece, gamma: MultiIndex, settings) -> float:
    y_exp = 2.0 * gamma.g2 + 2.0
    x_exp = 2.0 * gamma.g1 + 1.0
    log_hi, log_lo = piece.log_hi, piece.log_lo

    def log_f(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            top = y_exp * np.asarray(log_hi(r), dtype=float)
            if log_lo is not None:
                bottom = y_exp * np.asarray(log_lo(r), dtype=float)
                top = top + np.log1p(-np.exp(np.minimum(bottom - top, 0.0)))
            return x_exp * np.log(r) + top - math.log(y_exp)

    return log_integrate(log_f, piece.r1_lo, piece.r1_hi, settings)


def _tail_log_moment(piece: TailPiece, gamma: MultiIndex, settings) -> float:
    """Integrate a tail piece in t = log r1 coordinates.

    The fiber integral turns the outer integrand into
    coef^Y / Y * exp((X+1) t) * t^m with X, m from the tail exponents;
    X = -1 is a pure power of t with an exact antiderivative, X < -1
    decays exponentially and is truncated once the analytic remainder
    bound drops below rel_tol of the accumulated value.
    """
    x_exp, m_exp, y_exp = _tail_exponents(piece, gamma)
    const = y_exp * math.log(piece.coef) - math.log(y_exp)
    t0 = math.log(piece.r1_lo)
    if x_exp == -1.0:
        return const + (m_exp + 1.0) * math.log(t0) - math.log(-m_exp - 1.0)

    s = -(x_exp + 1.0)

    def log_f(t):
        t = np.asarray(t, dtype=float)
        return -s * t + m_exp * np.log(t)

    width = (math.log(1.0 / settings.rel_tol) + 46.0) / s
    t_hi = t0 + width
    total = log_integrate(log_f, t0, t_hi, settings)
    for _ in range(64):
        # remainder <= t_hi^m exp(-s t_hi) / s since m <= 0
        log_tail = m_exp * math.log(t_hi) - s * t_hi - math.log(s)
        if log_tail <= math.log(settings.rel_tol) + total:
            return const + total
        chunk = log_integrate(log_f, t_hi, t_hi + width, settings)
        total = log_add_exp(total, chunk)
        t_hi += width
    raise InvalidInputError("tail truncation failed to meet tolerance")


# --------------------------------------------------------------------------
# Squared monomial norms and basis membership.
# --------------------------------------------------------------------------


def log_c_gamma_sq(
    spec: DomainSpec,
    gamma: MultiIndex,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
):
    """log c_gamma^2 for the domain, or DIVERGENT when gamma is off-basis.

    Profile domains reduce to the radial integral M(2g1+1, 2g2+2); the
    Wiegerinck domains use the diagonal closed form (for the truncated
    family only the shared Omega_0 region is counted, the connecting
    strip is never integrated); everything else integrates the shadow.
    """
    result = _cached_c_gamma_sq(spec, gamma, settings)
    return result if result is DIVERGENT else LogValue(result)


@lru_cache(maxsize=None)
def _cached_c_gamma_sq(spec: DomainSpec, gamma: MultiIndex, settings):
    if spec.kind == "profile":
        radial = _cached_interval_moment(
            spec.profile, 2.0 * gamma.g1 + 1.0, 2.0 * gamma.g2 + 2.0, 0.0, 1.0, settings
        )
        return _LOG_2PI2 - math.log(gamma.g2 + 1.0) + radial
    if spec.kind in ("omega0", "omega_k"):
        if not spec.lattice.contains(gamma):
            return DIVERGENT
        return omega0_log_ck_sq(gamma.g1).log
    result = log_region_moment(radial_shadow(spec), gamma, settings)
    return result if result is DIVERGENT else result.log


def monomial_in_basis(spec: DomainSpec, gamma: MultiIndex) -> bool:
    """Whether z^gamma is square-integrable, hence a basis monomial.

    Built-in variants answer from their lattice; generic bounded regions
    always contain every monomial; generic unbounded regions run the
    analytic tail convergence test.
    """
    if spec.kind == "region":
        if spec.region.bounded:
            return True
        for piece in spec.region.pieces:
            if isinstance(piece, TailPiece):
                if not _tail_converges(piece, gamma):
                    return False
            elif not piece.bounded:
                raise InvalidInputError(
                    "membership on unbounded pieces needs a tail description"
                )
        return True
    return spec.lattice.contains(gamma)


def clear_moment_caches():
    """Drop memoized moments (useful in long test sessions)."""
    _cached_interval_moment.cache_clear()
    _cached_c_gamma_sq.cache_clear()
