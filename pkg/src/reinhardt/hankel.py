"""Hilbert-Schmidt diagnostics for Hankel operators with anti-holomorphic symbols.

For a symbol index alpha the series of interest is

    S_alpha = sum over basis gamma of
              c_(gamma+alpha)^2 / c_gamma^2  -  c_gamma^2 / c_(gamma-alpha)^2,

with the second ratio read as 0 whenever gamma - alpha leaves the basis
lattice (the Bergman projection of zbar^alpha z^gamma vanishes there).
Summands are nonnegative by Cauchy-Schwarz.  Partial sums are taken over
the simplex |gamma| <= N, which makes the series telescope: S_alpha(N)
equals the sum of c_(gamma+alpha)^2/c_gamma^2 over the last |alpha|
shells.  The squared Hilbert-Schmidt norm of the Hankel operator with
symbol conjugate(f) is sum over alpha of |f_alpha|^2 S_alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .domains import DIAGONAL, DIAGONAL_TRUNCATED, DomainSpec, MultiIndex
from .errors import InvalidInputError
from .moments import DIVERGENT, log_c_gamma_sq
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings

# ---------------------------------------------------------------------------
# Growth classifications.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DivergentLinear:
    slope: float
    intercept: float = 0.0
    fit_residual: float = 0.0

    label = "DivergentLinear"


@dataclass(frozen=True)
class Convergent:
    limit: float
    tail: float = 0.0

    label = "Convergent"


@dataclass(frozen=True)
class Inconclusive:
    reason: str = ""

    label = "Inconclusive"


Classification = DivergentLinear | Convergent | Inconclusive

_LINEAR_RESIDUAL_MAX = 0.05   # relative residual of the upper-half line
_LINEAR_SPAN_MIN = 2.0        # values must at least double over the samples
_EXTRAPOLATION_RTOL = 1e-3    # Richardson diagonal agreement for convergence


def classify_growth(partials) -> Classification:
    """Classify a sequence of (N, value) partial sums.

    A positive-slope affine fit on the upper half of the samples, with
    small residual against all samples and at least a 2x value span,
    reads as linear divergence.  Otherwise, decaying increments plus a
    Richardson extrapolation (polynomial in 1/N) that stabilizes to
    relative 1e-3 reads as convergence.  Anything else is inconclusive.
    """
    points = [(int(n), float(v)) for n, v in partials]
    if len(points) < 8:
        raise InvalidInputError(f"classification needs >= 8 samples, got {len(points)}")
    ns = np.array([n for n, _ in points], dtype=float)
    if not np.all(np.diff(ns) > 0):
        raise InvalidInputError("sample indices must be strictly increasing")
    vs = np.array([v for _, v in points], dtype=float)

    half = len(points) // 2
    slope, intercept = np.polyfit(ns[half:], vs[half:], 1)
    scale = math.sqrt(float(np.mean(np.square(vs)))) or 1.0
    residual = math.sqrt(float(np.mean(np.square(vs - (intercept + slope * ns))))) / scale
    span_ok = vs.min() > 0 and vs.max() >= _LINEAR_SPAN_MIN * vs.min()
    if slope > 0 and residual < _LINEAR_RESIDUAL_MAX and span_ok:
        return DivergentLinear(slope=float(slope), intercept=float(intercept),
                               fit_residual=residual)

    converged = _extrapolate(ns, vs)
    if converged is not None:
        return converged
    return Inconclusive(reason="neither the linear fit nor the extrapolation stabilized")


def _extrapolate(ns, vs) -> Convergent | None:
    diffs = np.diff(vs)
    scale = float(np.max(np.abs(vs))) or 1.0
    for a, b in zip(diffs, diffs[1:]):
        if abs(b) > abs(a) * (1.0 - 1e-6) + 1e-12 * scale:
            return None
    # Neville tableau in h = 1/N, extrapolating to h = 0.
    tail_pts = min(6, len(ns))
    h = (1.0 / ns[-tail_pts:]).tolist()
    tableau = [vs[-tail_pts:].tolist()]
    diagonal = [tableau[0][-1]]
    for depth in range(1, tail_pts):
        prev = tableau[-1]
        row = []
        for i in range(len(prev) - 1):
            ratio = h[i] / h[i + depth]
            row.append(prev[i + 1] + (prev[i + 1] - prev[i]) / (ratio - 1.0))
        tableau.append(row)
        diagonal.append(row[-1])
    last, before = diagonal[-1], diagonal[-2]
    if not (math.isfinite(last) and abs(last - before) <= _EXTRAPOLATION_RTOL * max(abs(last), 1e-300)):
        return None
    return Convergent(limit=last, tail=abs(last - vs[-1]) + abs(last - before))


# ---------------------------------------------------------------------------
# Series terms, partial sums and shell bounds.
# ---------------------------------------------------------------------------


def _log_c(spec: DomainSpec, gamma: MultiIndex, settings) -> float:
    value = log_c_gamma_sq(spec, gamma, settings)
    if value is DIVERGENT:
        raise InvalidInputError(f"monomial z^{gamma} is not square-integrable on {spec.describe()}")
    return value.log


def _check_alpha(spec: DomainSpec, alpha: MultiIndex, nonzero: bool):
    if not spec.lattice.contains(alpha):
        raise InvalidInputError(f"symbol index {alpha} is not in the Bergman space of {spec.describe()}")
    if nonzero and alpha.order == 0:
        raise InvalidInputError("symbol index alpha must be nonzero")


def hs_term(
    spec: DomainSpec,
    gamma: MultiIndex,
    alpha: MultiIndex,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """One summand of S_alpha, via log-moment differences.

    Nonnegative up to quadrature noise; exactly 0 at alpha = 0.
    """
    _check_alpha(spec, alpha, nonzero=False)
    if not spec.lattice.contains(gamma):
        raise InvalidInputError(f"gamma {gamma} is not in the basis lattice")
    if alpha.order == 0:
        return 0.0
    up = gamma.add(alpha)
    if not spec.lattice.contains(up):
        raise InvalidInputError(
            f"gamma+alpha {up} leaves the basis lattice; the operator is "
            "unbounded on this basis vector"
        )
    log_mid = _log_c(spec, gamma, settings)
    term = math.exp(_log_c(spec, up, settings) - log_mid)
    down = gamma.sub(alpha)
    if down is not None and spec.lattice.contains(down):
        term -= math.exp(log_mid - _log_c(spec, down, settings))
    return term


def _shell(spec: DomainSpec, n: int):
    """Lattice points of the n-th shell (|gamma| = n, or diagonal index n)."""
    lattice = spec.lattice
    if lattice.kind == DIAGONAL:
        return (MultiIndex(n, n),)
    if lattice.kind == DIAGONAL_TRUNCATED:
        return (MultiIndex(n, n),) if n <= lattice.k else ()
    return tuple(MultiIndex(k, n - k) for k in range(n + 1))


@lru_cache(maxsize=None)
def _shell_term_sum(spec: DomainSpec, alpha: MultiIndex, n: int, settings) -> float:
    terms = [
        hs_term(spec, gamma, alpha, settings)
        for gamma in _shell(spec, n)
        if spec.lattice.contains(gamma.add(alpha))
    ]
    return math.fsum(terms)


def s_alpha_partial(
    spec: DomainSpec,
    alpha: MultiIndex,
    n: int,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """S_alpha truncated to the simplex |gamma| <= n (diagonal index <= n).

    On finite-dimensional lattices, summands whose gamma+alpha leaves
    the lattice are omitted (the operator is only considered on the
    subspace where it is bounded).
    """
    _check_alpha(spec, alpha, nonzero=True)
    if n != int(n) or n < 1:
        raise InvalidInputError(f"truncation index must be a positive integer, got {n!r}")
    return math.fsum(_shell_term_sum(spec, alpha, m, settings) for m in range(int(n) + 1))


def s_alpha_partials(spec, alpha, ns, settings=DEFAULT_SETTINGS):
    """(n, S_alpha(n)) along a ladder of truncation indices."""
    return tuple((n, s_alpha_partial(spec, alpha, n, settings)) for n in ns)


def shell_bound(
    spec: DomainSpec,
    alpha: MultiIndex,
    n: int,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """The single-shell lower bound: sum over |gamma| = n of c_(gamma+alpha)^2/c_gamma^2."""
    _check_alpha(spec, alpha, nonzero=True)
    if n != int(n) or n < 0:
        raise InvalidInputError(f"shell index must be a nonnegative integer, got {n!r}")
    ratios = []
    for gamma in _shell(spec, int(n)):
        up = gamma.add(alpha)
        if not spec.lattice.contains(up):
            continue
        ratios.append(math.exp(_log_c(spec, up, settings) - _log_c(spec, gamma, settings)))
    return math.fsum(ratios)


# ---------------------------------------------------------------------------
# Symbols, Hilbert-Schmidt norms, reports.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolSpec:
    """A finitely supported symbol, as coefficients in the orthonormal basis.

    ``coeffs`` maps a multi-index alpha to f_alpha, the coefficient of
    z^alpha / c_alpha.
    """

    coeffs: tuple

    @classmethod
    def from_dict(cls, mapping) -> "SymbolSpec":
        items = []
        for key, value in mapping.items():
            if not isinstance(key, MultiIndex):
                key = MultiIndex(*key)
            items.append((key, complex(value)))
        items.sort(key=lambda kv: (kv[0].order, kv[0].g1))
        return cls(coeffs=tuple(items))


def hs_norm_sq(
    spec: DomainSpec,
    symbol: SymbolSpec,
    n: int,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
):
    """Truncated squared HS norm and its per-alpha breakdown.

    Returns (lower bound, tuple of (alpha, |f_alpha|^2, S_alpha(n)));
    the alpha = 0 coefficient contributes nothing, so constant symbols
    come out at exactly 0.
    """
    for alpha, _ in symbol.coeffs:
        if not spec.lattice.contains(alpha):
            raise InvalidInputError(
                f"symbol not in Bergman space: index {alpha} is off the basis lattice"
            )
    orders = [alpha.order for alpha, _ in symbol.coeffs]
    if n != int(n) or n < max(orders, default=1):
        raise InvalidInputError("truncation index must be >= every symbol index order")
    breakdown = []
    for alpha, coeff in symbol.coeffs:
        weight = abs(coeff) ** 2
        if alpha.order == 0 or weight == 0.0:
            continue
        breakdown.append((alpha, weight, s_alpha_partial(spec, alpha, int(n), settings)))
    total = math.fsum(w * s for _, w, s in breakdown)
    return total, tuple(breakdown)


@dataclass(frozen=True)
class SAlphaReport:
    """Everything measured about one symbol index on one domain."""

    alpha: MultiIndex
    partials: tuple
    shell_bounds: tuple
    classification: Classification
    certificate_bounds: tuple | None = None


def build_s_alpha_report(
    spec: DomainSpec,
    alpha: MultiIndex,
    ns,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    certificate_bounds=None,
) -> SAlphaReport:
    ns = [int(n) for n in ns]
    partials = s_alpha_partials(spec, alpha, ns, settings)
    shells = tuple((n, shell_bound(spec, alpha, n, settings)) for n in ns)
    if len(partials) >= 8:
        classification = classify_growth(partials)
    else:
        classification = Inconclusive(reason=f"only {len(partials)} samples")
    return SAlphaReport(
        alpha=alpha,
        partials=partials,
        shell_bounds=shells,
        classification=classification,
        certificate_bounds=tuple(certificate_bounds) if certificate_bounds else None,
    )


SYMBOL_IN_SPACE = "ok"
SYMBOL_NOT_IN_SPACE = "symbol-not-in-space"


@dataclass(frozen=True)
class DbarCoordinate:
    alpha: MultiIndex
    status: str
    partials: tuple = ()
    classification: Classification | None = None


@dataclass(frozen=True)
class DbarReport:
    """Hilbert-Schmidt test of the canonical solution operator for dbar.

    Restricted to (0,1)-forms with holomorphic coefficients the operator
    is a sum of Hankel operators with the coordinate conjugates as
    symbols, so it is Hilbert-Schmidt iff both coordinate series
    converge.
    """

    coordinates: tuple
    verdict: str


def dbar_canonical_report(
    spec: DomainSpec,
    n: int,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> DbarReport:
    coordinates = []
    for alpha in (MultiIndex(1, 0), MultiIndex(0, 1)):
        if not spec.lattice.contains(alpha):
            coordinates.append(DbarCoordinate(alpha=alpha, status=SYMBOL_NOT_IN_SPACE))
            continue
        ns = sample_ladder(n)
        partials = s_alpha_partials(spec, alpha, ns, settings)
        if len(partials) >= 8:
            classification = classify_growth(partials)
        else:
            classification = Inconclusive(reason=f"only {len(partials)} samples")
        coordinates.append(DbarCoordinate(
            alpha=alpha, status=SYMBOL_IN_SPACE,
            partials=partials, classification=classification,
        ))
    statuses = [c.status for c in coordinates]
    classes = [c.classification for c in coordinates]
    if SYMBOL_NOT_IN_SPACE in statuses:
        verdict = "symbols not in Bergman space"
    elif any(isinstance(c, DivergentLinear) for c in classes):
        verdict = "not Hilbert-Schmidt"
    elif all(isinstance(c, Convergent) for c in classes):
        verdict = "Hilbert-Schmidt"
    else:
        verdict = "inconclusive"
    return DbarReport(coordinates=tuple(coordinates), verdict=verdict)


def sample_ladder(n_max: int, n_step: int | None = None, min_points: int = 8):
    """Truncation indices n_step, 2*n_step, ..., <= n_max."""
    if n_max != int(n_max) or n_max < 1:
        raise InvalidInputError(f"n_max must be a positive integer, got {n_max!r}")
    n_max = int(n_max)
    if n_step is None:
        n_step = max(1, n_max // min_points)
    if n_step != int(n_step) or n_step < 1:
        raise InvalidInputError(f"n_step must be a positive integer, got {n_step!r}")
    return tuple(range(int(n_step), n_max + 1, int(n_step)))


def clear_series_caches():
    _shell_term_sum.cache_clear()
