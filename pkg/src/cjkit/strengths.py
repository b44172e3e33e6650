"""True log-strength grids used by the simulation studies.

Each generator places n items at evenly spaced quantiles of a reference
distribution calibrated to mean zero and standard deviation two: a normal,
a symmetric two-component normal mixture, and a right-skewed skew normal.
The normal and bimodal grids are antisymmetric by construction, so their
mean is zero exactly. The skew-normal CDF is evaluated through Owen's T
function and inverted by bracketed root-finding.

The skew-normal location as printed in the source material (+2.592, with a
doubling of the quantile) yields mean 10.4 and twice the target spread;
the corrected parameterization (location -2.592, no doubling) is the
default, and the printed form stays available via ``literal=True``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import ndtr, ndtri

SKEW_SHAPE = 8.0
SKEW_SCALE = 3.274
SKEW_LOCATION = -2.592

DISTRIBUTION_KINDS = ("normal", "bimodal", "skew_normal")


@dataclass(frozen=True)
class DistributionSpec:
    kind: str
    n_items: int = 100

    def __post_init__(self):
        if self.kind not in DISTRIBUTION_KINDS:
            raise ValueError(
                f"unknown distribution kind {self.kind!r}; expected one of {DISTRIBUTION_KINDS}"
            )
        if self.n_items < 2:
            raise ValueError("need at least 2 items")


def _mirrored(first_half: np.ndarray, n: int) -> np.ndarray:
    """Assemble an exactly antisymmetric grid from its lower half."""
    v = np.empty(n)
    half = n // 2
    v[:half] = first_half
    v[n - half:] = -first_half[::-1]
    if n % 2 == 1:
        v[half] = 0.0
    return v


def normal_strengths(n_items: int) -> np.ndarray:
    """Doubled normal quantiles at (k - 1/2)/n, k = 1..n."""
    if n_items < 2:
        raise ValueError("need at least 2 items")
    half = n_items // 2
    q = (np.arange(1, half + 1) - 0.5) / n_items
    return _mirrored(2.0 * ndtri(q), n_items)


def bimodal_strengths(n_items: int) -> np.ndarray:
    """Two shifted normal quantile grids, scaled back to overall spread two.

    The lower half places n/2 items on the quantiles of a normal centred at
    -3, the upper half mirrors it at +3, and the factor 2/3.174 restores a
    standard deviation of two for the mixture.
    """
    if n_items < 2 or n_items % 2 == 1:
        raise ValueError("the bimodal grid needs an even number of items")
    half = n_items // 2
    q = (np.arange(1, half + 1) - 0.5) / half
    low = (2.0 / 3.174) * (ndtri(q) - 3.0)
    return _mirrored(low, n_items)


def owens_t(h: float, a: float) -> float:
    """Owen's T function by adaptive quadrature of its defining integral.

    T(h, a) integrates exp(-h^2 (1 + x^2) / 2) / (2 pi (1 + x^2)) for x
    from 0 to a; it is odd in a and T(h, 0) = 0.
    """
    h = float(h)
    a = float(a)
    if not (np.isfinite(h) and np.isfinite(a)):
        raise ValueError("owens_t arguments must be finite")
    if a == 0.0:
        return 0.0
    hh = 0.5 * h * h

    def integrand(x):
        s = 1.0 + x * x
        return np.exp(-hh * s) / s

    value, _ = quad(integrand, 0.0, a, epsabs=1e-14, epsrel=1e-13, limit=200)
    return value / (2.0 * np.pi)


def skew_normal_cdf(x: float, shape: float = SKEW_SHAPE, scale: float = SKEW_SCALE,
                    location: float = SKEW_LOCATION) -> float:
    """CDF of the skew normal, Phi(z) - 2 T(z, shape) with z standardized."""
    z = (float(x) - location) / scale
    return float(ndtr(z) - 2.0 * owens_t(z, shape))


def _skew_quantile(u: float, shape: float, scale: float, location: float) -> float:
    if not 0.0 < u < 1.0:
        raise ValueError("quantile level must be in (0, 1)")
    lo = location - 12.0 * scale
    hi = location + 12.0 * scale
    return brentq(
        lambda x: skew_normal_cdf(x, shape, scale, location) - u,
        lo,
        hi,
        xtol=1e-12,
        rtol=8.9e-16,
    )


def skew_normal_strengths(n_items: int, literal: bool = False) -> np.ndarray:
    """Skew-normal quantile grid at (k - 1/2)/n, k = 1..n.

    With ``literal=True`` the grid follows the printed form (location
    +2.592 and doubled values) instead of the corrected mean-zero,
    spread-two parameterization.
    """
    if n_items < 2:
        raise ValueError("need at least 2 items")
    location = -SKEW_LOCATION if literal else SKEW_LOCATION
    factor = 2.0 if literal else 1.0
    q = (np.arange(1, n_items + 1) - 0.5) / n_items
    return np.array([factor * _skew_quantile(u, SKEW_SHAPE, SKEW_SCALE, location) for u in q])


def true_strengths(spec: DistributionSpec) -> np.ndarray:
    """Grid of true log-strengths for a distribution spec."""
    if spec.kind == "normal":
        return normal_strengths(spec.n_items)
    if spec.kind == "bimodal":
        return bimodal_strengths(spec.n_items)
    return skew_normal_strengths(spec.n_items)
