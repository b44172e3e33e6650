"""Score penalties that keep pairwise-comparison estimates finite and shrunk.

Each penalty adds a term a_r to item r's score equation, so the fitted
log-strengths solve w_r + a_r = sum_j m_rj p_rj. Four kinds are supported:

* ``epsilon``: data-only adjustment moving each item's win total into
  [eps, m_r - eps]; equivalently a_r = eps * (1 - 2 w_r / m_r).
* ``alpha``: a_r = alpha * (1 - 2 * mean of p_rj over opponents); the same
  as granting every ordered pair alpha/(n-1) extra wins.
* ``dummy``: a_r = c0 * (1 - 2 p_r0) where p_r0 is the win probability
  against a phantom opponent of log-strength zero; the same as c0 wins and
  c0 losses against that opponent.
* ``firth``: half the per-pair hat-matrix leverages, a_r =
  sum_j h_rj (1/2 - p_rj); equivalently fitting on counts adjusted by h/2.

The leverage of each aggregated pair is taken from the binomial-regression
hat matrix with one row per observed pair; the whole row leverage is
attributed to its pair. On a connected graph the leverages over distinct
pairs sum to n - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .model import CountData, as_log_strengths, probability_matrix, require_connected

PENALTY_KINDS = ("none", "epsilon", "alpha", "dummy", "firth")

# default shrinkage constants; "none" and "firth" take no constant
DEFAULT_CONSTANTS = {"none": 0.0, "epsilon": 0.3, "alpha": 0.3, "dummy": 0.25, "firth": 0.0}


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty kind plus its constant (ignored for none and firth)."""

    kind: str
    constant: float | None = None

    def __post_init__(self):
        if self.kind not in PENALTY_KINDS:
            raise ValueError(f"unknown penalty kind {self.kind!r}; expected one of {PENALTY_KINDS}")
        c = self.constant
        if c is None:
            c = DEFAULT_CONSTANTS[self.kind]
        c = float(c)
        if c < 0:
            raise ValueError("penalty constant must be nonnegative")
        object.__setattr__(self, "constant", c)


def epsilon_penalties(counts: CountData, constant: float = 0.3) -> np.ndarray:
    """Win-ratio adjustment for every item; zero where an item has no comparisons."""
    w = counts.item_wins
    m = counts.item_comparisons
    out = np.zeros_like(w)
    np.divide(w, m, out=out, where=m > 0)
    return np.where(m > 0, constant * (1.0 - 2.0 * out), 0.0)


def epsilon_penalty(r: int, counts: CountData, constant: float = 0.3) -> float:
    return float(epsilon_penalties(counts, constant)[r])


def alpha_penalties(lam: np.ndarray, constant: float = 0.3) -> np.ndarray:
    """Shrinkage toward equal strength via the mean win probability over opponents."""
    lam = as_log_strengths(lam)
    n = lam.shape[0]
    p = probability_matrix(lam)
    mean_p = (p.sum(axis=1) - 0.5) / (n - 1)  # drop the diagonal 0.5
    return constant * (1.0 - 2.0 * mean_p)


def alpha_penalty(r: int, lam: np.ndarray, constant: float = 0.3) -> float:
    return float(alpha_penalties(lam, constant)[r])


def dummy_penalties(lam: np.ndarray, constant: float = 0.25) -> np.ndarray:
    """Shrinkage from phantom comparisons against a fixed opponent at zero."""
    lam = as_log_strengths(lam)
    return constant * (1.0 - 2.0 * expit(lam))


def dummy_penalty(r: int, lam: np.ndarray, constant: float = 0.25) -> float:
    return float(dummy_penalties(lam, constant)[r])


def pairwise_leverages(counts: CountData, lam: np.ndarray) -> np.ndarray:
    """Hat-matrix leverage of every observed pair, as a symmetric matrix.

    Entry (i, j) is the leverage of the aggregated comparisons between i and
    j at the given log-strengths; zero for pairs never compared. Requires a
    connected comparison graph.

    Raises:
        DisconnectedError: if the comparison graph is not connected.
    """
    lam = as_log_strengths(lam, counts.n_items)
    require_connected(counts)
    m = counts.comparisons
    p = probability_matrix(lam)
    weights = m * p * (1.0 - p)

    # Information of the identified model: drop item 0 as reference. The
    # leverages do not depend on which item is dropped.
    info = -weights
    np.fill_diagonal(info, weights.sum(axis=1))
    reduced = info[1:, 1:]
    inv = np.linalg.inv(reduced)

    n = counts.n_items
    ext = np.zeros((n, n))
    ext[1:, 1:] = inv
    d = np.diag(ext)
    quad = d[:, None] + d[None, :] - 2.0 * ext  # (e_i - e_j)' inv (e_i - e_j)
    h = weights * quad
    return np.where(m > 0, h, 0.0)


def firth_penalties(counts: CountData, lam: np.ndarray) -> np.ndarray:
    """Jeffreys-style score adjustment from per-pair leverages."""
    lam = as_log_strengths(lam, counts.n_items)
    h = pairwise_leverages(counts, lam)
    p = probability_matrix(lam)
    return (h * (0.5 - p)).sum(axis=1)


def firth_penalty(r: int, counts: CountData, lam: np.ndarray) -> float:
    return float(firth_penalties(counts, lam)[r])


def firth_adjusted_counts(counts: CountData, lam: np.ndarray) -> CountData:
    """Counts with half of each pair's leverage added to both directions.

    The adjusted comparison totals gain the full leverage per pair, so the
    result is again consistent count data.
    """
    h = pairwise_leverages(counts, lam)
    return CountData(counts.wins + 0.5 * h)
