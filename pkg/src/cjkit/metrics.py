"""Accuracy and spread summaries for simulation studies.

Bias and mean absolute error are computed per item across repeated
simulated assessments; the spread of one fitted vector is its sample
standard deviation. The empirical comparison probability records how often
each pair met at least once across an ensemble of assessments, and the
penalty profiles expose which pairs a penalty's likelihood factors weight
most, for comparison against that matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .model import Assessment, as_log_strengths


def _estimate_matrix(estimates) -> np.ndarray:
    est = np.asarray(estimates, dtype=float)
    if est.ndim != 2:
        raise ValueError(f"estimates must be a (n_sims, n_items) matrix, got shape {est.shape}")
    return est


def bias(estimates, truth) -> np.ndarray:
    """Per-item mean estimate minus truth across simulations."""
    est = _estimate_matrix(estimates)
    truth = as_log_strengths(truth, est.shape[1])
    return est.mean(axis=0) - truth


def mean_absolute_error(estimates, truth) -> np.ndarray:
    """Per-item mean absolute deviation from truth across simulations."""
    est = _estimate_matrix(estimates)
    truth = as_log_strengths(truth, est.shape[1])
    return np.abs(est - truth).mean(axis=0)


def sd_of_estimates(lam) -> float:
    """Sample standard deviation (divisor n - 1) of one fitted vector."""
    lam = as_log_strengths(lam)
    if lam.shape[0] < 2:
        raise ValueError("need at least 2 items")
    return float(np.std(lam, ddof=1))


def empirical_comparison_probability(assessments) -> np.ndarray:
    """Fraction of assessments in which each pair met at least once.

    All assessments must cover the same number of items. The diagonal is
    zero.
    """
    total = 0
    met_sum = None
    for a in assessments:
        if not isinstance(a, Assessment):
            raise ValueError("expected an iterable of Assessment objects")
        n = a.tournament.n_items
        if met_sum is None:
            met_sum = np.zeros((n, n))
        elif met_sum.shape[0] != n:
            raise ValueError("assessments cover different numbers of items")
        met = np.zeros((n, n), dtype=bool)
        for rnd in a.tournament.rounds:
            for i, j in rnd:
                met[i, j] = True
                met[j, i] = True
        met_sum += met
        total += 1
    if total == 0:
        raise ValueError("need at least one assessment")
    return met_sum / total


def penalty_profile(lam, kind: str, constant: float | None = None) -> np.ndarray:
    """Pairwise intensity profile of the dummy or alpha penalty.

    Entry (i, j) is the product of preference probabilities appearing in
    the penalty's likelihood contribution for that pair: p_ij * p_ji for
    ``alpha`` (in (0, 1/4]) and p_i0 * p_0i * p_j0 * p_0j for ``dummy``
    (in (0, 1/16], via the phantom zero-strength opponent). The shape does
    not depend on the penalty constant, which is accepted only for
    interface symmetry. The diagonal is zero.
    """
    lam = as_log_strengths(lam)
    if kind == "alpha":
        p = expit(lam[:, None] - lam[None, :])
        out = p * p.T
    elif kind == "dummy":
        p0 = expit(lam)  # win probability against the phantom opponent
        down = p0 * (1.0 - p0)
        out = down[:, None] * down[None, :]
    else:
        raise ValueError(f"no pairwise profile for penalty kind {kind!r}")
    np.fill_diagonal(out, 0.0)
    return out


def profile_correlation(probability: np.ndarray, profile: np.ndarray) -> float:
    """Pearson correlation between two pair matrices over i < j entries."""
    a = np.asarray(probability, dtype=float)
    b = np.asarray(profile, dtype=float)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrices must be square and of equal shape")
    iu = np.triu_indices(a.shape[0], k=1)
    x, y = a[iu], b[iu]
    if x.std() == 0.0 or y.std() == 0.0:
        return float("nan")  # constant matrix: correlation undefined
    return float(np.corrcoef(x, y)[0, 1])


@dataclass(frozen=True)
class StudyReport:
    """Per-item accuracy and per-simulation spread for one study cell."""

    true_log_strengths: np.ndarray = field(repr=False)
    per_item_bias: np.ndarray = field(repr=False)
    per_item_mae: np.ndarray = field(repr=False)
    per_sim_sd: np.ndarray = field(repr=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = np.asarray(self.true_log_strengths).shape[0]
        for name in ("per_item_bias", "per_item_mae"):
            if np.asarray(getattr(self, name)).shape != (n,):
                raise ValueError(f"{name} must have one entry per item ({n})")
