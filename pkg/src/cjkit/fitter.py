"""Gauss-Seidel fitting of penalized pairwise-comparison models.

The fitter solves the penalized score equations

    w_r + a_r(lam) = sum_j m_rj * p_rj(lam)      for every item r,

by cycling through items in ascending index order and applying clamped,
bracket-safeguarded Newton steps to each item's one-dimensional equation
while the others are held fixed (see _sweep). Every penalty is routed
through the same core by rewriting its score equation as "expected wins
match a target":

* none:    targets w_r on the observed comparisons.
* epsilon: targets moved once into [eps, m_r - eps]; the comparisons are
  untouched. On designs where items have unequal comparison totals the raw
  penalties do not sum to zero, so the raw equations admit no exact root;
  the uniform offset (the mean penalty) is removed from the targets, which
  makes the system consistent and is exactly the stationarity condition of
  the penalized likelihood over mean-zero vectors. Balanced designs have
  zero mean penalty, so there the raw equations are solved exactly.
* alpha:   plain targets on comparisons augmented by alpha/(n-1) wins for
  every ordered pair. The augmented score equals the penalized score
  identically.
* dummy:   every item additionally faces a fixed opponent of log-strength
  zero, c0 wins and c0 losses each.
* firth:   plain targets on leverage-adjusted counts (half a leverage added
  to each win count, a full one to each comparison count), with the
  leverages recomputed at the start of every sweep. The adjusted score at
  the current estimate equals the penalized score identically. `fit_firth`
  reaches the same fixed point by the alternative route of full refits on
  counts adjusted only between refits; the two agree to well below the
  convergence tolerance.

Reported log-strengths are recentred to mean zero. For the dummy penalty
the score equations are anchored rather than translation invariant, so the
residual refers to the anchored solution while the reported vector is the
recentred copy.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import expit

from .model import CountData, require_connected
from .penalties import (
    PenaltySpec,
    epsilon_penalties,
    firth_adjusted_counts,
    firth_penalties,
    pairwise_leverages,
)

STEP_CLAMP = 5.0  # max logit change per update step
_INNER_MAX = 25


class NonFiniteEstimateError(ValueError):
    """Unpenalized fit requested but the data are separated."""

    def __init__(self, items: list[int]):
        self.items = items
        shown = ", ".join(str(i) for i in items)
        super().__init__(
            f"maximum-likelihood estimate is not finite: item(s) {shown} were "
            f"never defeated, or never preferred, directly or through "
            f"intermediaries; use a penalty"
        )


class NotConvergedError(RuntimeError):
    """Iteration limit reached; `result` holds the partial fit."""

    def __init__(self, result: "FitResult"):
        self.result = result
        super().__init__(
            f"fit did not converge within {result.iterations} sweeps "
            f"(max score residual {result.max_score_residual:.3e})"
        )


@dataclass(frozen=True)
class FitConfig:
    tolerance: float = 1e-8
    max_iterations: int = 1000
    damping: float = 1.0

    def __post_init__(self):
        if not 0 < self.damping <= 1:
            raise ValueError("damping must be in (0, 1]")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class FitResult:
    """Fitted log-strengths (mean zero) plus convergence diagnostics."""

    log_strengths: np.ndarray = field(repr=False)
    iterations: int
    max_score_residual: float
    penalty: PenaltySpec
    converged: bool


def fit(counts: CountData, penalty: PenaltySpec | str = "none", config: FitConfig | None = None) -> FitResult:
    """Fit item log-strengths under the requested penalty.

    Args:
        counts: aggregated comparison data.
        penalty: PenaltySpec or one of its kind names (default constants).
        config: convergence settings; defaults to FitConfig().

    Returns:
        FitResult with mean-centred log-strengths.

    Raises:
        NonFiniteEstimateError: unpenalized fit with a fully (dis)preferred item.
        DisconnectedError: for kinds none, epsilon and firth when the
            comparison graph is disconnected (alpha and dummy stay solvable).
        NotConvergedError: iteration limit hit; carries the partial result.
    """
    if isinstance(penalty, str):
        penalty = PenaltySpec(penalty)
    if config is None:
        config = FitConfig()

    kind = penalty.kind
    c = penalty.constant
    if kind in ("epsilon", "alpha", "dummy") and c == 0.0:
        kind = "none"  # a zero constant degenerates to the plain MLE
    n = counts.n_items
    w = counts.item_wins
    m = counts.comparisons

    if kind in ("none", "epsilon", "firth"):
        require_connected(counts)
    if kind == "none":
        drifting = _separated_items(counts)
        if drifting:
            raise NonFiniteEstimateError(drifting)

    anchor_m = 0.0
    refresh = None
    m_eff = m
    if kind == "epsilon":
        pen = epsilon_penalties(counts, c)
        targets = w + pen - pen.mean()  # mean removal keeps the system consistent
    elif kind == "alpha":
        extra = c / (n - 1)
        m_eff = m + 2.0 * extra * (1.0 - np.eye(n))
        targets = w + c
    elif kind == "dummy":
        targets = w + c
        anchor_m = 2.0 * c
    elif kind == "firth":

        def refresh(lam):
            h = pairwise_leverages(counts, lam)
            return m + h, w + 0.5 * h.sum(axis=1)

        targets = None
    else:
        targets = w

    centre_during = kind != "dummy"  # the dummy anchor fixes the location
    result = _run(m_eff, targets, refresh, anchor_m, centre_during, penalty, config, np.zeros(n))
    if not result.converged:
        raise NotConvergedError(result)
    return result


def fit_firth(counts: CountData, config: FitConfig | None = None) -> FitResult:
    """Leverage-corrected fit via repeatedly refitting on adjusted counts.

    Alternates computing pair leverages at the current estimate with an
    unpenalized refit on counts adjusted by half a leverage per direction,
    until the estimate stops moving. Solves the same equations as
    ``fit(counts, "firth")`` by an independent route.
    """
    if config is None:
        config = FitConfig()
    require_connected(counts)
    penalty = PenaltySpec("firth")
    # tighter inner work so the outer fixed point meets the full tolerance
    inner_config = replace(config, tolerance=0.1 * config.tolerance)

    lam = np.zeros(counts.n_items)
    total_sweeps = 0
    converged = False
    for _ in range(config.max_iterations):
        adjusted = firth_adjusted_counts(counts, lam)
        inner = _run(
            adjusted.comparisons,
            adjusted.item_wins,
            None,
            0.0,
            True,
            penalty,
            inner_config,
            lam.copy(),
        )
        total_sweeps += inner.iterations
        moved = float(np.max(np.abs(inner.log_strengths - lam)))
        lam = np.array(inner.log_strengths)
        if not inner.converged:
            break
        if moved <= inner_config.tolerance:
            converged = True
            break

    g = counts.item_wins + firth_penalties(counts, lam) - _expected_wins(counts.comparisons, 0.0, lam)
    residual = float(np.max(np.abs(g)))
    result = FitResult(
        log_strengths=_centred(lam),
        iterations=total_sweeps,
        max_score_residual=residual,
        penalty=penalty,
        converged=converged and residual <= config.tolerance,
    )
    if not result.converged:
        raise NotConvergedError(result)
    return result


def _run(m_eff, targets, refresh, anchor_m, centre_during, penalty, config, lam):
    """Sweep until the score residual meets the tolerance."""
    inner_tol = 0.1 * config.tolerance
    iterations = 0
    converged = False
    if refresh is not None:
        m_eff, targets = refresh(lam)
    while iterations < config.max_iterations:
        g = _residual(lam, m_eff, targets, anchor_m)
        if np.max(np.abs(g)) <= config.tolerance:
            converged = True
            break
        _sweep(lam, m_eff, targets, anchor_m, config.damping, inner_tol)
        if centre_during:
            lam -= lam.mean()
        elif anchor_m > 0.0:
            lam += _anchor_shift(lam, inner_tol)
        iterations += 1
        if refresh is not None:
            m_eff, targets = refresh(lam)

    g = _residual(lam, m_eff, targets, anchor_m)
    residual = float(np.max(np.abs(g)))
    if not converged and residual <= config.tolerance:
        converged = True  # the final sweep was the one that got there
    return FitResult(
        log_strengths=_centred(lam),
        iterations=iterations,
        max_score_residual=residual,
        penalty=penalty,
        converged=converged,
    )


def _sweep(lam, m_eff, targets, anchor_m, damping, inner_tol):
    """One ascending Gauss-Seidel pass, updating lam in place.

    Each visit drives the item's one-dimensional score residual to zero
    with clamped Newton steps safeguarded by a bracket: the expected win
    count is increasing in the item's own log-strength, so every
    evaluation bounds the root from one side, and a step that would land
    outside the known bracket is replaced by its bisection. The safeguard
    is load-bearing, not belt-and-braces: from the flat tail of the
    sigmoid the raw step f / f' is essentially unbounded, and an
    unchecked clamped step taken there can jump several logits past the
    root and settle into a stable cross-sweep oscillation.
    """
    n = lam.shape[0]
    for r in range(n):
        row = m_eff[r]
        t = targets[r]
        x = lam[r]
        lo = -np.inf
        hi = np.inf
        for _ in range(_INNER_MAX):
            p = expit(x - lam)
            p[r] = 0.0  # row[r] is zero anyway; keep the dot product clean
            expected = row @ p
            slope = row @ (p * (1.0 - p))
            if anchor_m > 0.0:
                pa = expit(x)
                expected += anchor_m * pa
                slope += anchor_m * pa * (1.0 - pa)
            f = expected - t
            if abs(f) <= inner_tol:
                break
            if f > 0.0:
                hi = x
            else:
                lo = x
            step = f / max(slope, 1e-300)
            step = min(max(step, -STEP_CLAMP), STEP_CLAMP)
            x -= damping * step
            if not lo < x < hi:
                # a violated bound is always finite: the matching end was
                # set this iteration, the opposite one on an earlier sign
                x = 0.5 * (lo + hi)
        lam[r] = x


def _separated_items(counts: CountData) -> list[int]:
    """Items whose unpenalized estimate would drift to +/- infinity.

    On a connected comparison graph, the maximum likelihood estimate is
    finite exactly when the directed win graph is strongly connected. When
    it is not, the items in condensation components with no incoming (no
    defeats from outside) or no outgoing (no wins over outside) arcs drift
    without bound; those are the ones reported.
    """
    won = counts.wins > 0
    n_comp, labels = connected_components(csr_matrix(won), directed=True, connection="strong")
    if n_comp == 1:
        return []
    has_in = np.zeros(n_comp, dtype=bool)
    has_out = np.zeros(n_comp, dtype=bool)
    for i, j in zip(*np.nonzero(won)):
        if labels[i] != labels[j]:
            has_out[labels[i]] = True
            has_in[labels[j]] = True
    unbounded = ~(has_in & has_out)
    return [int(r) for r in range(counts.n_items) if unbounded[labels[r]]]


def _anchor_shift(lam, inner_tol):
    """Global shift solving the summed score equations of an anchored system.

    Pairwise expected wins cancel against pairwise targets in the sum, so
    only sum(sigma(lam + t)) = n/2 remains. Plain sweeps damp this common
    mode at the weak anchor rate only; solving for t directly removes it.
    The fixed point is unchanged (there t = 0 already satisfies the sum).
    """
    t = 0.0
    n = lam.shape[0]
    floor = 1e-12 * n
    for _ in range(_INNER_MAX):
        total = float(expit(lam + t).sum())
        if abs(total - 0.5 * n) <= inner_tol:
            break
        total = min(max(total, floor), n - floor)
        step = np.log(total) - np.log(n - total)  # logit step toward rate 1/2
        step = min(max(step, -STEP_CLAMP), STEP_CLAMP)
        t -= step
    return t


def _residual(lam, m_eff, targets, anchor_m):
    g = targets - _expected_wins(m_eff, anchor_m, lam)
    return g


def _expected_wins(m_eff, anchor_m, lam):
    p = expit(lam[:, None] - lam[None, :])
    expected = (m_eff * p).sum(axis=1)
    if anchor_m > 0.0:
        expected += anchor_m * expit(lam)
    return expected


def _centred(lam: np.ndarray) -> np.ndarray:
    out = lam - lam.mean()
    out.flags.writeable = False
    return out
