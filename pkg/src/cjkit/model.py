"""Core data structures and likelihood quantities for pairwise comparison data.

Items are indexed 0..n-1 and carry a log-strength each. The probability that
item i is preferred over item j in a single comparison is the logistic
function of the log-strength difference. Comparison outcomes are aggregated
into a dense win matrix; all likelihood quantities (log-likelihood, score,
observed information) are computed from that matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components as _cc
from scipy.special import expit, log_expit


class DisconnectedError(ValueError):
    """Comparison graph splits into groups with no comparisons between them.

    Relative strengths across groups are not identified, so estimators that
    rely only on observed comparisons cannot proceed. `components` lists the
    item indices of each group.
    """

    def __init__(self, components: list[list[int]]):
        self.components = components
        sizes = ", ".join(str(len(c)) for c in components)
        super().__init__(
            f"comparison graph has {len(components)} disconnected groups "
            f"(sizes {sizes}); relative strengths across groups are not identified"
        )


def _as_readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.flags.writeable = False
    return out


def as_log_strengths(values, n_items: int | None = None) -> np.ndarray:
    """Validate a log-strength vector: 1-D, finite, optionally of length n_items."""
    lam = np.asarray(values, dtype=float)
    if lam.ndim != 1:
        raise ValueError(f"log-strengths must be a 1-D vector, got shape {lam.shape}")
    if not np.all(np.isfinite(lam)):
        raise ValueError("log-strengths must be finite")
    if n_items is not None and lam.shape[0] != n_items:
        raise ValueError(f"expected {n_items} log-strengths, got {lam.shape[0]}")
    return lam


@dataclass(frozen=True)
class Tournament:
    """A schedule of comparison rounds.

    Each round is a tuple of unordered item-index pairs, stored as
    (low, high). An item appears in at most one pair per round; under the
    standard protocol with an even number of items every item appears exactly
    once per round, and with an odd number exactly one item sits out.
    """

    n_items: int
    rounds: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self):
        if self.n_items < 2:
            raise ValueError("a tournament needs at least 2 items")
        for r, rnd in enumerate(self.rounds):
            seen: set[int] = set()
            for i, j in rnd:
                if not (0 <= i < self.n_items and 0 <= j < self.n_items):
                    raise ValueError(f"round {r}: pair ({i},{j}) out of range")
                if i == j:
                    raise ValueError(f"round {r}: item {i} paired with itself")
                if i > j:
                    raise ValueError(f"round {r}: pair ({i},{j}) not stored as (low, high)")
                if i in seen or j in seen:
                    raise ValueError(f"round {r}: an item appears in more than one pair")
                seen.add(i)
                seen.add(j)

    @property
    def n_rounds(self) -> int:
        return len(self.rounds)


@dataclass(frozen=True)
class Assessment:
    """A tournament together with the preferred item of every scheduled pair."""

    tournament: Tournament
    winners: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        t = self.tournament
        if len(self.winners) != t.n_rounds:
            raise ValueError("winners must cover every round of the tournament")
        for r, (rnd, won) in enumerate(zip(t.rounds, self.winners)):
            if len(won) != len(rnd):
                raise ValueError(f"round {r}: one winner required per scheduled pair")
            for (i, j), w in zip(rnd, won):
                if w != i and w != j:
                    raise ValueError(f"round {r}: winner {w} is not in pair ({i},{j})")


@dataclass(frozen=True)
class CountData:
    """Aggregated comparison counts.

    `wins[i, j]` is the number of times item i was preferred over item j
    (fractional values allowed: adjusted counts stay valid count data).
    The symmetric comparison matrix is m = wins + wins.T.
    """

    wins: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.wins, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"wins must be a square matrix, got shape {w.shape}")
        if w.shape[0] < 2:
            raise ValueError("count data needs at least 2 items")
        if not np.all(np.isfinite(w)):
            raise ValueError("win counts must be finite")
        if np.any(w < 0):
            raise ValueError("win counts must be nonnegative")
        if np.any(np.diag(w) != 0):
            raise ValueError("diagonal win counts must be zero")
        object.__setattr__(self, "wins", _as_readonly(w))

    @property
    def n_items(self) -> int:
        return self.wins.shape[0]

    @property
    def comparisons(self) -> np.ndarray:
        return self.wins + self.wins.T

    @property
    def item_wins(self) -> np.ndarray:
        """Total wins per item, w_r."""
        return self.wins.sum(axis=1)

    @property
    def item_comparisons(self) -> np.ndarray:
        """Total comparisons per item, m_r."""
        return self.comparisons.sum(axis=1)


def counts_from_assessment(assessment: Assessment) -> CountData:
    """Tally every recorded preference into a win matrix."""
    n = assessment.tournament.n_items
    wins = np.zeros((n, n))
    for rnd, won in zip(assessment.tournament.rounds, assessment.winners):
        for (i, j), w in zip(rnd, won):
            loser = j if w == i else i
            wins[w, loser] += 1.0
    return CountData(wins)


def assessment_from_counts(counts: CountData) -> Assessment:
    """Expand integer count data into an assessment of one-pair rounds.

    Used when only aggregated counts are available: the tournament becomes
    the observed multiset of comparisons with one pair per round, which is
    exactly the structure a schedule-preserving resimulation needs.
    """
    wins = counts.wins
    if np.any(wins != np.round(wins)):
        raise ValueError("only integer counts can be expanded into comparisons")
    rounds = []
    winners = []
    for i in range(counts.n_items):
        for j in range(counts.n_items):
            for _ in range(int(round(wins[i, j]))):
                rounds.append(((min(i, j), max(i, j)),))
                winners.append((i,))
    if not rounds:
        raise ValueError("count data contains no comparisons")
    return Assessment(Tournament(counts.n_items, tuple(rounds)), tuple(winners))


def bt_probability(lambda_i: float, lambda_j: float) -> float:
    """Probability that the first item is preferred in a single comparison.

    Stable for log-strength differences up to several hundred; the exact
    value lies in (0, 1) but extreme differences round to 0.0 or 1.0.
    """
    if not (np.isfinite(lambda_i) and np.isfinite(lambda_j)):
        raise ValueError("log-strengths must be finite")
    return float(expit(lambda_i - lambda_j))


def probability_matrix(lam: np.ndarray) -> np.ndarray:
    """Matrix of pairwise preference probabilities, P[i, j] = P(i beats j)."""
    lam = as_log_strengths(lam)
    return expit(lam[:, None] - lam[None, :])


def log_likelihood(counts: CountData, lam: np.ndarray) -> float:
    """Log-likelihood of the counts under the given log-strengths.

    Zero counts contribute nothing, so structurally impossible pairs are
    simply absent; the result is always <= 0.
    """
    lam = as_log_strengths(lam, counts.n_items)
    # log P(i beats j) = log_expit(lam_i - lam_j), stable at large differences
    logp = log_expit(lam[:, None] - lam[None, :])
    return float(np.sum(counts.wins * logp))


def score_vector(counts: CountData, lam: np.ndarray) -> np.ndarray:
    """Gradient of the log-likelihood: w_r minus expected wins at lam."""
    lam = as_log_strengths(lam, counts.n_items)
    p = probability_matrix(lam)
    return counts.item_wins - (counts.comparisons * p).sum(axis=1)


def observed_information(counts: CountData, lam: np.ndarray) -> np.ndarray:
    """Negative Hessian of the log-likelihood (a weighted graph Laplacian)."""
    lam = as_log_strengths(lam, counts.n_items)
    p = probability_matrix(lam)
    weights = counts.comparisons * p * (1.0 - p)
    info = -weights
    np.fill_diagonal(info, weights.sum(axis=1))  # diagonal of weights is zero
    return info


def connected_components_of(counts: CountData) -> list[list[int]]:
    """Groups of items linked by at least one comparison, sorted by first member."""
    adjacency = (counts.comparisons > 0).astype(np.int8)
    n_comp, labels = _cc(adjacency, directed=False)
    groups: list[list[int]] = [[] for _ in range(n_comp)]
    for idx, lab in enumerate(labels):
        groups[lab].append(idx)
    groups.sort(key=lambda g: g[0])
    return groups


def require_connected(counts: CountData) -> None:
    groups = connected_components_of(counts)
    if len(groups) > 1:
        raise DisconnectedError(groups)
