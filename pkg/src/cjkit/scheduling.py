"""Tournament scheduling and outcome simulation.

Two schedulers are provided. `random` draws a fresh uniformly random
perfect matching every round. `swiss` ranks items by current win count
(ties broken uniformly at random), then pairs first with second, third
with fourth, and so on; its first round is a random matching because no
wins exist yet. Rematches are allowed in both schemes, and with an odd
number of items the lowest-ranked item after tie-breaking sits the round
out. All randomness flows through numpy Generators so identical seeds
reproduce identical assessments exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .model import Assessment, Tournament, as_log_strengths

SCHEDULER_KINDS = ("random", "swiss")


@dataclass(frozen=True)
class SchedulerSpec:
    kind: str
    rounds: int = 20

    def __post_init__(self):
        if self.kind not in SCHEDULER_KINDS:
            raise ValueError(f"unknown scheduler kind {self.kind!r}; expected one of {SCHEDULER_KINDS}")
        if self.rounds < 1:
            raise ValueError("a schedule needs at least one round")


def derive_rng(seed, *keys: int) -> np.random.Generator:
    """Independent generator for (seed, keys); identical inputs, identical stream."""
    if isinstance(seed, np.random.Generator):
        if keys:
            raise ValueError("cannot derive a keyed stream from a live generator")
        return seed
    if isinstance(seed, np.random.SeedSequence):
        entropy = list(np.atleast_1d(np.asarray(seed.entropy)))
    elif isinstance(seed, (list, tuple)):
        entropy = [int(s) for s in seed]
    else:
        entropy = [int(seed)]
    return np.random.default_rng(np.random.SeedSequence(entropy + [int(k) for k in keys]))


def _adjacent_pairs(order: np.ndarray) -> tuple[tuple[int, int], ...]:
    out = []
    for k in range(order.shape[0] // 2):
        i, j = int(order[2 * k]), int(order[2 * k + 1])
        out.append((i, j) if i < j else (j, i))
    return tuple(out)


def random_round(n_items: int, rng: np.random.Generator) -> tuple[tuple[int, int], ...]:
    """Uniformly random perfect matching; with odd n one uniform item sits out."""
    if n_items < 2:
        raise ValueError("need at least 2 items to schedule a round")
    return _adjacent_pairs(rng.permutation(n_items))


def swiss_round(win_counts: np.ndarray, rng: np.random.Generator) -> tuple[tuple[int, int], ...]:
    """Pair adjacent items after sorting by descending wins, ties shuffled."""
    wins = np.asarray(win_counts, dtype=float)
    if wins.ndim != 1 or wins.shape[0] < 2:
        raise ValueError("win_counts must be a vector of at least 2 items")
    perm = rng.permutation(wins.shape[0])
    order = perm[np.argsort(-wins[perm], kind="stable")]
    return _adjacent_pairs(order)


def round_robin_rounds(n_items: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Circle-method schedule in which every pair meets exactly once."""
    if n_items < 2:
        raise ValueError("need at least 2 items")
    bye = n_items % 2 == 1
    size = n_items + 1 if bye else n_items
    others = list(range(1, size))
    rounds = []
    for _ in range(size - 1):
        layout = [0] + others
        pairs = []
        for k in range(size // 2):
            i, j = layout[k], layout[size - 1 - k]
            if bye and (i == n_items or j == n_items):
                continue  # the phantom opponent marks the sitting-out item
            pairs.append((i, j) if i < j else (j, i))
        rounds.append(tuple(sorted(pairs)))
        others = others[-1:] + others[:-1]
    return tuple(rounds)


def _draw_winners(pairs, lam, rng) -> tuple[int, ...]:
    u = rng.random(len(pairs))
    winners = []
    for (i, j), x in zip(pairs, u):
        p = expit(lam[i] - lam[j])
        winners.append(i if x < p else j)
    return tuple(winners)


def simulate_assessment(lambda_true: np.ndarray, spec: SchedulerSpec, seed) -> Assessment:
    """Simulate a full assessment under the given scheduler.

    Args:
        lambda_true: true item log-strengths.
        spec: scheduler kind and number of rounds.
        seed: anything accepted by numpy's default_rng (int, SeedSequence
            or Generator); identical seeds give byte-identical assessments.

    Returns:
        Assessment holding the realized tournament and every preference.
    """
    lam = as_log_strengths(lambda_true)
    n = lam.shape[0]
    rng = derive_rng(seed)
    rounds = []
    winners = []
    tally = np.zeros(n)
    for r in range(spec.rounds):
        if spec.kind == "swiss" and r > 0:
            pairs = swiss_round(tally, rng)
        else:
            pairs = random_round(n, rng)
        won = _draw_winners(pairs, lam, rng)
        for idx in won:
            tally[idx] += 1
        rounds.append(pairs)
        winners.append(won)
    return Assessment(Tournament(n, tuple(rounds)), tuple(winners))


def resimulate_assessment(
    base: Assessment, kind: str, lam: np.ndarray, rng: np.random.Generator
) -> Assessment:
    """Replay an assessment with outcomes redrawn at the given log-strengths.

    For random scheduling the original tournament is reused unchanged (the
    schedule never depended on outcomes). For swiss scheduling only the
    original first round is reused; later rounds are re-paired from the
    simulated standings, mirroring how the original schedule arose.
    """
    lam = as_log_strengths(lam, base.tournament.n_items)
    if kind not in SCHEDULER_KINDS:
        raise ValueError(f"unknown scheduler kind {kind!r}")
    t = base.tournament
    if kind == "random":
        winners = tuple(_draw_winners(rnd, lam, rng) for rnd in t.rounds)
        return Assessment(t, winners)

    n = t.n_items
    tally = np.zeros(n)
    rounds = []
    winners = []
    for r in range(t.n_rounds):
        pairs = t.rounds[0] if r == 0 else swiss_round(tally, rng)
        won = _draw_winners(pairs, lam, rng)
        for idx in won:
            tally[idx] += 1
        rounds.append(pairs)
        winners.append(won)
    return Assessment(Tournament(n, tuple(rounds)), tuple(winners))
