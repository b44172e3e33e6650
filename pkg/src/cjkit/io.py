"""CSV and JSON interchange.

Comparison data travels as CSV with a header of ``round,winner,loser``
(the round column is optional and a ``judge`` column is accepted but
ignored). Fitted strengths, study summaries, pair matrices and SD series
each have a fixed column layout, and every float is rendered with 17
significant digits so a write/read round trip reproduces values exactly.
Run configurations are JSON documents whose fields mirror the CLI flags;
flags override file values.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace

import numpy as np

from .bootstrap import BiasCorrectedResult
from .metrics import StudyReport
from .model import Assessment, CountData, Tournament
from .penalties import PENALTY_KINDS, PenaltySpec
from .scheduling import SCHEDULER_KINDS
from .strengths import DISTRIBUTION_KINDS


class ComparisonFormatError(ValueError):
    """Malformed comparison or table file; message carries the line number."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_rows(path) -> tuple[list[str], list[tuple[int, int, int]], bool]:
    """Labels in first-appearance order plus (round, winner, loser) rows."""
    labels: list[str] = []
    index: dict[str, int] = {}

    def item(label: str) -> int:
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
        return index[label]

    rows: list[tuple[int, int, int]] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ComparisonFormatError(f"{path}: empty file")
        fields = [f.strip() for f in reader.fieldnames]
        if "winner" not in fields or "loser" not in fields:
            raise ComparisonFormatError(f"{path}:1: header must contain winner and loser columns")
        has_round = "round" in fields
        for row in reader:
            line = reader.line_num
            winner = (row.get("winner") or "").strip()
            loser = (row.get("loser") or "").strip()
            if not winner or not loser:
                raise ComparisonFormatError(f"{path}:{line}: winner and loser are required")
            if winner == loser:
                raise ComparisonFormatError(f"{path}:{line}: winner and loser are the same item")
            rnd = 0
            if has_round:
                raw = (row.get("round") or "").strip()
                try:
                    rnd = int(raw)
                except ValueError:
                    raise ComparisonFormatError(f"{path}:{line}: round must be an integer, got {raw!r}") from None
                if rnd < 0:
                    raise ComparisonFormatError(f"{path}:{line}: round must be nonnegative")
            rows.append((rnd, item(winner), item(loser)))
    if not rows:
        raise ComparisonFormatError(f"{path}: no comparisons found")
    return labels, rows, has_round


def read_comparisons(path) -> tuple[list[str], CountData]:
    """Aggregate a comparison CSV into count data.

    Returns the item labels in order of first appearance and the win
    matrix in that indexing.
    """
    labels, rows, _ = _parse_rows(path)
    n = len(labels)
    if n < 2:
        raise ComparisonFormatError(f"{path}: need at least 2 distinct items")
    wins = np.zeros((n, n))
    for _, w, l in rows:
        wins[w, l] += 1.0
    return labels, CountData(wins)


def read_assessment(path) -> tuple[list[str], Assessment]:
    """Rebuild round structure from a comparison CSV.

    Requires the round column; within each round an item may appear in at
    most one pair, as produced by the schedulers here. Needed when the
    rounds themselves matter, e.g. to bias-correct swiss-scheduled data.
    """
    labels, rows, has_round = _parse_rows(path)
    if not has_round:
        raise ComparisonFormatError(f"{path}: a round column is required to rebuild rounds")
    if len(labels) < 2:
        raise ComparisonFormatError(f"{path}: need at least 2 distinct items")
    order = sorted({r for r, _, _ in rows})
    pos = {r: k for k, r in enumerate(order)}
    rounds: list[list[tuple[int, int]]] = [[] for _ in order]
    winners: list[list[int]] = [[] for _ in order]
    for rnd, w, l in rows:
        k = pos[rnd]
        rounds[k].append((min(w, l), max(w, l)))
        winners[k].append(w)
    try:
        tournament = Tournament(len(labels), tuple(tuple(r) for r in rounds))
        assessment = Assessment(tournament, tuple(tuple(w) for w in winners))
    except ValueError as exc:
        raise ComparisonFormatError(f"{path}: {exc}") from None
    return labels, assessment


def write_comparisons(path, labels: list[str], assessment: Assessment) -> None:
    """Write an assessment as a round,winner,loser CSV."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["round", "winner", "loser"])
        for r, (rnd, won) in enumerate(zip(assessment.tournament.rounds, assessment.winners)):
            for (i, j), w in zip(rnd, won):
                loser = j if w == i else i
                out.writerow([r, labels[w], labels[loser]])


def write_fit(path, labels: list[str], log_strengths) -> None:
    lam = np.asarray(log_strengths, dtype=float)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["item", "lambda"])
        for label, value in zip(labels, lam):
            out.writerow([label, _fmt(value)])


def read_fit(path) -> tuple[list[str], np.ndarray]:
    labels, values = [], []
    with open(path, newline="") as fh:
        for row in _table(fh, path, ["item", "lambda"]):
            labels.append(row[0])
            values.append(float(row[1]))
    return labels, np.array(values)


def write_study(path, report: StudyReport) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["item", "true_lambda", "bias", "mae"])
        for i, (t, b, m) in enumerate(
            zip(report.true_log_strengths, report.per_item_bias, report.per_item_mae)
        ):
            out.writerow([i, _fmt(t), _fmt(b), _fmt(m)])


def read_study(path) -> dict[str, np.ndarray]:
    items, truth, bias_, mae = [], [], [], []
    with open(path, newline="") as fh:
        for row in _table(fh, path, ["item", "true_lambda", "bias", "mae"]):
            items.append(int(row[0]))
            truth.append(float(row[1]))
            bias_.append(float(row[2]))
            mae.append(float(row[3]))
    return {
        "item": np.array(items),
        "true_lambda": np.array(truth),
        "bias": np.array(bias_),
        "mae": np.array(mae),
    }


def write_matrix(path, matrix) -> None:
    """Write the strict upper triangle of a square pair matrix."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["i", "j", "value"])
        n = m.shape[0]
        for i in range(n):
            for j in range(i + 1, n):
                out.writerow([i, j, _fmt(m[i, j])])


def read_matrix(path) -> np.ndarray:
    entries = []
    size = 0
    with open(path, newline="") as fh:
        for row in _table(fh, path, ["i", "j", "value"]):
            i, j, v = int(row[0]), int(row[1]), float(row[2])
            entries.append((i, j, v))
            size = max(size, i + 1, j + 1)
    out = np.zeros((size, size))
    for i, j, v in entries:
        out[i, j] = v
        out[j, i] = v
    return out


def write_sd_series(path, sds) -> None:
    values = np.asarray(sds, dtype=float)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["sim", "sd"])
        for k, v in enumerate(values):
            out.writerow([k, _fmt(v)])


def read_sd_series(path) -> np.ndarray:
    values = []
    with open(path, newline="") as fh:
        for row in _table(fh, path, ["sim", "sd"]):
            values.append(float(row[1]))
    return np.array(values)


def write_bootstrap(path, labels: list[str], result: BiasCorrectedResult) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["item", "lambda_original", "lambda_corrected", "ci_lower", "ci_upper"])
        for k, label in enumerate(labels):
            out.writerow(
                [
                    label,
                    _fmt(result.original[k]),
                    _fmt(result.corrected[k]),
                    _fmt(result.ci_lower[k]),
                    _fmt(result.ci_upper[k]),
                ]
            )


def _table(fh, path, expected_header):
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        raise ComparisonFormatError(f"{path}: empty file")
    if [h.strip() for h in header] != expected_header:
        raise ComparisonFormatError(
            f"{path}:1: expected header {','.join(expected_header)}, got {','.join(header)}"
        )
    for row in reader:
        if not row:
            continue
        if len(row) != len(expected_header):
            raise ComparisonFormatError(f"{path}:{reader.line_num}: expected {len(expected_header)} columns")
        yield row


@dataclass(frozen=True)
class RunConfig:
    """Study settings shared by the CLI commands; flags override fields."""

    distributions: tuple[str, ...] = ("normal",)
    schedulers: tuple[str, ...] = ("random",)
    penalties: tuple[PenaltySpec, ...] = (PenaltySpec("alpha"),)
    n_items: int = 100
    rounds: int = 20
    n_sims: int = 100
    bootstrap_m: int = 40
    ci_level: float = 0.95
    seed: int = 0
    out_dir: str = "."
    jobs: int = 1

    def __post_init__(self):
        for d in self.distributions:
            if d not in DISTRIBUTION_KINDS:
                raise ValueError(f"unknown distribution {d!r}")
        for s in self.schedulers:
            if s not in SCHEDULER_KINDS:
                raise ValueError(f"unknown scheduler {s!r}")
        if self.n_items < 2 or self.rounds < 1 or self.n_sims < 1 or self.bootstrap_m < 2:
            raise ValueError("n_items, rounds, n_sims and bootstrap_m must be positive (m at least 2)")
        if not 0.0 < self.ci_level < 1.0:
            raise ValueError("ci_level must be in (0, 1)")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


_CONFIG_ALIASES = {
    "distribution": "distributions",
    "scheduler": "schedulers",
    "penalty": "penalties",
}


def _as_penalty(entry) -> PenaltySpec:
    if isinstance(entry, str):
        return PenaltySpec(entry)
    if isinstance(entry, dict):
        kind = entry.get("kind")
        if kind not in PENALTY_KINDS:
            raise ValueError(f"unknown penalty kind {kind!r}")
        return PenaltySpec(kind, entry.get("constant"))
    raise ValueError(f"cannot interpret penalty entry {entry!r}")


def load_run_config(path) -> RunConfig:
    """Parse a JSON run configuration; unknown keys are rejected."""
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ComparisonFormatError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(raw, dict):
        raise ComparisonFormatError(f"{path}: the configuration must be a JSON object")
    known = set(RunConfig.__dataclass_fields__)
    kwargs = {}
    for key, value in raw.items():
        name = _CONFIG_ALIASES.get(key, key)
        if name not in known:
            raise ComparisonFormatError(f"{path}: unknown configuration key {key!r}")
        if name in ("distributions", "schedulers", "penalties") and not isinstance(value, list):
            value = [value]
        if name == "penalties":
            value = tuple(_as_penalty(v) for v in value)
        elif name in ("distributions", "schedulers"):
            value = tuple(value)
        kwargs[name] = value
    try:
        return RunConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ComparisonFormatError(f"{path}: {exc}") from None


def apply_overrides(config: RunConfig, **overrides) -> RunConfig:
    """Copy of the config with every non-None override applied."""
    updates = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key in ("distributions", "schedulers") and isinstance(value, str):
            value = (value,)
        if key == "penalties" and isinstance(value, (str, PenaltySpec)):
            value = (PenaltySpec(value) if isinstance(value, str) else value,)
        updates[key] = value
    return replace(config, **updates) if updates else config
