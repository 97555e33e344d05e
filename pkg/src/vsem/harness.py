"""Batch experiment harness: shuffled seeded runs, prediction scoring, CSV curves.

Each run shuffles the dataset's sequences, replays them through a fresh
memory with a fresh simulated user, and scores the model's pre-feedback
predictions at every iteration. Scores are pooled across runs into
per-iteration accuracy curves and written as one CSV per supervision rate.

Seeding is hierarchical: run r of master seed s derives its own seed
material as SeedSequence(s, spawn_key=(r,)), so results are identical
however the runs are scheduled across worker processes.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .dataset import DatasetManifest
from .errors import PreconditionError
from .learner import Decision, DecisionKind, process_encounter
from .memory import Memory
from .oracle import SimulatedUser
from .perception import Encounter, perceive

CSV_COLUMNS = ("run_count", "alpha", "iteration", "genus_acc", "diff_acc",
               "diff_acc_with_view", "diff_acc_without_view")


@dataclass(frozen=True)
class RunConfig:
    """Knobs of one experiment: supervision rate, perception, seeding, smoothing."""

    alpha: float
    runs: int = 200
    window: int = 50
    stride: int = 15
    bootstrap: int = 5
    smoothing: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise PreconditionError(f"alpha must lie in [0, 1], got {self.alpha}")
        for name in ("runs", "window", "stride", "smoothing"):
            if getattr(self, name) < 1:
                raise PreconditionError(f"{name} must be >= 1")
        if self.bootstrap < 0:
            raise PreconditionError("bootstrap must be >= 0")


@dataclass(frozen=True)
class IterationRecord:
    """Scores of one iteration: genus verdict, differentia verdict (if scorable)."""

    genus_correct: bool
    differentia_correct: bool | None
    has_differentia: bool


@dataclass
class RunResult:
    records: list[IterationRecord]
    memory: Memory


def score_genus_prediction(pre_existing_genus_tags: set[str], decision: Decision,
                           encounter_genus: str, matched_genus_tag: str | None) -> bool:
    """Was the genus-level placement right?

    If some object of the encounter's genus already existed, the match must
    point at an object of that genus. If none existed, the model had to
    found a brand-new object with no same-genus link.
    """
    if encounter_genus in pre_existing_genus_tags:
        return decision.matched_object is not None and matched_genus_tag == encounter_genus
    return decision.kind is DecisionKind.NEW_OBJECT


def score_differentia_prediction(decision: Decision, genus_correct: bool,
                                 encounter_instance: str,
                                 matched_instance_tag: str | None) -> bool | None:
    """Was "different individual than the match" predicted right?

    Only scored when the genus placement was correct and a match exists;
    ground truth is instance identity, whether or not the encounter happens
    to show the discriminative view.
    """
    if not genus_correct or decision.matched_object is None:
        return None
    truth = encounter_instance != matched_instance_tag
    return decision.predicted_different == truth


def run_single(encounters: Sequence[Encounter], labels: dict[str, tuple[str, str]],
               has_differentia: dict[str, bool], config: RunConfig,
               run_index: int) -> RunResult:
    """One shuffled pass over the dataset with a fresh memory and user."""
    root = np.random.SeedSequence(entropy=config.seed, spawn_key=(run_index,))
    shuffle_seed, oracle_seed = root.spawn(2)
    order = np.random.default_rng(shuffle_seed).permutation(len(encounters))

    memory = Memory()
    user = SimulatedUser(config.alpha, labels, oracle_seed, bootstrap=config.bootstrap)
    records: list[IterationRecord] = []
    for index in order:
        encounter = encounters[index]
        genus_label, instance_id = labels[encounter.sequence_id]
        pre_tags = {user.genus_tag(oid) for oid in memory.objects}

        decision = process_encounter(memory, encounter, user)
        if decision.created_object is not None:
            user.tag_object(decision.created_object, encounter.sequence_id)

        matched = decision.matched_object
        matched_genus = user.genus_tag(matched) if matched is not None else None
        matched_instance = user.instance_tag(matched) if matched is not None else None
        genus_correct = score_genus_prediction(pre_tags, decision, genus_label, matched_genus)
        diff_correct = score_differentia_prediction(decision, genus_correct,
                                                    instance_id, matched_instance)
        records.append(IterationRecord(genus_correct, diff_correct,
                                       has_differentia[encounter.sequence_id]))
    return RunResult(records, memory)


@dataclass
class AccuracyCurves:
    """Pooled per-iteration accuracies for one supervision rate.

    Numerators and denominators are kept separately so the moving average
    can pool counts over its window instead of averaging ratios with
    unequal support. With smoothing 1 the accessors return the raw pooled
    means. Entries whose window saw no scorable iteration are NaN.
    """

    alpha: float
    run_count: int
    smoothing: int
    genus_num: np.ndarray
    genus_den: np.ndarray
    diff_num: np.ndarray
    diff_den: np.ndarray
    diff_with_num: np.ndarray
    diff_with_den: np.ndarray
    diff_without_num: np.ndarray
    diff_without_den: np.ndarray
    records: list[list[IterationRecord]] = field(repr=False, default_factory=list)

    @property
    def iterations(self) -> int:
        return int(self.genus_num.shape[0])

    def _smoothed(self, num: np.ndarray, den: np.ndarray) -> np.ndarray:
        out = np.full(num.shape[0], np.nan)
        for i in range(num.shape[0]):
            lo = max(0, i - self.smoothing + 1)
            n = num[lo:i + 1].sum()
            d = den[lo:i + 1].sum()
            if d > 0:
                out[i] = n / d
        return out

    @property
    def genus_accuracy(self) -> np.ndarray:
        return self._smoothed(self.genus_num, self.genus_den)

    @property
    def differentia_accuracy(self) -> np.ndarray:
        return self._smoothed(self.diff_num, self.diff_den)

    @property
    def differentia_accuracy_with_view(self) -> np.ndarray:
        return self._smoothed(self.diff_with_num, self.diff_with_den)

    @property
    def differentia_accuracy_without_view(self) -> np.ndarray:
        return self._smoothed(self.diff_without_num, self.diff_without_den)

    def to_csv(self, path: str | Path) -> None:
        """One row per iteration; unscorable accuracies stay empty."""
        columns = zip(self.genus_accuracy, self.differentia_accuracy,
                      self.differentia_accuracy_with_view,
                      self.differentia_accuracy_without_view)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for iteration, values in enumerate(columns):
                row = [str(self.run_count), repr(float(self.alpha)), str(iteration)]
                row.extend("" if np.isnan(v) else repr(float(v)) for v in values)
                writer.writerow(row)


def aggregate(per_run_records: list[list[IterationRecord]], alpha: float,
              smoothing: int) -> AccuracyCurves:
    """Pool per-run iteration records into accuracy curves."""
    if not per_run_records:
        raise PreconditionError("need at least one run to aggregate")
    iterations = max(len(r) for r in per_run_records)
    shape = (iterations,)
    counters = {name: np.zeros(shape, dtype=np.int64) for name in
                ("genus_num", "genus_den", "diff_num", "diff_den",
                 "diff_with_num", "diff_with_den", "diff_without_num", "diff_without_den")}
    for records in per_run_records:
        for i, rec in enumerate(records):
            counters["genus_den"][i] += 1
            counters["genus_num"][i] += rec.genus_correct
            if rec.differentia_correct is None:
                continue
            counters["diff_den"][i] += 1
            counters["diff_num"][i] += rec.differentia_correct
            which = "diff_with" if rec.has_differentia else "diff_without"
            counters[which + "_den"][i] += 1
            counters[which + "_num"][i] += rec.differentia_correct
    return AccuracyCurves(alpha=alpha, run_count=len(per_run_records), smoothing=smoothing,
                          records=per_run_records, **counters)


_WORKER_STATE: dict = {}


def _init_worker(encounters, labels, has_differentia, config) -> None:
    _WORKER_STATE["args"] = (encounters, labels, has_differentia, config)


def _run_worker(run_index: int) -> list[IterationRecord]:
    encounters, labels, has_differentia, config = _WORKER_STATE["args"]
    return run_single(encounters, labels, has_differentia, config, run_index).records


def perceive_manifest(manifest: DatasetManifest, config: RunConfig) -> list[Encounter]:
    """Perceive every sequence once; runs only reshuffle the result."""
    return [perceive(manifest.load_frames(rec.sequence_id), window=config.window,
                     stride=config.stride, sequence_id=rec.sequence_id)
            for rec in manifest.sequences]


def run_experiment(manifest: DatasetManifest, config: RunConfig,
                   jobs: int = 1) -> AccuracyCurves:
    """All runs of one supervision rate, optionally spread over processes.

    The aggregate is independent of `jobs`: per-run seeds depend only on
    (master seed, run index) and pooling happens in run order.
    """
    if jobs < 1:
        raise PreconditionError("jobs must be >= 1")
    encounters = perceive_manifest(manifest, config)
    labels = manifest.labels()
    has_differentia = {rec.sequence_id: rec.has_differentia for rec in manifest.sequences}

    if jobs == 1:
        per_run = [run_single(encounters, labels, has_differentia, config, r).records
                   for r in range(config.runs)]
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(encounters, labels, has_differentia,
                                           config)) as pool:
            per_run = list(pool.map(_run_worker, range(config.runs)))
    return aggregate(per_run, config.alpha, config.smoothing)
