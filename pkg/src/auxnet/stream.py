"""Dataset loading and synthetic auxiliary-feature availability.

Datasets arrive as UCR-style text: one instance per line, class label
first, then the feature values, tab- or comma-separated. Labels are
remapped to contiguous 0-based indices in sorted order of the originals;
feature order is preserved and nothing is normalized.

An availability schedule is a per-step boolean mask over the auxiliary
features, drawn independently Bernoulli(p). Schedules can be exported to /
imported from a plain text file (one 0/1 row per step, header line
``# p=<p> seed=<seed> A=<A>``) so a run's availability pattern can be
replayed anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ContractViolation, DataFormatError


@dataclass
class Dataset:
    """Feature matrix (N, F) and 0-based integer labels (N,)."""

    features: np.ndarray
    labels: np.ndarray
    name: str

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    @property
    def num_classes(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0


@dataclass
class StreamInstance:
    """One arrival: guaranteed base vector, sparse auxiliary map, label.

    x_aux keys are 1-based auxiliary indices; only the currently available
    features appear. t is the 0-based position in the stream.
    """

    x_base: np.ndarray
    x_aux: dict[int, float]
    label: int
    t: int


@dataclass
class AvailabilitySchedule:
    """Per-step availability masks, shape (steps, A), plus their provenance."""

    masks: np.ndarray
    p: float
    seed: int

    @property
    def num_aux(self) -> int:
        return self.masks.shape[1]

    def save(self, path) -> None:
        with open(path, "w") as f:
            f.write(f"# p={self.p!r} seed={self.seed} A={self.num_aux}\n")
            for row in self.masks:
                f.write(" ".join("1" if b else "0" for b in row) + "\n")

    @classmethod
    def load(cls, path) -> AvailabilitySchedule:
        lines = Path(path).read_text().splitlines()
        if not lines or not lines[0].startswith("#"):
            raise DataFormatError(f"{path}: missing schedule header line")
        fields = dict(tok.split("=", 1) for tok in lines[0][1:].split())
        try:
            p = float(fields["p"])
            seed = int(fields["seed"])
            num_aux = int(fields["A"])
        except (KeyError, ValueError) as exc:
            raise DataFormatError(f"{path}: bad schedule header: {lines[0]!r}") from exc
        rows = []
        for lineno, line in enumerate(lines[1:], start=2):
            bits = line.split()
            if len(bits) != num_aux:
                raise DataFormatError(
                    f"{path}:{lineno}: expected {num_aux} mask bits, got {len(bits)}"
                )
            rows.append([b == "1" for b in bits])
        masks = np.array(rows, dtype=bool).reshape(len(rows), num_aux)
        return cls(masks=masks, p=p, seed=seed)


def load_ucr(path) -> Dataset:
    """Read a UCR-format file: label first, tab or comma separated."""
    path = Path(path)
    lines = [l for l in path.read_text().splitlines() if l.strip()]
    if not lines:
        raise DataFormatError(f"{path}: empty dataset file")
    sep = "\t" if "\t" in lines[0] else ("," if "," in lines[0] else None)
    if sep is None:
        raise DataFormatError(f"{path}:1: expected tab- or comma-separated values")
    rows = []
    width = None
    for lineno, line in enumerate(lines, start=1):
        parts = line.split(sep)
        if width is None:
            width = len(parts)
            if width < 2:
                raise DataFormatError(f"{path}:1: need a label and at least one feature")
        elif len(parts) != width:
            raise DataFormatError(
                f"{path}:{lineno}: row has {len(parts)} fields, expected {width}"
            )
        try:
            rows.append([float(v) for v in parts])
        except ValueError as exc:
            raise DataFormatError(f"{path}:{lineno}: unparseable value ({exc})") from None
    data = np.array(rows)
    raw_labels = data[:, 0]
    if not np.all(raw_labels == np.round(raw_labels)):
        raise DataFormatError(f"{path}: non-integer class labels")
    classes = np.unique(raw_labels)  # sorted; original order of label values
    label_map = {orig: idx for idx, orig in enumerate(classes)}
    labels = np.array([label_map[v] for v in raw_labels], dtype=int)
    return Dataset(features=data[:, 1:], labels=labels, name=path.stem)


def make_schedule(length: int, num_aux: int, p: float, seed: int) -> AvailabilitySchedule:
    """Independent Bernoulli(p) availability per feature per step."""
    if not 0.0 <= p <= 1.0:
        raise ContractViolation(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    masks = rng.random((length, num_aux)) < p
    return AvailabilitySchedule(masks=masks, p=p, seed=seed)


def split_stream(ds: Dataset, num_base: int, schedule: AvailabilitySchedule) -> list[StreamInstance]:
    """Split features [0, B) as base, the rest as auxiliary under the schedule.

    Feature column B + a - 1 becomes auxiliary index a (1-based), included
    at step t iff the schedule's mask bit is set.
    """
    if not 1 <= num_base < ds.num_features:
        raise ContractViolation(
            f"num_base must lie in [1, {ds.num_features - 1}], got {num_base}"
        )
    num_aux = ds.num_features - num_base
    if schedule.num_aux != num_aux:
        raise ContractViolation(
            f"schedule covers {schedule.num_aux} auxiliary features, stream has {num_aux}"
        )
    if schedule.masks.shape[0] < len(ds):
        raise ContractViolation(
            f"schedule has {schedule.masks.shape[0]} steps, dataset has {len(ds)}"
        )
    instances = []
    for t in range(len(ds)):
        row = ds.features[t]
        mask = schedule.masks[t]
        x_aux = {a: float(row[num_base + a - 1]) for a in range(1, num_aux + 1) if mask[a - 1]}
        instances.append(StreamInstance(
            x_base=row[:num_base], x_aux=x_aux, label=int(ds.labels[t]), t=t,
        ))
    return instances


def base_only_stream(ds: Dataset, num_base: int | None = None) -> list[StreamInstance]:
    """Stream using the first num_base features (default all) and no auxiliaries."""
    if num_base is None:
        num_base = ds.num_features
    if not 1 <= num_base <= ds.num_features:
        raise ContractViolation(
            f"num_base must lie in [1, {ds.num_features}], got {num_base}"
        )
    return [
        StreamInstance(x_base=ds.features[t][:num_base], x_aux={},
                       label=int(ds.labels[t]), t=t)
        for t in range(len(ds))
    ]
