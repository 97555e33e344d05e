"""Embedded-video datasets: binary frame payloads, JSON manifests, synthetic data.

A payload file holds one sequence of frame embeddings: the magic bytes
"VSEM1", a little-endian uint32 frame count, a little-endian uint32
dimension, then count*dim float32 values in frame-major order. A frame
embedding is simply one float32 row. A manifest is a UTF-8 JSON file
listing the labelled sequences of a dataset; payload paths are relative to
the manifest's directory.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DatasetError

MAGIC = b"VSEM1"
_HEADER = struct.Struct("<5sII")


def write_embeddings(path: str | Path, frames: np.ndarray) -> None:
    """Write one sequence of frame embeddings as a VSEM1 payload file."""
    arr = np.ascontiguousarray(frames, dtype=np.float32)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DatasetError(f"payload needs shape (frames, dim) with both >= 1, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise DatasetError("payload embeddings must be finite")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, arr.shape[0], arr.shape[1]))
        fh.write(arr.astype("<f4").tobytes())


def read_header(path: str | Path) -> tuple[int, int]:
    """(frame count, dimension) from a payload header, with size validation."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            header = fh.read(_HEADER.size)
            if len(header) < _HEADER.size:
                raise DatasetError(f"{path}: truncated header")
            magic, count, dim = _HEADER.unpack(header)
    except OSError as exc:
        raise DatasetError(f"{path}: {exc}") from exc
    if magic != MAGIC:
        raise DatasetError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if count < 1 or dim < 1:
        raise DatasetError(f"{path}: header declares empty payload ({count} x {dim})")
    expected = _HEADER.size + 4 * count * dim
    actual = path.stat().st_size
    if actual != expected:
        raise DatasetError(f"{path}: payload size {actual} != expected {expected}")
    return count, dim


def read_embeddings(path: str | Path) -> np.ndarray:
    """Read a VSEM1 payload file back into a float32 (frames, dim) array."""
    count, dim = read_header(path)
    with open(path, "rb") as fh:
        fh.seek(_HEADER.size)
        data = fh.read()
    frames = np.frombuffer(data, dtype="<f4").reshape(count, dim)
    if not np.isfinite(frames).all():
        raise DatasetError(f"{path}: payload contains non-finite values")
    return np.ascontiguousarray(frames)


@dataclass(frozen=True)
class SequenceRecord:
    """Manifest entry: labels and payload location of one sequence.

    `differentia_span` is generator metadata (inclusive frame span of the
    discriminative run); externally authored manifests may leave it null.
    """

    sequence_id: str
    genus_label: str
    instance_id: str
    has_differentia: bool
    path: str
    differentia_span: tuple[int, int] | None = None


@dataclass(frozen=True)
class DatasetManifest:
    """A validated manifest plus the directory its paths resolve against."""

    dimension: int
    sequences: tuple[SequenceRecord, ...]
    root: Path

    def record(self, sequence_id: str) -> SequenceRecord:
        for rec in self.sequences:
            if rec.sequence_id == sequence_id:
                return rec
        raise DatasetError(f"no sequence {sequence_id!r} in manifest")

    def load_frames(self, sequence_id: str) -> np.ndarray:
        frames = read_embeddings(self.root / self.record(sequence_id).path)
        if frames.shape[1] != self.dimension:
            raise DatasetError(
                f"{sequence_id}: payload dimension {frames.shape[1]} != manifest {self.dimension}")
        return frames

    def labels(self) -> dict[str, tuple[str, str]]:
        """sequence_id -> (genus label, instance id), the oracle's ground truth."""
        return {rec.sequence_id: (rec.genus_label, rec.instance_id) for rec in self.sequences}


def _record_to_json(rec: SequenceRecord) -> dict:
    return {
        "sequence_id": rec.sequence_id,
        "genus_label": rec.genus_label,
        "instance_id": rec.instance_id,
        "has_differentia": rec.has_differentia,
        "path": rec.path,
        "differentia_span": list(rec.differentia_span) if rec.differentia_span else None,
    }


def write_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    document = {
        "dimension": manifest.dimension,
        "sequences": [_record_to_json(rec) for rec in manifest.sequences],
    }
    text = json.dumps(document, indent=2, sort_keys=True, allow_nan=False) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def load_manifest(path: str | Path) -> DatasetManifest:
    """Parse and fully validate a manifest: fields, uniqueness, payload headers."""
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DatasetError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: not valid JSON ({exc})") from exc

    if not isinstance(document, dict):
        raise DatasetError(f"{path}: manifest must be a JSON object")
    dimension = document.get("dimension")
    if not isinstance(dimension, int) or dimension < 1:
        raise DatasetError(f"{path}: 'dimension' must be a positive integer")
    raw_sequences = document.get("sequences")
    if not isinstance(raw_sequences, list) or not raw_sequences:
        raise DatasetError(f"{path}: 'sequences' must be a non-empty list")

    records = []
    seen_ids: set[str] = set()
    for i, entry in enumerate(raw_sequences):
        if not isinstance(entry, dict):
            raise DatasetError(f"{path}: sequence {i} is not an object")
        try:
            span = entry.get("differentia_span")
            rec = SequenceRecord(
                sequence_id=str(entry["sequence_id"]),
                genus_label=str(entry["genus_label"]),
                instance_id=str(entry["instance_id"]),
                has_differentia=bool(entry["has_differentia"]),
                path=str(entry["path"]),
                differentia_span=(int(span[0]), int(span[1])) if span is not None else None,
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise DatasetError(f"{path}: sequence {i} is malformed ({exc})") from exc
        if rec.sequence_id in seen_ids:
            raise DatasetError(f"{path}: duplicate sequence id {rec.sequence_id!r}")
        seen_ids.add(rec.sequence_id)
        records.append(rec)

    root = path.parent
    for rec in records:
        count, dim = read_header(root / rec.path)
        if dim != dimension:
            raise DatasetError(
                f"{rec.sequence_id}: payload dimension {dim} != manifest {dimension}")
    return DatasetManifest(dimension, tuple(records), root)


def _unit_ball(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """n points drawn uniformly from the unit ball in `dim` dimensions."""
    direction = rng.standard_normal((n, dim))
    norms = np.maximum(np.linalg.norm(direction, axis=1, keepdims=True), 1e-12)
    radius = rng.random((n, 1)) ** (1.0 / dim)
    return direction / norms * radius


def generate_synthetic(*, num_genera: int, instances_per_genus: int,
                       sequences_with_differentia: int, sequences_without_differentia: int,
                       frames_per_sequence: int, dim: int, genus_spread: float,
                       differentia_offset: float, noise: float, seed: int,
                       out_dir: str | Path) -> DatasetManifest:
    """Write a fully labelled synthetic dataset and return its manifest.

    Each genus g gets a centre c_g on the normalized all-ones diagonal,
    consecutive centres 1.2 * differentia_offset apart; each instance i of g
    gets a private coordinate axis, so its discriminative views sit at
    c_g + differentia_offset * e_{g,i}. Shared views are drawn inside a
    genus_spread ball around c_g; every frame receives isotropic Gaussian
    noise. Sequences flagged has_differentia contain one contiguous run
    (a third of the sequence) of discriminative frames. Deterministic given
    the seed: same arguments produce byte-identical payloads and manifest.

    Separability is the caller's deal: it needs differentia_offset well
    above genus_spread + noise.
    """
    counts = {
        "num_genera": num_genera,
        "instances_per_genus": instances_per_genus,
        "sequences_with_differentia": sequences_with_differentia,
        "sequences_without_differentia": sequences_without_differentia,
        "frames_per_sequence": frames_per_sequence,
        "dim": dim,
    }
    for name, value in counts.items():
        if value < 1:
            raise DatasetError(f"{name} must be >= 1, got {value}")
    if dim < num_genera * instances_per_genus:
        raise DatasetError(
            f"dim {dim} too small: need at least num_genera * instances_per_genus = "
            f"{num_genera * instances_per_genus} axes for distinct differentia directions")
    for name, value in (("genus_spread", genus_spread), ("differentia_offset", differentia_offset),
                        ("noise", noise)):
        if value < 0:
            raise DatasetError(f"{name} must be >= 0, got {value}")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    diagonal = np.ones(dim) / np.sqrt(dim)
    center_gap = 1.2 * differentia_offset
    run_len = max(1, frames_per_sequence // 3)

    records = []
    for g in range(num_genera):
        center = g * center_gap * diagonal
        genus_label = f"genus-{g:02d}"
        for i in range(instances_per_genus):
            instance_id = f"g{g:02d}-i{i:02d}"
            axis = np.zeros(dim)
            axis[g * instances_per_genus + i] = 1.0
            offset_point = center + differentia_offset * axis
            total = sequences_with_differentia + sequences_without_differentia
            for k in range(total):
                has_diff = k < sequences_with_differentia
                kind = "diff" if has_diff else "plain"
                local = k if has_diff else k - sequences_with_differentia
                sequence_id = f"{instance_id}-{kind}-{local:02d}"

                frames = center + genus_spread * _unit_ball(rng, frames_per_sequence, dim)
                span = None
                if has_diff:
                    start = int(rng.integers(0, frames_per_sequence - run_len + 1))
                    frames[start:start + run_len] = offset_point
                    span = (start, start + run_len - 1)
                frames += noise * rng.standard_normal((frames_per_sequence, dim))

                rel_path = f"{sequence_id}.vsem"
                write_embeddings(out_dir / rel_path, frames.astype(np.float32))
                records.append(SequenceRecord(sequence_id, genus_label, instance_id,
                                              has_diff, rel_path, span))

    manifest = DatasetManifest(dim, tuple(records), out_dir)
    write_manifest(manifest, out_dir / "manifest.json")
    return manifest
