"""Load prediction records and self-assessed labels; drive an external classifier.

Prediction wire format is one JSON object per line:

    {"user_id": "u1", "image_id": "img1",
     "predictions": [{"label": "espresso", "prob": 0.08}, ...]}

Labels are CSV with header ``user_id,topic``. The external-classifier adapter
invokes a user-supplied command once per batch with ``{input}`` and
``{output}`` placeholders and ingests whatever it wrote.
"""

from __future__ import annotations

import csv
import json
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ConfigError, DataFormatError, ExternalClassifierError
from .taxonomy import TOPICS, resolve_compound

DEFAULT_TOP_K = 5


@dataclass(frozen=True)
class PredictionRecord:
    """Top-k classifier output for one image, probabilities nonincreasing."""

    user_id: str
    image_id: str
    predictions: tuple[tuple[str, float], ...]


@dataclass(eq=True)
class ProfileDataset:
    """Prediction records grouped per user (file order), plus optional labels."""

    records: dict[str, list[PredictionRecord]] = field(default_factory=dict)
    labels: dict[str, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list, compare=False)

    def users(self) -> list[str]:
        return list(self.records)

    def n_records(self) -> int:
        return sum(len(recs) for recs in self.records.values())

    def iter_records(self) -> Iterator[PredictionRecord]:
        for recs in self.records.values():
            yield from recs


def _lines(source: str | Iterable[str]) -> Iterator[str]:
    if isinstance(source, str):
        yield from source.splitlines()
    else:
        yield from source


def _parse_prediction_line(line: str, no: int, k_max: int) -> PredictionRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"malformed JSON: {exc.msg}", line=no) from None
    if not isinstance(obj, dict):
        raise DataFormatError("expected a JSON object", line=no)

    user_id = obj.get("user_id")
    image_id = obj.get("image_id")
    preds = obj.get("predictions")
    if not isinstance(user_id, str) or not user_id:
        raise DataFormatError("missing or empty 'user_id'", line=no)
    if not isinstance(image_id, str) or not image_id:
        raise DataFormatError("missing or empty 'image_id'", line=no)
    if not isinstance(preds, list) or not preds:
        raise DataFormatError("'predictions' must be a nonempty list", line=no)
    if len(preds) > k_max:
        raise DataFormatError(
            f"{len(preds)} predictions exceed the configured top-k of {k_max}", line=no
        )

    pairs = []
    for item in preds:
        if not isinstance(item, dict):
            raise DataFormatError("prediction entries must be objects", line=no)
        label = item.get("label")
        prob = item.get("prob")
        if not isinstance(label, str) or not label:
            raise DataFormatError("prediction missing a 'label' string", line=no)
        if not isinstance(prob, (int, float)) or isinstance(prob, bool):
            raise DataFormatError(f"prob for '{label}' is not a number", line=no)
        if not 0.0 <= prob <= 1.0:
            raise DataFormatError(f"prob {prob} for '{label}' out of range [0, 1]", line=no)
        pairs.append((label, float(prob)))
    # Classifiers normally emit descending scores already; sorting makes the
    # nonincreasing invariant hold by construction (stable, so equal probs
    # keep their input order).
    pairs.sort(key=lambda lp: -lp[1])
    return PredictionRecord(user_id=user_id, image_id=image_id, predictions=tuple(pairs))


def load_predictions(
    source: str | Iterable[str],
    k_max: int = DEFAULT_TOP_K,
    skip_bad: bool = False,
) -> ProfileDataset:
    """Read prediction lines into a dataset grouped by user, preserving file order.

    Any malformed or invalid line aborts the load unless ``skip_bad`` is set,
    in which case it is skipped and reported in ``dataset.warnings``.
    """
    records: dict[str, list[PredictionRecord]] = {}
    seen: set[tuple[str, str]] = set()
    warnings: list[str] = []
    for no, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            rec = _parse_prediction_line(line, no, k_max)
            key = (rec.user_id, rec.image_id)
            if key in seen:
                raise DataFormatError(
                    f"duplicate record for user '{rec.user_id}' image '{rec.image_id}'",
                    line=no,
                )
        except DataFormatError as exc:
            if skip_bad:
                warnings.append(f"skipped {exc}")
                continue
            raise
        seen.add(key)
        records.setdefault(rec.user_id, []).append(rec)
    return ProfileDataset(records=records, labels={}, warnings=warnings)


def serialize_predictions(dataset: ProfileDataset) -> str:
    """Inverse of load_predictions: one JSON line per record, load order."""
    out = []
    for rec in dataset.iter_records():
        out.append(
            json.dumps(
                {
                    "user_id": rec.user_id,
                    "image_id": rec.image_id,
                    "predictions": [{"label": l, "prob": p} for l, p in rec.predictions],
                }
            )
        )
    return "\n".join(out) + ("\n" if out else "")


def load_labels(source: str | Iterable[str]) -> dict[str, str]:
    """Read a ``user_id,topic`` CSV into a user -> canonical topic table."""
    rows = csv.reader(_lines(source))
    labels: dict[str, str] = {}
    header_seen = False
    for no, row in enumerate(rows, start=1):
        if not row or not any(cell.strip() for cell in row):
            continue
        if not header_seen:
            if [c.strip() for c in row] != ["user_id", "topic"]:
                raise DataFormatError("expected header 'user_id,topic'", line=no)
            header_seen = True
            continue
        if len(row) != 2:
            raise DataFormatError(f"expected 2 columns, got {len(row)}", line=no)
        user_id, topic = row[0].strip(), row[1].strip()
        if not user_id:
            raise DataFormatError("empty user_id", line=no)
        if topic not in TOPICS:
            atoms = resolve_compound(topic)
            if atoms is not None:
                raise DataFormatError(
                    f"compound topic '{topic}': use {' or '.join(atoms)}", line=no
                )
            raise DataFormatError(f"unknown topic '{topic}'", line=no)
        if user_id in labels:
            raise DataFormatError(f"duplicate label for user '{user_id}'", line=no)
        labels[user_id] = topic
    if not header_seen:
        raise DataFormatError("empty labels file: expected header 'user_id,topic'", line=1)
    return labels


def attach_labels(dataset: ProfileDataset, labels: dict[str, str]) -> ProfileDataset:
    """Dataset with labels attached; labels for absent users become warnings."""
    warnings = list(dataset.warnings)
    for user_id in labels:
        if user_id not in dataset.records:
            warnings.append(f"label for user '{user_id}' matches no prediction records")
    return ProfileDataset(records=dataset.records, labels=dict(labels), warnings=warnings)


def run_external_classifier(
    manifest: list[tuple[str, str, str]],
    command_template: str,
    k: int = DEFAULT_TOP_K,
) -> ProfileDataset:
    """Run a classifier command over a batch manifest and ingest its output.

    ``manifest`` rows are (user_id, image_id, image_path). The command template
    must contain ``{input}`` (manifest CSV path) and ``{output}`` (path where
    the command writes prediction lines) and is invoked exactly once.
    """
    if "{input}" not in command_template or "{output}" not in command_template:
        raise ConfigError("classifier command template needs {input} and {output} placeholders")
    if not manifest:
        return ProfileDataset()

    with tempfile.TemporaryDirectory(prefix="interestprof-") as tmp:
        in_path = Path(tmp) / "manifest.csv"
        out_path = Path(tmp) / "predictions.jsonl"
        with open(in_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["user_id", "image_id", "image_path"])
            writer.writerows(manifest)

        argv = [
            tok.replace("{input}", str(in_path)).replace("{output}", str(out_path))
            for tok in shlex.split(command_template)
        ]
        proc = subprocess.run(argv, capture_output=True, text=True)
        if proc.returncode != 0:
            raise ExternalClassifierError(
                f"classifier command exited with status {proc.returncode}: "
                f"{proc.stderr.strip()[-500:]}",
                exit_code=proc.returncode,
            )
        if not out_path.exists():
            raise ExternalClassifierError("classifier command wrote no output file")
        with open(out_path, "r", encoding="utf-8") as fh:
            return load_predictions(fh, k_max=k)
