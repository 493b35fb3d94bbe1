"""File formats shared by the command-line tools.

Matrices travel as dense CSV (one row per line) or as a small binary grid:
the magic bytes ``CMX1``, the side length as a little-endian uint32, then
the entries as row-major little-endian float64.  Mode sets, group actions
and tracked traces travel as JSON.
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np

from .cmsolver import ModeSet
from .pointgroup import builtin_group
from .symaction import GroupAction, action_from_points
from .tracker import Snapshot, TracePoint, TrackedTrace

MATRIX_MAGIC = b"CMX1"


def save_matrix_csv(path, m) -> None:
    m = np.asarray(m, dtype=float)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in m:
            w.writerow([repr(float(x)) for x in row])


def save_matrix_binary(path, m) -> None:
    m = np.ascontiguousarray(m, dtype="<f8")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("binary matrix format holds square matrices only")
    with open(path, "wb") as fh:
        fh.write(MATRIX_MAGIC)
        fh.write(struct.pack("<I", m.shape[0]))
        fh.write(m.tobytes())


def load_matrix(path) -> np.ndarray:
    """Load a matrix, sniffing binary grids by their magic bytes."""
    with open(path, "rb") as fh:
        head = fh.read(len(MATRIX_MAGIC))
        if head == MATRIX_MAGIC:
            (n,) = struct.unpack("<I", fh.read(4))
            data = np.frombuffer(fh.read(8 * n * n), dtype="<f8")
            if data.size != n * n:
                raise ValueError(f"{path}: truncated binary matrix")
            return data.reshape(n, n).copy()
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if rec:
                rows.append([float(x) for x in rec])
    if not rows:
        raise ValueError(f"{path}: empty matrix file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError(f"{path}: ragged rows")
    return np.array(rows)


def save_vectors_csv(path, vectors) -> None:
    """Write vectors as columns, one coefficient per line."""
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    if v.ndim != 2:
        raise ValueError("vectors must form a 1-D or 2-D array")
    if v.shape[0] == 1 and np.asarray(vectors).ndim == 1:
        v = v.T
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in v:
            w.writerow([repr(float(x)) for x in row])


def load_vectors_csv(path) -> np.ndarray:
    """Read one vector per column; a single column yields shape (N, 1)."""
    return np.atleast_2d(load_matrix_any_shape(path))


def load_matrix_any_shape(path) -> np.ndarray:
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if rec:
                rows.append([float(x) for x in rec])
    if not rows:
        raise ValueError(f"{path}: empty file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError(f"{path}: ragged rows")
    return np.array(rows)


def save_modes_json(path, modes: ModeSet, labels=None) -> None:
    """modes.json: {frequency, lambdas, vectors, labels?}; vectors holds one
    row per mode."""
    doc = {
        "frequency": float(modes.frequency),
        "lambdas": [float(x) for x in modes.eigenvalues],
        "vectors": [[float(x) for x in col] for col in modes.eigencurrents.T],
    }
    names = labels if labels is not None else modes.labels
    if names is not None:
        doc["labels"] = list(names)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_modes_json(path) -> Snapshot:
    with open(path) as fh:
        doc = json.load(fh)
    try:
        lam = np.array([float(x) for x in doc["lambdas"]])
        freq = float(doc["frequency"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: not a mode-set file ({exc})") from None
    vectors = doc.get("vectors")
    if vectors is not None:
        vectors = np.array(vectors, dtype=float).T
        if vectors.shape[1] != len(lam):
            raise ValueError(f"{path}: vector row count != eigenvalue count")
    labels = doc.get("labels")
    if labels is not None:
        labels = tuple(str(x) for x in labels)
    return Snapshot(freq, lam, vectors, labels)


def load_snapshot_dir(directory) -> list:
    """Read every .json mode set under a directory, ordered by frequency."""
    paths = sorted(Path(directory).glob("*.json"))
    if not paths:
        raise ValueError(f"{directory}: no .json snapshots found")
    snaps = [load_modes_json(p) for p in paths]
    snaps.sort(key=lambda s: s.frequency)
    return snaps


def save_traces_json(path, traces, avoidances=()) -> None:
    doc = {
        "traces": [
            {
                "id": tr.id,
                "irrep": tr.irrep,
                "points": [
                    {"frequency": p.frequency, "lambda": p.lam,
                     "mode_index": p.mode_index}
                    for p in tr.points
                ],
                "events": tr.events,
            }
            for tr in traces
        ],
        "avoidances": [
            {
                "lower_id": s.lower_id,
                "upper_id": s.upper_id,
                "irrep": s.irrep,
                "frequency": s.frequency,
                "gap": s.gap,
                "kind": s.kind,
            }
            for s in avoidances
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_traces_json(path):
    with open(path) as fh:
        doc = json.load(fh)
    traces = []
    for rec in doc["traces"]:
        points = [TracePoint(p["frequency"], p["lambda"], p["mode_index"])
                  for p in rec["points"]]
        traces.append(TrackedTrace(rec["id"], rec["irrep"], points,
                                   list(rec.get("events", []))))
    return traces, doc.get("avoidances", [])


def traces_to_csv(traces, fh) -> None:
    """One row per (trace, frequency): id, irrep, frequency, lambda,
    mode_index."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["trace_id", "irrep", "frequency", "lambda", "mode_index"])
    for tr in traces:
        for p in tr.points:
            w.writerow([tr.id, tr.irrep if tr.irrep is not None else "",
                        repr(float(p.frequency)), repr(float(p.lam)),
                        p.mode_index])


def save_action_json(path, action: GroupAction) -> None:
    doc = {
        "group": action.group.name,
        "operators": [
            [[float(x) for x in row] for row in action.operators[i]]
            for i in range(action.group.order)
        ],
    }
    if action.points is not None:
        # kept so loaders can induce mirror operators outside the group
        doc["points"] = [[float(x) for x in p] for p in action.points]
        doc["dof"] = action.dof
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_action_json(path) -> GroupAction:
    """Action files name a group plus either per-element operator matrices
    (element order) or a symmetric point set with a per-point dof count."""
    with open(path) as fh:
        doc = json.load(fh)
    if "group" not in doc:
        raise ValueError(f"{path}: action file lacks a group name")
    group = builtin_group(doc["group"])
    if "operators" in doc:
        ops = [np.array(m, dtype=float) for m in doc["operators"]]
        if len(ops) != group.order:
            raise ValueError(
                f"{path}: {len(ops)} operators for a group of order "
                f"{group.order}")
        dim = ops[0].shape
        if any(m.shape != dim for m in ops) or dim[0] != dim[1]:
            raise ValueError(f"{path}: operators must be square, equal size")
        points = doc.get("points")
        if points is not None:
            points = np.array(points, dtype=float)
        return GroupAction(group, dict(enumerate(ops)), points=points,
                           dof=int(doc.get("dof", 3)))
    if "points" in doc:
        points = np.array(doc["points"], dtype=float)
        dof = int(doc.get("dof", 3))
        return action_from_points(group, points, dof=dof)
    raise ValueError(f"{path}: action file needs operators or points")
