"""Tracking of characteristic modes across a frequency sweep.

Adjacent snapshots are matched by an optimal assignment over eigencurrent
correlation (or eigenvalue proximity when no currents are available),
restricted to equal irrep labels when labels are present.  A postprocessing
pass reorders same-irrep traces by eigenvalue at every frequency, which is
the von Neumann-Wigner constraint: equal-irrep traces avoid, they do not
cross.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

#: |lambda| jump across one step treated as passing through a pole
DEFAULT_JUMP_THRESHOLD = 1e3

#: minimum gap separating microscopic from macroscopic avoidance
DEFAULT_GAP_THRESHOLD = 1.0


@dataclass(frozen=True, eq=False)
class Snapshot:
    """Modes of one frequency point: eigenvalues with optional currents,
    irrep labels and correlation weight matrix."""

    frequency: float
    lambdas: np.ndarray
    vectors: np.ndarray | None = None
    labels: tuple | None = None
    weight: np.ndarray | None = None

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        object.__setattr__(self, "lambdas", lam)
        if self.vectors is not None:
            v = np.asarray(self.vectors, dtype=float)
            if v.ndim != 2 or v.shape[1] != len(lam):
                raise ValueError("vectors must have one column per mode")
            object.__setattr__(self, "vectors", v)
        if self.labels is not None:
            if len(self.labels) != len(lam):
                raise ValueError("labels must have one entry per mode")
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def count(self) -> int:
        return len(self.lambdas)


@dataclass
class TracePoint:
    frequency: float
    lam: float
    mode_index: int        # column in the snapshot this point came from


@dataclass
class TrackedTrace:
    id: int
    irrep: str | None
    points: list = field(default_factory=list)
    events: list = field(default_factory=list)

    @property
    def frequencies(self):
        return np.array([p.frequency for p in self.points])

    @property
    def lambdas(self):
        return np.array([p.lam for p in self.points])


@dataclass(frozen=True)
class TrackOptions:
    use_labels: bool = True
    enforce_no_crossing: bool = True
    weight: np.ndarray | None = None


def correlation(v_prev: np.ndarray, v_next: np.ndarray,
                weight: np.ndarray | None = None) -> np.ndarray:
    """Normalized correlation |I_m^T W I_n| / (|I_m|_W |I_n|_W), all pairs."""
    if weight is None:
        gram = v_prev.T @ v_next
        n_prev = np.linalg.norm(v_prev, axis=0)
        n_next = np.linalg.norm(v_next, axis=0)
    else:
        gram = v_prev.T @ weight @ v_next
        n_prev = np.sqrt(np.einsum("im,ij,jm->m", v_prev, weight, v_prev))
        n_next = np.sqrt(np.einsum("im,ij,jm->m", v_next, weight, v_next))
    return np.abs(gram) / np.outer(n_prev, n_next)


def _affinity(prev: Snapshot, nxt: Snapshot, pi, ni, options: TrackOptions):
    if prev.vectors is not None and nxt.vectors is not None:
        w = options.weight if options.weight is not None else prev.weight
        return correlation(prev.vectors[:, pi], nxt.vectors[:, ni], w)
    a = prev.lambdas[pi][:, None]
    b = nxt.lambdas[ni][None, :]
    return -np.abs(a - b)


def track(snapshots, options: TrackOptions | None = None) -> list:
    """Thread modes through a frequency-ordered snapshot sequence.

    Birth and death events record modes that appear or disappear when the
    matched counts differ.  A single snapshot degenerates to one single-point
    trace per mode.
    """
    options = options or TrackOptions()
    snaps = sorted(snapshots, key=lambda s: s.frequency)
    if not snaps:
        raise ValueError("need at least one snapshot")
    if len({s.vectors.shape[0] for s in snaps if s.vectors is not None}) > 1:
        raise ValueError("snapshots carry vectors of different dimension")

    have_labels = options.use_labels and all(s.labels is not None for s in snaps)
    traces: list[TrackedTrace] = []
    active: dict[int, int] = {}       # trace id -> mode index in latest snapshot

    def open_trace(snap, k, born=False):
        tid = len(traces)
        tr = TrackedTrace(tid, snap.labels[k] if have_labels else None)
        tr.points.append(TracePoint(snap.frequency, float(snap.lambdas[k]), k))
        if born:
            tr.events.append({"kind": "birth", "frequency": snap.frequency})
        traces.append(tr)
        active[tid] = k

    first = snaps[0]
    for k in range(first.count):
        open_trace(first, k)

    for step in range(1, len(snaps)):
        prev, nxt = snaps[step - 1], snaps[step]
        prev_ids = list(active.keys())
        groups = {}
        for tid in prev_ids:
            key = traces[tid].irrep if have_labels else None
            groups.setdefault(key, ([], []))[0].append(tid)
        for k in range(nxt.count):
            key = nxt.labels[k] if have_labels else None
            if key in groups:
                groups[key][1].append(k)
        survivors = {}
        for key, (tids, cols) in groups.items():
            if not cols:
                continue
            pi = np.array([active[t] for t in tids])
            ni = np.array(cols)
            aff = _affinity(prev, nxt, pi, ni, options)
            rows, col_sel = linear_sum_assignment(aff, maximize=True)
            for r, c in zip(rows, col_sel):
                survivors[tids[r]] = cols[c]
        for tid in prev_ids:
            if tid in survivors:
                k = survivors[tid]
                traces[tid].points.append(
                    TracePoint(nxt.frequency, float(nxt.lambdas[k]), k))
                active[tid] = k
            else:
                traces[tid].events.append(
                    {"kind": "death", "frequency": prev.frequency})
                del active[tid]
        matched_cols = set(survivors.values())
        for k in range(nxt.count):
            if k not in matched_cols:
                open_trace(nxt, k, born=True)

    if options.enforce_no_crossing and have_labels:
        _enforce_no_crossing(traces)
    return traces


def _enforce_no_crossing(traces):
    """Reassign points inside each irrep label so eigenvalue order is kept.

    At every frequency, the points of one irrep group are sorted by
    eigenvalue and handed back to the traces present there in their standing
    rank order; traces that appear mid-sweep slot in at the rank nearest
    their raw eigenvalue.  Whenever raw tracking produced a same-irrep
    crossing, the members swap from the crossing on, turning the
    intersection into a touching avoidance.
    """
    by_irrep = {}
    for tr in traces:
        if tr.irrep is not None:
            by_irrep.setdefault(tr.irrep, []).append(tr)
    for group in by_irrep.values():
        if len(group) < 2:
            continue
        freqs = sorted({p.frequency for tr in group for p in tr.points})
        point_of = [{p.frequency: p for p in tr.points} for tr in group]
        rank_order: list[int] = []      # indices into `group`, ranked by lambda
        new_points: list[list] = [[] for _ in group]
        for f in freqs:
            present = [i for i in range(len(group)) if f in point_of[i]]
            if not present:
                continue
            pool = sorted((point_of[i][f] for i in present),
                          key=lambda p: p.lam)
            continuing = [i for i in rank_order if i in present]
            newcomers = sorted((i for i in present if i not in continuing),
                               key=lambda i: point_of[i][f].lam)
            slots = [None] * len(pool)
            taken = set()
            for i in newcomers:
                raw = point_of[i][f].lam
                j = min((k for k in range(len(pool)) if k not in taken),
                        key=lambda k: abs(pool[k].lam - raw))
                slots[j] = i
                taken.add(j)
            free = [k for k in range(len(pool)) if slots[k] is None]
            for k, i in zip(free, continuing):
                slots[k] = i
            for k, i in enumerate(slots):
                new_points[i].append(pool[k])
            rank_order = list(slots)
        for i, tr in enumerate(group):
            tr.points = new_points[i]


def split_at_poles(trace: TrackedTrace,
                   jump_threshold: float = DEFAULT_JUMP_THRESHOLD) -> list:
    """Split a trace wherever it passes through an eigenvalue pole.

    A pole shows up as a step from below -threshold to above +threshold
    between adjacent points; the reversed order (a drop from +threshold to
    -threshold, seen on structures with holes) splits too and is annotated
    as reversed.  Split annotations record the bracketing frequency
    interval.
    """
    cuts = []
    for i in range(len(trace.points) - 1):
        a = trace.points[i].lam
        b = trace.points[i + 1].lam
        if a < -jump_threshold and b > jump_threshold:
            cuts.append((i + 1, "pole-split"))
        elif a > jump_threshold and b < -jump_threshold:
            cuts.append((i + 1, "pole-split-reversed"))
    if not cuts:
        return [trace]
    births = [e for e in trace.events if e.get("kind") == "birth"]
    deaths = [e for e in trace.events if e.get("kind") == "death"]
    bounds = [0] + [c for c, _ in cuts] + [len(trace.points)]
    pieces = []
    for seg in range(len(bounds) - 1):
        piece = TrackedTrace(trace.id, trace.irrep,
                             trace.points[bounds[seg]:bounds[seg + 1]], [])
        if seg == 0:
            piece.events.extend(births)
        if seg < len(cuts):
            cut, kind = cuts[seg]
            piece.events.append({
                "kind": kind,
                "interval": (trace.points[cut - 1].frequency,
                             trace.points[cut].frequency),
            })
        else:
            piece.events.extend(deaths)
        pieces.append(piece)
    return pieces


@dataclass(frozen=True)
class AvoidanceSignature:
    """A local gap minimum between two traces of the same irrep."""

    lower_id: int
    upper_id: int
    irrep: str
    frequency: float
    gap: float
    kind: str              # "MICA" below the gap threshold, "MACA" above

    @property
    def microscopic(self) -> bool:
        return self.kind == "MICA"


def detect_avoidances(traces, gap_threshold: float = DEFAULT_GAP_THRESHOLD
                      ) -> list:
    """Find local gap minima between every same-irrep trace pair.

    Traces are linearly resampled onto the union of their frequency grids
    over the overlap.  Each interior local minimum of |lambda_a - lambda_b|
    yields a signature pairing the indentation (lower trace) with the peak
    (upper trace): microscopic (MICA) when the closest approach stays below
    `gap_threshold`, macroscopic (MACA) otherwise.
    """
    out = []
    for ia in range(len(traces)):
        for ib in range(ia + 1, len(traces)):
            a, b = traces[ia], traces[ib]
            if a.irrep is None or a.irrep != b.irrep:
                continue
            fa, la = a.frequencies, a.lambdas
            fb, lb = b.frequencies, b.lambdas
            if len(fa) < 2 or len(fb) < 2:
                continue
            lo = max(fa.min(), fb.min())
            hi = min(fa.max(), fb.max())
            if hi <= lo:
                continue
            grid = np.union1d(fa, fb)
            grid = grid[(grid >= lo) & (grid <= hi)]
            if len(grid) < 3:
                continue
            ga = np.interp(grid, fa, la)
            gb = np.interp(grid, fb, lb)
            gap = np.abs(ga - gb)
            for i in range(1, len(grid) - 1):
                if gap[i] <= gap[i - 1] and gap[i] < gap[i + 1]:
                    lower, upper = (a, b) if ga[i] <= gb[i] else (b, a)
                    kind = "MICA" if gap[i] <= gap_threshold else "MACA"
                    out.append(AvoidanceSignature(lower.id, upper.id, a.irrep,
                                                  float(grid[i]),
                                                  float(gap[i]), kind))
    return out
