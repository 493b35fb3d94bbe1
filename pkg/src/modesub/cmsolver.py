"""Characteristic mode solver: X I = lambda R I for symmetric X, PSD R.

The generalized problem is reduced through a spectral decomposition of R
(never a triangular factorization: R is routinely rank-deficient once a
symmetric structure is meshed, and the eigenbasis gives a clean truncation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symaction import GroupAction, project, projector

#: relative spectrum cutoff below which R directions are truncated
DEFAULT_RANK_TOLERANCE = 1e-12

#: relative eigenvalue distance binding modes into one degenerate cluster
DEFAULT_CLUSTER_TOLERANCE = 1e-6

SYMMETRY_TOLERANCE = 1e-8
PSD_TOLERANCE = 1e-10


class RIndefiniteError(ValueError):
    pass


@dataclass(frozen=True)
class ImpedancePair:
    """Imaginary and real parts (X, R) of an impedance matrix at one frequency."""

    X: np.ndarray
    R: np.ndarray
    frequency: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.X, dtype=float)
        r = np.asarray(self.R, dtype=float)
        if x.shape != r.shape or x.ndim != 2 or x.shape[0] != x.shape[1]:
            raise ValueError("X and R must be square matrices of equal size")
        for name, m in (("X", x), ("R", r)):
            scale = max(np.abs(m).max(), 1.0)
            if np.abs(m - m.T).max() > SYMMETRY_TOLERANCE * scale:
                raise ValueError(f"{name} is not symmetric within tolerance")
        object.__setattr__(self, "X", _frozen((x + x.T) / 2.0))
        object.__setattr__(self, "R", _frozen((r + r.T) / 2.0))

    @property
    def size(self) -> int:
        return self.X.shape[0]


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ModeSet:
    """Eigenvalues ascending with R-orthonormal eigencurrents as columns."""

    eigenvalues: np.ndarray
    eigencurrents: np.ndarray
    rank: int
    frequency: float = 0.0
    labels: tuple | None = None

    def __post_init__(self):
        if self.eigencurrents.shape[1] != len(self.eigenvalues):
            raise ValueError("eigencurrents must have one column per mode")
        if self.labels is not None and len(self.labels) != len(self.eigenvalues):
            raise ValueError("labels must have one entry per mode")

    @property
    def count(self) -> int:
        return len(self.eigenvalues)

    def residual_norms(self, pair: ImpedancePair) -> np.ndarray:
        """|X I - lambda R I| per mode, relative to |X| |I|."""
        x_scale = max(np.abs(pair.X).max(), 1e-300)
        out = np.empty(self.count)
        for k in range(self.count):
            i_k = self.eigencurrents[:, k]
            res = pair.X @ i_k - self.eigenvalues[k] * (pair.R @ i_k)
            out[k] = np.linalg.norm(res) / (x_scale * np.linalg.norm(i_k))
        return out

    def r_orthonormality_error(self, pair: ImpedancePair) -> float:
        gram = self.eigencurrents.T @ pair.R @ self.eigencurrents
        return float(np.abs(gram - np.eye(self.count)).max())


def solve_cm(pair: ImpedancePair,
             rank_tolerance: float = DEFAULT_RANK_TOLERANCE) -> ModeSet:
    """Solve X I = lambda R I on the numerically significant range of R.

    R is spectrally decomposed; eigendirections below
    rank_tolerance * max(eig) are dropped, the problem is transformed to an
    ordinary symmetric one on the retained subspace, and eigencurrents are
    mapped back (R-orthonormal by construction).
    """
    w, u = np.linalg.eigh(pair.R)
    wmax = float(w.max()) if len(w) else 0.0
    if wmax <= 0.0:
        raise RIndefiniteError("R has no positive spectrum")
    if float(w.min()) < -PSD_TOLERANCE * wmax:
        raise RIndefiniteError(
            f"R has a significantly negative eigenvalue ({w.min():.3e} against "
            f"largest {wmax:.3e})")
    keep = w > rank_tolerance * wmax
    rank = int(np.count_nonzero(keep))
    basis = u[:, keep] / np.sqrt(w[keep])
    reduced = basis.T @ pair.X @ basis
    reduced = (reduced + reduced.T) / 2.0
    lam, y = np.linalg.eigh(reduced)
    currents = basis @ y
    return ModeSet(_frozen(lam), _frozen(currents), rank, pair.frequency)


def _cluster_slices(eigenvalues: np.ndarray, tol: float):
    """Contiguous index runs of eigenvalues within relative distance tol."""
    clusters = []
    start = 0
    for i in range(1, len(eigenvalues)):
        if abs(eigenvalues[i] - eigenvalues[i - 1]) > tol * (1.0 + abs(eigenvalues[i])):
            clusters.append((start, i))
            start = i
    if len(eigenvalues):
        clusters.append((start, len(eigenvalues)))
    return clusters


@dataclass(frozen=True)
class ModeClassification:
    labels: tuple               # one irrep name per mode, input order
    weights: tuple              # one {irrep: weight} dict per mode
    clusters: tuple             # (start, stop) index pairs
    parities: tuple | None = None


def classify_modes(modes: ModeSet, action: GroupAction,
                   cluster_tolerance: float = DEFAULT_CLUSTER_TOLERANCE
                   ) -> ModeClassification:
    """Attach irrep labels to a ModeSet using a group action.

    Degenerate modes are classified jointly: their span is projected per
    irrep, the multiplicity of each irrep inside the cluster is read off the
    projected trace, and (for mixed clusters) the projector is
    re-diagonalized inside the cluster so the label multiset is exact even
    though individual degenerate vectors are an arbitrary mix.
    """
    if action.dimension != modes.eigencurrents.shape[0]:
        raise ValueError("action dimension does not match the eigencurrents")
    group = action.group
    projs = {p.name: projector(action, p.name) for p in group.irreps}
    labels = [None] * modes.count
    weights = [None] * modes.count
    clusters = _cluster_slices(modes.eigenvalues, cluster_tolerance)
    for start, stop in clusters:
        block = modes.eigencurrents[:, start:stop]
        q, _ = np.linalg.qr(block)
        counts = {}
        for name, p in projs.items():
            tr = float(np.trace(q.T @ p @ q))
            n = int(round(tr))
            if n > 0:
                counts[name] = n
        per_mode = []
        for k in range(start, stop):
            rep = project(modes.eigencurrents[:, k], action)
            weights[k] = rep.weights
            per_mode.append(rep.dominant)
        expanded = []
        for p in group.irreps:
            expanded.extend([p.name] * counts.get(p.name, 0))
        if len(expanded) != stop - start:
            # weight did not split integrally across the cluster; fall back to
            # per-mode dominant labels
            expanded = per_mode
        elif sorted(per_mode) == sorted(expanded):
            expanded = per_mode
        for k, name in zip(range(start, stop), expanded):
            labels[k] = name
    return ModeClassification(tuple(labels), tuple(weights), tuple(clusters))
