"""Group actions on point-sampled fields and character projection.

A field sampled on a symmetric point set transforms by permuting the points
and rotating the per-point vectors; the resulting operators are explicit
orthogonal matrices.  Character projectors split any coefficient vector into
its irrep components, which is what mode classification runs on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pointgroup import PLANE_Z, PointGroup, operation_from_matrix

#: weight above which a vector counts as a pure irrep basis function
CLASSIFY_THRESHOLD = 1.0 - 1e-6


class PointSetNotSymmetricError(ValueError):
    def __init__(self, group, misses):
        self.misses = misses
        preview = ", ".join(f"(element {e}, point {p})" for e, p in misses[:4])
        more = "" if len(misses) <= 4 else f" and {len(misses) - 4} more"
        super().__init__(
            f"point set is not closed under {group}: no partner for {preview}{more}")


class BasisNotIsotypicError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GroupAction:
    """Orthogonal action of a point group on stacked field samples.

    `operators` maps element index -> N x N matrix; N = dof * len(points).
    Coefficient vectors stack the per-point samples point-major.
    """

    group: PointGroup
    operators: dict
    points: np.ndarray | None = None
    dof: int = 3

    @property
    def dimension(self) -> int:
        return self.operators[0].shape[0]


def _permutation(points: np.ndarray, matrix: np.ndarray, tol: float):
    """perm[i] = j such that matrix @ points[j] == points[i], or None."""
    target = points @ matrix.T          # row i = matrix applied to points[i]
    perm = []
    for i in range(len(points)):
        hit = None
        for j in range(len(points)):
            if np.abs(target[j] - points[i]).max() <= tol:
                hit = j
                break
        perm.append(hit)
    return perm


def _operator_for(points: np.ndarray, matrix: np.ndarray, dof: int, tol: float):
    perm = _permutation(points, matrix, tol)
    misses = [i for i, j in enumerate(perm) if j is None]
    if misses:
        return None, misses
    n = len(points)
    op = np.zeros((dof * n, dof * n))
    for i, j in enumerate(perm):
        if dof == 1:
            op[i, j] = 1.0
        else:
            op[dof * i:dof * i + dof, dof * j:dof * j + dof] = matrix
    return op, []


def action_from_points(group: PointGroup, points, dof: int = 3,
                       tol: float = 1e-8) -> GroupAction:
    """Build the action of `group` on fields sampled at `points`.

    Parameters
    ----------
    group : PointGroup
    points : (N, 3) array-like
        Must map onto itself under every group operation (within `tol`).
    dof : int
        1 for scalar samples (pure permutation action), 3 for vector samples
        (signed 3x3-block permutation).
    """
    if dof not in (1, 3):
        raise ValueError("dof must be 1 or 3")
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("points must be an (N, 3) array")
    operators = {}
    misses = []
    for idx, op in enumerate(group.elements):
        mat, bad = _operator_for(pts, op.matrix, dof, tol)
        if bad:
            misses.extend((idx, p) for p in bad)
        else:
            operators[idx] = mat
    if misses:
        raise PointSetNotSymmetricError(group.name, misses)
    pts = pts.copy()
    pts.setflags(write=False)
    return GroupAction(group, operators, pts, dof)


def orbit_points(group: PointGroup, seed, tol: float = 1e-8) -> np.ndarray:
    """Orbit of a seed point under the group (deduplicated); always a valid
    point set for action_from_points."""
    seed = np.asarray(seed, dtype=float)
    pts = []
    for op in group.elements:
        q = op.matrix @ seed
        if not any(np.abs(q - p).max() <= tol for p in pts):
            pts.append(q)
    return np.array(pts)


def projector(action: GroupAction, irrep_name: str) -> np.ndarray:
    """Character projector (d_p/g) sum_T chi_p(T)* D(T)."""
    group = action.group
    p = group.irrep(irrep_name)
    n = action.dimension
    out = np.zeros((n, n))
    for i in range(group.order):
        out += group.character(p, i) * action.operators[i]
    return (p.dimension / group.order) * out


@dataclass(frozen=True)
class ProjectionReport:
    """Per-irrep weights of one coefficient vector."""

    weights: dict            # irrep name -> |P v| / |v|
    components: dict         # irrep name -> projected vector
    dominant: str

    @property
    def classified(self) -> str | None:
        """Irrep name when the vector is a pure basis function, else None."""
        if self.weights[self.dominant] >= CLASSIFY_THRESHOLD:
            return self.dominant
        return None


def project(v, action: GroupAction) -> ProjectionReport:
    """Split a coefficient vector into irrep components and weigh them."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("cannot project a zero vector")
    weights = {}
    components = {}
    for p in action.group.irreps:
        comp = projector(action, p.name) @ v
        components[p.name] = comp
        weights[p.name] = float(np.linalg.norm(comp) / norm)
    dominant = max(weights, key=lambda k: (weights[k], -action.group.irrep(k).index))
    return ProjectionReport(weights, components, dominant)


def irrep_matrix_entries(basis, action: GroupAction, element_index: int,
                         weight: np.ndarray | None = None) -> np.ndarray:
    """Matrix of one group element in an orthonormal isotypic basis.

    `basis` columns must be orthonormal and all classified into the same
    irrep; the returned d x d matrix has entries <psi_mu, D(T) psi_nu> and
    its trace is checked against the character.
    """
    basis = np.asarray(basis, dtype=float)
    if basis.ndim != 2:
        raise ValueError("basis must be a matrix with one column per function")
    gram = basis.T @ (basis if weight is None else weight @ basis)
    if np.abs(gram - np.eye(basis.shape[1])).max() > 1e-8:
        raise BasisNotIsotypicError("basis columns are not orthonormal")
    names = set()
    for k in range(basis.shape[1]):
        rep = project(basis[:, k], action)
        if rep.classified is None:
            raise BasisNotIsotypicError(
                f"basis column {k} is not a pure irrep function "
                f"(best {rep.dominant} at weight {rep.weights[rep.dominant]:.6f})")
        names.add(rep.classified)
    if len(names) != 1:
        raise BasisNotIsotypicError(f"basis mixes irreps {sorted(names)}")
    name = names.pop()
    p = action.group.irrep(name)
    if basis.shape[1] != p.dimension:
        raise BasisNotIsotypicError(
            f"basis for {name} must have {p.dimension} columns")
    d = action.operators[element_index]
    target = d @ basis
    if weight is not None:
        target = weight @ target
    gamma = basis.T @ target
    chi = action.group.character(p, element_index)
    if abs(np.trace(gamma) - chi) > 1e-6:
        raise BasisNotIsotypicError(
            f"trace {np.trace(gamma):.8f} does not match the {name} character "
            f"{chi} at element {element_index}")
    return gamma


def plane_operator(action: GroupAction, plane=None) -> np.ndarray:
    """Operator for a mirror operation, whether or not it is in the group.

    Group members use their stored operator; anything else is induced from
    the point set (which must be closed under it).
    """
    plane_matrix = PLANE_Z if plane is None else np.asarray(plane, dtype=float)
    idx = action.group.find_element(plane_matrix)
    if idx is not None:
        return action.operators[idx]
    if action.points is None:
        raise ValueError(
            "plane operation is outside the group and the action has no point "
            "set to induce it from")
    operation_from_matrix(plane_matrix)   # validates orthogonality
    op, misses = _operator_for(action.points, plane_matrix, action.dof, 1e-8)
    if misses:
        raise PointSetNotSymmetricError("the plane operation",
                                        [("plane", p) for p in misses])
    return op


def parity_check(v, action: GroupAction, plane=None,
                 weight: np.ndarray | None = None) -> float:
    """Expectation value <v, D(plane) v> for a mirror operation.

    Defaults to the mirror through z = 0.  Returns a value in [-1, 1]
    (after normalizing v); -1 marks a field compatible with a PEC plane,
    +1 its even counterpart.
    """
    v = np.asarray(v, dtype=float)
    d = plane_operator(action, plane)
    if weight is None:
        denom = float(v @ v)
        num = float(v @ (d @ v))
    else:
        denom = float(v @ (weight @ v))
        num = float(v @ (weight @ (d @ v)))
    if denom == 0:
        raise ValueError("cannot evaluate parity of a zero vector")
    return num / denom
