"""Product-space metric, symmetric eigensolver, and projection onto G_d(R^m).

The Grassmannian of d-planes is embedded in matrix space as orthogonal
projection matrices.  Projecting a matrix onto it reduces to symmetrizing,
eigendecomposing, and keeping the top-d eigenspaces; that projection is
undefined on the medial axis, reached exactly when the d-th eigen-gap
closes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GAP_TOLERANCE = 1e-9        # eigen-gap below which the projection is refused
_SYM_TOLERANCE = 1e-8
_JACOBI_TOLERANCE = 1e-12
_JACOBI_MAX_SWEEPS = 100


class MedialAxisError(ValueError):
    """Raised when a matrix is numerically on the medial axis of G_d(R^m)."""


@dataclass(frozen=True)
class MatrixPoint:
    """A point of R^n x M(R^m): a base coordinate and a square matrix."""

    x: np.ndarray
    A: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("matrix part must be square")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "A", A)


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in decreasing order with the matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        O = self.eigenvectors
        return O @ np.diag(self.eigenvalues) @ O.T


@dataclass(frozen=True)
class GrassmannPoint:
    """A rank-d orthogonal projection matrix, the embedding of a d-plane."""

    P: np.ndarray
    d: int

    def __post_init__(self) -> None:
        P = np.asarray(self.P, dtype=float)
        object.__setattr__(self, "P", P)
        if not np.allclose(P, P.T, atol=1e-8):
            raise ValueError("projector must be symmetric")
        if not np.allclose(P @ P, P, atol=1e-7):
            raise ValueError("projector must be idempotent")
        if abs(np.trace(P) - self.d) > 1e-7:
            raise ValueError(f"projector trace {np.trace(P)} != d = {self.d}")

    def top_direction(self) -> np.ndarray:
        """Unit vector spanning the range, for d = 1."""
        if self.d != 1:
            raise ValueError("top_direction is only defined for lines")
        eig = jacobi_eigh(self.P)
        return eig.eigenvectors[:, 0]


def gamma_dist(a: MatrixPoint, b: MatrixPoint, gamma: float) -> float:
    """Distance in the product norm: sqrt(|x_a - x_b|^2 + gamma^2 |A_a - A_b|_F^2)."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if a.x.shape != b.x.shape or a.A.shape != b.A.shape:
        raise ValueError("dimension mismatch between points")
    dx = a.x - b.x
    dA = a.A - b.A
    return float(np.sqrt(dx @ dx + gamma * gamma * np.sum(dA * dA)))


# ---------------------------------------------------------------------------
# Cyclic Jacobi eigensolver
# ---------------------------------------------------------------------------

def jacobi_eigh(S: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps over all (p, q) pairs, zeroing one off-diagonal entry per
    rotation; stops when the off-diagonal Frobenius mass drops below
    1e-12 * |S|_F, with a hard cap of 100 sweeps.  Adequate for the small
    m used here (m <= 8).
    """
    S = np.asarray(S, dtype=float)
    m = S.shape[0]
    if S.shape != (m, m):
        raise ValueError("matrix must be square")
    if np.max(np.abs(S - S.T), initial=0.0) > _SYM_TOLERANCE * (1.0 + np.abs(S).max(initial=0.0)):
        raise ValueError("matrix is not symmetric")
    A = (S + S.T) / 2.0
    O = np.eye(m)
    norm = np.linalg.norm(A)
    if m > 1:
        offdiag = ~np.eye(m, dtype=bool)
        for _ in range(_JACOBI_MAX_SWEEPS):
            # measured directly from the entries: the sum(A^2) - sum(diag^2)
            # form cancels catastrophically near convergence
            off = np.sqrt(np.sum(A[offdiag] ** 2))
            if off <= _JACOBI_TOLERANCE * max(norm, 1e-300):
                break
            for p in range(m - 1):
                for q in range(p + 1, m):
                    apq = A[p, q]
                    if apq == 0.0:
                        continue
                    theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                    theta = min(max(theta, -1e150), 1e150)  # overflow guard
                    if theta == 0.0:
                        t = 1.0
                    else:
                        t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c
                    R = np.eye(m)
                    R[p, p] = R[q, q] = c
                    R[p, q] = s
                    R[q, p] = -s
                    A = R.T @ A @ R
                    A[p, q] = A[q, p] = 0.0
                    O = O @ R
    vals = np.diag(A).copy()
    order = np.argsort(-vals, kind="stable")
    return EigenDecomposition(vals[order], O[:, order])


def jacobi_eigh_batch(S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi over a stack of symmetric matrices (N, m, m), vectorized.

    Same rotation schedule as jacobi_eigh, applied to all matrices at once.
    Returns (eigenvalues (N, m) descending, eigenvectors (N, m, m) columns).
    """
    A = np.array(S, dtype=float)
    N, m = A.shape[0], A.shape[1]
    A = (A + A.transpose(0, 2, 1)) / 2.0
    O = np.broadcast_to(np.eye(m), (N, m, m)).copy()
    norms = np.maximum(np.linalg.norm(A, axis=(1, 2)), 1e-300)
    offdiag = ~np.eye(m, dtype=bool)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = np.sqrt(np.sum((A * offdiag) ** 2, axis=(1, 2)))
        if np.all(off <= _JACOBI_TOLERANCE * norms):
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[:, p, q]
                active = apq != 0.0
                if not np.any(active):
                    continue
                theta = np.zeros(N)
                with np.errstate(over="ignore"):
                    theta[active] = (A[active, q, q] - A[active, p, p]) / (2.0 * apq[active])
                np.clip(theta, -1e150, 1e150, out=theta)
                t = np.where(
                    theta == 0.0,
                    1.0,
                    np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)),
                )
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                Ap = A[:, p, :].copy()
                Aq = A[:, q, :].copy()
                A[:, p, :] = c[:, None] * Ap - s[:, None] * Aq
                A[:, q, :] = s[:, None] * Ap + c[:, None] * Aq
                Ap = A[:, :, p].copy()
                Aq = A[:, :, q].copy()
                A[:, :, p] = c[:, None] * Ap - s[:, None] * Aq
                A[:, :, q] = s[:, None] * Ap + c[:, None] * Aq
                A[:, p, q] = 0.0
                A[:, q, p] = 0.0
                Op = O[:, :, p].copy()
                Oq = O[:, :, q].copy()
                O[:, :, p] = c[:, None] * Op - s[:, None] * Oq
                O[:, :, q] = s[:, None] * Op + c[:, None] * Oq
    vals = np.diagonal(A, axis1=1, axis2=2).copy()
    order = np.argsort(-vals, axis=1, kind="stable")
    vals_sorted = np.take_along_axis(vals, order, axis=1)
    vecs_sorted = np.take_along_axis(O, order[:, None, :], axis=2)
    return vals_sorted, vecs_sorted


# ---------------------------------------------------------------------------
# Projection onto the Grassmannian
# ---------------------------------------------------------------------------

def medial_distance(A: np.ndarray, d: int) -> float:
    """Frobenius distance from A to the medial axis of G_d(R^m).

    Equals sqrt(2)/2 times the gap between the d-th and (d+1)-th eigenvalues
    of the symmetric part of A.
    """
    A = np.asarray(A, dtype=float)
    m = A.shape[0]
    if not 1 <= d < m:
        raise ValueError(f"d = {d} out of range for m = {m}")
    eig = jacobi_eigh((A + A.T) / 2.0)
    lam = eig.eigenvalues
    return float(np.sqrt(2.0) / 2.0 * abs(lam[d - 1] - lam[d]))


def project_grassmannian(A: np.ndarray, d: int) -> GrassmannPoint:
    """Nearest rank-d projector to A in Frobenius norm.

    Symmetrize, eigendecompose, and keep the top-d eigenvector frame.
    Raises MedialAxisError when the eigen-gap at position d is below
    tolerance, i.e. the projection is not unique.
    """
    A = np.asarray(A, dtype=float)
    m = A.shape[0]
    if not 1 <= d < m:
        raise ValueError(f"d = {d} out of range for m = {m}")
    eig = jacobi_eigh((A + A.T) / 2.0)
    lam, O = eig.eigenvalues, eig.eigenvectors
    if lam[d - 1] - lam[d] <= GAP_TOLERANCE:
        raise MedialAxisError(
            f"eigen-gap {lam[d - 1] - lam[d]:.3e} at position {d}: matrix on the medial axis"
        )
    top = O[:, :d]
    return GrassmannPoint(top @ top.T, d)


def line_projector(v: np.ndarray) -> GrassmannPoint:
    """Rank-1 projector onto the line spanned by v."""
    v = np.asarray(v, dtype=float)
    nrm = np.linalg.norm(v)
    if nrm <= 1e-12:
        raise ValueError("near-zero direction vector")
    u = v / nrm
    return GrassmannPoint(np.outer(u, u), 1)


def tmax(points, d: int, gamma: float) -> float:
    """gamma times the smallest medial-axis distance over the cloud's matrices."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    mats = [p.A for p in points]
    if not mats:
        raise ValueError("empty cloud")
    return gamma * min(medial_distance(A, d) for A in mats)
