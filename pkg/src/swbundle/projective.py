"""Triangulation of real projective space as an antipodal quotient.

The boundary of the standard m-simplex triangulates the (m-1)-sphere; its
barycentric subdivision has one vertex per nonempty proper subset of the
m+1 corner labels, and identifying each subset with its complement yields a
triangulation L of RP^{m-1} = G_1(R^m).  Everything the pipeline needs is
precomputed here: the quotient 2-skeleton with a generator of H^1, unit
embeddings of the vertices, and the ray-shooting face map of the sphere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .simplicial import SimplicialComplex
from .z2 import CochainZ2, h1_generator

FACE_EPSILON = 1e-9  # barycentric coordinates >= -FACE_EPSILON count as inside

_MIN_M = 2
_MAX_M = 6


@dataclass
class ProjectiveTriangulation:
    """Triangulation of RP^{m-1} with quotient labels, embeddings, and face maps.

    ``L`` is the 2-skeleton of the quotient complex (enough for degree-1
    cohomology), ``vertex_labels[i]`` is the canonical member (containing 0)
    of the complement pair behind vertex i, ``vertex_embeddings[i]`` the unit
    vector of that subset's centered indicator, and ``w1`` a 1-cocycle
    generating H^1(L, Z/2).
    """

    m: int
    L: SimplicialComplex
    vertex_labels: list
    vertex_embeddings: np.ndarray
    w1: CochainZ2
    _basis: np.ndarray = field(repr=False)
    _subsets: list = field(repr=False)
    _sphere_coords: np.ndarray = field(repr=False)
    _sphere_to_l: np.ndarray = field(repr=False)
    _face_normals: np.ndarray = field(repr=False)
    _face_offsets: np.ndarray = field(repr=False)
    _face_bary: np.ndarray = field(repr=False)
    _face_masks: list = field(repr=False)

    # -- face maps ---------------------------------------------------------

    def sphere_faces(self, X: np.ndarray) -> list:
        """Sphere face map for a batch of unit vectors in hyperplane coordinates.

        Each result is the bitmask (over sphere vertex ids) of the
        intersection of all maximal faces hit by the ray through the query.
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out: list[int] = []
        H, h0, B = self._face_normals, self._face_offsets, self._face_bary
        n_faces = H.shape[0]
        chunk = max(1, int(2_000_000 / max(n_faces * self.m, 1)))
        for lo in range(0, X.shape[0], chunk):
            xs = X[lo: lo + chunk]
            dots = xs @ H.T                                   # (N, F)
            ok = dots > 1e-300                                # normals point away from origin
            with np.errstate(divide="ignore", invalid="ignore"):
                alpha = np.where(ok, h0[None, :] / dots, np.nan)
            y = alpha[:, :, None] * xs[:, None, :]            # (N, F, m)
            lam = np.einsum("fam,nfm->nfa", B[:, :, : self.m], y) + B[None, :, :, self.m].reshape(
                1, n_faces, self.m
            )
            lam = np.where(ok[:, :, None], lam, np.inf)  # keep NaNs of skipped faces out
            ok &= np.min(lam, axis=2) >= -FACE_EPSILON
            for row in ok:
                mask = -1
                for f in np.nonzero(row)[0]:
                    mask &= self._face_masks[f]
                if mask <= 0:
                    raise RuntimeError("no qualifying maximal face for query point")
                out.append(mask)
        return out

    def sphere_mask_to_subsets(self, mask: int) -> tuple:
        """Translate a sphere-vertex bitmask into its subset chain."""
        subs = []
        while mask:
            bit = mask & -mask
            subs.append(self._subsets[bit.bit_length() - 1])
            mask ^= bit
        return tuple(sorted(subs, key=lambda s: (len(s), sorted(s))))

    def quotient_mask(self, mask: int) -> tuple:
        """Translate a sphere-vertex bitmask into the quotient simplex of L."""
        ids = set()
        while mask:
            bit = mask & -mask
            ids.add(int(self._sphere_to_l[bit.bit_length() - 1]))
            mask ^= bit
        return tuple(sorted(ids))

    def face_simplices(self, directions: np.ndarray) -> list:
        """L-simplices hit by a batch of line directions in R^m."""
        X = np.atleast_2d(np.asarray(directions, dtype=float))
        norms = np.linalg.norm(X, axis=1)
        if np.any(norms <= 1e-12):
            raise ValueError("zero direction vector")
        return [self.quotient_mask(mk) for mk in self.sphere_faces(X / norms[:, None])]

    def to_json_obj(self) -> dict:
        return {
            "m": self.m,
            "vertex_labels": [sorted(lab) for lab in self.vertex_labels],
            "simplices": self.L.to_json_obj(),
            "w1": sorted(sorted(e) for e in self.w1.support),
        }


def _centered_unit(subset, m: int) -> np.ndarray:
    e = np.zeros(m + 1)
    e[list(subset)] = 1.0
    e -= e.mean()
    return e / np.linalg.norm(e)


def _hyperplane_basis(m: int) -> np.ndarray:
    """Deterministic orthonormal basis of the sum-zero hyperplane in R^{m+1}."""
    cols = []
    for i in range(m):
        v = np.zeros(m + 1)
        v[i] = 1.0
        v -= v.mean()
        for c in cols:
            v -= (v @ c) * c
        v /= np.linalg.norm(v)
        cols.append(v)
    return np.column_stack(cols)


def _complement_vector(diffs: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to the rows of diffs ((m-1) x m, full rank)."""
    m = diffs.shape[1]
    Q: list[np.ndarray] = []
    for v in diffs:
        w = v.copy()
        for q in Q:
            w -= (w @ q) * q
        n = np.linalg.norm(w)
        if n <= 1e-12:
            raise RuntimeError("degenerate maximal face")
        Q.append(w / n)
    best = None
    best_norm = -1.0
    for k in range(m):
        r = np.zeros(m)
        r[k] = 1.0
        for q in Q:
            r -= (r @ q) * q
        n = np.linalg.norm(r)
        if n > best_norm:
            best_norm = n
            best = r
    if best_norm <= 1e-12:
        raise RuntimeError("degenerate maximal face")
    return best / best_norm


def triangulate_rp(m: int) -> ProjectiveTriangulation:
    """Build the quotient triangulation of RP^{m-1} for 2 <= m <= 6.

    Subdivides the boundary of the m-simplex once (vertices = nonempty
    proper subsets of the m+1 labels, simplices = inclusion chains),
    identifies complementary subsets, and keeps the 2-skeleton of the
    quotient together with the geometry needed by the face maps.
    """
    if not _MIN_M <= m <= _MAX_M:
        raise ValueError(f"m = {m} outside supported range [{_MIN_M}, {_MAX_M}]")
    labels = range(m + 1)
    full = frozenset(labels)
    subsets = [
        frozenset(s)
        for size in range(1, m + 1)
        for s in _subsets_of_size(labels, size)
    ]
    subsets.sort(key=lambda s: (len(s), sorted(s)))
    sub_index = {s: i for i, s in enumerate(subsets)}

    # quotient vertices: canonical representative contains label 0
    def rep(s: frozenset) -> frozenset:
        return s if 0 in s else full - s

    vertex_labels = sorted({rep(s) for s in subsets}, key=lambda s: (len(s), sorted(s)))
    rep_index = {s: i for i, s in enumerate(vertex_labels)}
    sphere_to_l = np.array([rep_index[rep(s)] for s in subsets], dtype=np.int64)

    # quotient 2-skeleton: images of chains of length <= 3
    supersets = {s: [t for t in subsets if s < t] for s in subsets}
    simplices: set[tuple] = {(i,) for i in range(len(vertex_labels))}
    for a in subsets:
        ia = sphere_to_l[sub_index[a]]
        for b in supersets[a]:
            ib = sphere_to_l[sub_index[b]]
            simplices.add(tuple(sorted((int(ia), int(ib)))))
            for c in supersets[b]:
                ic = sphere_to_l[sub_index[c]]
                simplices.add(tuple(sorted((int(ia), int(ib), int(ic)))))
    L = SimplicialComplex(simplices)

    w1 = h1_generator(L)
    if w1 is None:
        raise RuntimeError("projective triangulation has trivial H^1; construction broken")

    basis = _hyperplane_basis(m)
    embeddings = np.array([_centered_unit(s, m) for s in vertex_labels])
    sphere_coords = np.array([_centered_unit(s, m) @ basis for s in subsets])

    # maximal faces: one chain of subset sizes 1..m per permutation
    face_vertex_ids = []
    seen = set()
    for perm in permutations(labels):
        ids = []
        acc = set()
        for k in range(m):
            acc.add(perm[k])
            ids.append(sub_index[frozenset(acc)])
        key = tuple(ids)
        if key not in seen:
            seen.add(key)
            face_vertex_ids.append(ids)

    normals = np.empty((len(face_vertex_ids), m))
    offsets = np.empty(len(face_vertex_ids))
    bary = np.empty((len(face_vertex_ids), m, m + 1))
    masks = []
    ones = np.ones((1, m))
    for f, ids in enumerate(face_vertex_ids):
        W = sphere_coords[ids]                      # (m, m) rows are vertices
        h = _complement_vector(W[1:] - W[0])
        h0 = float(W[0] @ h)
        if h0 < 0:
            h, h0 = -h, -h0
        if h0 <= 1e-12:
            raise RuntimeError("maximal face hyperplane passes through the origin")
        normals[f] = h
        offsets[f] = h0
        bary[f] = np.linalg.pinv(np.vstack([W.T, ones]))
        mask = 0
        for i in ids:
            mask |= 1 << i
        masks.append(mask)

    return ProjectiveTriangulation(
        m=m,
        L=L,
        vertex_labels=vertex_labels,
        vertex_embeddings=embeddings,
        w1=w1,
        _basis=basis,
        _subsets=subsets,
        _sphere_coords=sphere_coords,
        _sphere_to_l=sphere_to_l,
        _face_normals=normals,
        _face_offsets=offsets,
        _face_bary=bary,
        _face_masks=masks,
    )


def _subsets_of_size(labels, size):
    from itertools import combinations

    return combinations(labels, size)


def sphere_face_map(x: np.ndarray, T: ProjectiveTriangulation) -> tuple:
    """Smallest simplex of the subdivided sphere whose closure meets the ray of x.

    ``x`` is a unit vector of R^{m+1} lying in the sum-zero hyperplane.
    Returns the simplex as a tuple of label subsets.  Conditions are tested
    with slack FACE_EPSILON, so the result may differ from the exact face by
    simplices sharing its boundary; either direction is harmless for the
    weak star machinery.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (T.m + 1,):
        raise ValueError(f"expected a vector of R^{T.m + 1}")
    if abs(np.linalg.norm(x) - 1.0) > 1e-6:
        raise ValueError("expected a unit vector")
    if abs(x.sum()) > 1e-6:
        raise ValueError("expected a vector in the sum-zero hyperplane")
    xp = x @ T._basis
    xp /= np.linalg.norm(xp)
    return T.sphere_mask_to_subsets(T.sphere_faces(xp[None, :])[0])


def rp_face_map(v, T: ProjectiveTriangulation) -> tuple:
    """Simplex of L containing the class of a line of R^m.

    Accepts a nonzero direction vector or a rank-1 GrassmannPoint (whose top
    eigenvector is extracted).  The answer does not depend on the sign of
    the representative.
    """
    from .grassmann import GrassmannPoint

    if isinstance(v, GrassmannPoint):
        if v.d != 1:
            raise ValueError("rp_face_map needs a line, d = 1")
        v = v.top_direction()
    v = np.asarray(v, dtype=float)
    if v.shape != (T.m,):
        raise ValueError(f"expected a direction in R^{T.m}")
    return T.face_simplices(v[None, :])[0]
