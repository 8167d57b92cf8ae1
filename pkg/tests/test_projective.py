import itertools

import numpy as np
import pytest

from swbundle.grassmann import line_projector
from swbundle.projective import (
    ProjectiveTriangulation,
    _centered_unit,
    rp_face_map,
    sphere_face_map,
    triangulate_rp,
)
from swbundle.z2 import betti_numbers, is_coboundary, is_cocycle


@pytest.fixture(scope="module")
def T2():
    return triangulate_rp(2)


@pytest.fixture(scope="module")
def T3():
    return triangulate_rp(3)


class TestConstruction:
    def test_m2_is_a_circle(self, T2):
        assert len(T2.vertex_labels) == 3
        assert len(T2.L.simplices[1]) == 3
        assert T2.L.euler_characteristic() == 0
        assert betti_numbers(T2.L, 1) == [1, 1]

    def test_m3_counts(self, T3):
        assert len(T3.vertex_labels) == 7
        assert len(T3.L.simplices[1]) == 18
        assert len(T3.L.simplices[2]) == 12
        assert T3.L.euler_characteristic() == 1
        # b2 = 1 over Z/2 for the projective plane
        assert betti_numbers(T3.L, 2) == [1, 1, 1]

    def test_m3_enumeration_oracle(self):
        # the subdivided sphere has 14 / 36 / 24 cells; the quotient halves them
        subsets = [
            frozenset(c)
            for size in range(1, 4)
            for c in itertools.combinations(range(4), size)
        ]
        assert len(subsets) == 14
        pairs = sum(1 for a in subsets for b in subsets if a < b)
        chains = sum(
            1 for a in subsets for b in subsets for c in subsets if a < b < c
        )
        assert (pairs, chains) == (36, 24)
        T = triangulate_rp(3)
        assert (len(T.vertex_labels), len(T.L.simplices[1]), len(T.L.simplices[2])) == (
            14 // 2,
            36 // 2,
            24 // 2,
        )

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
    def test_vertex_count(self, m):
        assert len(triangulate_rp(m).vertex_labels) == 2**m - 1

    def test_m_out_of_range(self):
        for m in (1, 7):
            with pytest.raises(ValueError):
                triangulate_rp(m)

    def test_involution_is_free(self):
        # no proper subset equals its complement, so the quotient is simplicial
        for m in (2, 3, 4):
            full = frozenset(range(m + 1))
            for size in range(1, m + 1):
                for c in itertools.combinations(range(m + 1), size):
                    assert frozenset(c) != full - frozenset(c)

    def test_labels_contain_zero(self, T3):
        assert all(0 in lab for lab in T3.vertex_labels)

    def test_w1_generates(self):
        for m in (2, 3, 4):
            T = triangulate_rp(m)
            assert is_cocycle(T.L, T.w1)
            assert not is_coboundary(T.L, T.w1)


class TestEmbeddings:
    def test_unit_and_centered(self, T3):
        E = T3.vertex_embeddings
        assert np.allclose(np.linalg.norm(E, axis=1), 1.0)
        assert np.allclose(E.sum(axis=1), 0.0, atol=1e-12)

    def test_matches_indicator_construction(self, T3):
        for i, lab in enumerate(T3.vertex_labels):
            e = np.zeros(4)
            e[list(lab)] = 1.0
            e -= e.mean()
            e /= np.linalg.norm(e)
            assert np.allclose(T3.vertex_embeddings[i], e) or np.allclose(
                T3.vertex_embeddings[i], -e
            )

    def test_complement_is_antipodal(self):
        for m in (2, 3):
            full = frozenset(range(m + 1))
            for size in range(1, m + 1):
                for c in itertools.combinations(range(m + 1), size):
                    a = _centered_unit(frozenset(c), m)
                    b = _centered_unit(full - frozenset(c), m)
                    assert np.allclose(a, -b)


def brute_force_sphere_face(T: ProjectiveTriangulation, x_p: np.ndarray) -> int:
    """Oracle: re-test the two hyperplane conditions per maximal face with
    an independent least-squares barycentric solve."""
    coords = T._sphere_coords
    mask = -1
    hit = False
    for ids, h, h0 in zip(_face_ids(T), T._face_normals, T._face_offsets):
        W = coords[list(ids)]
        dot = float(x_p @ h)
        if not (dot > 0 and h0 > 0) and not (dot < 0 and h0 < 0):
            continue
        y = (h0 / dot) * x_p
        A = np.vstack([W.T, np.ones(len(ids))])
        lam, *_ = np.linalg.lstsq(A, np.append(y, 1.0), rcond=None)
        if lam.min() >= -1e-9:
            hit = True
            fmask = 0
            for i in ids:
                fmask |= 1 << i
            mask &= fmask
    return mask if hit else 0


def _face_ids(T: ProjectiveTriangulation):
    out = []
    for mk in T._face_masks:
        ids = []
        while mk:
            bit = mk & -mk
            ids.append(bit.bit_length() - 1)
            mk ^= bit
        out.append(tuple(ids))
    return out


class TestSphereFaceMap:
    def test_vertex_hit(self, T2):
        x = T2.vertex_embeddings[0]
        faces = sphere_face_map(x, T2)
        assert frozenset({0}) in faces

    def test_edge_midpoint(self, T2):
        a = _centered_unit(frozenset({0}), 2)
        b = _centered_unit(frozenset({0, 1}), 2)
        mid = a + b
        mid /= np.linalg.norm(mid)
        assert sphere_face_map(mid, T2) == (frozenset({0}), frozenset({0, 1}))

    def test_result_is_a_chain(self, T3, rng):
        for _ in range(100):
            x = rng.normal(size=4)
            x -= x.mean()
            x /= np.linalg.norm(x)
            chain = sphere_face_map(x, T3)
            for a, b in zip(chain, chain[1:]):
                assert a < b

    def test_matches_bruteforce(self, T3, rng):
        for _ in range(100):
            x = rng.normal(size=4)
            x -= x.mean()
            x /= np.linalg.norm(x)
            xp = x @ T3._basis
            xp /= np.linalg.norm(xp)
            assert T3.sphere_faces(xp[None, :])[0] == brute_force_sphere_face(T3, xp)

    def test_rejects_bad_input(self, T2):
        with pytest.raises(ValueError):
            sphere_face_map(np.array([1.0, 0.0, 0.0]), T2)  # not sum-zero
        with pytest.raises(ValueError):
            sphere_face_map(np.array([1.0, -2.0, 1.0]), T2)  # not unit


class TestRPFaceMap:
    def test_antipodal_invariance(self, rng):
        for m in (2, 3):
            T = triangulate_rp(m)
            for _ in range(150):
                v = rng.normal(size=m)
                assert rp_face_map(v, T) == rp_face_map(-v, T)

    def test_scale_invariance(self, T3, rng):
        for _ in range(50):
            v = rng.normal(size=3)
            assert rp_face_map(v, T3) == rp_face_map(3.7 * v, T3)

    def test_vertex_embedding_maps_to_vertex(self, T3):
        for i in range(len(T3.vertex_labels)):
            v = T3.vertex_embeddings[i] @ T3._basis
            assert i in rp_face_map(v, T3)

    def test_results_live_in_l(self, T3, rng):
        # 64 spread directions: results are simplices of L and agree with the
        # quotient of the sphere face map
        for _ in range(64):
            v = rng.normal(size=3)
            simplex = rp_face_map(v, T3)
            assert simplex in T3.L
            x = (T3._basis @ (v / np.linalg.norm(v)))
            chain = sphere_face_map(x / np.linalg.norm(x), T3)
            full = frozenset(range(4))
            quotient = sorted(
                {T3.vertex_labels.index(s if 0 in s else full - s) for s in chain}
            )
            assert tuple(quotient) == simplex

    def test_accepts_grassmann_point(self, T2, rng):
        v = rng.normal(size=2)
        assert rp_face_map(line_projector(v), T2) == rp_face_map(v, T2)

    def test_rejects_zero(self, T2):
        with pytest.raises(ValueError):
            rp_face_map(np.zeros(2), T2)


class TestExport:
    def test_json_obj(self, T2):
        obj = T2.to_json_obj()
        assert obj["m"] == 2
        assert obj["vertex_labels"] == [[0], [0, 1], [0, 2]]
        assert [0, 1] in obj["simplices"]
        assert all(len(e) == 2 for e in obj["w1"])
