import numpy as np
import pytest

from swbundle.simplicial import SimplicialComplex


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def random_complex(rng, n_vertices=7, p_edge=0.4, max_dim=2) -> SimplicialComplex:
    """Random flag-ish complex for property tests."""
    simplices = [(v,) for v in range(n_vertices)]
    edges = []
    for a in range(n_vertices):
        for b in range(a + 1, n_vertices):
            if rng.random() < p_edge:
                edges.append((a, b))
    simplices += edges
    if max_dim >= 2:
        eset = set(edges)
        for a in range(n_vertices):
            for b in range(a + 1, n_vertices):
                for c in range(b + 1, n_vertices):
                    if {(a, b), (a, c), (b, c)} <= eset and rng.random() < 0.5:
                        simplices.append((a, b, c))
    return SimplicialComplex(simplices)


# complexes with at most 12 edges, used by the exhaustive GF(2) cross-checks
def small_fixture_complexes() -> list:
    path = SimplicialComplex([(0, 1), (1, 2), (2, 3)])
    tree = SimplicialComplex([(0, 1), (0, 2), (0, 3), (3, 4)])
    hollow3 = SimplicialComplex([(0, 1), (1, 2), (0, 2)])
    filled3 = SimplicialComplex([(0, 1, 2)])
    square = SimplicialComplex([(0, 1), (1, 2), (2, 3), (0, 3)])
    square_diag = SimplicialComplex([(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
    two_tris = SimplicialComplex([(0, 1, 2), (1, 2, 3)])
    theta = SimplicialComplex([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    disjoint_cycles = SimplicialComplex(
        [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    )
    strip = SimplicialComplex(
        [(0, 1, 3), (1, 3, 4), (1, 2, 4), (2, 4, 5), (0, 2, 5), (0, 3, 5)]
    )
    k4_hollow = SimplicialComplex([(a, b) for a in range(4) for b in range(a + 1, 4)])
    wedge = SimplicialComplex([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    return [
        path,
        tree,
        hollow3,
        filled3,
        square,
        square_diag,
        two_tris,
        theta,
        disjoint_cycles,
        strip,
        k4_hollow,
        wedge,
    ]
