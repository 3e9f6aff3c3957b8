import numpy as np
import pytest

from conftest import random_cloud
from pslap.alpha import alpha_complex, assign_filtration, critical_alphas, is_gabriel
from pslap.geometry import PointSet, min_circumsphere
from pslap.simplices import snapshot

NAMES = "ABCDEF"


def test_gabriel_examples():
    pts = PointSet(np.array([(0, 0), (2, 0), (1, 5)], float))
    c = alpha_complex(pts)
    assert is_gabriel(c, pts, (0, 1))  # ball radius 1 excludes (1,5)
    assert is_gabriel(c, pts, (0,))  # vertices always
    tri = PointSet(np.array([(0, 0), (4, 0), (2, 0.5)], float))
    c2 = alpha_complex(tri)
    assert not is_gabriel(c2, tri, (0, 1))  # (2,0.5) inside the radius-2 ball


def test_assign_filtration_equilateral():
    pts = PointSet(np.array([(0, 0), (1, 0), (0.5, np.sqrt(3) / 2)]))
    c = alpha_complex(pts)
    for v in c.simplices(0):
        assert c.filtration_sq(v) == 0.0
    for e in c.simplices(1):
        assert np.isclose(c.filtration_sq(e), 0.25)
    assert np.isclose(c.filtration_sq((0, 1, 2)), 1.0 / 3.0)
    assert np.allclose(critical_alphas(c), [0.0, 0.5, np.sqrt(1.0 / 3.0)])


def test_assign_filtration_non_gabriel_inherits():
    pts = PointSet(np.array([(0, 0), (4, 0), (2, 0.5)], float))
    c = alpha_complex(pts)
    assert np.isclose(c.filtration_sq((0, 1)), 18.0625)  # long edge inherits
    assert np.isclose(c.filtration_sq((0, 2)), 1.0625)  # short edges keep their own
    assert np.isclose(c.filtration_sq((1, 2)), 1.0625)


def test_six_point_complex_at_rest_alphas(six_points, six_complex):
    present = lambda a: (
        sorted(
            "".join(NAMES[v] for v in s)
            for s in six_complex.simplices(1)
            if six_complex.filtration_sq(s) <= a * a
        ),
        sorted(
            "".join(NAMES[v] for v in s)
            for s in six_complex.simplices(2)
            if six_complex.filtration_sq(s) <= a * a
        ),
    )
    edges, tris = present(0.6)
    assert edges == ["AB", "AE", "BC", "CD", "DE", "DF", "EF"]
    assert tris == ["DEF"]
    assert present(0.2) == ([], [])


def test_critical_alphas_single_edge():
    pts = PointSet(np.array([(0.0, 0.0), (2.0, 0.0)]))
    c = alpha_complex(pts)
    assert np.allclose(critical_alphas(c), [0.0, 1.0])


def test_six_point_cycle_death_in_window(six_complex):
    # the pentagon 1-cycle must die in (0.6, 0.83]
    fills = sorted(
        np.sqrt(six_complex.filtration_sq(s))
        for s in six_complex.simplices(2)
        if s != (3, 4, 5)
    )
    assert 0.6 < fills[-1] <= 0.83


def test_monotone_filtration_random_clouds():
    # exact (not tolerance-level) monotonicity after the bottom-up repair
    for seed, n, d in [(0, 12, 2), (1, 15, 3), (2, 30, 2), (3, 20, 3)]:
        pts = random_cloud(seed, n, d)
        c = alpha_complex(pts, seed=seed)
        for q in range(1, c.max_dim + 1):
            for s in c.simplices(q):
                v = c.filtration_sq(s)
                for i in range(q + 1):
                    assert c.filtration_sq(s[:i] + s[i + 1:]) <= v


def test_gabriel_value_assignment_rule():
    # Gabriel simplices carry their own squared circumradius; non-Gabriel ones
    # a value attained by some coface
    for seed, n, d in [(4, 10, 2), (5, 12, 3)]:
        pts = random_cloud(seed, n, d)
        c = alpha_complex(pts, seed=seed)
        for q in range(1, c.max_dim + 1):
            for s in c.simplices(q):
                own = min_circumsphere(pts.coords[list(s)]).radius_sq
                if is_gabriel(c, pts, s):
                    assert np.isclose(c.filtration_sq(s), own, rtol=1e-10)
                else:
                    cofaces = [
                        t
                        for t in c.simplices(q + 1)
                        if set(s) <= set(t)
                    ]
                    vals = [c.filtration_sq(t) for t in cofaces]
                    assert any(
                        np.isclose(c.filtration_sq(s), v, rtol=1e-12) for v in vals
                    )


# -- nerve-definition oracle ---------------------------------------------------


def _nerve_member(coords, simplex, alpha, resolution=160):
    """Membership of a simplex in the alpha complex straight from the nerve
    definition: a witness x must be within alpha of every simplex vertex and
    have no other point strictly closer.  Witnesses live on the equidistance
    subspace through the circumcenter, which is sampled densely."""
    pts = coords[list(simplex)]
    center = min_circumsphere(pts).center
    d = coords.shape[1]
    V = pts[1:] - pts[0]
    if len(V):
        basis = np.linalg.svd(V, full_matrices=True)[2][len(V):]
    else:
        basis = np.eye(d)
    if basis.shape[0] == 0:
        samples = center[None, :]
    else:
        ticks = np.linspace(-alpha, alpha, resolution)
        grids = np.meshgrid(*([ticks] * basis.shape[0]), indexing="ij")
        offsets = np.stack([g.ravel() for g in grids], axis=1)
        samples = center[None, :] + offsets @ basis
    d_own = np.linalg.norm(samples[:, None, :] - pts[None, :, :], axis=2)
    ok = np.all(d_own <= alpha * (1 + 1e-9), axis=1)
    others = [i for i in range(coords.shape[0]) if i not in set(simplex)]
    if others:
        d_other = np.linalg.norm(
            samples[:, None, :] - coords[None, others, :], axis=2
        )
        ok &= np.all(d_other >= d_own[:, :1] * (1 - 1e-9), axis=1)
    return bool(np.any(ok))


@pytest.mark.parametrize("seed,n,d", [(7, 7, 2), (8, 8, 2), (9, 7, 3)])
def test_filtration_matches_nerve_definition(seed, n, d):
    pts = random_cloud(seed, n, d)
    c = alpha_complex(pts, seed=seed)
    for q in range(1, c.max_dim + 1):
        for s in c.simplices(q):
            a = np.sqrt(c.filtration_sq(s))
            assert _nerve_member(pts.coords, s, a * 1.02), (s, a)
            assert not _nerve_member(pts.coords, s, a * 0.98), (s, a)


def test_alpha_complex_tiny_inputs():
    c1 = alpha_complex(PointSet(np.array([(0.5, 0.5)])))
    assert c1.n_simplices(0) == 1 and c1.n_simplices(1) == 0
    c2 = alpha_complex(PointSet(np.array([(-1.0, 0.0), (1.0, 0.0)])))
    assert c2.n_simplices(1) == 1
    assert np.isclose(c2.filtration_sq((0, 1)), 1.0)


def test_snapshot_counts_at_critical_values(six_complex):
    # every critical alpha admits at least one simplex exactly at that value
    crit = critical_alphas(six_complex)
    prev = None
    for a in crit:
        counts = snapshot(six_complex, a).counts
        assert prev is None or counts != prev
        prev = counts
