import cmath

import numpy as np
import pytest

from resolvent import _kernels
from resolvent.perm import Permutation

BACKENDS = _kernels.available_backends()


@pytest.fixture(params=sorted(BACKENDS))
def kern(request):
    return BACKENDS[request.param]


def test_backend_selected():
    assert _kernels.BACKEND in BACKENDS


def test_aberth(kern):
    coeffs = [-1, 0, 0, 0, 0, 1]
    z0 = [cmath.exp(1j * (2 * cmath.pi * k / 5 + 0.4)) * 1.1 for k in range(5)]
    roots, ok, _ = kern.aberth(coeffs, z0, 200)
    assert ok
    for r in roots:
        assert abs(r**5 - 1) < 1e-12


def test_track_segment(kern):
    # x^2 - a along a = 1 -> a = 4
    roots, ok, t, steps = kern.track_segment([-1, 0, 1], [-3, 0, 0], [1, -1], 1e-2, 1e-8, 1e-12, 4.0, 8, None)
    assert ok and t == 1.0 and steps >= 100
    assert abs(roots[0] - 2) < 1e-10 and abs(roots[1] + 2) < 1e-10


def test_track_segment_through_collision(kern):
    # x^2 - a along a = 1 -> a = -1 passes through a = 0
    _, ok, t, _ = kern.track_segment([-1, 0, 1], [2, 0, 0], [1, -1], 1e-2, 1e-8, 1e-12, 4.0, 8, None)
    assert not ok and abs(t - 0.5) < 1e-3


def test_closure_and_cycle_types(kern):
    gens = [Permutation.parse("(1 2)", 5).images, Permutation.parse("(1 2 3 4 5)", 5).images]
    elems = kern.closure(gens, 5, 10**6)
    assert len(elems) == 120
    assert kern.closure(gens, 5, 100) is None
    assert len(kern.cycle_types(elems, 5)) == 7


def test_backends_agree():
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend not built")
    pure, comp = BACKENDS["pure"], BACKENDS["compiled"]
    rng = np.random.default_rng(1)
    for _ in range(5):
        c0 = list(rng.standard_normal(5) + 1j * rng.standard_normal(5)) + [1]
        dc = list(0.3 * (rng.standard_normal(5) + 1j * rng.standard_normal(5))) + [0]
        start = np.roots(c0[::-1]).tolist()
        a = pure.track_segment(c0, dc, start, 1e-2, 1e-8, 1e-12, 4.0, 8, None)
        b = comp.track_segment(c0, dc, start, 1e-2, 1e-8, 1e-12, 4.0, 8, None)
        assert a[1] == b[1] and a[3] == b[3]
        assert np.allclose(a[0], b[0], atol=1e-12)
    gens = [Permutation.parse("(1 2 3)", 6).images, Permutation.parse("(3 4 5 6)", 6).images]
    assert pure.closure(gens, 6, 10**6) == comp.closure(gens, 6, 10**6)
