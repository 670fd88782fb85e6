import math

import numpy as np
import pytest

from resolvent.errors import DomainError, NearCriticalPath
from resolvent.forms import realize_stratum
from resolvent.monodromy import (
    Loop,
    ParamFamily,
    TrackOptions,
    critical_values,
    general_family,
    inertia_group,
    instantiate,
    klein_param_family,
    klein_point,
    monodromy_group,
    petal_loops,
    power_family,
    start_roots,
    track_loop,
    verify_monodromy_theorem,
)
from resolvent.perm import Permutation, SetPartition, is_transitive
from resolvent.poly import Polynomial, discriminant
from resolvent.transform import klein_family


def circle(center, radius, k=12):
    pts = [[center + radius * np.exp(2j * np.pi * j / k)] for j in range(k)]
    return Loop(pts[0], pts + [pts[0]])


def test_instantiate():
    assert instantiate(general_family(5), [0, 0, 0, 1, 1]) == Polynomial([1, 1, 0, 0, 0, 1]).to_complex()
    assert instantiate(power_family(2), [4]) == Polynomial([-4, 0, 1]).to_complex()
    assert instantiate(klein_param_family(), klein_point(0)) == klein_family(0)
    assert instantiate(klein_param_family(), klein_point(1 - 2j)) == klein_family(1 - 2j)


def test_family_validation():
    with pytest.raises(DomainError):
        ParamFamily(2, 1, np.zeros((2, 3)))
    with pytest.raises(DomainError):
        ParamFamily(2, 1, [[0, -1], [0, 0], [2, 0]])
    fam = ParamFamily(2, 1, [[0, -1], [0, 0], [1, 0]])
    assert fam.coeffs.shape == (2, 2)


def test_family_json_round_trip():
    fam = general_family(4)
    again = ParamFamily.from_json(fam.to_json())
    assert np.array_equal(again.coeffs, fam.coeffs)


def test_loop_validation():
    with pytest.raises(DomainError):
        Loop([1], [[1], [2]])
    with pytest.raises(DomainError):
        Loop([1], [[1], [1], [1]])
    lp = circle(0, 1)
    assert Loop.from_json(lp.to_json()) == lp


def test_options_validation():
    with pytest.raises(DomainError):
        TrackOptions(initial_step=1e-3, min_step=1e-2)
    with pytest.raises(DomainError):
        TrackOptions(collision_factor=1.5)


def test_square_root_branching():
    assert track_loop(power_family(2), circle(0, 1)) == Permutation.parse("(1 2)", 2)


def test_cube_root_branching():
    s = track_loop(power_family(3), circle(0, 1))
    assert s.order == 3


def test_loop_without_critical_value():
    assert track_loop(power_family(2), circle(3, 1)).is_identity()


def test_trace_records_swap():
    trace = []
    track_loop(power_family(2), circle(0, 1), trace=trace)
    first, last = trace[0][1], trace[-1][1]
    assert abs(last[0] - first[1]) < 1e-9 and abs(last[1] - first[0]) < 1e-9


def test_petals():
    assert len(petal_loops(power_family(2), [1.0])) == 1
    const = ParamFamily(2, 1, [[-1, 0], [0, 0]])
    assert petal_loops(const, [0.5]) == []
    rng = np.random.default_rng(4)
    base = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    d = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    d /= np.linalg.norm(d)
    # x^3 + a x + b
    cubic = ParamFamily(3, 2, [[0, 0, 1], [0, 1, 0], [0, 0, 0]])
    vals = critical_values(cubic, base, d)
    assert len(vals) == 3
    for s in vals:
        a, b = base + s * d
        assert abs(4 * a**3 + 27 * b**2) < 1e-8


def _always_critical():
    # x^3 + a x^2 = x^2 (x + a)
    return ParamFamily(3, 1, [[0, 0], [0, 0], [0, 1]])


def test_line_in_discriminant_locus():
    with pytest.raises(DomainError, match="discriminant locus"):
        critical_values(_always_critical(), [1.0], [1.0])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_general_family_is_symmetric(n):
    g = monodromy_group(general_family(n), seed=7)
    assert g.order == math.factorial(n)
    assert is_transitive(g)


def test_seed_determinism():
    a = monodromy_group(general_family(4), seed=3)
    b = monodromy_group(general_family(4), seed=3)
    assert [str(s) for s in a.generators] == [str(s) for s in b.generators]
    assert a.meta == b.meta


def _random_petals(seed):
    fam = general_family(4)
    rng = np.random.default_rng(seed)
    base = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return fam, petal_loops(fam, base, seed)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_reversal_gives_inverse(seed):
    fam, loops = _random_petals(seed)
    for lp in loops:
        assert track_loop(fam, lp.reversed()) == track_loop(fam, lp).inverse()


@pytest.mark.parametrize("seed", [0, 1])
def test_concatenation_composes(seed):
    fam, loops = _random_petals(seed)
    for a, b in zip(loops, loops[1:]):
        assert track_loop(fam, a + b) == track_loop(fam, a) * track_loop(fam, b)


def test_step_size_invariance():
    fam, loops = _random_petals(5)
    fine = TrackOptions(initial_step=1e-3)
    for lp in loops:
        assert track_loop(fam, lp) == track_loop(fam, lp, fine)


def test_near_critical_path_is_on_discriminant():
    fam = general_family(3)
    crit = realize_stratum(fam, SetPartition.parse("{1,2}{3}"))
    base = crit + np.array([0.3, 0.2j, -0.1])
    lp = Loop(base, [base, crit, base + 0.1, base])
    with pytest.raises(NearCriticalPath) as info:
        track_loop(fam, lp)
    point = np.array(info.value.point)
    assert abs(complex(discriminant(instantiate(fam, point)))) < 1e-6


def test_basepoint_on_locus_rejected():
    with pytest.raises(DomainError):
        start_roots(power_family(2), [0])


def test_inertia_simple_point():
    fam = general_family(5)
    crit = realize_stratum(fam, SetPartition.parse("{1,2}{3}{4}{5}"))
    g = inertia_group(fam, crit, 1e-3, seed=2)
    assert g.order == 2
    (t,) = g.generators
    roots = [complex(*r) for r in g.meta["local_roots"]]
    moved = [i for i in range(5) if t(i) != i]
    closest = sorted(range(5), key=lambda i: abs(roots[i]))[:2]
    assert sorted(moved) == sorted(closest)


def test_inertia_triple_point():
    fam = general_family(5)
    crit = realize_stratum(fam, SetPartition.parse("{1,2,3}{4}{5}"))
    g = inertia_group(fam, crit, 1e-3, seed=2)
    assert any(p.order == 3 for p in g.permutations())


def test_inertia_regular_point():
    assert inertia_group(general_family(4), [0.3, 0.1j, 0.5, 1.0], 1e-3).order == 1


def test_inertia_degenerate_stratum():
    with pytest.raises(DomainError, match="radius too small"):
        inertia_group(_always_critical(), [1.0], 1e-3)


def test_monodromy_theorem():
    sq = power_family(2)
    assert verify_monodromy_theorem(sq, [[0]])
    cubic = general_family(3)
    double = realize_stratum(cubic, SetPartition.parse("{1,2}{3}"))
    assert verify_monodromy_theorem(cubic, [double])
    res = verify_monodromy_theorem(cubic, [])
    assert not res and res.monodromy_order == 6 and res.inertia_order == 1
    assert res.deficit == 6


def test_klein_family_monodromy():
    # along the curve delta = gamma^2 the lifted family is ordinary
    fam = klein_param_family()
    g = monodromy_group(fam, seed=1)
    assert is_transitive(g)
