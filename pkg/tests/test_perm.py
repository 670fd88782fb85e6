import itertools
import math
from functools import lru_cache

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import perm_sign, set_partitions
from resolvent.errors import DomainError, GroupTooLarge
from resolvent.perm import (
    Permutation,
    SetPartition,
    alternating_group,
    chebotarev_bound,
    closure,
    coincidence_partition,
    cycle_count,
    height_lt,
    is_transitive,
    max_chain,
    parity,
    symmetric_group,
)


def perms(n):
    return st.permutations(list(range(n))).map(Permutation)


def test_parse_and_format():
    s = Permutation.parse("(1 2 3)(4 5)", 5)
    assert s.images == (1, 2, 0, 4, 3)
    assert str(s) == "(1 2 3)(4 5)"
    assert str(Permutation.identity(4)) == "()"
    assert Permutation.parse("()", 3).is_identity()


def test_product_applies_left_factor_first():
    a = Permutation.parse("(1 2)", 3)
    b = Permutation.parse("(2 3)", 3)
    # 1 -> 2 under a, then 2 -> 3 under b
    assert (a * b)(0) == 2
    assert str(a * b) == "(1 3 2)"


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(perms(n), perms(n), perms(n))))
def test_group_axioms(triple):
    a, b, c = triple
    assert (a * b) * c == a * (b * c)
    assert (a * a.inverse()).is_identity()
    assert a ** a.order == Permutation.identity(a.n)


@given(st.integers(1, 8).flatmap(perms))
def test_parity_matches_inversions(s):
    expected = "even" if perm_sign(s.images) == 1 else "odd"
    assert parity(s) == expected
    assert Permutation.parse(str(s), s.n) == s


def test_cycle_count():
    assert cycle_count(Permutation.parse("(1 2 3)", 5)) == 3
    assert cycle_count(Permutation.identity(4)) == 4


def test_set_partition_parsing():
    p = SetPartition.parse("{1,2,3}{4,5}")
    assert p.sizes == (3, 2)
    assert SetPartition.parse("{123}{45}") == p
    assert str(p) == "{1,2,3}{4,5}"
    assert p.codim == 3


def test_refinement():
    fine = SetPartition.parse("{1,2}{3}{4}")
    coarse = SetPartition.parse("{1,2,3}{4}")
    assert fine < coarse
    assert not coarse < fine
    assert not fine < fine
    assert fine <= fine


def test_height_order():
    s = Permutation.parse("(1 2)", 4)
    t = Permutation.parse("(1 2 3)", 4)
    assert height_lt(s, t)
    assert not height_lt(t, s)
    assert coincidence_partition(t) == SetPartition.parse("{1,2,3}{4}")


def _brute_chain(n, even_only):
    """Longest chain by dynamic programming over all labelled set partitions."""
    parts = set_partitions(n)
    ok = [p for p in parts if not even_only or (n - len(p.blocks)) % 2 == 0]
    by_blocks = sorted(ok, key=lambda p: -len(p.blocks))

    @lru_cache(maxsize=None)
    def longest_from(i):
        p = by_blocks[i]
        best = 1
        for j, q in enumerate(by_blocks):
            if len(q.blocks) < len(p.blocks) and p < q:
                best = max(best, 1 + longest_from(j))
        return best

    def bottom(p):
        s = p.sizes
        return not (s[0] == 1 or (s[0] == 2 and all(k == 1 for k in s[1:])))

    return max((longest_from(i) for i, p in enumerate(by_blocks) if bottom(p)), default=0)


@pytest.mark.parametrize("n", range(3, 7))
@pytest.mark.parametrize("even_only", [True, False])
def test_max_chain_against_brute_force(n, even_only):
    assert max_chain(n, even_only)[0] == _brute_chain(n, even_only)


@pytest.mark.parametrize("n", range(3, 10))
def test_witness_is_valid(n):
    length, chain = max_chain(n)
    assert length == len(chain) == chebotarev_bound(n)
    bottom = chain[0].sizes
    assert bottom[0] >= 3 or (bottom[0] == 2 and bottom[1] == 2)
    for p in chain:
        assert p.is_even
    for a, b in zip(chain, chain[1:]):
        assert a < b


def test_chain_domain():
    with pytest.raises(DomainError):
        max_chain(2)


@pytest.mark.parametrize("n", range(1, 7))
def test_symmetric_and_alternating_orders(n):
    assert symmetric_group(n).order == math.factorial(n)
    assert alternating_group(n).order == max(1, math.factorial(n) // 2)


def test_closure_membership_and_transitivity():
    g = closure([Permutation.parse("(1 2 3 4 5)", 5), Permutation.parse("(2 5)(3 4)", 5)])
    assert g.order == 10
    assert is_transitive(g)
    assert Permutation.parse("(1 5)(2 4)", 5) in g
    assert Permutation.parse("(1 2)", 5) not in g
    h = closure([Permutation.parse("(1 2)", 4)])
    assert not is_transitive(h)


def test_closure_limit():
    with pytest.raises(GroupTooLarge):
        symmetric_group(6, max_order=100)


def test_cycle_types_of_s4():
    assert symmetric_group(4).cycle_types() == {(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)}


@pytest.mark.parametrize("n", range(2, 7))
def test_even_cycle_count_parity(n):
    for images in itertools.permutations(range(n)):
        s = Permutation(images)
        if parity(s) == "even":
            assert cycle_count(s) % 2 == n % 2


def test_group_json_round_trip():
    g = alternating_group(5)
    h = type(g).from_json(g.to_json())
    assert h.order == 60
    assert set(h.elements) == set(g.elements)
