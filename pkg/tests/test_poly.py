import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import match_multisets
from resolvent.errors import DomainError
from resolvent.poly import (
    COMPLEX,
    Polynomial,
    discriminant,
    find_roots,
    format_rational,
    is_degenerate,
    parse_complex,
    parse_rational,
    poly_eval,
    resultant,
    sylvester_matrix,
)

x = Polynomial.x()
small_ints = st.integers(-9, 9)


def int_poly(min_deg=1, max_deg=5):
    return st.lists(small_ints, min_size=min_deg, max_size=max_deg).map(lambda cs: Polynomial(cs + [1]))


def test_resultant_examples():
    assert resultant(x**2 + 1, x**2 - 1) == 4
    assert resultant(x - 3, x - 5) == -2
    assert resultant(x**2 - 1, x - 1) == 0


def test_discriminant_examples():
    assert discriminant(x**2 - 1) == 4
    assert discriminant(x**3 - 1) == -27
    assert discriminant((x - 1) ** 2 * (x + 2)) == 0


@given(small_ints, small_ints)
def test_quadratic_discriminant(b, c):
    assert discriminant(x**2 + b * x + c) == b * b - 4 * c


@given(small_ints, small_ints)
def test_depressed_cubic_discriminant(p, q):
    assert discriminant(x**3 + p * x + q) == -4 * p**3 - 27 * q**2


@given(st.lists(small_ints, min_size=1, max_size=4), st.lists(small_ints, min_size=1, max_size=4))
def test_resultant_product_of_root_differences(ra, rb):
    # both polynomials given by their roots, so Res = prod (a_i - b_j)
    f = Polynomial.from_roots([Fraction(r) for r in ra])
    g = Polynomial.from_roots([Fraction(r) for r in rb])
    expected = 1
    for a in ra:
        for b in rb:
            expected *= a - b
    assert resultant(f, g) == expected


@given(int_poly(), int_poly())
def test_resultant_antisymmetry(f, g):
    sign = -1 if (f.degree * g.degree) % 2 else 1
    assert resultant(f, g) == sign * resultant(g, f)


def test_complex_resultant_matches_roots(rng):
    for _ in range(20):
        ra = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        rb = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        f = Polynomial.from_roots(list(ra))
        g = Polynomial.from_roots(list(rb))
        expected = np.prod(ra[:, None] - rb[None, :])
        assert abs(resultant(f, g) - expected) <= 1e-9 * max(1, abs(expected))


def test_sylvester_layout():
    rows = sylvester_matrix(x**2 + 2 * x + 3, x + 5)
    assert rows == [[1, 2, 3], [1, 5, 0], [0, 1, 5]]


def test_discriminant_low_degree_error():
    with pytest.raises(DomainError):
        discriminant(x + 1)


@given(int_poly(1, 5), st.lists(small_ints, min_size=1, max_size=3).map(lambda cs: Polynomial(cs + [1])))
def test_divmod_identity(f, g):
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.is_zero or r.degree < g.degree


@given(int_poly(), int_poly())
def test_product_rule(f, g):
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


@given(int_poly(1, 3), int_poly(1, 3), small_ints)
def test_compose_evaluates(f, g, v):
    assert poly_eval(f.compose(g), Fraction(v)) == poly_eval(f, poly_eval(g, Fraction(v)))


@given(int_poly())
def test_json_round_trip(f):
    assert Polynomial.from_json(f.to_json()) == f
    fc = f.to_complex()
    assert Polynomial.from_json(fc.to_json()) == fc


def test_rational_strings():
    assert format_rational(Fraction(4)) == "4/1"
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex([0.5, -1]) == 0.5 - 1j


@pytest.mark.parametrize(
    "roots",
    [[1, 1, 1], [1, 1, 1, 1, 2], [0, 0, 0, 1, 1], [2] * 6, [1, 1, 1, 2, 2, 3, 3, 3, 3], [1j, 1j, -1j, 3]],
)
def test_multiplicities(roots):
    rs = find_roots(Polynomial.from_roots(roots).to_complex())
    assert rs.degree == len(roots)
    expected = {}
    for r in roots:
        expected[complex(r)] = expected.get(complex(r), 0) + 1
    assert len(rs.roots) == len(expected)
    for z, k in zip(rs.roots, rs.multiplicities):
        key = min(expected, key=lambda r: abs(r - z))
        assert abs(key - z) < 1e-6
        assert expected[key] == k


def test_close_roots_stay_separate():
    rs = find_roots(Polynomial.from_roots([1, 1.001, 3]).to_complex())
    assert rs.multiplicities == (1, 1, 1)


def test_roots_of_unity():
    rs = find_roots(x**7 - 1)
    expected = [cmath.exp(2j * cmath.pi * k / 7) for k in range(7)]
    assert match_multisets(rs.roots, expected) < 1e-12


def test_canonical_order():
    rs = find_roots(Polynomial.from_roots([3, -1, 2j, -2j]).to_complex())
    assert [round(z.real, 6) for z in rs.roots] == [-1, 0, 0, 3]
    assert rs.roots[1].imag < rs.roots[2].imag


def test_random_roots_recovered(rng):
    for d in range(2, 12):
        r = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        rs = find_roots(Polynomial.from_roots(list(r), COMPLEX))
        assert match_multisets(rs.expanded(), r) < 1e-8


def test_is_degenerate():
    assert is_degenerate((x - 1) ** 2)
    assert not is_degenerate(x**2 - 2)
    assert is_degenerate(Polynomial([1, 2 + 1e-15, 1], COMPLEX))
