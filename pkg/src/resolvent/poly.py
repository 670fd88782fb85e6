"""Univariate polynomials over Q or complex doubles.

Coefficients are stored lowest degree first. Rational polynomials use
:class:`fractions.Fraction` and every operation on them is exact; complex
polynomials use Python ``complex``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC

import numpy as np

from . import _kernels
from .errors import DomainError, RootFindingError

RATIONAL = "rational"
COMPLEX = "complex"

EPS = 2.220446049250313e-16


def _is_exact(c):
    return isinstance(c, _RationalABC) and not isinstance(c, bool)


def parse_rational(s):
    """Parse ``"p/q"`` (or an integer string) into a Fraction."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise TypeError(f"rational must be given as a 'p/q' string, got {s!r}")
    return Fraction(s.strip())


def format_rational(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(c):
    """JSON form of a scalar: ``"p/q"`` for exact values, ``[re, im]`` otherwise."""
    if _is_exact(c):
        return format_rational(c)
    c = complex(c)
    return [c.real, c.imag]


def parse_complex(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return complex(v.replace(" ", "").replace("i", "j"))
    return complex(v)


class Polynomial:
    """Immutable univariate polynomial.

    Parameters
    ----------
    coeffs : iterable
        Coefficients, lowest degree first. Trailing zeros are dropped.
    kind : {"rational", "complex"}, optional
        Scalar kind. Inferred when omitted: rational if every coefficient is
        an exact rational number, complex otherwise.
    """

    __slots__ = ("coeffs", "kind")

    def __init__(self, coeffs=(), kind=None):
        coeffs = list(coeffs)
        if kind is None:
            kind = RATIONAL if all(_is_exact(c) for c in coeffs) else COMPLEX
        if kind == RATIONAL:
            cs = [Fraction(c) for c in coeffs]
        elif kind == COMPLEX:
            cs = [complex(c) for c in coeffs]
        else:
            raise ValueError(f"unknown scalar kind {kind!r}")
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # construction helpers
    @classmethod
    def x(cls, kind=RATIONAL):
        return cls([0, 1], kind)

    @classmethod
    def constant(cls, c, kind=None):
        return cls([c], kind)

    @classmethod
    def from_roots(cls, roots, kind=None):
        p = cls([1], kind if kind is not None else (RATIONAL if all(_is_exact(r) for r in roots) else COMPLEX))
        for r in roots:
            p = p * cls([-r, 1], p.kind)
        return p

    # basic properties
    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def lc(self):
        if not self.coeffs:
            return self._zero()
        return self.coeffs[-1]

    def _zero(self):
        return Fraction(0) if self.kind == RATIONAL else 0j

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self._zero()

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if not self.coeffs:
            return other == 0
        return self.degree == 0 and self.coeffs[0] == other

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r}, kind={self.kind!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            cs = str(c) if self.kind == RATIONAL else f"({c.real:g}{c.imag:+g}j)"
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(terms)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    @staticmethod
    def _kind2(a, b):
        return RATIONAL if a.kind == RATIONAL and b.kind == RATIONAL else COMPLEX

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[k] + other[k] for k in range(n)], self._kind2(self, other))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs], self.kind)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        kind = self._kind2(self, other)
        if not self.coeffs or not other.coeffs:
            return Polynomial([], kind)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out, kind)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power")
        out = Polynomial([1], self.kind)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c):
        return self * Polynomial([c])

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        kind = self._kind2(self, other)
        rem = list(Polynomial(self.coeffs, kind).coeffs)
        d = other.degree
        lc = other.lc
        if len(rem) - 1 < d:
            return Polynomial([], kind), Polynomial(rem, kind)
        quo = [0] * (len(rem) - d)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k] / lc
            quo[k - d] = c
            if c != 0:
                for j in range(d + 1):
                    rem[k - d + j] -= c * other.coeffs[j]
            rem[k] = 0 * c
        return Polynomial(quo, kind), Polynomial(rem[:d], kind)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self):
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:], self.kind)

    def compose(self, inner):
        """Return ``self(inner(x))``."""
        inner = self._coerce(inner)
        out = Polynomial([], self._kind2(self, inner))
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def monic(self):
        if self.is_zero:
            raise DomainError("zero polynomial has no monic form")
        lc = self.lc
        return Polynomial([c / lc for c in self.coeffs], self.kind)

    def to_complex(self):
        return Polynomial([complex(c) for c in self.coeffs], COMPLEX)

    def __call__(self, x):
        return poly_eval(self, x)

    # JSON
    def to_json(self):
        if self.kind == RATIONAL:
            return {"kind": RATIONAL, "coeffs": [format_rational(c) for c in self.coeffs]}
        return {"kind": COMPLEX, "coeffs": [[c.real, c.imag] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict) or "coeffs" not in obj:
            raise ValueError("polynomial JSON must be an object with 'kind' and 'coeffs'")
        kind = obj.get("kind", RATIONAL)
        if kind == RATIONAL:
            return cls([parse_rational(c) for c in obj["coeffs"]], RATIONAL)
        if kind == COMPLEX:
            return cls([parse_complex(c) for c in obj["coeffs"]], COMPLEX)
        raise ValueError(f"unknown polynomial kind {kind!r}")


def poly_eval(p, x):
    """Horner evaluation of ``p`` at ``x``."""
    acc = p._zero() if _is_exact(x) else 0j
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def sylvester_matrix(f, g):
    """Sylvester matrix of ``f`` and ``g`` (highest coefficients first per row).

    Its determinant is ``lc(f)**deg(g) * prod g(a)`` over the roots ``a`` of f.
    """
    m, n = f.degree, g.degree
    size = m + n
    zero = f._zero() if f.kind == RATIONAL and g.kind == RATIONAL else 0j
    fa = list(reversed(f.coeffs))
    ga = list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([zero] * i + fa + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + ga + [zero] * (size - n - 1 - i))
    return rows


def bareiss_det(rows):
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def _det_rational(rows):
    # clear denominators row by row, then integer Bareiss
    scale = Fraction(1)
    int_rows = []
    for r in rows:
        den = 1
        for c in r:
            den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
        int_rows.append([int(Fraction(c) * den) for c in r])
        scale /= den
    return Fraction(bareiss_det(int_rows)) * scale


def resultant(f, g):
    """Resultant ``Res(f, g) = det Sylvester(f, g)``; exact for rational input."""
    if f.is_zero and g.is_zero:
        raise DomainError("undefined resultant")
    exact = f.kind == RATIONAL and g.kind == RATIONAL
    one = Fraction(1) if exact else 1 + 0j
    if f.is_zero or g.is_zero:
        other = g if f.is_zero else f
        return one if other.degree == 0 else one * 0
    m, n = f.degree, g.degree
    if m == 0:
        return one * f.lc ** n
    if n == 0:
        return one * g.lc ** m
    rows = sylvester_matrix(f, g)
    if exact:
        return _det_rational(rows)
    return complex(np.linalg.det(np.array(rows, dtype=np.complex128)))


def discriminant(f):
    """``(-1)**(n(n-1)/2) * Res(f, f') / lc(f)``; zero iff f has a repeated root."""
    n = f.degree
    if n < 2:
        raise DomainError(f"discriminant needs degree >= 2, got {n}")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


def _coeff_norm(p):
    return sum(abs(c) for c in p.coeffs)


def is_degenerate(f, rel=1e-12):
    """True when the discriminant vanishes (exactly, or relative to coefficient size)."""
    d = discriminant(f)
    if f.kind == RATIONAL:
        return d == 0
    scale = max(_coeff_norm(f), 1.0) ** (2 * f.degree - 2)
    return abs(d) <= rel * scale


@dataclass(frozen=True)
class RootSet:
    """Distinct complex roots with multiplicities and the worst residual."""

    roots: tuple
    multiplicities: tuple
    residual: float

    @property
    def degree(self):
        return sum(self.multiplicities)

    def expanded(self):
        """Roots repeated according to multiplicity, in stored order."""
        out = []
        for r, m in zip(self.roots, self.multiplicities):
            out.extend([r] * m)
        return out

    def to_json(self):
        return {
            "roots": [[r.real, r.imag] for r in self.roots],
            "multiplicities": list(self.multiplicities),
            "residual": self.residual,
        }


def root_sort_key(z):
    return (round(z.real, 8) + 0.0, round(z.imag, 8) + 0.0, z.real, z.imag)


def _taylor_at(coeffs, c, j):
    """j-th Taylor coefficient at c, with the matching rounding scale."""
    val = 0j
    bound = 0.0
    ac = abs(c)
    for i in range(j, len(coeffs)):
        binom = math.comb(i, j)
        val += binom * coeffs[i] * c ** (i - j)
        bound += binom * abs(coeffs[i]) * ac ** (i - j)
    return val, bound


def _multiple_root_center(coeffs, pts):
    """Refined center of a k-fold root approximated by ``pts``, or None.

    Newton on the (k-1)-th derivative, which has a simple zero at a k-fold
    root; then every Taylor coefficient below order k must vanish to
    rounding level.
    """
    k = len(pts)
    c = sum(pts) / k
    for _ in range(8):
        val, _b = _taylor_at(coeffs, c, k - 1)
        der, _b = _taylor_at(coeffs, c, k)
        if der == 0:
            break
        step = val / (k * der)
        c -= step
        if abs(step) <= EPS * (1.0 + abs(c)):
            break
    for j in range(k):
        val, bound = _taylor_at(coeffs, c, j)
        if abs(val) > 1e-11 * max(bound, EPS):
            return None
    return c


def _link_groups(pts, idx, radius_fn):
    # single-linkage components of idx under |zi - zj| < radius_fn(zi, zj)
    parent = {i: i for i in idx}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            i, j = idx[a], idx[b]
            if abs(pts[i] - pts[j]) < radius_fn(pts[i], pts[j]):
                parent[find(i)] = find(j)
    groups = {}
    for i in idx:
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _cluster(coeffs, pts, base):
    """Merge iterates that approximate one multiple root.

    Candidate groups are formed by single linkage at a coarse radius and
    accepted when a refined center passes a Taylor-coefficient test;
    rejected groups are split at a radius ten times smaller. Below ``base``
    every linked group merges unconditionally (center = centroid).
    """
    out = []
    centers = {}

    def visit(idx, r):
        if len(idx) == 1:
            out.append(idx)
            return
        if r <= base:
            out.extend(_link_groups(pts, idx, lambda a, b: base))
            return
        for grp in _link_groups(pts, idx, lambda a, b: r * (1.0 + max(abs(a), abs(b)))):
            if len(grp) == 1:
                out.append(grp)
            else:
                center = _multiple_root_center(coeffs, [pts[i] for i in grp])
                if center is None:
                    visit(grp, r / 10.0)
                else:
                    centers[tuple(grp)] = center
                    out.append(grp)

    visit(list(range(len(pts))), 1e-2)
    return [(grp, centers.get(tuple(grp))) for grp in out]


def find_roots(f, tol=1e-9, max_iter=200):
    """All complex roots of ``f`` with multiplicities.

    Aberth-Ehrlich iteration from perturbed points on a circle, followed by
    clustering of iterates that belong to one multiple root. Roots are
    returned in a canonical order (real part, then imaginary part).

    Raises
    ------
    RootFindingError
        If the iteration has not converged after ``max_iter`` sweeps.
    """
    if f.degree < 1:
        raise DomainError("find_roots needs degree >= 1")
    cs = [complex(c) for c in f.coeffs]
    zeros = 0
    while cs[zeros] == 0:
        zeros += 1
    g = cs[zeros:]
    d = len(g) - 1
    found = []
    if d == 1:
        found = [-g[0] / g[1]]
    elif d >= 2:
        rho = (abs(g[0]) / abs(g[-1])) ** (1.0 / d)
        if not math.isfinite(rho) or rho == 0:
            rho = 1.0
        z0 = [rho * cmath.exp(1j * (2 * math.pi * k / d + 0.4)) for k in range(d)]
        found, ok, _ = _kernels.aberth(g, z0, max_iter)
        if not ok:
            raise RootFindingError(f"Aberth iteration did not converge in {max_iter} sweeps", best=found)
    base = max(1e-7, 1e3 * tol)
    roots = []
    mults = []
    if found:
        for grp, center in _cluster(g, found, base):
            pts = [found[i] for i in grp]
            roots.append(center if center is not None else sum(pts) / len(pts))
            mults.append(len(pts))
    if zeros:
        roots.append(0j)
        mults.append(zeros)
    order = sorted(range(len(roots)), key=lambda i: root_sort_key(roots[i]))
    roots = tuple(roots[i] for i in order)
    mults = tuple(mults[i] for i in order)
    fc = f.to_complex()
    residual = max(abs(poly_eval(fc, r)) for r in roots)
    return RootSet(roots, mults, residual)
