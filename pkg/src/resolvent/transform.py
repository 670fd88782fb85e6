"""Tschirnhaus transformations and reductions of the quintic.

The transformed polynomial of ``f`` under ``y = phi(x)`` is
``Res_x(f(x), y - phi(x))``, which for monic ``f`` equals the characteristic
polynomial of multiplication by ``phi`` in ``K[x]/(f)``; it is computed that
way (Berkowitz, division free, so exact over Q).
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .poly import COMPLEX, RATIONAL, Polynomial, find_roots, is_degenerate, poly_eval


@dataclass(frozen=True)
class TschirnhausMap:
    """Polynomial substitution ``y = phi(x)`` acting on the roots of a polynomial."""

    phi: Polynomial

    def __post_init__(self):
        if self.phi.degree < 1:
            raise DomainError("Tschirnhaus map must have degree >= 1")

    def __call__(self, x):
        return poly_eval(self.phi, x)

    def to_json(self):
        return self.phi.to_json()


def _as_map(m):
    return m if isinstance(m, TschirnhausMap) else TschirnhausMap(m)


def _check_monic(f, what="polynomial"):
    if f.is_zero or f.lc != 1:
        raise DomainError(f"{what} must be monic")


def berkowitz(a):
    """Characteristic polynomial ``det(xI - A)``, highest coefficient first.

    Division free, hence exact for Fraction entries.
    """
    n = len(a)
    if n == 0:
        return [1]
    vect = [1, -a[0][0]]
    for r in range(1, n):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        q = [1, -a[r][r]]
        # -R A^k C for k = 0..r-1
        cur = col
        for _ in range(r):
            q.append(-sum(x * y for x, y in zip(row, cur)))
            cur = [sum(a[i][j] * cur[j] for j in range(r)) for i in range(r)]
        new = []
        for i in range(r + 2):
            s = 0
            for j in range(min(i, r) + 1):
                if i - j < len(q):
                    s += q[i - j] * vect[j]
            new.append(s)
        vect = new
    return vect


def multiplication_matrix(f, phi):
    """Matrix of ``g -> phi * g mod f`` on the basis ``1, x, ..., x^(n-1)``."""
    n = f.degree
    cols = []
    xk = Polynomial([1], phi.kind)
    for _ in range(n):
        r = (phi * xk) % f
        cols.append([r[i] for i in range(n)])
        xk = (xk * Polynomial([0, 1], phi.kind)) % f
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def tschirnhaus(f, map_, reduce=False):
    """Monic polynomial whose roots are ``phi(x_i)`` over the roots of ``f``.

    With ``reduce=True`` the map is first reduced modulo ``f`` (it may then
    become constant, e.g. ``x^2 mod x^2 - 2``).

    Raises
    ------
    DomainError
        If ``f`` is not monic of degree >= 2, or ``deg phi >= deg f`` and
        ``reduce`` is false.
    """
    phi = map_.phi if isinstance(map_, TschirnhausMap) else map_
    _check_monic(f)
    n = f.degree
    if n < 2:
        raise DomainError("tschirnhaus needs deg f >= 2")
    if reduce:
        phi = phi % f
    if phi.degree >= n:
        raise DomainError("reduce modulo f: deg phi must be < deg f")
    kind = RATIONAL if f.kind == RATIONAL and phi.kind == RATIONAL else COMPLEX
    if kind == COMPLEX:
        f, phi = f.to_complex(), phi.to_complex()
    cp = berkowitz(multiplication_matrix(f, phi))
    return Polynomial(list(reversed(cp)), kind)


def reduce_map(f, phi):
    """``phi mod f`` as a TschirnhausMap."""
    return TschirnhausMap(_as_map(phi).phi % f)


def recover_root(f, map_, y, tol=1e-8):
    """Root ``x`` of ``f`` whose image ``phi(x)`` is closest to ``y``.

    Raises
    ------
    DomainError
        ``"no preimage within tolerance"`` or ``"ambiguous preimage"`` when
        two distinct roots of ``f`` map within ``tol`` of ``y``.
    """
    m = _as_map(map_)
    rs = find_roots(f)
    scale = max(1.0, abs(y))
    dists = [(abs(complex(m(x)) - y), x) for x in rs.roots]
    dists.sort(key=lambda d: d[0])
    best, x = dists[0]
    if best > tol * scale:
        raise DomainError(f"no preimage within tolerance (closest image at distance {best:.3g})")
    if len(dists) > 1 and dists[1][0] <= tol * scale:
        raise DomainError("ambiguous preimage: several roots map to the same image")
    return x


def depress(f):
    """Shift ``x -> x - a_{n-1}/n`` so the ``x^(n-1)`` coefficient vanishes.

    Returns ``(g, shift)`` with ``g(x) = f(x - shift)``.
    """
    _check_monic(f)
    n = f.degree
    shift = f[n - 1] / n
    if shift == 0:
        return f, shift
    return f.compose(Polynomial([-shift, 1], f.kind)), shift


# closed-form auxiliary equations --------------------------------------------

def solve_quadratic(a, b, c):
    """Both roots of ``a z^2 + b z + c`` (cancellation-free form)."""
    a, b, c = complex(a), complex(b), complex(c)
    if a == 0:
        if b == 0:
            raise DomainError("degenerate quadratic")
        return [-c / b]
    disc = cmath.sqrt(b * b - 4 * a * c)
    # pick the sign that avoids cancellation
    if (b.conjugate() * disc).real < 0:
        disc = -disc
    qq = -(b + disc) / 2
    if qq == 0:
        return [0j, 0j]
    return [qq / a, c / qq]


def solve_cubic(a, b, c, d):
    """All roots of ``a z^3 + b z^2 + c z + d`` by Cardano's formula.

    Each root gets two Newton polishing steps on the cubic itself.
    """
    a, b, c, d = complex(a), complex(b), complex(c), complex(d)
    if a == 0:
        return solve_quadratic(b, c, d)
    b, c, d = b / a, c / a, d / a
    # depressed t^3 + p t + q with z = t - b/3
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    disc = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    u3 = -q / 2 + disc
    if abs(-q / 2 - disc) > abs(u3):
        u3 = -q / 2 - disc
    omega = complex(-0.5, math.sqrt(3) / 2)
    if u3 == 0:
        ts = [0j, 0j, 0j]
    else:
        u = u3 ** (1 / 3)
        ts = []
        for k in range(3):
            uk = u * omega ** k
            ts.append(uk - p / (3 * uk))
    roots = []
    for t in ts:
        z = t - b / 3
        for _ in range(2):
            val = ((z + b) * z + c) * z + d
            der = (3 * z + 2 * b) * z + c
            if der == 0:
                break
            z -= val / der
        roots.append(z)
    return roots


def _binary_quadratic(a, b, c):
    """Projective roots ``(s, t)`` of ``a s^2 + b s t + c t^2``."""
    if abs(a) >= abs(c):
        if a == 0:
            raise DomainError("degenerate binary quadratic")
        return [(r, 1.0 + 0j) for r in solve_quadratic(a, b, c)]
    return [(1.0 + 0j, r) for r in solve_quadratic(c, b, a)]


def _binary_cubic(a, b, c, d):
    """Projective roots ``(s, t)`` of ``a s^3 + b s^2 t + c s t^2 + d t^3``."""
    if abs(a) >= abs(d):
        if a == 0:
            raise DomainError("degenerate binary cubic")
        return [(r, 1.0 + 0j) for r in solve_cubic(a, b, c, d)]
    return [(1.0 + 0j, r) for r in solve_cubic(d, c, b, a)]


def _lex(z):
    return (round(z.real, 12), round(z.imag, 12))


def _sorted_proj(points):
    # deterministic order: by the affine ratio, lexicographically on (re, im)
    def key(p):
        s, t = p
        r = s / t if abs(t) >= abs(s) else t / s
        return (abs(t) < abs(s),) + _lex(r)

    return sorted(points, key=key)


def power_sums(f, kmax):
    """Power sums ``P_0..P_kmax`` of the roots of monic ``f`` (Newton identities)."""
    n = f.degree
    # e_k from coefficients: f = x^n - e1 x^(n-1) + e2 x^(n-2) ...
    e = [1] + [(-1) ** k * f[n - k] for k in range(1, n + 1)]
    p = [n]
    for k in range(1, kmax + 1):
        s = 0
        for i in range(1, min(k, n + 1)):
            s += (-1) ** (i - 1) * e[i] * p[k - i]
        if k <= n:
            s += (-1) ** (k - 1) * k * e[k]
        p.append(s)
    return p


@dataclass(frozen=True)
class BringJerrardResult:
    p: complex
    q: complex
    map: TschirnhausMap
    residuals: float
    polynomial: Polynomial

    def to_json(self):
        return {
            "p": [self.p.real, self.p.imag],
            "q": [self.q.real, self.q.imag],
            "phi": self.map.to_json(),
            "residuals": self.residuals,
        }


def _bj_residual(F):
    return max(abs(F[4]), abs(F[3]), abs(F[2]))


def _principal_candidates(g):
    """Quadratic maps ``tau x^2 + u x + v`` killing the x^4, x^3 terms of depressed g."""
    P = power_sums(g, 4)
    m = [P[k] / 5 for k in range(5)]

    def gram(k, l):
        return P[k + l] - P[k] * P[l] / 5

    A, B, C = gram(2, 2), gram(2, 1), gram(1, 1)
    out = []
    for tau, u in _sorted_proj(_binary_quadratic(A, 2 * B, C)):
        nrm = math.sqrt(abs(tau) ** 2 + abs(u) ** 2)
        tau, u = tau / nrm, u / nrm
        v = -(tau * m[2] + u * m[1])
        out.append(Polynomial([v, u, tau], COMPLEX))
    return out


def _bring_candidates(h):
    """Quartic maps taking principal quintic ``h`` to Bring-Jerrard form."""
    P = power_sums(h, 12)
    powers = [4, 3, 2, 1]
    mean = [P[k] / 5 for k in range(13)]
    G = np.array([[P[i + j] - P[i] * P[j] / 5 for j in powers] for i in powers], dtype=complex)
    T = np.empty((4, 4, 4), dtype=complex)
    for a, i in enumerate(powers):
        for b, j in enumerate(powers):
            for c, k in enumerate(powers):
                T[a, b, c] = (P[i + j + k] - mean[k] * P[i + j] - mean[j] * P[i + k]
                              - mean[i] * P[j + k] + 10 * mean[i] * mean[j] * mean[k])

    def Q(x, y):
        return x @ G @ y

    def C3(x, y, z):
        return np.einsum("abc,a,b,c->", T, x, y, z)

    e = np.eye(4, dtype=complex)
    A0, B0 = e[0], e[1] + 0.5 * e[2] + 0.25 * e[3]
    out = []
    for s, t in _sorted_proj(_binary_quadratic(Q(A0, A0), 2 * Q(A0, B0), Q(B0, B0))):
        P0 = s * A0 + t * B0
        P0 = P0 / np.linalg.norm(P0)
        w = G @ P0
        # null space of v -> w . v (bilinear, no conjugation)
        _, _, vh = np.linalg.svd(w.reshape(1, 4))
        N = vh[1:].conj().T
        N = N - np.outer(P0, P0.conj() @ N)
        U, _, _ = np.linalg.svd(N)
        E1, E2 = U[:, 0], U[:, 1]
        for b, c in _sorted_proj(_binary_quadratic(Q(E1, E1), 2 * Q(E1, E2), Q(E2, E2))):
            D = b * E1 + c * E2
            D = D / np.linalg.norm(D)
            cub = (C3(P0, P0, P0), 3 * C3(P0, P0, D), 3 * C3(P0, D, D), C3(D, D, D))
            for lam, mu in _sorted_proj(_binary_cubic(*cub)):
                v = lam * P0 + mu * D
                v = v / np.linalg.norm(v)
                delta = -sum(v[i] * mean[k] for i, k in enumerate(powers))
                out.append(Polynomial([delta, v[3], v[2], v[1], v[0]], COMPLEX))
    return out


def _separation(images):
    scale = max(abs(z) for z in images) or 1.0
    dmin = min(abs(a - b) for a, b in itertools.combinations(images, 2))
    return dmin / scale


def bring_jerrard(f, tol=1e-9):
    """Reduce a monic quintic to ``y^5 + p y + q``.

    Staged construction: depress, a quadratic substitution to the principal
    form (one quadratic equation), then a quartic substitution obtained from
    a line on the quadric ``sum w^2 = 0`` (two quadratics) intersected with
    the cubic ``sum w^3 = 0`` (one cubic). Among the finitely many auxiliary
    root choices the one that keeps the transformed roots best separated is
    used. The final map is rescaled so the new roots have unit size.

    Raises
    ------
    DomainError
        ``"degenerate quintic"`` for a vanishing discriminant, or when the
        residual coefficients exceed ``tol``.
    """
    _check_monic(f, "quintic")
    if f.degree != 5:
        raise DomainError("bring_jerrard needs a quintic")
    if is_degenerate(f):
        raise DomainError("degenerate quintic: discriminant vanishes")
    if all(abs(complex(f[k])) <= (0 if f.kind == RATIONAL else tol) for k in (4, 3, 2)):
        ident = TschirnhausMap(Polynomial([0, 1], f.kind))
        return BringJerrardResult(complex(f[1]), complex(f[0]), ident, 0.0, f)

    fc = f.to_complex()
    roots = find_roots(fc).expanded()
    g, shift = depress(fc)
    shift_map = Polynomial([shift, 1], COMPLEX)

    best = None
    for quad in _principal_candidates(g):
        h = tschirnhaus(g, quad % g)
        if is_degenerate(h):
            continue
        for quart in _bring_candidates(h):
            total = (quart.compose(quad.compose(shift_map))) % fc
            if total.degree < 1:
                continue
            score = _separation([poly_eval(total, x) for x in roots])
            if best is None or score > best[0] * (1 + 1e-9):
                best = (score, total)
    if best is None:
        raise DomainError("no admissible Bring-Jerrard substitution found")
    total = best[1]
    F = tschirnhaus(fc, total)
    size = max(abs(F[1]) ** 0.25, abs(F[0]) ** 0.2)
    if size > 0:
        total = total.scale(1 / size)
        F = tschirnhaus(fc, total)
    res = _bj_residual(F)
    if not res <= tol:
        raise DomainError(f"Bring-Jerrard residual {res:.3g} above tolerance {tol:.3g}")
    return BringJerrardResult(F[1], F[0], TschirnhausMap(total), res, F)


@dataclass(frozen=True)
class OneParamForm:
    """``z^5 + c z + 1`` together with the fifth root used to reach it."""

    c: complex
    scale: complex

    def polynomial(self):
        return Polynomial([1, self.c, 0, 0, 0, 1], COMPLEX)

    def to_json(self):
        return {"c": [self.c.real, self.c.imag], "scale": [self.scale.real, self.scale.imag]}


def one_param_normalize(p, q):
    """Substitute ``y = q^(1/5) z`` in ``y^5 + p y + q`` (principal branch).

    Raises
    ------
    DomainError
        If ``q == 0``; the quintic then splits as ``y (y^4 + p)``.
    """
    p, q = complex(p), complex(q)
    if q == 0:
        raise DomainError("already one-parameter: y^5 + p y = y (y^4 + p)")
    scale = cmath.exp(cmath.log(q) / 5)
    return OneParamForm(p / scale ** 4, scale)


def klein_family(gamma):
    """Klein's one-parameter quintic ``y^5 + 15 y^4 - 10 gamma y^2 + 3 gamma^2``."""
    g = complex(gamma)
    return Polynomial([3 * g * g, 0, -10 * g, 0, 15, 1], COMPLEX)
