"""Root continuation along loops in parameter space.

A :class:`ParamFamily` is a monic polynomial whose lower coefficients are
affine-linear in ``m`` complex parameters. Loops are polygonal; each segment
is tracked by the predictor-corrector kernel in ``_kernels``. Monodromy and
inertia groups are generated by "petal" loops: on a random complex line
through a base point, go straight towards a critical value, circle it once
counterclockwise on a small polygon, and come back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, NearCriticalPath
from .perm import DEFAULT_MAX_ORDER, Permutation, closure
from .poly import COMPLEX, Polynomial, discriminant, find_roots, parse_complex

PETAL_SIDES = 16


def _cjson(z):
    z = complex(z)
    return [z.real, z.imag]


@dataclass(frozen=True)
class ParamFamily:
    """Monic degree-``n`` family with coefficients affine in ``m`` parameters.

    Parameters
    ----------
    n, m : int
        Degree and parameter count.
    coeffs : array_like, shape (n, m + 1)
        Row ``j`` gives the coefficient of ``x**j`` as
        ``coeffs[j, 0] + sum_k coeffs[j, k] * alpha[k - 1]``. A further row
        for ``x**n`` is accepted if it is ``(1, 0, ..., 0)``.
    """

    n: int
    m: int
    coeffs: np.ndarray = field(compare=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if self.m < 1:
            raise DomainError("a family needs at least one parameter")
        if self.n < 1:
            raise DomainError("a family needs degree >= 1")
        if c.ndim != 2 or c.shape[1] != self.m + 1:
            raise DomainError(f"coefficient matrix must have {self.m + 1} columns")
        if c.shape[0] == self.n + 1:
            lead = c[-1]
            if lead[0] != 1 or np.any(lead[1:] != 0):
                raise DomainError("family must be monic with constant leading coefficient 1")
            c = c[:-1]
        if c.shape[0] != self.n:
            raise DomainError(f"coefficient matrix must have {self.n} rows")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def coefficients(self, alpha):
        """Full coefficient vector (lowest first, leading 1) at ``alpha``."""
        a = np.asarray(alpha, dtype=complex).reshape(-1)
        if a.shape[0] != self.m:
            raise DomainError(f"parameter point must have length {self.m}")
        low = self.coeffs[:, 0] + self.coeffs[:, 1:] @ a
        return np.concatenate([low, [1.0 + 0j]])

    def to_json(self):
        return {"n": self.n, "m": self.m, "coeffs": [[_cjson(v) for v in row] for row in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        try:
            n, m = int(obj["n"]), int(obj["m"])
            rows = [[parse_complex(v) for v in row] for row in obj["coeffs"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed family JSON: {exc}") from exc
        return cls(n, m, np.array(rows, dtype=complex))


def general_family(n):
    """``x^n + a1 x^(n-1) + ... + an`` with the coefficients as parameters."""
    c = np.zeros((n, n + 1), dtype=complex)
    for j in range(n):
        c[j, n - j] = 1
    return ParamFamily(n, n, c)


def power_family(n):
    """``x^n - alpha``."""
    c = np.zeros((n, 2), dtype=complex)
    c[0, 1] = -1
    return ParamFamily(n, 1, c)


def klein_param_family():
    """Klein's quintic lifted to two parameters ``(gamma, delta)``.

    ``y^5 + 15 y^4 - 10 gamma y^2 + 3 delta``; the one-parameter family is
    the curve ``delta = gamma^2`` (see :func:`klein_point`), which is not
    affine in ``gamma`` itself.
    """
    c = np.zeros((5, 3), dtype=complex)
    c[4, 0] = 15
    c[2, 1] = -10
    c[0, 2] = 3
    return ParamFamily(5, 2, c)


def klein_point(gamma):
    g = complex(gamma)
    return np.array([g, g * g])


def instantiate(fam, alpha):
    """The polynomial of ``fam`` at parameter point ``alpha``."""
    return Polynomial(fam.coefficients(alpha).tolist(), COMPLEX)


@dataclass(frozen=True)
class Loop:
    """Closed polygon in parameter space; ``waypoints[0] == waypoints[-1] == basepoint``."""

    basepoint: tuple
    waypoints: tuple

    def __post_init__(self):
        b = tuple(complex(v) for v in self.basepoint)
        w = tuple(tuple(complex(v) for v in p) for p in self.waypoints)
        if len(w) < 2 or w[0] != b or w[-1] != b:
            raise DomainError("loop must start and end exactly at its basepoint")
        if any(len(p) != len(b) for p in w):
            raise DomainError("waypoints have inconsistent dimension")
        if any(w[i] == w[i + 1] for i in range(len(w) - 1)):
            raise DomainError("consecutive waypoints must differ")
        object.__setattr__(self, "basepoint", b)
        object.__setattr__(self, "waypoints", w)

    def reversed(self):
        return Loop(self.basepoint, self.waypoints[::-1])

    def __add__(self, other):
        if other.basepoint != self.basepoint:
            raise DomainError("loops have different basepoints")
        return Loop(self.basepoint, self.waypoints + other.waypoints[1:])

    def to_json(self):
        return {
            "basepoint": [_cjson(v) for v in self.basepoint],
            "waypoints": [[_cjson(v) for v in p] for p in self.waypoints],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            [parse_complex(v) for v in obj["basepoint"]],
            [[parse_complex(v) for v in p] for p in obj["waypoints"]],
        )


@dataclass(frozen=True)
class TrackOptions:
    initial_step: float = 1e-2
    min_step: float = 1e-8
    newton_tol: float = 1e-12
    collision_factor: float = 4.0
    max_newton: int = 8

    def __post_init__(self):
        if not 0 < self.min_step <= self.initial_step:
            raise DomainError("need 0 < min_step <= initial_step")
        if not self.newton_tol > 0:
            raise DomainError("newton_tol must be positive")
        if not self.collision_factor >= 2:
            raise DomainError("collision_factor must be >= 2")


DEFAULT_OPTIONS = TrackOptions()


def start_roots(fam, alpha):
    """Simple roots at ``alpha`` in canonical order; errors on the discriminant locus."""
    rs = find_roots(instantiate(fam, alpha))
    if any(k > 1 for k in rs.multiplicities):
        raise DomainError("basepoint lies on the discriminant locus")
    return list(rs.roots)


def track_path(fam, points, roots, opts=DEFAULT_OPTIONS, trace=None):
    """Continue ``roots`` along the polygon ``points``; returns the end roots.

    ``trace``, when a list, receives ``(parameter point, roots)`` pairs for
    every accepted step.

    Raises
    ------
    NearCriticalPath
        If the step size underflows ``opts.min_step``.
    """
    x = [complex(r) for r in roots]
    pts = [np.asarray(p, dtype=complex) for p in points]
    for a, b in zip(pts[:-1], pts[1:]):
        ca = fam.coefficients(a)
        dc = fam.coefficients(b) - ca
        seg = [] if trace is not None else None
        x, ok, t, _ = _kernels.track_segment(
            ca.tolist(), dc.tolist(), x,
            opts.initial_step, opts.min_step, opts.newton_tol,
            opts.collision_factor, opts.max_newton, seg,
        )
        x = list(x)
        if trace is not None:
            start = 1 if trace else 0
            for tt, xs in seg[start:]:
                trace.append((tuple(a + tt * (b - a)), tuple(xs)))
        if not ok:
            point = a + t * (b - a)
            raise NearCriticalPath(
                f"near-critical path at parameter point {[_cjson(v) for v in point]}",
                point=tuple(point), t=t,
            )
    return x


def _match(end, start):
    """Permutation sending each tracked root to the start root it landed on."""
    n = len(start)
    sigma = []
    for z in end:
        d = [abs(z - s) for s in start]
        sigma.append(int(np.argmin(d)))
    if len(set(sigma)) != n:
        raise DomainError("tracked roots do not return to distinct start roots")
    sep = min((abs(start[i] - start[j]) for i in range(n) for j in range(i + 1, n)), default=math.inf)
    if max(abs(end[i] - start[sigma[i]]) for i in range(n)) > sep / 4:
        raise DomainError("tracked roots returned ambiguously")
    return Permutation(sigma)


def track_loop(fam, loop, opts=DEFAULT_OPTIONS, trace=None):
    """Permutation ``sigma`` with ``root_i(end) = root_sigma(i)(start)``.

    Roots are labelled in the canonical order of :func:`find_roots` at the
    basepoint. Going around loop ``A`` and then loop ``B`` gives
    ``track_loop(A) * track_loop(B)``.
    """
    x0 = start_roots(fam, loop.basepoint)
    if trace is not None:
        trace.append((tuple(loop.basepoint), tuple(x0)))
    end = track_path(fam, loop.waypoints, x0, opts, trace)
    return _match(end, x0)


# critical values on a line --------------------------------------------------

def _line_discriminant(fam, base, direction, scale=1.0):
    """Coefficients in ``s`` of the discriminant along ``base + s*scale*direction``.

    The discriminant has degree at most ``2n - 2`` in ``s``; it is
    interpolated from values on the unit circle.
    """
    n = fam.n
    if n < 2:
        return np.zeros(1, dtype=complex), 0.0
    N = max(4, 2 * n)
    w = np.exp(2j * np.pi * np.arange(N) / N)
    base = np.asarray(base, dtype=complex)
    direction = np.asarray(direction, dtype=complex) * scale
    vals = []
    mags = []
    for s in w:
        c = fam.coefficients(base + s * direction)
        vals.append(complex(discriminant(Polynomial(c.tolist(), COMPLEX))))
        mags.append(max(1.0, float(np.sum(np.abs(c)))) ** (2 * n - 2))
    coeffs = np.fft.fft(np.array(vals)) / N
    return coeffs[: 2 * n - 1], max(mags)


def critical_values(fam, base, direction, scale=1.0):
    """Critical values ``s`` on the line ``base + s*scale*direction``.

    Raises
    ------
    DomainError
        If the restricted discriminant vanishes identically.
    """
    c, mag = _line_discriminant(fam, base, direction, scale)
    top = float(np.max(np.abs(c)))
    if top <= 1e-12 * mag:
        raise DomainError("line lies in discriminant locus; choose another seed")
    c = list(c)
    while len(c) > 1 and abs(c[-1]) <= 1e-10 * top:
        c.pop()
    if len(c) <= 1:
        return []
    rs = find_roots(Polynomial(c, COMPLEX))
    return sorted(rs.roots, key=lambda z: (math.atan2(z.imag, z.real), abs(z)))


def _petal_s(c, others, sides=PETAL_SIDES):
    """Waypoints in the line coordinate for a petal around ``c`` based at 0."""
    sep = min([abs(c - o) for o in others if o != c] + [abs(c)])
    rho = 0.3 * sep
    u = c / abs(c)
    ring = [c - rho * u * np.exp(2j * np.pi * k / sides) for k in range(sides)]
    return [0j] + ring + [ring[0], 0j]


def _petals(base, direction, scale, values, keep):
    base = np.asarray(base, dtype=complex)
    direction = np.asarray(direction, dtype=complex) * scale
    loops = []
    for c in values:
        if not keep(c):
            continue
        pts = [tuple(base + s * direction) for s in _petal_s(c, values)]
        pts[0] = pts[-1] = tuple(base)
        loops.append(Loop(tuple(base), pts))
    return loops


def _random_unit(rng, m):
    v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return v / np.linalg.norm(v)


def _random_point(rng, m):
    return (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / math.sqrt(2)


def petal_loops(fam, basepoint, seed=0):
    """One petal loop per critical value on a seeded random line through ``basepoint``."""
    rng = np.random.default_rng(seed)
    d = _random_unit(rng, fam.m)
    start_roots(fam, basepoint)
    values = critical_values(fam, basepoint, d)
    return _petals(basepoint, d, 1.0, values, lambda c: True)


def monodromy_group(fam, opts=DEFAULT_OPTIONS, seed=0, max_order=DEFAULT_MAX_ORDER, lines=1, basepoint=None):
    """Group generated by petal loops on ``lines`` random lines.

    The seed, basepoint and petal count are recorded in ``meta``; roots are
    labelled in canonical order at the basepoint.
    """
    rng = np.random.default_rng(seed)
    if basepoint is None:
        basepoint = _random_point(rng, fam.m)
    basepoint = np.asarray(basepoint, dtype=complex)
    roots = start_roots(fam, basepoint)
    gens = []
    npetals = 0
    dirs = []
    for _ in range(lines):
        d = _random_unit(rng, fam.m)
        dirs.append(d)
        values = critical_values(fam, basepoint, d)
        for lp in _petals(basepoint, d, 1.0, values, lambda c: True):
            npetals += 1
            g = track_loop(fam, lp, opts)
            if not g.is_identity() and g not in gens:
                gens.append(g)
    grp = closure(gens, max_order=max_order, n=fam.n)
    grp.meta.update({
        "seed": seed,
        "basepoint": [_cjson(v) for v in basepoint],
        "basepoint_roots": [_cjson(v) for v in roots],
        "petals": npetals,
        "lines": [[_cjson(v) for v in d] for d in dirs],
    })
    return grp


def _orthogonal_unit(rng, v):
    w = _random_unit(rng, len(v))
    w = w - np.vdot(v, w) * v
    nw = np.linalg.norm(w)
    return w / nw if nw > 1e-12 else w


def inertia_group(fam, critical, radius, opts=DEFAULT_OPTIONS, seed=0, basepoint=None, max_order=DEFAULT_MAX_ORDER):
    """Group of small loops around ``critical`` inside the ball of ``radius``.

    A regular point ``e`` at distance ``radius/4`` from ``critical`` serves as
    local basepoint; the loops are petals on a random line through ``e``
    around the critical values of that line lying in the ball. With
    ``basepoint`` given, the permutations are transported along the segment
    from it to ``e`` and labelled by the roots at ``basepoint``.

    Raises
    ------
    DomainError
        If ``e`` is itself on the discriminant locus.
    """
    if not radius > 0:
        raise DomainError("radius must be positive")
    rng = np.random.default_rng(seed)
    c = np.asarray(critical, dtype=complex).reshape(-1)
    if c.shape[0] != fam.m:
        raise DomainError(f"critical point must have length {fam.m}")
    d2 = _random_unit(rng, fam.m)
    d = _orthogonal_unit(rng, d2) if fam.m > 1 else np.ones(1, dtype=complex)
    e = c + 0.25 * radius * d2
    try:
        local_roots = start_roots(fam, e)
    except DomainError:
        raise DomainError("radius too small/degenerate stratum: local basepoint is critical") from None
    values = critical_values(fam, e, d, radius)

    def inside(s):
        return np.linalg.norm(e + s * radius * d - c) < radius

    gens = []
    for lp in _petals(e, d, radius, values, inside):
        g = track_loop(fam, lp, opts)
        if not g.is_identity() and g not in gens:
            gens.append(g)
    meta = {
        "seed": seed,
        "radius": radius,
        "local_basepoint": [_cjson(v) for v in e],
        "local_roots": [_cjson(v) for v in local_roots],
        "local_generators": [str(g) for g in gens],
    }
    if basepoint is not None:
        b = np.asarray(basepoint, dtype=complex)
        x0 = start_roots(fam, b)
        end = track_path(fam, [b, e], x0, opts)
        tau = _transport(end, local_roots)
        gens = [tau * g * tau.inverse() for g in gens]
        meta["basepoint"] = [_cjson(v) for v in b]
    grp = closure(gens, max_order=max_order, n=fam.n)
    grp.meta.update(meta)
    return grp


def _transport(end, targets):
    sigma = [int(np.argmin([abs(z - t) for t in targets])) for z in end]
    if len(set(sigma)) != len(targets):
        raise DomainError("transport to local basepoint is ambiguous")
    return Permutation(sigma)


@dataclass(frozen=True)
class TheoremCheck:
    """Outcome of comparing generated inertia groups with the monodromy group."""

    holds: bool
    monodromy_order: int
    inertia_order: int
    strata: tuple = ()

    def __bool__(self):
        return self.holds

    @property
    def deficit(self):
        return self.monodromy_order // max(self.inertia_order, 1)

    def to_json(self):
        return {
            "holds": self.holds,
            "monodromy_order": self.monodromy_order,
            "inertia_order": self.inertia_order,
            "strata": list(self.strata),
        }


def verify_monodromy_theorem(fam, strata_points, opts=DEFAULT_OPTIONS, seed=0, radius=1e-3,
                             sweep=True, max_order=DEFAULT_MAX_ORDER):
    """Check that inertia groups of the sampled strata generate the monodromy group.

    Every inertia group is transported to the basepoint of the monodromy
    computation. With ``sweep``, a sampled point stands for its whole
    stratum: the petals of the monodromy line around critical values with
    the same coincidence type are added, since those are inertia loops at
    other points of the same stratum.
    """
    from .forms import stratify_point

    grp = monodromy_group(fam, opts, seed, max_order)
    base = np.array([complex(*v) for v in grp.meta["basepoint"]])
    gens = []
    types = set()
    for k, pt in enumerate(strata_points):
        ig = inertia_group(fam, pt, radius, opts, seed + 1 + k, basepoint=base, max_order=max_order)
        gens.extend(ig.generators)
        types.add(stratify_point(fam, pt).partition.sizes)
    if sweep and types:
        for dj in grp.meta["lines"]:
            d = np.array([complex(*v) for v in dj])
            values = critical_values(fam, base, d)
            for c in values:
                try:
                    t = stratify_point(fam, base + c * d, tol=1e-5).partition.sizes
                except DomainError:
                    continue
                if t in types:
                    lp = _petals(base, d, 1.0, values, lambda s, c=c: s == c)[0]
                    gens.append(track_loop(fam, lp, opts))
    sub = closure(gens, max_order=max_order, n=fam.n)
    return TheoremCheck(
        sub.order == grp.order and all(e in grp._element_set for e in sub.elements),
        grp.order, sub.order, tuple(sorted(types)),
    )
