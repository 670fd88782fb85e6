"""The invariant product form and the coincidence strata it detects.

For a permutation group ``G`` and roots ``x``, the form is

    Phi(t) = prod_{g in G} (t_1 x_{g(1)} + ... + t_n x_{g(n)}).

On the subspace where the ``t`` sum to zero over every block of a set
partition ``P``, a factor vanishes identically exactly when ``g`` maps each
block of ``P`` into one class of equal roots. The second half of the module
turns coincidence patterns into points of a parameter family and computes
the chain lower bound on the parameter count of a resolvent.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import least_squares

from .errors import DomainError
from .monodromy import instantiate
from .perm import SetPartition, _is_identity_type, _is_transposition_type, longest_chain
from .poly import Polynomial, RootSet, find_roots, root_sort_key

DEFAULT_EXPAND_LIMIT = 24


class DegenerateSubspaceWarning(UserWarning):
    """The all-singletons subspace is the origin; vanishing there is vacuous."""


def _mul_linear(poly, terms):
    """Multiply a sparse polynomial by a sum of monomials.

    ``poly`` maps exponent tuples to coefficients; ``terms`` is a list of
    ``(exponent tuple, coefficient)``.
    """
    out = {}
    for e, c in poly.items():
        for f, d in terms:
            k = tuple(a + b for a, b in zip(e, f))
            out[k] = out.get(k, 0) + c * d
    return {k: v for k, v in out.items() if v != 0}


def _unit(n, i):
    e = [0] * n
    e[i] = 1
    return tuple(e)


@dataclass(frozen=True)
class FormPhi:
    """Factored form, one linear factor per group element.

    ``roots`` is None for the symbolic form. ``expanded`` maps t-exponent
    tuples to complex coefficients (numeric form) or ``t-exponents +
    x-exponents`` tuples of length ``2n`` to integers (symbolic form).
    """

    n: int
    group: object
    roots: tuple | None
    expanded: dict | None = None

    @property
    def symbolic(self):
        return self.roots is None

    @property
    def factors(self):
        return [(g, self.roots) for g in self.group.elements]

    def to_json(self):
        out = {
            "n": self.n,
            "group_order": self.group.order,
            "symbolic": self.symbolic,
            "expanded_terms": None if self.expanded is None else len(self.expanded),
        }
        if self.roots is not None:
            out["roots"] = [[z.real, z.imag] for z in self.roots]
        return out


def _root_vector(roots, n):
    if isinstance(roots, RootSet):
        roots = roots.expanded()
    xs = tuple(complex(z) for z in roots)
    if len(xs) != n:
        raise DomainError(f"need {n} roots, got {len(xs)}")
    return xs


def build_phi(group, roots=None, expand_limit=DEFAULT_EXPAND_LIMIT, symbolic=False):
    """Form of ``group`` with numeric ``roots`` or, with ``symbolic``, indeterminate roots.

    The exact expansion is attached when ``|G| <= expand_limit``.

    Raises
    ------
    DomainError
        If a symbolic form is requested for a group above ``expand_limit``
        (such a form can only be evaluated, which needs numeric roots).
    """
    n = group.n
    big = group.order > expand_limit
    if symbolic or roots is None:
        if big:
            raise DomainError(f"evaluation-only: |G| = {group.order} exceeds expand limit {expand_limit}")
        poly = {(0,) * (2 * n): 1}
        for g in group.elements:
            poly = _mul_linear(poly, [(_unit(n, i) + _unit(n, g[i]), 1) for i in range(n)])
        return FormPhi(n, group, None, poly)
    xs = _root_vector(roots, n)
    expanded = None
    if not big:
        poly = {(0,) * n: 1 + 0j}
        for g in group.elements:
            poly = _mul_linear(poly, [(_unit(n, i), xs[g[i]]) for i in range(n)])
        expanded = poly
    return FormPhi(n, group, xs, expanded)


def _factor_matrix(phi, roots=None):
    xs = np.asarray(phi.roots if roots is None else roots, dtype=complex)
    idx = np.asarray(phi.group.elements, dtype=np.intp)
    return xs[idx]


def phi_eval(phi, t, roots=None):
    """Product of the linear factors at ``t``.

    The symbolic form needs ``roots`` to be supplied here.
    """
    t = np.asarray(t, dtype=complex)
    if t.shape != (phi.n,):
        raise DomainError(f"t must have length {phi.n}")
    if phi.symbolic and roots is None:
        raise DomainError("symbolic form: supply roots to evaluate")
    return complex(np.prod(_factor_matrix(phi, roots) @ t))


def _scale(phi, t, roots=None):
    """Magnitude against which ``|Phi(t)|`` counts as zero.

    The factor that is smallest relative to its own bound enters with that
    bound, the others with their actual size, so the test is relative to
    one factor rather than to the whole degree-``|G|`` product.
    """
    F = _factor_matrix(phi, roots)
    vals = np.abs(F @ t)
    bounds = np.abs(F) @ np.abs(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(bounds > 0, vals / bounds, 0.0)
    k = int(np.argmin(rel))
    return float(bounds[k] * np.prod(np.delete(vals, k)))


def eval_expanded(phi, t, roots=None):
    """Evaluate the stored expansion (for consistency checks)."""
    if phi.expanded is None:
        raise DomainError("form has no expansion")
    t = [complex(v) for v in t]
    total = 0j
    if phi.symbolic:
        xs = [complex(v) for v in roots]
        for e, c in phi.expanded.items():
            term = complex(c)
            for v, k in zip(t + xs, e):
                term *= v ** k
            total += term
        return total
    for e, c in phi.expanded.items():
        term = c
        for v, k in zip(t, e):
            term *= v ** k
        total += term
    return total


def _random_t(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def phi_invariant_under(phi, g, trials=5, seed=0, tol=1e-8):
    """Whether permuting the roots by ``g`` leaves the form unchanged at random ``t``."""
    rng = np.random.default_rng(seed)
    if phi.symbolic:
        base = _random_t(rng, phi.n)
    else:
        base = np.asarray(phi.roots)
    moved = base[list(g.images)]
    for _ in range(trials):
        t = _random_t(rng, phi.n)
        a = phi_eval(phi, t, None if not phi.symbolic else base)
        b = phi_eval(phi, t, moved)
        if abs(a - b) > tol * max(_scale(phi, t, base), 1e-300):
            return False
    return True


@dataclass(frozen=True)
class Subspace:
    """Parameterization of ``{t : sum of t over each block = 0}``.

    ``free`` lists the free coordinates (0-based); ``dependent`` maps each
    block's last index to the other indices of the block.
    """

    n: int
    free: tuple
    dependent: dict

    @property
    def constraints(self):
        return [tuple(sorted(others + [d])) for d, others in self.dependent.items()]

    def embed(self, values):
        t = np.zeros(self.n, dtype=complex)
        for i, v in zip(self.free, values):
            t[i] = v
        for d, others in self.dependent.items():
            t[d] = -sum(t[i] for i in others)
        return t


def coincidence_subspace_basis(partition):
    """Solution set of the block-sum equations of ``partition``."""
    free = []
    dep = {}
    for b in partition.blocks:
        idx = [i - 1 for i in b]
        free.extend(idx[:-1])
        dep[idx[-1]] = idx[:-1]
    return Subspace(partition.n, tuple(sorted(free)), dep)


def phi_vanishes_on(phi, partition, samples=20, tol=1e-8, seed=0):
    """Whether the form vanishes at ``samples`` random points of the block-sum subspace.

    The bound at each point is ``tol`` times the product of the factor
    magnitudes. For all singletons the subspace is the origin, where every
    form vanishes; that case returns True and warns.
    """
    if partition.n != phi.n:
        raise DomainError("partition and form have different degrees")
    if phi.symbolic:
        raise DomainError("vanishing test needs numeric roots")
    sub = coincidence_subspace_basis(partition)
    if not sub.free:
        warnings.warn("all-singletons partition: subspace is the origin", DegenerateSubspaceWarning, stacklevel=2)
        return True
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        t = sub.embed(_random_t(rng, len(sub.free)))
        if abs(phi_eval(phi, t)) > tol * _scale(phi, t):
            return False
    return True


@dataclass(frozen=True)
class RestrictedPhi:
    """The form in the free coordinates of a coincidence subspace.

    ``coefficients`` maps exponent tuples over ``free`` (numeric form), or
    ``free + x`` exponent tuples (symbolic form), to coefficients; it is None
    when the group was too large to expand and the vanishing verdict was
    sampled instead.
    """

    partition: SetPartition | None
    free: tuple
    coefficients: dict | None
    all_coefficients_vanish: bool


def restrict_phi(phi, partition, tol=1e-8, expand_limit=DEFAULT_EXPAND_LIMIT, samples=20, seed=0):
    """Substitute the dependent coordinates of ``partition`` into the form.

    With ``partition=None`` nothing is substituted and the stored expansion
    is returned as is.
    """
    n = phi.n
    if partition is None:
        coeffs = phi.expanded
        vanish = coeffs is not None and not any(abs(c) > 0 for c in coeffs.values())
        return RestrictedPhi(None, tuple(range(n)), coeffs, vanish)
    sub = coincidence_subspace_basis(partition)
    k = len(sub.free)
    pos = {f: j for j, f in enumerate(sub.free)}
    block_of = {}
    for d, others in sub.dependent.items():
        for i in others:
            block_of[i] = d
    if phi.group.order > expand_limit:
        if phi.symbolic:
            raise DomainError("evaluation-only: group too large to restrict symbolically")
        return RestrictedPhi(partition, sub.free, None, phi_vanishes_on(phi, partition, samples, tol, seed))
    if phi.symbolic:
        poly = {(0,) * (k + n): 1}
        for g in phi.group.elements:
            terms = []
            for f in sub.free:
                e = _unit(k, pos[f])
                terms.append((e + _unit(n, g[f]), 1))
                terms.append((e + _unit(n, g[block_of[f]]), -1))
            poly = _mul_linear(poly, terms)
            if not poly:
                break
        return RestrictedPhi(partition, sub.free, poly, not poly)
    # multiply the factor that is smallest relative to its bound last, and
    # measure the result against the product of the others times that bound
    xs = phi.roots
    factors = []
    for g in phi.group.elements:
        terms = [(_unit(k, pos[f]), xs[g[f]] - xs[g[block_of[f]]]) for f in sub.free]
        size = sum(abs(c) for _, c in terms)
        bound = sum(abs(xs[g[f]]) + abs(xs[g[block_of[f]]]) for f in sub.free)
        factors.append((size / bound if bound else 0.0, bound, terms))
    j = min(range(len(factors)), key=lambda i: factors[i][0])
    rest = {(0,) * k: 1 + 0j}
    for i, (_, _, terms) in enumerate(factors):
        if i != j:
            rest = _mul_linear(rest, terms)
    poly = _mul_linear(rest, factors[j][2]) if k else dict(rest)
    if not k:
        poly = {}
    ref = max((abs(c) for c in rest.values()), default=0.0) * factors[j][1]
    vanish = all(abs(c) <= tol * ref for c in poly.values())
    return RestrictedPhi(partition, sub.free, poly, vanish)


# strata ---------------------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    partition: SetPartition
    sample_point: tuple
    complex_codim: int

    def to_json(self):
        return {
            "partition": str(self.partition),
            "sample_point": [[complex(z).real, complex(z).imag] for z in self.sample_point],
            "complex_codim": self.complex_codim,
        }


def _clusters(roots, tol):
    """Single-linkage clusters of points at distance ``tol``, with the smallest inter-cluster gap."""
    k = len(roots)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if abs(roots[i] - roots[j]) <= tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    groups = list(groups.values())
    gap = min(
        (abs(roots[i] - roots[j]) for a in range(len(groups)) for b in range(a + 1, len(groups))
         for i in groups[a] for j in groups[b]),
        default=float("inf"),
    )
    return groups, gap


def stratify_point(fam, alpha, tol=1e-6):
    """Coincidence pattern of the roots at ``alpha``.

    Roots closer than ``tol`` (single linkage) form one block. Blocks are
    labelled consecutively in the canonical order of their centroids, so
    roots ``(1, 1, 2)`` give ``{1,2}{3}``.

    Raises
    ------
    DomainError
        If two clusters are closer than ``10 * tol``.
    """
    rs = find_roots(instantiate(fam, alpha))
    pts = list(rs.roots)
    groups, gap = _clusters(pts, tol)
    if gap < 10 * tol:
        raise DomainError(f"refine tolerance: clusters {gap:.3g} apart at tol {tol:.3g}")
    weighted = []
    for g in groups:
        mult = sum(rs.multiplicities[i] for i in g)
        centroid = sum(pts[i] * rs.multiplicities[i] for i in g) / mult
        weighted.append((root_sort_key(centroid), mult))
    weighted.sort()
    blocks = []
    label = 1
    for _, mult in weighted:
        blocks.append(tuple(range(label, label + mult)))
        label += mult
    part = SetPartition(tuple(blocks))
    return Stratum(part, tuple(complex(a) for a in np.asarray(alpha).reshape(-1)), fam.n - len(blocks))


def _planted(partition, values):
    roots = [0j] * partition.n
    blocks = sorted(partition.blocks, key=min)
    for b, v in zip(blocks, values):
        for i in b:
            roots[i - 1] = v
    return Polynomial.from_roots(roots).to_complex()


def realize_stratum(fam, partition, seed=0):
    """Parameter point whose roots coincide according to ``partition``.

    Plants the values 0, 1, 2, ... on the blocks (ordered by smallest label)
    and solves the affine system for the parameters. If that system has no
    solution, the block values are freed and a seeded nonlinear least-squares
    search is run. The result is checked with :func:`stratify_point`, which
    fixes the pattern up to relabelling.

    Raises
    ------
    DomainError
        "stratum not realizable in this family" when no point is found.
    """
    if partition.n != fam.n:
        raise DomainError("partition degree differs from family degree")
    nb = len(partition.blocks)
    A = fam.coeffs[:, 1:]
    c0 = fam.coeffs[:, 0]
    target = np.array(_planted(partition, range(nb)).coeffs[: fam.n], dtype=complex)
    alpha, *_ = np.linalg.lstsq(A, target - c0, rcond=None)
    scale = 1.0 + np.abs(target).max()
    if np.abs(A @ alpha + c0 - target).max() <= 1e-10 * scale and _check(fam, alpha, partition):
        return alpha
    rng = np.random.default_rng(seed)
    m = fam.m

    def resid(z):
        v = z[:nb] + 1j * z[nb:2 * nb]
        a = z[2 * nb:2 * nb + m] + 1j * z[2 * nb + m:]
        r = A @ a + c0 - np.array(_planted(partition, v).coeffs[: fam.n], dtype=complex)
        return np.concatenate([r.real, r.imag])

    for _ in range(8):
        z0 = rng.standard_normal(2 * nb + 2 * m)
        sol = least_squares(resid, z0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if np.abs(sol.fun).max() < 1e-11:
            alpha = sol.x[2 * nb:2 * nb + m] + 1j * sol.x[2 * nb + m:]
            if _check(fam, alpha, partition):
                return alpha
    raise DomainError("stratum not realizable in this family")


def _check(fam, alpha, partition):
    try:
        return stratify_point(fam, alpha, tol=1e-6).partition.sizes == partition.sizes
    except DomainError:
        return False


@dataclass(frozen=True)
class BoundResult:
    q1: int
    chain: tuple
    chain_length_unconstrained: int
    even_only: bool

    def to_json(self):
        return {
            "q1": self.q1,
            "chain": [s.to_json() for s in self.chain],
            "chain_length_unconstrained": self.chain_length_unconstrained,
            "even_only": self.even_only,
        }


def parameter_lower_bound(fam, group, even_only=True):
    """Longest height chain of coincidence patterns realizable in ``fam``.

    A pattern may appear when its cycle type occurs in ``group``, it can be
    realized in the family, and (with ``even_only``) it is an even
    permutation. The first element is never the identity, and not a
    transposition when ``even_only`` is set.
    """
    n = fam.n
    if group.n != n:
        raise DomainError("group degree differs from family degree")
    types = group.cycle_types()

    @lru_cache(maxsize=None)
    def realizable(t):
        try:
            realize_stratum(fam, SetPartition.from_sizes(t))
            return True
        except DomainError:
            return False

    def parity_ok(t):
        return not even_only or (n - len(t)) % 2 == 0

    def allowed(t):
        return parity_ok(t) and t in types and realizable(t)

    def bottom_ok(t):
        return not _is_identity_type(t) and not (even_only and _is_transposition_type(t))

    q1, chain = longest_chain(n, allowed, bottom_ok)
    unconstrained, _ = longest_chain(n, parity_ok, bottom_ok)
    strata = []
    for p in chain:
        pt = realize_stratum(fam, p)
        strata.append(Stratum(p, tuple(complex(a) for a in pt), n - len(p.blocks)))
    return BoundResult(q1, tuple(strata), unconstrained, even_only)
