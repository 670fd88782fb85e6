"""Permutations, coincidence partitions and chains in the height order.

Points are 0-based internally. Every string form (cycle notation, set
partitions) is 1-based: ``"(1 2 3)(4 5)"``, ``"{1,2,3}{4,5}"``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from . import _kernels
from .errors import DomainError, GroupTooLarge

DEFAULT_MAX_ORDER = 10**6


class Permutation:
    """Bijection of ``{0, ..., n-1}`` stored as its image tuple.

    ``a * b`` applies ``a`` first, then ``b``.
    """

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def from_cycles(cls, cycles, n):
        """Build from 1-based cycles, e.g. ``[(1, 2, 3), (4, 5)]``."""
        img = list(range(n))
        seen = set()
        for cyc in cycles:
            cyc = [int(c) - 1 for c in cyc]
            for c in cyc:
                if not 0 <= c < n:
                    raise ValueError(f"point {c + 1} outside 1..{n}")
                if c in seen:
                    raise ValueError(f"point {c + 1} appears in two cycles")
                seen.add(c)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    @classmethod
    def parse(cls, text, n):
        """Parse cycle notation such as ``"(1 2 3)(4 5)"`` or ``"()"``."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+([\s,]+\d+)*)?\s*\)\s*)+", text):
            raise ValueError(f"malformed cycle string {text!r}")
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            pts = [int(v) for v in re.split(r"[\s,]+", body.strip()) if v]
            if pts:
                cycles.append(pts)
        return cls.from_cycles(cycles, n)

    @property
    def n(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i]

    def __mul__(self, other):
        if self.n != other.n:
            raise DomainError(f"degree mismatch: {self.n} vs {other.n}")
        o = other.images
        return Permutation([o[i] for i in self.images])

    def __pow__(self, e):
        out = Permutation.identity(self.n)
        base = self if e >= 0 else self.inverse()
        for _ in range(abs(e)):
            out = out * base
        return out

    def inverse(self):
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def cycles(self):
        """All cycles (fixed points included), 0-based, each starting at its minimum."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images))

    @property
    def order(self):
        return math.lcm(*(len(c) for c in self.cycles())) if self.n else 1

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __str__(self):
        parts = ["(" + " ".join(str(i + 1) for i in c) + ")" for c in self.cycles() if len(c) > 1]
        return "".join(parts) if parts else "()"

    def __repr__(self):
        return f"Permutation({str(self)!r}, n={self.n})"


def cycle_count(s):
    """Number of cycles of ``s``, fixed points included."""
    return len(s.cycles())


def parity(s):
    return "even" if (s.n - cycle_count(s)) % 2 == 0 else "odd"


@dataclass(frozen=True)
class SetPartition:
    """Partition of ``{1, ..., n}`` into sorted blocks ordered by their minima."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(int(i) for i in b)) for b in self.blocks if len(b)), key=lambda b: b[0]))
        pts = [i for b in blocks for i in b]
        if sorted(pts) != list(range(1, len(pts) + 1)):
            raise ValueError(f"blocks {blocks} do not partition 1..{len(pts)}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def singletons(cls, n):
        return cls(tuple((i,) for i in range(1, n + 1)))

    @classmethod
    def from_sizes(cls, sizes):
        """Consecutive blocks with the given sizes: (3, 1, 1) -> {1,2,3}{4}{5}."""
        blocks, k = [], 1
        for s in sizes:
            blocks.append(tuple(range(k, k + s)))
            k += s
        return cls(tuple(blocks))

    @classmethod
    def parse(cls, text):
        """Parse ``"{1,2}{3}"``; blocks without separators (``"{12}{3}"``) read digit by digit."""
        bodies = re.findall(r"\{([^}]*)\}", text)
        if not bodies or re.sub(r"\{[^}]*\}|\s", "", text):
            raise ValueError(f"malformed partition {text!r}")
        blocks = []
        for body in bodies:
            body = body.strip()
            if re.search(r"[\s,]", body):
                blocks.append(tuple(int(v) for v in re.split(r"[\s,]+", body) if v))
            else:
                blocks.append(tuple(int(ch) for ch in body))
        return cls(tuple(blocks))

    @property
    def n(self):
        return sum(len(b) for b in self.blocks)

    @property
    def sizes(self):
        """Block sizes in decreasing order (the cycle type)."""
        return tuple(sorted((len(b) for b in self.blocks), reverse=True))

    @property
    def codim(self):
        return self.n - len(self.blocks)

    @property
    def is_even(self):
        return self.codim % 2 == 0

    def refines(self, other):
        """Every block of ``self`` lies inside a block of ``other``."""
        where = {}
        for k, b in enumerate(other.blocks):
            for i in b:
                where[i] = k
        return all(len({where[i] for i in b}) == 1 for b in self.blocks)

    def __lt__(self, other):
        return self != other and self.refines(other)

    def __le__(self, other):
        return self.refines(other)

    def to_permutation(self):
        return Permutation.from_cycles(self.blocks, self.n)

    def permuted(self, g):
        """Image of the partition under the point map ``g``."""
        return SetPartition(tuple(tuple(g(i - 1) + 1 for i in b) for b in self.blocks))

    def __str__(self):
        return "".join("{" + ",".join(str(i) for i in b) + "}" for b in self.blocks)


def coincidence_partition(s):
    return SetPartition(tuple(tuple(i + 1 for i in c) for c in s.cycles()))


def height_lt(s, t):
    """Strict height order: the cycles of ``s`` strictly refine those of ``t``."""
    if s.n != t.n:
        raise DomainError(f"degree mismatch: {s.n} vs {t.n}")
    return coincidence_partition(s) < coincidence_partition(t)


# chain search ---------------------------------------------------------------

def _restricted_growth(k):
    """All set partitions of range(k) as restricted growth strings, lexicographic."""
    if k == 0:
        yield ()
        return
    rgs = [0] * k

    def rec(i, mx):
        if i == k:
            yield tuple(rgs)
            return
        for v in range(mx + 2):
            rgs[i] = v
            yield from rec(i + 1, max(mx, v))

    rgs[0] = 0
    yield from rec(1, 0)


def _merge(blocks, rgs):
    groups = {}
    for b, label in zip(blocks, rgs):
        groups.setdefault(label, []).extend(b)
    return tuple(tuple(sorted(g)) for g in groups.values())


def _type_of(blocks):
    return tuple(sorted((len(b) for b in blocks), reverse=True))


def longest_chain(n, allowed, bottom_ok):
    """Longest strict coarsening chain of set partitions of ``{1..n}``.

    ``allowed(sizes)`` decides whether a partition of the given block-size
    type may appear in the chain at all; ``bottom_ok(sizes)`` additionally
    filters the first element. Both see only the decreasing block sizes, so
    the recursion is memoized on types. Returns ``(length, witness)``.
    """

    @lru_cache(maxsize=None)
    def up(sizes):
        best = 1
        k = len(sizes)
        blocks = SetPartition.from_sizes(sizes).blocks
        seen = set()
        for rgs in _restricted_growth(k):
            if max(rgs) == k - 1:
                continue
            t = _type_of(_merge(blocks, rgs))
            if t in seen:
                continue
            seen.add(t)
            if allowed(t):
                best = max(best, 1 + up(t))
        return best

    starts = [t for t in integer_partitions(n) if allowed(t) and bottom_ok(t)]
    if not starts:
        return 0, []
    start = max(starts, key=lambda t: (up(t), len(t), t))
    length = up(start)
    chain = [SetPartition.from_sizes(start)]
    remaining = length - 1
    while remaining:
        blocks = chain[-1].blocks
        best = None
        for rgs in _restricted_growth(len(blocks)):
            if max(rgs) == len(blocks) - 1:
                continue
            merged = _merge(blocks, rgs)
            t = _type_of(merged)
            if not allowed(t) or up(t) != remaining:
                continue
            key = (len(t), t)
            if best is None or key > best[0]:
                best = (key, merged)
        chain.append(SetPartition(best[1]))
        remaining -= 1
    return length, chain


def integer_partitions(n, largest=None):
    """Integer partitions of ``n`` as decreasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def _is_identity_type(t):
    return all(s == 1 for s in t)


def _is_transposition_type(t):
    return t[0] == 2 and all(s == 1 for s in t[1:])


def max_chain(n, even_only=True):
    """Longest height chain of coincidence patterns in degree ``n``.

    The first element may be neither the identity nor a transposition; with
    ``even_only`` every element must be an even permutation.

    Returns
    -------
    (int, list of SetPartition)
        Chain length and a witness chain, finest first.
    """
    if n < 3:
        raise DomainError(f"max_chain needs n >= 3, got {n}")

    def allowed(t):
        return not even_only or (n - len(t)) % 2 == 0

    def bottom_ok(t):
        return not _is_identity_type(t) and not _is_transposition_type(t)

    return longest_chain(n, allowed, bottom_ok)


def chebotarev_bound(n):
    """Lower bound floor((n-1)/2) on the parameter count of a resolvent."""
    if n < 3:
        raise DomainError(f"bound needs n >= 3, got {n}")
    return (n - 1) // 2


# groups ---------------------------------------------------------------------

@dataclass(frozen=True)
class PermGroup:
    """Permutation group given by generators and, when small, its elements.

    ``elements`` holds image tuples (not :class:`Permutation` objects) to keep
    groups such as S9 compact. ``meta`` carries provenance such as the seed
    and basepoint a monodromy computation used.
    """

    n: int
    generators: tuple
    elements: tuple | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def order(self):
        if self.elements is None:
            raise DomainError("group order unknown: elements not materialized")
        return len(self.elements)

    @cached_property
    def _element_set(self):
        return frozenset(self.elements)

    def __contains__(self, s):
        return s.images in self._element_set

    def permutations(self):
        return [Permutation(e) for e in self.elements]

    def cycle_types(self):
        return _kernels.cycle_types(self.elements, self.n)

    def to_json(self):
        out = {"n": self.n, "generators": [str(g) for g in self.generators]}
        if self.elements is not None:
            out["order"] = len(self.elements)
        out.update(self.meta)
        return out

    @classmethod
    def from_json(cls, obj, max_order=DEFAULT_MAX_ORDER):
        n = int(obj["n"])
        gens = [Permutation.parse(s, n) for s in obj["generators"]]
        return closure(gens, max_order=max_order, n=n)


def closure(generators, max_order=DEFAULT_MAX_ORDER, n=None):
    """Group generated by ``generators``, materialized breadth first.

    Raises
    ------
    GroupTooLarge
        When more than ``max_order`` elements are found.
    """
    generators = tuple(generators)
    if n is None:
        if not generators:
            raise DomainError("closure of an empty generator list needs n")
        n = generators[0].n
    if any(g.n != n for g in generators):
        raise DomainError("generators have different degrees")
    elems = _kernels.closure([g.images for g in generators], n, max_order)
    if elems is None:
        raise GroupTooLarge(f"group too large: more than {max_order} elements")
    return PermGroup(n, generators, tuple(elems))


def orbit(g, point=0):
    gens = [s.images for s in g.generators] if g.generators else list(g.elements or ())
    seen = {point}
    stack = [point]
    while stack:
        p = stack.pop()
        for s in gens:
            q = s[p]
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def is_transitive(g):
    """True iff the orbit of point 1 is all of ``{1..n}``."""
    return len(orbit(g, 0)) == g.n


def symmetric_group(n, max_order=DEFAULT_MAX_ORDER):
    if n == 1:
        return closure([], max_order, n=1)
    gens = [Permutation.from_cycles([(1, 2)], n), Permutation.from_cycles([tuple(range(1, n + 1))], n)]
    return closure(gens, max_order)


def alternating_group(n, max_order=DEFAULT_MAX_ORDER):
    if n < 3:
        return closure([], max_order, n=n)
    gens = [Permutation.from_cycles([(1, 2, k)], n) for k in range(3, n + 1)]
    return closure(gens, max_order)
