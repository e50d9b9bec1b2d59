"""Finite abstract simplicial complexes.

Strata are the open simplices.  A simplex is a sorted tuple of integer
vertex ids; a complex is an immutable, face-closed set of them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    pass


class SimplexNotInComplex(ComplexError):
    def __init__(self, simplex):
        super().__init__(f"simplex {list(simplex)} is not in the complex")
        self.simplex = simplex


class NotFaceClosed(ComplexError):
    def __init__(self, simplex, missing):
        super().__init__(f"simplex {list(simplex)} is missing its face {list(missing)}")
        self.simplex = simplex
        self.missing = missing


class NotOpen(ComplexError):
    def __init__(self, simplex, coface):
        super().__init__(
            f"set is not open: contains {list(simplex)} but not its coface {list(coface)}")
        self.simplex = simplex
        self.coface = coface


def simplex(vertices: Iterable[int]) -> Simplex:
    s = tuple(sorted(set(int(v) for v in vertices)))
    if not s:
        raise ComplexError("simplices must be nonempty")
    return s


def dim(s: Simplex) -> int:
    return len(s) - 1


def faces(s: Simplex) -> Iterable[Simplex]:
    """All nonempty faces of ``s``, including ``s`` itself."""
    for k in range(1, len(s) + 1):
        yield from itertools.combinations(s, k)


def _sort_key(s: Simplex):
    return (len(s), s)


class SimplicialComplex:
    """An immutable finite simplicial complex.

    ``SimplicialComplex(simplices)`` requires a face-closed list;
    :meth:`from_maximal` completes faces.
    """

    __slots__ = ("_simplices", "_set", "__dict__")

    def __init__(self, simplices: Iterable[Iterable[int]] = (), vertices: Iterable[int] = ()):
        sset = {simplex(s) for s in simplices}
        sset.update((int(v),) for v in vertices)
        for s in sset:
            if len(s) > 1:
                for f in itertools.combinations(s, len(s) - 1):
                    if f not in sset:
                        raise NotFaceClosed(s, f)
        self._set = frozenset(sset)
        self._simplices = tuple(sorted(sset, key=_sort_key))

    @classmethod
    def from_maximal(cls, maximal: Iterable[Iterable[int]], vertices: Iterable[int] = ()):
        sset = set()
        for m in maximal:
            sset.update(faces(simplex(m)))
        return cls(sset, vertices)

    @property
    def simplices(self) -> tuple[Simplex, ...]:
        """All simplices ordered by dimension, then lexicographically."""
        return self._simplices

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self._simplices if len(s) == 1)

    @cached_property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self._simplices), default=-1)

    def __contains__(self, s) -> bool:
        return tuple(s) in self._set

    def __iter__(self):
        return iter(self._simplices)

    def __len__(self) -> int:
        return len(self._simplices)

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._set == other._set

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self.vertices)} vertices, {len(self)} simplices)"

    def check(self, s) -> Simplex:
        s = tuple(s)
        if s not in self._set:
            raise SimplexNotInComplex(s)
        return s

    def f_vector(self) -> list[int]:
        counts = [0] * (self.dim + 1)
        for s in self._simplices:
            counts[len(s) - 1] += 1
        return counts

    @cached_property
    def _cofaces(self) -> dict[Simplex, tuple[Simplex, ...]]:
        table: dict[Simplex, list[Simplex]] = {s: [] for s in self._simplices}
        for s in self._simplices:
            for f in faces(s):
                table[f].append(s)
        return {s: tuple(c) for s, c in table.items()}

    def cofaces(self, s) -> tuple[Simplex, ...]:
        """Simplices containing ``s`` (including ``s``)."""
        return self._cofaces[self.check(s)]

    def link_simplices(self, s) -> tuple[Simplex, ...]:
        s = self.check(s)
        ss = set(s)
        return tuple(sorted((tuple(v for v in c if v not in ss) for c in self._cofaces[s] if c != s),
                            key=_sort_key))

    def link(self, s) -> "SimplicialComplex":
        return SimplicialComplex(self.link_simplices(s))

    def link_vertices(self, s) -> tuple[int, ...]:
        return tuple(t[0] for t in self.link_simplices(s) if len(t) == 1)

    def star_open(self, s) -> "OpenSet":
        return OpenSet(self, self.cofaces(s))

    def closure(self, simplices: Iterable[Simplex]) -> frozenset[Simplex]:
        out = set()
        for s in simplices:
            out.update(faces(self.check(s)))
        return frozenset(out)

    def subcomplex(self, simplices: Iterable[Simplex]) -> "SimplicialComplex":
        return SimplicialComplex(self.closure(simplices))


def euler_char_cc(simplices: Iterable[Simplex]) -> Fraction:
    """Compactly supported Euler characteristic of a union of open simplices."""
    return Fraction(sum(-1 if len(s) % 2 == 0 else 1 for s in simplices))


@dataclass(frozen=True)
class OpenSet:
    """A coface-closed set of simplices, i.e. an open union of open simplices."""

    complex: SimplicialComplex
    members: frozenset = field(default_factory=frozenset)

    def __init__(self, complex: SimplicialComplex, members: Iterable[Simplex]):
        mem = frozenset(complex.check(tuple(s)) for s in members)
        for s in mem:
            for c in complex.cofaces(s):
                if c not in mem:
                    raise NotOpen(s, c)
        object.__setattr__(self, "complex", complex)
        object.__setattr__(self, "members", mem)

    @classmethod
    def union_of_stars(cls, complex: SimplicialComplex, vertices: Iterable[int]) -> "OpenSet":
        mem = set()
        for v in vertices:
            mem.update(complex.cofaces((v,)))
        return cls(complex, mem)

    def __contains__(self, s) -> bool:
        return tuple(s) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __or__(self, other: "OpenSet") -> "OpenSet":
        return OpenSet(self.complex, self.members | other.members)

    def __and__(self, other: "OpenSet") -> "OpenSet":
        return OpenSet(self.complex, self.members & other.members)

    def sorted(self) -> list[Simplex]:
        return sorted(self.members, key=_sort_key)

    def closure_inside(self, s: Simplex) -> bool:
        """True if every face of ``s`` lies in this open set."""
        return all(f in self.members for f in faces(s))


@dataclass(frozen=True)
class SubdivisionMap:
    """A refinement ``target -> source`` recorded by its carrier.

    ``carrier[t]`` is the source simplex whose open simplex contains the open
    simplex ``t`` of the target.  For a barycentric subdivision, target vertex
    ``barycenter_of[s]`` sits at the barycenter of source simplex ``s``.
    """

    source: SimplicialComplex
    target: SimplicialComplex
    carrier: Mapping[Simplex, Simplex]
    barycenter_of: Mapping[Simplex, int] = field(default_factory=dict)
    steps: tuple = ()

    @property
    def parts(self) -> tuple["SubdivisionMap", ...]:
        """The elementary subdivisions this map is composed of."""
        if self.steps:
            return self.steps
        return () if self.is_identity else (self,)

    def __post_init__(self):
        for t in self.target:
            c = self.carrier.get(t)
            if c is None or c not in self.source:
                raise ComplexError(f"target simplex {list(t)} has no carrier")

    @classmethod
    def identity(cls, K: SimplicialComplex) -> "SubdivisionMap":
        return cls(K, K, {s: s for s in K}, {})

    @property
    def is_identity(self) -> bool:
        return self.source is self.target or all(self.carrier[t] == t for t in self.target)

    def fiber(self, s: Simplex) -> list[Simplex]:
        return [t for t in self.target if self.carrier[t] == s]

    def then(self, other: "SubdivisionMap") -> "SubdivisionMap":
        """Compose with a further refinement ``other`` of this map's target."""
        if other.source != self.target:
            raise ComplexError("subdivision maps do not compose")
        carrier = {t: self.carrier[other.carrier[t]] for t in other.target}
        return SubdivisionMap(self.source, other.target, carrier, {}, self.parts + other.parts)

    def open_set(self, U: OpenSet) -> OpenSet:
        """The open set of the target covering the same region as ``U``."""
        return OpenSet(self.target, [t for t in self.target if self.carrier[t] in U.members])


def barycentric_subdivision(K: SimplicialComplex) -> SubdivisionMap:
    """First barycentric subdivision: simplices are flags of source simplices.

    New vertex ids are the positions of source simplices in ``K.simplices``.
    """
    bary = {s: i for i, s in enumerate(K.simplices)}
    flags: list[tuple[Simplex, ...]] = []

    def extend(chain: tuple[Simplex, ...]):
        flags.append(chain)
        top = chain[-1]
        for c in K.cofaces(top):
            if c != top:
                extend(chain + (c,))

    for s in K.simplices:
        extend((s,))
    carrier = {}
    simplices = []
    for chain in flags:
        t = tuple(sorted(bary[s] for s in chain))
        simplices.append(t)
        carrier[t] = chain[-1]
    return SubdivisionMap(K, SimplicialComplex(simplices), carrier, bary)


@dataclass
class ManifoldReport:
    n: int
    pseudomanifold: bool
    bad_ridges: list = field(default_factory=list)
    bad_links: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.pseudomanifold and not self.bad_links


def manifold_report(K: SimplicialComplex, n: int) -> ManifoldReport:
    """Necessary conditions for K to be a closed combinatorial n-manifold.

    Checks that every (n-1)-simplex has exactly two n-dimensional cofaces and
    that the link of every k-simplex has the Euler characteristic of an
    (n-k-1)-sphere.  Sphere recognition is not attempted.
    """
    bad_ridges = []
    for s in K:
        if len(s) == n:
            tops = sum(1 for c in K.cofaces(s) if len(c) == n + 1)
            if tops != 2:
                bad_ridges.append((s, tops))
    bad_links = []
    for s in K:
        if len(s) > n + 1:
            bad_links.append((s, None, None))
            continue
        link = K.link_simplices(s)
        chi = euler_char_cc(link)
        d = n - len(s)  # sphere dimension of the link
        want = 1 + (-1) ** d if d >= 0 else 0
        if chi != want:
            bad_links.append((s, int(chi), want))
    return ManifoldReport(n, not bad_ridges, bad_ridges, bad_links)
