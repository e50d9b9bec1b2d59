"""Characteristic cycles on coordinate-embedded complexes.

Over each simplex the conormal directions are cut into chambers by the
hyperplanes ``xi . (w - v0) = 0`` for link vertices ``w``.  A Lagrangian cycle
is a table of rational multiplicities indexed by (simplex, chamber), where a
chamber is recorded by its sign vector on the sorted link vertices.

Multiplicity convention (upper half-link, no global sign)::

    m(s, eps) = f(s) - sum over tau in Lk+_eps(s) of (-1)^dim(tau) f(s * tau)

so the indicator of a convex polytope gets its classical normal cycle, and
intersecting with the zero section at vertices reproduces Morse indices.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from . import exact
from .complex import ComplexError, OpenSet, Simplex, SimplicialComplex, SubdivisionMap
from .constructible import ComplexMismatch, ConstructibleFunction

Signs = tuple[int, ...]
Key = tuple[Simplex, Signs]


class NotAffinelyIndependent(ComplexError):
    pass


class NotAChamber(ComplexError):
    pass


class InconsistentTable(ValueError):
    def __init__(self, simplex, eps, eps2, a, b):
        super().__init__(
            f"table is not a Lagrangian cycle at simplex {list(simplex)}: chamber "
            f"{signs_str(eps)} gives {a} but chamber {signs_str(eps2)} gives {b}")
        self.simplex = simplex
        self.chambers = (eps, eps2)


class NonGenericCovector(ValueError):
    pass


def signs_str(signs: Signs) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


def parse_signs(text: str) -> Signs:
    out = []
    for ch in text:
        if ch == "+":
            out.append(1)
        elif ch == "-":
            out.append(-1)
        else:
            raise ValueError(f"bad sign character {ch!r} in {text!r}")
    return tuple(out)


@dataclass(frozen=True)
class Chamber:
    simplex: Simplex
    link: tuple[int, ...]
    signs: Signs
    witness: exact.Vector

    @property
    def key(self) -> Key:
        return (self.simplex, self.signs)

    def positive(self) -> frozenset[int]:
        return frozenset(w for w, s in zip(self.link, self.signs) if s > 0)


class EmbeddedChart:
    """A complex with rational vertex coordinates in R^n."""

    def __init__(self, complex: SimplicialComplex, n: int, coords: Mapping[int, Sequence]):
        self.complex = complex
        self.n = int(n)
        self.coords = {int(v): tuple(exact.frac(x) for x in c) for v, c in coords.items()}
        for v in complex.vertices:
            if v not in self.coords:
                raise ComplexError(f"vertex {v} has no coordinates")
            if len(self.coords[v]) != self.n:
                raise ComplexError(f"vertex {v} has {len(self.coords[v])} coordinates, expected {self.n}")
        for s in complex:
            if len(s) > 1 and exact.rank(self._edges(s)) != len(s) - 1:
                raise NotAffinelyIndependent(f"simplex {list(s)} is degenerate in the embedding")
        self._chambers: dict[Simplex, tuple[Chamber, ...]] = {}

    def _edges(self, s: Simplex):
        x0 = self.coords[s[0]]
        return [tuple(a - b for a, b in zip(self.coords[v], x0)) for v in s[1:]]

    def barycenter(self, s: Simplex) -> exact.Vector:
        k = len(s)
        return tuple(sum(self.coords[v][i] for v in s) / k for i in range(self.n))

    def conormal_basis(self, s: Simplex) -> list[exact.Vector]:
        return exact.nullspace(self._edges(s), self.n)

    def chambers(self, s) -> tuple[Chamber, ...]:
        s = self.complex.check(tuple(s))
        if s not in self._chambers:
            self._chambers[s] = tuple(self._enumerate(s))
        return self._chambers[s]

    def chamber_keys(self, s) -> set[Key]:
        return {c.key for c in self.chambers(s)}

    @cached_property
    def all_chambers(self) -> tuple[Chamber, ...]:
        return tuple(c for s in self.complex for c in self.chambers(s))

    def _enumerate(self, s: Simplex) -> list[Chamber]:
        basis = self.conormal_basis(s)
        link = self.complex.link_vertices(s)
        zero = tuple(Fraction(0) for _ in range(self.n))
        if not basis:
            return [Chamber(s, (), (), zero)]
        if not link:
            return [Chamber(s, (), (), basis[0])]
        x0 = self.coords[s[0]]
        forms = []
        for w in link:
            d = tuple(a - b for a, b in zip(self.coords[w], x0))
            forms.append(tuple(exact.dot(bk, d) for bk in basis))
        k = len(basis)
        found = []

        # depth-first over sign prefixes; an infeasible prefix prunes its subtree
        def grow(prefix: list[int], witness):
            i = len(prefix)
            if i == len(forms):
                xi = tuple(sum((c * bk[j] for c, bk in zip(witness, basis)), Fraction(0))
                           for j in range(self.n))
                found.append(Chamber(s, link, tuple(prefix), xi))
                return
            val = exact.dot(forms[i], witness)
            for sg in (1, -1):
                if exact.sign(val) == sg:
                    grow(prefix + [sg], witness)
                else:
                    w = exact.strictly_feasible(forms[: i + 1], prefix + [sg], k)
                    if w is not None:
                        grow(prefix + [sg], w)

        start = exact.strictly_feasible([], [], k)
        grow([], start)
        return found

    def chamber_of(self, s: Simplex, xi: Sequence[Fraction]) -> Optional[Signs]:
        """Sign vector of covector ``xi`` at ``s``; None if ``xi`` is not conormal
        to ``s`` or lies on a wall."""
        s = tuple(s)
        for e in self._edges(s):
            if exact.dot(xi, e) != 0:
                return None
        x0 = self.coords[s[0]]
        out = []
        for w in self.complex.link_vertices(s):
            v = exact.dot(xi, [a - b for a, b in zip(self.coords[w], x0)])
            if v == 0:
                return None
            out.append(exact.sign(v))
        return tuple(out)

    def is_generic(self, xi: Sequence[Fraction]) -> bool:
        heights = [exact.dot(xi, self.coords[v]) for v in self.complex.vertices]
        return len(set(heights)) == len(heights)

    def random_generic_covector(self, rng: random.Random) -> exact.Vector:
        while True:
            xi = tuple(Fraction(rng.randint(-97, 97)) for _ in range(self.n))
            if self.is_generic(xi):
                return xi


class LagrangianCycleTable:
    """Rational multiplicities on the conormal chambers of a chart.

    Only nonzero entries are stored; every key must be a realizable chamber.
    """

    __slots__ = ("chart", "_mult")

    def __init__(self, chart: EmbeddedChart, mult: Mapping[Key, Fraction] = None, check: bool = True):
        self.chart = chart
        vals = {}
        for (s, eps), m in (mult or {}).items():
            m = Fraction(m)
            key = (tuple(s), tuple(eps))
            if check and key not in chart.chamber_keys(key[0]):
                raise NotAChamber(
                    f"({list(key[0])}, {signs_str(key[1]) or 'empty'}) is not a chamber of the chart")
            if m:
                vals[key] = vals.get(key, 0) + m
        self._mult = {k: v for k, v in vals.items() if v}

    def __call__(self, s, eps=()) -> Fraction:
        return self._mult.get((tuple(s), tuple(eps)), Fraction(0))

    @property
    def mult(self) -> dict[Key, Fraction]:
        return dict(self._mult)

    def items(self):
        return sorted(self._mult.items(), key=lambda kv: (len(kv[0][0]), kv[0][0], kv[0][1]))

    def horizontal_support(self) -> frozenset[Simplex]:
        return frozenset(s for s, _ in self._mult)

    def is_zero(self) -> bool:
        return not self._mult

    def _same(self, other):
        if other.chart is not self.chart:
            raise ComplexMismatch("tables live on different charts")

    def __add__(self, other):
        self._same(other)
        vals = dict(self._mult)
        for k, v in other._mult.items():
            vals[k] = vals.get(k, 0) + v
        return LagrangianCycleTable(self.chart, vals, check=False)

    def __neg__(self):
        return LagrangianCycleTable(self.chart, {k: -v for k, v in self._mult.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return LagrangianCycleTable(self.chart, {k: v * c for k, v in self._mult.items()}, check=False)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LagrangianCycleTable):
            return NotImplemented
        return self.chart is other.chart and self._mult == other._mult

    def __repr__(self):
        return f"LagrangianCycleTable({len(self._mult)} nonzero chambers)"


def _half_link_sum(K: SimplicialComplex, f, s: Simplex, positive: frozenset[int]) -> Fraction:
    """Sum over tau in the positive half-link of (-1)^dim(tau) f(s * tau)."""
    total = Fraction(0)
    n = len(s)
    for c in K.cofaces(s):
        if len(c) == n:
            continue
        rest = [v for v in c if v not in s]
        if all(v in positive for v in rest):
            val = f(c)
            if val:
                total += val if len(rest) % 2 == 1 else -val
    return total


def cc(f: ConstructibleFunction, chart: EmbeddedChart, within: Optional[OpenSet] = None) -> LagrangianCycleTable:
    """Characteristic cycle of ``f``.

    With ``within``, only chambers over simplices of that open set are
    computed, using data local to it.
    """
    if f.complex != chart.complex:
        raise ComplexMismatch("function does not live on the chart's complex")
    mult = {}
    for s in chart.complex:
        if within is not None and s not in within.members:
            continue
        fs = f(s)
        for ch in chart.chambers(s):
            m = fs - _half_link_sum(chart.complex, f, s, ch.positive())
            if m:
                mult[ch.key] = m
    return LagrangianCycleTable(chart, mult, check=False)


def cc_inverse(table: LagrangianCycleTable) -> ConstructibleFunction:
    """Recover the constructible function of a valid table.

    Solves for f on simplices by decreasing dimension and insists every
    chamber of a simplex yields the same value.
    """
    chart = table.chart
    K = chart.complex
    values: dict[Simplex, Fraction] = {}
    get = lambda c: values.get(c, 0)  # noqa: E731
    for s in sorted(K, key=lambda s: (-len(s), s)):
        first = None
        for ch in chart.chambers(s):
            val = table(s, ch.signs) + _half_link_sum(K, get, s, ch.positive())
            if first is None:
                first = (ch.signs, val)
            elif val != first[1]:
                raise InconsistentTable(s, first[0], ch.signs, first[1], val)
        if first is not None and first[1]:
            values[s] = first[1]
    return ConstructibleFunction(K, values)


def intersect_zero_section(table: LagrangianCycleTable, xi: Optional[Sequence] = None,
                           seed: int = 0) -> Fraction:
    """Intersection number with the zero section, via the graph of d(xi . x).

    Each vertex contributes the multiplicity of the chamber containing ``xi``.
    """
    chart = table.chart
    if xi is None:
        xi = chart.random_generic_covector(random.Random(seed))
    else:
        xi = tuple(exact.frac(x) for x in xi)
        if len(xi) != chart.n or not chart.is_generic(xi):
            raise NonGenericCovector(f"covector {[str(x) for x in xi]} is not injective on vertices")
    total = Fraction(0)
    for v in chart.complex.vertices:
        signs = chart.chamber_of((v,), xi)
        assert signs is not None
        total += table((v,), signs)
    return total


def subdivide_chart(chart: EmbeddedChart, sd: SubdivisionMap) -> EmbeddedChart:
    """Chart on a barycentric subdivision, new vertices at barycenters."""
    if sd.source != chart.complex:
        raise ComplexMismatch("subdivision does not refine the chart's complex")
    for step in sd.parts:
        coords = {b: chart.barycenter(s) for s, b in step.barycenter_of.items()}
        chart = EmbeddedChart(step.target, chart.n, coords)
    return chart


def restrict_chart(chart: EmbeddedChart, simplices: Iterable[Simplex]) -> EmbeddedChart:
    """Chart on the subcomplex generated by ``simplices``."""
    sub = chart.complex.subcomplex(simplices)
    return EmbeddedChart(sub, chart.n, {v: chart.coords[v] for v in sub.vertices})
