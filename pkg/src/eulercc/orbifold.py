"""Global quotient orbifolds M/G for a finite simplicial group action.

Constructible functions on the quotient orbifold are G-coinvariants of
functions on M, stored through their canonical G-average.  The coarse space
is the orbit complex; ``pushforward_p`` uses the norm convention
(sum over group elements), which is what makes

    integral over X of f  ==  integral over coarse of p_!(f) * iota

an exact identity.  The fiber-sum variant is kept for comparison.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from . import exact
from .charts import EmbeddedChart, LagrangianCycleTable, cc, intersect_zero_section, subdivide_chart
from .complex import ComplexError, Simplex, SimplicialComplex, SubdivisionMap, barycentric_subdivision
from .constructible import ComplexMismatch, ConstructibleFunction, euler_integral

MAX_GROUP_ORDER = 10080


class ActionError(ComplexError):
    pass


class NonSimplicialPermutation(ActionError):
    def __init__(self, simplex, image):
        super().__init__(f"permutation sends simplex {list(simplex)} to non-simplex {list(image)}")
        self.simplex = simplex


class IrregularAction(ActionError):
    pass


class StillIrregular(ActionError):
    pass


class NonOrthogonalMatrix(ActionError):
    pass


class IncompatibleAction(ActionError):
    pass


class Perm:
    """A permutation of vertex ids; unlisted vertices are fixed."""

    __slots__ = ("_map", "key")

    def __init__(self, mapping: Mapping[int, int]):
        m = {int(a): int(b) for a, b in mapping.items() if int(a) != int(b)}
        if sorted(m) != sorted(m.values()):
            raise ActionError(f"not a permutation: {mapping}")
        self._map = m
        self.key = tuple(sorted(m.items()))

    def __call__(self, v: int) -> int:
        return self._map.get(v, v)

    def __mul__(self, other: "Perm") -> "Perm":
        verts = set(self._map) | set(other._map)
        return Perm({v: self(other(v)) for v in verts})

    def inverse(self) -> "Perm":
        return Perm({b: a for a, b in self._map.items()})

    def act(self, s: Simplex) -> Simplex:
        return tuple(sorted(self(v) for v in s))

    @property
    def is_identity(self) -> bool:
        return not self._map

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: "Perm") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"Perm({dict(self.key)})"


IDENTITY = Perm({})


class GroupAction:
    """A finite group of simplicial vertex permutations of a complex."""

    def __init__(self, complex: SimplicialComplex, generators: Sequence[Mapping[int, int] | Perm],
                 max_order: int = MAX_GROUP_ORDER):
        self.complex = complex
        gens = [g if isinstance(g, Perm) else Perm(g) for g in generators]
        verts = set(complex.vertices)
        for g in gens:
            for v in g._map:
                if v not in verts:
                    raise ActionError(f"generator moves {v}, which is not a vertex")
            for s in complex:
                if g.act(s) not in complex:
                    raise NonSimplicialPermutation(s, g.act(s))
        self.generators = tuple(gens)
        elements = {IDENTITY}
        frontier = [IDENTITY]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = g * a
                    if b not in elements:
                        elements.add(b)
                        nxt.append(b)
                        if len(elements) > max_order:
                            raise ActionError(f"group closure exceeds {max_order} elements")
            frontier = nxt
        self.elements = tuple(sorted(elements))

    @classmethod
    def trivial(cls, complex: SimplicialComplex) -> "GroupAction":
        return cls(complex, [])

    @property
    def order(self) -> int:
        return len(self.elements)

    def act_function(self, g: Perm, h: ConstructibleFunction) -> ConstructibleFunction:
        """(g.h)(s) = h(g^-1 s), i.e. values are transported along g."""
        return ConstructibleFunction(h.complex, {g.act(s): v for s, v in h.values.items()})

    def orbit(self, s: Simplex) -> tuple[Simplex, ...]:
        return tuple(sorted({g.act(s) for g in self.elements}))

    def stabilizer(self, s: Simplex) -> tuple[Perm, ...]:
        s = tuple(s)
        return tuple(g for g in self.elements if g.act(s) == s)

    @cached_property
    def simplex_orbits(self) -> tuple[tuple[Simplex, ...], ...]:
        seen = set()
        out = []
        for s in self.complex:
            if s in seen:
                continue
            orb = self.orbit(s)
            seen.update(orb)
            out.append(orb)
        return tuple(out)

    @cached_property
    def vertex_orbit_label(self) -> dict[int, int]:
        return {v: min(g(v) for g in self.elements) for v in self.complex.vertices}

    def is_free(self) -> bool:
        return all(len(self.stabilizer(s)) == 1 for s in self.complex)

    def subdivide(self, sd: SubdivisionMap) -> "GroupAction":
        """Induced action on a barycentric subdivision."""
        bary = sd.barycenter_of
        gens = [Perm({bary[s]: bary[g.act(s)] for s in sd.source}) for g in self.generators]
        return GroupAction(sd.target, gens)


@dataclass
class RegularityReport:
    setwise_fixed_not_pointwise: list = field(default_factory=list)
    orbit_collisions: list = field(default_factory=list)
    split_fibers: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """Setwise-fixed simplices are pointwise fixed and no simplex meets an orbit twice."""
        return not self.setwise_fixed_not_pointwise and not self.orbit_collisions

    @property
    def quotient_safe(self) -> bool:
        """Additionally, simplices with the same orbit image form one G-orbit."""
        return self.ok and not self.split_fibers


def check_regularity(K: SimplicialComplex, G: GroupAction) -> RegularityReport:
    if G.complex != K:
        raise ComplexMismatch("action does not live on this complex")
    rep = RegularityReport()
    for s in K:
        for g in G.elements:
            if g.act(s) == s and any(g(v) != v for v in s):
                rep.setwise_fixed_not_pointwise.append((s, g))
                break
    label = G.vertex_orbit_label
    for s in K:
        labels = [label[v] for v in s]
        if len(set(labels)) < len(labels):
            rep.orbit_collisions.append(s)
    images = defaultdict(set)
    for s in K:
        images[tuple(sorted(label[v] for v in s))].add(s)
    for img, fiber in sorted(images.items()):
        orbit = set(G.orbit(min(fiber)))
        if orbit != fiber:
            rep.split_fibers.append(img)
    return rep


def regularize(K: SimplicialComplex, G: GroupAction, max_rounds: int = 2):
    """Barycentrically subdivide until the action is quotient-safe.

    Returns ``(K', G', sd)`` with ``sd`` mapping K' onto K.
    """
    sd = SubdivisionMap.identity(K)
    cur_K, cur_G = K, G
    for rounds in range(max_rounds + 1):
        if check_regularity(cur_K, cur_G).quotient_safe:
            return cur_K, cur_G, sd
        if rounds == max_rounds:
            break
        step = barycentric_subdivision(cur_K)
        cur_G = cur_G.subdivide(step)
        cur_K = step.target
        sd = step if sd.is_identity else sd.then(step)
    raise StillIrregular(f"action still irregular after {max_rounds} subdivisions")


class QuotientData:
    """Coarse complex of a quotient-safe action.

    Coarse vertex ids are the smallest vertex id in each vertex orbit.
    """

    def __init__(self, action: GroupAction):
        rep = check_regularity(action.complex, action)
        if not rep.quotient_safe:
            raise IrregularAction(_describe(rep))
        self.action = action
        label = action.vertex_orbit_label
        self.projection = {s: tuple(sorted(label[v] for v in s)) for s in action.complex}
        self.coarse = SimplicialComplex(set(self.projection.values()))
        fibers = defaultdict(list)
        for s, img in self.projection.items():
            fibers[img].append(s)
        self._fibers = {k: tuple(sorted(v)) for k, v in fibers.items()}
        self.stabilizer_order = {s: len(action.stabilizer(s)) for s in action.complex}

    def fiber(self, sbar: Simplex) -> tuple[Simplex, ...]:
        return self._fibers[tuple(sbar)]

    def lift(self, sbar: Simplex) -> Simplex:
        return self._fibers[tuple(sbar)][0]

    def coarse_stabilizer_order(self, sbar: Simplex) -> int:
        return self.stabilizer_order[self.lift(sbar)]


def _describe(rep: RegularityReport) -> str:
    parts = []
    if rep.setwise_fixed_not_pointwise:
        s, g = rep.setwise_fixed_not_pointwise[0]
        parts.append(f"simplex {list(s)} is fixed setwise but not pointwise by {dict(g.key)}")
    if rep.orbit_collisions:
        parts.append(f"simplex {list(rep.orbit_collisions[0])} contains two vertices of one orbit")
    if rep.split_fibers:
        parts.append(f"coarse simplex {list(rep.split_fibers[0])} has a fiber of several orbits")
    return "; ".join(parts)


def quotient(K: SimplicialComplex, G: GroupAction) -> QuotientData:
    if G.complex != K:
        raise ComplexMismatch("action does not live on this complex")
    return QuotientData(G)


def iota(qd: QuotientData) -> ConstructibleFunction:
    return ConstructibleFunction(
        qd.coarse, {sb: Fraction(1, qd.coarse_stabilizer_order(sb)) for sb in qd.coarse})


class CoinvariantClass:
    """A class in the G-coinvariants of Fun_c(M), stored by its G-average."""

    __slots__ = ("action", "avg")

    def __init__(self, action: GroupAction, avg: ConstructibleFunction):
        self.action = action
        self.avg = avg

    def __eq__(self, other) -> bool:
        return isinstance(other, CoinvariantClass) and self.action is other.action and self.avg == other.avg

    def __hash__(self):
        return hash(self.avg)

    def __repr__(self):
        return f"CoinvariantClass({self.avg!r})"


def average(h: ConstructibleFunction, G: GroupAction) -> ConstructibleFunction:
    vals: dict[Simplex, Fraction] = defaultdict(Fraction)
    for g in G.elements:
        for s, v in h.values.items():
            vals[g.act(s)] += v
    n = G.order
    return ConstructibleFunction(h.complex, {s: v / n for s, v in vals.items()})


def class_of(h: ConstructibleFunction, G: GroupAction) -> CoinvariantClass:
    if h.complex != G.complex:
        raise ComplexMismatch("function does not live on the action's complex")
    return CoinvariantClass(G, average(h, G))


def orbifold_integral(c: CoinvariantClass) -> Fraction:
    return euler_integral(c.avg)


def _check_same(c: CoinvariantClass, qd: QuotientData):
    if c.action is not qd.action and c.action.complex != qd.action.complex:
        raise ComplexMismatch("class and quotient come from different actions")


def pushforward_p(c: CoinvariantClass, qd: QuotientData) -> ConstructibleFunction:
    """Norm convention: p_!(c)(sbar) = |G| * avg(any lift of sbar)."""
    _check_same(c, qd)
    n = qd.action.order
    return ConstructibleFunction(qd.coarse, {sb: n * c.avg(qd.lift(sb)) for sb in qd.coarse})


def pushforward_fiber_sum(c: CoinvariantClass, qd: QuotientData) -> ConstructibleFunction:
    """Set-theoretic fiber sum; differs from the norm by |G_s| at fixed simplices."""
    _check_same(c, qd)
    return ConstructibleFunction(
        qd.coarse, {sb: sum((c.avg(t) for t in qd.fiber(sb)), Fraction(0)) for sb in qd.coarse})


def coarse_weighted_integral(c: CoinvariantClass, qd: QuotientData) -> Fraction:
    return euler_integral(pushforward_p(c, qd) * iota(qd))


def transfer(fbar: ConstructibleFunction, qd: QuotientData) -> ConstructibleFunction:
    """Pull a coarse function back along the orbit projection (G-invariant)."""
    if fbar.complex != qd.coarse:
        raise ComplexMismatch("function does not live on the coarse complex")
    return ConstructibleFunction(
        qd.action.complex, {s: fbar(sb) for s, sb in qd.projection.items() if fbar(sb)})


@dataclass
class PIsoReport:
    rows: list
    cols: list
    matrix: list
    rank: int

    @property
    def size(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))

    @property
    def invertible(self) -> bool:
        return len(self.rows) == len(self.cols) == self.rank


def orbit_basis(G: GroupAction) -> list[CoinvariantClass]:
    """Classes of orbit indicators, one per simplex orbit."""
    return [class_of(ConstructibleFunction.indicator(G.complex, [orb[0]]), G) for orb in G.simplex_orbits]


def verify_p_iso(action: GroupAction, qd: QuotientData) -> PIsoReport:
    basis = orbit_basis(action)
    rows = list(qd.coarse.simplices)
    cols = [orb[0] for orb in action.simplex_orbits]
    matrix = []
    images = [pushforward_p(c, qd) for c in basis]
    for sb in rows:
        matrix.append([img(sb) for img in images])
    return PIsoReport(rows, cols, matrix, exact.rank(matrix))


@dataclass
class TransferReport:
    group_order: int
    free: bool
    diagonal: dict
    fiber_sum_diagonal: dict
    off_diagonal_zero: bool

    @property
    def invertible(self) -> bool:
        return self.off_diagonal_zero and all(d != 0 for d in self.diagonal.values())

    @property
    def is_norm(self) -> bool:
        """p_! after transfer is |G| times the identity."""
        return self.off_diagonal_zero and all(d == self.group_order for d in self.diagonal.values())


def verify_transfer(qd: QuotientData) -> TransferReport:
    """Matrix of p_! o class_of o transfer on the coarse simplex basis."""
    G = qd.action
    diag, fdiag = {}, {}
    off_zero = True
    for sb in qd.coarse:
        one = ConstructibleFunction.indicator(qd.coarse, [sb])
        c = class_of(transfer(one, qd), G)
        img = pushforward_p(c, qd)
        for other, v in img.values.items():
            if other != sb and v:
                off_zero = False
        diag[sb] = img(sb)
        fdiag[sb] = pushforward_fiber_sum(c, qd)(sb)
    return TransferReport(G.order, G.is_free(), diag, fdiag, off_zero)


def _subgroup_key(H: Iterable[Perm]) -> tuple:
    return tuple(sorted(g.key for g in H))


def isotropy_class(G: GroupAction, s: Simplex) -> tuple:
    """Canonical key for the conjugacy class of the stabilizer of ``s``."""
    H = G.stabilizer(s)
    return min(_subgroup_key(g * h * g.inverse() for h in H) for g in G.elements)


def simple_decomposition(h: ConstructibleFunction, action: GroupAction) -> list[tuple[Fraction, ConstructibleFunction]]:
    """Write ``h`` as a combination of indicators of isotropy-homogeneous sets."""
    if h.complex != action.complex:
        raise ComplexMismatch("function does not live on the action's complex")
    pieces = defaultdict(list)
    cache = {}
    for s, v in h.items():
        stab = _subgroup_key(action.stabilizer(s))
        if stab not in cache:
            cache[stab] = isotropy_class(action, s)
        pieces[(len(stab), cache[stab], v)].append(s)
    out = []
    for (_, _, v), simplices in sorted(pieces.items()):
        out.append((v, ConstructibleFunction.indicator(h.complex, simplices)))
    return out


class EquivariantChart:
    """An embedded chart whose group acts through exact orthogonal matrices."""

    def __init__(self, chart: EmbeddedChart, action: GroupAction,
                 generator_matrices: Sequence[Sequence[Sequence]]):
        if chart.complex != action.complex:
            raise ComplexMismatch("chart and action live on different complexes")
        if len(generator_matrices) != len(action.generators):
            raise IncompatibleAction(
                f"{len(generator_matrices)} matrices for {len(action.generators)} generators")
        n = chart.n
        mats = []
        for i, m in enumerate(generator_matrices):
            m = [[exact.frac(x) for x in row] for row in m]
            if len(m) != n or any(len(r) != n for r in m):
                raise IncompatibleAction(f"matrix {i} is not {n}x{n}")
            if exact.matmul(exact.transpose(m), m) != exact.identity(n):
                raise NonOrthogonalMatrix(f"matrix {i} is not orthogonal")
            mats.append(m)
        self.chart = chart
        self.action = action
        rho = {IDENTITY: exact.identity(n)}
        frontier = [IDENTITY]
        while frontier:
            nxt = []
            for a in frontier:
                for g, m in zip(action.generators, mats):
                    b = g * a
                    mb = exact.matmul(m, rho[a])
                    if b in rho:
                        if rho[b] != mb:
                            raise IncompatibleAction(f"element {dict(b.key)} gets two different matrices")
                    else:
                        rho[b] = mb
                        nxt.append(b)
            frontier = nxt
        for g, m in rho.items():
            for v in chart.complex.vertices:
                if exact.matvec(m, chart.coords[v]) != chart.coords[g(v)]:
                    raise IncompatibleAction(
                        f"matrix of {dict(g.key)} does not send vertex {v} to vertex {g(v)}")
        self.rho = rho
        self.generator_matrices = mats

    def subdivide(self, sub_action: GroupAction, sd: SubdivisionMap) -> "EquivariantChart":
        return EquivariantChart(subdivide_chart(self.chart, sd), sub_action, self.generator_matrices)


def equivariant_table_action(g: Perm, table: LagrangianCycleTable, eq: EquivariantChart) -> LagrangianCycleTable:
    """Push a cycle forward along g: (s, chamber of xi) goes to (g s, chamber of xi o rho_g^-1)."""
    chart = eq.chart
    if table.chart is not chart:
        raise ComplexMismatch("table does not live on the equivariant chart")
    rho = eq.rho[g]
    mult = {}
    for (s, eps), m in table.mult.items():
        ch = next(c for c in chart.chambers(s) if c.signs == eps)
        xi = exact.matvec(rho, ch.witness)  # rho orthogonal: xi o rho^-1 == rho xi
        gs = g.act(s)
        signs = chart.chamber_of(gs, xi)
        if signs is None or (gs, signs) not in chart.chamber_keys(gs):
            raise IncompatibleAction(f"chamber over {list(s)} has no image over {list(gs)}")
        mult[(gs, signs)] = m
    return LagrangianCycleTable(chart, mult, check=False)


def table_norm(table: LagrangianCycleTable, eq: EquivariantChart) -> LagrangianCycleTable:
    out = LagrangianCycleTable(table.chart)
    for g in eq.action.elements:
        out = out + equivariant_table_action(g, table, eq)
    return out


@dataclass
class OrbifoldIndexReport:
    cc_equivariant: bool
    zeta_invariant: bool
    norm_commutes: bool
    orbifold_integral: Fraction
    zeta: Fraction
    zeta_of_average: Fraction
    weighted_coarse: Optional[Fraction] = None

    @property
    def ok(self) -> bool:
        vals = {self.orbifold_integral, self.zeta, self.zeta_of_average}
        if self.weighted_coarse is not None:
            vals.add(self.weighted_coarse)
        return self.cc_equivariant and self.zeta_invariant and self.norm_commutes and len(vals) == 1


def orbifold_index_check(h: ConstructibleFunction, action: GroupAction, eq: EquivariantChart,
                         qd: Optional[QuotientData] = None, seed: int = 0) -> OrbifoldIndexReport:
    """Check that cc and the zero-section pairing descend to coinvariants and
    that the orbifold index formula holds for the class of ``h``."""
    if eq.action is not action:
        raise ComplexMismatch("equivariant chart carries a different action")
    chart = eq.chart
    table = cc(h, chart)
    zeta = intersect_zero_section(table, seed=seed)
    cc_ok = True
    zeta_ok = True
    for g in action.elements:
        moved = equivariant_table_action(g, table, eq)
        if cc(action.act_function(g, h), chart) != moved:
            cc_ok = False
        if intersect_zero_section(moved, seed=seed) != zeta:
            zeta_ok = False
    c = class_of(h, action)
    norm_ok = table_norm(table, eq) == cc(c.avg * action.order, chart)
    return OrbifoldIndexReport(
        cc_equivariant=cc_ok,
        zeta_invariant=zeta_ok,
        norm_commutes=norm_ok,
        orbifold_integral=orbifold_integral(c),
        zeta=zeta,
        zeta_of_average=intersect_zero_section(cc(c.avg, chart), seed=seed),
        weighted_coarse=coarse_weighted_integral(c, qd) if qd is not None else None,
    )
