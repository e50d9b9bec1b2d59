"""Two-chart covers, Mayer-Vietoris splitting and localized index checks."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .charts import EmbeddedChart, cc, intersect_zero_section, subdivide_chart
from .complex import (ComplexError, OpenSet, Simplex, SimplicialComplex, SubdivisionMap,
                      barycentric_subdivision)
from .constructible import (ConstructibleFunction, SupportNotRelativelyCompact, euler_integral,
                            extend_by_zero, is_compactly_supported_in, pullback_subdivision)
from .morse import VertexOrder, morse_evaluate

SUBDIVISION_CAP = 8


class NotACover(ComplexError):
    pass


class SubdivisionCapExceeded(ComplexError):
    pass


@dataclass(frozen=True)
class OpenCover:
    complex: SimplicialComplex
    charts: tuple[OpenSet, ...]

    def __post_init__(self):
        covered = set()
        for U in self.charts:
            if U.complex != self.complex:
                raise NotACover("chart lives on a different complex")
            covered |= U.members
        missing = [s for s in self.complex if s not in covered]
        if missing:
            raise NotACover(f"simplex {list(missing[0])} is in no chart")


@dataclass
class Split:
    f_U: dict
    f_V: dict
    sd: SubdivisionMap
    U: OpenSet
    V: OpenSet

    def extended(self) -> tuple[ConstructibleFunction, ConstructibleFunction]:
        return extend_by_zero(self.f_U, self.U), extend_by_zero(self.f_V, self.V)


def _splittable(f: ConstructibleFunction, U: OpenSet, V: OpenSet) -> bool:
    return all(U.closure_inside(s) or V.closure_inside(s) for s in f.support)


def mv_split(f: ConstructibleFunction, U: OpenSet, V: OpenSet, cap: int = SUBDIVISION_CAP) -> Split:
    """Write ``f`` (after subdivision) as f_U + f_V with compact supports in U and V.

    Each support simplex whose closure fits in U goes to U, otherwise to V.
    """
    OpenCover(f.complex, (U, V))
    sd = SubdivisionMap.identity(f.complex)
    for rounds in range(cap + 1):
        if _splittable(f, U, V):
            f_U, f_V = {}, {}
            for s, v in f.items():
                (f_U if U.closure_inside(s) else f_V)[s] = v
            return Split(f_U, f_V, sd, U, V)
        if rounds == cap:
            break
        step = barycentric_subdivision(f.complex)
        f = pullback_subdivision(f, step)
        U, V = step.open_set(U), step.open_set(V)
        sd = step if sd.is_identity else sd.then(step)
    raise SubdivisionCapExceeded(f"support still straddles the cover after {cap} subdivisions")


@dataclass
class MVReport:
    trials: int = 0
    reassembled: int = 0
    integral_additive: int = 0
    middle_checked: int = 0
    middle_exact: int = 0
    adversarial_rejected: int = 0
    adversarial_total: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.reassembled == self.trials and self.integral_additive == self.trials
                and self.middle_exact == self.middle_checked
                and self.adversarial_rejected == self.adversarial_total)


def random_function(K: SimplicialComplex, rng: random.Random, simplices: Optional[Sequence[Simplex]] = None,
                    density: float = 0.6, span: int = 5) -> ConstructibleFunction:
    pool = list(K.simplices if simplices is None else simplices)
    vals = {}
    for s in pool:
        if rng.random() < density:
            vals[s] = Fraction(rng.randint(-span, span), rng.choice((1, 1, 1, 2, 3)))
    return ConstructibleFunction(K, vals)


def compact_pool(U: OpenSet) -> list[Simplex]:
    """Simplices of U whose closure stays in U (where Fun_c(U) lives)."""
    return [s for s in U.sorted() if U.closure_inside(s)]


def verify_mv_exactness(K: SimplicialComplex, U: OpenSet, V: OpenSet, trials: int = 100,
                        seed: int = 0) -> MVReport:
    OpenCover(K, (U, V))
    rep = MVReport()
    W = U & V
    for i in range(trials):
        rng = random.Random(f"{seed}:mv:{i}")
        f = random_function(K, rng)
        sp = mv_split(f, U, V)
        eU, eV = sp.extended()
        rep.trials += 1
        refined = pullback_subdivision(f, sp.sd)
        if eU + eV == refined:
            rep.reassembled += 1
        else:
            rep.failures.append(("reassembly", i))
        if euler_integral(eU) + euler_integral(eV) == euler_integral(f):
            rep.integral_additive += 1
        else:
            rep.failures.append(("integral", i))
        # middle exactness: a pair (g, g) with g in both Fun_c(U) and Fun_c(V)
        g = random_function(K, rng, compact_pool(W))
        rep.middle_checked += 1
        if (is_compactly_supported_in(g, U) and is_compactly_supported_in(g, V)
                and all(W.closure_inside(s) for s in g.support)
                and extend_by_zero(g.values, W) == g):
            rep.middle_exact += 1
        else:
            rep.failures.append(("middle", i))
    # adversarial: supports in U and V but with a face leaving U cap V
    for s in W.sorted():
        if W.closure_inside(s):
            continue
        rep.adversarial_total += 1
        g = ConstructibleFunction.indicator(K, [s])
        in_u = is_compactly_supported_in(g, U)
        in_v = is_compactly_supported_in(g, V)
        try:
            extend_by_zero(g.values, W)
            accepted = True
        except SupportNotRelativelyCompact:
            accepted = False
        # the pair (g, g) would need g in both Fun_c(U) and Fun_c(V); one must fail
        if not accepted and not (in_u and in_v):
            rep.adversarial_rejected += 1
        else:
            rep.failures.append(("adversarial", s))
    return rep


@dataclass
class LocalIndexReport:
    trials: int = 0
    agree: int = 0
    local_cc: int = 0
    additive: int = 0
    additive_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.agree == self.trials and self.local_cc == self.trials
                and self.additive == self.additive_checked)


def localized_index_verify(chart: EmbeddedChart, U: OpenSet, trials: int = 100, seed: int = 0,
                           V: Optional[OpenSet] = None) -> LocalIndexReport:
    """Index formula for functions compactly supported in ``U``.

    Compares the Euler integral, a Morse sum and the zero-section pairing of
    the characteristic cycle; checks that cc computed inside ``U`` agrees with
    cc of the extension by zero.  When a second open set ``V`` covering the
    chart together with ``U`` is given, also checks that the zero-section
    pairing is additive across Mayer-Vietoris pieces of random global functions.
    """
    K = chart.complex
    pool = compact_pool(U)
    rep = LocalIndexReport()
    for i in range(trials):
        rng = random.Random(f"{seed}:local:{i}")
        f = extend_by_zero(random_function(K, rng, pool).values, U)
        u = VertexOrder.random(K, rng)
        table = cc(f, chart)
        a = euler_integral(f)
        b = morse_evaluate(f, u)
        c = intersect_zero_section(table, seed=rng.randrange(2**32))
        rep.trials += 1
        if a == b == c:
            rep.agree += 1
        else:
            rep.failures.append(("index", i, a, b, c))
        if cc(f, chart, within=U) == table:
            rep.local_cc += 1
        else:
            rep.failures.append(("local-cc", i))
        if V is not None:
            rep.additive_checked += 1
            g = random_function(K, rng)
            sp = mv_split(g, U, V)
            fine = subdivide_chart(chart, sp.sd)
            eU, eV = sp.extended()
            whole = intersect_zero_section(cc(pullback_subdivision(g, sp.sd), fine))
            parts = intersect_zero_section(cc(eU, fine)) + intersect_zero_section(cc(eV, fine))
            if whole == parts == euler_integral(g):
                rep.additive += 1
            else:
                rep.failures.append(("additivity", i))
    return rep
