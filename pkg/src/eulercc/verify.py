"""Seeded verification suites.

Each suite returns a JSON-ready dict with an ``ok`` flag.  Per-trial
randomness comes from ``random.Random(f"{seed}:{tag}:{i}")`` so results do not
depend on trial order or batching.
"""
from __future__ import annotations

import itertools
import random
from typing import Optional

from . import exact, fixtures
from .charts import EmbeddedChart, cc, cc_inverse, intersect_zero_section
from .complex import OpenSet, SimplicialComplex
from .constructible import ConstructibleFunction, euler_integral
from .cosheaf import localized_index_verify, random_function, verify_mv_exactness
from .formats import rat
from .morse import VertexOrder, morse_evaluate
from .orbifold import (EquivariantChart, GroupAction, class_of, coarse_weighted_integral,
                       orbifold_index_check, orbifold_integral, quotient, regularize, verify_p_iso,
                       verify_transfer)


def _rng(seed: int, tag: str, i: int) -> random.Random:
    return random.Random(f"{seed}:{tag}:{i}")


def index_suite(chart: EmbeddedChart, name: str, trials: int = 100, seed: int = 0,
                orders: int = 10) -> dict:
    """Euler integral = zero-section pairing of cc = Morse sums; cc is invertible."""
    K = chart.complex
    rows = []
    ok = True
    for i in range(trials):
        rng = _rng(seed, f"index:{name}", i)
        f = random_function(K, rng)
        table = cc(f, chart)
        a = euler_integral(f)
        z = intersect_zero_section(table, seed=rng.randrange(2**32))
        morse = {morse_evaluate(f, VertexOrder.random(K, rng)) for _ in range(orders)}
        back = cc_inverse(table)
        injective = (not table.is_zero()) or f.is_zero()
        row_ok = z == a and morse == {a} and back == f and injective
        ok &= row_ok
        rows.append({"trial": i, "integral": rat(a), "zeta": rat(z),
                     "morse": sorted(rat(m) for m in morse), "roundtrip": back == f, "ok": row_ok})
    return {"suite": "index", "chart": name, "trials": trials, "ok": ok, "results": rows}


def chambers_suite(chart: EmbeddedChart, name: str) -> dict:
    """Pruned chamber search against exhaustive sign-vector feasibility."""
    rows = []
    ok = True
    for s in chart.complex:
        chambers = chart.chambers(s)
        got = sorted(c.signs for c in chambers)
        basis = chart.conormal_basis(s)
        link = chart.complex.link_vertices(s)
        if not basis or not link:
            want = [()]
        else:
            x0 = chart.coords[s[0]]
            forms = [tuple(exact.dot(b, [p - q for p, q in zip(chart.coords[w], x0)]) for b in basis)
                     for w in link]
            want = sorted(eps for eps in itertools.product((1, -1), repeat=len(link))
                          if exact.strictly_feasible(forms, eps, len(basis)) is not None)
        witnesses_ok = all(chart.chamber_of(s, c.witness) == c.signs for c in chambers if c.signs)
        row_ok = got == want and witnesses_ok
        ok &= row_ok
        rows.append({"simplex": list(s), "chambers": len(got), "ok": row_ok})
    return {"suite": "chambers", "chart": name, "ok": ok, "results": rows}


def _regularized(G: GroupAction, eq: Optional[EquivariantChart] = None):
    K2, G2, sd = regularize(G.complex, G)
    eq2 = None
    if eq is not None:
        eq2 = eq if sd.is_identity else eq.subdivide(G2, sd)
        G2 = eq2.action
    return K2, G2, sd, eq2


def norm_suite(G: GroupAction, name: str, trials: int = 100, seed: int = 0) -> dict:
    """p_! invertibility, transfer composite, and the weighted coarse integral."""
    K2, G2, sd, _ = _regularized(G)
    qd = quotient(K2, G2)
    piso = verify_p_iso(G2, qd)
    tr = verify_transfer(qd)
    rows = []
    ok = piso.invertible and tr.invertible and tr.is_norm
    one = class_of(ConstructibleFunction.constant(K2), G2)
    one_vals = (orbifold_integral(one), coarse_weighted_integral(one, qd))
    ok &= one_vals[0] == one_vals[1]
    for i in range(trials):
        rng = _rng(seed, f"norm:{name}", i)
        c = class_of(random_function(K2, rng), G2)
        a, b = orbifold_integral(c), coarse_weighted_integral(c, qd)
        ok &= a == b
        rows.append({"trial": i, "orbifold": rat(a), "coarse": rat(b), "ok": a == b})
    return {
        "suite": "norm", "action": name, "group_order": G.order, "subdivisions": len(sd.parts),
        "coarse_f_vector": qd.coarse.f_vector(), "p_matrix_size": list(piso.size),
        "p_rank": piso.rank, "p_invertible": piso.invertible, "free": tr.free,
        "transfer_diagonal": sorted({rat(d) for d in tr.diagonal.values()}),
        "transfer_is_norm": tr.is_norm, "one_class": [rat(x) for x in one_vals],
        "ok": ok, "results": rows,
    }


def orbifold_index_suite(eq: EquivariantChart, name: str, trials: int = 50, seed: int = 0) -> dict:
    """Orbifold index formula on an equivariant chart, after regularization."""
    G = eq.action
    K2, G2, sd, eq2 = _regularized(G, eq)
    qd = quotient(K2, G2)
    rows = []
    ok = True
    for i in range(trials):
        rng = _rng(seed, f"orbifold:{name}", i)
        h = random_function(K2, rng)
        rep = orbifold_index_check(h, G2, eq2, qd, seed=rng.randrange(2**32))
        ok &= rep.ok
        rows.append({"trial": i, "integral_X": rat(rep.orbifold_integral),
                     "coarse_weighted": rat(rep.weighted_coarse), "zeta": rat(rep.zeta),
                     "ok": rep.ok})
    return {"suite": "orbifold-index", "action": name, "group_order": G.order,
            "subdivisions": len(sd.parts), "trials": trials, "ok": ok, "results": rows}


def cosheaf_suite(K: SimplicialComplex, U: OpenSet, V: OpenSet, name: str, trials: int = 100,
                  seed: int = 0, chart: Optional[EmbeddedChart] = None) -> dict:
    mv = verify_mv_exactness(K, U, V, trials, seed)
    doc = {"suite": "cosheaf", "complex": name, "trials": trials,
           "reassembled": mv.reassembled, "integral_additive": mv.integral_additive,
           "middle_exact": mv.middle_exact, "adversarial_rejected": mv.adversarial_rejected,
           "adversarial_total": mv.adversarial_total, "ok": mv.ok}
    if chart is not None:
        loc = localized_index_verify(chart, U, trials, seed, V=V)
        doc.update({"local_index_agree": loc.agree, "local_cc": loc.local_cc,
                    "zeta_additive": loc.additive})
        doc["ok"] = mv.ok and loc.ok
    return doc


def full_battery(trials: int = 100, seed: int = 0) -> dict:
    suites = []
    for name in fixtures.INDEX_CHARTS:
        suites.append(index_suite(fixtures.chart(name), name, trials, seed))
    for name in fixtures.chart_names():
        suites.append(chambers_suite(fixtures.chart(name), name))
    for name in fixtures.COVERS:
        K = fixtures.complex_(name)
        U, V = fixtures.cover(name, K)
        ch = fixtures.chart(name) if name in fixtures.chart_names() else None
        if ch is not None:
            U, V = fixtures.cover(name, ch.complex)
        suites.append(cosheaf_suite(K if ch is None else ch.complex, U, V, name, trials, seed, ch))
    for name in fixtures.ORBIFOLD_ACTIONS + ("edge_swap", "rotation"):
        suites.append(norm_suite(fixtures.action(name), name, trials, seed))
    for name in fixtures.ORBIFOLD_ACTIONS + ("edge_swap",):
        suites.append(orbifold_index_suite(fixtures.equivariant_chart(name), name, max(1, trials // 2), seed))
    return {"suite": "all", "ok": all(s["ok"] for s in suites), "suites": suites}
