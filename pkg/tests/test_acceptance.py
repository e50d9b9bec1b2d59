"""Acceptance gate: one test per criterion, all exact (tolerance zero)."""
import random
import subprocess
import sys
import time

from eulercc import exact, fixtures
from eulercc.charts import cc, cc_inverse, intersect_zero_section
from eulercc.constructible import ConstructibleFunction, euler_integral
from eulercc.cosheaf import random_function, verify_mv_exactness
from eulercc.morse import VertexOrder, morse_evaluate
from eulercc.orbifold import (class_of, coarse_weighted_integral, orbifold_index_check, orbifold_integral,
                              pushforward_p, quotient, regularize, transfer, verify_p_iso, verify_transfer)
from helpers import in_normal_cone

SEED = 20240607


def _regular(name):
    G = fixtures.action(name)
    K2, G2, sd = regularize(G.complex, G)
    return K2, G2, sd, quotient(K2, G2)


def test_1_index_formula(report):
    start = time.perf_counter()
    bad = []
    for name in fixtures.INDEX_CHARTS:
        chart = fixtures.chart(name)
        K = chart.complex
        for i in range(100):
            rng = random.Random(f"{SEED}:1:{name}:{i}")
            f = random_function(K, rng)
            a = euler_integral(f)
            z = intersect_zero_section(cc(f, chart), seed=rng.randrange(2**32))
            ms = [morse_evaluate(f, VertexOrder.random(K, rng)) for _ in range(10)]
            if not (a == z and all(m == a for m in ms)):
                bad.append((name, i))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    report(1, "integral = zero-section pairing = Morse sum", ok,
           f"(500 functions, 5000 orders, {len(bad)} mismatches, under 60 s: {elapsed < 60})")
    assert ok, bad


def test_2_cc_isomorphism(report):
    bad = []
    full_rank = True
    for name in fixtures.INDEX_CHARTS:
        chart = fixtures.chart(name)
        K = chart.complex
        for i in range(100):
            f = random_function(K, random.Random(f"{SEED}:1:{name}:{i}"))
            t = cc(f, chart)
            if cc_inverse(t) != f or (t.is_zero() and not f.is_zero()):
                bad.append((name, i))
        # cc is injective: its matrix on simplex indicators has full column rank
        keys = [c.key for c in chart.all_chambers]
        cols = [cc(ConstructibleFunction.indicator(K, [s]), chart) for s in K]
        matrix = [[t(*k) for t in cols] for k in keys]
        full_rank &= exact.rank(matrix) == len(K)
    ok = not bad and full_rank
    report(2, "cc_inverse o cc = id and cc injective", ok, f"(round-trip failures {len(bad)}, full rank {full_rank})")
    assert ok


def test_3_normal_cycles(report):
    checked = 0
    bad = []
    for name in fixtures.CONVEX_CHARTS:
        chart = fixtures.chart(name)
        table = cc(ConstructibleFunction.constant(chart.complex), chart)
        for c in chart.all_chambers:
            want = 1 if in_normal_cone(chart, chart.complex.vertices, c.simplex, c.witness) else 0
            checked += 1
            if table(c.simplex, c.signs) != want:
                bad.append((name, c.key))
    ok = not bad
    report(3, "closed convex polytopes have their normal cycle", ok, f"({checked} chambers)")
    assert ok, bad


def test_4_classical_euler_characteristics(report):
    disk = fixtures.chart("disk")
    d = intersect_zero_section(cc(ConstructibleFunction.constant(disk.complex), disk), seed=SEED)
    octa, circ = fixtures.complex_("octahedron"), fixtures.complex_("circle")
    rng = random.Random(SEED)
    o = {morse_evaluate(ConstructibleFunction.constant(octa), VertexOrder.random(octa, rng)) for _ in range(10)}
    c = {morse_evaluate(ConstructibleFunction.constant(circ), VertexOrder.random(circ, rng)) for _ in range(10)}
    ok = d == 1 and o == {2} and c == {0}
    report(4, "disk 1, sphere 2, circle 0", ok, f"(disk {d}, octahedron {sorted(map(str, o))}, circle {sorted(map(str, c))})")
    assert ok


def test_5_cosheaf_exactness(report):
    details = []
    ok = True
    for name in fixtures.COVERS:
        K = fixtures.complex_(name)
        U, V = fixtures.cover(name, K)
        rep = verify_mv_exactness(K, U, V, trials=100, seed=SEED)
        ok &= rep.ok and rep.trials == 100 and rep.integral_additive == 100
        details.append(f"{name} {rep.reassembled}/{rep.trials}")
    report(5, "Mayer-Vietoris split, reassembly and middle exactness", ok, f"({', '.join(details)})")
    assert ok


def test_6_norm_invertible(report):
    sizes = []
    ok = True
    for name in ("swap", "edge_swap", "hexagon_z2", "square_d4"):
        _, G2, _, qd = _regular(name)
        rep = verify_p_iso(G2, qd)
        ok &= rep.invertible
        sizes.append(f"{name} {rep.size[0]}x{rep.size[1]} rank {rep.rank}")
    report(6, "p_! is invertible over Q", ok, f"({'; '.join(sizes)})")
    assert ok


def test_7_weighted_coarse_integral(report):
    ok = True
    count = 0
    for name in ("swap", "edge_swap", "hexagon_z2", "square_d4", "rotation"):
        K2, G2, _, qd = _regular(name)
        for i in range(100):
            c = class_of(random_function(K2, random.Random(f"{SEED}:7:{name}:{i}")), G2)
            ok &= orbifold_integral(c) == coarse_weighted_integral(c, qd)
            count += 1
    K2, G2, _, qd = _regular("edge_swap")
    one = class_of(ConstructibleFunction.constant(K2), G2)
    hand = (orbifold_integral(one), coarse_weighted_integral(one, qd))
    ok &= hand == (1, 1)
    report(7, "orbifold integral = integral of p_!(f) times iota", ok,
           f"({count} classes; [1] on interval/Z2 gives {hand[0]} and {hand[1]})")
    assert ok


def test_8_orbifold_index_formula(report):
    ok = True
    trials = 0
    for name in ("swap", "edge_swap", "hexagon_z2", "square_d4"):
        eq = fixtures.equivariant_chart(name)
        K2, G2, sd = regularize(eq.action.complex, eq.action)
        eq2 = eq if sd.is_identity else eq.subdivide(G2, sd)
        qd = quotient(K2, eq2.action)
        for i in range(50):
            rng = random.Random(f"{SEED}:8:{name}:{i}")
            rep = orbifold_index_check(random_function(K2, rng), eq2.action, eq2, qd, seed=rng.randrange(2**32))
            ok &= rep.ok
            trials += 1
    report(8, "zeta o cc is G-invariant and equals the orbifold integral", ok, f"({trials} trials)")
    assert ok


def test_9_transfer_is_norm(report):
    ok = True
    notes = []
    for name in ("swap", "edge_swap", "hexagon_z2", "square_d4", "rotation"):
        K2, G2, _, qd = _regular(name)
        rep = verify_transfer(qd)
        ok &= rep.invertible
        if rep.free:
            ok &= rep.is_norm
        for i in range(20):
            fbar = random_function(qd.coarse, random.Random(f"{SEED}:9:{name}:{i}"))
            back = pushforward_p(class_of(transfer(fbar, qd), G2), qd)
            ok &= all(back(s) == rep.diagonal[s] * fbar(s) for s in qd.coarse)
        diag = sorted(set(rep.diagonal.values()))
        notes.append(f"{name} |G|={G2.order} free={rep.free} diagonal={[str(x) for x in diag]}")
    report(9, "p_! o transfer is the certified diagonal (|G| when free)", ok, f"({'; '.join(notes)})")
    assert ok


def test_10_battery_deterministic_and_fast(report, tmp_path):
    outs = []
    elapsed = []
    for k in range(2):
        out = tmp_path / f"battery{k}.json"
        t0 = time.perf_counter()
        r = subprocess.run([sys.executable, "-m", "eulercc", "verify", "all", "--seed", "7",
                            "--trials", "100", "--out", str(out)], capture_output=True, text=True)
        elapsed.append(time.perf_counter() - t0)
        assert r.returncode == 0, r.stdout + r.stderr
        outs.append(out.read_bytes())
    ok = outs[0] == outs[1] and max(elapsed) < 300
    report(10, "full verify battery is byte-reproducible and under 5 minutes", ok,
           f"(identical: {outs[0] == outs[1]}, slowest run {max(elapsed):.0f} s)")
    assert ok
