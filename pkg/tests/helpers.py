"""Random inputs and brute-force oracles shared by the tests."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from eulercc.charts import EmbeddedChart
from eulercc.complex import SimplicialComplex
from eulercc.constructible import ConstructibleFunction


def random_complex(rng: random.Random, nverts: int = 7, max_dim: int = 2) -> SimplicialComplex:
    verts = list(range(nverts))
    maximal = []
    for k in range(1, max_dim + 2):
        for s in itertools.combinations(verts, k):
            if rng.random() < {1: 0.3, 2: 0.25, 3: 0.15, 4: 0.05}[k]:
                maximal.append(s)
    if not maximal:
        maximal = [(0,)]
    return SimplicialComplex.from_maximal(maximal)


def random_function(K, rng: random.Random, density=0.6) -> ConstructibleFunction:
    vals = {}
    for s in K:
        if rng.random() < density:
            vals[s] = Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3)))
    return ConstructibleFunction(K, vals)


def grid_chart(rng: random.Random, size: int = 3, keep: float = 0.7) -> EmbeddedChart:
    """Random subcomplex of a triangulated size x size grid in the plane."""
    vid = {(i, j): i * size + j for i in range(size) for j in range(size)}
    tris = []
    for i in range(size - 1):
        for j in range(size - 1):
            a, b, c, d = vid[i, j], vid[i + 1, j], vid[i + 1, j + 1], vid[i, j + 1]
            if rng.random() < 0.5:
                pair = [(a, b, c), (a, c, d)]
            else:
                pair = [(a, b, d), (b, c, d)]
            for t in pair:
                if rng.random() < keep:
                    tris.append(t)
                elif rng.random() < 0.5:
                    tris.append(t[:2])
    if not tris:
        tris = [(vid[0, 0], vid[1, 0])]
    K = SimplicialComplex.from_maximal(tris)
    coords = {v: (Fraction(i), Fraction(j)) for (i, j), v in vid.items() if v in K.vertices}
    return EmbeddedChart(K, 2, coords)


def brute_flags(K: SimplicialComplex) -> list[tuple]:
    """All nonempty chains of simplices, by checking every subset up to dim+1."""
    simplices = list(K)
    out = []
    for k in range(1, K.dim + 2):
        for combo in itertools.combinations(simplices, k):
            chain = sorted(combo, key=len)
            if all(set(chain[i]) < set(chain[i + 1]) for i in range(len(chain) - 1)):
                out.append(tuple(chain))
    return out


def lp_strictly_feasible(forms, signs) -> bool:
    """Independent floating-point oracle: maximise the margin t of sign_i a_i.c >= t."""
    forms = [[float(x) for x in f] for f in forms]
    k = len(forms[0])
    # variables c (k), t; minimise -t
    A = [[-s * a for a in f] + [1.0] for f, s in zip(forms, signs)]
    res = linprog(c=[0.0] * k + [-1.0], A_ub=np.array(A), b_ub=np.zeros(len(A)),
                  bounds=[(-1, 1)] * k + [(None, 1)], method="highs")
    return res.status == 0 and -res.fun > 1e-9


def in_normal_cone(chart: EmbeddedChart, polytope_vertices, s, xi) -> bool:
    """xi . (y - x) <= 0 for every polytope vertex y, x the barycenter of s."""
    x = chart.barycenter(s)
    return all(sum(a * (b - c) for a, b, c in zip(xi, chart.coords[y], x)) <= 0 for y in polytope_vertices)


def betti_euler(simplices) -> int:
    """Euler characteristic of a closed complex from ranks of boundary matrices."""
    by_dim: dict[int, list] = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(tuple(s))
    top = max(by_dim, default=-1)
    ranks = {}
    for k in range(1, top + 1):
        rows = {s: i for i, s in enumerate(by_dim[k - 1])}
        M = np.zeros((len(rows), len(by_dim[k])))
        for j, s in enumerate(by_dim[k]):
            for i in range(len(s)):
                M[rows[s[:i] + s[i + 1:]], j] = (-1) ** i
        ranks[k] = np.linalg.matrix_rank(M)
    chi = 0
    for k in range(top + 1):
        beta = len(by_dim[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        chi += (-1) ** k * beta
    return chi
