"""PL stratified Morse theory with a linear height function.

A generic height is an injective weight on vertices, extended linearly.  The
local index at a vertex only sees the upper half-link; summing indices
reproduces the Euler integral.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .complex import SimplicialComplex
from .constructible import ConstructibleFunction


class NonInjectiveOrder(ValueError):
    pass


class VertexOrder:
    def __init__(self, weights: Mapping[int, Fraction]):
        self.weights = {int(v): Fraction(w) for v, w in weights.items()}
        seen = {}
        for v, w in self.weights.items():
            if w in seen:
                raise NonInjectiveOrder(f"vertices {seen[w]} and {v} share height {w}")
            seen[w] = v

    def __call__(self, v: int) -> Fraction:
        return self.weights[v]

    @classmethod
    def random(cls, K: SimplicialComplex, rng: random.Random) -> "VertexOrder":
        verts = list(K.vertices)
        heights = rng.sample(range(10 * len(verts) + 10), len(verts))
        return cls({v: Fraction(h, 7) for v, h in zip(verts, heights)})

    def cover(self, K: SimplicialComplex) -> None:
        missing = [v for v in K.vertices if v not in self.weights]
        if missing:
            raise NonInjectiveOrder(f"no height for vertices {missing}")


def upper_link(K: SimplicialComplex, v: int, u: VertexOrder) -> list[tuple[int, ...]]:
    h = u(v)
    return [t for t in K.link_simplices((v,)) if all(u(w) > h for w in t)]


def local_index(f: ConstructibleFunction, v: int, u: VertexOrder) -> Fraction:
    K = f.complex
    u.cover(K)
    idx = f((v,))
    for t in upper_link(K, v, u):
        sign = -1 if len(t) % 2 == 0 else 1
        idx -= sign * f(tuple(sorted(t + (v,))))
    return idx


def morse_evaluate(f: ConstructibleFunction, u: VertexOrder) -> Fraction:
    """Sum of local indices; equals the Euler integral for every generic ``u``."""
    return sum((local_index(f, v, u) for v in f.complex.vertices), Fraction(0))
