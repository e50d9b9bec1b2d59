"""Exact rational linear algebra and strict-feasibility kernel.

Everything here works on :class:`fractions.Fraction` entries; no floats.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Vector = tuple[Fraction, ...]


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact code paths")
    return Fraction(x)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [[frac(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {x : rows @ x = 0} in Q^ncols."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -m[r][fc]
        basis.append(tuple(x))
    return basis


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    cols = list(zip(*b))
    return [[dot(row, col) for col in cols] for row in a]


def matvec(a: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vector:
    return tuple(dot(row, x) for row in a)


def transpose(a: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    return [list(c) for c in zip(*a)]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _normalize(row: Sequence[Fraction], rhs: Fraction):
    """Scale a constraint row @ x >= rhs so its first nonzero coefficient is +-1."""
    lead = next((abs(x) for x in row if x != 0), None)
    if lead is None:
        return tuple(row), rhs
    return tuple(x / lead for x in row), rhs / lead


def _dedupe(cons):
    best = {}
    for row, rhs in cons:
        row, rhs = _normalize(row, rhs)
        if row not in best or rhs > best[row]:
            best[row] = rhs
    return list(best.items())


def solve_inequalities(rows: Sequence[Sequence], rhs: Sequence, n: Optional[int] = None) -> Optional[Vector]:
    """Find x with ``rows @ x >= rhs`` (componentwise) or return None.

    Fourier-Motzkin elimination with exact back-substitution. Fine for the
    handful of variables and constraints that occur in conormal chambers;
    exponential in general.
    """
    cons = [(tuple(frac(x) for x in r), frac(b)) for r, b in zip(rows, rhs)]
    if n is None:
        n = len(cons[0][0]) if cons else 0
    levels = []
    cur = _dedupe(cons)
    for k in reversed(range(n)):
        levels.append(cur)
        pos = [(r, b) for r, b in cur if r[k] > 0]
        neg = [(r, b) for r, b in cur if r[k] < 0]
        nxt = [(r, b) for r, b in cur if r[k] == 0]
        for rp, bp in pos:
            for rn, bn in neg:
                cp, cn = rp[k], -rn[k]
                row = tuple(cn * a + cp * c for a, c in zip(rp, rn))
                nxt.append((row, cn * bp + cp * bn))
        cur = _dedupe(nxt)
    # all variables eliminated: every constraint now reads 0 >= rhs
    if any(b > 0 for _, b in cur):
        return None
    x = [Fraction(0)] * n
    for k, level in zip(range(n), reversed(levels)):
        lo, hi = None, None
        for r, b in level:
            if r[k] == 0:
                continue
            rest = sum((r[j] * x[j] for j in range(k)), Fraction(0))
            bound = (b - rest) / r[k]
            if r[k] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is None and hi is None:
            val = Fraction(0)
        elif lo is None:
            val = min(Fraction(0), hi)
        elif hi is None:
            val = max(Fraction(0), lo)
        else:
            assert lo <= hi
            val = (lo + hi) / 2
        x[k] = val
    return tuple(x)


def strictly_feasible(forms: Sequence[Sequence], signs: Sequence[int], n: int) -> Optional[Vector]:
    """Find c with ``sign(form_i . c) == signs[i]`` strictly for all i.

    The system is homogeneous, so strict feasibility is equivalent to
    ``signs[i] * form_i . c >= 1`` after rescaling.
    """
    rows = [[s * frac(a) for a in f] for f, s in zip(forms, signs)]
    return solve_inequalities(rows, [1] * len(rows), n)
