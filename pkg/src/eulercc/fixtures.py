"""Named complexes, charts, actions and covers used by the CLI and the test-suite."""
from __future__ import annotations

from fractions import Fraction

from .charts import EmbeddedChart
from .complex import OpenSet, SimplicialComplex
from .orbifold import EquivariantChart, GroupAction

F = Fraction

# (maximal simplices, coords or None)
_COMPLEXES = {
    "interval": ([(0, 1)], {0: (-1,), 1: (1,)}),
    "path": ([(0, 1), (1, 2)], {0: (-1,), 1: (0,), 2: (1,)}),
    "circle": ([(0, 1), (1, 2), (0, 2)], None),
    "triangle": ([(0, 1, 2)], {0: (0, 0), 1: (1, 0), 2: (0, 1)}),
    "square": ([(0, 1, 4), (1, 2, 4), (2, 3, 4), (0, 3, 4)],
               {0: (1, 1), 1: (-1, 1), 2: (-1, -1), 3: (1, -1), 4: (0, 0)}),
    "square2": ([(0, 1, 2), (0, 2, 3)], {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}),
    "disk": ([(0, i, i % 6 + 1) for i in range(1, 7)],
             {0: (0, 0), 1: (2, 0), 2: (1, 2), 3: (-1, 2), 4: (-2, 0), 5: (-1, -2), 6: (1, -2)}),
    "hexagon": ([(i, (i + 1) % 6) for i in range(6)],
                {0: (2, 0), 1: (1, 2), 2: (-1, 2), 3: (-2, 0), 4: (-1, -2), 5: (1, -2)}),
    "octahedron": ([(a, b, c) for a in (1, 2) for b in (3, 4) for c in (5, 6)], None),
    "tetrahedron": ([(0, 1, 2, 3)], {0: (0, 0, 0), 1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}),
    "octaball": ([(0, a, b, c) for a in (1, 2) for b in (3, 4) for c in (5, 6)],
                 {0: (0, 0, 0), 1: (1, 0, 0), 2: (-1, 0, 0), 3: (0, 1, 0), 4: (0, -1, 0),
                  5: (0, 0, 1), 6: (0, 0, -1)}),
    "bowtie": ([(0, 1, 2), (0, 3, 4)], None),
}

# name -> (complex, generators, matrices or None)
_ACTIONS = {
    "swap": ("path", [{0: 2, 2: 0}], [[[-1]]]),
    "edge_swap": ("interval", [{0: 1, 1: 0}], [[[-1]]]),
    "hexagon_z2": ("hexagon", [{i: (i + 3) % 6 for i in range(6)}], [[[-1, 0], [0, -1]]]),
    "rotation": ("circle", [{0: 1, 1: 2, 2: 0}], None),
    "square_d4": ("square", [{0: 1, 1: 2, 2: 3, 3: 0}, {0: 3, 3: 0, 1: 2, 2: 1}],
                  [[[0, -1], [1, 0]], [[1, 0], [0, -1]]]),
    "trivial_path": ("path", [], []),
}

# two-chart covers: complex -> (vertex stars forming U, vertex stars forming V)
COVERS = {
    "circle": ((0, 1), (1, 2)),
    "interval": ((0,), (1,)),
    "disk": ((0, 1, 2, 3), (0, 4, 5, 6)),
}

INDEX_CHARTS = ("triangle", "square", "disk", "tetrahedron", "octaball")
CONVEX_CHARTS = ("triangle", "square", "tetrahedron")
ORBIFOLD_ACTIONS = ("swap", "hexagon_z2", "square_d4")


def complex_names():
    return list(_COMPLEXES)


def action_names():
    return list(_ACTIONS)


def complex_(name: str) -> SimplicialComplex:
    return SimplicialComplex.from_maximal(_COMPLEXES[name][0])


def chart(name: str) -> EmbeddedChart:
    maximal, coords = _COMPLEXES[name]
    if coords is None:
        raise KeyError(f"fixture {name!r} has no embedding")
    K = complex_(name)
    return EmbeddedChart(K, len(next(iter(coords.values()))), coords)


def chart_names():
    return [n for n, (_, c) in _COMPLEXES.items() if c is not None]


def action(name: str, K: SimplicialComplex = None) -> GroupAction:
    cname, gens, _ = _ACTIONS[name]
    return GroupAction(K if K is not None else complex_(cname), gens)


def action_complex(name: str) -> str:
    return _ACTIONS[name][0]


def equivariant_chart(name: str) -> EquivariantChart:
    cname, gens, mats = _ACTIONS[name]
    if mats is None:
        raise KeyError(f"action {name!r} has no matrices")
    ch = chart(cname)
    return EquivariantChart(ch, GroupAction(ch.complex, gens), mats)


def cover(name: str, K: SimplicialComplex = None) -> tuple[OpenSet, OpenSet]:
    K = K if K is not None else complex_(name)
    u, v = COVERS[name]
    return OpenSet.union_of_stars(K, u), OpenSet.union_of_stars(K, v)
