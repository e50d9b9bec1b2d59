import random

import pytest
from hypothesis import given, settings, strategies as st

from eulercc import fixtures
from eulercc.complex import OpenSet
from eulercc.constructible import (ConstructibleFunction, euler_integral, is_compactly_supported_in,
                                   pullback_subdivision)
from eulercc.cosheaf import (NotACover, OpenCover, SubdivisionCapExceeded, localized_index_verify, mv_split,
                             verify_mv_exactness)
from helpers import random_complex, random_function


def _check_split(f, U, V, sp):
    eU, eV = sp.extended()
    assert is_compactly_supported_in(eU, sp.U) and is_compactly_supported_in(eV, sp.V)
    assert eU + eV == pullback_subdivision(f, sp.sd)
    assert euler_integral(eU) + euler_integral(eV) == euler_integral(f)
    return eU, eV


def test_circle_split():
    K = fixtures.complex_("circle")
    U, V = fixtures.cover("circle", K)
    f = ConstructibleFunction.constant(K)
    sp = mv_split(f, U, V)
    eU, eV = _check_split(f, U, V, sp)
    assert euler_integral(eU) + euler_integral(eV) == 0


def test_already_inside_the_overlap():
    K = fixtures.complex_("path")
    U, V = OpenSet.union_of_stars(K, [0, 1]), OpenSet.union_of_stars(K, [1, 2])
    f = ConstructibleFunction.indicator(K, [(1,)])
    sp = mv_split(f, U, V)
    assert sp.sd.is_identity
    assert sp.f_U == {(1,): 1} and sp.f_V == {}


def test_interval_needs_one_subdivision():
    K = fixtures.complex_("interval")
    U, V = fixtures.cover("interval", K)
    f = ConstructibleFunction.constant(K)
    sp = mv_split(f, U, V)
    assert len(sp.sd.parts) == 1
    eU, eV = _check_split(f, U, V, sp)
    assert euler_integral(eU) + euler_integral(eV) == 1


def test_not_a_cover():
    K = fixtures.complex_("path")
    with pytest.raises(NotACover):
        OpenCover(K, (K.star_open((0,)), K.star_open((2,))))
    with pytest.raises(NotACover):
        mv_split(ConstructibleFunction.constant(K), K.star_open((0,)), K.star_open((2,)))


def test_cap_is_enforced():
    K = fixtures.complex_("interval")
    U, V = fixtures.cover("interval", K)
    with pytest.raises(SubdivisionCapExceeded):
        mv_split(ConstructibleFunction.constant(K), U, V, cap=0)


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_random_covers_split(seed):
    rng = random.Random(seed)
    K = random_complex(rng, nverts=6)
    vs = list(K.vertices)
    cut = rng.randint(1, len(vs))
    rng.shuffle(vs)
    U = OpenSet.union_of_stars(K, vs[:cut])
    V = OpenSet.union_of_stars(K, vs[cut - 1:])
    f = random_function(K, rng)
    _check_split(f, U, V, mv_split(f, U, V))


@pytest.mark.parametrize("name", list(fixtures.COVERS))
def test_exactness_reports(name):
    K = fixtures.complex_(name)
    U, V = fixtures.cover(name, K)
    rep = verify_mv_exactness(K, U, V, trials=100, seed=3)
    assert rep.ok, rep.failures
    assert rep.reassembled == rep.integral_additive == 100


def test_adversarial_pairs_exist_on_the_circle():
    K = fixtures.complex_("circle")
    U, V = fixtures.cover("circle", K)
    rep = verify_mv_exactness(K, U, V, trials=1)
    assert rep.adversarial_total > 0 and rep.adversarial_rejected == rep.adversarial_total


def test_localized_index_on_interior_star():
    chart = fixtures.chart("disk")
    U = chart.complex.star_open((0,))
    rep = localized_index_verify(chart, U, trials=100, seed=1)
    assert rep.ok, rep.failures


def test_localized_index_with_cover_additivity():
    chart = fixtures.chart("disk")
    U, V = fixtures.cover("disk", chart.complex)
    rep = localized_index_verify(chart, U, trials=20, seed=2, V=V)
    assert rep.ok and rep.additive_checked == 20
