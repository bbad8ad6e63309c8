import random
from fractions import Fraction as F

import pytest

from isoflat.homology import apply_matrix, make_model, random_modular_element
from isoflat.numbers import ComplexExact, QuadExt
from isoflat.period import (
    PeriodHom,
    PreconditionError,
    UnsupportedCase,
    classify_leaf_closure,
    discrete_factors,
    haupt_check,
    image_closure,
    in_orbit_closure,
    normalize,
    sphere_form,
    subgroup_closure,
    v_invariant,
    volume,
)

from conftest import SQRT2, q
from oracles import numeric_closure_tag


def c(re=0, im=0):
    re = re if isinstance(re, QuadExt) else q(re)
    im = im if isinstance(im, QuadExt) else q(im)
    return ComplexExact(re, im)


ONE, I = c(1), c(0, 1)


def test_eval_examples(m13):
    p = PeriodHom.from_labels(m13, d=2, A=SQRT2 * F(1, 4), B=q(F(1, 4)), pi1=-1, pi2=-2)
    assert p.eval(m13.zero()) == c()
    assert p.eval(m13.peripheral(3)) == c(3)
    assert p.eval(m13.vec(A=2, B=-1)) == c(q(F(-1, 4), F(1, 2)))


def test_period_json_round_trip(wp):
    assert PeriodHom.from_json(wp.to_json()) == wp


def test_compose_with_modular_element(wp):
    m = wp.model
    T = random_modular_element(m, 3)
    pt = wp.compose(T)
    for x in [m.vec(A=1), m.vec(B=2, pi1=1)]:
        assert pt.eval(x) == wp.eval(apply_matrix(T, x))
    assert pt.peripheral_values() == wp.peripheral_values()


def test_image_closure_examples():
    m2 = make_model((1, 1))
    m3 = make_model((1, 2))
    assert image_closure(PeriodHom(m2, [c(), c()])).tag == "Zero"
    lat = image_closure(PeriodHom(m2, [ONE, I]))
    assert lat.tag == "Lattice" and set(lat.generators) == {ONE, I}
    dl = image_closure(PeriodHom(m2, [ONE, c(SQRT2)]))
    assert dl.tag == "DenseLine" and dl.direction == ONE
    lpd = image_closure(PeriodHom(m3, [ONE, I, c(SQRT2)]))
    assert lpd.tag == "LinePlusDiscrete" and lpd.direction == ONE and lpd.step == 1


@pytest.mark.parametrize(
    "gens,tag",
    [
        ([c(2), c(3)], "Cyclic"),
        ([c(F(1, 2), F(1, 2)), c(1, 1)], "Cyclic"),
        ([ONE, c(F(1, 3)), I], "Lattice"),
        ([c(SQRT2), c(q(1, 1))], "DenseLine"),
        ([ONE, c(0, SQRT2), c(0, 1)], "LinePlusDiscrete"),
        ([ONE, I, c(SQRT2, SQRT2)], "LinePlusDiscrete"),
        ([ONE, c(SQRT2), I, c(F(1, 3), SQRT2)], "Plane"),
    ],
)
def test_closure_against_numeric_oracle(gens, tag):
    assert subgroup_closure(gens, 2).tag == tag
    assert numeric_closure_tag(gens) == tag


def test_closure_contains():
    cl = subgroup_closure([ONE, I, c(SQRT2)], 2)
    assert cl.contains(c(F(1, 7), 3))
    assert not cl.contains(c(0, F(1, 2)))


def test_discrete_factor_examples():
    (f,) = discrete_factors([ONE, I, c(SQRT2)])
    assert (f.alpha, f.beta, f.delta) == (0, 1, 1)
    (f,) = discrete_factors([ONE, c(SQRT2)])
    assert (f.alpha, f.beta) == (0, 1) and f.delta == 0 and f.degenerate
    fs = discrete_factors([ONE, I])
    assert {(f.alpha, f.beta, f.delta) for f in fs} == {(1, 0, 1), (0, 1, 1)}
    assert discrete_factors([ONE, I, c(SQRT2), c(0, SQRT2)]) == []


def test_volume_examples():
    assert volume([ONE, I]) == 1
    assert volume([ONE, ONE]) == 0
    assert volume([ONE, I, ONE, c(0, 2)]) == 3


def test_haupt_examples():
    r = haupt_check([ONE, I])
    assert r.passes and r.volume == 1
    r = haupt_check([ONE, I, ONE, c(0, 2)])
    assert r.passes and r.degree == 3
    r = haupt_check([ONE, I, c(), c()])
    assert not r.passes and r.degree == 1 and r.volume == 1


def test_v_invariant_example():
    m = make_model((1, 2))
    p = PeriodHom(m, [c(F(1, 2), 1), c(F(1, 3)), ONE])
    assert v_invariant(p) == F(2, 3)


def test_v_invariant_preconditions():
    m = make_model((1, 2))
    with pytest.raises(PreconditionError, match="p\\(Pi\\) = Z"):
        v_invariant(PeriodHom(m, [c(F(1, 2), 1), c(F(1, 3)), c(2)]))
    with pytest.raises(PreconditionError, match="degenerate"):
        v_invariant(PeriodHom(m, [c(F(1, 2)), c(F(1, 3)), ONE]))


def test_v_invariant_section_independent():
    m = make_model((1, 2))
    p = PeriodHom(m, [c(F(1, 2), 1), c(SQRT2 * F(1, 3)), ONE])
    base = v_invariant(p)
    sec = [m.vec(A=1, pi1=3), m.vec(B=1, pi1=-2)]
    assert v_invariant(p, section=sec) == base


def test_in_orbit_closure():
    m = make_model((1, 2))
    p = PeriodHom(m, [c(F(1, 2), 1), c(SQRT2 * F(1, 3)), ONE])
    assert in_orbit_closure(p, p)
    assert in_orbit_closure(p, p.compose(random_modular_element(m, 5)))
    m13 = make_model((1, 3))
    dense = PeriodHom(m13, [c(SQRT2), c(0, SQRT2), ONE, I])
    assert image_closure(dense).tag == "Plane"
    assert in_orbit_closure(dense, PeriodHom(m13, [c(7, 2), c(F(1, 5)), ONE, I]))
    # same closure, different V
    other = PeriodHom(m, [c(F(1, 2), 1), c(SQRT2 * F(1, 3) + F(1, 4)), ONE])
    assert not in_orbit_closure(p, other)


def test_normalize_examples():
    m = make_model((0, 3))
    T, pn = normalize(PeriodHom(m, [c(-2), c(4)]))
    assert T == ((F(1, 2), 0), (0, F(1, 2)))
    assert subgroup_closure(pn.peripheral_values()).generators == (ONE,)
    T, pn = normalize(PeriodHom(m, [c(-1), c(-2)]))
    assert T == ((1, 0), (0, 1))


def test_sphere_form_examples():
    assert sphere_form([ONE, c(-1)]) == [ONE, c(-1)]
    assert sphere_form([ONE, c(2), c(-3)]) == [ONE, c(2), c(-3)]
    with pytest.raises(PreconditionError):
        sphere_form([ONE, ONE, c(-1)])


def test_leaf_closure_cases(wp):
    m13, m12 = make_model((1, 3)), make_model((1, 2))
    lc = classify_leaf_closure(PeriodHom(m12, [ONE, I, ONE]))
    assert lc.case == "1" and "closed leaf" in lc.notes
    assert classify_leaf_closure(PeriodHom(m13, [c(SQRT2), I, ONE, c(0, SQRT2)])).case == "2"
    assert classify_leaf_closure(wp).case == "3a"
    assert classify_leaf_closure(PeriodHom(m13, [I, c(), ONE, c(SQRT2)])).case == "3b"
    lc = classify_leaf_closure(PeriodHom(m12, [c(F(1, 2), 1), c(SQRT2 * F(1, 3)), ONE]))
    assert lc.case == "3c" and lc.data["V"] == q(1, F(-1, 3))
    lc = classify_leaf_closure(PeriodHom(m12, [c(SQRT2, SQRT2), c(1, 1), ONE]))
    assert lc.case == "3d" and lc.data["beta"] == -1


def test_leaf_closure_unsupported_and_unnormalized(m13):
    with pytest.raises(UnsupportedCase):
        classify_leaf_closure(PeriodHom(m13, [c(F(1, 3)), c(F(1, 2)), c(-1), c(-2)]))
    with pytest.raises(PreconditionError):
        classify_leaf_closure(PeriodHom(m13, [c(SQRT2), c(F(1, 2)), c(-2), c(-4)]))


def test_modular_invariance_sample():
    m = make_model((1, 2))
    p = PeriodHom(m, [c(F(1, 2), 1), c(SQRT2 * F(1, 3)), ONE])
    rng = random.Random(11)
    for _ in range(30):
        pt = p.compose(random_modular_element(m, rng))
        assert image_closure(pt) == image_closure(p)
        assert v_invariant(pt) == v_invariant(p)
