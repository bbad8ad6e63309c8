import json
import random
from fractions import Fraction as F

import pytest

from isoflat import connect13 as c13
from isoflat import worked
from isoflat.chord import Butterfly, Octopus, arm_module, classify_13, make_octopus
from isoflat.homology import Submodule, add, module_translate, scale, star, sub
from isoflat.numbers import QuadExt
from isoflat.period import PreconditionError, UnsupportedCase

from conftest import SQRT2, butterfly13, lho13, period13, q


def sho13(pA, pB, v):
    """``SHO(A, B, -pi2-A-B | -pi1)``: head length 1, arms summing to ``v``."""
    p = period13(pA, pB, v)
    m = p.model
    A, B = m.vec(A=1), m.vec(B=1)
    c = scale(-1, add(m.peripheral(2), add(A, B)))
    return make_octopus(m, p, A, B, c, scale(-1, m.peripheral(1)))


def lin(*terms):
    out = (0, 0, 0, 0)
    for k, x in terms:
        out = add(out, scale(k, x))
    return out


def part2(bf):
    """Part-2 classes ``(A, B, C, D) = (b, a, d, c)`` of a classified butterfly."""
    a, b, c, d = bf.labels
    return b, a, d, c


# -- hypothesis and normalization -----------------------------------------------

def test_check_hypothesis(wp):
    assert c13.check_hypothesis(wp).is_identity()
    with pytest.raises(c13.HypothesisError):
        c13.check_hypothesis(period13(q(F(1, 3)), q(F(1, 2))))
    m = wp.model
    from isoflat.period import PeriodHom

    p = PeriodHom.from_labels(m, d=2, A=SQRT2, B=q(1), pi1=-2, pi2=3)
    norm = c13.check_hypothesis(p)
    assert not norm.is_identity()
    pn = norm.map_period(p)
    v1, v2, v3 = (pn.eval(m.peripheral(i)).re for i in (1, 2, 3))
    assert v1 == -1 and v2 <= v1 and v3 > 0


def test_normalization_json(wp):
    n = c13.Normalization((2, 1, 3), QuadExt(F(-1, 2), 0, 2))
    assert c13.Normalization.from_json(n.to_json(), 2) == n
    assert n.flip


# -- part 1 and part 2 ------------------------------------------------------------

def test_sho_branch1_single_move():
    sho = sho13(SQRT2 * F(1, 2), q(F(1, 2)), 2)
    assert sho.dec.length(2) < 1
    cert = c13.sho_to_butterfly(sho)
    assert cert.n_schiffer == 1 and len(cert) == 1
    assert isinstance(classify_13(cert.end), Butterfly)
    assert c13.verify(cert)


def test_sho_branch2_loop():
    sho = sho13(SQRT2, q(F(3, 2)), 5)
    assert all(sho.dec.length(i) > 1 for i in sho.arms)
    cert = c13.sho_to_butterfly(sho)
    assert cert.n_schiffer >= 2
    assert isinstance(classify_13(cert.end), Butterfly)
    assert c13.verify(cert)


def test_sho_needs_independent_arms():
    sho = sho13(q(F(3, 2)), q(F(5, 4)), 5)
    with pytest.raises(c13.HypothesisError):
        c13.sho_to_butterfly(sho)


def test_butterfly_one_move():
    bf = butterfly13(SQRT2 * F(1, 8), q(F(1, 2)), q(F(6, 5)))
    A, B, C, D = part2(bf)
    cert = c13.butterfly_to_lho(bf)
    assert len(cert) == 1
    o = classify_13(cert.end)
    assert o.large and o.labels == (sub(D, A), B, A, add(A, C))


def test_butterfly_fallback_q1():
    # p(A) = 1/2 + sqrt2/16, p(B) = 1/2: the q = 1 example at scale 1/2
    bf = butterfly13(q(F(1, 2)), q(F(1, 2), F(1, 16)), 2)
    A, B, C, D = part2(bf)
    cert = c13.butterfly_to_lho(bf)
    assert cert.n_schiffer == 2
    o = classify_13(cert.end)
    assert o.large and o.labels == (D, sub(scale(2, B), A), sub(A, B), add(A, C))
    assert c13.verify(cert)


# -- LHO1 -------------------------------------------------------------------------

def test_lho1_worked_example(m13, wlho):
    a, b, c, d = wlho.labels
    M = arm_module(wlho)
    L = wlho.dec.length
    assert L(3) - L(2) == q(F(5, 4), F(1, 4)) and L(1) + L(2) == q(1, F(-1, 4))
    cert = c13.lho1_step(wlho)
    assert cert.n_schiffer == 4 and c13.verify(cert)
    o = classify_13(cert.end)
    bc = add(b, c)
    k = 2
    want = (lin((k + 1, bc), (1, c), (-1, d)), a, lin((1, d), (-1, c), (-k, bc)), d)
    assert o.large and o.labels == want
    assert arm_module(o) == Submodule.span(list(want[:3])) == module_translate(m13, M, star(m13, M, a))


def test_lho1_less_case():
    o = lho13(SQRT2 * F(1, 8), q(F(1, 4)), q(F(6, 5)))
    a, b, c, d = o.labels
    L = o.dec.length
    assert L(3) - L(2) < L(1) + L(2)
    cert = c13.lho1_step(o)
    assert cert.n_schiffer == 2
    end = classify_13(cert.end)
    assert end.labels == (lin((1, b), (2, c), (-1, d)), a, sub(d, c), d)


def test_lho1_equal_case(m13):
    o = lho13(SQRT2 * F(1, 8), q(F(1, 2), F(-1, 4)), q(F(3, 2)))
    a, b, c, d = o.labels
    L = o.dec.length
    assert L(3) - L(2) == L(1) + L(2)
    cert = c13.lho1_step(o)
    assert cert.n_schiffer == 3 and c13.verify(cert)
    # the intermediate butterfly B(a, b+c | d-c-a, c+a)
    mid = classify_13(cert.states()[2])
    assert isinstance(mid, Butterfly)
    assert set(mid.labels) == {a, add(b, c), lin((1, d), (-1, c), (-1, a)), add(c, a)}
    end = classify_13(cert.end)
    assert end.large and end.d == d
    M = arm_module(o)
    assert arm_module(end) == module_translate(m13, M, star(m13, M, a))


def test_lho1_fuel(wlho):
    with pytest.raises(c13.FuelExhausted):
        c13.lho1_step(wlho, fuel=2)


# -- LHO2 and arm modules ------------------------------------------------------------

def test_lho2_primitive(m13, wp, wlho):
    M = arm_module(wlho)
    psi = star(m13, M, wlho.a)
    cert = c13.lho2_path(M, psi, wp)
    assert c13.verify(cert)
    assert cert.n_schiffer == 4
    assert arm_module(classify_13(cert.end)) == module_translate(m13, M, psi)


def test_lho2_non_primitive(m13, wp, wlho):
    M = arm_module(wlho)
    psi = (0, -2)
    cert = c13.lho2_path(M, psi, wp)
    assert c13.verify(cert)
    trace = cert.arm_trace()
    assert trace[0] == M and trace[-1] == module_translate(m13, M, psi)
    assert module_translate(m13, M, (0, -1)) in trace


def test_lho2_rejects_rational(m13):
    p = period13(SQRT2 * F(1, 4), q(F(1, 2)))
    M = Submodule.span([m13.vec(A=1), m13.vec(B=1), m13.peripheral(1)])
    # dual_to_cycle((1, 0)) = B and p_M(B) = 1/2
    with pytest.raises(PreconditionError, match="rational"):
        c13.lho2_path(M, (1, 0), p)


def test_connect_arm_modules(m13, wp, wlho):
    M = arm_module(wlho)
    assert c13.connect_arm_modules(M, M, wp) is None
    direct = c13.connect_arm_modules(M, module_translate(m13, M, (0, -1)), wp)
    assert c13.verify(direct) and direct.arm_trace()[-1] == module_translate(m13, M, (0, -1))
    # (1, 0) is B* up to sign, and p(B) = 1/4 is rational: auxiliary route
    target = module_translate(m13, M, (1, 0))
    aux = c13.connect_arm_modules(M, target, wp)
    assert c13.verify(aux)
    trace = aux.arm_trace()
    assert trace[0] == M and trace[-1] == target and len(trace) > 2


def test_module_difference(m13, wlho):
    M = arm_module(wlho)
    for psi in [(0, 1), (3, -2), (-1, 5)]:
        assert c13.module_difference(m13, M, module_translate(m13, M, psi)) == psi


# -- connect and verify -------------------------------------------------------------

def test_connect_same():
    x = worked.lho().dec
    cert = c13.connect(x, x)
    assert len(cert) == 0 and c13.verify(cert)


def test_connect_two_lhos(wlho):
    y = c13.lho1_step(wlho).end
    cert = c13.connect(wlho.dec, y)
    assert c13.verify(cert)


def test_connect_butterfly_to_sho(wp):
    rng = random.Random(2)
    start = worked.lho().dec
    bf = sho = None
    while bf is None or sho is None:
        dec = worked.random_walk(start, rng.randint(1, 8), rng)
        o = classify_13(dec)
        if isinstance(o, Butterfly) and bf is None:
            bf = dec
        elif isinstance(o, Octopus) and not o.large and sho is None:
            sho = dec
    cert = c13.connect(bf, sho)
    assert c13.verify(cert)
    assert cert.start == bf and cert.end == sho


def test_connect_renumbered(wlho):
    # present the worked example with swapped, rescaled and reversed poles
    n = c13.Normalization((2, 1, 3), QuadExt(F(-1, 2), 0, 2))
    x = n.map_decorated(wlho.dec)
    y = n.map_decorated(c13.lho1_step(wlho).end)
    cert = c13.connect(x, y)
    assert cert.normalization is not None
    assert c13.verify(cert)
    back = c13.Certificate.from_json(json.loads(json.dumps(cert.to_json())))
    assert c13.verify(back)


def test_connect_errors(wlho):
    other = lho13(SQRT2 * F(1, 4), q(F(1, 5))).dec
    with pytest.raises(PreconditionError, match="periods differ at class B"):
        c13.connect(wlho.dec, other)
    rat = lho13(q(F(1, 3)), q(F(1, 5))).dec
    with pytest.raises(UnsupportedCase):
        c13.connect(rat, rat)


def test_verify_detects_tampering(wlho):
    cert = c13.lho1_step(wlho)
    obj = cert.to_json()
    obj["steps"][1]["central"] = obj["steps"][1]["long"]
    res = c13.verify(c13.Certificate.from_json(obj))
    assert not res and res.step == 1 and "step 1" in str(res)
    obj = cert.to_json()
    obj["end"]["classes"][0][0] += 1
    res = c13.verify(c13.Certificate.from_json(obj))
    assert not res and res.step == len(cert)


def test_verify_rejects_head_change(wp, wlho, m13):
    A, B = m13.vec(A=1), m13.vec(B=1)
    c = scale(-1, add(m13.peripheral(2), add(A, B)))
    sho = make_octopus(m13, wp, A, B, c, scale(-1, m13.peripheral(1)))
    step = c13.ArmEquivalenceStep(sho.dec, arm_module(sho), sho.d)
    cert = c13.Certificate(m13, wp, wlho.dec, sho.dec, [step])
    res = c13.verify(cert)
    assert not res and res.step == 0 and "heads" in res.message


def test_certificate_json_and_schema(wlho):
    cert = c13.lho1_step(wlho)
    obj = json.loads(json.dumps(cert.to_json()))
    assert c13.verify(c13.Certificate.from_json(obj))
    assert c13.Certificate.from_json(obj).to_json() == obj
    obj["schema"] = 99
    with pytest.raises(c13.SchemaError):
        c13.Certificate.from_json(obj)


def test_reversed_certificate(wlho):
    cert = c13.lho1_step(wlho)
    rev = cert.reversed()
    assert c13.verify(rev)
    assert rev.start == cert.end and rev.end == cert.start
